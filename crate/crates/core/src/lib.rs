//! Diverse solutions for vertex problems on graphs given with a cliquewidth
//! decomposition.

pub mod engine;
pub mod graph;
pub mod measures;
pub mod vertex_set;
pub mod problems;
pub mod mso;
pub mod oracle;
pub mod corpus;
pub mod cli;
