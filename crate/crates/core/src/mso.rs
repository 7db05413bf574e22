//! MSO₁ formulas over colored graphs: parsing, partial evaluation trees,
//! model checking along a cliquewidth decomposition, and compilation of
//! vertex-problem formulas into monotone cores.
//!
//! Reduced trees live in a hash-consing [`Arena`]: two trees get the same
//! [`TreeId`] iff they are equal after merging identical sibling subtrees.
//! Each tree also carries a structural fingerprint that does not depend on
//! the order in which trees were created.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::engine::{DpCore, Entry, Transition};
use crate::graph::{Color, ColoredGraph, CwDecomposition, Node, NodeId};
use crate::vertex_set::VertexSet;

pub const MAX_QUANTIFIERS: usize = 6;
pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MsoError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("formula is not in prenex form")]
    NotPrenex,
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("free variable `{0}`")]
    FreeVariable(String),
    #[error("`{0}` is used with the wrong kind")]
    Kind(String),
    #[error("{0} quantifiers exceed the limit of {MAX_QUANTIFIERS}")]
    TooManyQuantifiers(usize),
    #[error("tree arena exceeded its budget of {0} nodes")]
    Budget(usize),
    #[error("not a vertex problem: {0}")]
    NotVertexProblem(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quant {
    Exists,
    Forall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Set,
    Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantifier {
    pub quant: Quant,
    pub kind: VarKind,
    pub name: String,
}

/// Quantifier-free matrix. Variables are prefix positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Matrix {
    Const(bool),
    Adj(usize, usize),
    Eq(usize, usize),
    In(usize, usize),
    Not(Box<Matrix>),
    And(Box<Matrix>, Box<Matrix>),
    Or(Box<Matrix>, Box<Matrix>),
    Implies(Box<Matrix>, Box<Matrix>),
}

impl Matrix {
    pub fn eval(&self, atom: &mut impl FnMut(&Matrix) -> bool) -> bool {
        match self {
            Matrix::Const(b) => *b,
            Matrix::Not(a) => !a.eval(atom),
            Matrix::And(a, b) => a.eval(atom) && b.eval(atom),
            Matrix::Or(a, b) => a.eval(atom) || b.eval(atom),
            Matrix::Implies(a, b) => !a.eval(atom) || b.eval(atom),
            _ => atom(self),
        }
    }
}

/// A closed prenex formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub prefix: Vec<Quantifier>,
    pub matrix: Matrix,
    // Position of each prefix variable among the variables of its kind.
    ordinal: Vec<usize>,
}

impl Formula {
    pub fn new(prefix: Vec<Quantifier>, matrix: Matrix) -> Self {
        let mut counts = [0usize; 2];
        let ordinal = prefix
            .iter()
            .map(|q| {
                let c = &mut counts[q.kind as usize];
                *c += 1;
                *c - 1
            })
            .collect();
        Self { prefix, matrix, ordinal }
    }

    pub fn q(&self) -> usize {
        self.prefix.len()
    }

    pub fn q_v(&self) -> usize {
        self.prefix.iter().filter(|q| q.kind == VarKind::Vertex).count()
    }

    pub fn q_s(&self) -> usize {
        self.q() - self.q_v()
    }

    /// Index of prefix variable `i` among variables of the same kind.
    pub fn ordinal(&self, i: usize) -> usize {
        self.ordinal[i]
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.prefix {
            let quant = match q.quant {
                Quant::Exists => "exists",
                Quant::Forall => "forall",
            };
            let kind = match q.kind {
                VarKind::Set => "set",
                VarKind::Vertex => "vertex",
            };
            write!(f, "{quant} {kind} {} ", q.name)?;
        }
        write!(f, ": ")?;
        fn go(m: &Matrix, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match m {
                Matrix::Const(b) => write!(f, "{b}"),
                Matrix::Adj(x, y) => write!(f, "adj({},{})", names[*x], names[*y]),
                Matrix::Eq(x, y) => write!(f, "{} = {}", names[*x], names[*y]),
                Matrix::In(x, s) => write!(f, "{} in {}", names[*x], names[*s]),
                Matrix::Not(a) => {
                    write!(f, "!(")?;
                    go(a, names, f)?;
                    write!(f, ")")
                }
                Matrix::And(a, b) | Matrix::Or(a, b) | Matrix::Implies(a, b) => {
                    let op = match m {
                        Matrix::And(..) => "&",
                        Matrix::Or(..) => "|",
                        _ => "->",
                    };
                    write!(f, "(")?;
                    go(a, names, f)?;
                    write!(f, " {op} ")?;
                    go(b, names, f)?;
                    write!(f, ")")
                }
            }
        }
        let names: Vec<String> = self.prefix.iter().map(|q| q.name.clone()).collect();
        go(&self.matrix, &names, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Not,
    And,
    Or,
    Arrow,
    Equals,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, MsoError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '=' => Tok::Equals,
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_owned())
            }
            _ => {
                return Err(MsoError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: HashMap<String, (usize, VarKind)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, MsoError> {
        Err(MsoError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), MsoError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, MsoError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn var(&mut self, kind: VarKind) -> Result<usize, MsoError> {
        let name = self.ident()?;
        match self.vars.get(&name) {
            None => Err(MsoError::FreeVariable(name)),
            Some(&(i, k)) if k == kind => Ok(i),
            Some(_) => Err(MsoError::Kind(name)),
        }
    }

    // implication := disjunction ("->" implication)?
    fn implication(&mut self) -> Result<Matrix, MsoError> {
        let a = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let b = self.implication()?;
            return Ok(Matrix::Implies(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn disjunction(&mut self) -> Result<Matrix, MsoError> {
        let mut a = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            a = Matrix::Or(Box::new(a), Box::new(self.conjunction()?));
        }
        Ok(a)
    }

    fn conjunction(&mut self) -> Result<Matrix, MsoError> {
        let mut a = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            a = Matrix::And(Box::new(a), Box::new(self.unary()?));
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Matrix, MsoError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Matrix::Not(Box::new(self.unary()?)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let m = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(m)
            }
            Some(Tok::Ident(s)) if s == "true" || s == "false" => {
                let b = s == "true";
                self.pos += 1;
                Ok(Matrix::Const(b))
            }
            Some(Tok::Ident(s)) if s == "exists" || s == "forall" => Err(MsoError::NotPrenex),
            Some(Tok::Ident(s)) if s == "adj" && self.toks.get(self.pos + 1).map(|t| &t.1) == Some(&Tok::LParen) => {
                self.pos += 2;
                let x = self.var(VarKind::Vertex)?;
                self.expect(Tok::Comma, "`,`")?;
                let y = self.var(VarKind::Vertex)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Matrix::Adj(x, y))
            }
            Some(Tok::Ident(_)) => {
                let x = self.var(VarKind::Vertex)?;
                match self.peek() {
                    Some(Tok::Equals) => {
                        self.pos += 1;
                        Ok(Matrix::Eq(x, self.var(VarKind::Vertex)?))
                    }
                    Some(Tok::Ident(s)) if s == "in" => {
                        self.pos += 1;
                        Ok(Matrix::In(x, self.var(VarKind::Set)?))
                    }
                    _ => self.err("expected `=` or `in`"),
                }
            }
            _ => self.err("expected an atom"),
        }
    }
}

/// Parses `(exists|forall) (set|vertex) NAME ... : matrix`.
pub fn parse_formula(text: &str) -> Result<Formula, MsoError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        vars: HashMap::new(),
    };
    let mut prefix = Vec::new();
    loop {
        let quant = match p.peek() {
            Some(Tok::Ident(s)) if s == "exists" => Quant::Exists,
            Some(Tok::Ident(s)) if s == "forall" => Quant::Forall,
            Some(Tok::Colon) => {
                p.pos += 1;
                break;
            }
            _ => return p.err("expected a quantifier or `:`"),
        };
        p.pos += 1;
        let kind = match p.peek() {
            Some(Tok::Ident(s)) if s == "set" => VarKind::Set,
            Some(Tok::Ident(s)) if s == "vertex" => VarKind::Vertex,
            _ => {
                if p.toks[p.pos..].iter().any(|t| t.1 == Tok::LParen) {
                    // A quantifier nested under parentheses.
                    let nested = p.toks[p.pos..]
                        .iter()
                        .any(|t| matches!(&t.1, Tok::Ident(s) if s == "exists" || s == "forall"));
                    if nested {
                        return Err(MsoError::NotPrenex);
                    }
                }
                return p.err("expected `set` or `vertex`");
            }
        };
        p.pos += 1;
        let name = p.ident()?;
        if ["set", "vertex", "in", "adj", "exists", "forall", "true", "false"].contains(&name.as_str()) {
            return p.err(format!("`{name}` is reserved"));
        }
        if p.vars.insert(name.clone(), (prefix.len(), kind)).is_some() {
            return Err(MsoError::DuplicateVariable(name));
        }
        prefix.push(Quantifier { quant, kind, name });
    }
    let matrix = p.implication()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(Formula::new(prefix, matrix))
}

/// Marker for an individual variable whose value lies outside the graph.
pub const EXT: u8 = u8::MAX;

/// Isomorphism data of one leaf of an evaluation tree: the subgraph induced
/// on the assigned vertices (slots, ordered by first referencing variable),
/// their colors, and the variable assignments restricted to the slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    colors: Vec<Color>,
    adj: Vec<u8>,
    ind: Vec<u8>,
    sets: Vec<u8>,
}

impl Config {
    /// Restricts a full assignment (`None` = external) to its slots.
    pub fn from_assignment(g: &ColoredGraph, ind: &[Option<usize>], sets: &[VertexSet]) -> Self {
        let mut slots: Vec<usize> = Vec::new();
        let ind: Vec<u8> = ind
            .iter()
            .map(|x| match x {
                None => EXT,
                Some(v) => match slots.iter().position(|s| s == v) {
                    Some(i) => i as u8,
                    None => {
                        slots.push(*v);
                        (slots.len() - 1) as u8
                    }
                },
            })
            .collect();
        let colors = slots.iter().map(|&v| g.color(v)).collect();
        let adj = slots
            .iter()
            .map(|&v| {
                slots
                    .iter()
                    .enumerate()
                    .filter(|(_, &u)| g.has_edge(v, u))
                    .fold(0u8, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let sets = sets
            .iter()
            .map(|s| {
                slots
                    .iter()
                    .enumerate()
                    .filter(|(_, &u)| s.contains(u))
                    .fold(0u8, |m, (i, _)| m | 1 << i)
            })
            .collect();
        Self { colors, adj, ind, sets }
    }

    fn bytes(&self) -> Vec<u8> {
        let mut out = vec![self.colors.len() as u8];
        for c in &self.colors {
            out.extend_from_slice(&c.to_be_bytes());
        }
        out.extend_from_slice(&self.adj);
        out.extend_from_slice(&self.ind);
        out.extend_from_slice(&self.sets);
        out
    }

    pub fn slot_count(&self) -> usize {
        self.colors.len()
    }

    /// Disjoint union of configurations of two disjoint graphs. Every
    /// individual variable must be external on at least one side.
    pub fn product(&self, other: &Config) -> Config {
        assert_eq!(self.ind.len(), other.ind.len());
        let mut map: Vec<(bool, u8)> = Vec::new();
        let ind: Vec<u8> = self
            .ind
            .iter()
            .zip(&other.ind)
            .map(|(&a, &b)| {
                assert!(a == EXT || b == EXT, "individual variable assigned on both sides");
                let key = if a != EXT {
                    (false, a)
                } else if b != EXT {
                    (true, b)
                } else {
                    return EXT;
                };
                match map.iter().position(|k| *k == key) {
                    Some(i) => i as u8,
                    None => {
                        map.push(key);
                        (map.len() - 1) as u8
                    }
                }
            })
            .collect();
        let side = |right: bool| if right { other } else { self };
        let colors = map.iter().map(|&(r, s)| side(r).colors[s as usize]).collect();
        let adj = map
            .iter()
            .map(|&(r, s)| {
                map.iter().enumerate().fold(0u8, |m, (j, &(r2, s2))| {
                    if r == r2 && side(r).adj[s as usize] >> s2 & 1 == 1 {
                        m | 1 << j
                    } else {
                        m
                    }
                })
            })
            .collect();
        let sets = (0..self.sets.len())
            .map(|k| {
                map.iter().enumerate().fold(0u8, |m, (j, &(r, s))| {
                    if side(r).sets[k] >> s & 1 == 1 {
                        m | 1 << j
                    } else {
                        m
                    }
                })
            })
            .collect();
        Config { colors, adj, ind, sets }
    }

    pub fn recolor(&self, from: Color, to: Color) -> Config {
        let mut c = self.clone();
        for x in &mut c.colors {
            if *x == from {
                *x = to;
            }
        }
        c
    }

    pub fn add_edges(&self, a: Color, b: Color) -> Config {
        let mut c = self.clone();
        let n = c.colors.len();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (c.colors[i], c.colors[j]);
                if i != j && ((x == a && y == b) || (x == b && y == a)) {
                    c.adj[i] |= 1 << j;
                }
            }
        }
        c
    }

    /// Evaluates the matrix. All individual variables must be assigned.
    pub fn satisfies(&self, f: &Formula) -> bool {
        let slot = |i: usize| {
            let s = self.ind[f.ordinal(i)];
            assert_ne!(s, EXT, "matrix evaluated with an external variable");
            s
        };
        f.matrix.eval(&mut |atom| match *atom {
            Matrix::Adj(x, y) => self.adj[slot(x) as usize] >> slot(y) & 1 == 1,
            Matrix::Eq(x, y) => slot(x) == slot(y),
            Matrix::In(x, s) => self.sets[f.ordinal(s)] >> slot(x) & 1 == 1,
            _ => unreachable!(),
        })
    }

    fn has_ext(&self) -> bool {
        self.ind.contains(&EXT)
    }
}

/// An explicit (unreduced) partial evaluation tree. A node at level `i`
/// fixes `z_1, ..., z_i`; leaves sit at level `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTree {
    pub level: usize,
    /// The individual variable chosen at this level is external.
    pub ext: bool,
    pub config: Option<Config>,
    pub children: Vec<PartialTree>,
}

impl PartialTree {
    /// The full partial tree of `g` below a node at `level` with the given
    /// choices for the first `level` variables.
    pub fn build(
        f: &Formula,
        g: &ColoredGraph,
        level: usize,
        ind: &mut Vec<Option<usize>>,
        sets: &mut Vec<VertexSet>,
        ext: bool,
    ) -> PartialTree {
        if level == f.q() {
            return PartialTree {
                level,
                ext,
                config: Some(Config::from_assignment(g, ind, sets)),
                children: Vec::new(),
            };
        }
        let n = g.vertex_count();
        let mut children = Vec::new();
        match f.prefix[level].kind {
            VarKind::Set => {
                assert!(n < 20, "too many vertices for an explicit tree");
                for mask in 0u32..1 << n {
                    sets.push((0..n).filter(|v| mask >> v & 1 == 1).collect());
                    children.push(Self::build(f, g, level + 1, ind, sets, false));
                    sets.pop();
                }
            }
            VarKind::Vertex => {
                for v in (0..n).map(Some).chain([None]) {
                    ind.push(v);
                    children.push(Self::build(f, g, level + 1, ind, sets, v.is_none()));
                    ind.pop();
                }
            }
        }
        PartialTree {
            level,
            ext,
            config: None,
            children,
        }
    }

    /// The full partial tree of `g`, rooted at level 0.
    pub fn full(f: &Formula, g: &ColoredGraph) -> PartialTree {
        Self::build(f, g, 0, &mut Vec::new(), &mut Vec::new(), false)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(PartialTree::size).sum::<usize>()
    }

    /// Product of trees of two disjoint graphs.
    pub fn product(&self, other: &PartialTree, f: &Formula) -> PartialTree {
        assert_eq!(self.level, other.level, "product of trees at different levels");
        let ext = self.ext && other.ext;
        if let (Some(a), Some(b)) = (&self.config, &other.config) {
            return PartialTree {
                level: self.level,
                ext,
                config: Some(a.product(b)),
                children: Vec::new(),
            };
        }
        let children = match f.prefix[self.level].kind {
            VarKind::Set => self
                .children
                .iter()
                .flat_map(|a| other.children.iter().map(move |b| a.product(b, f)))
                .collect(),
            VarKind::Vertex => {
                let ea = self.children.iter().find(|c| c.ext).expect("external child");
                let eb = other.children.iter().find(|c| c.ext).expect("external child");
                let mut out: Vec<PartialTree> = self
                    .children
                    .iter()
                    .filter(|c| !c.ext)
                    .map(|a| a.product(eb, f))
                    .collect();
                out.extend(other.children.iter().filter(|c| !c.ext).map(|b| ea.product(b, f)));
                out.push(ea.product(eb, f));
                out
            }
        };
        PartialTree {
            level: self.level,
            ext,
            config: None,
            children,
        }
    }

    /// Evaluates with external branches removed.
    pub fn eval(&self, f: &Formula) -> bool {
        if let Some(c) = &self.config {
            return c.satisfies(f);
        }
        let mut kids = self.children.iter().filter(|c| !c.ext).map(|c| c.eval(f));
        match f.prefix[self.level].quant {
            Quant::Exists => kids.any(|x| x),
            Quant::Forall => kids.all(|x| x),
        }
    }
}

/// Handle of a reduced tree in an [`Arena`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeId(u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Shape {
    Leaf(u32),
    Inner(u8, Vec<TreeId>),
}

struct TreeNode {
    shape: Shape,
    level: usize,
    ext: bool,
    fingerprint: [u8; 32],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Recolor(Color, Color),
    AddEdges(Color, Color),
}

/// Hash-consing store of reduced trees for one formula.
pub struct Arena {
    formula: Formula,
    budget: usize,
    configs: Vec<Config>,
    config_ids: HashMap<Config, u32>,
    nodes: Vec<TreeNode>,
    ids: HashMap<Shape, TreeId>,
    products: HashMap<(TreeId, TreeId), TreeId>,
    maps: HashMap<(Op, TreeId), TreeId>,
    evals: HashMap<TreeId, bool>,
}

impl Arena {
    pub fn new(formula: Formula) -> Result<Self, MsoError> {
        Self::with_budget(formula, DEFAULT_BUDGET)
    }

    pub fn with_budget(formula: Formula, budget: usize) -> Result<Self, MsoError> {
        if formula.q() > MAX_QUANTIFIERS {
            return Err(MsoError::TooManyQuantifiers(formula.q()));
        }
        Ok(Self {
            formula,
            budget,
            configs: Vec::new(),
            config_ids: HashMap::new(),
            nodes: Vec::new(),
            ids: HashMap::new(),
            products: HashMap::new(),
            maps: HashMap::new(),
            evals: HashMap::new(),
        })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn level(&self, t: TreeId) -> usize {
        self.nodes[t.0 as usize].level
    }

    pub fn is_ext(&self, t: TreeId) -> bool {
        self.nodes[t.0 as usize].ext
    }

    pub fn fingerprint(&self, t: TreeId) -> [u8; 32] {
        self.nodes[t.0 as usize].fingerprint
    }

    /// Children of an inner tree, sorted and without duplicates.
    pub fn children(&self, t: TreeId) -> &[TreeId] {
        match &self.nodes[t.0 as usize].shape {
            Shape::Leaf(_) => &[],
            Shape::Inner(_, c) => c,
        }
    }

    pub fn config(&self, t: TreeId) -> Option<&Config> {
        match &self.nodes[t.0 as usize].shape {
            Shape::Leaf(c) => Some(&self.configs[*c as usize]),
            Shape::Inner(..) => None,
        }
    }

    fn insert(&mut self, shape: Shape, level: usize, ext: bool, fingerprint: [u8; 32]) -> Result<TreeId, MsoError> {
        if let Some(&id) = self.ids.get(&shape) {
            return Ok(id);
        }
        if self.nodes.len() >= self.budget {
            return Err(MsoError::Budget(self.budget));
        }
        let id = TreeId(self.nodes.len() as u32);
        self.nodes.push(TreeNode {
            shape: shape.clone(),
            level,
            ext,
            fingerprint,
        });
        self.ids.insert(shape, id);
        Ok(id)
    }

    fn leaf(&mut self, config: Config) -> Result<TreeId, MsoError> {
        let q = self.formula.q();
        let ext = q > 0 && self.formula.prefix[q - 1].kind == VarKind::Vertex && {
            let var = self.formula.ordinal(q - 1);
            config.ind[var] == EXT
        };
        let mut h = Sha256::new();
        h.update(b"L");
        h.update(config.bytes());
        let fp = h.finalize().into();
        let cid = match self.config_ids.get(&config) {
            Some(&c) => c,
            None => {
                let c = self.configs.len() as u32;
                self.configs.push(config.clone());
                self.config_ids.insert(config, c);
                c
            }
        };
        self.insert(Shape::Leaf(cid), q, ext, fp)
    }

    fn inner(&mut self, level: usize, mut children: Vec<TreeId>) -> Result<TreeId, MsoError> {
        assert!(!children.is_empty());
        children.sort();
        children.dedup();
        let ext = level > 0 && self.formula.prefix[level - 1].kind == VarKind::Vertex && {
            // Every leaf below agrees on the variable chosen here.
            let mut t = children[0];
            while let Shape::Inner(_, c) = &self.nodes[t.0 as usize].shape {
                t = c[0];
            }
            let var = self.formula.ordinal(level - 1);
            self.config(t).expect("leaf").ind[var] == EXT
        };
        let mut fps: Vec<[u8; 32]> = children.iter().map(|c| self.fingerprint(*c)).collect();
        fps.sort();
        let mut h = Sha256::new();
        h.update(b"N");
        h.update([level as u8]);
        for fp in &fps {
            h.update(fp);
        }
        let fp = h.finalize().into();
        self.insert(Shape::Inner(level as u8, children), level, ext, fp)
    }

    /// Reduces an explicit tree: identical sibling subtrees collapse.
    pub fn reduce(&mut self, t: &PartialTree) -> Result<TreeId, MsoError> {
        match &t.config {
            Some(c) => self.leaf(c.clone()),
            None => {
                let children = t
                    .children
                    .iter()
                    .map(|c| self.reduce(c))
                    .collect::<Result<Vec<_>, _>>()?;
                self.inner(t.level, children)
            }
        }
    }

    /// The reduced tree as an explicit tree.
    pub fn expand(&self, t: TreeId) -> PartialTree {
        PartialTree {
            level: self.level(t),
            ext: self.is_ext(t),
            config: self.config(t).cloned(),
            children: self.children(t).iter().map(|c| self.expand(*c)).collect(),
        }
    }

    /// Reduced tree of a one-vertex graph, below a node at `level` whose
    /// earlier choices are given (the vertex has index 0).
    pub fn vertex_tree(
        &mut self,
        color: Color,
        level: usize,
        ind: &[Option<usize>],
        sets: &[VertexSet],
    ) -> Result<TreeId, MsoError> {
        let g = ColoredGraph::new(vec!["v".into()], vec![color], &[]);
        let ext = level > 0 && self.formula.prefix[level - 1].kind == VarKind::Vertex && ind.last() == Some(&None);
        let t = PartialTree::build(&self.formula, &g, level, &mut ind.to_vec(), &mut sets.to_vec(), ext);
        self.reduce(&t)
    }

    /// Reduced full partial tree of the graph `intro(v, color)`.
    pub fn leaf_tree(&mut self, color: Color) -> Result<TreeId, MsoError> {
        self.vertex_tree(color, 0, &[], &[])
    }

    /// Reduced product of two reduced trees at the same level.
    pub fn product(&mut self, a: TreeId, b: TreeId) -> Result<TreeId, MsoError> {
        if let Some(&t) = self.products.get(&(a, b)) {
            return Ok(t);
        }
        let level = self.level(a);
        assert_eq!(level, self.level(b), "product of trees at different levels");
        let t = if level == self.formula.q() {
            let c = self.config(a).expect("leaf").product(self.config(b).expect("leaf"));
            self.leaf(c)?
        } else {
            let ca = self.children(a).to_vec();
            let cb = self.children(b).to_vec();
            let mut children = Vec::new();
            match self.formula.prefix[level].kind {
                VarKind::Set => {
                    for &x in &ca {
                        for &y in &cb {
                            children.push(self.product(x, y)?);
                        }
                    }
                }
                VarKind::Vertex => {
                    let ea = *ca.iter().find(|c| self.is_ext(**c)).expect("external child");
                    let eb = *cb.iter().find(|c| self.is_ext(**c)).expect("external child");
                    let xs: Vec<TreeId> = ca.iter().copied().filter(|c| !self.is_ext(*c)).collect();
                    let ys: Vec<TreeId> = cb.iter().copied().filter(|c| !self.is_ext(*c)).collect();
                    for x in xs {
                        children.push(self.product(x, eb)?);
                    }
                    for y in ys {
                        children.push(self.product(ea, y)?);
                    }
                    children.push(self.product(ea, eb)?);
                }
            }
            self.inner(level, children)?
        };
        self.products.insert((a, b), t);
        Ok(t)
    }

    fn map(&mut self, t: TreeId, op: Op) -> Result<TreeId, MsoError> {
        if let Some(&r) = self.maps.get(&(op, t)) {
            return Ok(r);
        }
        let r = match self.config(t) {
            Some(c) => {
                let c = match op {
                    Op::Recolor(a, b) => c.recolor(a, b),
                    Op::AddEdges(a, b) => c.add_edges(a, b),
                };
                self.leaf(c)?
            }
            None => {
                let children = self.children(t).to_vec();
                let mapped = children
                    .into_iter()
                    .map(|c| self.map(c, op))
                    .collect::<Result<Vec<_>, _>>()?;
                self.inner(self.level(t), mapped)?
            }
        };
        self.maps.insert((op, t), r);
        Ok(r)
    }

    pub fn recolor(&mut self, t: TreeId, from: Color, to: Color) -> Result<TreeId, MsoError> {
        self.map(t, Op::Recolor(from, to))
    }

    pub fn add_edges(&mut self, t: TreeId, a: Color, b: Color) -> Result<TreeId, MsoError> {
        self.map(t, Op::AddEdges(a, b))
    }

    /// Evaluates with external branches removed, quantifying from the
    /// tree's level on.
    pub fn eval(&mut self, t: TreeId) -> bool {
        if let Some(&b) = self.evals.get(&t) {
            return b;
        }
        let value = match self.config(t) {
            Some(c) => !c.has_ext() && c.satisfies(&self.formula),
            None => {
                let level = self.level(t);
                let kids: Vec<TreeId> = self.children(t).iter().copied().filter(|c| !self.is_ext(*c)).collect();
                match self.formula.prefix[level].quant {
                    Quant::Exists => kids.into_iter().any(|c| self.eval(c)),
                    Quant::Forall => kids.into_iter().all(|c| self.eval(c)),
                }
            }
        };
        self.evals.insert(t, value);
        value
    }

    /// The reduced tree of every decomposition node, bottom-up.
    pub fn node_trees(&mut self, d: &CwDecomposition) -> Result<Vec<TreeId>, MsoError> {
        let mut trees = vec![TreeId(u32::MAX); d.len()];
        for t in d.post_order() {
            trees[t.0] = match d.node(t) {
                Node::Intro { color, .. } => self.leaf_tree(*color)?,
                Node::Union(l, r) => self.product(trees[l.0], trees[r.0])?,
                Node::Recolor { child, from, to } => self.recolor(trees[child.0], *from, *to)?,
                Node::AddEdges { child, a, b } => self.add_edges(trees[child.0], *a, *b)?,
            };
        }
        Ok(trees)
    }
}

/// Decides whether the graph of `d` satisfies the closed formula `f`.
pub fn model_check(f: &Formula, d: &CwDecomposition) -> Result<bool, MsoError> {
    let mut arena = Arena::new(f.clone())?;
    let trees = arena.node_trees(d)?;
    Ok(arena.eval(trees[d.root().0]))
}

const TAG_INNER: u8 = 0x00;
const TAG_EMPTY: u8 = 0x01;
const TAG_VERTEX: u8 = 0x02;

/// Monotone core of the vertex problem `{S : G ⊨ Φ'(S)}` for a formula
/// `∃ set S Φ'`. Entries are classes of trees for a fixed choice of `S`.
pub struct MsoCore {
    process: Vec<Vec<Transition>>,
    accept: BTreeSet<Entry>,
    arena_nodes: usize,
}

impl MsoCore {
    pub fn new(f: &Formula, d: &CwDecomposition) -> Result<Self, MsoError> {
        Self::with_budget(f, d, DEFAULT_BUDGET)
    }

    pub fn with_budget(f: &Formula, d: &CwDecomposition, budget: usize) -> Result<Self, MsoError> {
        match f.prefix.first() {
            Some(Quantifier {
                quant: Quant::Exists,
                kind: VarKind::Set,
                ..
            }) => {}
            _ => return Err(MsoError::NotVertexProblem("the first quantifier must be `exists set`")),
        }
        if f.q_v() == 0 {
            return Err(MsoError::NotVertexProblem("at least one vertex variable is required"));
        }
        let mut arena = Arena::with_budget(f.clone(), budget)?;
        let entry = |arena: &Arena, tag: u8, t: TreeId| {
            let mut b = vec![tag];
            b.extend_from_slice(&arena.fingerprint(t));
            Entry::new(b)
        };
        let mut states: Vec<BTreeMap<Entry, TreeId>> = vec![BTreeMap::new(); d.len()];
        let mut process = vec![Vec::new(); d.len()];
        for t in d.post_order() {
            let mut out: Vec<(Entry, TreeId, Vec<Entry>)> = Vec::new();
            match d.node(t) {
                Node::Intro { color, .. } => {
                    for (tag, s) in [(TAG_EMPTY, VertexSet::new()), (TAG_VERTEX, VertexSet::singleton(0))] {
                        let tree = arena.vertex_tree(*color, 1, &[], &[s])?;
                        out.push((entry(&arena, tag, tree), tree, vec![]));
                    }
                }
                Node::Union(l, r) => {
                    let left: Vec<(Entry, TreeId)> = states[l.0].iter().map(|(e, t)| (e.clone(), *t)).collect();
                    let right: Vec<(Entry, TreeId)> = states[r.0].iter().map(|(e, t)| (e.clone(), *t)).collect();
                    for (ea, a) in &left {
                        for (eb, b) in &right {
                            let tree = arena.product(*a, *b)?;
                            out.push((entry(&arena, TAG_INNER, tree), tree, vec![ea.clone(), eb.clone()]));
                        }
                    }
                }
                Node::Recolor { child, from, to } => {
                    for (e, c) in states[child.0].clone() {
                        let tree = arena.recolor(c, *from, *to)?;
                        out.push((entry(&arena, TAG_INNER, tree), tree, vec![e]));
                    }
                }
                Node::AddEdges { child, a, b } => {
                    for (e, c) in states[child.0].clone() {
                        let tree = arena.add_edges(c, *a, *b)?;
                        out.push((entry(&arena, TAG_INNER, tree), tree, vec![e]));
                    }
                }
            }
            let mut trans = Vec::with_capacity(out.len());
            for (e, tree, children) in out {
                states[t.0].insert(e.clone(), tree);
                trans.push(Transition { entry: e, children });
            }
            trans.sort();
            trans.dedup();
            process[t.0] = trans;
        }
        let accept = states[d.root().0]
            .iter()
            .filter(|(_, t)| arena.eval(**t))
            .map(|(e, _)| e.clone())
            .collect();
        Ok(Self {
            process,
            accept,
            arena_nodes: arena.len(),
        })
    }

    /// Number of reduced trees created while building the core.
    pub fn arena_nodes(&self) -> usize {
        self.arena_nodes
    }
}

impl DpCore for MsoCore {
    fn process(&self, t: NodeId) -> &[Transition] {
        &self.process[t.0]
    }

    fn accepts(&self, e: &Entry) -> bool {
        self.accept.contains(e)
    }

    fn rho(&self, e: &Entry) -> Option<bool> {
        match e.bytes().first() {
            Some(&TAG_EMPTY) => Some(false),
            Some(&TAG_VERTEX) => Some(true),
            _ => None,
        }
    }
}
