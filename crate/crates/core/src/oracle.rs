//! Exhaustive ground truth for small graphs.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::ColoredGraph;
use crate::measures::{div_min, venn_div, MeasureError, VennMeasure};
use crate::mso::{Formula, Matrix, Quant, VarKind};
use crate::vertex_set::VertexSet;

pub const MAX_VERTICES: usize = 20;
pub const TUPLE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {0} vertices; the oracle handles at most {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("{0} tuples exceed the oracle budget of {TUPLE_BUDGET}")]
    Budget(u64),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("formula does not start with `exists set`")]
    NotVertexProblem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemSpec {
    VertexCover(usize),
    DominatingSet(usize),
    MinimalDominatingSet,
    Mso(Formula),
}

fn is_vertex_cover(g: &ColoredGraph, s: &VertexSet) -> bool {
    g.edges().iter().all(|&(a, b)| s.contains(a) || s.contains(b))
}

fn is_dominating(g: &ColoredGraph, s: &VertexSet) -> bool {
    (0..g.vertex_count()).all(|v| s.contains(v) || !g.neighbors(v).is_disjoint(s))
}

/// Checks `(G, S) ∈ P`.
pub fn is_solution(spec: &ProblemSpec, g: &ColoredGraph, s: &VertexSet) -> Result<bool, OracleError> {
    Ok(match spec {
        ProblemSpec::VertexCover(k) => s.len() <= *k && is_vertex_cover(g, s),
        ProblemSpec::DominatingSet(k) => s.len() <= *k && is_dominating(g, s),
        ProblemSpec::MinimalDominatingSet => {
            is_dominating(g, s)
                && s.iter().all(|v| {
                    let mut t = s.clone();
                    t.remove(v);
                    !is_dominating(g, &t)
                })
        }
        ProblemSpec::Mso(f) => {
            match f.prefix.first() {
                Some(q) if q.quant == Quant::Exists && q.kind == VarKind::Set => {}
                _ => return Err(OracleError::NotVertexProblem),
            }
            let mut env = Env {
                ind: vec![None; f.prefix.len()],
                sets: vec![None; f.prefix.len()],
            };
            env.sets[0] = Some(s.clone());
            naive(f, g, 1, &mut env)
        }
    })
}

struct Env {
    ind: Vec<Option<usize>>,
    sets: Vec<Option<VertexSet>>,
}

fn naive(f: &Formula, g: &ColoredGraph, level: usize, env: &mut Env) -> bool {
    if level == f.prefix.len() {
        return f.matrix.eval(&mut |atom| match *atom {
            Matrix::Adj(x, y) => g.has_edge(env.ind[x].unwrap(), env.ind[y].unwrap()),
            Matrix::Eq(x, y) => env.ind[x] == env.ind[y],
            Matrix::In(x, s) => env.sets[s].as_ref().unwrap().contains(env.ind[x].unwrap()),
            _ => unreachable!(),
        });
    }
    let n = g.vertex_count();
    let q = &f.prefix[level];
    let mut values = (0..match q.kind {
        VarKind::Vertex => n as u64,
        VarKind::Set => 1u64 << n,
    })
    .map(|x| {
        match q.kind {
            VarKind::Vertex => env.ind[level] = Some(x as usize),
            VarKind::Set => env.sets[level] = Some((0..n).filter(|v| x >> v & 1 == 1).collect()),
        }
        naive(f, g, level + 1, env)
    });
    match q.quant {
        Quant::Exists => values.any(|b| b),
        Quant::Forall => values.all(|b| b),
    }
}

/// Evaluates a closed formula by direct quantifier recursion.
pub fn naive_model_check(f: &Formula, g: &ColoredGraph) -> Result<bool, OracleError> {
    if g.vertex_count() > MAX_VERTICES {
        return Err(OracleError::TooLarge(g.vertex_count()));
    }
    let mut env = Env {
        ind: vec![None; f.prefix.len()],
        sets: vec![None; f.prefix.len()],
    };
    Ok(naive(f, g, 0, &mut env))
}

/// All solutions, in lexicographic order.
pub fn brute_solutions(spec: &ProblemSpec, g: &ColoredGraph) -> Result<Vec<VertexSet>, OracleError> {
    let n = g.vertex_count();
    if n > MAX_VERTICES {
        return Err(OracleError::TooLarge(n));
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let s: VertexSet = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        if is_solution(spec, g, &s)? {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    Venn(VennMeasure),
    /// Minimum pairwise Hamming distance.
    Min,
}

impl Objective {
    pub fn score(&self, sets: &[&VertexSet], universe: &VertexSet) -> Result<u64, OracleError> {
        Ok(match self {
            Objective::Venn(f) => venn_div(f, sets, universe)?,
            Objective::Min => div_min(sets)?,
        })
    }
}

/// Best objective value over the ordered product of the lists, with the
/// lexicographically first tuple attaining it. `None` if a list is empty.
pub fn brute_best_diversity(
    lists: &[Vec<VertexSet>],
    objective: &Objective,
    universe: &VertexSet,
) -> Result<Option<(u64, Vec<VertexSet>)>, OracleError> {
    let total = lists
        .iter()
        .try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64))
        .unwrap_or(u64::MAX);
    if total > TUPLE_BUDGET {
        return Err(OracleError::Budget(total));
    }
    if lists.is_empty() || total == 0 {
        if let Objective::Min = objective {
            if lists.len() < 2 {
                return Err(MeasureError::TooFewSets.into());
            }
        }
        return Ok(None);
    }
    // Each block fixes the first slot; blocks are scanned in parallel and
    // reduced in order, keeping the earliest of equal values.
    let rest = &lists[1..];
    let blocks: Vec<Option<(u64, Vec<usize>)>> = (0..lists[0].len())
        .into_par_iter()
        .map(|first| -> Result<Option<(u64, Vec<usize>)>, OracleError> {
            let mut idx = vec![0usize; rest.len()];
            let mut best: Option<(u64, Vec<usize>)> = None;
            loop {
                let mut sets: Vec<&VertexSet> = Vec::with_capacity(lists.len());
                sets.push(&lists[0][first]);
                sets.extend(idx.iter().zip(rest).map(|(&i, l)| &l[i]));
                let v = objective.score(&sets, universe)?;
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    let mut tuple = vec![first];
                    tuple.extend_from_slice(&idx);
                    best = Some((v, tuple));
                }
                // Odometer, last slot fastest.
                let mut j = rest.len();
                loop {
                    if j == 0 {
                        return Ok(best);
                    }
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] < rest[j].len() {
                        break;
                    }
                    idx[j] = 0;
                }
            }
        })
        .collect::<Result<_, _>>()?;
    let mut best: Option<(u64, Vec<usize>)> = None;
    for b in blocks.into_iter().flatten() {
        if best.as_ref().is_none_or(|(v, _)| b.0 > *v) {
            best = Some(b);
        }
    }
    Ok(best.map(|(v, idx)| (v, idx.iter().zip(lists).map(|(&i, l)| l[i].clone()).collect())))
}
