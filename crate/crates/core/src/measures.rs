//! Venn diversity measures.
//!
//! A Venn measure of arity `r` assigns a non-negative influence to every
//! membership vector `m ∈ {0,1}^r`; the diversity of `(S_1, ..., S_r)` is
//! the sum of influences over all vertices of the universe. Bit `i - 1` of a
//! membership index is set iff the vertex belongs to `S_i`.

use std::fmt;

use thiserror::Error;

use crate::vertex_set::VertexSet;

pub const MAX_ARITY: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("arity {0} out of range 1..={MAX_ARITY}")]
    Arity(usize),
    #[error("table has {got} values, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("measure arity {measure} does not match {sets} sets")]
    ArityMismatch { measure: usize, sets: usize },
    #[error("arithmetic overflow while summing influences")]
    Overflow,
    #[error("min diversity needs at least two sets")]
    TooFewSets,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing table row for membership vector {0}")]
    MissingRow(String),
}

/// Membership of one vertex in each of `r` sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MembershipVector {
    bits: u32,
    arity: u8,
}

impl MembershipVector {
    pub fn new(bits: u32, arity: usize) -> Self {
        debug_assert!(arity <= MAX_ARITY && (arity == 32 || bits >> arity == 0));
        Self {
            bits,
            arity: arity as u8,
        }
    }

    pub fn of(sets: &[&VertexSet], v: usize) -> Self {
        let bits = sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(v))
            .fold(0u32, |acc, (i, _)| acc | 1 << i);
        Self::new(bits, sets.len())
    }

    pub fn index(self) -> usize {
        self.bits as usize
    }

    pub fn arity(self) -> usize {
        self.arity as usize
    }

    pub fn get(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn ones(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn zeros(self) -> u32 {
        self.arity as u32 - self.ones()
    }
}

impl fmt::Display for MembershipVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.arity() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    Sum,
    Star,
    Custom,
}

/// An explicit influence table `f: {0,1}^r → ℕ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VennMeasure {
    r: usize,
    table: Vec<u64>,
    kind: MeasureKind,
}

impl VennMeasure {
    pub fn from_table(r: usize, table: Vec<u64>) -> Result<Self, MeasureError> {
        Self::with_kind(r, table, MeasureKind::Custom)
    }

    fn with_kind(r: usize, table: Vec<u64>, kind: MeasureKind) -> Result<Self, MeasureError> {
        if r == 0 || r > MAX_ARITY {
            return Err(MeasureError::Arity(r));
        }
        if table.len() != 1 << r {
            return Err(MeasureError::TableLength {
                got: table.len(),
                expected: 1 << r,
            });
        }
        Ok(Self { r, table, kind })
    }

    fn tabulate(r: usize, kind: MeasureKind, f: impl Fn(MembershipVector) -> u64) -> Result<Self, MeasureError> {
        if r == 0 || r > MAX_ARITY {
            return Err(MeasureError::Arity(r));
        }
        let table = (0..1u32 << r).map(|b| f(MembershipVector::new(b, r))).collect();
        Self::with_kind(r, table, kind)
    }

    /// Sum of pairwise Hamming distances as a Venn measure:
    /// `f(m) = ones(m) · zeros(m)`.
    pub fn divsum(r: usize) -> Result<Self, MeasureError> {
        Self::tabulate(r, MeasureKind::Sum, |m| m.ones() as u64 * m.zeros() as u64)
    }

    /// `f(m) = r² − ones(m)²`, which penalizes repeated solutions.
    pub fn divstar(r: usize) -> Result<Self, MeasureError> {
        let r2 = (r * r) as u64;
        Self::tabulate(r, MeasureKind::Star, |m| r2 - (m.ones() as u64).pow(2))
    }

    pub fn arity(&self) -> usize {
        self.r
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            MeasureKind::Sum => "sum",
            MeasureKind::Star => "star",
            MeasureKind::Custom => "custom",
        }
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn influence(&self, m: MembershipVector) -> u64 {
        self.table[m.index()]
    }

    pub fn at(&self, index: usize) -> u64 {
        self.table[index]
    }

    /// `f(0^r)`, the influence of a vertex in none of the sets.
    pub fn empty_influence(&self) -> u64 {
        self.table[0]
    }

    /// Parses a table file: `r <arity>` then one `<bitstring> <value>` line
    /// per membership vector, where character `i` of the bitstring is
    /// membership in set `i + 1`.
    pub fn parse_table(text: &str) -> Result<Self, MeasureError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let syntax = |line: usize, msg: String| MeasureError::Syntax { line, msg };
        let (line, header) = lines.next().ok_or_else(|| syntax(1, "empty measure file".into()))?;
        let r = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["r", n] => n
                .parse::<usize>()
                .map_err(|_| syntax(line, format!("bad arity `{n}`")))?,
            _ => return Err(syntax(line, "expected `r <arity>`".into())),
        };
        if r == 0 || r > MAX_ARITY {
            return Err(MeasureError::Arity(r));
        }
        let mut table: Vec<Option<u64>> = vec![None; 1 << r];
        for (line, text) in lines {
            let parts: Vec<_> = text.split_whitespace().collect();
            let [bits, value] = parts[..] else {
                return Err(syntax(line, "expected `<bitstring> <value>`".into()));
            };
            if bits.len() != r || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(syntax(line, format!("bad membership vector `{bits}`")));
            }
            let index = bits
                .chars()
                .enumerate()
                .filter(|(_, c)| *c == '1')
                .fold(0usize, |acc, (i, _)| acc | 1 << i);
            let value = value
                .parse::<u64>()
                .map_err(|_| syntax(line, format!("bad value `{value}`")))?;
            if table[index].replace(value).is_some() {
                return Err(syntax(line, format!("duplicate row `{bits}`")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| MeasureError::MissingRow(MembershipVector::new(i as u32, r).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_table(r, table)
    }

    pub fn to_table_text(&self) -> String {
        let mut out = format!("r {}\n", self.r);
        for i in 0..self.table.len() {
            out.push_str(&format!("{} {}\n", MembershipVector::new(i as u32, self.r), self.table[i]));
        }
        out
    }
}

pub fn hamming(a: &VertexSet, b: &VertexSet) -> usize {
    a.hamming(b)
}

/// Venn `f`-diversity of `sets` over the vertices of `universe`.
pub fn venn_div(f: &VennMeasure, sets: &[&VertexSet], universe: &VertexSet) -> Result<u64, MeasureError> {
    if f.arity() != sets.len() {
        return Err(MeasureError::ArityMismatch {
            measure: f.arity(),
            sets: sets.len(),
        });
    }
    universe.iter().try_fold(0u64, |acc, v| {
        acc.checked_add(f.influence(MembershipVector::of(sets, v)))
            .ok_or(MeasureError::Overflow)
    })
}

/// Sum of pairwise Hamming distances.
pub fn div_sum(sets: &[&VertexSet]) -> u64 {
    let mut total = 0u64;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            total += sets[i].hamming(sets[j]) as u64;
        }
    }
    total
}

/// Minimum pairwise Hamming distance.
pub fn div_min(sets: &[&VertexSet]) -> Result<u64, MeasureError> {
    if sets.len() < 2 {
        return Err(MeasureError::TooFewSets);
    }
    let mut best = u64::MAX;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            best = best.min(sets[i].hamming(sets[j]) as u64);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    // P5 with v1..v5 at indices 0..4.
    fn p5_dominating() -> [VertexSet; 4] {
        [set(&[0, 2, 4]), set(&[1, 3]), set(&[1, 4]), set(&[0, 3])]
    }

    #[test]
    fn hamming_examples() {
        let a = set(&[1, 3, 5]);
        assert_eq!(hamming(&a, &a), 0);
        assert_eq!(hamming(&a, &set(&[2, 4])), 5);
        assert_eq!(hamming(&a, &set(&[2, 5])), 3);
    }

    #[test]
    fn p5_dominating_set_values() {
        let [a, b, c, d] = p5_dominating();
        let universe = set(&[0, 1, 2, 3, 4]);
        let star = VennMeasure::divstar(4).unwrap();
        let sum = VennMeasure::divsum(4).unwrap();
        assert_eq!(venn_div(&star, &[&a, &a, &b, &b], &universe), Ok(60));
        assert_eq!(venn_div(&star, &[&a, &b, &c, &d], &universe), Ok(63));
        assert_eq!(venn_div(&sum, &[&a, &a, &b, &b], &universe), Ok(20));
    }

    #[test]
    fn zero_empty_influence_on_empty_sets() {
        let f = VennMeasure::divsum(3).unwrap();
        let e = VertexSet::new();
        assert_eq!(venn_div(&f, &[&e, &e, &e], &set(&[0, 1, 2])), Ok(0));
    }

    #[test]
    fn table_values() {
        let sum = VennMeasure::divsum(4).unwrap();
        assert_eq!(sum.at(0b0011), 4);
        assert_eq!(sum.at(0b1111), 0);
        assert_eq!(sum.empty_influence(), 0);
        let star = VennMeasure::divstar(4).unwrap();
        assert_eq!(star.at(0), 16);
        assert_eq!(star.at(0b1111), 0);
        assert_eq!(VennMeasure::divstar(2).unwrap().at(0b01), 3);
    }

    #[test]
    fn tables_depend_only_on_popcount() {
        for r in 1..=6 {
            for f in [VennMeasure::divsum(r).unwrap(), VennMeasure::divstar(r).unwrap()] {
                for i in 0..1usize << r {
                    for j in 0..1usize << r {
                        if i.count_ones() == j.count_ones() {
                            assert_eq!(f.at(i), f.at(j));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn min_and_sum_reference() {
        let a = set(&[0, 1]);
        assert_eq!(div_sum(&[&a, &a, &a]), 0);
        assert_eq!(div_min(&[&a, &a, &a]), Ok(0));
        assert_eq!(div_min(&[&a]), Err(MeasureError::TooFewSets));
    }

    #[test]
    fn overflow_is_reported() {
        let f = VennMeasure::from_table(1, vec![u64::MAX, u64::MAX]).unwrap();
        let e = VertexSet::new();
        assert_eq!(venn_div(&f, &[&e], &set(&[0, 1])), Err(MeasureError::Overflow));
    }

    #[test]
    fn arity_checks() {
        assert_eq!(VennMeasure::divsum(0), Err(MeasureError::Arity(0)));
        assert_eq!(VennMeasure::divsum(17), Err(MeasureError::Arity(17)));
        assert!(matches!(
            VennMeasure::from_table(2, vec![0; 3]),
            Err(MeasureError::TableLength { .. })
        ));
        let f = VennMeasure::divsum(2).unwrap();
        assert!(matches!(
            venn_div(&f, &[&VertexSet::new()], &VertexSet::new()),
            Err(MeasureError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn table_file() {
        let f = VennMeasure::parse_table("r 2\n00 0\n10 5 # only in S1\n01 1\n11 7\n").unwrap();
        assert_eq!(f.table(), [0, 5, 1, 7]);
        assert_eq!(VennMeasure::parse_table(&f.to_table_text()).unwrap(), f);
        assert_eq!(
            VennMeasure::parse_table("r 2\n00 0\n10 5\n01 1\n").unwrap_err(),
            MeasureError::MissingRow("11".into())
        );
        assert!(matches!(
            VennMeasure::parse_table("r 2\n0 0\n").unwrap_err(),
            MeasureError::Syntax { line: 2, .. }
        ));
        assert!(matches!(
            VennMeasure::parse_table("arity 2\n").unwrap_err(),
            MeasureError::Syntax { line: 1, .. }
        ));
    }
}
