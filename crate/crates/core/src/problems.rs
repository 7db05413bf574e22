//! Hand-written monotone cores: k-vertex-cover and k-dominating-set.

use std::collections::BTreeSet;

use crate::engine::{extract_solution, DpCore, Engine, EngineError, Entry, Transition};
use crate::graph::{Color, CwDecomposition, Node, NodeId};
use crate::vertex_set::VertexSet;

// Builds every node's process set from the states reachable below it.
fn build_process<S, L, U, M>(d: &CwDecomposition, leaf: L, union: U, unary: M) -> Vec<Vec<Transition>>
where
    S: Ord + Clone,
    L: Fn(Color) -> Vec<S>,
    U: Fn(&S, &S) -> Option<S>,
    M: Fn(NodeId, &S) -> Option<S>,
    S: Encode,
{
    let mut states: Vec<BTreeSet<S>> = vec![BTreeSet::new(); d.len()];
    let mut process: Vec<Vec<Transition>> = vec![Vec::new(); d.len()];
    for t in d.post_order() {
        let mut out = Vec::new();
        match d.node(t) {
            Node::Intro { color, .. } => {
                for s in leaf(*color) {
                    out.push((s, vec![]));
                }
            }
            Node::Union(l, r) => {
                for a in &states[l.0] {
                    for b in &states[r.0] {
                        if let Some(s) = union(a, b) {
                            out.push((s, vec![a.clone(), b.clone()]));
                        }
                    }
                }
            }
            Node::Recolor { child, .. } | Node::AddEdges { child, .. } => {
                for a in &states[child.0] {
                    if let Some(s) = unary(t, a) {
                        out.push((s, vec![a.clone()]));
                    }
                }
            }
        }
        states[t.0] = out.iter().map(|(s, _)| s.clone()).collect();
        let mut trans: Vec<Transition> = out
            .into_iter()
            .map(|(s, ch)| Transition {
                entry: s.encode(),
                children: ch.iter().map(Encode::encode).collect(),
            })
            .collect();
        trans.sort();
        trans.dedup();
        process[t.0] = trans;
    }
    process
}

trait Encode {
    fn encode(&self) -> Entry;
}

/// Per-color solution counts `(c_1, ..., c_ω)`; index 0 unused.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct VcState(Vec<u32>, u32);

impl Encode for VcState {
    // Fixed-width big-endian bit packing, `bits` per color.
    fn encode(&self) -> Entry {
        let bits = self.1 as usize;
        let total = (self.0.len() - 1) * bits;
        let mut bytes = vec![0u8; total.div_ceil(8)];
        let mut pos = 0;
        for &c in &self.0[1..] {
            for i in (0..bits).rev() {
                if c >> i & 1 == 1 {
                    bytes[pos / 8] |= 0x80 >> (pos % 8);
                }
                pos += 1;
            }
        }
        Entry::new(bytes)
    }
}

/// `ceil(log2(k + 2))`: enough bits for every count in `0..=k+1`.
fn count_bits(k: usize) -> u32 {
    usize::BITS - (k + 1).leading_zeros()
}

fn decode_counts(e: &Entry, width: usize, bits: u32) -> Vec<u32> {
    let bytes = e.bytes();
    let mut out = vec![0u32; width + 1];
    let mut pos = 0usize;
    for c in out.iter_mut().skip(1) {
        for _ in 0..bits {
            let bit = bytes[pos / 8] >> (7 - pos % 8) & 1;
            *c = *c << 1 | u32::from(bit);
            pos += 1;
        }
    }
    out
}

/// Vertex cover of size at most `k`. Entries count solution vertices per
/// color; `ρ` is 0 exactly on the all-zero tuple.
pub struct VcCore {
    k: usize,
    width: usize,
    bits: u32,
    process: Vec<Vec<Transition>>,
}

impl VcCore {
    pub fn new(k: usize, d: &CwDecomposition) -> Self {
        let width = d.width() as usize;
        let bits = count_bits(k);
        let n = d.color_counts();
        let zero = VcState(vec![0; width + 1], bits);
        let process = build_process(
            d,
            |a| {
                let mut one = zero.clone();
                one.0[a as usize] = 1;
                vec![one, zero.clone()]
            },
            |x, y| {
                let c: Vec<u32> = x.0.iter().zip(&y.0).map(|(p, q)| p + q).collect();
                (c.iter().sum::<u32>() as usize <= k).then_some(VcState(c, bits))
            },
            |t, x| match d.node(t) {
                Node::Recolor { from, to, .. } => {
                    let (a, b) = (*from as usize, *to as usize);
                    let mut c = x.0.clone();
                    if a != b {
                        c[b] += c[a];
                        c[a] = 0;
                    }
                    Some(VcState(c, bits))
                }
                Node::AddEdges { a, b, .. } => {
                    let (a, b) = (*a as usize, *b as usize);
                    let full = |i: usize| x.0[i] as usize == n[t.0][i];
                    (full(a) || full(b)).then(|| x.clone())
                }
                _ => unreachable!(),
            },
        );
        Self {
            k,
            width,
            bits,
            process,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Decodes an entry into its per-color counts (index 0 unused).
    pub fn counts(&self, e: &Entry) -> Vec<u32> {
        decode_counts(e, self.width, self.bits)
    }
}

impl DpCore for VcCore {
    fn process(&self, t: NodeId) -> &[Transition] {
        &self.process[t.0]
    }

    fn accepts(&self, e: &Entry) -> bool {
        self.counts(e).iter().all(|&c| c as usize <= self.k)
    }

    fn rho(&self, e: &Entry) -> Option<bool> {
        Some(e.bytes().iter().any(|&b| b != 0))
    }
}

/// Dominating-set state: count, colors holding a selected vertex, colors
/// holding an undominated vertex (bit `i` for color `i`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct DsState {
    count: u32,
    selected: u64,
    undominated: u64,
}

impl Encode for DsState {
    fn encode(&self) -> Entry {
        let mut bytes = self.count.to_be_bytes().to_vec();
        bytes.extend_from_slice(&self.selected.to_be_bytes());
        bytes.extend_from_slice(&self.undominated.to_be_bytes());
        Entry::new(bytes)
    }
}

impl DsState {
    fn decode(e: &Entry) -> Option<Self> {
        let b = e.bytes();
        if b.len() != 20 {
            return None;
        }
        Some(Self {
            count: u32::from_be_bytes(b[0..4].try_into().ok()?),
            selected: u64::from_be_bytes(b[4..12].try_into().ok()?),
            undominated: u64::from_be_bytes(b[12..20].try_into().ok()?),
        })
    }
}

/// Dominating set (closed neighborhoods) of size at most `k`.
///
/// Supports widths up to 63.
pub struct DsCore {
    k: usize,
    process: Vec<Vec<Transition>>,
}

impl DsCore {
    pub fn new(k: usize, d: &CwDecomposition) -> Self {
        assert!(d.width() < 64, "width {} too large for the dominating set core", d.width());
        let process = build_process(
            d,
            |a| {
                vec![
                    DsState {
                        count: 1,
                        selected: 1 << a,
                        undominated: 0,
                    },
                    DsState {
                        count: 0,
                        selected: 0,
                        undominated: 1 << a,
                    },
                ]
            },
            |x, y| {
                let count = x.count + y.count;
                (count as usize <= k).then_some(DsState {
                    count,
                    selected: x.selected | y.selected,
                    undominated: x.undominated | y.undominated,
                })
            },
            |t, x| {
                let mut s = x.clone();
                match d.node(t) {
                    Node::Recolor { from, to, .. } if from != to => {
                        let fold = |m: u64| {
                            if m >> from & 1 == 1 {
                                (m | 1 << to) & !(1 << from)
                            } else {
                                m
                            }
                        };
                        s.selected = fold(s.selected);
                        s.undominated = fold(s.undominated);
                    }
                    Node::Recolor { .. } => {}
                    Node::AddEdges { a, b, .. } => {
                        if x.selected >> a & 1 == 1 {
                            s.undominated &= !(1 << b);
                        }
                        if x.selected >> b & 1 == 1 {
                            s.undominated &= !(1 << a);
                        }
                    }
                    _ => unreachable!(),
                }
                Some(s)
            },
        );
        Self { k, process }
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl DpCore for DsCore {
    fn process(&self, t: NodeId) -> &[Transition] {
        &self.process[t.0]
    }

    fn accepts(&self, e: &Entry) -> bool {
        DsState::decode(e).is_some_and(|s| s.undominated == 0 && s.count as usize <= self.k)
    }

    fn rho(&self, e: &Entry) -> Option<bool> {
        DsState::decode(e).map(|s| s.count > 0)
    }
}

/// Smallest vertex cover of size at most `k`, or `None`.
pub fn min_vc(d: &CwDecomposition, k: usize, engine: &Engine) -> Result<Option<VertexSet>, EngineError> {
    for size in 0..=k {
        let core = VcCore::new(size, d);
        if let Some(w) = engine.solve_single(&core, d)?.witness {
            return extract_solution(&core, d, &w).map(Some);
        }
    }
    Ok(None)
}
