//! A fixed collection of small decompositions used for cross-checking.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{gen_clique, gen_complete_bipartite, gen_path, Color, CwDecomposition, DecompositionBuilder, Node, NodeId};

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub decomposition: CwDecomposition,
}

impl Instance {
    fn new(name: impl Into<String>, decomposition: CwDecomposition) -> Self {
        Self {
            name: name.into(),
            decomposition,
        }
    }
}

/// Cycle `v1 .. vn` (n >= 3), width 4.
pub fn gen_cycle(n: usize) -> CwDecomposition {
    assert!(n >= 3);
    let mut b = DecompositionBuilder::new();
    let first = b.intro("v1", 4);
    let second = b.intro("v2", 2);
    let u = b.union(first, second);
    let mut cur = b.add_edges(u, 2, 4);
    for i in 3..=n {
        let leaf = b.intro(format!("v{i}"), 1);
        let u = b.union(cur, leaf);
        let e = b.add_edges(u, 1, 2);
        let r = b.recolor(e, 2, 3);
        cur = b.recolor(r, 1, 2);
    }
    let root = b.add_edges(cur, 2, 4);
    b.finish(root)
}

/// `n` isolated vertices.
pub fn gen_edgeless(n: usize) -> CwDecomposition {
    let mut b = DecompositionBuilder::new();
    let mut cur = b.intro("v1", 1);
    for i in 2..=n {
        let leaf = b.intro(format!("v{i}"), 1);
        cur = b.union(cur, leaf);
    }
    b.finish(cur)
}

// Copies `d` into `b`, prefixing vertex names and shifting colors.
fn embed(b: &mut DecompositionBuilder, d: &CwDecomposition, prefix: &str, shift: Color) -> NodeId {
    let mut ids: Vec<Option<NodeId>> = vec![None; d.len()];
    for t in d.post_order() {
        let id = |c: &NodeId| ids[c.0].expect("child first");
        let new = match d.node(t) {
            Node::Intro { vertex, color } => b.intro(format!("{prefix}{vertex}"), color + shift),
            Node::Union(l, r) => b.union(id(l), id(r)),
            Node::Recolor { child, from, to } => b.recolor(id(child), from + shift, to + shift),
            Node::AddEdges { child, a, b: c } => b.add_edges(id(child), a + shift, c + shift),
        };
        ids[t.0] = Some(new);
    }
    ids[d.root().0].expect("root")
}

/// Disjoint union of two decompositions; vertices are prefixed `a_`, `b_`.
pub fn disjoint_union(x: &CwDecomposition, y: &CwDecomposition) -> CwDecomposition {
    let mut b = DecompositionBuilder::new();
    let l = embed(&mut b, x, "a_", 0);
    let r = embed(&mut b, y, "b_", 0);
    let u = b.union(l, r);
    b.finish(u)
}

/// Join: every vertex of `x` adjacent to every vertex of `y`.
pub fn join(x: &CwDecomposition, y: &CwDecomposition) -> CwDecomposition {
    let mut b = DecompositionBuilder::new();
    let l = embed(&mut b, x, "a_", 0);
    let wx = x.width();
    let r = embed(&mut b, y, "b_", wx);
    // Flatten each side to one color, then join.
    let mut l = l;
    for c in 2..=wx {
        l = b.recolor(l, c, 1);
    }
    let mut r = r;
    for c in wx + 2..=wx + y.width() {
        r = b.recolor(r, c, wx + 1);
    }
    let u = b.union(l, r);
    let e = b.add_edges(u, 1, wx + 1);
    b.finish(e)
}

/// A random decomposition on `n` vertices with colors in `1..=width`.
pub fn random_decomposition(n: usize, width: Color, seed: u64) -> CwDecomposition {
    assert!(n >= 1 && width >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = DecompositionBuilder::new();
    let mut parts: Vec<NodeId> = (1..=n).map(|i| b.intro(format!("v{i}"), rng.gen_range(1..=width))).collect();
    let unary = |b: &mut DecompositionBuilder, rng: &mut ChaCha8Rng, mut t: NodeId| {
        for _ in 0..rng.gen_range(0..=2) {
            let x = rng.gen_range(1..=width);
            let mut y = rng.gen_range(1..width);
            if y >= x {
                y += 1;
            }
            t = if rng.gen_bool(0.6) {
                b.add_edges(t, x, y)
            } else {
                b.recolor(t, x, y)
            };
        }
        t
    };
    while parts.len() > 1 {
        let i = rng.gen_range(0..parts.len());
        let l = parts.swap_remove(i);
        let j = rng.gen_range(0..parts.len());
        let r = parts.swap_remove(j);
        let u = b.union(l, r);
        let t = unary(&mut b, &mut rng, u);
        parts.push(t);
    }
    let root = parts[0];
    b.finish(root).with_width(width)
}

/// The cross-checking corpus: paths, cliques, bicliques, cycles, edgeless
/// graphs, unions, joins and seeded random decompositions, all with at most
/// 8 vertices.
pub fn corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push(Instance::new(format!("path{n}"), gen_path(n)));
    }
    for n in 2..=5 {
        out.push(Instance::new(format!("clique{n}"), gen_clique(n)));
    }
    for (p, q) in [(1, 2), (1, 4), (2, 2), (2, 3), (3, 3)] {
        out.push(Instance::new(format!("biclique{p}x{q}"), gen_complete_bipartite(p, q)));
    }
    for n in 3..=7 {
        out.push(Instance::new(format!("cycle{n}"), gen_cycle(n)));
    }
    for n in [3, 4] {
        out.push(Instance::new(format!("edgeless{n}"), gen_edgeless(n)));
    }
    out.push(Instance::new("path3+clique3", disjoint_union(&gen_path(3), &gen_clique(3))));
    out.push(Instance::new("clique2+path2", disjoint_union(&gen_clique(2), &gen_path(2))));
    out.push(Instance::new("path3*edgeless2", join(&gen_path(3), &gen_edgeless(2))));
    out.push(Instance::new("clique2*path3", join(&gen_clique(2), &gen_path(3))));
    for (i, (n, w)) in [(4, 2), (5, 2), (5, 3), (6, 2), (6, 3), (7, 3), (8, 2), (8, 3)].into_iter().enumerate() {
        out.push(Instance::new(format!("random{n}w{w}s{i}"), random_decomposition(n, w, i as u64)));
    }
    out
}
