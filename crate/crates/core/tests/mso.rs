use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cwdiv::corpus::corpus;
use cwdiv::engine::{extract_solution, Engine};
use cwdiv::graph::{gen_path, Color, ColoredGraph};
use cwdiv::mso::{model_check, parse_formula, Arena, Formula, MsoCore, MsoError, PartialTree};
use cwdiv::oracle::{brute_solutions, naive_model_check, ProblemSpec};
use cwdiv::vertex_set::VertexSet;

const FORMULAS: [&str; 6] = [
    "exists set S forall vertex x exists vertex y : (x in S) | (adj(x,y) & y in S)",
    "exists vertex x forall vertex y : x = y | adj(x,y)",
    "forall vertex x exists vertex y : adj(x,y)",
    "exists set S exists vertex x exists vertex y : x in S & !(y in S) & adj(x,y)",
    "forall vertex x forall vertex y exists vertex z : adj(x,z) | adj(y,z) | x = y",
    "exists vertex x exists set S forall vertex y : x in S & (y in S -> x = y)",
];

fn random_graph(rng: &mut ChaCha8Rng, prefix: &str, n: usize) -> ColoredGraph {
    let names = (1..=n).map(|i| format!("{prefix}{i}")).collect();
    let colors = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    ColoredGraph::new(names, colors, &edges)
}

fn disjoint(a: &ColoredGraph, b: &ColoredGraph) -> ColoredGraph {
    let names = a.names().iter().chain(b.names()).cloned().collect();
    let colors = (0..a.vertex_count()).map(|v| a.color(v)).chain((0..b.vertex_count()).map(|v| b.color(v))).collect();
    let shift = a.vertex_count();
    let edges: Vec<_> = a.edges().into_iter().chain(b.edges().into_iter().map(|(x, y)| (x + shift, y + shift))).collect();
    ColoredGraph::new(names, colors, &edges)
}

fn recolored(g: &ColoredGraph, from: Color, to: Color) -> ColoredGraph {
    let colors = (0..g.vertex_count()).map(|v| if g.color(v) == from { to } else { g.color(v) }).collect();
    ColoredGraph::new(g.names().to_vec(), colors, &g.edges())
}

fn joined(g: &ColoredGraph, a: Color, b: Color) -> ColoredGraph {
    let mut edges = g.edges();
    for x in 0..g.vertex_count() {
        for y in 0..g.vertex_count() {
            if g.color(x) == a && g.color(y) == b {
                edges.push((x.min(y), x.max(y)));
            }
        }
    }
    edges.sort();
    edges.dedup();
    ColoredGraph::new(g.names().to_vec(), (0..g.vertex_count()).map(|v| g.color(v)).collect(), &edges)
}

fn formulas() -> Vec<Formula> {
    FORMULAS.iter().map(|f| parse_formula(f).unwrap()).collect()
}

#[test]
fn product_of_any_representatives_reduces_alike() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for f in formulas() {
        for _ in 0..6 {
            let (na, nb) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
            let a = random_graph(&mut rng, "a", na);
            let b = random_graph(&mut rng, "b", nb);
            let mut arena = Arena::new(f.clone()).unwrap();
            let (ta, tb) = (PartialTree::full(&f, &a), PartialTree::full(&f, &b));
            let (ra, rb) = (arena.reduce(&ta).unwrap(), arena.reduce(&tb).unwrap());
            let whole = arena.reduce(&PartialTree::full(&f, &disjoint(&a, &b))).unwrap();
            assert_eq!(arena.product(ra, rb).unwrap(), whole, "{f}");
            // Reduced and unreduced representatives combine to the same class.
            let ea = arena.expand(ra);
            for (x, y) in [(&ta, &tb), (&ea, &tb), (&ta, &arena.expand(rb)), (&ea, &arena.expand(rb))] {
                assert_eq!(arena.reduce(&x.product(y, &f)).unwrap(), whole, "{f}");
            }
            assert_eq!(arena.eval(whole), naive_model_check(&f, &disjoint(&a, &b)).unwrap());
        }
    }
}

#[test]
fn recolor_and_add_edges_commute_with_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for f in formulas() {
        for _ in 0..6 {
            let n = rng.gen_range(1..=4);
            let g = random_graph(&mut rng, "v", n);
            let mut arena = Arena::new(f.clone()).unwrap();
            let t = arena.reduce(&PartialTree::full(&f, &g)).unwrap();
            let r = arena.recolor(t, 1, 2).unwrap();
            assert_eq!(r, arena.reduce(&PartialTree::full(&f, &recolored(&g, 1, 2))).unwrap());
            let e = arena.add_edges(t, 1, 2).unwrap();
            assert_eq!(e, arena.reduce(&PartialTree::full(&f, &joined(&g, 1, 2))).unwrap());
        }
    }
}

#[test]
fn root_tree_equals_reduced_full_tree() {
    for f in formulas() {
        for inst in corpus().iter().filter(|i| i.decomposition.vertex_count() <= 4) {
            let d = &inst.decomposition;
            let mut arena = Arena::new(f.clone()).unwrap();
            let trees = arena.node_trees(d).unwrap();
            let full = arena.reduce(&PartialTree::full(&f, &d.evaluate())).unwrap();
            assert_eq!(trees[d.root().0], full, "{f} on {}", inst.name);
            let fp = arena.fingerprint(full);
            let mut other = Arena::new(f.clone()).unwrap();
            let again = other.reduce(&arena.expand(full)).unwrap();
            assert_eq!(other.fingerprint(again), fp);
            assert!(arena.expand(full).size() <= PartialTree::full(&f, &d.evaluate()).size());
        }
    }
}

#[test]
fn mso_core_witnesses_equal_brute_solutions() {
    let problems = [
        "exists set S forall vertex x exists vertex y : (x in S) | (adj(x,y) & y in S)",
        "exists set S forall vertex x forall vertex y : !adj(x,y) | (x in S) | (y in S)",
        "exists set S forall vertex x forall vertex y : adj(x,y) -> !(x in S & y in S)",
        "exists set S exists vertex x forall vertex y : x in S & (adj(x,y) -> y in S)",
    ];
    for text in problems {
        let f = parse_formula(text).unwrap();
        for inst in corpus().iter().filter(|i| i.decomposition.vertex_count() <= 5) {
            let d = &inst.decomposition;
            let core = MsoCore::new(&f, d).unwrap();
            let got: BTreeSet<VertexSet> = Engine::new()
                .enumerate_witnesses(&core, d, 1_000_000)
                .unwrap()
                .iter()
                .map(|w| extract_solution(&core, d, w).unwrap())
                .collect();
            let want: BTreeSet<VertexSet> = brute_solutions(&ProblemSpec::Mso(f.clone()), &d.evaluate()).unwrap().into_iter().collect();
            assert_eq!(got, want, "{text} on {}", inst.name);
        }
    }
}

#[test]
fn formulas_round_trip_through_display() {
    for text in FORMULAS {
        let f = parse_formula(text).unwrap();
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }
}

#[test]
fn rejected_inputs() {
    assert!(matches!(parse_formula("exists vertex x : adj(x,"), Err(MsoError::Syntax { .. })));
    assert!(matches!(parse_formula("exists vertex x : adj(x,y)"), Err(MsoError::FreeVariable(..))));
    assert!(parse_formula("exists vertex x exists vertex x : x = x").is_err());
    assert!(parse_formula("exists vertex x : x in x").is_err());
    let d = gen_path(3);
    let no_set = parse_formula("exists vertex x : x = x").unwrap();
    assert!(matches!(MsoCore::new(&no_set, &d), Err(MsoError::NotVertexProblem(_))));
    let only_set = parse_formula("exists set S : true").unwrap();
    assert!(matches!(MsoCore::new(&only_set, &d), Err(MsoError::NotVertexProblem(_))));
    let big = parse_formula("exists set S forall vertex x exists vertex y : (x in S) | (adj(x,y) & y in S)").unwrap();
    assert!(matches!(MsoCore::with_budget(&big, &gen_path(6), 10), Err(MsoError::Budget(..))));
    assert!(model_check(&big, &gen_path(6)).unwrap());
}
