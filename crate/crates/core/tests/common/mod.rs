//! Checks shared by the acceptance harness and the integration tests. Each
//! returns a one-line summary on success and a description of the first
//! mismatch on failure.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cwdiv::cli;
use cwdiv::corpus::{corpus, Instance};
use cwdiv::engine::{extract_solution, DpCore, Engine};
use cwdiv::graph::{gen_clique, gen_path, ColoredGraph};
use cwdiv::measures::{div_min, div_sum, venn_div, VennMeasure};
use cwdiv::mso::{model_check, parse_formula, Formula, MsoCore};
use cwdiv::oracle::{brute_best_diversity, brute_solutions, naive_model_check, Objective, ProblemSpec};
use cwdiv::problems::{DsCore, VcCore};
use cwdiv::vertex_set::VertexSet;

pub type Check = Result<String, String>;

pub const DS: &str = "exists set S forall vertex x exists vertex y : (x in S) | (adj(x,y) & y in S)";
pub const VC: &str = "exists set S forall vertex x forall vertex y : !adj(x,y) | (x in S) | (y in S)";

fn set(g: &ColoredGraph, names: &[&str]) -> VertexSet {
    g.set_from_names(names.iter().copied()).expect("known names")
}

fn sorted(mut v: Vec<VertexSet>) -> Vec<VertexSet> {
    v.sort();
    v
}

pub fn p5_dominating_values() -> Check {
    let g = gen_path(5).evaluate();
    let u = g.all_vertices();
    let a = set(&g, &["v1", "v3", "v5"]);
    let b = set(&g, &["v2", "v4"]);
    let c = set(&g, &["v2", "v5"]);
    let d = set(&g, &["v1", "v4"]);
    let mds = brute_solutions(&ProblemSpec::MinimalDominatingSet, &g).map_err(|e| e.to_string())?;
    if sorted(mds.clone()) != sorted(vec![a.clone(), b.clone(), c.clone(), d.clone()]) {
        return Err(format!("minimal dominating sets of P5: {mds:?}"));
    }
    let lists = vec![mds; 4];
    let sum = VennMeasure::divsum(4).unwrap();
    let star = VennMeasure::divstar(4).unwrap();
    let (best_sum, t) = brute_best_diversity(&lists, &Objective::Venn(sum.clone()), &u)
        .map_err(|e| e.to_string())?
        .ok_or("no tuples")?;
    let aabb = sorted(vec![a.clone(), a.clone(), b.clone(), b.clone()]);
    if best_sum != 20 || sorted(t) != aabb {
        return Err(format!("DivSum optimum {best_sum}"));
    }
    // The optimum is attained only by arrangements of {A,A,B,B}.
    let mut attaining = BTreeSet::new();
    for x in &lists[0] {
        for y in &lists[0] {
            for z in &lists[0] {
                for w in &lists[0] {
                    if div_sum(&[x, y, z, w]) == 20 {
                        attaining.insert(sorted(vec![x.clone(), y.clone(), z.clone(), w.clone()]));
                    }
                }
            }
        }
    }
    if attaining.len() != 1 {
        return Err(format!("{} multisets attain DivSum 20", attaining.len()));
    }
    let star_aabb = venn_div(&star, &[&a, &a, &b, &b], &u).unwrap();
    let star_abcd = venn_div(&star, &[&a, &b, &c, &d], &u).unwrap();
    if star_aabb != 60 || star_abcd != 63 {
        return Err(format!("Div*(AABB)={star_aabb}, Div*(ABCD)={star_abcd}"));
    }
    let (best_star, t) = brute_best_diversity(&lists, &Objective::Venn(star), &u)
        .map_err(|e| e.to_string())?
        .ok_or("no tuples")?;
    if best_star != 64 || sorted(t) != sorted(vec![d.clone(), d, c.clone(), c]) {
        return Err(format!("Div* optimum {best_star}"));
    }
    Ok("DivSum max 20 only at {A,A,B,B}; Div*(A,A,B,B)=60; Div*(A,B,C,D)=63; Div* max over all tuples is 64 at {C,C,D,D}".into())
}

/// Universe `B ∪ A_1 ∪ ... ∪ A_5` with `|B| = |A_i| = s`.
pub fn divmin_ties(s: usize) -> Check {
    let block = |i: usize| -> VertexSet { (i * s..(i + 1) * s).collect() };
    let b = |j: usize| j - 1; // b_j is vertex j-1 of block 0.
    let sol = |i: usize, j: usize| {
        let mut x = block(i);
        x.insert(b(j));
        x
    };
    let first: Vec<VertexSet> = (1..=6).map(|j| sol(1, j)).collect();
    let mut second: Vec<VertexSet> = (1..=5).map(|i| sol(i, i)).collect();
    second.push(sol(1, 6));
    let score = |t: &[VertexSet]| {
        let refs: Vec<&VertexSet> = t.iter().collect();
        (div_min(&refs).unwrap(), div_sum(&refs))
    };
    let (m1, s1) = score(&first);
    let (m2, s2) = score(&second);
    let expected = (28 * s + 30) as u64;
    if (m1, s1) != (2, 30) || (m2, s2) != (2, expected) {
        return Err(format!("first ({m1},{s1}), second ({m2},{s2})"));
    }
    Ok(format!("s={s}: first tuple (DivMin {m1}, DivSum {s1}), second tuple (DivMin {m2}, DivSum {s2})"))
}

fn random_family(rng: &mut ChaCha8Rng, n: usize, r: usize) -> Vec<VertexSet> {
    (0..r)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
        .collect()
}

fn random_measure(rng: &mut ChaCha8Rng, r: usize) -> VennMeasure {
    VennMeasure::from_table(r, (0..1 << r).map(|_| rng.gen_range(0..20)).collect()).unwrap()
}

pub fn venn_sum_equivalence(trials: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..trials {
        let n = rng.gen_range(0..=12);
        let r = rng.gen_range(1..=5);
        let sets = random_family(&mut rng, n, r);
        let refs: Vec<&VertexSet> = sets.iter().collect();
        let u: VertexSet = (0..n).collect();
        let venn = venn_div(&VennMeasure::divsum(r).unwrap(), &refs, &u).unwrap();
        if venn != div_sum(&refs) {
            return Err(format!("trial {i}: venn {venn}, direct {}", div_sum(&refs)));
        }
    }
    Ok(format!("{trials} random families agree"))
}

pub fn additivity(trials: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..trials {
        let n = rng.gen_range(1..=12);
        let r = rng.gen_range(1..=5);
        let u: VertexSet = (0..n).collect();
        let left: VertexSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let right: VertexSet = u.iter().filter(|v| !left.contains(*v)).collect();
        let pick = |rng: &mut ChaCha8Rng, side: &VertexSet| -> VertexSet { side.iter().filter(|_| rng.gen_bool(0.5)).collect() };
        let s: Vec<VertexSet> = (0..r).map(|_| pick(&mut rng, &left)).collect();
        let p: Vec<VertexSet> = (0..r).map(|_| pick(&mut rng, &right)).collect();
        let both: Vec<VertexSet> = s.iter().zip(&p).map(|(a, b)| a.union(b)).collect();
        let mut measures = vec![VennMeasure::divsum(r).unwrap(), VennMeasure::divstar(r).unwrap()];
        for _ in 0..3 {
            measures.push(random_measure(&mut rng, r));
        }
        for f in &measures {
            let div = |x: &[VertexSet]| venn_div(f, &x.iter().collect::<Vec<_>>(), &u).unwrap();
            let lhs = div(&both);
            let rhs = div(&s) + div(&p) - n as u64 * f.empty_influence();
            if lhs != rhs {
                return Err(format!("trial {i}: {lhs} != {rhs} for {}", f.name()));
            }
        }
    }
    Ok(format!("{trials} random splits, 5 measures each"))
}

#[derive(Clone, Copy, Debug)]
pub enum Kind {
    Vc,
    Ds,
}

fn tuples(r: usize) -> Vec<Vec<Kind>> {
    use Kind::*;
    match r {
        2 => vec![vec![Vc, Vc], vec![Ds, Ds], vec![Vc, Ds]],
        _ => vec![vec![Vc, Vc, Vc], vec![Ds, Ds, Ds], vec![Ds, Vc, Ds]],
    }
}

struct Setup {
    cores: Vec<Box<dyn DpCore>>,
    lists: Vec<Vec<VertexSet>>,
    specs: Vec<ProblemSpec>,
}

fn setup(inst: &Instance, kinds: &[Kind], k: usize, g: &ColoredGraph) -> Setup {
    let d = &inst.decomposition;
    let mut cores: Vec<Box<dyn DpCore>> = Vec::new();
    let mut specs = Vec::new();
    for kind in kinds {
        match kind {
            Kind::Vc => {
                cores.push(Box::new(VcCore::new(k, d)));
                specs.push(ProblemSpec::VertexCover(k));
            }
            Kind::Ds => {
                cores.push(Box::new(DsCore::new(k, d)));
                specs.push(ProblemSpec::DominatingSet(k));
            }
        }
    }
    let lists = specs.iter().map(|s| brute_solutions(s, g).unwrap()).collect();
    Setup { cores, lists, specs }
}

fn bound(inst: &Instance) -> usize {
    (inst.decomposition.vertex_count() / 2).max(1)
}

pub fn venn_lifting() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let engine = Engine::new();
    let mut runs = 0;
    let instances = corpus();
    for inst in &instances {
        let d = &inst.decomposition;
        let g = d.evaluate();
        let u = g.all_vertices();
        for r in [2, 3] {
            for kinds in tuples(r) {
                let s = setup(inst, &kinds, bound(inst), &g);
                let refs: Vec<&dyn DpCore> = s.cores.iter().map(|c| c.as_ref()).collect();
                let mut measures = vec![VennMeasure::divsum(r).unwrap(), VennMeasure::divstar(r).unwrap()];
                for _ in 0..3 {
                    measures.push(random_measure(&mut rng, r));
                }
                for f in measures {
                    let out = engine.diverse_solve(&refs, &f, 0, d).map_err(|e| e.to_string())?;
                    let best = brute_best_diversity(&s.lists, &Objective::Venn(f.clone()), &u).map_err(|e| e.to_string())?;
                    let what = format!("{} {kinds:?} {}", inst.name, f.name());
                    if out.best_value != best.as_ref().map(|b| b.0) {
                        return Err(format!("{what}: engine {:?}, oracle {:?}", out.best_value, best.map(|b| b.0)));
                    }
                    if let Some(sets) = &out.solutions {
                        for ((spec, x), list) in s.specs.iter().zip(sets).zip(&s.lists) {
                            if !list.contains(x) {
                                return Err(format!("{what}: {x:?} is not a solution of {spec:?}"));
                            }
                        }
                        let value = venn_div(&f, &sets.iter().collect::<Vec<_>>(), &u).unwrap();
                        if Some(value) != out.best_value {
                            return Err(format!("{what}: returned tuple scores {value}"));
                        }
                    }
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{} instances, {runs} runs agree with the oracle", instances.len()))
}

pub fn min_lifting() -> Check {
    let engine = Engine::new();
    let mut runs = 0;
    let instances = corpus();
    for inst in &instances {
        let d = &inst.decomposition;
        let g = d.evaluate();
        let u = g.all_vertices();
        for r in [2, 3] {
            for kinds in tuples(r) {
                let s = setup(inst, &kinds, bound(inst), &g);
                let refs: Vec<&dyn DpCore> = s.cores.iter().map(|c| c.as_ref()).collect();
                let best = brute_best_diversity(&s.lists, &Objective::Min, &u).map_err(|e| e.to_string())?;
                for target in 0..=4u64 {
                    let out = engine.min_diverse_solve(&refs, target, d).map_err(|e| e.to_string())?;
                    let expected = best.as_ref().is_some_and(|b| b.0 >= target);
                    let what = format!("{} {kinds:?} d={target}", inst.name);
                    if out.feasible != expected {
                        return Err(format!("{what}: engine {}, oracle {expected}", out.feasible));
                    }
                    if let Some(sets) = &out.solutions {
                        for (x, list) in sets.iter().zip(&s.lists) {
                            if !list.contains(x) {
                                return Err(format!("{what}: {x:?} is not a solution"));
                            }
                        }
                        if div_min(&sets.iter().collect::<Vec<_>>()).unwrap() < target {
                            return Err(format!("{what}: returned tuple is too close"));
                        }
                    }
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{} instances, {runs} runs agree with the oracle", instances.len()))
}

pub fn vc_monotonicity() -> Check {
    let engine = Engine::new();
    let mut runs = 0;
    for inst in corpus().iter().filter(|i| i.decomposition.vertex_count() <= 6) {
        let d = &inst.decomposition;
        let g = d.evaluate();
        for k in 0..=d.vertex_count() {
            let core = VcCore::new(k, d);
            let ws = engine.enumerate_witnesses(&core, d, 100_000).map_err(|e| e.to_string())?;
            let mut extracted = BTreeSet::new();
            for w in &ws {
                if !w.is_valid_for(&core, d) {
                    return Err(format!("{} k={k}: invalid witness", inst.name));
                }
                extracted.insert(extract_solution(&core, d, w).map_err(|e| e.to_string())?);
            }
            let brute: BTreeSet<VertexSet> = brute_solutions(&ProblemSpec::VertexCover(k), &g).unwrap().into_iter().collect();
            if extracted != brute {
                return Err(format!("{} k={k}: {} extracted, {} covers", inst.name, extracted.len(), brute.len()));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} (graph, k) pairs: extracted sets equal all covers of size <= k"))
}

pub fn formulas() -> Vec<&'static str> {
    vec![
        DS,
        VC,
        "exists set S forall vertex x : x in S",
        "exists vertex x exists vertex y : adj(x,y)",
        "forall vertex x exists vertex y : adj(x,y)",
        "exists vertex x forall vertex y : x = y | adj(x,y)",
        "forall vertex x forall vertex y : x = y | adj(x,y)",
        "exists vertex x exists vertex y exists vertex z : adj(x,y) & adj(y,z) & adj(x,z)",
        "forall vertex x forall vertex y forall vertex z : adj(x,y) & adj(y,z) -> (adj(x,z) | x = z)",
        "exists vertex x forall vertex y : !adj(x,y)",
        "exists set S forall vertex x forall vertex y : adj(x,y) -> !(x in S & y in S) & (x in S | y in S)",
        "exists set S forall vertex x forall vertex y : adj(x,y) -> !(x in S & y in S)",
        "exists set S exists vertex x exists vertex y : x in S & !(y in S) & adj(x,y)",
        "forall set S exists vertex x : x in S | !(x in S)",
        "exists set S forall vertex x : !(x in S)",
        "exists set S exists set T forall vertex x : (x in S -> !(x in T)) & (x in S | x in T)",
        "forall set S forall vertex x forall vertex y : x in S & adj(x,y) -> y in S | !(y in S)",
        "exists vertex x exists vertex y : !(x = y) & !adj(x,y)",
        "forall vertex x exists vertex y exists vertex z : !(y = z) & adj(x,y) & adj(x,z)",
        "exists set S forall vertex x exists vertex y : (x in S -> adj(x,y) & y in S) & (!(x in S) -> !(y in S))",
        "forall set S exists vertex x exists vertex y : (x in S & y in S) -> x = y | adj(x,y)",
        "exists vertex x exists vertex y exists vertex z exists vertex w : adj(x,y) & adj(y,z) & adj(z,w) & !(x = z) & !(y = w)",
    ]
}

pub fn mso_model_checking() -> Check {
    let fs: Vec<Formula> = formulas().into_iter().map(|f| parse_formula(f).expect("formula parses")).collect();
    let graphs: Vec<Instance> = corpus().into_iter().filter(|i| i.decomposition.vertex_count() <= 5).collect();
    let mut runs = 0;
    let mut trues = 0;
    for f in &fs {
        if f.q() > 4 {
            return Err(format!("formula with q={} in the suite", f.q()));
        }
        for inst in &graphs {
            let g = inst.decomposition.evaluate();
            let fast = model_check(f, &inst.decomposition).map_err(|e| e.to_string())?;
            let naive = naive_model_check(f, &g).map_err(|e| e.to_string())?;
            if fast != naive {
                return Err(format!("{} on {}: model_check {fast}, naive {naive}", f, inst.name));
            }
            runs += 1;
            trues += fast as usize;
        }
    }
    Ok(format!("{} formulas x {} graphs = {runs} checks agree ({trues} true)", fs.len(), graphs.len()))
}

pub fn diverse_mso() -> Check {
    let f = parse_formula(DS).unwrap();
    let sum = VennMeasure::divsum(2).unwrap();
    let mut out = Vec::new();
    for d in (1..=5).map(gen_path).chain((1..=5).map(gen_clique)) {
        let g = d.evaluate();
        let core = MsoCore::new(&f, &d).map_err(|e| e.to_string())?;
        let res = Engine::new().diverse_solve(&[&core, &core], &sum, 0, &d).map_err(|e| e.to_string())?;
        let list = brute_solutions(&ProblemSpec::Mso(f.clone()), &g).unwrap();
        let best = brute_best_diversity(&[list.clone(), list.clone()], &Objective::Venn(sum.clone()), &g.all_vertices())
            .unwrap()
            .map(|b| b.0);
        if res.best_value != best {
            return Err(format!("n={}: engine {:?}, oracle {best:?}", g.vertex_count(), res.best_value));
        }
        if let Some(sets) = &res.solutions {
            if !sets.iter().all(|s| list.contains(s)) {
                return Err(format!("n={}: returned sets are not dominating", g.vertex_count()));
            }
        }
        out.push(best.unwrap_or(0).to_string());
    }
    Ok(format!("paths and cliques n=1..5 agree; optima {}", out.join(",")))
}

/// Every command, run twice and with several threads, must print the same
/// bytes.
pub fn determinism(dir: &std::path::Path) -> Check {
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let p5 = write("p5.cw", &gen_path(5).to_string());
    let k4 = write("k4.cw", &gen_clique(4).to_string());
    let graph = write("p5.graph", "v v1\nv v2\nv v3\nv v4\nv v5\ne v1 v2\ne v2 v3\ne v3 v4\ne v4 v5\n");
    let ds = write("ds.mso", DS);
    let table = write("t.table", "r 2\n00 1\n10 3\n01 2\n11 0\n");
    let mso = format!("mso:{ds}");
    let table_measure = format!("table:{table}");
    let mso_pair = format!("{mso},{mso}");
    let commands: Vec<Vec<&str>> = vec![
        vec!["check", &p5],
        vec!["gen", "path", "5"],
        vec!["gen", "clique", "4"],
        vec!["gen", "biclique", "2", "3"],
        vec!["gen", "random", "7", "3", "--seed", "4"],
        vec!["solve", "--decomp", &p5, "--problem", "vc:2"],
        vec!["solve", "--decomp", &p5, "--problem", "ds:2"],
        vec!["solve", "--decomp", &p5, "--problem", "minvc:5"],
        vec!["solve", "--decomp", &k4, "--problem", &mso],
        vec!["diverse", "--decomp", &p5, "--problems", "ds:2,ds:2", "--measure", "sum", "--d", "4"],
        vec!["diverse", "--decomp", &p5, "--problems", "ds:3,vc:3,ds:3", "--measure", "star"],
        vec!["diverse", "--decomp", &k4, "--problems", "vc:3,ds:2", "--measure", &table_measure],
        vec!["diverse", "--decomp", &p5, "--problems", &mso_pair, "--format", "json"],
        vec!["diverse-min", "--decomp", &p5, "--problems", "ds:2,ds:2", "--d", "4"],
        vec!["diverse-min", "--decomp", &p5, "--problems", "ds:3,ds:3,vc:3", "--d", "2", "--format", "json"],
        vec!["oracle", "--graph", &graph, "--problems", "minds,minds,minds,minds", "--measure", "star"],
        vec!["oracle", "--decomp", &p5, "--problems", "ds:2,ds:2", "--measure", "min"],
        vec!["mso-check", "--decomp", &p5, "--formula", &ds],
    ];
    for cmd in &commands {
        let run = |extra: &[&str]| {
            let mut args = vec!["cwdiv"];
            args.extend_from_slice(cmd);
            args.extend_from_slice(extra);
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = cli::run(args, &mut out, &mut err);
            (code, out, err)
        };
        let first = run(&[]);
        if first.0 >= cli::EXIT_INPUT {
            return Err(format!("{cmd:?} failed: {}", String::from_utf8_lossy(&first.2)));
        }
        for extra in [&[][..], &["--threads", "4"][..], &["--threads", "3"][..]] {
            if run(extra) != first {
                return Err(format!("{cmd:?} {extra:?} differs"));
            }
        }
    }
    Ok(format!("{} commands byte-identical across repeated and threaded runs", commands.len()))
}

pub fn time<F: FnOnce() -> Check>(f: F) -> (Check, std::time::Duration) {
    let start = std::time::Instant::now();
    let r = f();
    (r, start.elapsed())
}
