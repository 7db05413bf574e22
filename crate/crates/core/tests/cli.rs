use std::path::Path;

use cwdiv::cli::{run, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK};
use cwdiv::graph::{gen_clique, gen_complete_bipartite, gen_path, parse_decomposition};

fn cwdiv(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("cwdiv").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn gen_round_trips() {
    for n in 1..=12 {
        let size = n.to_string();
        let cases = [
            (vec!["gen", "path", &size], gen_path(n)),
            (vec!["gen", "clique", &size], gen_clique(n)),
            (vec!["gen", "biclique", &size, "2"], gen_complete_bipartite(n, 2)),
        ];
        for (args, want) in cases {
            let (code, out, _) = cwdiv(&args);
            assert_eq!(code, EXIT_OK);
            let d = parse_decomposition(&out).unwrap();
            assert!(d.validate().is_empty());
            assert_eq!(d.evaluate(), want.evaluate(), "{args:?}");
        }
        let (code, out, _) = cwdiv(&["gen", "random", &n.to_string(), "3", "--seed", "9"]);
        assert_eq!(code, EXIT_OK);
        let d = parse_decomposition(&out).unwrap();
        assert_eq!(d.vertex_count(), n);
        assert!(d.width() <= 3);
        assert_eq!(cwdiv(&["gen", "random", &n.to_string(), "3", "--seed", "9"]).1, out);
    }
}

#[test]
fn check_reports_problems() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.cw", &gen_path(5).to_string());
    assert_eq!(cwdiv(&["check", &p5]).1, "valid, n=5 m=4 width=3\n");
    let cases = [
        "intro n1 v1 1\nintro n2 v1 1\nunion n3 n1 n2\nroot n3\n",
        "intro n1 v1 1\naddedges n2 n1 1 1\nroot n2\n",
        "intro n1 v1 1\nunion n2 n1 n9\nroot n2\n",
        "intro n1 v1 0\nroot n1\n",
        "intro n1 v1\nroot n1\n",
        "frobnicate n1\n",
        "",
    ];
    for text in cases {
        let bad = write(dir.path(), "bad.cw", text);
        let (code, _, err) = cwdiv(&["check", &bad]);
        assert_eq!(code, EXIT_INPUT, "{text:?}");
        assert!(!err.is_empty());
    }
    let (code, _, _) = cwdiv(&["check", &dir.path().join("missing.cw").to_string_lossy()]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn exit_codes_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.cw", &gen_path(5).to_string());
    let (code, out, _) = cwdiv(&["diverse", "--decomp", &p5, "--problems", "ds:2,ds:2", "--measure", "sum", "--d", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "instance,r,measure,d,feasible,best_value,solutions,wall_ms\np5,2,sum,4,true,4,v1 v4;v2 v5,\n");
    let (code, out, _) = cwdiv(&["diverse", "--decomp", &p5, "--problems", "ds:2,ds:2", "--d", "5"]);
    assert_eq!(code, EXIT_INFEASIBLE);
    assert!(out.contains(",false,4,"));
    let (code, _, _) = cwdiv(&["diverse-min", "--decomp", &p5, "--problems", "ds:2,ds:2", "--d", "5"]);
    assert_eq!(code, EXIT_INFEASIBLE);
    let (code, out, _) = cwdiv(&["diverse", "--decomp", &p5, "--problems", "ds:2", "--measure", "star"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(",1,star,"), "{out}");
    let (code, _, _) = cwdiv(&["solve", "--decomp", &p5, "--problem", "vc:1"]);
    assert_eq!(code, EXIT_INFEASIBLE);
    for bad in [
        vec!["diverse", "--decomp", &p5, "--problems", "xx:2,ds:2"],
        vec!["diverse-min", "--decomp", &p5, "--problems", "ds:2", "--d", "1"],
        vec!["diverse", "--decomp", &p5, "--problems", "ds:2,ds:2", "--measure", "nope"],
        vec!["solve", "--decomp", &p5, "--problem", "mso:/nonexistent"],
        vec!["frobnicate"],
    ] {
        assert_eq!(cwdiv(&bad).0, EXIT_INPUT, "{bad:?}");
    }
}

#[test]
fn json_and_timing() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.cw", &gen_path(5).to_string());
    let (code, out, _) = cwdiv(&["--format", "json", "diverse", "--decomp", &p5, "--problems", "ds:3,vc:3", "--measure", "star"]);
    assert_eq!(code, EXIT_OK);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    let row = &rows[0];
    assert_eq!(row["measure"], "star");
    assert_eq!(row["solutions"].as_array().unwrap().len(), 2);
    assert!(row["wall_ms"].is_null());
    let (_, out, _) = cwdiv(&["--timing", "--format", "json", "solve", "--decomp", &p5, "--problem", "ds:2"]);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(rows[0]["wall_ms"].is_u64());
}

#[test]
fn verify_and_oracle_agree() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.cw", &gen_path(5).to_string());
    let table = write(dir.path(), "t.table", "r 3\n000 0\n100 1\n010 1\n001 1\n110 4\n101 4\n011 4\n111 2\n");
    let measure = format!("table:{table}");
    for args in [
        vec!["diverse", "--decomp", &p5, "--problems", "ds:2,vc:3,ds:3", "--measure", &measure],
        vec!["diverse", "--decomp", &p5, "--problems", "vc:3,vc:3", "--measure", "star"],
        vec!["diverse-min", "--decomp", &p5, "--problems", "ds:3,ds:3,ds:3", "--d", "2"],
        vec!["solve", "--decomp", &p5, "--problem", "minvc:5"],
    ] {
        let mut verified = vec!["--verify"];
        verified.extend_from_slice(&args);
        let plain = cwdiv(&args);
        assert_eq!(cwdiv(&verified), plain, "{args:?}");
    }
    let graph = write(dir.path(), "p5.graph", "v v1\nv v2\nv v3\nv v4\nv v5\ne v1 v2\ne v2 v3\ne v3 v4\ne v4 v5\n");
    let (code, out, _) = cwdiv(&["oracle", "--graph", &graph, "--problems", "minds,minds,minds,minds", "--measure", "sum"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(",20,"), "{out}");
    let (_, from_graph, _) = cwdiv(&["oracle", "--graph", &graph, "--problems", "ds:2,ds:2", "--measure", "star"]);
    let (_, from_decomp, _) = cwdiv(&["oracle", "--decomp", &p5, "--problems", "ds:2,ds:2", "--measure", "star"]);
    let best = |s: &str| s.lines().nth(1).unwrap().split(',').nth(5).unwrap().to_owned();
    assert_eq!(best(&from_graph), best(&from_decomp));
    let (_, engine, _) = cwdiv(&["diverse", "--decomp", &p5, "--problems", "ds:2,ds:2", "--measure", "star"]);
    assert_eq!(best(&engine), best(&from_decomp));
}

#[test]
fn mso_check_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.cw", &gen_clique(4).to_string());
    let p4 = write(dir.path(), "p4.cw", &gen_path(4).to_string());
    let universal = write(dir.path(), "u.mso", "exists vertex x forall vertex y : x = y | adj(x,y)");
    let feasible = |out: String| out.lines().nth(1).unwrap().split(',').nth(4).unwrap().to_owned();
    assert_eq!(feasible(cwdiv(&["mso-check", "--decomp", &k4, "--formula", &universal]).1), "true");
    assert_eq!(feasible(cwdiv(&["mso-check", "--decomp", &p4, "--formula", &universal]).1), "false");
    let bad = write(dir.path(), "bad.mso", "exists vertex x : adj(x,");
    assert_eq!(cwdiv(&["mso-check", "--decomp", &k4, "--formula", &bad]).0, EXIT_INPUT);
    let is = write(dir.path(), "is.mso", "exists set S forall vertex x forall vertex y : adj(x,y) -> !(x in S & y in S)");
    let mso = format!("mso:{is}");
    let (code, out, _) = cwdiv(&["--verify", "diverse", "--decomp", &p4, "--problems", &format!("{mso},{mso}")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(",true,4,"), "{out}");
}
