use std::path::Path;
use std::process::{Command, Output};

use cliquenorm::graph::{count_cliques, random_graph};
use cliquenorm::harness::VerificationReport;
use cliquenorm::io::{read_graph, write_graph};
use cliquenorm::{BoundResult, Graph, Regime};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cliquenorm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn field(text: &str, name: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{name}: ")))
        .unwrap_or_else(|| panic!("no {name} in {text}"))
        .parse()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bound_examples() {
    let out = run(&["bound", "--p", "1", "--t", "3", "--C", "12"]);
    assert_eq!(code(&out), 0);
    assert_eq!(field(&stdout(&out), "bound"), 4.0);

    let out = run(&["bound", "--p", "3", "--t", "3", "--C", "4.932424"]);
    let text = stdout(&out);
    assert!((field(&text, "bound") - 5.0).abs() < 1e-5);
    assert_eq!(field(&text, "s_int"), 3.0);
    assert_eq!(field(&text, "s_real"), 3.0);

    let out = run(&["bound", "--p", "1", "--t", "4", "--r", "3", "--j", "1", "--C", "30"]);
    assert!((field(&stdout(&out), "bound") - 5.0).abs() < 1e-9);

    let out = run(&["bound", "--p", "inf", "--t", "3", "--n", "12", "--delta", "4"]);
    assert_eq!(field(&stdout(&out), "bound"), 20.0);
}

#[test]
fn bound_exit_codes() {
    assert_eq!(code(&run(&["bound", "--p", "-1", "--t", "3", "--C", "12"])), 2);
    assert_eq!(code(&run(&["bound", "--p", "1", "--t", "2", "--C", "12"])), 2);
    assert_eq!(code(&run(&["bound", "--p", "1", "--t", "3"])), 2);
    assert_eq!(code(&run(&["bound", "--p", "inf", "--t", "3", "--C", "5"])), 2);
    assert_eq!(code(&run(&["bound", "--p", "1", "--t", "x"])), 2);
    // 12 * 2^3 = 96 > C^3 = 95.
    let c = 95f64.cbrt().to_string();
    assert_eq!(code(&run(&["bound", "--p", "3", "--t", "3", "--n", "12", "--C", &c])), 3);
    let c = 324f64.cbrt().to_string();
    let out = run(&["bound", "--p", "3", "--t", "3", "--n", "12", "--C", &c]);
    assert_eq!(code(&out), 0);
    assert!((field(&stdout(&out), "bound") - 12.0).abs() < 1e-9);
}

#[test]
fn bound_json_round_trips() {
    for args in [
        vec!["bound", "--p", "1", "--t", "3", "--C", "12", "--json"],
        vec!["bound", "--p", "2.5", "--t", "3", "--C", "7.3", "--json"],
        vec!["bound", "--p", "2", "--t", "4", "--r", "3", "--C", "9", "--json"],
    ] {
        let text = stdout(&run(&args));
        let parsed: BoundResult = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap(), text.trim_end());
        let p: f64 = args[2].parse().unwrap();
        let t: u32 = args[4].parse().unwrap();
        let direct = if args.contains(&"--r") {
            cliquenorm::bounds::hyperclique_bound(p, t, 3, 1, 9.0).unwrap()
        } else {
            cliquenorm::bounds::clique_bound(p, t, args[6].parse().unwrap()).unwrap()
        };
        assert_eq!(parsed, direct);
    }
}

fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
}

#[test]
fn count_files() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = dir.path().join("k5.txt");
    write_graph(&k5, &Graph::complete(5)).unwrap();
    assert_eq!(stdout(&run(&["count", "--input", path_str(&k5), "--t", "3"])).trim(), "10");

    let pet = dir.path().join("petersen.txt");
    write_graph(&pet, &petersen()).unwrap();
    assert_eq!(stdout(&run(&["count", "--input", path_str(&pet), "--t", "3"])).trim(), "0");

    let g = random_graph(14, 0.6, 99).unwrap();
    let rnd = dir.path().join("random.txt");
    write_graph(&rnd, &g).unwrap();
    // Oracle: test every triple directly.
    let mut naive = 0;
    for a in 0..14 {
        for b in a + 1..14 {
            for c in b + 1..14 {
                naive += u64::from(g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c));
            }
        }
    }
    let out = stdout(&run(&["count", "--input", path_str(&rnd), "--t", "3"]));
    assert_eq!(out.trim().parse::<u64>().unwrap(), naive);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 2\n0 1\n0 1\n").unwrap();
    let out = run(&["count", "--input", path_str(&bad), "--t", "3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(code(&run(&["count", "--input", "/nonexistent/file", "--t", "3"])), 2);
}

#[test]
fn construct_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("disjoint.txt");
    let out = run(&["construct", "--type", "disjoint", "--sizes", "3,3,3,3,3", "--out", path_str(&path)]);
    assert_eq!(code(&out), 0);
    let g = read_graph(&path).unwrap();
    assert_eq!(g.n(), 15);
    assert_eq!(count_cliques(&g, 3), 5);
    assert_eq!(g, cliquenorm::graph::construct_disjoint_cliques(&[3; 5]));

    let out = run(&["construct", "--type", "gls", "--n", "10", "--delta", "4"]);
    let g = cliquenorm::io::parse_graph(&stdout(&out)).unwrap();
    assert_eq!(g, cliquenorm::graph::construct_disjoint_cliques(&[5, 5]));

    let out = run(&["construct", "--type", "hyper-complete", "--u", "5", "--r", "3"]);
    let h = cliquenorm::io::parse_hypergraph(&stdout(&out)).unwrap();
    assert_eq!(h.edge_count(), 10);
    assert_eq!(h.count_hypercliques(4).unwrap(), 5);

    assert_eq!(code(&run(&["construct", "--type", "gls", "--n", "10"])), 2);
    assert_eq!(code(&run(&["construct", "--type", "disjoint"])), 2);
    assert_eq!(code(&run(&["construct", "--type", "star", "--u", "3"])), 2);
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--suite", "graphs-exhaustive", "--n", "5", "--t", "3", "--p", "1,2,3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("violations: 0"));

    let out = run(&["verify", "--suite", "tightness", "--construction", "disjoint", "--m", "5", "--u", "3", "--t", "3", "--p", "3"]);
    assert_eq!(code(&out), 0);
    assert!((field(&stdout(&out), "ratio") - 1.0).abs() < 1e-9);

    let out = run(&["verify", "--suite", "tightness", "--construction", "clique", "--u", "4", "--p", "3"]);
    assert_eq!(code(&out), 3);

    let out = run(&["verify", "--suite", "prop9", "--p", "3", "--t", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(field(&stdout(&out), "root residual"), 0.0);

    let out = run(&["verify", "--suite", "fixed-n", "--n", "12", "--t", "3", "--p", "3", "--samples", "200", "--seed", "7"]);
    assert_eq!(code(&out), 0);

    let out = run(&["verify", "--suite", "hyper-exhaustive", "--n", "5", "--r", "3", "--j", "1", "--t", "4", "--p", "1,1.5"]);
    assert_eq!(code(&out), 0);

    assert_eq!(code(&run(&["verify", "--suite", "graphs-exhaustive", "--n", "9"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "graphs-exhaustive"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "prop9", "--p", "1", "--t", "3"])), 2);
}

#[test]
fn verify_json_is_reproducible() {
    let args = [
        "verify", "--suite", "graphs-random", "--n", "12", "--samples", "300", "--t", "3", "--p", "1,3", "--seed", "11",
        "--json",
    ];
    let a: VerificationReport = serde_json::from_str(&stdout(&run(&args))).unwrap();
    let b: VerificationReport = serde_json::from_str(&stdout(&run(&args))).unwrap();
    assert!(a.same_outcome(&b));
    assert!(a.passed());
    let text = serde_json::to_string(&a).unwrap();
    assert_eq!(serde_json::from_str::<VerificationReport>(&text).unwrap(), a);

    let other = [
        "verify", "--suite", "graphs-random", "--n", "12", "--samples", "300", "--t", "3", "--p", "1,3", "--seed", "12",
        "--json",
    ];
    let c: VerificationReport = serde_json::from_str(&stdout(&run(&other))).unwrap();
    assert!(!a.same_outcome(&c));
}

#[test]
fn thread_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_cliquenorm"))
        .args(["verify", "--suite", "graphs-exhaustive", "--n", "4", "--json"])
        .env("CLIQUENORM_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let bad = Command::new(env!("CARGO_BIN_EXE_cliquenorm"))
        .args(["verify", "--suite", "graphs-exhaustive", "--n", "4"])
        .env("CLIQUENORM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn entropy_command() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = dir.path().join("k4.txt");
    write_graph(&k4, &Graph::complete(4)).unwrap();
    let out = run(&["entropy", "--input", path_str(&k4), "--t", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let x: Vec<f64> = serde_json::from_value(v["chain"]["x"].clone()).unwrap();
    for (got, want) in x.iter().zip([4.0, 3.0, 2.0]) {
        assert!((got - want).abs() < 1e-12);
    }

    let star = dir.path().join("star.txt");
    write_graph(&star, &Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap()).unwrap();
    let out = run(&["entropy", "--input", path_str(&star), "--t", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let x: Vec<f64> = serde_json::from_value(v["chain"]["x"].clone()).unwrap();
    assert!((x[0] - 12f64.sqrt()).abs() < 1e-12 && (x[1] - 3f64.sqrt()).abs() < 1e-12);

    let mixed = dir.path().join("k3k4.txt");
    write_graph(&mixed, &cliquenorm::graph::construct_disjoint_cliques(&[3, 4])).unwrap();
    let out = run(&["entropy", "--input", path_str(&mixed), "--t", "3", "--p", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["claim6"]["gap"].as_f64().unwrap() >= -1e-9);

    let out = run(&["entropy", "--input", path_str(&mixed), "--t", "3", "--p", "3", "--u", "3.5", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["claim7"]["chain_n_ok"].as_bool().unwrap());

    let empty = dir.path().join("empty.txt");
    write_graph(&empty, &Graph::empty(6)).unwrap();
    assert_eq!(code(&run(&["entropy", "--input", path_str(&empty), "--t", "3"])), 2);
}

fn sweep_rows(text: &str) -> Vec<(f64, String, f64, f64)> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["p", "regime", "u", "bound"]);
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].to_string(), r[2].parse().unwrap(), r[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn sweep_flips_once_at_threshold() {
    let out = run(&["sweep", "--t", "3", "--C", "12", "--p-from", "0.5", "--p-to", "5", "--steps", "90"]);
    assert_eq!(code(&out), 0);
    let rows = sweep_rows(&stdout(&out));
    assert_eq!(rows.len(), 91);
    assert!(rows.windows(2).all(|w| w[0].0 < w[1].0));
    let flips = rows.windows(2).filter(|w| w[0].1 != w[1].1).count();
    assert_eq!(flips, 1);
    for (p, regime, _, _) in &rows {
        assert_eq!(regime, if *p <= 2.0 { "sub" } else { "super" });
    }
    let at_one = rows.iter().find(|r| r.0 == 1.0).unwrap();
    assert!((at_one.3 - 4.0).abs() < 1e-9);
    assert!(String::from_utf8_lossy(&out.stderr).contains("regime changes"));
    for line in stdout(&out).lines().skip(1) {
        let p = line.split(',').next().unwrap();
        let p = p.strip_prefix("0.").unwrap_or(p);
        assert_eq!(p.chars().filter(|c| c.is_ascii_digit()).count(), 12, "{line}");
    }
}

#[test]
fn sweep_at_the_threshold_for_a_clique_norm() {
    // C = 6 is the p = 2 norm of K4. The subcritical side is continuous up to
    // p = 2 where the bound is C(4,3) = 4; just above, the bound jumps to
    // roughly C^2/3! = 6.
    let out = run(&["sweep", "--t", "3", "--C", "6", "--p-from", "1.999", "--p-to", "2.001", "--steps", "2"]);
    let rows = sweep_rows(&stdout(&out));
    assert_eq!(rows[1].1, "sub");
    assert!((rows[1].3 - 4.0).abs() < 1e-9);
    assert!((rows[0].3 - rows[1].3).abs() < 1e-2);
    assert_eq!(rows[2].1, "super");
    assert!(rows[2].3 > 5.5 && rows[2].3 < 6.0);
}

#[test]
fn sweep_output_file_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep", "--t", "3", "--C", "12", "--p-from", "1", "--p-to", "4", "--steps", "6", "--out", path_str(&path),
        "--with-construction",
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("p,regime,u,bound,construction_ratio\n"));
    assert_eq!(text.lines().count(), 8);

    assert_eq!(code(&run(&["sweep", "--t", "3", "--C", "12", "--p-from", "2", "--p-to", "2", "--steps", "4"])), 2);
    assert_eq!(code(&run(&["sweep", "--t", "3", "--C", "12", "--p-from", "1", "--p-to", "2", "--steps", "0"])), 2);
}

#[test]
fn supercritical_human_output_shows_both_maximisers() {
    let text = stdout(&run(&["bound", "--p", "2.5", "--t", "3", "--C", "10"]));
    assert!(text.contains("regime: supercritical"));
    assert_eq!(field(&text, "s_int"), 4.0);
    assert!((field(&text, "s_real") - 4.0).abs() < 1e-9);
    let parsed: BoundResult = serde_json::from_str(&stdout(&run(&["bound", "--p", "2.5", "--t", "3", "--C", "10", "--json"]))).unwrap();
    assert_eq!(parsed.regime, Regime::Supercritical);
}
