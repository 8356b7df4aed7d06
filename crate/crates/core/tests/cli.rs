use std::path::Path;
use std::process::{Command, Output};

use lulc::export;
use lulc::{SimpleGraph, WeightedHypergraph};

fn lulc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lulc")).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn lc_pair(dir: &Path) {
    let a = SimpleGraph::from_edges(5, &[(0, 1), (0, 3), (1, 3), (1, 4), (2, 3)]).unwrap();
    let c = a.local_complement(1).unwrap();
    write(dir, "a.txt", &a.to_adjacency_text());
    write(dir, "c.json", &export::to_json(&c));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = lulc(&["verify", "--spec", "bipartite:7:5", "-o", "r.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = export::read_json(&dir.path().join("r.json")).unwrap();
    assert_eq!(report["confirmed"], true);
    assert_eq!(report["lc"]["verdict"], "no-by-parity");
    assert_eq!(report["lemma"]["parity"]["eta_edges"], 21);

    assert_eq!(code(&lulc(&["verify", "--spec", "bipartite:3:2"], dir.path())), 1);
    assert_eq!(code(&lulc(&["verify", "--spec", "twentyseven"], dir.path())), 0);
    assert_eq!(code(&lulc(&["verify", "--spec", "bipartite:9"], dir.path())), 3);
}

#[test]
fn gen_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        vec!["gen", "bipartite", "--n", "7", "--r", "5", "-o", "b.json", "--adj", "b.txt", "--dot", "b.dot"],
        vec!["gen", "twentyseven", "-o", "t.json"],
        vec!["gen", "star", "--n", "4", "-o", "s.json"],
        vec!["gen", "g2h7", "-o", "g.json", "--witness", "w.json"],
    ] {
        let out = lulc(&args, d);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let b: SimpleGraph = export::read_json(&d.join("b.json")).unwrap();
    assert_eq!(b.n(), 28);
    assert_eq!(export::read_graph(&d.join("b.txt")).unwrap(), b);
    assert!(std::fs::read_to_string(d.join("b.dot")).unwrap().starts_with("graph G {"));
    assert_eq!(export::read_graph(&d.join("t.json")).unwrap().n(), 27);

    // emitted JSON re-parses and re-emits identically
    let text = std::fs::read_to_string(d.join("b.json")).unwrap();
    let again = lulc(&["export", "b.json", "--format", "json"], d);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
    let adj = lulc(&["export", "b.json", "--format", "adj"], d);
    assert_eq!(String::from_utf8(adj.stdout).unwrap(), std::fs::read_to_string(d.join("b.txt")).unwrap());

    assert_eq!(code(&lulc(&["gen", "star", "--n", "0"], d)), 3);
    assert_eq!(code(&lulc(&["gen", "bipartite", "--n", "3", "--r", "5"], d)), 3);
    assert_eq!(code(&lulc(&["gen", "star", "--n", "3", "--witness", "x.json"], d)), 3);
}

#[test]
fn transform_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&lulc(&["gen", "star", "--n", "4", "-o", "s.json"], d)), 0);
    write(d, "quarter.json", r#"[{"q": 0, "g": "Xp", "a": "1/4"}]"#);
    write(d, "empty.json", "[]");
    let out = lulc(&["transform", "s.json", "quarter.json", "-o", "quarter_out.json", "--ledger"], d);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("{1,2,3}:1"));
    let h: WeightedHypergraph = export::read_json(&d.join("quarter_out.json")).unwrap();
    assert_eq!(h.edge_count(), 10);

    let same = lulc(&["transform", "s.json", "empty.json"], d);
    assert_eq!(String::from_utf8(same.stdout).unwrap(), std::fs::read_to_string(d.join("s.json")).unwrap());

    // qubit 1 now carries fractional edges
    write(d, "x1.json", r#"[{"q": 1, "g": "X"}]"#);
    let out = lulc(&["transform", "quarter_out.json", "x1.json"], d);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("step 0"));
    assert_eq!(code(&lulc(&["transform", "quarter_out.json", "x1.json", "--extended"], d)), 0);

    assert_eq!(code(&lulc(&["gen", "g2h7", "-o", "g.json", "--witness", "w.json"], d)), 0);
    assert_eq!(code(&lulc(&["transform", "g.json", "w.json", "-o", "out.json"], d)), 0);
    let out: WeightedHypergraph = export::read_json(&d.join("out.json")).unwrap();
    assert!(!out.is_graph_state());
    assert_eq!(code(&lulc(&["oracle-check", "g.json", "w.json"], d)), 0);
    assert_eq!(code(&lulc(&["transform", "missing.json", "w.json"], d)), 3);
}

#[test]
fn check_lc_and_orbit() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    lc_pair(d);
    let out = lulc(&["check-lc", "a.txt", "c.json"], d);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "equivalent");
    assert_eq!(v["witness_verified"], true);
    assert_eq!(code(&lulc(&["check-lc", "a.txt", "a.txt"], d)), 0);
    assert_eq!(code(&lulc(&["check-lc", "a.txt", "c.json", "--budget", "0"], d)), 2);

    write(d, "p2.txt", "2\n01\n10\n");
    write(d, "e2.txt", "2\n00\n00\n");
    assert_eq!(code(&lulc(&["check-lc", "p2.txt", "e2.txt"], d)), 1);
    assert_eq!(code(&lulc(&["check-lc", "p2.txt", "a.txt"], d)), 3);

    let out = lulc(&["orbit", "a.txt", "--count"], d);
    assert_eq!(code(&out), 0);
    let size: usize = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!(size > 1);
    assert_eq!(code(&lulc(&["orbit", "a.txt", "--cap", "2"], d)), 2);

    assert_eq!(code(&lulc(&["gen", "bipartite", "--n", "7", "--r", "5", "-o", "g1.json"], d)), 0);
    assert_eq!(code(&lulc(&["verify", "--spec", "bipartite:7:5", "-o", "r.json"], d)), 0);
    let mut g2: SimpleGraph = export::read_json(&d.join("g1.json")).unwrap();
    for u in 0..7 {
        for v in (u + 1)..7 {
            g2.add_edge(u, v).unwrap();
        }
    }
    write(d, "g2.json", &export::to_json(&g2));
    assert_eq!(code(&lulc(&["check-lc", "g1.json", "g2.json"], d)), 1);
}

#[test]
fn search_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&lulc(&["gen", "bipartite", "--n", "4", "--r", "3", "-o", "b.json"], d)), 0);
    let out = lulc(&["search", "b.json", "--target", "b.json", "--max-size", "2"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!v["candidates"].as_array().unwrap().is_empty());
    assert_eq!(code(&lulc(&["search", "b.json", "--degrees", "8,8,8,8,8,8,8,8", "--max-size", "2"], d)), 1);
    assert_eq!(code(&lulc(&["search", "b.json", "--degrees", "8,8,8,8,8,8,8,8", "--budget", "2"], d)), 2);
    let a = lulc(&["--seed", "4", "search", "b.json", "--target", "b.json", "--sample", "--budget", "30"], d);
    let b = lulc(&["--seed", "4", "--threads", "2", "search", "b.json", "--target", "b.json", "--sample", "--budget", "30"], d);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&lulc(&["search", "b.json"], d)), 3);
}
