use cycle_ramsey::io::{read_edge_list, to_edge_list};
use cycle_ramsey::oracles::{verify_certificate, Certificate};
use cycle_ramsey::witness::chvatal_harary;
use cycle_ramsey::{EdgeColoring, Graph};
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycle-ramsey"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write_graph(dir: &Path, name: &str, g: &Graph) -> String {
    let p = dir.join(name);
    std::fs::write(&p, to_edge_list(g)).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn witness_ch_writes_graph_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("w");
    let o = run(&[
        "witness",
        "--ell",
        "4",
        "--n",
        "3",
        "--method",
        "ch",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("r(C_4,K_3) ≥ 7"));
    let red = read_edge_list(&prefix.with_extension("el")).unwrap();
    assert_eq!(red.order(), 6);
    assert_eq!(red.edge_count(), 6);
    let report = json(&prefix.with_extension("json"));
    assert_eq!(report["cycles_status"], "Certified");
    assert_eq!(report["alpha_status"], "Certified");
}

#[test]
fn witness_ch_requires_ell() {
    assert_eq!(code(&run(&["witness", "--n", "3", "--method", "ch"])), 2);
}

#[test]
fn search_certificate_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let o = run(&[
        "search",
        "--ell",
        "6",
        "--n",
        "4",
        "--random-coloring",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&out);
    let cert: Certificate = serde_json::from_value(v["outcome"]["certificate"].clone()).unwrap();
    let c = cycle_ramsey::stability::random_coloring(16, 9);
    assert!(verify_certificate(&c, &cert, 6, 4).unwrap());
}

#[test]
fn search_on_file_input() {
    let dir = tempfile::tempdir().unwrap();
    // CH(5,3) plus one vertex: order 9 forces a red C_5 or a blue K_3
    let ch = chvatal_harary(5, 3).unwrap().red;
    let mut edges = ch.edge_list();
    edges.extend((0..4).map(|v| (v, 8)));
    let g = Graph::from_edges(9, &edges).unwrap();
    let input = write_graph(dir.path(), "g.el", &g);
    let out = dir.path().join("s.json");
    let o = run(&[
        "search",
        "--ell",
        "5",
        "--n",
        "3",
        "--in",
        &input,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let cert: Certificate =
        serde_json::from_value(json(&out)["outcome"]["certificate"].clone()).unwrap();
    assert!(verify_certificate(&EdgeColoring::new(g), &cert, 5, 3).unwrap());
}

#[test]
fn search_wrong_order_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "g.el", &Graph::cycle(6));
    assert_eq!(
        code(&run(&["search", "--ell", "6", "--n", "3", "--in", &input])),
        2
    );
}

#[test]
fn search_excluded_case_is_incomplete() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "c5.el", &Graph::cycle(5));
    let o = run(&["search", "--ell", "3", "--n", "3", "--in", &input]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).starts_with("incomplete"));
}

#[test]
fn search_rejects_unknown_params() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    std::fs::write(&p, r#"{"eps": 0.1, "bogus": 1}"#).unwrap();
    let o = run(&[
        "search",
        "--ell",
        "6",
        "--n",
        "3",
        "--random-coloring",
        "1",
        "--params",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn exact_values_and_exclusion() {
    let o = run(&[
        "exact",
        "--ell",
        "4",
        "--n",
        "3",
        "--nmax",
        "8",
        "--threads",
        "2",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("r = 7 (formula: 7, match)"));
    let o = run(&["exact", "--ell", "3", "--n", "3", "--nmax", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("MISMATCH"));
    let o = run(&["exact", "--ell", "4", "--n", "3", "--nmax", "5"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn exact_json_output() {
    let o = run(&["exact", "--ell", "5", "--n", "2", "--nmax", "6", "--json"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let start = text.find('{').unwrap();
    let end = text.rfind('}').unwrap();
    let v: Value = serde_json::from_str(&text[start..=end]).unwrap();
    assert_eq!(v["formula"], 5);
    assert_eq!(v["matches_formula"], true);
}

#[test]
fn lemma_reports_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "star.el", &Graph::star(20));
    let out = dir.path().join("l.json");
    let o = run(&[
        "lemma",
        "--in",
        &input,
        "--out",
        out.to_str().unwrap(),
        "bfs-cutoff",
        "--gamma",
        "2",
        "--root",
        "0",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&out);
    assert_eq!(v["lemma"], "bfs-cutoff");
    assert_eq!(v["result"]["m"], 1);
    assert_eq!(v["all_hold"], true);
}

#[test]
fn lemma_hypothesis_failure_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "c.el", &Graph::cycle(30));
    let o = run(&["lemma", "--in", &input, "drc"]);
    assert_eq!(code(&o), 4);
    let o = run(&[
        "lemma",
        "--in",
        &input,
        "cycle-range",
        "--d1",
        "4",
        "--gamma",
        "1.5",
    ]);
    assert_eq!(code(&o), 4);
}

#[test]
fn lemma_cycle_range_on_clique() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "k.el", &Graph::complete(100));
    let out = dir.path().join("l.json");
    let o = run(&[
        "lemma",
        "--in",
        &input,
        "--out",
        out.to_str().unwrap(),
        "cycle-range",
        "--d1",
        "4",
        "--gamma",
        "1.5",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&out)["all_hold"], true);
}

#[test]
fn lemma_hub_connect_on_bipartite_host() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "kb.el", &Graph::complete_bipartite(120, 120));
    let o = run(&[
        "lemma",
        "--in",
        &input,
        "hub-connect",
        "--u",
        "30",
        "--eps",
        "0.7",
        "--requests",
        "10",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("10/10 requests"));
}

#[test]
fn bench_exact_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.json");
    let o = run(&["bench", "--suite", "exact", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    for r in rows {
        let excluded = r["ell"] == 3 && r["n"] == 3;
        assert_eq!(r["matches_formula"], !excluded, "{r}");
    }
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["nonsense"])), 2);
    assert_eq!(code(&run(&["exact", "--ell", "4"])), 2);
    assert_eq!(code(&run(&["search", "--ell", "6", "--n", "3"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}
