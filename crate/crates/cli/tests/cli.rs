use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use netstrength::formats::{self, DismantleReport, FitReport, Manifest};
use netstrength_core::dismantle::ilp::IlpModel;
use netstrength_core::Graph;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_netstrength"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_graph(dir: &Path, id: &str, g: &Graph) -> PathBuf {
    let path = dir.join(format!("{id}.edges"));
    formats::save_edge_list(g, &path).unwrap();
    path
}

fn path_graph(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
}

fn csv_field(text: &str, row_key: &str, col: usize) -> String {
    text.lines()
        .find(|l| l.split(',').next() == Some(row_key))
        .unwrap_or_else(|| panic!("no row {row_key} in\n{text}"))
        .split(',')
        .nth(col)
        .unwrap()
        .to_string()
}

#[test]
fn gen_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        ok(&[
            "gen",
            "--model",
            "gnp",
            "--n",
            "15",
            "--p",
            "0.2",
            "--count",
            "4",
            "--seed",
            "7",
            "--out",
            p(dir.path()),
        ]);
    }
    for i in 0..4 {
        let name = format!("graph_{i}.edges");
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap()
        );
    }
    let manifest: Manifest =
        serde_json::from_str(&fs::read_to_string(a.path().join("graph_manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest.count, 4);
    assert_eq!(manifest.seed, 7);
    assert_eq!(manifest.files.len(), 4);

    // Every node is present even when isolated.
    let g = formats::load_edge_list(&a.path().join("graph_0.edges"))
        .unwrap()
        .graph;
    assert_eq!(g.n(), 15);
}

#[test]
fn gen_gnm_edge_count_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "gen",
        "--model",
        "gnm",
        "--n",
        "10",
        "--m",
        "12",
        "--seed",
        "1",
        "--out",
        p(dir.path()),
    ]);
    let g = formats::load_edge_list(&dir.path().join("graph_0.edges"))
        .unwrap()
        .graph;
    assert_eq!(g.edge_count(), 12);

    let out = run(&[
        "gen",
        "--model",
        "gnm",
        "--n",
        "5",
        "--m",
        "11",
        "--out",
        p(dir.path()),
    ]);
    assert!(!out.status.success());
    let out = run(&["gen", "--model", "gnp", "--n", "5", "--out", p(dir.path())]);
    assert!(!out.status.success());
}

#[test]
fn strength_of_connected_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(dir.path(), "p20", &path_graph(20));
    let text = ok(&["strength", p(&path)]);
    let raw: f64 = csv_field(&text, "proposed", 2).parse().unwrap();
    assert!((raw - 17.846).abs() < 1e-9, "{text}");
}

#[test]
fn strength_all_metrics_on_edgeless() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(dir.path(), "e4", &Graph::empty(4));
    let text = ok(&["strength", p(&path), "--all-metrics"]);
    assert_eq!(csv_field(&text, "cole2", 2), "1");
    assert_eq!(csv_field(&text, "cole1", 2), "1");
    assert_eq!(csv_field(&text, "gfp", 2), "1");
    assert_eq!(csv_field(&text, "cole2", 3), "0.25");
}

#[test]
fn strength_weight_extension() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(dir.path(), "p3", &path_graph(3));
    let weights = dir.path().join("w.csv");
    fs::write(&weights, "size,weight\n1,0.5\n2,0.25\n").unwrap();
    let out = run(&["strength", p(&path), "--weights", p(&weights)]);
    assert!(!out.status.success());
    let text = ok(&[
        "strength",
        p(&path),
        "--weights",
        p(&weights),
        "--clamp-weights",
    ]);
    assert_eq!(csv_field(&text, "proposed", 2), "0.75");
}

#[test]
fn strength_missing_file_fails() {
    let out = run(&["strength", "/nonexistent/graph.edges"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn duplicate_edges_warn() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.edges");
    fs::write(&path, "a b\nb a\nc c\n").unwrap();
    let out = run(&["strength", p(&path)]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("1 self-loop") && err.contains("1 duplicate"),
        "{err}"
    );
}

fn write_survey(dir: &Path, rows: &[(&str, f64)]) -> PathBuf {
    let path = dir.join("survey.csv");
    let mut text = String::from("graph_id,participant_id,estimate\n");
    for (i, (id, e)) in rows.iter().enumerate() {
        text.push_str(&format!("{id},p{i},{e}\n"));
    }
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn fit_weights_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let truth = [0.3, 0.9, 0.7, 0.8];
    let mut rows = Vec::new();
    let mut ids = Vec::new();
    // Graphs whose component sizes span 1..=4 with independent columns.
    let graphs = [
        ("a", Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap()),
        ("b", Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap()),
        ("c", Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap()),
        ("d", Graph::from_edges(4, [(0, 1)]).unwrap()),
        ("e", Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap()),
    ];
    for (id, g) in &graphs {
        write_graph(dir.path(), id, g);
        let c = netstrength_core::ccsd(g).unwrap();
        let sigma: f64 = c
            .nonzero()
            .map(|(s, k)| (s * k) as f64 * truth[s - 1])
            .sum();
        ids.push(id.to_string());
        rows.push((*id, sigma));
    }
    let survey = write_survey(dir.path(), &rows);
    let out_w = dir.path().join("fitted.csv");
    let text = ok(&[
        "fit-weights",
        "--survey",
        p(&survey),
        "--graphs",
        p(dir.path()),
        "--out",
        p(&out_w),
    ]);
    let report: FitReport = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(report.rank, 4);
    assert_eq!(report.graphs, 5);
    assert!(report.residual_norm < 1e-9);
    let w = formats::load_weights(&out_w).unwrap();
    for (got, want) in w.as_slice().iter().zip(truth) {
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    let report_path = dir.path().join("report.jsonl");
    let text = ok(&[
        "fit-weights",
        "--survey",
        p(&survey),
        "--graphs",
        p(dir.path()),
        "--out",
        p(&out_w),
        "--lambda",
        "1e6",
        "--report",
        p(&report_path),
    ]);
    assert!(text.is_empty());
    assert_eq!(fs::read_to_string(&report_path).unwrap().lines().count(), 1);
    let w = formats::load_weights(&out_w).unwrap();
    assert!(w.as_slice().iter().all(|x| x.abs() < 1e-3));
}

#[test]
fn fit_weights_rejects_bad_surveys() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "a", &path_graph(3));
    let out_w = dir.path().join("w.csv");

    let empty = write_survey(dir.path(), &[]);
    assert!(!run(&[
        "fit-weights",
        "--survey",
        p(&empty),
        "--graphs",
        p(dir.path()),
        "--out",
        p(&out_w)
    ])
    .status
    .success());

    let high = write_survey(dir.path(), &[("a", 4.0)]);
    assert!(!run(&[
        "fit-weights",
        "--survey",
        p(&high),
        "--graphs",
        p(dir.path()),
        "--out",
        p(&out_w)
    ])
    .status
    .success());

    let missing = write_survey(dir.path(), &[("zz", 1.0)]);
    assert!(!run(&[
        "fit-weights",
        "--survey",
        p(&missing),
        "--graphs",
        p(dir.path()),
        "--out",
        p(&out_w)
    ])
    .status
    .success());
    assert!(!out_w.exists());
}

#[test]
fn dismantle_star() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("star.edges");
    fs::write(&path, "hub a\nhub b\nhub c\nhub d\n").unwrap();
    for objective in ["proposed", "cole1", "cole2", "gfp"] {
        let text = ok(&[
            "dismantle",
            p(&path),
            "--k",
            "1",
            "--objective",
            objective,
            "--threads",
            "3",
        ]);
        let report: DismantleReport = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(report.removed, vec!["hub".to_string()], "{objective}");
        assert_eq!(report.objective, objective);
    }
}

#[test]
fn dismantle_rejects_large_k_and_searches() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(dir.path(), "p3", &path_graph(3));
    assert!(!run(&["dismantle", p(&path), "--k", "3"]).status.success());
    assert!(!run(&["dismantle", p(&path), "--k", "0"]).status.success());

    let big = write_graph(dir.path(), "p30", &path_graph(30));
    let out = run(&["dismantle", p(&big), "--k", "3"]);
    assert!(!out.status.success());
    ok(&["dismantle", p(&big), "--k", "3", "--max-subsets", "100000"]);
}

#[test]
fn dismantle_emits_and_checks_lp() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(dir.path(), "p3", &path_graph(3));
    let lp = dir.path().join("p3.lp");
    let text = ok(&["dismantle", p(&path), "--k", "1", "--emit-lp", p(&lp)]);
    let report: DismantleReport = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(report.removed, vec!["1".to_string()]);

    let lp_text = fs::read_to_string(&lp).unwrap();
    let binaries = lp_text.split("Binary\n").nth(1).unwrap();
    let ys: Vec<&str> = binaries
        .split_whitespace()
        .filter(|t| t.starts_with("y_"))
        .collect();
    assert_eq!(ys, ["y_0", "y_1", "y_2"]);
    assert!(lp_text.contains("budget:"));

    // A complete assignment for removing the middle node.
    let g = path_graph(3);
    let w = netstrength_core::default_weights();
    let model = IlpModel::new(&g, 1, &w).unwrap();
    let solution = dir.path().join("sol.txt");
    let lines: String = model
        .assignment_for_removal(&[1])
        .unwrap()
        .iter()
        .map(|(name, v)| format!("{name} {v}\n"))
        .collect();
    fs::write(&solution, lines).unwrap();
    let text = ok(&[
        "dismantle",
        p(&path),
        "--k",
        "1",
        "--check-solution",
        p(&solution),
    ]);
    let report: DismantleReport = serde_json::from_str(text.trim()).unwrap();
    let check = report.solution_check.unwrap();
    assert_eq!(check.removed, vec!["1".to_string()]);
    assert!((check.objective - 2.0 * 0.2221).abs() < 1e-12);
    assert!(check.gap.abs() < 1e-12);
    assert!(check.optimum_gap.abs() < 1e-12);

    fs::write(&solution, "y_0 1\ny_1 1\n").unwrap();
    assert!(!run(&[
        "dismantle",
        p(&path),
        "--k",
        "1",
        "--check-solution",
        p(&solution)
    ])
    .status
    .success());
}

#[test]
fn eval_match_reproduces_single_node_table() {
    let dir = tempfile::tempdir().unwrap();
    let expected = [
        ("proposed", "0.75", "1.25"),
        ("cole1", "0.5", "1.625"),
        ("cole2", "0.375", "1.75"),
        ("gfp", "0.375", "1.75"),
    ];
    for (method, exact, rank) in expected {
        let csv_out = dir.path().join(format!("{method}.csv"));
        let text = ok(&[
            "eval",
            "--mode",
            "match",
            "--predictions",
            &fixture(&format!("single_{method}.csv")),
            "--ground-truth",
            &fixture("single_truth.csv"),
            "--out",
            p(&csv_out),
        ]);
        assert!(
            text.contains(&format!("exact match:      {exact}\n")),
            "{method}: {text}"
        );
        let report = fs::read_to_string(&csv_out).unwrap();
        assert_eq!(csv_field(&report, "exact_match", 3), exact);
        assert_eq!(csv_field(&report, "rank_match", 3), rank);
        assert_eq!(csv_field(&report, "percentage_match", 3), "-");
    }
}

#[test]
fn eval_match_reproduces_pair_table() {
    let expected = [
        ("proposed", "0.375", "1.75"),
        ("cole1", "0.25", "-"),
        ("cole2", "0.25", "-"),
        ("gfp", "0.25", "-"),
    ];
    for (method, exact, rank) in expected {
        let text = ok(&[
            "eval",
            "--mode",
            "match",
            "--predictions",
            &fixture(&format!("pair_{method}.csv")),
            "--ground-truth",
            &fixture("pair_truth.csv"),
        ]);
        assert!(
            text.contains(&format!("exact match:      {exact}\n")),
            "{method}: {text}"
        );
        assert!(
            text.contains(&format!("rank match:       {rank}\n")),
            "{method}: {text}"
        );
    }
}

#[test]
fn eval_match_unknown_graph_fails() {
    let dir = tempfile::tempdir().unwrap();
    let preds = dir.path().join("p.csv");
    fs::write(&preds, "graph_id,members\nNOPE,1\n").unwrap();
    let out = run(&[
        "eval",
        "--mode",
        "match",
        "--predictions",
        p(&preds),
        "--ground-truth",
        &fixture("single_truth.csv"),
    ]);
    assert!(!out.status.success());
}

#[test]
fn eval_strength_identical_inputs() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "a", &path_graph(4));
    write_graph(dir.path(), "b", &Graph::empty(5));
    let truth = dir.path().join("truth.csv");
    fs::write(&truth, "graph_id,mean_estimate\na,2\nb,4\n").unwrap();
    let preds = dir.path().join("preds.csv");
    fs::write(&preds, "graph_id,value\na,0.5\nb,0.8\n").unwrap();
    let text = ok(&[
        "eval",
        "--mode",
        "strength",
        "--predictions",
        p(&preds),
        "--ground-truth",
        p(&truth),
        "--graphs",
        p(dir.path()),
    ]);
    assert_eq!(csv_field(&text, "rmse", 3), "0");

    fs::write(&preds, "graph_id,value\nzz,0.5\n").unwrap();
    assert!(!run(&[
        "eval",
        "--mode",
        "strength",
        "--predictions",
        p(&preds),
        "--ground-truth",
        p(&truth),
        "--graphs",
        p(dir.path())
    ])
    .status
    .success());
}

#[test]
fn compare_suite_rows() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "a", &path_graph(4));
    write_graph(dir.path(), "b", &Graph::empty(4));
    let truth = dir.path().join("truth.csv");
    fs::write(&truth, "graph_id,mean_estimate\na,4\nb,1\n").unwrap();
    let text = ok(&[
        "compare",
        "--graphs",
        p(dir.path()),
        "--ground-truth",
        p(&truth),
        "--metrics",
        "cole2,gfp",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("graph_id,n,gt_norm,cole2_norm,gfp_norm"));
    // Both baselines agree exactly with these two extremes.
    assert_eq!(csv_field(&text, "rmse", 3), "0");
    assert_eq!(csv_field(&text, "rmse", 4), "0");
    assert_eq!(csv_field(&text, "b", 3), "0.25");
}

#[test]
fn edge_list_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("g.edges");
    fs::write(&src, "# labels\nalice bob\nbob carol\n#! node dave\n").unwrap();
    let first = formats::load_edge_list(&src).unwrap().graph;
    let copy = dir.path().join("copy.edges");
    formats::save_edge_list(&first, &copy).unwrap();
    let second = formats::load_edge_list(&copy).unwrap().graph;
    assert_eq!(first.n(), 4);
    assert_eq!(first.n(), second.n());
    assert_eq!(first.edges(), second.edges());
    assert_eq!(first.labels(), second.labels());
}

// Real-world graphs are not bundled. Point NETSTRENGTH_FIXTURES at a
// directory holding `<NAME>.edges` files to run these.
fn real_world(name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("NETSTRENGTH_FIXTURES")?;
    let path = Path::new(&dir).join(format!("{name}.edges"));
    path.exists().then_some(path)
}

fn top_single(name: &str, objective: &str) -> Vec<String> {
    let path = real_world(name).expect("fixture present");
    let text = ok(&[
        "dismantle",
        p(&path),
        "--k",
        "1",
        "--exact-size",
        "--objective",
        objective,
    ]);
    serde_json::from_str::<DismantleReport>(text.trim())
        .unwrap()
        .removed
}

#[test]
#[ignore = "needs NETSTRENGTH_FIXTURES"]
fn saxena_single_node() {
    assert_eq!(top_single("SAXENA", "proposed"), ["4"]);
    assert_eq!(top_single("SAXENA", "cole1"), ["2"]);
}

#[test]
#[ignore = "needs NETSTRENGTH_FIXTURES"]
fn paris_single_node() {
    assert_eq!(top_single("PARIS", "proposed"), ["6"]);
    assert_eq!(top_single("PARIS", "cole2"), ["4"]);
}

#[test]
#[ignore = "needs NETSTRENGTH_FIXTURES"]
fn chiapas_size() {
    let g = formats::load_edge_list(&real_world("CHIAPAS").expect("fixture present"))
        .unwrap()
        .graph;
    assert_eq!((g.n(), g.edge_count()), (34, 225));
    assert_eq!(top_single("CHIAPAS", "proposed"), ["21"]);
}
