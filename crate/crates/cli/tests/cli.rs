use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn exe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exclusivity")).args(args).output().expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn gen_writes_each_family() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str, usize); 5] = [
        (&["--family", "cycle", "--n", "5"], "c5.dimacs", 5),
        (&["--family", "complete", "--n", "4"], "k4.json", 4),
        (&["--family", "gqs", "--q", "3", "--s", "1"], "g.dimacs", 20),
        (&["--family", "alon-r2"], "alon.dimacs", 64),
        (&["--family", "random", "--n", "10", "--p", "0.5", "--seed", "42"], "r.json", 10),
    ];
    for (args, file, n) in cases {
        let out = dir.path().join(file);
        let mut argv = vec!["gen"];
        argv.extend_from_slice(args);
        argv.extend(["--out", p(&out), "--format", "json"]);
        let o = exe(&argv);
        assert_eq!(o.status.code(), Some(0), "{argv:?}");
        assert_eq!(json(&o)["n"], n);
        let text = std::fs::read_to_string(&out).unwrap();
        let g = exclusivity::graph::io::read_auto(&text).unwrap();
        assert_eq!(g.n(), n);
        assert_eq!(file.ends_with(".json"), text.starts_with('{'));
    }
    let random = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    assert_eq!(exclusivity::graph::io::read_json(&random).unwrap().edge_count(), 20);
}

#[test]
fn gen_needs_family_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.dimacs");
    assert_eq!(exe(&["gen", "--family", "gqs", "--q", "3", "--out", p(&out)]).status.code(), Some(1));
    assert_eq!(exe(&["gen", "--family", "cycle", "--n", "2", "--out", p(&out)]).status.code(), Some(1));
}

#[test]
fn alpha_on_repo_files() {
    let o = exe(&["alpha", "--in", p(&data("pentagon.dimacs")), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["lower_bound"].as_u64(), v["exact"].as_bool()), (Some(2), Some(true)));
    let o = exe(&["alpha", "--in", p(&data("heptagon.json"))]);
    assert!(stdout(&o).starts_with("alpha = 3\n"));
}

#[test]
fn alpha_with_exhausted_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.dimacs");
    assert_eq!(exe(&["gen", "--family", "gqs", "--q", "5", "--s", "1", "--out", p(&g)]).status.code(), Some(0));
    let o = exe(&["alpha", "--in", p(&g), "--budget", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("budget exhausted"));
}

#[test]
fn theta_reports_bracket_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = exe(&["theta", "--in", p(&data("pentagon.dimacs")), "--format", "json", "--certificate", p(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let sqrt5 = 5f64.sqrt();
    assert!((v["lower_bound"].as_f64().unwrap() - sqrt5).abs() < 1e-4);
    assert_eq!(v["status"], "converged");
    let full: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(full["primal_matrix"].as_array().unwrap().len(), 5);

    // symmetric graphs can land on the optimum in one step; this one does not
    let g = dir.path().join("r.dimacs");
    exe(&["gen", "--family", "random", "--n", "12", "--p", "0.4", "--seed", "1", "--out", p(&g)]);
    let o = exe(&["theta", "--in", p(&g), "--max-iterations", "1", "--tolerance", "1e-12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("unconverged"));
}

#[test]
fn witness_json_schema() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = exe(&["witness", "--in", p(&data("pentagon.dimacs")), "--json", p(&report)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witness = true"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    for k in ["n", "alpha", "theta", "ratio", "is_witness", "amc_fraction", "predicted_profit"] {
        assert!(keys.iter().any(|x| x == k), "missing {k}");
    }
    assert!((v["ratio"]["ub"].as_f64().unwrap() - 1.1180).abs() < 1e-4);
    assert_eq!(v["alpha"]["exact"], true);
    assert_eq!(v["theta"]["converged"], true);

    let o = exe(&["witness", "--in", p(&data("g21.dimacs")), "--format", "json"]);
    assert_eq!(json(&o)["is_witness"], false);
}

#[test]
fn repr_and_validate() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("rep.json");
    let o = exe(&["repr", "--in", p(&data("heptagon.json")), "--out", p(&rep)]);
    assert_eq!(o.status.code(), Some(0));
    let o = exe(&["validate-repr", "--in", p(&data("heptagon.json")), "--repr", p(&rep)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));

    let o = exe(&["validate-repr", "--in", p(&data("pentagon.dimacs")), "--repr", p(&data("pentagon_repr.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let o = exe(&["validate-repr", "--in", p(&data("pentagon.dimacs")), "--repr", p(&data("parallel_repr.json"))]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("FAIL"));
    // a representation of the wrong size is an input error
    let o = exe(&["validate-repr", "--in", p(&data("heptagon.json")), "--repr", p(&data("pentagon_repr.json"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn two_value_repr() {
    let o = exe(&["repr", "--two-value", "--q", "5", "--s", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["dimension"], 10);
    assert!((v["value"].as_f64().unwrap() - 42.0).abs() < 1e-9);
    assert_eq!(exe(&["repr", "--two-value", "--q", "3", "--s", "2"]).status.code(), Some(1));
    assert_eq!(exe(&["repr", "--two-value", "--q", "3"]).status.code(), Some(1));
}

#[test]
fn scan_csv_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    let two = dir.path().join("two.csv");
    let o = exe(&["scan", "--n", "5", "--csv", p(&one), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["max_ratio"].as_f64().unwrap() - 5f64.sqrt() / 2.0).abs() < 1e-4);
    assert_eq!(v["argmax_edges"].as_array().unwrap().len(), 5);
    let o = exe(&["scan", "--n", "5", "--csv", p(&two), "--workers", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let a = std::fs::read(&one).unwrap();
    assert_eq!(a, std::fs::read(&two).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next(), Some("edge_bitmask,alpha,theta_lb,theta_ub,ratio_lb"));
    assert_eq!(text.lines().count(), 1 + 1024);
    assert_eq!(exe(&["scan", "--n", "8"]).status.code(), Some(1));
    assert_eq!(exe(&["scan", "--n", "7"]).status.code(), Some(1));
}

#[test]
fn game_on_the_pentagon() {
    let rep = data("pentagon_repr.json");
    let o = exe(&[
        "game",
        "--repr",
        p(&rep),
        "--alpha",
        "2",
        "--epsilon",
        "0.01",
        "--rounds",
        "200000",
        "--seed",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let analytic = v["analytic"].as_f64().unwrap();
    assert!((analytic - 0.11356).abs() < 5e-6);
    let (emp, se) = (v["empirical"].as_f64().unwrap(), v["stderr"].as_f64().unwrap());
    assert!((emp - analytic).abs() < 5.0 * se);
    // epsilon larger than the smallest gain is rejected
    assert_eq!(exe(&["game", "--repr", p(&rep), "--alpha", "2", "--epsilon", "3"]).status.code(), Some(1));
}

#[test]
fn config_file_and_precedence() {
    let settings = data("settings.json");
    let rep = data("pentagon_repr.json");
    // format, seed and rounds from the file
    let o = exe(&["--config", p(&settings), "game", "--repr", p(&rep), "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["seed"].as_u64(), v["rounds"].as_u64()), (Some(11), Some(20000)));
    // flags win
    let o =
        exe(&["--config", p(&settings), "--format", "text", "game", "--repr", p(&rep), "--alpha", "2", "--seed", "5"]);
    assert!(stdout(&o).starts_with("empirical profit"));
    let o = exe(&["--config", p(&settings), "game", "--repr", p(&rep), "--alpha", "2", "--seed", "5"]);
    assert_eq!(json(&o)["seed"], 5);
    // the theta tolerance from the file tightens the bracket
    let o = exe(&["--config", p(&settings), "theta", "--in", p(&data("heptagon.json"))]);
    let v = json(&o);
    assert!(v["upper_bound"].as_f64().unwrap() - v["lower_bound"].as_f64().unwrap() <= 1e-6);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"theta": {"tolerance": 0}}"#).unwrap();
    assert_eq!(exe(&["--config", p(&bad), "theta", "--in", p(&data("pentagon.dimacs"))]).status.code(), Some(1));
}

#[test]
fn input_errors_exit_one() {
    let o = exe(&["alpha", "--in", p(&data("broken.dimacs"))]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
    assert_eq!(exe(&["alpha", "--in", p(&data("missing.dimacs"))]).status.code(), Some(1));
    assert_eq!(exe(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(exe(&["theta", "--in", p(&data("pentagon.dimacs")), "--bogus"]).status.code(), Some(1));
    assert_eq!(exe(&[]).status.code(), Some(1));
    assert_eq!(exe(&["witness", "--in", p(&data("pentagon.dimacs")), "--format", "csv"]).status.code(), Some(1));
    assert_eq!(exe(&["--help"]).status.code(), Some(0));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (hept, g21, pent, rep) =
        (data("heptagon.json"), data("g21.dimacs"), data("pentagon.dimacs"), data("pentagon_repr.json"));
    let runs: [&[&str]; 5] = [
        &["witness", "--in", p(&hept), "--format", "json"],
        &["theta", "--in", p(&g21), "--format", "json"],
        &["repr", "--in", p(&pent), "--format", "json"],
        &["scan", "--n", "4", "--format", "csv"],
        &["game", "--repr", p(&rep), "--alpha", "2", "--rounds", "50000", "--seed", "9", "--format", "json"],
    ];
    for args in runs {
        let a = exe(args);
        let b = exe(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let g1 = dir.path().join("a.dimacs");
    let g2 = dir.path().join("b.dimacs");
    for g in [&g1, &g2] {
        exe(&["gen", "--family", "random", "--n", "30", "--p", "0.3", "--seed", "4", "--out", p(g)]);
    }
    assert_eq!(std::fs::read(&g1).unwrap(), std::fs::read(&g2).unwrap());
}

#[test]
fn table_reproduces_with_a_short_budget() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    let o = exe(&["table", "--alpha-budget", "1", "--tolerance", "1e-3", "--csv", p(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().last() == Some("PASS"), "{text}");
    assert!(text.contains("note (4, 1)"));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 11);
    assert!(rows.lines().nth(2).unwrap().starts_with("3,1,20,4,4,true,"));
}
