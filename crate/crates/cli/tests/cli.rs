use std::path::Path;
use std::process::{Command, Output};

fn copocut(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copocut"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const FIGURE_TWO: &str = "c five vertices, all edges but 4-5\np edge 5 9\ne 1 2\ne 1 3\ne 1 4\ne 1 5\ne 2 3\ne 2 4\ne 2 5\ne 3 4\ne 3 5\n";

#[test]
fn solve_writes_report_and_history() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("ex.json"),
        r#"{"n":2,"m":1,"Q":[[1,-1],[-1,0]],"c":[0,0],"A":[[1,1]],"b":[1]}"#,
    )
    .unwrap();
    let out = copocut(
        &["solve", "ex.json", "--radius", "20", "--bits", "5", "--target-width", "5e-3"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("interval: ")).unwrap();
    let inner = line.trim_start_matches("interval: [").trim_end_matches(']');
    let (lo, hi) = inner.split_once(", ").unwrap();
    let (lo, hi): (f64, f64) = (lo.parse().unwrap(), hi.parse().unwrap());
    assert!(lo <= -1.0 / 3.0 && -1.0 / 3.0 <= hi && hi - lo <= 1e-2);

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ex.report.json")).unwrap())
            .unwrap();
    assert_eq!(report["status"], "converged");
    let history = std::fs::read_to_string(dir.path().join("ex.report.history.csv")).unwrap();
    assert!(history.starts_with("iteration,x0,x1,x2,verdict,certificate_value,volume,lower,upper,oracle_time_s\n"));
}

#[test]
fn maxclique_on_dimacs_and_json() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("fig.dimacs"), FIGURE_TWO).unwrap();
    std::fs::write(dir.path().join("k3.json"), r#"{"n": 3, "edges": [[0,1],[1,2],[0,2]]}"#).unwrap();
    let out = copocut(&["maxclique", "fig.dimacs"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("omega: 4\n"));
    let out = copocut(&["maxclique", "k3.json", "--solver", "sa", "--reads", "200", "--seed", "5"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("omega: 3\n"));
}

#[test]
fn checkcop_prints_json_verdict() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("neg.json"), r#"{"size":2,"entries":[[1,-2],[-2,1]]}"#).unwrap();
    std::fs::write(dir.path().join("id.json"), r#"{"size":2,"entries":[[1,0],[0,1]]}"#).unwrap();

    let out = copocut(&["checkcop", "neg.json", "--bits", "2"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["copositive"], false);
    assert!(v["value"].as_f64().unwrap() < 0.0);
    assert_eq!(v["certificate"].as_array().unwrap().len(), 2);

    let out = copocut(
        &["checkcop", "id.json", "--solver", "sa", "--sweeps", "10", "--reads", "20", "--seed", "1"],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["copositive"], true);
    assert!(v["certificate"].is_null());
}

#[test]
fn export_milp_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("fig.dimacs"), FIGURE_TWO).unwrap();
    let a = copocut(&["export-milp", "fig.dimacs"], dir.path());
    let b = copocut(&["export-milp", "fig.dimacs"], dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains(" c0: x3 + x4 <= 1\n"));
}

#[test]
fn bench_and_penalty_sweep() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("suite.json"),
        r#"{"sizes":[8],"densities":[0.5],"seeds":2,"methods":["copositive-exact","brute-force"]}"#,
    )
    .unwrap();
    let out = copocut(&["bench", "suite.json", "--out", "results.csv"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance_id,n,density,seed,method,sweeps,reads,value,truth,correct,oracle_time_s,other_time_s,ttt99_s,ttt999_s"
    );
    assert_eq!(lines.count(), 4);

    std::fs::write(dir.path().join("fig.dimacs"), FIGURE_TWO).unwrap();
    let out = copocut(
        &["penalty-sweep", "fig.dimacs", "--weights", "0.5,2", "--reads", "100"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("weight,mean_normalized_size,valid_fraction,ground_fraction\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(copocut(&["solve", "missing.json"], dir.path()).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.json"), r#"{"size": 2"#).unwrap();
    assert_eq!(copocut(&["checkcop", "bad.json"], dir.path()).status.code(), Some(2));
    std::fs::write(dir.path().join("empty.json"), r#"{"methods": []}"#).unwrap();
    assert_eq!(copocut(&["bench", "empty.json", "--out", "x.csv"], dir.path()).status.code(), Some(2));
    // 26 variables exceed the exhaustive solver's cap
    let n = 26;
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let m = serde_json::json!({"size": n, "entries": rows});
    std::fs::write(dir.path().join("big.json"), m.to_string()).unwrap();
    assert_eq!(copocut(&["checkcop", "big.json"], dir.path()).status.code(), Some(3));
    assert_eq!(copocut(&["frobnicate"], dir.path()).status.code(), Some(2));
}
