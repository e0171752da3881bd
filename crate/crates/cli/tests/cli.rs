use std::path::Path;
use std::process::{Command, Output};

fn hiconn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hiconn")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn c4(dir: &Path) -> String {
    let path = dir.join("c4.edges");
    std::fs::write(&path, "4 4\n0 1\n1 2\n2 3\n0 3\n").unwrap();
    path.display().to_string()
}

#[test]
fn invariants_of_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let out = hiconn(&["invariants", "--input", &c4(dir.path()), "--i", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["delta"], 0);
    assert_eq!(v["kappa"], 0);
    assert_eq!(v["cocycle_norm"], 1);
    assert_eq!(v["homology_norm"], 4);
}

#[test]
fn infinity_is_a_string() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = dir.path().join("k4.edges");
    std::fs::write(&k4, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let out = hiconn(&["invariants", "--input", k4.to_str().unwrap(), "--i", "1", "--tau"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["delta"], 2);
    assert_eq!(v["kappa"], "inf");
    assert_eq!(v["cocycle_norm"], "inf");
    assert_eq!(v["tau"], "inf");
}

#[test]
fn betti_table_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = hiconn(&["betti", "--input", &c4(dir.path())]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "1,1,2,2"));
    assert!(text.lines().any(|l| l == "2,2,4,1"));
}

#[test]
fn sample_complete_graph() {
    let out = hiconn(&["sample", "--n", "5", "--p", "1", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "5 10");
    assert_eq!(lines.len(), 11);
}

#[test]
fn sample_writes_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.edges");
    let out = hiconn(&["sample", "--n", "6", "--p", "0.5", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let again = hiconn(&["sample", "--n", "6", "--p", "0.5", "--seed", "3"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&again));
}

#[test]
fn witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let octa = dir.path().join("octa.edges");
    let edges: Vec<(usize, usize)> = (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).filter(|&(u, v)| v != u + 3).collect();
    let body: String = edges.iter().map(|(u, v)| format!("{u} {v}\n")).collect();
    std::fs::write(&octa, format!("6 {}\n{body}", edges.len())).unwrap();
    let out = hiconn(&["witness", "--input", octa.to_str().unwrap(), "--i", "2", "--face", "0,1,2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "found");
    assert_eq!(v["b"], serde_json::json!([3, 4, 5]));

    let out = hiconn(&["witness", "--input", &c4(dir.path()), "--i", "0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["kappa"], 2);
}

#[test]
fn experiment_from_config_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, "# small run\nkind = equality\nn = 7\np = 0.5\ntrials = 4\ni = 1\n").unwrap();
    let records = dir.path().join("records.csv");
    let summary = dir.path().join("summary.csv");
    let out = hiconn(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "6",
        "--seed",
        "5",
        "--out",
        records.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&records).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.starts_with("trial,seed,n,p,i,"));
    let s = std::fs::read_to_string(&summary).unwrap();
    assert!(s.lines().nth(1).unwrap().starts_with("7,0.5,6,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = hiconn(&["sample", "--n", "5", "--p", "1.5"]);
    assert_eq!(bad.status.code(), Some(1));
    let missing = hiconn(&["betti", "--input", dir.path().join("nope").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
    let usage = hiconn(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(1));
    let guarded = hiconn(&["invariants", "--input", &c4(dir.path()), "--i", "1", "--cap-coset", "1", "--cap-enumeration", "1"]);
    assert_eq!(guarded.status.code(), Some(2));
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "kind = equality\nn = 5\ntrials = 0\n").unwrap();
    let invalid = hiconn(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(invalid.status.code(), Some(1));
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let settings = hiconn::harness::Settings::parse(&text).unwrap();
        assert!(hiconn::harness::ExperimentConfig::from_settings(&settings).is_ok(), "{}", path.display());
        seen += 1;
    }
    assert_eq!(seen, 6);
}
