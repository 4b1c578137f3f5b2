use std::process::{Command, Output};

fn perfcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perfcone"))
        .env_remove("PERFCONE_CACHE_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gaussian_homology_line() {
    let o = perfcone(&["homology", "--d", "1", "--rank", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "H_4 = Q^1; all other degrees 0");
}

#[test]
fn inadmissible_d() {
    let o = perfcone(&["perfect", "enumerate", "--d", "99", "--rank", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("d not in {1,2,3,7,11,19,43,67,163}"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(perfcone(&["homology", "--rank", "x"]).status.code(), Some(2));
    assert_eq!(perfcone(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(perfcone(&["--threads", "0", "levels", "pi", "--g", "1", "--m", "3"]).status.code(), Some(2));
}

#[test]
fn levels_commands() {
    assert_eq!(stdout(&perfcone(&["levels", "pi", "--g", "1", "--m", "3"])).trim(), "4");
    assert_eq!(stdout(&perfcone(&["levels", "pi", "--g", "2", "--m", "3"])).trim(), "40");
    assert_eq!(stdout(&perfcone(&["levels", "count", "--g", "2", "--m", "2", "--brute"])).trim(), "15");
    assert_eq!(stdout(&perfcone(&["levels", "count", "--g", "1", "--m", "4", "--p", "1"])).trim(), "6");
    let t = stdout(&perfcone(&["levels", "table", "--g", "4", "--m", "2", "--kmax", "3"]));
    assert_eq!(t.lines().collect::<Vec<_>>(), vec!["k=0: 0", "k=1: 0", "k=2: 0", "k=3: outside stable range"]);
    let o = perfcone(&["levels", "count", "--g", "5", "--m", "7", "--brute"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_is_thread_independent() {
    let run = |n: &str| stdout(&perfcone(&["--threads", n, "--format", "json", "complex", "build", "--d", "3", "--rank", "2"]));
    let one = run("1");
    assert_eq!(one, run("4"));
    let v: serde_json::Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["d"], 3);
}

#[test]
fn complex_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let p = path.to_str().unwrap();
    assert!(perfcone(&["complex", "build", "--d", "1", "--rank", "2", "--out", p]).status.success());
    assert_eq!(stdout(&perfcone(&["homology", "--in", p])).trim(), "H_4 = Q^1; all other degrees 0");
    assert!(stdout(&perfcone(&["inflation", "--in", p])).contains("all degrees 0"));
    let s = perfcone(&["spectral", "--in", p]);
    assert!(s.status.success());
    assert!(stdout(&s).contains("E-infinity totals: H_4 = Q^1"));
    let missing = perfcone(&["homology", "--in", dir.path().join("none.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn cache_hits_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_perfcone"))
            .env("PERFCONE_CACHE_DIR", dir.path())
            .args(["--format", "json", "complex", "build", "--d", "2", "--rank", "2"])
            .output()
            .unwrap()
    };
    let first = stdout(&run());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    assert_eq!(first, stdout(&run()));
}

#[test]
fn doubling_symmetric() {
    let o = perfcone(&["doubling", "--symmetric", "--max-rank", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("consistent"));
}

#[test]
fn perfect_enumerate_json() {
    let o = perfcone(&["--format", "json", "perfect", "enumerate", "--symmetric", "--rank", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
}
