use std::fs;
use std::io::Write;
use std::process::{Command, Output};

fn sparsepr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsepr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_with(text: &str, suffix: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn complement_exit_codes() {
    let holds = sparsepr(&["--seed", "3", "check-complement", "--m", "3", "--n", "5"]);
    assert_eq!(code(&holds), 0);
    assert!(stdout(&holds).contains("verdict: holds"), "{}", stdout(&holds));

    let fails = sparsepr(&["--seed", "3", "check-complement", "--m", "3", "--n", "4"]);
    assert_eq!(code(&fails), 1);
    assert!(stdout(&fails).contains("verdict: violated"));
}

#[test]
fn explicit_ensemble_csv_output() {
    // e1, e2, e1+e2 in R^2: every split leaves a spanning side
    let file = temp_with("# kind=explicit field=real M=2 N=3\n1,0\n0,1\n1,1\n", ".csv");
    let path = file.path().to_str().unwrap();
    let o = sparsepr(&["--format", "csv", "check-complement", "--ensemble", path]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("ensemble,N,dim,order,holds,S,K"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[1..5], &["3", "2", "2", "true"]);

    let two = temp_with("# kind=explicit field=real M=2 N=2\n1,0\n0,1\n", ".csv");
    let o = sparsepr(&["--format", "csv", "check-complement", "--ensemble", two.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn k_complement_at_threshold() {
    let o = sparsepr(&["--seed", "9", "check-k-complement", "--m", "6", "--n", "7", "--k", "4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn recover_sparse_signal() {
    let o = sparsepr(&[
        "--seed", "5", "--format", "csv", "recover", "--m", "6", "--n", "7", "--signal",
        "0,-2,0,0,1.5,0",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("2,0,"), "{row}");
    assert!(row.contains("0,-2,0,0,1.5,0") || row.contains("0,2,0,0,-1.5,0"), "{row}");
}

#[test]
fn recover_without_solution_is_a_predicate_failure() {
    // |<e1, x>|^2 = -1 has no real solution
    let file = temp_with("# kind=explicit field=real M=2 N=2\n1,0\n0,1\n", ".csv");
    let o = sparsepr(&[
        "recover", "--ensemble", file.path().to_str().unwrap(), "--y", "-1,0", "--kmax", "2",
    ]);
    assert_ne!(code(&o), 0);
}

#[test]
fn fmm_round_trip() {
    let o = sparsepr(&["fmm", "--m", "9", "--k", "3", "--signal", "0,0,2,-1,0,0,0,3,0"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("signal_unique: true"), "{out}");
}

#[test]
fn ambiguity_pair() {
    let o = sparsepr(&["--seed", "2", "--format", "csv", "ambiguity", "--m", "4", "--n", "6"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let gap: f64 = out.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!(gap <= 1e-10);

    let o = sparsepr(&["--seed", "2", "ambiguity", "--m", "3", "--n", "5"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn experiment_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trials.csv");
    let o = sparsepr(&[
        "--seed", "1", "--out", out.to_str().unwrap(), "experiment", "--type", "complement_mc",
        "--m", "4", "--n", "7", "--trials", "20",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# sparsepr-trials v1"));
    assert!(lines.next().unwrap().starts_with("experiment,trial,seed,M,k,N,success"));
    assert_eq!(lines.count(), 20);
}

#[test]
fn experiment_below_threshold_expects_no_successes() {
    let o = sparsepr(&["experiment", "--type", "complement_mc", "--m", "4", "--n", "6", "--trials", "10"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn worker_count_does_not_change_output() {
    let run = |w: &str| {
        let o = sparsepr(&[
            "--seed", "11", "--workers", w, "--format", "csv", "experiment", "--type",
            "sparse_uniqueness_mc", "--m", "6", "--k", "2", "--trials", "30", "--no-timing",
        ]);
        assert_eq!(code(&o), 0);
        stdout(&o)
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn config_files() {
    let empty = temp_with("# nothing to run\n", ".toml");
    let o = sparsepr(&["experiment", "--config", empty.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);

    let bad = temp_with("[[experiment]]\ntype = \"no_such_experiment\"\nM = 3\n", ".toml");
    let o = sparsepr(&["experiment", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let o = sparsepr(&["experiment", "--config", "/nonexistent/batch.toml"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&sparsepr(&["--workers", "0", "check-complement", "--m", "2", "--n", "3"])), 2);
    assert_eq!(code(&sparsepr(&["check-complement"])), 2);
    assert_eq!(code(&sparsepr(&["no-such-command"])), 2);
    assert_eq!(code(&sparsepr(&["fmm", "--m", "3", "--k", "3", "--signal", "1,1,1"])), 2);
}
