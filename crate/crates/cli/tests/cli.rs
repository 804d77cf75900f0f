use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn quiver(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../quivers").join(format!("{name}.json"))
}

fn run(cache: Option<&Path>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hallq"));
    cmd.env_remove("HALLQ_CACHE_DIR");
    match cache {
        Some(dir) => cmd.env("HALLQ_CACHE_DIR", dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_examples() {
    let a2 = quiver("a2");
    let a21 = quiver("a21");
    let o = run(None, &["--quiver", a2.to_str().unwrap(), "--q", "2", "hallnum", "P1", "S1", "S2"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "1\n"));
    let o = run(None, &["--quiver", a2.to_str().unwrap(), "--q", "3", "serre"]);
    assert_eq!(stdout(&o), "PASS (2 vertex pairs)\n");
    let o = run(None, &["--quiver", a21.to_str().unwrap(), "--q", "2", "graded-gap", "1"]);
    assert_eq!(stdout(&o), "l = 1\n");
}

#[test]
fn json_and_csv_are_well_formed() {
    let k = quiver("kronecker");
    let k = k.to_str().unwrap();
    for args in [
        vec!["enumerate", "2,1"],
        vec!["hallnum", "h(1,2)", "h(1,1)", "h(1,1)"],
        vec!["product", "u[S1]", "u[S2]"],
        vec!["orders", "1,1"],
        vec!["classify", "P2"],
        vec!["hopf-check", "2"],
    ] {
        let mut full = vec!["--quiver", k, "--format", "json"];
        full.extend(&args);
        let o = run(None, &full);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap();

        full[3] = "csv";
        let o = run(None, &full);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let mut r = csv::Reader::from_reader(o.stdout.as_slice());
        let width = r.headers().unwrap().len();
        for rec in r.records() {
            assert_eq!(rec.unwrap().len(), width);
        }
    }
}

#[test]
fn exit_codes_and_guard_reason() {
    let k = quiver("kronecker");
    let k = k.to_str().unwrap();
    let o = run(None, &["--quiver", k, "--enum-exp", "4", "enumerate", "3,3"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "guard_exceeded");
    assert!(err["guard"]["limit"].is_string());

    let o = run(None, &["--quiver", "/nonexistent/q.json", "serre"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(None, &["--quiver", k, "enumerate", "1,1,1"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(None, &["--quiver", k, "hallnum", "X9", "S1", "S2"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(None, &["--quiver", k, "no-such-command"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(None, &["--quiver", k, "hallpoly", "S1;S1;0", "--primes", "2,3", "--validate", "3"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(None, &["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn warm_and_cold_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let k = quiver("kronecker");
    let k = k.to_str().unwrap();
    let queries: Vec<Vec<&str>> = vec![
        vec!["--quiver", k, "--q", "3", "hallnum", "h(1,2)", "h(1,1)", "h(1,1)"],
        vec!["--quiver", k, "--q", "2", "hallnum", "P1+S2", "P1", "S2"],
        vec!["--quiver", k, "--q", "2", "--format", "json", "hallnum", "2*h(1,1)", "h(1,1)", "h(1,1)"],
    ];
    let cold: Vec<Vec<u8>> = queries.iter().map(|a| run(Some(dir.path()), a).stdout).collect();
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!files.is_empty());
    let lines: usize = files.iter().map(|f| std::fs::read_to_string(f).unwrap().lines().count()).sum();
    assert!(lines > 0);
    let warm: Vec<Vec<u8>> = queries.iter().map(|a| run(Some(dir.path()), a).stdout).collect();
    assert_eq!(cold, warm);
    let uncached: Vec<Vec<u8>> = queries.iter().map(|a| run(None, a).stdout).collect();
    assert_eq!(cold, uncached);
}

#[test]
fn corrupt_cache_lines_are_discarded() {
    let dir = tempfile::tempdir().unwrap();
    let k = quiver("kronecker");
    let args = ["--quiver", k.to_str().unwrap(), "--q", "3", "hallnum", "h(1,2)", "h(1,1)", "h(1,1)"];
    let expect = run(Some(dir.path()), &args).stdout;
    let file = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let good = std::fs::read_to_string(&file).unwrap();
    // A truncated record, garbage, and a well-formed record with a wrong count
    // for another quiver.
    let first = good.lines().next().unwrap();
    let wrong_quiver = first.replacen("\"quiver\":\"", "\"quiver\":\"ff", 1).replace("\"g\":", "\"g\":7");
    let corrupt = format!("{}\nnot json\n{wrong_quiver}\n{good}", &first[..first.len() / 2]);
    std::fs::write(&file, corrupt).unwrap();
    let o = run(Some(dir.path()), &args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(o.stdout, expect);
    let after = std::fs::read_to_string(&file).unwrap();
    assert!(after.lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
    assert!(!after.contains("not json"));
}
