use std::path::PathBuf;
use std::process::{Command, Output};

fn treedim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treedim")).args(args).output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32); 5] = [
        (&["dim", "--group", "grigorchuk", "--depth", "4"], 0),
        (&["dim", "--group", "nope", "--depth", "3"], 2),
        (&["ncrep", "--group", "odometer", "--depth", "5", "--n", "1", "--method", "weakly-branch"], 3),
        (&["maxvn", "--p", "2", "--k", "4"], 4),
        (&["matcheck", "--file", "/nonexistent/labelling.rep"], 5),
    ];
    for (args, code) in cases {
        let out = treedim(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        if code != 0 {
            assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
        }
    }
}

#[test]
fn output_file_matches_stdout() {
    let path = tmp("dim.txt");
    let args = ["dim", "--group", "odometer", "--depth", "5"];
    let stdout = treedim(&args).stdout;
    let out = treedim(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert!(out.status.success() && out.stdout.is_empty());
    // The config line records the output path, the rows do not.
    let file = std::fs::read_to_string(&path).unwrap();
    let body = |s: &str| s.lines().skip(1).map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(body(&file), body(&String::from_utf8(stdout).unwrap()));
}

#[test]
fn json_reports_parse() {
    let out = treedim(&["ineq", "--group", "grigorchuk", "--max-total", "4", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["command"], "ineq");
    assert_eq!(v["config"]["group"], "grigorchuk");
}

#[test]
fn tree_labellings_are_not_matrix_files() {
    let rep = tmp("tree.rep");
    let out = treedim(&[
        "ncrep", "--group", "grigorchuk", "--depth", "7", "--n", "2", "--rep-out", rep.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&rep).unwrap();
    assert!(!text.is_empty());
    // A tree labelling has no `ring` header; unreadable input files exit with 5.
    let out = treedim(&["matcheck", "--file", rep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}
