use std::io::Write;
use std::process::{Command, Stdio};

fn recdbl(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_recdbl"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

const P1: &str = "2 1 1\n1 2 1\n1 1 -1\n1 0 1\n0 1 1\n";

#[test]
fn seq_prints_period() {
    let (code, out, _) = recdbl(&["seq", "--prime", "7", "--k", "1"], "");
    assert_eq!(code, 0);
    assert!(out.starts_with("terms 0 1 1 2 3 5 1 6 0 6"));
    assert!(out.contains("period 16"));
}

#[test]
fn doubling_one_cell() {
    let (code, out, _) = recdbl(&["doubling", "--prime", "514229", "--k", "1"], "");
    assert_eq!(code, 0);
    assert_eq!(out.lines().nth(1).unwrap(), "514229,1,116,53,1113,365,1.766826,1.486011,5.590629,1.833405,true,false");
}

#[test]
fn polygon_irred_and_count_read_stdin() {
    let (code, out, _) = recdbl(&["polygon", "--prime", "5"], P1);
    assert_eq!(code, 0);
    assert_eq!(out.matches("split ").count(), 1);
    let (code, out, _) = recdbl(&["irred", "--prime", "5"], P1);
    assert_eq!(code, 0);
    assert!(out.contains("absolutely irreducible"));
    let (code, out, _) = recdbl(&["irred", "--prime", "7", "--ext", "1"], "2 0 1\n0 0 -3\n");
    assert_eq!((code, out.trim()), (0, "irreducible over F_p"));
    let (code, out, _) = recdbl(&["count", "--prime", "7", "--order", "8"], "1 0 1\n0 1 -1\n");
    assert_eq!(code, 0);
    assert!(out.contains("\"solutions\": 8"));
}

#[test]
fn sweep_formats_and_output_file() {
    let dir = std::env::temp_dir().join(format!("recdbl-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.json");
    let (code, _, _) = recdbl(
        &["sweep", "--range", "3", "50", "--k", "1,2", "--format", "json", "--out", path.to_str().unwrap()],
        "",
    );
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 28);
    let (code, out, _) = recdbl(&["sweep", "--range", "3", "50", "--format", "plot-data"], "");
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 14);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["sweep", "--bogus"],
        vec!["sweep", "--range", "3", "50", "--format", "xml"],
        vec!["sweep", "--range", "24", "28"],
        vec!["sweep", "--range", "3", "50", "--k", "sample:x"],
        vec!["seq", "--prime", "8"],
        vec!["nonsense"],
        vec![],
    ] {
        let (code, _, err) = recdbl(&args, "");
        assert_eq!(code, 1, "{args:?}: {err}");
    }
    let (code, _, err) = recdbl(&["irred", "--prime", "7"], "1 x 2\n");
    assert_eq!(code, 1);
    assert!(err.contains("line 1"));
    let (code, _, _) = recdbl(&["sweep", "--out", "/nonexistent/dir/x.csv", "--range", "3", "10"], "");
    assert_eq!(code, 1);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(recdbl(&["--help"], "").0, 0);
    assert_eq!(recdbl(&["--version"], "").0, 0);
    assert_eq!(recdbl(&["sweep", "--help"], "").0, 0);
}
