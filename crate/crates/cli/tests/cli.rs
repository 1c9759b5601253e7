use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn eelkit(args: &[&str]) -> Output {
    eelkit_env(args, &[])
}

fn eelkit_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eelkit"));
    cmd.args(args).env_remove("EELKIT_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn worked_example_through_the_mapping() {
    let two = data("two_point.csv");
    let v = json(&eelkit(&["eval", "--method", "eel1", "--theta", "-0.029446", "--input", path(&two)]));
    let l = v["results"]["loglik"]["value"].as_f64().unwrap();
    assert!((l - 0.235566).abs() < 1e-4);
    assert_eq!(v["results"]["loglik"]["infinite"], false);
    assert_eq!(v["command"], "eval");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn outside_hull_is_flagged() {
    let two = data("two_point.csv");
    let v = json(&eelkit(&["eval", "--method", "oel", "--theta", "3", "--input", path(&two)]));
    assert_eq!(v["results"]["loglik"]["infinite"], true);
    assert!(v["results"]["loglik"]["value"].is_null());
}

#[test]
fn data_errors_exit_with_three() {
    for (file, cmd) in [
        ("constant.csv", vec!["ci", "--method", "oel"]),
        ("ragged.csv", vec!["ci", "--method", "oel"]),
        ("text.csv", vec!["ci", "--method", "oel"]),
        ("planar.csv", vec!["ci", "--method", "oel"]),
    ] {
        let f = data(file);
        let mut args = cmd.clone();
        args.extend(["--input", path(&f)]);
        let o = eelkit(&args);
        assert_eq!(o.status.code(), Some(3), "{file}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    let o = eelkit(&["ci", "--method", "oel", "--input", path(&data("constant.csv"))]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
    // one row in two dimensions: n <= d
    let o = eelkit(&["eval", "--method", "oel", "--theta", "0,0", "--input", path(&data("ragged.csv"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_with_two() {
    let scalar = data("scalar.csv");
    for args in [
        vec!["frobnicate"],
        vec!["eval", "--method", "ael", "--theta", "0"],
        vec!["ci", "--method", "oel", "--level", "1.5", "--input", path(&scalar)],
        vec!["region", "--method", "oel", "--theta", "0", "--input", path(&scalar)],
        vec!["eval", "--method", "oel", "--theta", "0,1", "--input", path(&scalar)],
        vec!["coverage", "--dist", "cauchy", "--n", "10"],
        vec!["coverage", "--dist", "bv1", "--n", "10", "--methods", "eel2"],
    ] {
        let o = eelkit(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
    let o = eelkit_env(&["coverage", "--dist", "std-normal", "--n", "10", "--reps", "10"], &[("EELKIT_THREADS", "0")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coverage_is_byte_identical_across_thread_counts() {
    let args = [
        "coverage",
        "--dist",
        "std-normal",
        "--n",
        "50",
        "--level",
        "0.95",
        "--methods",
        "oel,eel1",
        "--reps",
        "2000",
        "--seed",
        "42",
    ];
    let one = stdout(&eelkit_env(&args, &[("EELKIT_THREADS", "1")]));
    let four = stdout(&eelkit_env(&args, &[("EELKIT_THREADS", "4")]));
    let default = stdout(&eelkit(&args));
    assert_eq!(one, four);
    assert_eq!(one, default);
}

#[test]
fn contour_points_lie_in_the_region() {
    let planar = data("planar.csv");
    let dir = std::env::temp_dir().join(format!("eelkit-contour-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for method in ["oel", "eel1"] {
        let csv = stdout(&eelkit(&[
            "contour",
            "--method",
            method,
            "--tau",
            "3",
            "--rays",
            "32",
            "--format",
            "csv",
            "--input",
            path(&planar),
        ]));
        assert_eq!(csv.lines().count(), 33);
        let file = dir.join(format!("{method}.csv"));
        std::fs::write(&file, csv).unwrap();
        let v = json(&eelkit(&[
            "region",
            "--method",
            method,
            "--critical",
            "3.000001",
            "--points",
            path(&file),
            "--input",
            path(&planar),
        ]));
        assert_eq!(v["results"]["all_inside"], true, "{method}");
        assert_eq!(v["results"]["points"].as_array().unwrap().len(), 32);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn stdin_is_read_when_no_input_is_given() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_eelkit"))
        .args(["eval", "--method", "oel", "--theta", "0"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"-1\n2\n").unwrap();
    let v: serde_json::Value = serde_json::from_slice(&child.wait_with_output().unwrap().stdout).unwrap();
    let l = v["results"]["loglik"]["value"].as_f64().unwrap();
    assert!((l - 2.0 * 1.125_f64.ln()).abs() < 1e-11);
}

#[test]
fn golden_outputs() {
    let scalar = data("scalar.csv");
    let planar = data("planar.csv");
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("ci.json", vec!["ci", "--method", "oel,eel1,eel2,bel", "--level", "0.9", "--input", path(&scalar)]),
        ("ci.csv", vec!["ci", "--method", "oel,eel1", "--format", "csv", "--input", path(&scalar)]),
        (
            "contour.csv",
            vec![
                "contour",
                "--method",
                "eel1",
                "--level",
                "0.9",
                "--rays",
                "8",
                "--format",
                "csv",
                "--input",
                path(&planar),
            ],
        ),
        (
            "region.json",
            vec!["region", "--method", "eel1", "--level", "0.95", "--theta", "1.2,-0.4", "--input", path(&planar)],
        ),
        (
            "coverage.json",
            vec!["coverage", "--dist", "bv2", "--n", "20", "--level", "0.9", "--reps", "300", "--seed", "7"],
        ),
        (
            "coverage.csv",
            vec![
                "coverage",
                "--dist",
                "chisq1",
                "--n",
                "15",
                "--methods",
                "oel,eel1,eel2,bel",
                "--reps",
                "300",
                "--seed",
                "7",
                "--format",
                "csv",
            ],
        ),
        ("lengths.json", vec!["lengths", "--dist", "student-t5", "--n", "20", "--reps", "200", "--seed", "3"]),
        ("bartlett.json", vec!["bartlett", "--input", path(&scalar)]),
    ];
    for (name, args) in cases {
        assert_eq!(stdout(&eelkit(&args)), golden(name), "{name}");
    }
}
