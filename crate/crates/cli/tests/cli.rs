use std::io::Write;
use std::process::{Command, Output, Stdio};

fn fracops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracops"))
        .args(args)
        .env_remove("FRACOPS_TOL")
        .output()
        .unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fracops"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn half_derivative_of_root_t() {
    let o = fracops(&["eval", "--op", "D", "--alpha", "0.5", "--expr", "t^0.5", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0.88622692545276\n");
}

#[test]
fn zero_order_integral_echoes_csv_input() {
    let input = "t,value\n0,1.25\n0.5,-2\n1,3.5\n";
    let o = with_stdin(&["eval", "--op", "J", "--alpha", "0", "--format", "csv"], input);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values, vec![1.25, -2.0, 3.5]);

    let o = with_stdin(&["eval", "--op", "J", "--alpha", "0"], input);
    assert_eq!(stdout(&o), "0 1.25\n0.5 -2\n1 3.5\n");
}

#[test]
fn numeric_and_symbolic_paths_agree() {
    let o = fracops(&[
        "eval",
        "--op",
        "J",
        "--alpha",
        "0.5",
        "--expr",
        "t",
        "--numeric",
        "--grid",
        "1",
        "1024",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let last = rows.as_array().unwrap().last().unwrap();
    assert_eq!(last["t"].as_f64(), Some(1.0));
    let want = 4.0 / (3.0 * std::f64::consts::PI.sqrt());
    assert!((last["value"].as_f64().unwrap() - want).abs() < 1e-4);
}

#[test]
fn multiple_points_and_symbolic_output() {
    let o = fracops(&["eval", "--op", "J", "--alpha", "1", "--expr", "2*t", "--t", "1,2,3"]);
    assert_eq!(stdout(&o), "1\n4\n9\n");
    let o = fracops(&["eval", "--op", "Dc", "--alpha", "0.5", "--expr", "1 + t", "--symbolic"]);
    let got: fracops::PowerSum = stdout(&o).trim().parse().unwrap();
    assert!(got.approx_eq(&fracops::PowerSum::monomial(2.0 / std::f64::consts::PI.sqrt(), 0.5)));
}

#[test]
fn liouville_and_weyl_terms() {
    let o = fracops(&["eval", "--op", "J", "--alpha", "0.5", "--expr", "exp(2*t)", "--t", "0"]);
    assert_eq!(stdout(&o), format!("{}\n", "0.70710678118655"));
    let o = fracops(&["eval", "--op", "J", "--alpha", "0.5", "--expr", "exp(-2*t)", "--t", "0"]);
    assert_eq!(stdout(&o), "0.70710678118655\n");
    let o = fracops(&["eval", "--op", "Dc", "--alpha", "0.5", "--expr", "exp(2*t)", "--t", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn words_trace_right_to_left() {
    let o = fracops(&["word", "--word", "D:0.5,D:0.5", "--expr", "t^-0.5"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = fracops(&["word", "--word", "D:1", "--expr", "t^-0.5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let out: fracops::PowerSum = v["output"].as_str().unwrap().parse().unwrap();
    assert!(out.approx_eq(&fracops::PowerSum::monomial(-0.5, -1.5)));
    let o = fracops(&["word", "--word", "D:1.5,D:0.5", "--expr", "t^0.5", "--trace"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("after D:0.5"));
    assert!(lines[2].starts_with("after D:1.5"));
}

#[test]
fn laplace_cross_check() {
    let o = fracops(&[
        "laplace",
        "--expr",
        "1 + 2*t - 0.5*t^2.5",
        "--op",
        "D",
        "--alpha",
        "0.5",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["symbolic_agrees"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    for r in v["rows"].as_array().unwrap() {
        assert!(r["abs_error"].as_f64().unwrap() <= 1e-6);
    }
    let o = fracops(&["laplace", "--expr", "t", "--s", "3", "--format", "csv"]);
    let text = stdout(&o);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!((row[1] - 1.0 / 9.0).abs() < 1e-15);
}

#[test]
fn a_check_tolerance_nobody_can_meet_fails_with_exit_one() {
    let o = fracops(&["laplace", "--expr", "t^0.3", "--check-tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classification() {
    let cases = [
        ("abs(t)^-2", "0.5", "Liouville"),
        ("abs(t)^-0.4", "0.5", "Neither"),
        ("exp(3*t)", "2.5", "Liouville"),
        ("t^0.5 + 1", "1.5", "Riemann"),
        ("t^-1.5", "0.5", "Neither"),
        ("exp(-1*t)", "0.5", "Liouville"),
    ];
    for (expr, alpha, want) in cases {
        let o = fracops(&["classify", "--expr", expr, "--alpha", alpha]);
        assert_eq!(stdout(&o).trim(), want, "{expr}");
    }
}

#[test]
fn verify_suites() {
    let o = fracops(&["verify", "--suite", "inverse"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS inverse (500 cases)"));

    let o = fracops(&["verify", "--suite", "all", "--cases", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), fracops::suites::SUITES.len());

    let o = fracops(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tolerance_from_the_environment() {
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_fracops"))
            .args(["verify", "--suite", "semigroup", "--cases", "50", "--verbose"])
            .env("FRACOPS_TOL", tol)
            .output()
            .unwrap()
    };
    let o = run("1e-9");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("relative tolerance 1e-9\n"), "{}", stdout(&o));
    assert_eq!(run("tight").status.code(), Some(2));
    assert_eq!(run("-1").status.code(), Some(2));
}

#[test]
fn worked_example_table() {
    let o = fracops(&["table", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let values: Vec<f64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value_at_1"].as_f64().unwrap())
        .collect();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    assert!((values[0] - sqrt_pi / 2.0).abs() <= 1e-12);
    assert_eq!(values[1], 0.0);
    assert_eq!(values[2], -0.5);
    assert_eq!(values[3], 0.0);
    assert!((values[4] - 1.0 / sqrt_pi).abs() <= 1e-12);
}

#[test]
fn bad_input_never_panics() {
    let bad: [&[&str]; 8] = [
        &["eval", "--op", "D", "--alpha", "0.5", "--expr", "t^"],
        &["eval", "--op", "D", "--alpha", "-1", "--expr", "t"],
        &["eval", "--op", "J", "--alpha", "0.5", "--expr", "t^-2", "--t", "1"],
        &["eval", "--op", "J", "--alpha", "0.5", "--expr", "t^-0.5", "--numeric"],
        &["eval", "--op", "J", "--alpha", "0.5", "--expr", "t", "--grid", "1", "x"],
        &["word", "--word", "D:", "--expr", "t"],
        &["laplace", "--expr", "t^-1.5"],
        &["eval", "--op", "J", "--alpha", "0.5", "--expr", "abs(t)^-2"],
    ];
    for args in bad {
        let o = fracops(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(!err.contains("panicked"), "{args:?}: {err}");
    }
    let o = with_stdin(&["eval", "--op", "J", "--alpha", "0.5"], "t,value\n0,1\n0.5,oops\n");
    assert_eq!(o.status.code(), Some(2));
}
