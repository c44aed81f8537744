//! Acceptance criteria 1-9, one PASS/FAIL line each. Exits non-zero on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use fracops::suites::{self, SuiteConfig, SuiteReport};
use fracops::{rl_derivative, FracOrder, PowerSum};

fn ord(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

/// The worked-example table.
fn worked_examples() -> Vec<String> {
    let mut bad = Vec::new();
    let half = PowerSum::monomial(1.0, 0.5);
    let neg_half = PowerSum::monomial(1.0, -0.5);

    let d = rl_derivative(&half, ord(0.5)).unwrap();
    let v = d.evaluate(1.0).unwrap();
    if (v - PI.sqrt() / 2.0).abs() > 1e-12 || d.terms().len() != 1 || d.terms()[0].exponent != 0.0 {
        bad.push(format!("D^1/2 t^1/2 = {d}"));
    }
    let d = rl_derivative(&neg_half, ord(0.5)).unwrap();
    if !d.terms().is_empty() {
        bad.push(format!("D^1/2 t^-1/2 = {d}, want exact 0"));
    }
    let d = rl_derivative(&neg_half, ord(1.0)).unwrap();
    if d.terms().len() != 1 || d.terms()[0].coeff != -0.5 || d.terms()[0].exponent != -1.5 {
        bad.push(format!("D^1 t^-1/2 = {d}, want -0.5*t^-1.5"));
    }
    let d = rl_derivative(&half, ord(1.5)).unwrap();
    if !d.terms().is_empty() {
        bad.push(format!("D^3/2 t^1/2 = {d}, want exact 0"));
    }
    let d = rl_derivative(&PowerSum::constant(1.0), ord(0.5)).unwrap();
    let want = 1.0 / PI.sqrt();
    if d.terms().len() != 1 || d.terms()[0].exponent != -0.5 || (d.terms()[0].coeff - want).abs() > 1e-12 {
        bad.push(format!("D^1/2 1 = {d}, want {want}*t^-0.5"));
    }
    bad
}

fn suites_with(names: &[&str], cases: Option<usize>) -> Vec<String> {
    let cfg = SuiteConfig {
        cases,
        ..SuiteConfig::default()
    };
    let mut bad = Vec::new();
    for name in names {
        let reports: Vec<SuiteReport> = suites::run(name, &cfg).unwrap();
        for r in reports {
            for note in &r.notes {
                println!("    {}: {note}", r.name);
            }
            if r.cases == 0 {
                bad.push(format!("{}: no cases ran", r.name));
            }
            bad.extend(r.failures.iter().map(|f| format!("{}: {f}", r.name)));
        }
    }
    bad
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Box<dyn Fn() -> Vec<String>>);
    let criteria: Vec<Criterion> = vec![
        ("AC1 worked-example table", Box::new(worked_examples)),
        (
            "AC2 semigroup and left inverse, 500 cases each",
            Box::new(|| suites_with(&["semigroup", "inverse"], Some(500))),
        ),
        (
            "AC3 not-right-inverse and null spaces, 100 cases",
            Box::new(|| suites_with(&["right-inverse"], Some(100))),
        ),
        (
            "AC4 decomposition and jump identity",
            Box::new(|| suites_with(&["decompose"], Some(200))),
        ),
        (
            "AC5 Laplace diagrams and numeric cross-check",
            Box::new(|| suites_with(&["laplace"], Some(200))),
        ),
        (
            "AC6 numeric convergence orders and J^1/2 t",
            Box::new(|| suites_with(&["convergence"], None)),
        ),
        (
            "AC7 Liouville/Weyl closed forms and truncations",
            Box::new(|| suites_with(&["liouville"], Some(100))),
        ),
        (
            "AC8 exponent-law counterexamples, composition sweep, solution spaces",
            Box::new(|| suites_with(&["exponent-law", "theorem3"], Some(200))),
        ),
        (
            "AC9 limits at alpha = m-1+eps",
            Box::new(|| suites_with(&["limits"], None)),
        ),
    ];

    let mut failed = 0;
    for (label, check) in criteria {
        let started = Instant::now();
        let mut bad = check();
        let secs = started.elapsed().as_secs_f64();
        if secs > 60.0 {
            bad.push(format!("took {secs:.1} s, limit 60 s"));
        }
        if bad.is_empty() {
            println!("PASS {label} ({secs:.2} s)");
        } else {
            failed += 1;
            println!("FAIL {label} ({secs:.2} s)");
            for b in bad.iter().take(10) {
                println!("    {b}");
            }
            if bad.len() > 10 {
                println!("    ... {} more", bad.len() - 10);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
