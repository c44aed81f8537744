//! Seeded, randomized verification suites. Each suite checks one family of
//! identities and reports its failures; `fracops verify` and the acceptance
//! target both drive them.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FracError, Result};
use crate::exponent_law::{
    annihilated_exponents, apply_word, check_theorem3, default_exponent_grid, solve_sequential, verify_sequential,
    CompositionCase, OperatorWord, SequentialKind, SequentialProblem, Step, StepKind,
};
use crate::laplace::{
    numeric_laplace, rl_initial_values, rule_caputo, rule_j, rule_rl, transform, SPowerSum, TailBound,
};
use crate::liouville::{
    causal_jump_identity_check, liouville_derivative, liouville_integral, liouville_integral_truncated, weyl_integral,
    weyl_integral_truncated, LiouvilleTerm, WeylTerm,
};
use crate::numeric::{
    caputo_derivative_numeric, convergence_order, correction_series, rl_derivative_numeric, rl_integral_numeric,
    ConvergenceCase, InitialData, NumericOperator, SampledFunction,
};
use crate::special::gamma;
use crate::symbolic::{
    caputo_derivative, classical_derivative, decompose_rl_caputo, initial_derivatives, null_space_basis, rl_derivative,
    rl_integral, DerivativeKind, FracOrder, PowerSum, PowerTerm,
};
use crate::tol::COEFF_REL_TOL;

/// Every suite name accepted by [`run`], besides `all`.
pub const SUITES: &[&str] = &[
    "semigroup",
    "inverse",
    "right-inverse",
    "decompose",
    "laplace",
    "convergence",
    "liouville",
    "exponent-law",
    "theorem3",
    "limits",
];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides each suite's default number of random cases.
    pub cases: Option<usize>,
    /// Relative coefficient tolerance for symbolic identities.
    pub rel_tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed_f2ac,
            cases: None,
            rel_tol: COEFF_REL_TOL,
        }
    }
}

impl SuiteConfig {
    fn cases(&self, default: usize) -> usize {
        self.cases.unwrap_or(default)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    /// Measured quantities worth printing (orders, timings).
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            cases: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn check_result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }
}

/// Runs one suite by name, or every suite for `all`.
pub fn run(name: &str, cfg: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, cfg)).collect();
    }
    Ok(vec![run_one(name, cfg)?])
}

fn run_one(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    Ok(match name {
        "semigroup" => semigroup(cfg),
        "inverse" => inverse(cfg),
        "right-inverse" => right_inverse(cfg),
        "decompose" => decompose(cfg),
        "laplace" => laplace(cfg),
        "convergence" => convergence(cfg),
        "liouville" => liouville(cfg),
        "exponent-law" => exponent_law(cfg),
        "theorem3" => theorem3(cfg),
        "limits" => limits(cfg),
        other => {
            return Err(FracError::Domain(format!(
                "unknown suite {other:?}; expected one of {} or all",
                SUITES.join(", ")
            )))
        }
    })
}

/// Random inputs shared by the suites and the tests.
pub mod gen {
    use super::*;

    fn coeff(rng: &mut impl Rng) -> f64 {
        let c = rng.gen_range(0.1..5.0);
        if rng.gen_bool(0.5) {
            -c
        } else {
            c
        }
    }

    /// Up to `max_terms` terms with exponents drawn from (lo, hi].
    pub fn power_sum(rng: &mut impl Rng, max_terms: usize, lo: f64, hi: f64) -> PowerSum {
        let n = rng.gen_range(1..=max_terms);
        PowerSum::new((0..n).map(|_| PowerTerm::new(coeff(rng), hi - rng.gen_range(0.0..hi - lo))))
    }

    /// A Riemann-class sum with exponents in (-0.95, 3].
    pub fn riemann(rng: &mut impl Rng) -> PowerSum {
        power_sum(rng, 4, -0.95, 3.0)
    }

    /// An order drawn from (lo, hi].
    pub fn order(rng: &mut impl Rng, lo: f64, hi: f64) -> FracOrder {
        FracOrder::new(hi - rng.gen_range(0.0..hi - lo)).expect("positive order")
    }

    /// Integer powers below m plus non-integer powers in (m-1, m+2].
    pub fn admissible(rng: &mut impl Rng, ord: FracOrder) -> PowerSum {
        let m = ord.m() as f64;
        let mut taylor = Vec::new();
        for k in 0..ord.m() {
            if rng.gen_bool(0.7) {
                taylor.push(PowerTerm::new(coeff(rng), k as f64));
            }
        }
        let rest = power_sum(rng, 3, m - 0.95, m + 2.0);
        &PowerSum::new(taylor) + &rest
    }

    /// Coefficients of a polynomial of degree < `max_len`.
    pub fn poly(rng: &mut impl Rng, max_len: usize) -> Vec<f64> {
        let n = rng.gen_range(1..=max_len);
        (0..n).map(|_| coeff(rng)).collect()
    }
}

fn semigroup(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new("semigroup");
    let mut rng = cfg.rng(1);
    for _ in 0..cfg.cases(500) {
        let f = gen::riemann(&mut rng);
        let a = gen::order(&mut rng, 0.0, 3.0);
        let b = gen::order(&mut rng, 0.0, 3.0);
        let ab = FracOrder::new(a.alpha() + b.alpha()).expect("sum of orders");
        let out = (|| {
            let lhs = rl_integral(&rl_integral(&f, b)?, a)?;
            let swapped = rl_integral(&rl_integral(&f, a)?, b)?;
            let rhs = rl_integral(&f, ab)?;
            Ok(lhs.approx_eq_with(&rhs, cfg.rel_tol) && swapped.approx_eq_with(&rhs, cfg.rel_tol))
        })();
        r.check_result(out, || format!("J^{a} J^{b} on {f}"));

        // Kernel composition: J^α Φ_β = Φ_(α+β).
        let out = PowerSum::kernel(b.alpha())
            .and_then(|k| Ok(rl_integral(&k, a)?.approx_eq_with(&PowerSum::kernel(ab.alpha())?, cfg.rel_tol)));
        r.check_result(out, || format!("J^{a} Φ_{b}"));
    }
    r
}

fn inverse(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new("inverse");
    let mut rng = cfg.rng(2);
    for _ in 0..cfg.cases(500) {
        let f = gen::riemann(&mut rng);
        let a = gen::order(&mut rng, 0.0, 3.0);
        let out = rl_integral(&f, a)
            .and_then(|g| rl_derivative(&g, a))
            .map(|back| back.approx_eq_with(&f, cfg.rel_tol));
        r.check_result(out, || format!("D^{a} J^{a} on {f}"));
    }
    r
}

fn right_inverse(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new("right-inverse");
    let mut rng = cfg.rng(3);
    for _ in 0..cfg.cases(100) {
        let a = gen::order(&mut rng, 0.0, 2.0);
        let f = PowerSum::monomial(1.0, a.alpha() - 1.0);
        let out = rl_derivative(&f, a)
            .and_then(|d| rl_integral(&d, a))
            .map(|back| back.is_zero() && !f.is_zero());
        r.check_result(out, || format!("J^{a} D^{a} t^({a}-1) should vanish"));

        for (kind, label) in [(DerivativeKind::RiemannLiouville, "D"), (DerivativeKind::Caputo, "D_*")] {
            let out = null_space_basis(kind, a).and_then(|basis| {
                let mut all = basis.len() == a.m();
                for b in &basis {
                    let d = match kind {
                        DerivativeKind::RiemannLiouville => rl_derivative(b, a)?,
                        DerivativeKind::Caputo => caputo_derivative(b, a)?,
                    };
                    all &= d.is_zero();
                }
                Ok(all)
            });
            r.check_result(out, || format!("{label}^{a} must annihilate its null-space basis"));
        }
    }
    r
}

fn decompose(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new("decompose");
    let mut rng = cfg.rng(4);
    for _ in 0..cfg.cases(100) {
        let a = gen::order(&mut rng, 0.0, 3.0);
        let f = gen::admissible(&mut rng, a);
        let out = (|| {
            let parts = decompose_rl_caputo(&f, a)?;
            Ok(parts.total().approx_eq_with(&rl_derivative(&f, a)?, cfg.rel_tol))
        })();
        r.check_result(out, || format!("decomposition of D^{a} on {f}"));

        let a = gen::order(&mut rng, 0.0, 0.999);
        let f = gen::admissible(&mut rng, a);
        let t = rng.gen_range(0.1..3.0);
        let out = causal_jump_identity_check(&f, a, t).map(|c| c.holds(cfg.rel_tol));
        r.check_result(out, || format!("jump identity for {f}, α = {a}, t = {t}"));
    }
    r
}

/// `(time-domain expression, its image)` pairs for the numeric cross-check.
fn laplace_pairs() -> Result<Vec<(String, PowerSum, SPowerSum)>> {
    let half = FracOrder::new(0.5)?;
    let f = PowerSum::from_pairs(&[(1.0, 0.0), (2.0, 1.0), (-0.5, 2.5)]);
    let ft = transform(&f)?;
    let g = PowerSum::from_pairs(&[(1.0, 0.3), (1.0, 1.0)]);
    let o14 = FracOrder::new(1.4)?;
    Ok(vec![
        (
            "Φ_1/2".into(),
            PowerSum::kernel(0.5)?,
            transform(&PowerSum::kernel(0.5)?)?,
        ),
        (format!("J^0.5 ({f})"), rl_integral(&f, half)?, rule_j(half, &ft)),
        (
            format!("D_*^0.5 ({f})"),
            caputo_derivative(&f, half)?,
            rule_caputo(half, &ft, &InitialData::of(&f, half)?)?,
        ),
        (
            format!("D^0.5 ({f})"),
            rl_derivative(&f, half)?,
            rule_rl(half, &ft, &rl_initial_values(&f, half)?)?,
        ),
        (
            format!("J^1.4 ({g})"),
            rl_integral(&g, o14)?,
            rule_j(o14, &transform(&g)?),
        ),
    ])
}

fn laplace(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new("laplace");
    let mut rng = cfg.rng(5);
    for _ in 0..cfg.cases(100) {
        let f = gen::riemann(&mut rng);
        let a = gen::order(&mut rng, 0.0, 3.0);
        let out = (|| Ok(transform(&rl_integral(&f, a)?)?.approx_eq_with(&rule_j(a, &transform(&f)?), cfg.rel_tol)))();
        r.check_result(out, || format!("J diagram, α = {a}, f = {f}"));

        // RL: only where the derivative stays transformable and the initial values are bounded.
        if let (Ok(Ok(lhs)), Ok(init)) = (rl_derivative(&f, a).map(|d| transform(&d)), rl_initial_values(&f, a)) {
            let out = transform(&f)
                .and_then(|ft| rule_rl(a, &ft, &init))
                .map(|rhs| lhs.approx_eq_with(&rhs, cfg.rel_tol));
            r.check_result(out, || format!("RL diagram, α = {a}, f = {f}"));
        }

        let g = gen::admissible(&mut rng, a);
        if let Ok(Ok(lhs)) = caputo_derivative(&g, a).map(|d| transform(&d)) {
            let out = (|| {
                let rhs = rule_caputo(a, &transform(&g)?, &InitialData::of(&g, a)?)?;
                Ok(lhs.approx_eq_with(&rhs, cfg.rel_tol))
            })();
            r.check_result(out, || format!("Caputo diagram, α = {a}, f = {g}"));
        }
    }

    match laplace_pairs() {
        Ok(pairs) => {
            for (label, time, image) in pairs {
                for s in [0.5, 1.0, 2.0, 5.0] {
                    let eval = |t: f64| time.evaluate(t).unwrap_or(f64::NAN);
                    let out = numeric_laplace(&eval, s, 40.0 + 40.0 / s, 1e-8, TailBound::PowerLaw)
                        .and_then(|num| Ok((num - image.evaluate(s)?).abs() <= 1e-6));
                    r.check_result(out, || format!("numeric Laplace of {label} at s = {s}"));
                }
            }
        }
        Err(e) => r.check(false, || format!("building Laplace pairs: {e}")),
    }
    r
}

fn order_case(r: &mut SuiteReport, label: &str, case: Result<ConvergenceCase>, sizes: &[usize], lo: f64, hi: f64) {
    let out = case.and_then(|c| convergence_order(&c, sizes));
    match out {
        Ok(rep) => {
            r.notes.push(format!("{label}: order {:.3}", rep.order));
            r.check(!rep.degenerate && (lo..=hi).contains(&rep.order), || {
                format!(
                    "{label}: order {:.3} outside [{lo}, {hi}] (errors {:?})",
                    rep.order, rep.errors
                )
            });
        }
        Err(e) => r.check(false, || format!("{label}: {e}")),
    }
}

fn convergence(_cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new("convergence");
    let sizes = [64, 128, 256, 512, 1024];
    let ord = |a: f64| FracOrder::new(a).expect("order");
    let t2 = PowerSum::monomial(1.0, 2.0);
    let t3 = PowerSum::monomial(1.0, 3.0);
    let smooth = PowerSum::from_pairs(&[(1.0, 0.0), (-2.0, 1.0), (1.0, 3.0), (0.5, 4.0)]);
    use NumericOperator::*;
    for a in [0.25, 0.5, 0.9, 1.5] {
        order_case(
            &mut r,
            &format!("J^{a} t^2"),
            ConvergenceCase::from_power_sum(Integral, &t2, ord(a), 1.0, false),
            &sizes,
            1.8,
            2.2,
        );
    }
    order_case(
        &mut r,
        "D_*^0.5 t^3 (exact f')",
        ConvergenceCase::from_power_sum(Caputo, &t3, ord(0.5), 1.0, true),
        &sizes,
        1.8,
        2.2,
    );
    for a in [0.5, 1.5] {
        order_case(
            &mut r,
            &format!("D_*^{a} quartic (difference f^(m))"),
            ConvergenceCase::from_power_sum(Caputo, &smooth, ord(a), 1.0, false),
            &sizes,
            1.8,
            2.2,
        );
        order_case(
            &mut r,
            &format!("D^{a} quartic (difference f^(m))"),
            ConvergenceCase::from_power_sum(RiemannLiouville, &smooth, ord(a), 1.0, false),
            &sizes,
            1.8,
            2.2,
        );
    }

    let started = Instant::now();
    let value = SampledFunction::from_fn(1.0, 1024, |t| t)
        .and_then(|f| rl_integral_numeric(&f, ord(0.5)))
        .map(|j| j.values()[1024]);
    let elapsed = started.elapsed().as_secs_f64();
    let want = 4.0 / (3.0 * std::f64::consts::PI.sqrt());
    match value {
        Ok(v) => {
            r.notes
                .push(format!("J^0.5 t at t = 1, N = 1024: {v:.12} in {elapsed:.4} s"));
            r.check((v - want).abs() <= 1e-4 && elapsed < 1.0, || {
                format!("J^0.5 t at 1 = {v} (want {want} ± 1e-4), {elapsed:.3} s")
            });
        }
        Err(e) => r.check(false, || format!("J^0.5 t: {e}")),
    }

    numeric_identities(&mut r);

    // Discrete semigroup on causally smooth inputs (vanishing at 0): the gap
    // J_h^α J_h^β f - J_h^(α+β) f shrinks at least like h^1.5. A nonzero f(0)
    // is a jump of the causal extension and only gives about h^1; reported, not asserted.
    let smooth = |t: f64| t * (-t).exp() * (2.0 * t).cos();
    let jumpy = |t: f64| (-t).exp() * (2.0 * t).cos();
    for (a, b) in [(0.7, 0.4), (0.5, 0.5), (0.3, 0.9), (1.2, 0.6)] {
        match discrete_semigroup_rate(&smooth, a, b, &sizes) {
            Ok(rate) => {
                r.notes.push(format!("discrete semigroup rate ({a}, {b}): {rate:.3}"));
                r.check(rate >= 1.5, || {
                    format!("discrete semigroup rate {rate:.3} < 1.5 at ({a}, {b})")
                });
            }
            Err(e) => r.check(false, || format!("discrete semigroup: {e}")),
        }
    }
    if let Ok(rate) = discrete_semigroup_rate(&jumpy, 0.7, 0.4, &sizes) {
        r.notes
            .push(format!("discrete semigroup rate with f(0) != 0: {rate:.3}"));
    }
    r
}

/// Oracle agreement, constants under Caputo, linearity and the RL/Caputo split.
fn numeric_identities(r: &mut SuiteReport) {
    let ord = |a: f64| FracOrder::new(a).expect("order");
    type Input = (&'static str, fn(f64) -> f64);
    let inputs: [Input; 4] = [
        ("t", |t| t),
        ("t^2", |t| t * t),
        ("t^1/2 + t", |t| t.sqrt() + t),
        ("e^-t", |t| (-t).exp()),
    ];
    for (name, f) in inputs {
        let scale = (0..=64).map(|j| f(j as f64 / 64.0).abs()).fold(1.0, f64::max);
        for alpha in [0.25, 0.5, 0.9, 1.5] {
            let n = 32;
            let out = (|| {
                let s = SampledFunction::from_fn(1.0, n, f)?;
                let j = rl_integral_numeric(&s, ord(alpha))?;
                let bound = 5.0 * s.step().powf(1.8) * scale;
                let mut ok = true;
                for k in 1..n {
                    let want = crate::numeric::oracle_quadrature(&f, ord(alpha), s.t(k), 1e-11)?;
                    ok &= (j.values()[k] - want).abs() <= bound;
                }
                Ok(ok)
            })();
            r.check_result(out, || format!("oracle agreement for {name}, α = {alpha}"));
        }
    }

    for alpha in [0.3, 1.0, 1.7, 2.0] {
        let out = SampledFunction::from_fn(2.0, 50, |_| 3.25)
            .and_then(|s| caputo_derivative_numeric(&s, ord(alpha), None))
            .map(|d| d.values().iter().all(|&v| v == 0.0));
        r.check_result(out, || format!("D_*^{alpha} of a constant is not exactly zero"));
    }

    let n = 64;
    let f = |t: f64| (1.3 * t).sin() + 0.5;
    let g = |t: f64| t * t - t;
    let (a, b) = (1.5, -0.75);
    for alpha in [0.4, 1.6] {
        let o = ord(alpha);
        let init_f = InitialData::new(vec![0.5, 1.3][..o.m()].to_vec());
        let init_g = InitialData::new(vec![0.0, -1.0][..o.m()].to_vec());
        let out = (|| {
            let sf = SampledFunction::from_fn(1.0, n, f)?;
            let sg = SampledFunction::from_fn(1.0, n, g)?;
            let sh = SampledFunction::new(
                sf.step(),
                sf.values()
                    .iter()
                    .zip(sg.values())
                    .map(|(x, y)| a * x + b * y)
                    .collect(),
            )?;
            let init_h = InitialData::new(
                init_f
                    .derivs
                    .iter()
                    .zip(&init_g.derivs)
                    .map(|(x, y)| a * x + b * y)
                    .collect(),
            );
            let weight = sf.step().powf(-alpha).max(1.0) * 2.0;
            let mut ok = true;
            let outputs = [
                (
                    rl_integral_numeric(&sf, o)?,
                    rl_integral_numeric(&sg, o)?,
                    rl_integral_numeric(&sh, o)?,
                ),
                (
                    caputo_derivative_numeric(&sf, o, None)?,
                    caputo_derivative_numeric(&sg, o, None)?,
                    caputo_derivative_numeric(&sh, o, None)?,
                ),
                (
                    rl_derivative_numeric(&sf, o, &init_f, None)?,
                    rl_derivative_numeric(&sg, o, &init_g, None)?,
                    rl_derivative_numeric(&sh, o, &init_h, None)?,
                ),
            ];
            for (rf, rg, rh) in &outputs {
                for j in 1..=n {
                    let comb = a * rf.values()[j] + b * rg.values()[j];
                    ok &= (rh.values()[j] - comb).abs() <= 1e-12 * weight.max(comb.abs());
                }
            }
            // RL minus Caputo is exactly the added correction series.
            let series = correction_series(&init_f, o);
            let (cap, rl) = (&outputs[1].0, &outputs[2].0);
            for j in 1..=n {
                let want = series.evaluate(sf.t(j))?;
                ok &= (rl.values()[j] - cap.values()[j] - want).abs() <= 1e-10 * want.abs().max(1.0);
            }
            Ok(ok)
        })();
        r.check_result(out, || format!("linearity or RL/Caputo split at α = {alpha}"));
    }
}

/// Observed rate of `max |J_h^α J_h^β f - J_h^(α+β) f|` between the first and
/// last grid size on [0, 1].
pub fn discrete_semigroup_rate(f: &dyn Fn(f64) -> f64, alpha: f64, beta: f64, sizes: &[usize]) -> Result<f64> {
    let gap = |n: usize| -> Result<f64> {
        let s = SampledFunction::from_fn(1.0, n, f)?;
        let twice = rl_integral_numeric(&rl_integral_numeric(&s, FracOrder::new(beta)?)?, FracOrder::new(alpha)?)?;
        let once = rl_integral_numeric(&s, FracOrder::new(alpha + beta)?)?;
        Ok(twice
            .values()
            .iter()
            .zip(once.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max))
    };
    let (n0, n1) = match sizes {
        [first, .., last] if first < last => (*first, *last),
        _ => return Err(FracError::Precondition("need two increasing grid sizes".into())),
    };
    Ok((gap(n0)? / gap(n1)?).ln() / (n1 as f64 / n0 as f64).ln())
}

fn liouville(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new("liouville");
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    let ord = |a: f64| FracOrder::new(a).expect("order");
    let g = |x: f64| gamma(x).unwrap_or(f64::NAN);

    let cases: Vec<(String, Result<bool>)> = vec![
        (
            "J^0.5 e^(2t)".into(),
            liouville_integral(&LiouvilleTerm::Exponential { coeff: 1.0, rate: 2.0 }, ord(0.5))
                .map(|t| close(t.coeff(), 2f64.powf(-0.5))),
        ),
        (
            "J^0.5 |t|^-2".into(),
            liouville_integral(&LiouvilleTerm::PowerOfAbs { coeff: 1.0, delta: 2.0 }, ord(0.5)).map(|t| {
                close(t.coeff(), g(1.5) / g(2.0))
                    && matches!(t, LiouvilleTerm::PowerOfAbs { delta, .. } if delta == 1.5)
            }),
        ),
        (
            "D^0.5 e^(2t)".into(),
            Ok(close(
                liouville_derivative(&LiouvilleTerm::Exponential { coeff: 1.0, rate: 2.0 }, ord(0.5)).coeff(),
                2f64.sqrt(),
            )),
        ),
        (
            "D^0.5 |t|^-1".into(),
            Ok(close(
                liouville_derivative(&LiouvilleTerm::PowerOfAbs { coeff: 1.0, delta: 1.0 }, ord(0.5)).coeff(),
                g(1.5),
            )),
        ),
        (
            "W^0.5 e^(-2t)".into(),
            weyl_integral(&WeylTerm::ExpDecay { coeff: 1.0, rate: 2.0 }, ord(0.5)).map(
                |w| matches!(w, WeylTerm::ExpDecay { coeff, rate } if close(coeff, 2f64.powf(-0.5)) && rate == 2.0),
            ),
        ),
        (
            "W^0.5 t^-2".into(),
            weyl_integral(&WeylTerm::PowerDecay { coeff: 1.0, delta: 2.0 }, ord(0.5))
                .map(|w| matches!(w, WeylTerm::PowerDecay { coeff, delta } if close(coeff, g(1.5)) && delta == 1.5)),
        ),
    ];
    for (label, out) in cases {
        r.check_result(out, || label);
    }

    let mut rng = cfg.rng(7);
    for _ in 0..cfg.cases(100) {
        let a = gen::order(&mut rng, 0.0, 2.0);
        let b = gen::order(&mut rng, 0.0, 2.0);
        let term = if rng.gen_bool(0.5) {
            LiouvilleTerm::Exponential {
                coeff: rng.gen_range(-3.0..3.0),
                rate: rng.gen_range(0.1..4.0),
            }
        } else {
            LiouvilleTerm::PowerOfAbs {
                coeff: rng.gen_range(-3.0..3.0),
                delta: a.alpha() + b.alpha() + rng.gen_range(0.05..3.0),
            }
        };
        let out =
            (|| {
                let back = liouville_derivative(&liouville_integral(&term, a)?, a);
                let two = liouville_integral(&liouville_integral(&term, a)?, b)?;
                let one = liouville_integral(&term, FracOrder::new(a.alpha() + b.alpha())?)?;
                Ok(close(back.coeff(), term.coeff())
                    && close(two.coeff(), one.coeff())
                    && term.reflect().reflect() == term)
            })();
        r.check_result(out, || {
            format!("inverse pair and exponent law for {term}, α = {a}, β = {b}")
        });
    }

    let tq: Vec<(String, Result<bool>)> = vec![
        ("truncated J^0.5 e^t at 0, T = 20".into(), {
            let e = LiouvilleTerm::Exponential { coeff: 1.0, rate: 1.0 };
            liouville_integral_truncated(&e, ord(0.5), 0.0, 20.0, 1e-9)
                .and_then(|q| Ok((q.value - liouville_integral(&e, ord(0.5))?.evaluate(0.0)?).abs() <= 1e-6))
        }),
        ("truncated J^0.5 |t|^-2 at -1, T = 1e5".into(), {
            let p = LiouvilleTerm::PowerOfAbs { coeff: 1.0, delta: 2.0 };
            liouville_integral_truncated(&p, ord(0.5), -1.0, 1e5, 1e-9)
                .and_then(|q| Ok((q.value - liouville_integral(&p, ord(0.5))?.evaluate(-1.0)?).abs() <= 1e-6))
        }),
        ("truncated W^0.5 e^(-2t) at 0.5, T = 30".into(), {
            let w = WeylTerm::ExpDecay { coeff: 1.0, rate: 2.0 };
            weyl_integral_truncated(&w, ord(0.5), 0.5, 30.0, 1e-9)
                .and_then(|q| Ok((q.value - weyl_integral(&w, ord(0.5))?.evaluate(0.5)?).abs() <= 1e-6))
        }),
        ("truncated W^0.5 t^-2 at 1, T = 1e5".into(), {
            let w = WeylTerm::PowerDecay { coeff: 1.0, delta: 2.0 };
            weyl_integral_truncated(&w, ord(0.5), 1.0, 1e5, 1e-9)
                .and_then(|q| Ok((q.value - weyl_integral(&w, ord(0.5))?.evaluate(1.0)?).abs() <= 1e-6))
        }),
        ("truncated W^1 e^(-t) at 0.5, T = 40".into(), {
            let w = WeylTerm::ExpDecay { coeff: 1.0, rate: 1.0 };
            weyl_integral_truncated(&w, ord(1.0), 0.5, 40.0, 1e-9)
                .and_then(|q| Ok((q.value - weyl_integral(&w, ord(1.0))?.evaluate(0.5)?).abs() <= 1e-6))
        }),
    ];
    for (label, out) in tq {
        r.check_result(out, || label);
    }
    r
}

fn exponent_law(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new("exponent-law");
    let word = |s: &str| s.parse::<OperatorWord>();
    let out_of = |w: &str, f: &PowerSum| -> Result<PowerSum> { Ok(apply_word(&word(w)?, f)?.output().clone()) };

    let f = PowerSum::monomial(1.0, -0.5);
    let a =
        (|| Ok(out_of("D:0.5,D:0.5", &f)?.is_zero() && out_of("D:1", &f)?.approx_eq(&PowerSum::monomial(-0.5, -1.5))))(
        );
    r.check_result(a, || "commutation without additivity on t^-1/2".into());

    let g = PowerSum::monomial(1.0, 0.5);
    let b = (|| {
        let ab = out_of("D:0.5,D:1.5", &g)?;
        let ba = out_of("D:1.5,D:0.5", &g)?;
        Ok(ab.is_zero()
            && !ab.approx_eq(&ba)
            && ba.approx_eq(&out_of("D:2", &g)?)
            && ba.approx_eq(&PowerSum::monomial(-0.25, -1.5)))
    })();
    r.check_result(b, || "additivity without commutation on t^1/2".into());

    // Integer law on random polynomials.
    let mut rng = cfg.rng(8);
    for _ in 0..cfg.cases(100) {
        let p = PowerSum::new(
            gen::poly(&mut rng, 6)
                .into_iter()
                .enumerate()
                .map(|(k, c)| PowerTerm::new(c, k as f64)),
        );
        let m = rng.gen_range(0..=4usize);
        let n = rng.gen_range(0..=4usize);
        let out = (|| {
            let j = |k: usize, f: &PowerSum| rl_integral(f, FracOrder::new(k as f64)?);
            let jj = j(m, &j(n, &p)?)?.approx_eq_with(&j(m + n, &p)?, cfg.rel_tol);
            let dd = classical_derivative(&classical_derivative(&p, n), m)
                .approx_eq_with(&classical_derivative(&p, m + n), cfg.rel_tol);
            let via_frac = rl_derivative(
                &rl_derivative(&p, FracOrder::new(n as f64)?)?,
                FracOrder::new(m as f64)?,
            )?
            .approx_eq_with(&classical_derivative(&p, m + n), cfg.rel_tol);
            Ok(jj && dd && via_frac)
        })();
        r.check_result(out, || format!("integer law m = {m}, n = {n} on {p}"));
    }

    // Solution spaces: two free constants for the split problems, one for D.
    let mut pairs = vec![(0.5, 0.5), (0.25, 0.75)];
    for _ in 0..4 {
        let a = rng.gen_range(0.05..0.95);
        pairs.push((a, 1.0 - a));
    }
    for (alpha, beta) in pairs {
        for (kind, want) in [
            (SequentialKind::A { alpha, beta }, 2),
            (SequentialKind::B { alpha, beta }, 2),
            (SequentialKind::C, 1),
        ] {
            let found = annihilated_exponents(kind, &default_exponent_grid(kind));
            r.check(found.len() == want, || {
                format!("{kind:?}: null space {found:?}, want {want} elements")
            });
            let rhs = PowerSum::from_pairs(&[(1.0, 0.0), (-2.0, 1.5)]);
            let constants = vec![rng.gen_range(-3.0..3.0); want];
            let out = SequentialProblem::new(kind, rhs, constants)
                .and_then(|p| verify_sequential(&p, &solve_sequential(&p)?).map(|(_, ok)| ok));
            r.check_result(out, || format!("{kind:?}: general solution fails its own equation"));
        }
    }

    let jd = OperatorWord::new(vec![
        Step::new(StepKind::J, 0.7).expect("order"),
        Step::new(StepKind::D, 0.7).expect("order"),
    ]);
    let out = jd
        .and_then(|w| apply_word(&w, &PowerSum::monomial(1.0, -0.3)))
        .map(|t| t.output().is_zero());
    r.check_result(out, || "J^0.7 D^0.7 t^-0.3 should vanish".into());
    r
}

fn theorem3(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new("theorem3");
    let mut rng = cfg.rng(9);
    let n = cfg.cases(200);
    for case in [
        CompositionCase::IntegralFirst,
        CompositionCase::DerivativeWins,
        CompositionCase::DerivativesAdd,
    ] {
        for _ in 0..n {
            let lambda = rng.gen_range(-0.95..3.0);
            let eta = gen::poly(&mut rng, 5);
            let (mu, nu) = match case {
                CompositionCase::IntegralFirst => {
                    let mu = rng.gen_range(0.0..3.0);
                    (mu, rng.gen_range(0.0..=mu))
                }
                CompositionCase::DerivativeWins => {
                    let mu = rng.gen_range(0.0..3.0);
                    (mu, mu + 3.0 - rng.gen_range(0.0..3.0))
                }
                CompositionCase::DerivativesAdd => (rng.gen_range(0.0..lambda + 1.0), rng.gen_range(0.0..3.0)),
            };
            let out = check_theorem3(lambda, &eta, mu, nu, case);
            r.check_result(out, || {
                format!("{case:?}: λ = {lambda}, μ = {mu}, ν = {nu}, η = {eta:?}")
            });
        }
    }
    r
}

/// Distances to the integer-order limits at α = m-1+ε, ε in {1e-2, 1e-3, 1e-4}.
pub fn limit_errors(f: &PowerSum, m_minus_1: usize, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let classical = classical_derivative(f, m_minus_1);
    let mut rl = Vec::new();
    let mut caputo = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4] {
        let ord = FracOrder::new(m_minus_1 as f64 + eps)?;
        let jump = initial_derivatives(f, ord)?[m_minus_1];
        rl.push((rl_derivative(f, ord)?.evaluate(t)? - classical.evaluate(t)?).abs());
        caputo.push((caputo_derivative(f, ord)?.evaluate(t)? - (classical.evaluate(t)? - jump)).abs());
    }
    Ok((rl, caputo))
}

fn limits(cfg: &SuiteConfig) -> SuiteReport {
    let mut r = SuiteReport::new("limits");
    let mut samples = vec![
        PowerSum::from_pairs(&[(1.0, 0.0), (2.0, 1.0), (1.0, 2.5)]),
        PowerSum::from_pairs(&[(-1.5, 0.0), (0.5, 1.0), (3.0, 1.2), (-1.0, 3.0)]),
    ];
    let mut rng = cfg.rng(10);
    for _ in 0..cfg.cases(4) {
        samples.push(gen::admissible(&mut rng, FracOrder::new(1.5).expect("order")));
    }
    let decreasing = |e: &[f64]| e.windows(2).all(|w| w[1] < w[0]);
    for f in &samples {
        for m1 in [0usize, 1] {
            for t in [0.5, 1.0, 2.0] {
                let out = limit_errors(f, m1, t).map(|(rl, c)| decreasing(&rl) && decreasing(&c));
                r.check_result(out, || format!("limit α -> {m1}+ for {f} at t = {t}"));
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_run_of_every_suite() {
        let cfg = SuiteConfig {
            cases: Some(10),
            ..SuiteConfig::default()
        };
        for rep in run("all", &cfg).unwrap() {
            assert!(rep.passed(), "{}: {:?}", rep.name, rep.failures);
            assert!(rep.cases > 0, "{}", rep.name);
        }
        assert!(run("nope", &cfg).is_err());
    }

    #[test]
    fn generators_respect_their_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            assert!(gen::riemann(&mut rng).is_riemann_class());
            let a = gen::order(&mut rng, 0.0, 3.0);
            assert!(a.alpha() > 0.0 && a.alpha() <= 3.0);
            let f = gen::admissible(&mut rng, a);
            assert!(crate::symbolic::check_caputo_admissible(&f, a).is_ok(), "{f} {a}");
        }
    }
}
