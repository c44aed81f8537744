//! Fractional operators on uniformly sampled causal functions.
//!
//! `J^α` uses the product-trapezoidal rule: the piecewise-linear interpolant
//! of `f` is integrated exactly against `(t-τ)^(α-1)/Γ(α)`, giving
//!
//! ```text
//! J^α f(t_n) ≈ h^α/Γ(α+2) [ a_{0,n} f_0 + Σ_{j=1}^{n-1} a_{n-j} f_j + f_n ]
//! a_{0,n} = (n-1)^(α+1) - (n-1-α) n^α
//! a_k     = (k+1)^(α+1) - 2 k^(α+1) + (k-1)^(α+1)
//! ```
//!
//! which is second order for twice differentiable `f`. The Caputo derivative
//! applies the same rule of order `m-α` to `f^(m)`, reconstructed by
//! second-order finite differences unless supplied. The Riemann-Liouville
//! derivative adds the initial-value correction series explicitly.

use std::io::{Read, Write};

use crate::error::{FracError, Result};
use crate::quad;
use crate::special::reciprocal_gamma;
use crate::symbolic::{self, FracOrder, PowerSum};

/// Samples `values[j] = f(j * step)`, j = 0..N, on a uniform grid that starts at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    step: f64,
    values: Vec<f64>,
}

impl SampledFunction {
    /// Needs `step > 0`, at least three samples (N >= 2) and finite values.
    pub fn new(step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(FracError::Domain(format!("grid step must be positive, got {step}")));
        }
        if values.len() < 3 {
            return Err(FracError::Length {
                expected: 3,
                got: values.len(),
            });
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(FracError::Domain(format!("sample {j} is not finite")));
        }
        Ok(Self { step, values })
    }

    /// Samples `f` at `n + 1` nodes on [0, t_end].
    pub fn from_fn(t_end: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let step = t_end / n as f64;
        Self::new(step, (0..=n).map(|j| f(j as f64 * step)).collect())
    }

    // Output grids may carry NaN at node 0 as the not-a-value marker.
    fn marked(step: f64, values: Vec<f64>) -> Self {
        Self { step, values }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of steps N (one less than the number of samples).
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn t(&self, j: usize) -> f64 {
        j as f64 * self.step
    }

    pub fn t_end(&self) -> f64 {
        self.t(self.n())
    }

    /// The sample at node `j`; `None` past the grid or at a not-a-value node.
    pub fn value(&self, j: usize) -> Option<f64> {
        self.values.get(j).copied().filter(|v| !v.is_nan())
    }

    /// `true` when node 0 holds the not-a-value marker.
    pub fn is_marked(&self) -> bool {
        self.values[0].is_nan()
    }

    fn require_finite(&self) -> Result<()> {
        if self.is_marked() {
            return Err(FracError::Domain("input carries a not-a-value marker at t = 0".into()));
        }
        Ok(())
    }

    /// Writes `t,value` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "value"])?;
        for (j, v) in self.values.iter().enumerate() {
            out.write_record([format!("{:.16e}", self.t(j)), format!("{v:.16e}")])?;
        }
        out.flush().map_err(|e| FracError::Csv(e.to_string()))
    }

    /// Reads what [`write_csv`](Self::write_csv) writes. The grid must start
    /// at 0 and be uniform to 1e-9 relative; only row 0 may be `NaN`.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let header = rdr.headers()?.clone();
        if header.iter().collect::<Vec<_>>() != ["t", "value"] {
            return Err(FracError::Csv(format!("expected header t,value, got {:?}", header)));
        }
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| FracError::Csv(format!("row {}: bad field {}", row + 1, i + 1)))
            };
            ts.push(field(0)?);
            vs.push(field(1)?);
        }
        if vs.len() < 3 {
            return Err(FracError::Length {
                expected: 3,
                got: vs.len(),
            });
        }
        let n = ts.len() - 1;
        let step = (ts[n] - ts[0]) / n as f64;
        if !(step > 0.0) {
            return Err(FracError::Csv("grid is not increasing".into()));
        }
        for (j, &t) in ts.iter().enumerate() {
            if (t - j as f64 * step).abs() > 1e-9 * step.max(t.abs()) {
                return Err(FracError::Csv(format!("row {}: grid is not uniform from 0", j + 1)));
            }
        }
        if let Some(j) = vs.iter().skip(1).position(|v| !v.is_finite()) {
            return Err(FracError::Csv(format!("row {}: value is not finite", j + 2)));
        }
        if vs[0].is_infinite() {
            return Err(FracError::Csv("row 1: value is infinite".into()));
        }
        Ok(Self::marked(step, vs))
    }
}

/// `derivs[k] = f^(k)(0+)`, k = 0..m-1.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub derivs: Vec<f64>,
}

impl InitialData {
    pub fn new(derivs: Vec<f64>) -> Self {
        Self { derivs }
    }

    /// The Taylor data of a power sum.
    pub fn of(f: &PowerSum, ord: FracOrder) -> Result<Self> {
        Ok(Self::new(symbolic::initial_derivatives(f, ord)?))
    }
}

/// Product-trapezoid weights of order α for up to `n` steps.
#[derive(Debug, Clone)]
pub struct ProductTrapezoid {
    scale: f64,
    // first[n] = a_{0,n}; inner[k] = a_k.
    first: Vec<f64>,
    inner: Vec<f64>,
}

impl ProductTrapezoid {
    pub fn new(alpha: f64, step: f64, n: usize) -> Self {
        let p = alpha + 1.0;
        let first = (0..=n)
            .map(|k| match k {
                0 => 0.0,
                1 => alpha,
                _ => {
                    // (k-1)^p - (k-1-α) k^α = k^p [(1-1/k)^p - 1 + p/k]
                    let x = 1.0 / k as f64;
                    (k as f64).powf(p) * ((p * (-x).ln_1p()).exp_m1() + p * x)
                }
            })
            .collect();
        let inner = (0..=n)
            .map(|k| match k {
                0 => 1.0,
                1 => 2f64.powf(p) - 2.0,
                _ => {
                    let x = 1.0 / k as f64;
                    (k as f64).powf(p) * ((p * x.ln_1p()).exp_m1() + (p * (-x).ln_1p()).exp_m1())
                }
            })
            .collect();
        Self {
            scale: step.powf(alpha) * reciprocal_gamma(alpha + 2.0),
            first,
            inner,
        }
    }

    /// J^α f at node `n` from samples `f[0..=n]`.
    pub fn apply_at(&self, f: &[f64], n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let mut s = self.first[n] * f[0] + f[n];
        for (j, fj) in f.iter().enumerate().take(n).skip(1) {
            s += self.inner[n - j] * fj;
        }
        self.scale * s
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        (0..f.len()).map(|n| self.apply_at(f, n)).collect()
    }
}

/// J^α on the grid of `f`; order 0 is the identity.
pub fn rl_integral_numeric(f: &SampledFunction, ord: FracOrder) -> Result<SampledFunction> {
    f.require_finite()?;
    if ord.alpha() == 0.0 {
        return Ok(f.clone());
    }
    let w = ProductTrapezoid::new(ord.alpha(), f.step, f.n());
    Ok(SampledFunction::marked(f.step, w.apply(&f.values)))
}

/// Second-order finite-difference derivative of order 1 or 2, written in
/// difference form so that constants give exact zeros.
fn finite_difference(f: &[f64], h: f64, order: usize) -> Vec<f64> {
    let n = f.len() - 1;
    let mut d = vec![0.0; n + 1];
    match order {
        1 => {
            let fwd = |a: f64, b: f64, c: f64| (4.0 * (b - a) - (c - a)) / (2.0 * h);
            d[0] = fwd(f[0], f[1], f[2]);
            d[n] = -fwd(f[n], f[n - 1], f[n - 2]);
            for j in 1..n {
                d[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
            }
        }
        _ => {
            let h2 = h * h;
            let edge = |a: f64, b: f64, c: f64, e: f64| (-5.0 * (b - a) + 4.0 * (c - a) - (e - a)) / h2;
            d[0] = edge(f[0], f[1], f[2], f[3]);
            d[n] = edge(f[n], f[n - 1], f[n - 2], f[n - 3]);
            for j in 1..n {
                d[j] = ((f[j + 1] - f[j]) - (f[j] - f[j - 1])) / h2;
            }
        }
    }
    d
}

fn same_grid(a: &SampledFunction, b: &SampledFunction) -> Result<()> {
    if a.values.len() != b.values.len() {
        return Err(FracError::Length {
            expected: a.values.len(),
            got: b.values.len(),
        });
    }
    if (a.step - b.step).abs() > 1e-12 * a.step {
        return Err(FracError::Domain(format!(
            "derivative grid step {} differs from {}",
            b.step, a.step
        )));
    }
    Ok(())
}

/// D_*^α = J^(m-α) f^(m). Without `mth_deriv`, f^(m) is reconstructed by
/// finite differences, which limits α to (0, 2] and needs N >= 4.
pub fn caputo_derivative_numeric(
    f: &SampledFunction,
    ord: FracOrder,
    mth_deriv: Option<&SampledFunction>,
) -> Result<SampledFunction> {
    f.require_finite()?;
    let m = ord.m();
    if m == 0 {
        return Ok(f.clone());
    }
    let dm = match mth_deriv {
        Some(d) => {
            same_grid(f, d)?;
            d.require_finite()?;
            d.values.clone()
        }
        None => {
            if m > 2 {
                return Err(FracError::UnsupportedOrder(ord.alpha()));
            }
            if f.n() < 4 {
                return Err(FracError::Length {
                    expected: 5,
                    got: f.values.len(),
                });
            }
            finite_difference(&f.values, f.step, m)
        }
    };
    let inner = SampledFunction::marked(f.step, dm);
    rl_integral_numeric(&inner, ord.complement())
}

/// D^α = D_*^α + Σ_k f^(k)(0+) t^(k-α)/Γ(k-α+1). Node 0 is `NaN` when a
/// surviving correction term is a negative power.
pub fn rl_derivative_numeric(
    f: &SampledFunction,
    ord: FracOrder,
    init: &InitialData,
    mth_deriv: Option<&SampledFunction>,
) -> Result<SampledFunction> {
    if init.derivs.len() != ord.m() {
        return Err(FracError::Length {
            expected: ord.m(),
            got: init.derivs.len(),
        });
    }
    let mut out = caputo_derivative_numeric(f, ord, mth_deriv)?;
    let correction = correction_series(init, ord);
    for (j, v) in out.values.iter_mut().enumerate().skip(1) {
        *v += correction.evaluate(j as f64 * f.step)?;
    }
    // Exponents k-α are never zero here (k < m <= α would need k = α = m),
    // so every surviving term either vanishes or blows up at t = 0.
    if correction.terms().iter().any(|t| t.exponent < 0.0) {
        out.values[0] = f64::NAN;
    }
    Ok(out)
}

/// Σ_k c_k t^(k-α)/Γ(k-α+1) as a power sum.
pub fn correction_series(init: &InitialData, ord: FracOrder) -> PowerSum {
    let alpha = ord.alpha();
    PowerSum::new(init.derivs.iter().enumerate().map(|(k, &c)| {
        let e = k as f64 - alpha;
        symbolic::PowerTerm::new(c * reciprocal_gamma(e + 1.0), e)
    }))
}

/// Brute-force `J^α f(t)` by composite Gauss-Legendre quadrature on geometric
/// meshes graded toward both endpoints, refined until two successive levels
/// agree to `tol`. Shares nothing with the product-trapezoid weights.
pub fn oracle_quadrature(f: &dyn Fn(f64) -> f64, ord: FracOrder, t: f64, tol: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(FracError::Domain(format!("oracle needs t > 0, got {t}")));
    }
    if !(tol > 0.0) {
        return Err(FracError::Domain(format!("oracle needs tol > 0, got {tol}")));
    }
    let alpha = ord.alpha();
    if alpha == 0.0 {
        return Ok(f(t));
    }
    let inv_gamma = reciprocal_gamma(alpha);
    let half = 0.5 * t;
    // τ in [0, t/2], graded toward τ = 0.
    let left = |tau: f64| (t - tau).powf(alpha - 1.0) * f(tau);
    // d = t - τ in [0, t/2], graded toward d = 0.
    let right = |d: f64| d.powf(alpha - 1.0) * f(t - d);
    let rule = quad::gauss_legendre(16);
    let estimate = |level: usize| {
        let levels = 8 * level;
        (quad::geometric(&left, half, levels, 0.25, &rule) + quad::geometric(&right, half, levels, 0.25, &rule))
            * inv_gamma
    };
    let mut previous = estimate(1);
    for level in 2..=14 {
        let next = estimate(level);
        if (next - previous).abs() < tol {
            return Ok(next);
        }
        previous = next;
        if level == 14 {
            return Err(FracError::NonConvergence { last: next, previous });
        }
    }
    unreachable!()
}

/// Which numeric operator a convergence study exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericOperator {
    Integral,
    Caputo,
    RiemannLiouville,
}

/// A manufactured problem: a sampled input, the exact output, and optional
/// exact m-th derivative and initial data.
pub struct ConvergenceCase {
    pub operator: NumericOperator,
    pub ord: FracOrder,
    pub t_end: f64,
    pub f: Box<dyn Fn(f64) -> f64>,
    pub exact: Box<dyn Fn(f64) -> f64>,
    pub mth_deriv: Option<Box<dyn Fn(f64) -> f64>>,
    pub init: Option<InitialData>,
}

impl ConvergenceCase {
    /// Reference values from the exact operators. `exact_derivative` supplies
    /// f^(m) symbolically instead of reconstructing it.
    pub fn from_power_sum(
        operator: NumericOperator,
        f: &PowerSum,
        ord: FracOrder,
        t_end: f64,
        exact_derivative: bool,
    ) -> Result<Self> {
        let exact = match operator {
            NumericOperator::Integral => symbolic::rl_integral(f, ord)?,
            NumericOperator::Caputo => symbolic::caputo_derivative(f, ord)?,
            NumericOperator::RiemannLiouville => symbolic::rl_derivative(f, ord)?,
        };
        let init = match operator {
            NumericOperator::RiemannLiouville => Some(InitialData::of(f, ord)?),
            _ => None,
        };
        let dm = symbolic::classical_derivative(f, ord.m());
        let at_zero = |p: PowerSum| {
            move |t: f64| {
                if t > 0.0 {
                    p.evaluate(t).unwrap_or(f64::NAN)
                } else {
                    p.terms().iter().filter(|x| x.exponent == 0.0).map(|x| x.coeff).sum()
                }
            }
        };
        Ok(Self {
            operator,
            ord,
            t_end,
            f: Box::new(at_zero(f.clone())),
            exact: Box::new(move |t| exact.evaluate(t).unwrap_or(f64::NAN)),
            mth_deriv: if exact_derivative {
                Some(Box::new(at_zero(dm)))
            } else {
                None
            },
            init,
        })
    }

    /// Max error over nodes j >= 1 at `n` steps.
    pub fn error_at(&self, n: usize) -> Result<f64> {
        let f = SampledFunction::from_fn(self.t_end, n, &self.f)?;
        let dm = match &self.mth_deriv {
            Some(d) => Some(SampledFunction::from_fn(self.t_end, n, d)?),
            None => None,
        };
        let out = match self.operator {
            NumericOperator::Integral => rl_integral_numeric(&f, self.ord)?,
            NumericOperator::Caputo => caputo_derivative_numeric(&f, self.ord, dm.as_ref())?,
            NumericOperator::RiemannLiouville => {
                let init = self
                    .init
                    .clone()
                    .ok_or_else(|| FracError::Precondition("initial data missing".into()))?;
                rl_derivative_numeric(&f, self.ord, &init, dm.as_ref())?
            }
        };
        Ok((1..=n)
            .map(|j| (out.values[j] - (self.exact)(out.t(j))).abs())
            .fold(0.0, f64::max))
    }
}

/// Errors per grid and their least-squares order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub grid_sizes: Vec<usize>,
    pub errors: Vec<f64>,
    pub order: f64,
    /// Every error sits at the rounding floor; `order` is then meaningless.
    pub degenerate: bool,
}

/// Least-squares slope of log(max error) against log(step).
pub fn convergence_order(case: &ConvergenceCase, grid_sizes: &[usize]) -> Result<ConvergenceReport> {
    if grid_sizes.len() < 3 || grid_sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FracError::Precondition(
            "grid sizes must be strictly increasing with at least three entries".into(),
        ));
    }
    let errors = grid_sizes
        .iter()
        .map(|&n| case.error_at(n))
        .collect::<Result<Vec<_>>>()?;
    let reference = (1..=16)
        .map(|j| (case.exact)(case.t_end * j as f64 / 16.0).abs())
        .fold(1.0, f64::max);
    let degenerate = errors.iter().all(|&e| e <= 1e-12 * reference);
    let xs: Vec<f64> = grid_sizes.iter().map(|&n| (case.t_end / n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|&e| e.max(f64::MIN_POSITIVE).ln()).collect();
    Ok(ConvergenceReport {
        grid_sizes: grid_sizes.to_vec(),
        order: slope(&xs, &ys),
        errors,
        degenerate,
    })
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
