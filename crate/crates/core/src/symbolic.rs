//! Exact fractional operators on finite power sums `Σ c_i t^(γ_i)`.
//!
//! Power functions are closed under both the Riemann-Liouville integral and
//! derivative:
//!
//! ```text
//! J^α t^γ = Γ(γ+1)/Γ(γ+1+α) t^(γ+α)      D^α t^γ = Γ(γ+1)/Γ(γ+1-α) t^(γ-α)
//! ```
//!
//! for γ > -1, so every operator here maps a [`PowerSum`] to a [`PowerSum`]
//! with coefficients that are products of Gamma ratios. The derivative
//! coefficient uses [`reciprocal_gamma`], which vanishes at the poles, so
//! `D^α t^(α-1) = 0` and `D^m t^k = 0` for integer `k < m` fall out of the
//! same formula.
//!
//! The Caputo derivative is computed from its definition `J^(m-α) D^m`, which
//! makes the decomposition `D^α f = D_*^α f + Σ f^(k)(0+) t^(k-α)/Γ(k-α+1)` a
//! genuine two-route identity rather than a restatement.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{FracError, Result};
use crate::special::{gamma_ratio, reciprocal_gamma};
use crate::tol::{self, coeff_close, COEFF_REL_TOL, EXPONENT_TOL};

/// One term `coeff * t^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerTerm {
    pub fn new(coeff: f64, exponent: f64) -> Self {
        Self { coeff, exponent }
    }

    /// Locally integrable at 0+.
    pub fn is_riemann_class(&self) -> bool {
        self.exponent > -1.0
    }
}

/// A finite linear combination of real powers of `t`, kept in canonical form:
/// exponents strictly increasing, none repeated, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerSum {
    terms: Vec<PowerTerm>,
}

impl PowerSum {
    /// Builds the canonical form of an arbitrary list of terms.
    ///
    /// Exponents closer than 1e-12 merge and near-integers snap to the
    /// integer. A merged coefficient that cancels down to rounding noise is
    /// dropped.
    pub fn new(terms: impl IntoIterator<Item = PowerTerm>) -> Self {
        let mut raw: Vec<PowerTerm> = terms
            .into_iter()
            .filter(|t| t.coeff != 0.0)
            .map(|t| PowerTerm::new(t.coeff, tol::snap_integer(t.exponent) + 0.0))
            .collect();
        raw.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));

        let mut terms: Vec<PowerTerm> = Vec::with_capacity(raw.len());
        let mut i = 0;
        while i < raw.len() {
            let lead = raw[i].exponent;
            let mut sum = 0.0;
            let mut mass = 0.0;
            let mut j = i;
            while j < raw.len() && raw[j].exponent - lead < EXPONENT_TOL {
                sum += raw[j].coeff;
                mass += raw[j].coeff.abs();
                j += 1;
            }
            let cancelled = j - i > 1 && sum.abs() <= tol::CANCEL_REL * mass;
            if sum != 0.0 && !cancelled {
                terms.push(PowerTerm::new(sum, lead));
            }
            i = j;
        }
        Self { terms }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, 0.0)
    }

    pub fn monomial(coeff: f64, exponent: f64) -> Self {
        Self::new([PowerTerm::new(coeff, exponent)])
    }

    /// `(coeff, exponent)` pairs, in any order.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        Self::new(pairs.iter().map(|&(c, e)| PowerTerm::new(c, e)))
    }

    /// The kernel Φ_α(t) = t^(α-1)/Γ(α), α > 0.
    pub fn kernel(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(FracError::Domain(format!("kernel order must be positive, got {alpha}")));
        }
        Ok(Self::monomial(reciprocal_gamma(alpha), alpha - 1.0))
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// All exponents exceed -1.
    pub fn is_riemann_class(&self) -> bool {
        self.terms.iter().all(PowerTerm::is_riemann_class)
    }

    pub fn min_exponent(&self) -> Option<f64> {
        self.terms.first().map(|t| t.exponent)
    }

    /// Σ coeff·t^exponent for t > 0.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(FracError::Domain(format!(
                "causal power sums are evaluated at t > 0 only, got {t}"
            )));
        }
        Ok(self.terms.iter().map(|p| p.coeff * t.powf(p.exponent)).sum())
    }

    /// Σ |coeff|·t^exponent, the scale against which rounding in
    /// [`evaluate`](Self::evaluate) is measured.
    pub fn magnitude(&self, t: f64) -> Result<f64> {
        self.evaluate(t)?;
        Ok(self.terms.iter().map(|p| p.coeff.abs() * t.powf(p.exponent)).sum())
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.terms.iter().map(|p| PowerTerm::new(k * p.coeff, p.exponent)))
    }

    /// The integer-power terms of degree below `m`: the Taylor polynomial of
    /// degree m-1 at 0+ for a Caputo-admissible sum.
    pub fn taylor_part(&self, m: usize) -> Self {
        Self::new(self.terms.iter().copied().filter(|p| is_taylor_exponent(p.exponent, m)))
    }

    /// Equality under the default tolerances: same term count, exponents within
    /// 1e-12, coefficients within 1e-11 relative (1e-14 absolute floor).
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.approx_eq_with(other, COEFF_REL_TOL)
    }

    pub fn approx_eq_with(&self, other: &Self, rel: f64) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|(a, b)| (a.exponent - b.exponent).abs() < EXPONENT_TOL && coeff_close(a.coeff, b.coeff, rel))
    }

    fn checked_riemann(&self) -> Result<()> {
        match self.terms.iter().find(|p| !p.is_riemann_class()) {
            Some(p) => Err(FracError::NotIntegrable { exponent: p.exponent }),
            None => Ok(()),
        }
    }
}

fn is_taylor_exponent(e: f64, m: usize) -> bool {
    e >= 0.0 && tol::is_integer(e) && e < m as f64
}

impl Add for &PowerSum {
    type Output = PowerSum;
    fn add(self, rhs: &PowerSum) -> PowerSum {
        PowerSum::new(self.terms.iter().chain(&rhs.terms).copied())
    }
}

impl Add for PowerSum {
    type Output = PowerSum;
    fn add(self, rhs: PowerSum) -> PowerSum {
        &self + &rhs
    }
}

impl Neg for &PowerSum {
    type Output = PowerSum;
    fn neg(self) -> PowerSum {
        self.scale(-1.0)
    }
}

impl Sub for &PowerSum {
    type Output = PowerSum;
    fn sub(self, rhs: &PowerSum) -> PowerSum {
        self + &(-rhs)
    }
}

impl Sub for PowerSum {
    type Output = PowerSum;
    fn sub(self, rhs: PowerSum) -> PowerSum {
        &self - &rhs
    }
}

impl Mul<f64> for &PowerSum {
    type Output = PowerSum;
    fn mul(self, k: f64) -> PowerSum {
        self.scale(k)
    }
}

/// Decimal rendering that round-trips exactly; extreme magnitudes use an
/// exponent so the text stays short.
pub(crate) fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

impl fmt::Display for PowerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*t^{}", fmt_num(self.coeff), fmt_num(self.exponent))
    }
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for PowerSum {
    type Err = FracError;
    fn from_str(s: &str) -> Result<Self> {
        crate::expr::parse(s)?.into_power_sum()
    }
}

/// A non-negative order α with its integer ceiling m (m-1 < α <= m; m = 0 for α = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: f64,
    m: usize,
}

impl FracOrder {
    /// Orders within 1e-12 of an integer are taken to be that integer.
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(FracError::Domain(format!(
                "order must be finite and non-negative, got {alpha}"
            )));
        }
        let alpha = tol::snap_integer(alpha) + 0.0;
        Ok(Self {
            alpha,
            m: alpha.ceil() as usize,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_integer(&self) -> bool {
        self.alpha == self.m as f64
    }

    /// The complementary integral order m - α.
    pub fn complement(&self) -> FracOrder {
        FracOrder::new(self.m as f64 - self.alpha).expect("m - alpha lies in [0, 1)")
    }
}

impl fmt::Display for FracOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.alpha)
    }
}

/// Riemann-Liouville integral J^α, termwise.
pub fn rl_integral(f: &PowerSum, ord: FracOrder) -> Result<PowerSum> {
    f.checked_riemann()?;
    if ord.alpha == 0.0 {
        return Ok(f.clone());
    }
    let terms = f
        .terms
        .iter()
        .map(|p| {
            let c = gamma_ratio(p.exponent + 1.0, p.exponent + 1.0 + ord.alpha)?;
            Ok(PowerTerm::new(p.coeff * c, p.exponent + ord.alpha))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSum::new(terms))
}

/// Riemann-Liouville derivative D^α = D^m J^(m-α), termwise.
///
/// The result may leave the Riemann class (e.g. D² t^(1/2) ∝ t^(-3/2)); check
/// [`PowerSum::is_riemann_class`] before feeding it to another operator.
pub fn rl_derivative(f: &PowerSum, ord: FracOrder) -> Result<PowerSum> {
    f.checked_riemann()?;
    if ord.is_integer() {
        // Γ(γ+1)/Γ(γ+1-n) is a falling factorial; the power rule gets it exactly.
        return Ok(classical_derivative(f, ord.alpha as usize));
    }
    let terms = f
        .terms
        .iter()
        .map(|p| {
            let denom = tol::snap_integer(p.exponent + 1.0 - ord.alpha);
            let c = gamma_ratio(p.exponent + 1.0, denom)?;
            Ok(PowerTerm::new(p.coeff * c, p.exponent - ord.alpha))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSum::new(terms))
}

/// Ordinary n-th derivative by the power rule.
pub fn classical_derivative(f: &PowerSum, n: usize) -> PowerSum {
    let mut cur = f.clone();
    for _ in 0..n {
        cur = PowerSum::new(
            cur.terms
                .iter()
                .map(|p| PowerTerm::new(p.coeff * p.exponent, p.exponent - 1.0)),
        );
    }
    cur
}

/// Every term is either a Taylor term t^k (integer 0 <= k < m) or has
/// exponent above m-1, so that f^(m) is locally integrable.
pub fn check_caputo_admissible(f: &PowerSum, ord: FracOrder) -> Result<()> {
    let m = ord.m;
    for p in &f.terms {
        let ok = is_taylor_exponent(p.exponent, m) || p.exponent > m as f64 - 1.0;
        if !ok {
            return Err(FracError::NotCaputoAdmissible {
                exponent: p.exponent,
                alpha: ord.alpha,
            });
        }
    }
    Ok(())
}

/// f^(k)(0+) for k = 0..m-1 of a Caputo-admissible sum.
pub fn initial_derivatives(f: &PowerSum, ord: FracOrder) -> Result<Vec<f64>> {
    check_caputo_admissible(f, ord)?;
    let mut derivs = vec![0.0; ord.m];
    for p in f.taylor_part(ord.m).terms() {
        let k = p.exponent as usize;
        derivs[k] = p.coeff * factorial(k);
    }
    Ok(derivs)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Caputo derivative D_*^α = J^(m-α) D^m.
pub fn caputo_derivative(f: &PowerSum, ord: FracOrder) -> Result<PowerSum> {
    check_caputo_admissible(f, ord)?;
    if ord.alpha == 0.0 {
        return Ok(f.clone());
    }
    let dm = classical_derivative(f, ord.m);
    rl_integral(&dm, ord.complement())
}

/// The two pieces of `D^α f = D_*^α f + correction`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub caputo_part: PowerSum,
    /// Σ_{k<m} f^(k)(0+) t^(k-α)/Γ(k-α+1)
    pub correction: PowerSum,
}

impl Decomposition {
    pub fn total(&self) -> PowerSum {
        &self.caputo_part + &self.correction
    }
}

pub fn decompose_rl_caputo(f: &PowerSum, ord: FracOrder) -> Result<Decomposition> {
    let caputo_part = caputo_derivative(f, ord)?;
    let derivs = initial_derivatives(f, ord)?;
    let correction = PowerSum::new(derivs.iter().enumerate().map(|(k, &d)| {
        let shift = tol::snap_integer(k as f64 - ord.alpha + 1.0);
        PowerTerm::new(d * reciprocal_gamma(shift), k as f64 - ord.alpha)
    }));
    Ok(Decomposition {
        caputo_part,
        correction,
    })
}

/// Which derivative a null space belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeKind {
    RiemannLiouville,
    Caputo,
}

/// Basis of the functions annihilated by D^α (t^(α-j)) or D_*^α (t^(m-j)), j = 1..m.
pub fn null_space_basis(kind: DerivativeKind, ord: FracOrder) -> Result<Vec<PowerSum>> {
    if ord.alpha == 0.0 {
        return Err(FracError::Domain("the identity has a trivial null space".into()));
    }
    Ok((1..=ord.m)
        .map(|j| {
            let e = match kind {
                DerivativeKind::RiemannLiouville => ord.alpha - j as f64,
                DerivativeKind::Caputo => (ord.m - j) as f64,
            };
            PowerSum::monomial(1.0, e)
        })
        .collect())
}
