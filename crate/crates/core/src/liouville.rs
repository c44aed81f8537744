//! Liouville operators (lower limit -∞) and the Weyl integral (upper limit +∞)
//! on the two closed-form families
//!
//! ```text
//! J^α_{-∞} |t|^(-δ) = Γ(δ-α)/Γ(δ) |t|^(α-δ)     (t < 0, δ > α)
//! J^α_{-∞} e^(ct)   = c^(-α) e^(ct)             (c > 0)
//! ```
//!
//! and their derivative counterparts. The Weyl integral is obtained by the
//! reflection t' = -t, g(t') = f(-t'), which turns `J^α_{-∞} f(t)` into
//! `W^α_∞ g(t')`. Truncated direct quadratures of both integrals are provided
//! so the closed forms can be checked independently.

use std::fmt;

use crate::error::{FracError, Result};
use crate::quad;
use crate::special::{gamma, gamma_ratio, reciprocal_gamma};
use crate::symbolic::{caputo_derivative, fmt_num, rl_derivative, FracOrder, PowerSum, PowerTerm};

/// A single term of Liouville class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LiouvilleTerm {
    /// `coeff * |t|^(-delta)` on t < 0.
    PowerOfAbs { coeff: f64, delta: f64 },
    /// `coeff * e^(rate * t)`.
    Exponential { coeff: f64, rate: f64 },
}

impl LiouvilleTerm {
    pub fn power_of_abs(coeff: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(FracError::Domain(format!("|t|^-delta needs delta > 0, got {delta}")));
        }
        Ok(Self::PowerOfAbs { coeff, delta })
    }

    pub fn exponential(coeff: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(FracError::Domain(format!("exp(c t) needs c > 0, got {rate}")));
        }
        Ok(Self::Exponential { coeff, rate })
    }

    pub fn coeff(&self) -> f64 {
        match *self {
            Self::PowerOfAbs { coeff, .. } | Self::Exponential { coeff, .. } => coeff,
        }
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        match *self {
            Self::PowerOfAbs { coeff, delta } => {
                if t >= 0.0 {
                    return Err(FracError::Domain(format!("|t|^-delta lives on t < 0, got {t}")));
                }
                Ok(coeff * (-t).powf(-delta))
            }
            Self::Exponential { coeff, rate } => Ok(coeff * (rate * t).exp()),
        }
    }

    /// g(t') = f(-t').
    pub fn reflect(&self) -> WeylTerm {
        match *self {
            Self::PowerOfAbs { coeff, delta } => WeylTerm::PowerDecay { coeff, delta },
            Self::Exponential { coeff, rate } => WeylTerm::ExpDecay { coeff, rate },
        }
    }
}

/// A term decaying toward +∞, the reflected image of a [`LiouvilleTerm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeylTerm {
    /// `coeff * t^(-delta)` on t > 0.
    PowerDecay { coeff: f64, delta: f64 },
    /// `coeff * e^(-rate * t)`.
    ExpDecay { coeff: f64, rate: f64 },
}

impl WeylTerm {
    pub fn power_decay(coeff: f64, delta: f64) -> Result<Self> {
        Ok(LiouvilleTerm::power_of_abs(coeff, delta)?.reflect())
    }

    pub fn exp_decay(coeff: f64, rate: f64) -> Result<Self> {
        Ok(LiouvilleTerm::exponential(coeff, rate)?.reflect())
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        self.reflect().evaluate(-t)
    }

    /// f(t) = g(-t).
    pub fn reflect(&self) -> LiouvilleTerm {
        match *self {
            Self::PowerDecay { coeff, delta } => LiouvilleTerm::PowerOfAbs { coeff, delta },
            Self::ExpDecay { coeff, rate } => LiouvilleTerm::Exponential { coeff, rate },
        }
    }
}

impl TryFrom<&PowerSum> for WeylTerm {
    type Error = FracError;

    /// A single negative power `c*t^-d` read as a decaying term on t > 0.
    fn try_from(p: &PowerSum) -> Result<Self> {
        match p.terms() {
            [PowerTerm { coeff, exponent }] if *exponent < 0.0 => Self::power_decay(*coeff, -exponent),
            _ => Err(FracError::Domain(format!("{p} is not a single decaying power t^-d"))),
        }
    }
}

fn coeff_prefix(c: f64) -> String {
    if c == 1.0 {
        String::new()
    } else {
        format!("{}*", fmt_num(c))
    }
}

impl fmt::Display for LiouvilleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::PowerOfAbs { coeff, delta } => {
                write!(f, "{}abs(t)^{}", coeff_prefix(coeff), fmt_num(-delta))
            }
            Self::Exponential { coeff, rate } => {
                write!(f, "{}exp({}*t)", coeff_prefix(coeff), fmt_num(rate))
            }
        }
    }
}

impl fmt::Display for WeylTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::PowerDecay { coeff, delta } => write!(f, "{}*t^{}", fmt_num(coeff), fmt_num(-delta)),
            Self::ExpDecay { coeff, rate } => {
                write!(f, "{}exp({}*t)", coeff_prefix(coeff), fmt_num(-rate))
            }
        }
    }
}

/// J^α_{-∞}, in closed form.
pub fn liouville_integral(f: &LiouvilleTerm, ord: FracOrder) -> Result<LiouvilleTerm> {
    let alpha = ord.alpha();
    Ok(match *f {
        LiouvilleTerm::PowerOfAbs { coeff, delta } => {
            if delta <= alpha {
                return Err(FracError::NotLiouvilleClass { delta, alpha });
            }
            if alpha == 0.0 {
                return Ok(*f);
            }
            LiouvilleTerm::PowerOfAbs {
                coeff: coeff * gamma_ratio(delta - alpha, delta)?,
                delta: delta - alpha,
            }
        }
        LiouvilleTerm::Exponential { coeff, rate } => LiouvilleTerm::Exponential {
            coeff: coeff * rate.powf(-alpha),
            rate,
        },
    })
}

/// D^α_{-∞} = D^m J^(m-α)_{-∞}, in closed form.
pub fn liouville_derivative(f: &LiouvilleTerm, ord: FracOrder) -> LiouvilleTerm {
    let alpha = ord.alpha();
    match *f {
        LiouvilleTerm::PowerOfAbs { coeff, delta } => LiouvilleTerm::PowerOfAbs {
            // Γ(δ+α)/Γ(δ) with δ, δ+α > 0 cannot hit a pole.
            coeff: coeff * gamma(delta + alpha).unwrap_or(f64::INFINITY) * reciprocal_gamma(delta),
            delta: delta + alpha,
        },
        LiouvilleTerm::Exponential { coeff, rate } => LiouvilleTerm::Exponential {
            coeff: coeff * rate.powf(alpha),
            rate,
        },
    }
}

/// W^α_∞, computed by reflecting onto the Liouville integral.
pub fn weyl_integral(g: &WeylTerm, ord: FracOrder) -> Result<WeylTerm> {
    Ok(liouville_integral(&g.reflect(), ord)?.reflect())
}

/// Convergence class of a term for a given order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionClass {
    Riemann,
    Liouville,
    Neither,
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Riemann => "Riemann",
            Self::Liouville => "Liouville",
            Self::Neither => "Neither",
        })
    }
}

/// Terms that can be sorted into a [`FunctionClass`].
pub trait Classify {
    fn classify(&self, ord: FracOrder) -> FunctionClass;
}

impl Classify for PowerTerm {
    fn classify(&self, _ord: FracOrder) -> FunctionClass {
        if self.is_riemann_class() {
            FunctionClass::Riemann
        } else {
            FunctionClass::Neither
        }
    }
}

impl Classify for LiouvilleTerm {
    fn classify(&self, ord: FracOrder) -> FunctionClass {
        match *self {
            LiouvilleTerm::PowerOfAbs { delta, .. } if delta > ord.alpha() => FunctionClass::Liouville,
            LiouvilleTerm::PowerOfAbs { .. } => FunctionClass::Neither,
            LiouvilleTerm::Exponential { rate, .. } if rate > 0.0 => FunctionClass::Liouville,
            LiouvilleTerm::Exponential { .. } => FunctionClass::Neither,
        }
    }
}

pub fn classify<T: Classify + ?Sized>(term: &T, ord: FracOrder) -> FunctionClass {
    term.classify(ord)
}

/// Both sides of `t^(-α)/Γ(1-α) f(0+) + D_*^α f(t) = D^α f(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
    /// Sum of the absolute values of every term on either side.
    pub scale: f64,
}

impl JumpCheck {
    /// `diff <= rel * scale`.
    pub fn holds(&self, rel: f64) -> bool {
        self.diff <= rel * self.scale
    }
}

/// Evaluates the causal jump identity for 0 < α < 1 at time `t`.
pub fn causal_jump_identity_check(f: &PowerSum, ord: FracOrder, t: f64) -> Result<JumpCheck> {
    let alpha = ord.alpha();
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FracError::Precondition(format!(
            "jump identity needs 0 < alpha < 1, got {alpha}"
        )));
    }
    let f0 = crate::symbolic::initial_derivatives(f, ord)?[0];
    let jump = t.powf(-alpha) * reciprocal_gamma(1.0 - alpha) * f0;
    let caputo = caputo_derivative(f, ord)?;
    let rl = rl_derivative(f, ord)?;
    let lhs = jump + caputo.evaluate(t)?;
    let rhs = rl.evaluate(t)?;
    Ok(JumpCheck {
        lhs,
        rhs,
        diff: (lhs - rhs).abs(),
        scale: (jump.abs() + caputo.magnitude(t)?).max(rl.magnitude(t)?),
    })
}

/// A truncated improper integral and a bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedQuadrature {
    pub value: f64,
    pub tail_bound: f64,
}

fn tail_bound(f: &LiouvilleTerm, alpha: f64, t: f64, truncation: f64) -> f64 {
    let reach = t + truncation;
    let scale = f.coeff().abs() * reciprocal_gamma(alpha);
    match *f {
        LiouvilleTerm::Exponential { rate, .. } => {
            let decay = (-rate * truncation).exp();
            if alpha <= 1.0 && reach >= 1.0 {
                scale * decay / rate
            } else {
                // (a+u)^(α-1) <= max(1, 2^(α-2)) (a^(α-1) + u^(α-1)) for α >= 1.
                let k = 2f64.powf(alpha - 2.0).max(1.0);
                let moment = gamma(alpha).unwrap_or(f64::INFINITY) / rate.powf(alpha);
                scale * decay * k * (reach.max(1.0).powf(alpha - 1.0) / rate + moment)
            }
        }
        LiouvilleTerm::PowerOfAbs { delta, .. } => {
            let near = (1.0 - t.abs() / truncation).powf((alpha - 1.0).min(0.0));
            scale * near * truncation.powf(alpha - delta) / (delta - alpha)
        }
    }
}

/// Direct quadrature of `(1/Γ(α)) ∫_{-T}^{t} (t-τ)^(α-1) f(τ) dτ` plus the
/// per-variant tail bound for the part below -T.
pub fn liouville_integral_truncated(
    f: &LiouvilleTerm,
    ord: FracOrder,
    t: f64,
    truncation: f64,
    tol: f64,
) -> Result<TruncatedQuadrature> {
    let alpha = ord.alpha();
    if !(alpha > 0.0) {
        return Err(FracError::Domain("truncated quadrature needs alpha > 0".into()));
    }
    if let LiouvilleTerm::PowerOfAbs { delta, .. } = *f {
        if t >= 0.0 {
            return Err(FracError::Domain(format!("|t|^-delta lives on t < 0, got {t}")));
        }
        if delta <= alpha {
            return Err(FracError::NotLiouvilleClass { delta, alpha });
        }
    }
    if !(-truncation < t) {
        return Err(FracError::Domain(format!(
            "truncation point -{truncation} must lie below t = {t}"
        )));
    }
    let inv_gamma = reciprocal_gamma(alpha);
    let integrand = |d: f64| d.powf(alpha - 1.0) * f.evaluate(t - d).unwrap_or(f64::NAN) * inv_gamma;
    let value = quad::singular_at_origin(&integrand, t + truncation, tol)?;
    Ok(TruncatedQuadrature {
        value,
        tail_bound: tail_bound(f, alpha, t, truncation),
    })
}

/// Direct quadrature of `(1/Γ(α)) ∫_{t}^{T} (τ-t)^(α-1) g(τ) dτ` plus the tail bound above T.
pub fn weyl_integral_truncated(
    g: &WeylTerm,
    ord: FracOrder,
    t: f64,
    truncation: f64,
    tol: f64,
) -> Result<TruncatedQuadrature> {
    let alpha = ord.alpha();
    if !(alpha > 0.0) {
        return Err(FracError::Domain("truncated quadrature needs alpha > 0".into()));
    }
    if let WeylTerm::PowerDecay { delta, .. } = *g {
        if t <= 0.0 {
            return Err(FracError::Domain(format!("t^-delta lives on t > 0, got {t}")));
        }
        if delta <= alpha {
            return Err(FracError::NotLiouvilleClass { delta, alpha });
        }
    }
    if !(truncation > t) {
        return Err(FracError::Domain(format!(
            "truncation point {truncation} must lie above t = {t}"
        )));
    }
    let inv_gamma = reciprocal_gamma(alpha);
    let integrand = |d: f64| d.powf(alpha - 1.0) * g.evaluate(t + d).unwrap_or(f64::NAN) * inv_gamma;
    let value = quad::singular_at_origin(&integrand, truncation - t, tol)?;
    Ok(TruncatedQuadrature {
        value,
        tail_bound: tail_bound(&g.reflect(), alpha, -t, truncation),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
    }

    #[test]
    fn integral_examples() {
        let e2 = LiouvilleTerm::exponential(1.0, 2.0).unwrap();
        match liouville_integral(&e2, ord(0.5)).unwrap() {
            LiouvilleTerm::Exponential { coeff, rate } => {
                assert!(close(coeff, 2f64.powf(-0.5)));
                assert_eq!(rate, 2.0);
            }
            other => panic!("{other:?}"),
        }
        let p = LiouvilleTerm::power_of_abs(1.0, 2.0).unwrap();
        match liouville_integral(&p, ord(0.5)).unwrap() {
            LiouvilleTerm::PowerOfAbs { coeff, delta } => {
                assert!(close(coeff, gamma(1.5).unwrap() / gamma(2.0).unwrap()));
                assert_eq!(delta, 1.5);
            }
            other => panic!("{other:?}"),
        }
        let e1 = LiouvilleTerm::exponential(1.0, 1.0).unwrap();
        assert_eq!(liouville_integral(&e1, ord(1.0)).unwrap(), e1);

        let shallow = LiouvilleTerm::power_of_abs(1.0, 0.3).unwrap();
        assert!(matches!(
            liouville_integral(&shallow, ord(0.5)),
            Err(FracError::NotLiouvilleClass { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        let e2 = LiouvilleTerm::exponential(1.0, 2.0).unwrap();
        let d = liouville_derivative(&e2, ord(0.5));
        assert!(close(d.coeff(), 2f64.sqrt()));
        let p = LiouvilleTerm::power_of_abs(1.0, 1.0).unwrap();
        match liouville_derivative(&p, ord(0.5)) {
            LiouvilleTerm::PowerOfAbs { coeff, delta } => {
                assert!(close(coeff, gamma(1.5).unwrap()));
                assert_eq!(delta, 1.5);
            }
            other => panic!("{other:?}"),
        }
        let e3 = LiouvilleTerm::exponential(2.0, 3.0).unwrap();
        assert!(close(liouville_derivative(&e3, ord(2.0)).coeff(), 18.0));
    }

    #[test]
    fn derivative_inverts_integral() {
        for term in [
            LiouvilleTerm::exponential(1.5, 0.7).unwrap(),
            LiouvilleTerm::power_of_abs(-2.0, 2.3).unwrap(),
        ] {
            for a in [0.2, 0.5, 1.0, 1.7] {
                let back = liouville_derivative(&liouville_integral(&term, ord(a)).unwrap(), ord(a));
                assert!(close(back.coeff(), term.coeff()));
            }
        }
    }

    #[test]
    fn weyl_examples() {
        let g = WeylTerm::exp_decay(1.0, 2.0).unwrap();
        let w = weyl_integral(&g, ord(0.5)).unwrap();
        assert_eq!(
            w,
            WeylTerm::ExpDecay {
                coeff: 2f64.powf(-0.5),
                rate: 2.0
            }
        );
        let g = WeylTerm::power_decay(1.0, 2.0).unwrap();
        match weyl_integral(&g, ord(0.5)).unwrap() {
            WeylTerm::PowerDecay { coeff, delta } => {
                assert!(close(coeff, gamma(1.5).unwrap()));
                assert_eq!(delta, 1.5);
            }
            other => panic!("{other:?}"),
        }
        let g = WeylTerm::exp_decay(1.0, 1.0).unwrap();
        assert_eq!(weyl_integral(&g, ord(1.0)).unwrap(), g);
    }

    #[test]
    fn reflection_round_trip() {
        let f = LiouvilleTerm::power_of_abs(3.0, 1.25).unwrap();
        assert_eq!(f.reflect().reflect(), f);
        let g = WeylTerm::exp_decay(0.5, 4.0).unwrap();
        assert_eq!(g.reflect().reflect(), g);
        assert_eq!(f.evaluate(-2.0).unwrap(), f.reflect().evaluate(2.0).unwrap());
    }

    #[test]
    fn classification() {
        let half = ord(0.5);
        assert_eq!(classify(&PowerTerm::new(1.0, 0.5), half), FunctionClass::Riemann);
        assert_eq!(classify(&PowerTerm::new(1.0, -1.5), half), FunctionClass::Neither);
        let p2 = LiouvilleTerm::power_of_abs(1.0, 2.0).unwrap();
        assert_eq!(classify(&p2, half), FunctionClass::Liouville);
        let p03 = LiouvilleTerm::power_of_abs(1.0, 0.3).unwrap();
        assert_eq!(classify(&p03, half), FunctionClass::Neither);
        let e = LiouvilleTerm::exponential(1.0, 0.1).unwrap();
        assert_eq!(classify(&e, ord(5.0)), FunctionClass::Liouville);
        assert_eq!(FunctionClass::Liouville.to_string(), "Liouville");
    }

    #[test]
    fn jump_identity_examples() {
        let one = PowerSum::constant(1.0);
        let c = causal_jump_identity_check(&one, ord(0.5), 1.0).unwrap();
        assert!(c.holds(1e-11));
        assert!((c.lhs - reciprocal_gamma(0.5)).abs() < 1e-14);

        let f = PowerSum::from_pairs(&[(1.0, 0.0), (1.0, 1.0)]);
        let c = causal_jump_identity_check(&f, ord(0.5), 1.0).unwrap();
        let want = reciprocal_gamma(0.5) + 2.0 / std::f64::consts::PI.sqrt();
        assert!(c.holds(1e-11) && (c.rhs - want).abs() < 1e-13);

        let c = causal_jump_identity_check(&PowerSum::monomial(1.0, 1.0), ord(0.5), 2.0).unwrap();
        assert!(c.holds(1e-11));

        assert!(causal_jump_identity_check(&one, ord(1.5), 1.0).is_err());
    }

    #[test]
    fn truncated_quadrature_matches_closed_forms() {
        let e = LiouvilleTerm::exponential(1.0, 1.0).unwrap();
        let q = liouville_integral_truncated(&e, ord(0.5), 0.0, 20.0, 1e-9).unwrap();
        let exact = liouville_integral(&e, ord(0.5)).unwrap().evaluate(0.0).unwrap();
        assert!(q.tail_bound < 1e-8);
        assert!((q.value - exact).abs() < 1e-6);

        let g = WeylTerm::exp_decay(1.0, 2.0).unwrap();
        let q = weyl_integral_truncated(&g, ord(0.5), 0.75, 30.0, 1e-9).unwrap();
        let exact = weyl_integral(&g, ord(0.5)).unwrap().evaluate(0.75).unwrap();
        assert!((q.value - exact).abs() < 1e-6);
    }
}
