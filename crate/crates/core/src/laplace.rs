//! Laplace-domain images of power sums and the operational rules
//!
//! ```text
//! L{t^γ}       = Γ(γ+1) s^-(γ+1)
//! L{J^α f}     = s^-α f̃
//! L{D_*^α f}   = s^α f̃ - Σ_k f^(k)(0+) s^(α-1-k)
//! L{D^α f}     = s^α f̃ - Σ_k (D^k J^(m-α) f)(0+) s^(m-1-k)
//! ```
//!
//! with a direct quadrature of the transform integral for cross-checks.

use std::fmt;
use std::io::Write;

use crate::error::{FracError, Result};
use crate::numeric::InitialData;
use crate::quad;
use crate::special::gamma;
use crate::symbolic::{classical_derivative, fmt_num, rl_integral, FracOrder, PowerSum, PowerTerm};

/// A finite sum `Σ c_i s^(e_i)`, exponents strictly decreasing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SPowerSum {
    // Same canonical algebra as in t, listed in reverse.
    inner: PowerSum,
}

impl SPowerSum {
    pub fn new(terms: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Self {
            inner: PowerSum::new(terms.into_iter().map(|(c, e)| PowerTerm::new(c, e))),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `(coeff, s_exponent)` pairs in decreasing exponent order.
    pub fn terms(&self) -> Vec<(f64, f64)> {
        self.inner.terms().iter().rev().map(|t| (t.coeff, t.exponent)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Value at real s > 0.
    pub fn evaluate(&self, s: f64) -> Result<f64> {
        self.inner.evaluate(s)
    }

    /// Multiplies by `s^k`.
    pub fn shift(&self, k: f64) -> Self {
        Self::new(self.terms().into_iter().map(|(c, e)| (c, e + k)))
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.inner.approx_eq(&other.inner)
    }

    pub fn approx_eq_with(&self, other: &Self, rel: f64) -> bool {
        self.inner.approx_eq_with(&other.inner, rel)
    }

    /// Writes an `s,value` table.
    pub fn write_csv<W: Write>(&self, w: W, s_values: &[f64]) -> Result<()> {
        let rows = s_values
            .iter()
            .map(|&s| Ok(vec![s, self.evaluate(s)?]))
            .collect::<Result<Vec<_>>>()?;
        write_table(w, &["s", "value"], &rows)
    }
}

impl std::ops::Sub for &SPowerSum {
    type Output = SPowerSum;
    fn sub(self, rhs: &SPowerSum) -> SPowerSum {
        SPowerSum {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl fmt::Display for SPowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .iter()
            .map(|(c, e)| format!("{}*s^{}", fmt_num(*c), fmt_num(*e)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Writes a numeric table with a header row and 17 significant digits.
pub fn write_table<W: Write>(w: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
    }
    out.flush().map_err(|e| FracError::Csv(e.to_string()))
}

/// Termwise `t^γ -> Γ(γ+1) s^-(γ+1)`.
pub fn transform(f: &PowerSum) -> Result<SPowerSum> {
    let mut terms = Vec::with_capacity(f.terms().len());
    for t in f.terms() {
        if !t.is_riemann_class() {
            return Err(FracError::NotTransformable { exponent: t.exponent });
        }
        terms.push((t.coeff * gamma(t.exponent + 1.0)?, -(t.exponent + 1.0)));
    }
    Ok(SPowerSum::new(terms))
}

/// Image of `J^α f`: every exponent drops by α.
pub fn rule_j(ord: FracOrder, ftilde: &SPowerSum) -> SPowerSum {
    ftilde.shift(-ord.alpha())
}

/// Image of `D_*^α f` from `f̃` and the Taylor data `f^(k)(0+)`, k < m.
pub fn rule_caputo(ord: FracOrder, ftilde: &SPowerSum, init: &InitialData) -> Result<SPowerSum> {
    let alpha = ord.alpha();
    let series = series(ord, &init.derivs, |k| alpha - 1.0 - k as f64)?;
    Ok(&ftilde.shift(alpha) - &series)
}

/// Image of `D^α f` from `f̃` and the values `(D^k J^(m-α) f)(0+)`, k < m.
pub fn rule_rl(ord: FracOrder, ftilde: &SPowerSum, rl_init: &[f64]) -> Result<SPowerSum> {
    let m = ord.m();
    let series = series(ord, rl_init, |k| (m - 1 - k) as f64)?;
    Ok(&ftilde.shift(ord.alpha()) - &series)
}

fn series(ord: FracOrder, values: &[f64], exponent: impl Fn(usize) -> f64) -> Result<SPowerSum> {
    if values.len() != ord.m() {
        return Err(FracError::Length {
            expected: ord.m(),
            got: values.len(),
        });
    }
    Ok(SPowerSum::new(
        values.iter().enumerate().map(|(k, &v)| (v, exponent(k))),
    ))
}

/// `(D^k J^(m-α) f)(0+)` for k = 0..m-1, computed symbolically.
pub fn rl_initial_values(f: &PowerSum, ord: FracOrder) -> Result<Vec<f64>> {
    let g = rl_integral(f, ord.complement())?;
    (0..ord.m())
        .map(|k| {
            let gk = classical_derivative(&g, k);
            match gk.terms().first() {
                None => Ok(0.0),
                Some(t) if t.exponent < 0.0 => Err(FracError::UnboundedInitialValue { order: k }),
                Some(t) if t.exponent == 0.0 => Ok(t.coeff),
                Some(_) => Ok(0.0),
            }
        })
        .collect()
}

/// How [`numeric_laplace`] bounds `∫_H^∞ e^(-st) f(t) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailBound {
    /// `|f(t)| <= B` for t >= H, so the tail is at most `B e^(-sH)/s`.
    Supplied(f64),
    /// Fits `|f| ~ C t^p` through f(H/2) and f(H) and bounds the tail by
    /// `|f(H)| e^(-sH)/(s - p/H)`.
    PowerLaw,
}

/// `∫_0^H e^(-st) f(t) dt` by quadrature graded toward t = 0, after checking
/// that the tail beyond `horizon` is below `tol`.
pub fn numeric_laplace(f: &dyn Fn(f64) -> f64, s: f64, horizon: f64, tol: f64, tail: TailBound) -> Result<f64> {
    if !(s > 0.0 && horizon > 0.0 && tol > 0.0) {
        return Err(FracError::Domain(format!(
            "numeric Laplace needs s, horizon, tol > 0, got ({s}, {horizon}, {tol})"
        )));
    }
    let decay = (-s * horizon).exp();
    let bound = match tail {
        TailBound::Supplied(b) => b.abs() * decay / s,
        TailBound::PowerLaw => {
            let (near, far) = (f(0.5 * horizon).abs(), f(horizon).abs());
            let p = if near > 0.0 && far > 0.0 {
                (far / near).log2().max(0.0)
            } else {
                0.0
            };
            let rate = s - p / horizon;
            if rate > 0.0 {
                far * decay / rate
            } else {
                f64::INFINITY
            }
        }
    };
    if !(bound <= tol) {
        return Err(FracError::TailBound { bound, tol });
    }
    let h = |t: f64| (-s * t).exp() * f(t);
    quad::singular_at_origin(&h, horizon, 0.5 * tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::reciprocal_gamma;
    use crate::symbolic::{caputo_derivative, initial_derivatives, rl_derivative};

    fn ord(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    fn s(pairs: &[(f64, f64)]) -> SPowerSum {
        SPowerSum::new(pairs.iter().copied())
    }

    #[test]
    fn transform_examples() {
        let phi = PowerSum::kernel(0.5).unwrap();
        assert!(transform(&phi).unwrap().approx_eq(&s(&[(1.0, -0.5)])));
        assert_eq!(transform(&PowerSum::constant(1.0)).unwrap(), s(&[(1.0, -1.0)]));
        assert_eq!(transform(&PowerSum::monomial(1.0, 1.0)).unwrap(), s(&[(1.0, -2.0)]));
        assert!(matches!(
            transform(&PowerSum::monomial(1.0, -1.0)),
            Err(FracError::NotTransformable { .. })
        ));
    }

    #[test]
    fn canonical_order_and_text() {
        let x = s(&[(2.0, -1.5), (1.0, 0.5), (-3.0, -1.5)]);
        assert_eq!(x.terms(), vec![(1.0, 0.5), (-1.0, -1.5)]);
        assert_eq!(x.to_string(), "1*s^0.5 + -1*s^-1.5");
        assert_eq!(SPowerSum::zero().to_string(), "0");
        let mut buf = Vec::new();
        x.write_csv(&mut buf, &[1.0, 4.0]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("s,value\n1.0000000000000000e0,0.0000000000000000e0\n"));
    }

    #[test]
    fn rule_examples() {
        let one = s(&[(1.0, -1.0)]);
        assert_eq!(rule_j(ord(0.0), &one), one);
        assert_eq!(rule_j(ord(0.5), &one), s(&[(1.0, -1.5)]));

        assert!(rule_caputo(ord(0.5), &one, &InitialData::new(vec![1.0]))
            .unwrap()
            .is_zero());
        let t = s(&[(1.0, -2.0)]);
        assert!(rule_caputo(ord(0.5), &t, &InitialData::new(vec![0.0]))
            .unwrap()
            .approx_eq(&s(&[(1.0, -1.5)])));
        // α = 2: s² f̃ - f(0) s - f'(0).
        let ft = s(&[(3.0, -1.0), (2.0, -2.0), (2.0, -3.0)]); // 3 + 2t + t²
        let got = rule_caputo(ord(2.0), &ft, &InitialData::new(vec![3.0, 2.0])).unwrap();
        assert!(got.approx_eq(&s(&[(2.0, -1.0)])));
        assert!(rule_caputo(ord(2.0), &ft, &InitialData::new(vec![3.0])).is_err());

        let got = rule_rl(ord(0.5), &one, &[0.0]).unwrap();
        assert!(got.approx_eq(&transform(&PowerSum::kernel(0.5).unwrap()).unwrap()));
        assert!(matches!(rule_rl(ord(1.5), &one, &[0.0]), Err(FracError::Length { .. })));
    }

    #[test]
    fn initial_value_examples() {
        assert_eq!(
            rl_initial_values(&PowerSum::constant(1.0), ord(0.5)).unwrap(),
            vec![0.0]
        );
        let v = rl_initial_values(&PowerSum::monomial(1.0, -0.5), ord(0.5)).unwrap();
        assert!((v[0] - 1.7724538509055160273).abs() < 1e-14);
        let f = PowerSum::from_pairs(&[(1.0, -0.5), (1.0, 0.0)]);
        assert_eq!(
            rl_initial_values(&f, ord(1.5)),
            Err(FracError::UnboundedInitialValue { order: 1 })
        );
    }

    #[test]
    fn composite_rl_rule() {
        // f = Γ(1/2) Φ_{1/2} = t^{-1/2}: D^{1/2} f = 0 and its image must vanish.
        let f = PowerSum::monomial(1.0, -0.5);
        let lhs = transform(&rl_derivative(&f, ord(0.5)).unwrap()).unwrap();
        let rhs = rule_rl(
            ord(0.5),
            &transform(&f).unwrap(),
            &rl_initial_values(&f, ord(0.5)).unwrap(),
        )
        .unwrap();
        assert!(lhs.is_zero());
        assert!(lhs.approx_eq(&rhs), "{rhs}");
    }

    #[test]
    fn diagrams_commute_on_samples() {
        let samples = [
            PowerSum::from_pairs(&[(1.0, 0.0), (2.0, 1.0), (-0.5, 2.5)]),
            PowerSum::from_pairs(&[(1.5, 1.3), (0.25, 3.0)]),
            PowerSum::from_pairs(&[(-2.0, 0.0), (1.0, 2.0)]),
        ];
        for f in &samples {
            for a in [0.3, 1.0, 1.7, 2.4] {
                let o = ord(a);
                let ft = transform(f).unwrap();
                assert!(transform(&rl_integral(f, o).unwrap())
                    .unwrap()
                    .approx_eq(&rule_j(o, &ft)));

                if let (Ok(c), Ok(init)) = (caputo_derivative(f, o), initial_derivatives(f, o)) {
                    if let Ok(c) = transform(&c) {
                        let rule = rule_caputo(o, &ft, &InitialData::new(init)).unwrap();
                        assert!(c.approx_eq(&rule), "{f} α={a}");
                    }
                }
                if let (Ok(d), Ok(v)) = (transform(&rl_derivative(f, o).unwrap()), rl_initial_values(f, o)) {
                    assert!(d.approx_eq(&rule_rl(o, &ft, &v).unwrap()), "{f} α={a}");
                }
            }
        }
    }

    #[test]
    fn numeric_examples() {
        let v = numeric_laplace(&|_| 1.0, 2.0, 30.0, 1e-10, TailBound::Supplied(1.0)).unwrap();
        assert!((v - 0.5).abs() < 1e-10);
        let phi = |t: f64| t.powf(-0.5) * reciprocal_gamma(0.5);
        let v = numeric_laplace(&phi, 1.0, 40.0, 1e-9, TailBound::PowerLaw).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        let v = numeric_laplace(&|t| t, 3.0, 20.0, 1e-10, TailBound::PowerLaw).unwrap();
        assert!((v - 1.0 / 9.0).abs() < 1e-10);
        for sv in [1.0, 2.0, 5.0] {
            let v = numeric_laplace(&|t| t, sv, 40.0, 1e-10, TailBound::PowerLaw).unwrap();
            assert!((v - sv.powi(-2)).abs() < 1e-8);
        }
        assert!(matches!(
            numeric_laplace(&|_| 1.0, 0.1, 5.0, 1e-8, TailBound::Supplied(1.0)),
            Err(FracError::TailBound { .. })
        ));
    }
}
