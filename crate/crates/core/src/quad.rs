//! Quadrature building blocks for the brute-force oracles: Gauss-Legendre
//! rules, geometric meshes toward an endpoint singularity, and adaptive
//! Gauss-Kronrod (7, 15) bisection.

use crate::error::{FracError, Result};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

fn gl_panel(h: &dyn Fn(f64) -> f64, a: f64, b: f64, rule: &[(f64, f64)]) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    rule.iter().map(|&(x, w)| w * h(c + r * x)).sum::<f64>() * r
}

/// ∫_0^len h(x) dx for `h` with an integrable singularity at 0, on a
/// geometric mesh with `levels` panels of ratio 1/`sigma` plus a final panel
/// touching the origin. Each panel gets the same Gauss-Legendre rule.
pub(crate) fn geometric(h: &dyn Fn(f64) -> f64, len: f64, levels: usize, sigma: f64, rule: &[(f64, f64)]) -> f64 {
    let mut total = 0.0;
    let mut hi = len;
    for _ in 0..levels {
        let lo = hi * sigma;
        total += gl_panel(h, lo, hi, rule);
        hi = lo;
    }
    total + gl_panel(h, 0.0, hi, rule)
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(h: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = h(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = r * XGK[j];
        let pair = h(c - dx) + h(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * r, ((kronrod - gauss) * r).abs())
}

/// Adaptive G7-K15 on [a, b] to absolute tolerance `tol`.
pub(crate) fn adaptive_gk(h: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gk15(h, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let (total, err): (f64, f64) = pieces.iter().fold((0.0, 0.0), |(s, t), p| (s + p.2, t + p.3));
        if err <= tol {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(FracError::NonConvergence {
                last: total,
                previous: total - err,
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(h, lo, mid);
        let (v2, e2) = gk15(h, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// ∫_0^len h(x) dx where `h` may carry an x^(ε-1) singularity at 0:
/// geometric Gauss-Legendre on [0, min(1, len)], adaptive Gauss-Kronrod beyond.
/// The geometric part is evaluated at two refinement levels and their
/// disagreement counts against `tol`.
pub(crate) fn singular_at_origin(h: &dyn Fn(f64) -> f64, len: f64, tol: f64) -> Result<f64> {
    let near = len.min(1.0);
    let coarse = geometric(h, near, 100, 0.2, &gauss_legendre(20));
    let fine = geometric(h, near, 150, 0.2, &gauss_legendre(28));
    if (fine - coarse).abs() > 0.5 * tol {
        return Err(FracError::NonConvergence {
            last: fine,
            previous: coarse,
        });
    }
    let far = if len > near {
        adaptive_gk(h, near, len, 0.5 * tol)?
    } else {
        0.0
    };
    Ok(fine + far)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [1, 2, 5, 12, 28] {
            let rule = gauss_legendre(n);
            assert!((rule.iter().map(|r| r.1).sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let got: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn kronrod_pair_exactness() {
        // K15 integrates degree 22 exactly, G7 degree 13.
        for deg in 0..=22 {
            let f = move |x: f64| x.powi(deg);
            let (k, e) = gk15(&f, 0.0, 1.0);
            assert!((k - 1.0 / (deg as f64 + 1.0)).abs() < 1e-15, "deg {deg}");
            if deg <= 13 {
                assert!(e < 1e-15, "deg {deg} err {e}");
            }
        }
    }

    #[test]
    fn adaptive_handles_peaks() {
        let f = |x: f64| 1.0 / (1e-4 + (x - 0.3).powi(2));
        let want = (0.7f64 / 1e-2).atan() / 1e-2 + (0.3f64 / 1e-2).atan() / 1e-2;
        let got = adaptive_gk(&f, 0.0, 1.0, 1e-10).unwrap();
        assert!((got - want).abs() < 1e-9);
    }

    #[test]
    fn singular_origin() {
        // ∫_0^4 x^(-3/4) dx = 4 * 4^(1/4)
        let f = |x: f64| x.powf(-0.75);
        let got = singular_at_origin(&f, 4.0, 1e-9).unwrap();
        assert!((got - 4.0 * 4f64.powf(0.25)).abs() < 1e-9);
    }
}
