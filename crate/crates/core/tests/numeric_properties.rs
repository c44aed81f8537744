#![allow(clippy::type_complexity)]

use fracops::numeric::correction_series;
use fracops::suites::discrete_semigroup_rate;
use fracops::*;
use proptest::prelude::*;

fn ord(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn max_abs(f: &dyn Fn(f64) -> f64, t_end: f64) -> f64 {
    (0..=256).map(|j| f(t_end * j as f64 / 256.0).abs()).fold(1.0, f64::max)
}

fn oracle_gap(f: &dyn Fn(f64) -> f64, alpha: f64, n: usize) -> f64 {
    let s = SampledFunction::from_fn(1.0, n, f).unwrap();
    let j = rl_integral_numeric(&s, ord(alpha)).unwrap();
    let bound = 5.0 * s.step().powf(1.8) * max_abs(f, 1.0);
    (1..n)
        .map(|k| {
            let want = oracle_quadrature(f, ord(alpha), s.t(k), 1e-11).unwrap();
            (j.values()[k] - want).abs() / bound
        })
        .fold(0.0, f64::max)
}

#[test]
fn product_trapezoid_agrees_with_the_oracle() {
    let inputs: [(&str, Box<dyn Fn(f64) -> f64>, &[usize]); 4] = [
        ("t", Box::new(|t| t), &[16, 32, 64, 128]),
        ("t^2", Box::new(|t| t * t), &[16, 32, 64, 128]),
        ("e^-t", Box::new(|t: f64| (-t).exp()), &[16, 32, 64, 128]),
        // Only C^0 at the origin; the h^1.8 envelope holds on coarse grids.
        ("t^1/2 + t", Box::new(|t: f64| t.sqrt() + t), &[16, 32, 64]),
    ];
    for (name, f, sizes) in &inputs {
        for alpha in [0.25, 0.5, 0.9, 1.5] {
            for &n in *sizes {
                let r = oracle_gap(f.as_ref(), alpha, n);
                assert!(r <= 1.0, "{name}, α = {alpha}, N = {n}: error is {r:.3} of the bound");
            }
        }
    }
}

#[test]
fn low_regularity_input_converges_at_its_own_rate() {
    // t^(1/2) limits the product rule to roughly h^(α+1/2), and never better than h^1.5.
    let f = PowerSum::from_pairs(&[(1.0, 0.5), (1.0, 1.0)]);
    for alpha in [0.25, 0.5, 0.9, 1.5] {
        let case = ConvergenceCase::from_power_sum(NumericOperator::Integral, &f, ord(alpha), 1.0, false).unwrap();
        let rep = convergence_order(&case, &[32, 64, 128, 256, 512]).unwrap();
        let expected = (alpha + 0.5).min(1.5);
        assert!(rep.order >= expected - 0.1, "α = {alpha}: order {}", rep.order);
    }
}

#[test]
fn caputo_kills_constants() {
    for n in [4, 7, 32, 257, 1000] {
        for alpha in [0.1, 0.5, 1.0, 1.3, 2.0] {
            let s = SampledFunction::from_fn(3.0, n, |_| -2.5).unwrap();
            let d = caputo_derivative_numeric(&s, ord(alpha), None).unwrap();
            assert!(
                d.values().iter().all(|&v| v == 0.0),
                "N = {n}, α = {alpha}: {:?}",
                &d.values()[..4]
            );
        }
    }
}

#[test]
fn discrete_semigroup_converges_on_inputs_vanishing_at_zero() {
    let f = |t: f64| t.sin().powi(2) + t * (-t).exp();
    for (a, b) in [(0.7, 0.4), (0.5, 0.5), (0.3, 0.9), (1.2, 0.6), (0.1, 2.0)] {
        let rate = discrete_semigroup_rate(&f, a, b, &[64, 128, 256, 512, 1024]).unwrap();
        assert!(rate >= 1.5, "({a}, {b}): rate {rate}");
    }
}

#[test]
fn discrete_semigroup_with_a_jump_at_zero_is_first_order() {
    let f = |t: f64| (-t).exp();
    let rate = discrete_semigroup_rate(&f, 0.5, 0.5, &[64, 128, 256, 512, 1024]).unwrap();
    assert!(rate > 0.9 && rate < 1.5, "rate {rate}");
}

fn sample() -> impl Strategy<Value = (Vec<f64>, f64)> {
    (prop::collection::vec(-3.0f64..3.0, 5..=5), 0.5f64..4.0)
}

fn from_coeffs(c: &[f64], t: f64) -> f64 {
    c[0] + c[1] * t + c[2] * (1.7 * t).sin() + c[3] * (-t).exp() + c[4] * t.powf(2.5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn numeric_operators_are_linear(
        (cf, t_end) in sample(),
        (cg, _) in sample(),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        alpha in 0.05f64..2.9,
        n in 8usize..80,
    ) {
        let o = ord(alpha);
        let f = SampledFunction::from_fn(t_end, n, |t| from_coeffs(&cf, t)).unwrap();
        let g = SampledFunction::from_fn(t_end, n, |t| from_coeffs(&cg, t)).unwrap();
        let h = SampledFunction::new(f.step(), f.values().iter().zip(g.values()).map(|(x, y)| a * x + b * y).collect()).unwrap();
        let init = |c: &[f64]| InitialData::new(vec![c[0] + c[3], c[1] + 1.7 * c[2] - c[3], -c[3]][..o.m()].to_vec());
        let (i_f, i_g) = (init(&cf), init(&cg));
        let i_h = InitialData::new(i_f.derivs.iter().zip(&i_g.derivs).map(|(x, y)| a * x + b * y).collect());
        let caputo_ok = o.m() <= 2;
        let ops: Vec<Box<dyn Fn(&SampledFunction, &InitialData) -> SampledFunction>> = {
            let mut v: Vec<Box<dyn Fn(&SampledFunction, &InitialData) -> SampledFunction>> =
                vec![Box::new(move |s, _| rl_integral_numeric(s, o).unwrap())];
            if caputo_ok {
                v.push(Box::new(move |s, _| caputo_derivative_numeric(s, o, None).unwrap()));
                v.push(Box::new(move |s, i| rl_derivative_numeric(s, o, i, None).unwrap()));
            }
            v
        };
        let sup = |s: &SampledFunction| s.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let input = (a.abs() * sup(&f) + b.abs() * sup(&g)).max(1.0);
        let weight = f.step().powf(-alpha).max(1.0);
        for op in &ops {
            let (rf, rg, rh) = (op(&f, &i_f), op(&g, &i_g), op(&h, &i_h));
            for j in 1..=n {
                let comb = a * rf.values()[j] + b * rg.values()[j];
                // Rounding enters through weights of size up to h^-α times the inputs.
                let scale = (a * rf.values()[j]).abs().max((b * rg.values()[j]).abs()).max(input * weight);
                prop_assert!((rh.values()[j] - comb).abs() <= 1e-12 * scale, "j = {}: {:e} of scale {}", j, (rh.values()[j] - comb).abs() / scale, scale);
            }
        }
    }

    #[test]
    fn rl_minus_caputo_is_the_correction_series(
        (c, t_end) in sample(),
        alpha in 0.05f64..2.0,
        n in 8usize..120,
    ) {
        let o = ord(alpha);
        let f = SampledFunction::from_fn(t_end, n, |t| from_coeffs(&c, t)).unwrap();
        let init = InitialData::new(vec![c[0] + c[3], c[1] + 1.7 * c[2] - c[3]][..o.m()].to_vec());
        let rl = rl_derivative_numeric(&f, o, &init, None).unwrap();
        let cap = caputo_derivative_numeric(&f, o, None).unwrap();
        let series = correction_series(&init, o);
        for j in 1..=n {
            let want = series.evaluate(f.t(j)).unwrap();
            let diff = rl.values()[j] - cap.values()[j];
            prop_assert!((diff - want).abs() <= 1e-10 * want.abs().max(1.0), "j = {}: {} vs {}", j, diff, want);
        }
    }

    #[test]
    fn csv_round_trip_is_exact(
        values in prop::collection::vec(-1e6f64..1e6, 3..60),
        step in 1e-3f64..2.0,
    ) {
        let f = SampledFunction::new(step, values).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let back = SampledFunction::read_csv(&buf[..]).unwrap();
        prop_assert_eq!(back.values(), f.values());
        prop_assert!((back.step() - f.step()).abs() <= 1e-12 * f.step());
    }
}
