use proptest::prelude::*;

use tailpath::singular::{cubic, h_u};
use tailpath::special_math::{brent_root, integrate_adaptive, maximize_1d, QuadratureSpec, StudentT, DEFAULT_GRID};
use tailpath::tail::TevTail;
use tailpath::{maximize_slice, mtcm, singular_root, CopulaModel, MtcmOptions, PickandsFn, TailCopulaFn};

fn model_strategy() -> impl Strategy<Value = CopulaModel> {
    prop_oneof![
        Just(CopulaModel::Independence),
        Just(CopulaModel::Comonotone),
        (-1.0..=1.0f64).prop_map(|t| CopulaModel::fgm(t).unwrap()),
        (0.01..=1.0f64, 0.01..=1.0f64).prop_map(|(a, b)| CopulaModel::marshall_olkin(a, b).unwrap()),
        (0.01..=1.0f64, 0.01..=1.0f64, 1.01..20.0f64).prop_map(|(a, b, t)| CopulaModel::asym_gumbel(a, b, t).unwrap()),
        (0.5..30.0f64, -0.95..0.95f64).prop_map(|(n, r)| CopulaModel::student_t(n, r).unwrap()),
    ]
    .prop_flat_map(|m| prop_oneof![Just(m.clone()), Just(m.survival())])
}

fn analytic_tail_strategy() -> impl Strategy<Value = TailCopulaFn> {
    prop_oneof![
        (0.01..=1.0f64, 0.01..=1.0f64).prop_map(|(alpha, beta)| TailCopulaFn::Smo { alpha, beta }),
        (0.01..=1.0f64, 0.01..=1.0f64, 1.01..20.0f64)
            .prop_map(|(a, b, t)| TailCopulaFn::Ev(PickandsFn::new(a, b, t).unwrap())),
        (0.5..30.0f64, -0.95..0.95f64).prop_map(|(n, r)| TailCopulaFn::Tev(TevTail::new(n, r).unwrap())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn t_cdf_is_symmetric_and_monotone(x in -50.0..50.0f64, dx in 0.0..5.0f64, nu in 0.3..60.0f64) {
        let t = StudentT::new(nu).unwrap();
        prop_assert!((t.cdf(x) + t.cdf(-x) - 1.0).abs() <= 1e-12);
        prop_assert!(t.cdf(x + dx) >= t.cdf(x));
        prop_assert!((t.pdf(x) - t.pdf(-x)).abs() == 0.0);
    }

    #[test]
    fn quadrature_is_linear(a in -3.0..3.0f64, b in -3.0..3.0f64, k in 0.1..4.0f64) {
        let spec = QuadratureSpec::default();
        let f = |x: f64| (k * x).sin() + x * x;
        let g = |x: f64| (-k * x).exp();
        let i = |h: &dyn Fn(f64) -> f64| integrate_adaptive(h, 0.0, 2.0, &spec).unwrap().value;
        let lhs = i(&|x| a * f(x) + b * g(x));
        let rhs = a * i(&f) + b * i(&g);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn maximize_never_below_grid(c in 0.0..1.0f64, w in 1.0..40.0f64, n in 3usize..200) {
        let f = |x: f64| (w * x).sin() * (-(x - c).powi(2)).exp();
        let r = maximize_1d(f, 0.0, 1.0, n, 1e-10).unwrap();
        let step = 1.0 / (n - 1) as f64;
        let best = (0..n).map(|i| f(if i + 1 == n { 1.0 } else { i as f64 * step })).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(r.max_value >= best);
        prop_assert!((0.0..=1.0).contains(&r.argmax));
    }

    #[test]
    fn brent_stays_in_bracket(root in -5.0..5.0f64, lo_off in 0.01..3.0f64, hi_off in 0.01..3.0f64) {
        let (lo, hi) = (root - lo_off, root + hi_off);
        let x = brent_root(|x| (x - root).powi(3) + 0.1 * (x - root), lo, hi, 1e-12).unwrap();
        prop_assert!(x >= lo && x <= hi);
        prop_assert!((x - root).abs() < 1e-9);
    }

    #[test]
    fn frechet_bounds(m in model_strategy(), u in 0.0..=1.0f64, v in 0.0..=1.0f64) {
        let c = m.cdf(u, v).unwrap();
        prop_assert!(c <= u.min(v));
        prop_assert!(c >= (u + v - 1.0).max(0.0) - 1e-15);
    }

    #[test]
    fn two_increasing(m in model_strategy(), a in 0.0..=1.0f64, b in 0.0..=1.0f64, c in 0.0..=1.0f64, d in 0.0..=1.0f64) {
        let (u1, u2) = (a.min(b), a.max(b));
        let (v1, v2) = (c.min(d), c.max(d));
        let vol = m.cdf(u2, v2).unwrap() - m.cdf(u1, v2).unwrap() - m.cdf(u2, v1).unwrap() + m.cdf(u1, v1).unwrap();
        prop_assert!(vol >= -1e-12, "{m}: {vol:e}");
    }

    #[test]
    fn survival_is_involution(m in model_strategy(), u in 0.0..=1.0f64, v in 0.0..=1.0f64) {
        let twice = CopulaModel::Survival(Box::new(CopulaModel::Survival(Box::new(m.clone()))));
        let tol = if matches!(m, CopulaModel::StudentT(_)) { 1e-10 } else { 1e-15 };
        prop_assert!((twice.cdf(u, v).unwrap() - m.cdf(u, v).unwrap()).abs() <= tol);
    }

    #[test]
    fn tail_copula_bounds_monotonicity_homogeneity(
        tail in analytic_tail_strategy(),
        lx in -3.0..3.0f64, ly in -3.0..3.0f64, lc in -3.0..3.0f64, dx in 0.0..1.0f64,
    ) {
        let (x, y, c) = (10f64.powf(lx), 10f64.powf(ly), 10f64.powf(lc));
        let l = tail.eval(x, y).unwrap();
        prop_assert!(l >= 0.0 && l <= x.min(y) * (1.0 + 1e-14));
        prop_assert!(tail.eval(x * (1.0 + dx), y).unwrap() >= l * (1.0 - 1e-14));
        prop_assert!(tail.eval(x, y * (1.0 + dx)).unwrap() >= l * (1.0 - 1e-14));
        prop_assert!((tail.eval(c * x, c * y).unwrap() - c * l).abs() <= 1e-10 * (c * l).max(1.0));
        let b = x / y;
        let profile = tail.eval(b, 1.0 / b).unwrap();
        prop_assert!(profile <= b.min(1.0 / b) * (1.0 + 1e-14));
    }

    #[test]
    fn t_profile_is_even(nu in 0.5..30.0f64, rho in -0.95..0.95f64, ls in -4.0..4.0f64) {
        let t = TevTail::new(nu, rho).unwrap();
        let b = ls.exp();
        prop_assert!((t.eval(b, 1.0 / b) - t.eval(1.0 / b, b)).abs() <= 1e-10);
    }

    #[test]
    fn pickands_bounds(a in 0.01..=1.0f64, b in 0.01..=1.0f64, t in 1.01..30.0f64, w in 0.0..=1.0f64) {
        let p = PickandsFn::new(a, b, t).unwrap();
        let v = p.eval(w);
        prop_assert!(v >= w.max(1.0 - w) - 1e-15 && v <= 1.0 + 1e-15);
        let h = 1e-3;
        if w > h && w < 1.0 - h {
            prop_assert!(v <= 0.5 * (p.eval(w - h) + p.eval(w + h)) + 1e-15);
        }
    }

    #[test]
    fn singular_curve_invariants(a in 0.05..=1.0f64, b in 0.05..=1.0f64, lu in -4.0..0.0f64) {
        let u = 10f64.powf(lu);
        let u2 = u * u;
        // h_u decreasing on a log grid strictly inside (u², 1)
        let xs: Vec<f64> = (1..=100).map(|k| (u2.ln() * (1.0 - k as f64 / 101.0)).exp()).collect();
        for pair in xs.windows(2) {
            prop_assert!(h_u(a, b, u, pair[1]) < h_u(a, b, u, pair[0]));
        }
        let p = singular_root(a, b, u).unwrap();
        // (x/u)² = g_β(u²/x) / g_α(x) with g_p(z) = (1-(1-z)^p)/z
        let g = |p: f64, z: f64| -((p * (-z).ln_1p()).exp_m1()) / z;
        let lhs = p.ratio * p.ratio;
        let rhs = g(b, u2 / p.x_star) / g(a, p.x_star);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn cubic_sign_pattern(u in 1e-4..=1.0f64) {
        prop_assert!(cubic(u, u * u) <= 0.0);
        prop_assert!(cubic(u, 1.0) >= 0.0);
        // discriminant u⁶(u²/4 - 8/27) of the depressed cubic
        prop_assert!(u.powi(6) * (u * u / 4.0 - 8.0 / 27.0) < 0.0);
    }
}

fn slice_models() -> Vec<CopulaModel> {
    vec![
        CopulaModel::marshall_olkin(0.35, 0.7).unwrap().survival(),
        CopulaModel::asym_gumbel(0.35, 0.7, 2.0).unwrap().survival(),
        CopulaModel::student_t(4.0, 0.5).unwrap(),
        CopulaModel::fgm(0.8).unwrap(),
    ]
}

#[test]
fn slice_maximum_dominates_admissible_points() {
    for m in slice_models() {
        for &u in &[0.3, 0.05, 3e-3] {
            let p = maximize_slice(&m, u, DEFAULT_GRID, 1e-10).unwrap();
            assert!(p.pi_value >= m.cdf(u, u).unwrap() * (1.0 - 1e-14), "{m} u={u}");
            for &b in &[0.5, 1.3, 2.0, 3.0] {
                if b * u <= 1.0 && u / b <= 1.0 && b * u >= u * u {
                    assert!(p.pi_value >= m.cdf(b * u, u / b).unwrap() * (1.0 - 1e-14), "{m} u={u} b={b}");
                }
            }
            assert!(p.pi_value <= p.phi_star.min(p.v_star) + 1e-15);
            assert!(p.phi_star.min(p.v_star) <= u * (1.0 + 1e-12));
            assert!(p.ratio_b >= u * (1.0 - 1e-12) && p.ratio_b <= (1.0 + 1e-12) / u);
        }
    }
}

#[test]
fn slice_refinement_is_grid_stable() {
    for m in slice_models() {
        for &u in &[0.1, 1e-3] {
            let coarse = maximize_slice(&m, u, DEFAULT_GRID, 1e-10).unwrap();
            let fine = maximize_slice(&m, u, 2 * DEFAULT_GRID, 1e-10).unwrap();
            assert!((coarse.pi_value - fine.pi_value).abs() < 1e-10, "{m} u={u}");
        }
    }
}

#[test]
fn exchangeable_slices_are_symmetric() {
    for m in [CopulaModel::student_t(4.0, 0.5).unwrap(), CopulaModel::fgm(0.8).unwrap()] {
        for &u in &[0.4, 0.02] {
            let p = maximize_slice(&m, u, DEFAULT_GRID, 1e-10).unwrap();
            assert!((p.phi_star.ln() + p.v_star.ln() - 2.0 * u.ln()).abs() < 1e-12);
            for k in 1..20 {
                let x = (2.0 * u.ln() * k as f64 / 20.0).exp();
                let a = m.cdf(x, u * u / x).unwrap();
                let b = m.cdf(u * u / x, x).unwrap();
                assert!((a - b).abs() < 1e-9, "{m} u={u} x={x}");
            }
        }
    }
}

#[test]
fn mtcm_is_stable_under_grid_doubling() {
    let tails = [
        TailCopulaFn::Smo { alpha: 0.35, beta: 0.7 },
        TailCopulaFn::Ev(PickandsFn::new(0.35, 0.7, 2.0).unwrap()),
        TailCopulaFn::Tev(TevTail::new(4.0, 0.5).unwrap()),
    ];
    for tail in &tails {
        let base = MtcmOptions::default();
        let fine = MtcmOptions { n_grid: 2 * base.n_grid, ..base };
        let (a, b) = (mtcm(tail, &base).unwrap(), mtcm(tail, &fine).unwrap());
        assert!((a.b_star.ln() - b.b_star.ln()).abs() <= 1e-6, "{tail:?}");
        assert!((a.lambda_star - b.lambda_star).abs() <= 2.0 * base.tol.max(1e-12), "{tail:?}");
        assert!(a.lambda_star <= a.b_star.min(1.0 / a.b_star));
    }
}

#[test]
fn numeric_tail_agrees_with_analytic_within_reported_error() {
    let cases = [
        (CopulaModel::marshall_olkin(0.35, 0.7).unwrap().survival(), TailCopulaFn::Smo { alpha: 0.35, beta: 0.7 }),
        (
            CopulaModel::asym_gumbel(0.35, 0.7, 2.0).unwrap().survival(),
            TailCopulaFn::Ev(PickandsFn::new(0.35, 0.7, 2.0).unwrap()),
        ),
        (CopulaModel::student_t(4.0, 0.5).unwrap(), TailCopulaFn::Tev(TevTail::new(4.0, 0.5).unwrap())),
    ];
    for (model, analytic) in &cases {
        let numeric = TailCopulaFn::numeric(model.clone());
        for &(x, y) in &[(1.0, 1.0), (0.3, 2.0), (3.0, 0.5)] {
            let e = numeric.eval_with_error(x, y).unwrap();
            let exact = analytic.eval(x, y).unwrap();
            assert!((e.value - exact).abs() <= e.error, "{model} ({x},{y}): {e:?} vs {exact}");
        }
    }
}
