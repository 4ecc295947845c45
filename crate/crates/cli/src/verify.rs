//! Self-checks runnable from the command line, grouped in suites. Every check
//! compares a computed quantity with a closed form or a structural property
//! and reports one line.

use std::f64::consts::SQRT_2;

use clap::ValueEnum;

use tailpath::copula::sample;
use tailpath::path::EquivalenceBudget;
use tailpath::singular::{cubic, h_u};
use tailpath::special_math::{StudentT, DEFAULT_GRID};
use tailpath::tail::{tail_copula_smo, tail_copula_tev, TevTail};
use tailpath::{
    asymptotic_report, cardano_roots, equivalence_report, maximize_slice, mtcm, singular_root, trace_path,
    CopulaModel, Error, MtcmOptions, PickandsFn, Schedule, SpectralModel, TailCopulaFn,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Smo,
    Sag,
    T,
    Fgm,
    Singular,
    Spectral,
    /// Numeric tail limits against the closed forms.
    Tail,
    /// Copula and tail-copula invariants, sampler marginals.
    Properties,
    All,
}

impl Suite {
    const EACH: [Suite; 8] =
        [Suite::Smo, Suite::Sag, Suite::T, Suite::Fgm, Suite::Singular, Suite::Spectral, Suite::Tail, Suite::Properties];

    fn name(self) -> &'static str {
        match self {
            Suite::Smo => "smo",
            Suite::Sag => "sag",
            Suite::T => "t",
            Suite::Fgm => "fgm",
            Suite::Singular => "singular",
            Suite::Spectral => "spectral",
            Suite::Tail => "tail",
            Suite::Properties => "properties",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Settings the suites honour.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub schedule: Schedule,
    pub grid: usize,
    pub tol_slice: f64,
    pub budget: EquivalenceBudget,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            schedule: Schedule::default(),
            grid: DEFAULT_GRID,
            tol_slice: tailpath::path::DEFAULT_SLICE_TOL,
            budget: EquivalenceBudget::default(),
        }
    }
}

/// Runs the requested suites in a fixed order.
pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> Vec<Check> {
    let wanted: Vec<Suite> = if suites.contains(&Suite::All) {
        Suite::EACH.to_vec()
    } else {
        Suite::EACH.iter().copied().filter(|s| suites.contains(s)).collect()
    };
    let mut out = Vec::new();
    for suite in wanted {
        let checks: Vec<(&'static str, Outcome)> = match suite {
            Suite::Smo => smo_suite(cfg),
            Suite::Sag => sag_suite(cfg),
            Suite::T => t_suite(cfg),
            Suite::Fgm => fgm_suite(cfg),
            Suite::Singular => singular_suite(),
            Suite::Spectral => spectral_suite(),
            Suite::Tail => tail_suite(),
            Suite::Properties => properties_suite(),
            Suite::All => unreachable!("expanded above"),
        };
        out.extend(checks.into_iter().map(|(name, outcome)| {
            let (pass, detail) = match outcome {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            Check { suite: suite.name(), name, pass, detail }
        }));
    }
    out
}

type Outcome = Result<(bool, String), Error>;

/// Counts sub-checks and keeps the first few failures.
#[derive(Default)]
struct Tally {
    total: usize,
    failures: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, summary: String) -> Outcome {
        if self.failures.is_empty() {
            Ok((true, format!("{summary} ({} sub-checks)", self.total)))
        } else {
            let shown: Vec<_> = self.failures.iter().take(4).cloned().collect();
            Ok((false, format!("{summary}; {} of {} failed: {}", self.failures.len(), self.total, shown.join("; "))))
        }
    }
}

fn smo(alpha: f64, beta: f64) -> CopulaModel {
    CopulaModel::marshall_olkin(alpha, beta).expect("valid parameters").survival()
}

fn sag() -> CopulaModel {
    CopulaModel::asym_gumbel(0.35, 0.7, 2.0).expect("valid parameters").survival()
}

fn equivalence(model: &CopulaModel, cfg: &VerifyConfig) -> Outcome {
    let r = equivalence_report(model, &TailCopulaFn::for_model(model), &cfg.schedule, cfg.grid, cfg.tol_slice, cfg.budget)?;
    Ok((
        !r.violation,
        format!(
            "λ* = {:.6}, λ_φ* = {:.6} (gap {:.1e} ≤ {:.1e}); b* = {:.6}, lim φ*/u = {:.6} (gap {:.1e} ≤ {:.1e})",
            r.lambda_star, r.lambda_phi_star.value, r.lambda_gap, r.lambda_budget, r.b_star, r.b_limit.value, r.b_gap, r.b_budget
        ),
    ))
}

fn smo_suite(cfg: &VerifyConfig) -> Vec<(&'static str, Outcome)> {
    let closed_form = || -> Outcome {
        let mut t = Tally::default();
        for &alpha in &[0.35, 0.1, 0.5, 0.9] {
            for &beta in &[0.7, 0.2, 0.6, 1.0] {
                let r = mtcm(&TailCopulaFn::Smo { alpha, beta }, &MtcmOptions::default())?;
                let (b, l) = ((beta / alpha).sqrt(), (alpha * beta).sqrt());
                t.expect((r.b_star - b).abs() <= 1e-6 * b.max(1.0), || format!("({alpha},{beta}) b* {}", r.b_star));
                t.expect((r.lambda_star - l).abs() <= 1e-8, || format!("({alpha},{beta}) λ* {}", r.lambda_star));
                t.expect(r.unique, || format!("({alpha},{beta}) not unique"));
            }
        }
        let r = mtcm(&TailCopulaFn::Smo { alpha: 0.35, beta: 0.7 }, &MtcmOptions::default())?;
        t.finish(format!("(0.35, 0.7): b* = {:.9}, λ* = {:.10}", r.b_star, r.lambda_star))
    };
    let curve = || -> Outcome {
        let path = trace_path(&smo(0.35, 0.7), &cfg.schedule, cfg.grid, cfg.tol_slice)?;
        let r = asymptotic_report(0.35, 0.7, &cfg.schedule, &path, cfg.budget.b)?;
        let last = r.rows.last().expect("non-empty schedule");
        Ok((
            r.converged,
            format!("at u = {:.0e}: φ*/u = {:.6}, x*/u = {:.6}, target {:.6}", last.u, last.phi_ratio, last.x_ratio, r.target),
        ))
    };
    vec![
        ("MTCM matches sqrt(β/α), sqrt(αβ)", closed_form()),
        ("path-based TDC equals MTCM", equivalence(&smo(0.35, 0.7), cfg)),
        ("path follows the singular curve", curve()),
    ]
}

fn sag_suite(cfg: &VerifyConfig) -> Vec<(&'static str, Outcome)> {
    let attainer = || -> Outcome {
        let r = mtcm(&TailCopulaFn::for_model(&sag()), &MtcmOptions::default())?;
        let gap = (r.b_star - SQRT_2).abs();
        Ok((gap <= 1e-4 && r.unique, format!("b* = {:.8}, |b* - sqrt 2| = {gap:.1e}, λ* = {:.8}", r.b_star, r.lambda_star)))
    };
    vec![("MTCM attained at sqrt(β/α)", attainer()), ("path-based TDC equals MTCM", equivalence(&sag(), cfg))]
}

const T_CASES: [(f64, f64); 3] = [(4.0, 0.5), (2.0, -0.3), (10.0, 0.8)];

fn t_suite(cfg: &VerifyConfig) -> Vec<(&'static str, Outcome)> {
    let attainer = || -> Outcome {
        let mut t = Tally::default();
        let mut worst: f64 = 0.0;
        for &(nu, rho) in &T_CASES {
            let r = mtcm(&TailCopulaFn::Tev(TevTail::new(nu, rho)?), &MtcmOptions::default())?;
            worst = worst.max((r.b_star - 1.0).abs());
            t.expect((r.b_star - 1.0).abs() <= 1e-4, || format!("({nu},{rho}) b* = {}", r.b_star));
        }
        t.finish(format!("max |b* - 1| = {worst:.1e}"))
    };
    let l_route = || -> Outcome {
        let mut t = Tally::default();
        let mut worst: f64 = 0.0;
        for &(nu, rho) in &T_CASES {
            let l = SpectralModel::new(nu, rho)?.argmax_l(-5.0, 5.0, 201, 1e-9)?;
            worst = worst.max(l.argmax.abs());
            t.expect(l.argmax.abs() <= 1e-3, || format!("({nu},{rho}) argmax s = {}", l.argmax));
        }
        t.finish(format!("max |s*| = {worst:.1e}"))
    };
    let model = CopulaModel::student_t(4.0, 0.5).expect("valid parameters");
    vec![
        ("MTCM attained at b* = 1", attainer()),
        ("L(s) maximized at s = 0", l_route()),
        ("path-based TDC equals MTCM for t(4, 0.5)", equivalence(&model, cfg)),
    ]
}

fn fgm_suite(cfg: &VerifyConfig) -> Vec<(&'static str, Outcome)> {
    let boundary = || -> Outcome {
        let fgm = CopulaModel::fgm(-1.0)?;
        let mut t = Tally::default();
        for k in 1..=9 {
            let u = k as f64 / 10.0;
            let p = maximize_slice(&fgm, u, cfg.grid, cfg.tol_slice)?;
            let cell = -(u * u).ln() / (cfg.grid - 1) as f64;
            let near = p.phi_star.ln() - (u * u).ln() <= cell * (1.0 + 1e-9) || -p.phi_star.ln() <= cell * (1.0 + 1e-9);
            t.expect(near && p.argmax_at_boundary, || format!("u = {u}: maximizer {} not at an endpoint", p.phi_star));
        }
        t.finish("θ = -1: every slice maximizer sits at an endpoint of [u², 1], so no admissible path".into())
    };
    let degenerate = || -> Outcome {
        let mut t = Tally::default();
        for theta in [-1.0, 0.5, 1.0] {
            let r = mtcm(&TailCopulaFn::for_model(&CopulaModel::fgm(theta)?), &MtcmOptions::default());
            t.expect(matches!(r, Err(Error::DegenerateTail { .. })), || format!("θ = {theta}: {r:?}"));
        }
        t.finish("tail copula vanishes identically for θ ∈ {-1, 0.5, 1}".into())
    };
    vec![("boundary maximizers", boundary()), ("degenerate tail detected", degenerate())]
}

fn singular_suite() -> Vec<(&'static str, Outcome)> {
    let roots = || -> Outcome {
        let mut t = Tally::default();
        let mut worst: f64 = 0.0;
        for k in 0..50 {
            let u = 10f64.powf(-4.0 + 4.0 * k as f64 / 49.0);
            let p = singular_root(0.35, 0.7, u)?;
            let h = if u < 1.0 { h_u(0.35, 0.7, u, p.x_star) } else { 0.0 };
            worst = worst.max(h.abs());
            t.expect(h.abs() <= 1e-10, || format!("u = {u}: h_u = {h:e}"));
            // β = 2α here, so the curve is the largest root of the cubic
            let x0 = cardano_roots(u)?[0];
            t.expect((x0 - p.x_star).abs() <= 1e-10, || format!("u = {u}: Cardano {x0} vs Brent {}", p.x_star));
        }
        t.finish(format!("max |h_u(x*)| = {worst:.1e} on 50 levels, Cardano agrees for β = 2α"))
    };
    let small_u = || -> Outcome {
        let u = 1e-4;
        let [x0, _, x2] = cardano_roots(u)?;
        let (e0, e2) = ((x0 / u - SQRT_2).abs(), (x2 / (u * u) - 0.5).abs());
        let residual_ok = cubic(u, x0).abs() <= 1e-12 * u.powi(3);
        Ok((e0 < 1e-3 && e2 < 1e-3 && residual_ok, format!("u = 1e-4: |x0/u - sqrt 2| = {e0:.1e}, |x2/u² - 1/2| = {e2:.1e}")))
    };
    vec![("curve solves its equation", roots()), ("small-u root asymptotics", small_u())]
}

fn spectral_suite() -> Vec<(&'static str, Outcome)> {
    let mass = || -> Outcome {
        let mut t = Tally::default();
        for &(nu, rho) in &T_CASES {
            let sm = SpectralModel::new(nu, rho)?;
            let expected = 2.0 * StudentT::new(nu + 1.0)?.cdf(sm.eta() * rho);
            let m = sm.interior_mass()?;
            t.expect((m - expected).abs() <= 1e-6, || format!("({nu},{rho}) mass {m} vs {expected}"));
            for k in 1..200 {
                let w = k as f64 / 200.0;
                let (a, b) = (sm.h_density(w)?, sm.h_density(1.0 - w)?);
                t.expect((a - b).abs() <= 1e-12 * a.max(1.0), || format!("({nu},{rho}) h({w}) asymmetric"));
            }
        }
        t.finish("interior mass and h(w) = h(1-w)".into())
    };
    let tail = || -> Outcome {
        let mut t = Tally::default();
        let mut worst: f64 = 0.0;
        for &(nu, rho) in &T_CASES {
            let sm = SpectralModel::new(nu, rho)?;
            for i in 0..10 {
                for j in 0..10 {
                    let x = 10f64.powf(-1.0 + 2.0 * i as f64 / 9.0);
                    let y = 10f64.powf(-1.0 + 2.0 * j as f64 / 9.0);
                    let d = (sm.spectral_tail_copula(x, y)? - tail_copula_tev(nu, rho, x, y)?).abs();
                    worst = worst.max(d);
                    t.expect(d <= 1e-6, || format!("({nu},{rho}) at ({x},{y}): gap {d:e}"));
                }
            }
        }
        t.finish(format!("max gap {worst:.1e} on a 10x10 grid"))
    };
    let m_props = || -> Outcome {
        let mut t = Tally::default();
        for &(nu, rho) in &T_CASES {
            let sm = SpectralModel::new(nu, rho)?;
            let mut prev = f64::INFINITY;
            for k in 1..=200 {
                let a = 0.05 * k as f64;
                let m = sm.m_transform(a)?;
                t.expect((m - sm.m_transform(-a)?).abs() <= 1e-12 * m, || format!("({nu},{rho}) m not even at {a}"));
                t.expect(m < prev, || format!("({nu},{rho}) m not decreasing at {a}"));
                prev = m;
                let closed = sm.m_closed_form(a);
                t.expect((m - closed).abs() <= 1e-12 * closed, || format!("({nu},{rho}) closed form at {a}"));
                let h = 1e-5;
                let fd = (sm.m_transform(a + h)?.ln() - sm.m_transform(a - h)?.ln()) / (2.0 * h);
                t.expect((fd - sm.ln_m_derivative(a)).abs() <= 1e-6, || format!("({nu},{rho}) ln m' at {a}"));
            }
        }
        t.finish("m even, decreasing, closed form and log-derivative agree".into())
    };
    vec![("spectral mass and symmetry", mass()), ("spectral tail copula matches closed form", tail()), ("m(a) properties", m_props())]
}

fn tail_suite() -> Vec<(&'static str, Outcome)> {
    let compare = |model: CopulaModel, exact: &dyn Fn(f64, f64) -> tailpath::Result<f64>| -> Outcome {
        let numeric = TailCopulaFn::numeric(model.clone());
        let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
        let mut t = Tally::default();
        let mut worst: f64 = 0.0;
        for &x in &grid {
            for &y in &grid {
                let e = numeric.eval_with_error(x, y)?;
                let d = (e.value - exact(x, y)?).abs();
                worst = worst.max(d);
                t.expect(d <= e.error && d <= 1e-3, || format!("({x},{y}): {} ± {:.1e}, gap {d:.1e}", e.value, e.error));
            }
        }
        t.finish(format!("{model}: max gap {worst:.1e}"))
    };
    vec![
        ("numeric limit vs closed form (smo)", compare(smo(0.35, 0.7), &|x, y| tail_copula_smo(0.35, 0.7, x, y))),
        (
            "numeric limit vs closed form (t)",
            compare(CopulaModel::student_t(4.0, 0.5).expect("valid parameters"), &|x, y| tail_copula_tev(4.0, 0.5, x, y)),
        ),
    ]
}

fn zoo() -> Vec<CopulaModel> {
    let ok = |m: tailpath::Result<CopulaModel>| m.expect("valid parameters");
    vec![
        CopulaModel::Independence,
        CopulaModel::Comonotone,
        ok(CopulaModel::fgm(-1.0)),
        ok(CopulaModel::fgm(0.7)),
        ok(CopulaModel::marshall_olkin(0.35, 0.7)),
        smo(0.35, 0.7),
        ok(CopulaModel::asym_gumbel(0.35, 0.7, 2.0)),
        sag(),
        ok(CopulaModel::student_t(4.0, 0.5)),
        ok(CopulaModel::student_t(2.0, -0.3)).survival(),
    ]
}

/// Kolmogorov distance of a sample from the uniform distribution.
fn ks_uniform(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).abs().max(((i + 1) as f64 / n - x).abs()))
        .fold(0.0, f64::max)
}

fn properties_suite() -> Vec<(&'static str, Outcome)> {
    let copulas = || -> Outcome {
        let mut t = Tally::default();
        let g: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
        for m in zoo() {
            for (i, &u) in g.iter().enumerate() {
                for (j, &v) in g.iter().enumerate() {
                    let c = m.cdf(u, v)?;
                    t.expect((u + v - 1.0).max(0.0) - 1e-15 <= c && c <= u.min(v), || format!("{m}: bounds at ({u},{v})"));
                    if i > 0 && j > 0 {
                        let vol = c - m.cdf(g[i - 1], v)? - m.cdf(u, g[j - 1])? + m.cdf(g[i - 1], g[j - 1])?;
                        t.expect(vol >= -1e-12, || format!("{m}: negative volume {vol:e} at ({u},{v})"));
                    }
                }
            }
        }
        t.finish("Fréchet–Hoeffding bounds and 2-increasingness on a 21x21 grid".into())
    };
    let tails = || -> Outcome {
        let mut t = Tally::default();
        let fns = [
            TailCopulaFn::Smo { alpha: 0.35, beta: 0.7 },
            TailCopulaFn::Ev(PickandsFn::new(0.35, 0.7, 2.0)?),
            TailCopulaFn::Tev(TevTail::new(4.0, 0.5)?),
        ];
        let g: Vec<f64> = (0..7).map(|k| 10f64.powf(-1.5 + 0.5 * k as f64)).collect();
        for f in &fns {
            for &x in &g {
                for &y in &g {
                    let a = f.eval(x, y)?;
                    t.expect(a >= 0.0 && a <= x.min(y) * (1.0 + 1e-14), || format!("{f:?}: Λ({x},{y}) = {a}"));
                    for c in [0.1, 3.0] {
                        let b = f.eval(c * x, c * y)?;
                        t.expect((b - c * a).abs() <= 1e-10 * (c * a).max(1.0), || format!("{f:?}: not homogeneous at ({x},{y})"));
                    }
                }
            }
        }
        t.finish("0 ≤ Λ ≤ min(x, y) and 1-homogeneity".into())
    };
    let pickands = || -> Outcome {
        let mut t = Tally::default();
        for &(alpha, beta, theta) in &[(0.35, 0.7, 2.0), (1.0, 1.0, 1.5), (0.1, 0.95, 12.0)] {
            let a = PickandsFn::new(alpha, beta, theta)?;
            for k in 0..=200 {
                let w = k as f64 / 200.0;
                let v = a.eval(w);
                t.expect(w.max(1.0 - w) - 1e-15 <= v && v <= 1.0 + 1e-15, || format!("A({w}) = {v}"));
            }
        }
        t.finish("max(w, 1-w) ≤ A(w) ≤ 1".into())
    };
    let sampler = || -> Outcome {
        let n = 20_000;
        let limit = 1.95 / (n as f64).sqrt();
        let mut t = Tally::default();
        for (seed, m) in zoo().into_iter().enumerate() {
            let pairs = sample(&m, n, 1000 + seed as u64)?;
            let du = ks_uniform(pairs.iter().map(|p| p.0).collect());
            let dv = ks_uniform(pairs.iter().map(|p| p.1).collect());
            t.expect(du <= limit && dv <= limit, || format!("{m}: KS {du:.4}, {dv:.4} > {limit:.4}"));
        }
        t.finish(format!("uniform marginals, Kolmogorov distance ≤ {limit:.4} at n = {n}"))
    };
    vec![
        ("copula bounds and volumes", copulas()),
        ("tail copula bounds and homogeneity", tails()),
        ("Pickands bounds", pickands()),
        ("sampler marginals", sampler()),
    ]
}
