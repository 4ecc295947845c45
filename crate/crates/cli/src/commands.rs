//! The data-producing subcommands. Each one builds tables (always written as
//! CSV), optional JSON documents and charts, then hands them to [`emit`].

use std::path::PathBuf;

use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::json;

use tailpath::copula::sample;
use tailpath::special_math::DEFAULT_GRID;
use tailpath::{
    mtcm, singular_curve, trace_path, CopulaModel, EquivalenceBudget, Error, MtcmOptions, MtcmResult, PathResult,
    Schedule, SpectralModel, TailCopulaFn,
};

use crate::error::{CliError, OpContext};
use crate::output::{OutputDir, Table};
use crate::svg::{Chart, Mark, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// CSV tables only.
    Csv,
    /// CSV tables plus a JSON copy of each.
    Json,
    /// CSV tables plus SVG charts.
    Svg,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Settings {
    pub out: PathBuf,
    pub format: Format,
    pub seed: u64,
    /// `None` selects the command's own default.
    pub schedule: Option<Schedule>,
    pub grid: usize,
    pub tol_slice: f64,
    pub tol_mtcm: f64,
    pub budget: EquivalenceBudget,
}

impl Settings {
    pub fn schedule_or_default(&self) -> Schedule {
        self.schedule.clone().unwrap_or_default()
    }

    fn mtcm_options(&self) -> MtcmOptions {
        MtcmOptions { tol: self.tol_mtcm, ..MtcmOptions::default() }
    }
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            out: PathBuf::from("."),
            format: Format::Csv,
            seed: 1,
            schedule: None,
            grid: DEFAULT_GRID,
            tol_slice: tailpath::path::DEFAULT_SLICE_TOL,
            tol_mtcm: MtcmOptions::default().tol,
            budget: EquivalenceBudget::default(),
        }
    }
}

/// Everything a command produces.
#[derive(Default)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    /// Stand-alone JSON documents, written regardless of the format.
    pub documents: Vec<(String, serde_json::Value)>,
    pub charts: Vec<(String, Chart)>,
}

impl Artifacts {
    fn extend(&mut self, other: Artifacts) {
        self.tables.extend(other.tables);
        self.documents.extend(other.documents);
        self.charts.extend(other.charts);
    }
}

pub fn emit(artifacts: &Artifacts, settings: &Settings) -> Result<OutputDir, CliError> {
    let mut out = OutputDir::create(&settings.out)?;
    for t in &artifacts.tables {
        out.write(&format!("{}.csv", t.name), &t.to_csv())?;
        if settings.format == Format::Json {
            out.write(&format!("{}.json", t.name), &pretty(&t.to_json()))?;
        }
    }
    for (name, doc) in &artifacts.documents {
        out.write(&format!("{name}.json"), &pretty(doc))?;
    }
    if settings.format == Format::Svg {
        for (name, chart) in &artifacts.charts {
            out.write(&format!("{name}.svg"), &chart.render())?;
        }
    }
    Ok(out)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// `n` points spread evenly in `ln b` over `[b_min, b_max]`.
fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1).max(1) as f64).exp()).collect()
}

fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1).max(1) as f64).collect()
}

pub fn profile(
    model: &CopulaModel,
    b_range: (f64, f64),
    points: usize,
    settings: &Settings,
) -> Result<(Artifacts, Option<MtcmResult>), CliError> {
    let (b_min, b_max) = b_range;
    if !(b_min > 0.0 && b_min < b_max && b_max.is_finite() && points >= 2) {
        return Err(CliError::Parse(format!("need 0 < b-min < b-max and at least 2 points, got {b_min}, {b_max}, {points}")));
    }
    let stem = model.tag();
    let tail = TailCopulaFn::for_model(model);
    let values: Vec<(f64, f64)> = log_grid(b_min, b_max, points)
        .into_par_iter()
        .map(|b| tail.eval(b, 1.0 / b).map(|l| (b, l)))
        .collect::<tailpath::Result<_>>()
        .op("tail copula profile")?;

    let found = match mtcm(&tail, &settings.mtcm_options()) {
        Ok(r) => Some(r),
        Err(Error::DegenerateTail { max_profile, .. }) => {
            eprintln!("note: {model} has a degenerate tail copula (max {max_profile:e}); no b* marker");
            None
        }
        Err(e) => return Err(CliError::Numerical { op: "mtcm", source: e }),
    };

    let mut art = Artifacts::default();
    art.tables.push(Table::new(format!("{stem}_profile"), ["b", "lambda_profile"], values.iter().map(|&(b, l)| [b.into(), l.into()])));
    let marker: Vec<_> = found.iter().map(|r| [r.b_star.into(), r.lambda_star.into(), r.unique.into()]).collect();
    art.tables.push(Table::new(format!("{stem}_profile_marker"), ["b_star", "lambda_star", "unique"], marker));
    let mut series = vec![Series::new("Λ(b, 1/b)", Mark::Line, values)];
    if let Some(r) = &found {
        series.push(Series::new(format!("b* = {:.6}", r.b_star), Mark::Marker, vec![(r.b_star, r.lambda_star)]));
    }
    art.charts.push((
        format!("{stem}_profile"),
        Chart {
            title: format!("profile tail copula, {model}"),
            x_label: "b".into(),
            y_label: "Λ(b, 1/b)".into(),
            log_x: true,
            series,
            ..Default::default()
        },
    ));
    Ok((art, found))
}

pub fn mtcm_doc(model: &CopulaModel, bound: f64, settings: &Settings) -> Result<(Artifacts, MtcmResult), CliError> {
    let opts = MtcmOptions { bound, ..settings.mtcm_options() };
    let r = mtcm(&TailCopulaFn::for_model(model), &opts).op("mtcm")?;
    let mut art = Artifacts::default();
    art.documents.push((format!("{}_mtcm", model.tag()), json!(r)));
    Ok((art, r))
}

pub fn path(model: &CopulaModel, schedule: &Schedule, settings: &Settings) -> Result<(Artifacts, PathResult), CliError> {
    let r = trace_path(model, schedule, settings.grid, settings.tol_slice).op("trace_path")?;
    let stem = model.tag();
    let mut art = Artifacts::default();
    art.tables.push(Table::new(
        format!("{stem}_path"),
        ["u", "phi_star", "v_star", "pi", "pi_over_u", "ratio_b", "boundary_flag"],
        r.points.iter().map(|p| {
            [
                p.u.into(),
                p.phi_star.into(),
                p.v_star.into(),
                p.pi_value.into(),
                p.pi_over_u.into(),
                p.ratio_b.into(),
                p.argmax_at_boundary.into(),
            ]
        }),
    ));
    art.tables.push(Table::new(
        format!("{stem}_path_limits"),
        ["lambda_phi_star", "lambda_phi_star_error", "b_limit", "b_limit_error"],
        [[
            r.lambda_phi_star.value.into(),
            r.lambda_phi_star.error.into(),
            r.b_limit.value.into(),
            r.b_limit.error.into(),
        ]],
    ));
    let per_u = |f: fn(&tailpath::PathPoint) -> f64| r.points.iter().map(|p| (p.u, f(p))).collect::<Vec<_>>();
    art.charts.push((
        format!("{stem}_path_limits"),
        Chart {
            title: format!("path ratios, {model}"),
            x_label: "u".into(),
            y_label: "value".into(),
            log_x: true,
            series: vec![
                Series::new("Π(u)/u", Mark::Line, per_u(|p| p.pi_over_u)),
                Series::new("φ*(u)/u", Mark::Line, per_u(|p| p.ratio_b)),
            ],
            ..Default::default()
        },
    ));
    Ok((art, r))
}

/// Path and sample drawn together in the unit square.
fn overlay_chart(model: &CopulaModel, pairs: &[(f64, f64)], path: Option<&PathResult>, curve: Option<&[(f64, f64)]>) -> Chart {
    let mut series = vec![Series::new(format!("sample (n = {})", pairs.len()), Mark::Dots, pairs.to_vec())];
    if let Some(p) = path {
        series.push(Series::new("maximal path", Mark::Line, p.points.iter().map(|p| (p.phi_star, p.v_star)).collect()));
    }
    if let Some(c) = curve {
        series.push(Series::new("singular curve", Mark::Line, c.to_vec()));
    }
    Chart {
        title: model.to_string(),
        x_label: "u".into(),
        y_label: "v".into(),
        x_range: Some((0.0, 1.0)),
        y_range: Some((0.0, 1.0)),
        series,
        ..Default::default()
    }
}

pub fn sample_table(model: &CopulaModel, n: usize, settings: &Settings) -> Result<(Artifacts, Vec<(f64, f64)>), CliError> {
    let pairs = sample(model, n, settings.seed).op("sample")?;
    let stem = model.tag();
    let mut art = Artifacts::default();
    art.tables.push(Table::new(format!("{stem}_sample"), ["u", "v"], pairs.iter().map(|&(u, v)| [u.into(), v.into()])));
    art.charts.push((format!("{stem}_sample"), overlay_chart(model, &pairs, None, None)));
    Ok((art, pairs))
}

/// Marshall–Olkin shock parameters of a (survival) MO model.
fn mo_parameters(model: &CopulaModel) -> Option<(f64, f64)> {
    match model {
        CopulaModel::MarshallOlkin { alpha, beta } => Some((*alpha, *beta)),
        CopulaModel::Survival(inner) => mo_parameters(inner),
        _ => None,
    }
}

pub fn singular(model: &CopulaModel, schedule: &Schedule) -> Result<(Artifacts, Vec<(f64, f64)>), CliError> {
    let (alpha, beta) = mo_parameters(model)
        .ok_or_else(|| CliError::Parse(format!("singular needs a mo or smo model, got {model}")))?;
    let curve = singular_curve(alpha, beta, schedule).op("singular_curve")?;
    let stem = model.tag();
    let mut art = Artifacts::default();
    art.tables.push(Table::new(
        format!("{stem}_singular"),
        ["u", "x_star", "v_star", "ratio", "residual"],
        curve.iter().map(|p| [p.u.into(), p.x_star.into(), p.v_star.into(), p.ratio.into(), p.residual.into()]),
    ));
    art.charts.push((
        format!("{stem}_singular"),
        Chart {
            title: format!("singular curve ratio, {model}"),
            x_label: "u".into(),
            y_label: "x*/u".into(),
            log_x: true,
            series: vec![
                Series::new("x*/u", Mark::Line, curve.iter().map(|p| (p.u, p.ratio)).collect()),
                Series::new("sqrt(β/α)", Mark::Line, curve.iter().map(|p| (p.u, (beta / alpha).sqrt())).collect()),
            ],
            ..Default::default()
        },
    ));
    Ok((art, curve.iter().map(|p| (p.x_star, p.v_star)).collect()))
}

pub struct SpectralRanges {
    pub points: usize,
    pub a_max: f64,
    pub s_max: f64,
}

pub fn spectral(model: &CopulaModel, ranges: &SpectralRanges) -> Result<(Artifacts, String), CliError> {
    let CopulaModel::StudentT(t) = model else {
        return Err(CliError::Parse(format!("spectral needs a t model, got {model}")));
    };
    let n = ranges.points;
    if n < 2 || !(ranges.a_max > 0.0) || !(ranges.s_max > 0.0) {
        return Err(CliError::Parse("spectral needs at least 2 points and positive ranges".into()));
    }
    let sm = SpectralModel::new(t.nu(), t.rho()).op("spectral model")?;
    let ws: Vec<f64> = (1..=n).map(|k| k as f64 / (n + 1) as f64).collect();
    let eval = |xs: Vec<f64>, f: &(dyn Fn(f64) -> tailpath::Result<f64> + Sync)| {
        xs.into_par_iter().map(|x| f(x).map(|y| (x, y))).collect::<tailpath::Result<Vec<_>>>()
    };
    let h = eval(ws, &|w| sm.h_density(w)).op("spectral density")?;
    let m = eval(lin_grid(-ranges.a_max, ranges.a_max, n), &|a| sm.m_transform(a)).op("m transform")?;
    let l = eval(lin_grid(-ranges.s_max, ranges.s_max, n), &|s| sm.l_of_s(s)).op("L(s)")?;
    let summary = sm.summary().op("spectral mass")?;
    let argmax = sm.argmax_l(-ranges.s_max, ranges.s_max, DEFAULT_GRID, 1e-10).op("argmax L")?;

    let stem = model.tag();
    let mut art = Artifacts::default();
    let pairs = |name: &str, x: &'static str, y: &'static str, v: &[(f64, f64)]| {
        Table::new(format!("{stem}_spectral_{name}"), [x, y], v.iter().map(|&(a, b)| [a.into(), b.into()]))
    };
    art.tables.push(pairs("h", "w", "h", &h));
    art.tables.push(pairs("m", "a", "m", &m));
    art.tables.push(pairs("L", "s", "L", &l));
    art.documents.push((
        format!("{stem}_spectral_summary"),
        json!({
            "nu": summary.nu,
            "rho": summary.rho,
            "eta": summary.eta,
            "endpoint_mass": summary.endpoint_mass,
            "interior_mass": summary.interior_mass,
            "argmax_s": argmax.argmax,
            "max_l": argmax.max_value,
        }),
    ));
    for (name, x, y, v) in [("h", "w", "h(w)", h), ("m", "a", "m(a)", m), ("L", "s", "L(s)", l)] {
        art.charts.push((
            format!("{stem}_spectral_{name}"),
            Chart {
                title: format!("{y}, {model}"),
                x_label: x.into(),
                y_label: y.into(),
                series: vec![Series::new(y, Mark::Line, v)],
                ..Default::default()
            },
        ));
    }
    let text = format!(
        "interior mass {:.12}, endpoint mass {:.12}, argmax L at s = {:.3e} (L = {:.12})",
        summary.interior_mass, summary.endpoint_mass, argmax.argmax, argmax.max_value
    );
    Ok((art, text))
}

/// Levels for figure paths and curves: dense steps of 0.01 from 1 down to
/// 0.01 so the path can be drawn over a scatter plot, then ten per decade
/// down to `1e-4` for the ratio panels.
pub fn figure_schedule() -> Schedule {
    let mut us: Vec<f64> = (0..100).map(|k| 1.0 - k as f64 / 100.0).collect();
    us.extend((1..=20).map(|k| 10f64.powf(-2.0 - k as f64 / 10.0)));
    Schedule::new(us).expect("levels are decreasing in (0, 1]")
}

pub const FIGURE_SAMPLE_SIZE: usize = 5000;

/// The two models of the comparison figure, in output order.
pub fn figure_models() -> [CopulaModel; 2] {
    let (alpha, beta, theta) = (0.35, 0.7, 2.0);
    [
        CopulaModel::marshall_olkin(alpha, beta).expect("valid parameters").survival(),
        CopulaModel::asym_gumbel(alpha, beta, theta).expect("valid parameters").survival(),
    ]
}

pub fn figure(settings: &Settings) -> Result<(Artifacts, Vec<String>), CliError> {
    let schedule = settings.schedule.clone().unwrap_or_else(figure_schedule);
    let mut all = Artifacts::default();
    let mut lines = Vec::new();
    for model in figure_models() {
        let (art, m) = profile(&model, (1e-2, 1e2), 401, settings)?;
        all.extend(art);
        let m = m.ok_or_else(|| CliError::Numerical {
            op: "mtcm",
            source: Error::DegenerateTail { max_profile: 0.0, threshold: MtcmOptions::default().degeneracy_threshold },
        })?;
        all.documents.push((format!("{}_mtcm", model.tag()), json!(m)));
        let (art, p) = path(&model, &schedule, settings)?;
        all.extend(art);
        let (art, pairs) = sample_table(&model, FIGURE_SAMPLE_SIZE, settings)?;
        all.tables.extend(art.tables);
        let curve = if mo_parameters(&model).is_some() {
            let (art, curve) = singular(&model, &schedule)?;
            all.extend(art);
            Some(curve)
        } else {
            None
        };
        all.charts.push((format!("{}_scatter", model.tag()), overlay_chart(&model, &pairs, Some(&p), curve.as_deref())));
        lines.push(format!(
            "{model}: b* = {:.9}, λ* = {:.9}, λ_φ* = {:.6}, lim φ*/u = {:.6}",
            m.b_star, m.lambda_star, p.lambda_phi_star.value, p.b_limit.value
        ));
    }
    Ok((all, lines))
}

pub fn path_summary(model: &CopulaModel, r: &PathResult) -> String {
    let flagged = r.points.iter().filter(|p| p.argmax_at_boundary).count();
    format!(
        "{model}: λ_φ* = {:.9} ± {:.1e}, lim φ*(u)/u = {:.9} ± {:.1e}, {} levels, {flagged} boundary maximizers",
        r.lambda_phi_star.value,
        r.lambda_phi_star.error,
        r.b_limit.value,
        r.b_limit.error,
        r.points.len()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_schedule_reaches_small_levels() {
        let s = figure_schedule();
        assert_eq!(s.as_slice()[0], 1.0);
        assert!((s.smallest() - 1e-4).abs() < 1e-18);
        assert_eq!(s.len(), 120);
    }

    #[test]
    fn profile_marks_the_maximizer() {
        let model = CopulaModel::marshall_olkin(0.35, 0.7).unwrap().survival();
        let (art, m) = profile(&model, (0.1, 10.0), 21, &Settings::default()).unwrap();
        let m = m.unwrap();
        assert!((m.b_star - 2f64.sqrt()).abs() < 1e-6);
        assert_eq!(art.tables[0].rows.len(), 21);
        assert_eq!(art.tables[1].rows.len(), 1);
    }

    #[test]
    fn degenerate_profile_has_no_marker() {
        let (art, m) = profile(&CopulaModel::fgm(-1.0).unwrap(), (0.1, 10.0), 5, &Settings::default()).unwrap();
        assert!(m.is_none());
        assert!(art.tables[1].rows.is_empty());
    }

    #[test]
    fn singular_rejects_other_families() {
        let err = singular(&CopulaModel::Independence, &Schedule::default()).err().unwrap();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn log_grid_hits_both_ends() {
        let g = log_grid(0.01, 100.0, 5);
        assert!((g[0] - 0.01).abs() < 1e-15 && (g[4] - 100.0).abs() < 1e-12 && (g[2] - 1.0).abs() < 1e-15);
    }
}
