//! `tailpath`: tail-dependence profiles, maximal paths, spectral curves,
//! samples and self-checks from the command line.
//!
//! Every command writes CSV tables into `--out` (plus JSON or SVG copies on
//! request) and prints a short summary on stdout. Exit status is 0 on
//! success, 1 when a verification check fails, 2 for malformed input and 3
//! when a numerical routine fails.

mod commands;
mod error;
mod model_spec;
mod output;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tailpath::{CopulaModel, EquivalenceBudget, Schedule};

use commands::{Format, Settings, SpectralRanges};
use error::CliError;
use verify::{Suite, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "tailpath", version, about = "Maximal tail dependence and paths of maximal dependence for bivariate copulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Directory receiving the output files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Extra output next to the CSV tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Seed for sampling.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Decreasing u levels in (0, 1] as a comma list, or `default`
    /// (two per decade from 1e-1 to 1e-4).
    #[arg(long, global = true)]
    schedule: Option<Schedule>,

    /// Grid size for the slice and profile scans.
    #[arg(long, global = true, default_value_t = tailpath::special_math::DEFAULT_GRID)]
    grid: usize,

    /// Absolute tolerance on ln x when refining slice maximizers.
    #[arg(long, global = true, default_value_t = tailpath::path::DEFAULT_SLICE_TOL)]
    tol_slice: f64,

    /// Absolute tolerance on ln b when refining the MTCM maximizer.
    #[arg(long, global = true, default_value_t = tailpath::MtcmOptions::default().tol)]
    tol_mtcm: f64,

    /// Allowed gap between the path-based TDC and the MTCM.
    #[arg(long, global = true, default_value_t = EquivalenceBudget::default().lambda)]
    tol_lambda: f64,

    /// Allowed gap between lim φ*(u)/u and b*.
    #[arg(long, global = true, default_value_t = EquivalenceBudget::default().b)]
    tol_b: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Profile tail copula b ↦ Λ(b, 1/b) with its maximizer marked.
    Profile {
        #[arg(long, value_parser = model_spec::parse_model)]
        model: CopulaModel,
        #[arg(long, default_value_t = 1e-2)]
        b_min: f64,
        #[arg(long, default_value_t = 1e2)]
        b_max: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// Maximal tail concordance: b*, λ*, uniqueness, evaluation count (JSON).
    Mtcm {
        #[arg(long, value_parser = model_spec::parse_model)]
        model: CopulaModel,
        /// Initial search bracket [1/L, L] for b.
        #[arg(long, default_value_t = 1e3)]
        bound: f64,
    },
    /// Path of maximal dependence over the schedule.
    Path {
        #[arg(long, value_parser = model_spec::parse_model)]
        model: CopulaModel,
    },
    /// Spectral density h, the transform m and L(s) of a t model.
    Spectral {
        #[arg(long, value_parser = model_spec::parse_model)]
        model: CopulaModel,
        #[arg(long, default_value_t = 401)]
        points: usize,
        #[arg(long, default_value_t = 10.0)]
        a_max: f64,
        #[arg(long, default_value_t = 5.0)]
        s_max: f64,
    },
    /// Singular curve of a (survival) Marshall–Olkin model over the schedule.
    Singular {
        #[arg(long, value_parser = model_spec::parse_model)]
        model: CopulaModel,
    },
    /// Random pairs from a model.
    Sample {
        #[arg(long, value_parser = model_spec::parse_model)]
        model: CopulaModel,
        #[arg(long, default_value_t = 5000)]
        n: usize,
    },
    /// All data behind the smo/sag comparison figure (α = 0.35, β = 0.7, θ = 2).
    Figure,
    /// Run self-checks and report one line each.
    Verify {
        #[arg(long, value_enum, num_args = 1.., default_value = "all")]
        suite: Vec<Suite>,
    },
}

fn settings(c: &Common) -> Settings {
    Settings {
        out: c.out.clone(),
        format: c.format,
        seed: c.seed,
        schedule: c.schedule.clone(),
        grid: c.grid,
        tol_slice: c.tol_slice,
        tol_mtcm: c.tol_mtcm,
        budget: EquivalenceBudget { lambda: c.tol_lambda, b: c.tol_b },
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("TAILPATH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Parse(format!("TAILPATH_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Parse(format!("cannot size the thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let s = settings(&cli.common);
    if s.grid < 3 {
        return Err(CliError::Parse(format!("--grid must be at least 3, got {}", s.grid)));
    }
    match cli.command {
        Command::Profile { model, b_min, b_max, points } => {
            let (art, m) = commands::profile(&model, (b_min, b_max), points, &s)?;
            commands::emit(&art, &s)?.report();
            match m {
                Some(m) => println!("{model}: b* = {:.12}, λ* = {:.12}", m.b_star, m.lambda_star),
                None => println!("{model}: degenerate tail copula"),
            }
        }
        Command::Mtcm { model, bound } => {
            let (art, m) = commands::mtcm_doc(&model, bound, &s)?;
            commands::emit(&art, &s)?.report();
            println!("{}", serde_json::to_string_pretty(&m).expect("result serializes"));
        }
        Command::Path { model } => {
            let (art, r) = commands::path(&model, &s.schedule_or_default(), &s)?;
            commands::emit(&art, &s)?.report();
            println!("{}", commands::path_summary(&model, &r));
            if let Some(f) = r.failures.first() {
                for f in &r.failures {
                    eprintln!("slice at u = {} failed: {}", f.u, f.message);
                }
                return Err(CliError::Numerical {
                    op: "maximize_slice",
                    source: tailpath::Error::NoConvergence {
                        op: "maximize_slice",
                        detail: format!("{} of the levels failed, first at u = {}", r.failures.len(), f.u),
                    },
                });
            }
        }
        Command::Spectral { model, points, a_max, s_max } => {
            let (art, text) = commands::spectral(&model, &SpectralRanges { points, a_max, s_max })?;
            commands::emit(&art, &s)?.report();
            println!("{model}: {text}");
        }
        Command::Singular { model } => {
            let (art, _) = commands::singular(&model, &s.schedule_or_default())?;
            commands::emit(&art, &s)?.report();
        }
        Command::Sample { model, n } => {
            let (art, _) = commands::sample_table(&model, n, &s)?;
            commands::emit(&art, &s)?.report();
        }
        Command::Figure => {
            let (art, lines) = commands::figure(&s)?;
            commands::emit(&art, &s)?.report();
            for l in lines {
                println!("{l}");
            }
        }
        Command::Verify { suite } => {
            let cfg = VerifyConfig {
                schedule: s.schedule_or_default(),
                grid: s.grid,
                tol_slice: s.tol_slice,
                budget: s.budget,
            };
            let checks = verify::run(&suite, &cfg);
            let failed = checks.iter().filter(|c| !c.pass).count();
            for c in &checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                println!("{status} {}: {} ({})", c.suite, c.name, c.detail);
            }
            println!("{} passed, {failed} failed", checks.len() - failed);
            if failed > 0 {
                return Err(CliError::Verification { failed, total: checks.len() });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on its own for usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
