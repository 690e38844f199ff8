//! `specsqueeze`: squeezing and entanglement spectra of stationary
//! continuous-wave fields, with presets for the two-sided optomechanical
//! cavity scenarios.
//!
//! Exit codes: 0 success, 2 configuration error, 3 unstable model,
//! 4 validation failure.

mod config;
mod sweep;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use specsqueeze_core::optomech::{stability, OptomechanicalParams};
use specsqueeze_core::validate;
use specsqueeze_core::Error;

use config::{ConfigError, ModelChoice};

#[derive(Parser)]
#[command(
    name = "specsqueeze",
    about = "Squeezing spectra and logarithmic negativity of spectral components of stationary fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate squeezing/entanglement spectra over a grid and write CSV.
    Sweep {
        /// Flat key=value configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Scenario preset: fig4a, fig4b, fig4c or fig5.
        #[arg(long)]
        preset: Option<String>,
        /// Output CSV path (overrides config `out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override single keys, e.g. --set g=0.3 (repeatable; wins over
        /// the file).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// On an unstable model, print the drift eigenvalues instead of
        /// failing.
        #[arg(long)]
        allow_unstable: bool,
    },
    /// Run the library's invariant suite and report per-check residuals.
    Validate {
        /// Optional key=value file configuring the optomech model under
        /// test.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Test hook: corrupt a model and require the structure checks to
        /// catch it.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Render sweep CSV columns as an SVG line plot.
    Plot {
        /// Input CSV produced by `sweep`.
        #[arg(long)]
        csv: PathBuf,
        /// Comma-separated column names, e.g. S,nu.
        #[arg(long)]
        cols: String,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
        /// Add a zoom panel near --inset-center.
        #[arg(long)]
        inset: bool,
        #[arg(long, default_value_t = 1.0)]
        inset_center: f64,
        #[arg(long, default_value_t = 1e-3)]
        inset_halfwidth: f64,
    },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_UNSTABLE: u8 = 3;
const EXIT_VALIDATION: u8 = 4;

fn init_threads() {
    if let Ok(v) = std::env::var("SPECSQUEEZE_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                // Ignore failure: the global pool may already exist.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        } else {
            eprintln!("warning: SPECSQUEEZE_THREADS=`{v}` is not a number; using auto");
        }
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep {
            config,
            preset,
            out,
            overrides,
            allow_unstable,
        } => cmd_sweep(
            config.as_deref(),
            preset.as_deref(),
            out,
            &overrides,
            allow_unstable,
        ),
        Command::Validate {
            config,
            inject_fault,
        } => cmd_validate(config.as_deref(), inject_fault),
        Command::Plot {
            csv,
            cols,
            out,
            inset,
            inset_center,
            inset_halfwidth,
        } => cmd_plot(&csv, &cols, &out, inset, inset_center, inset_halfwidth),
    }
}

fn cmd_sweep(
    config: Option<&std::path::Path>,
    preset: Option<&str>,
    out: Option<PathBuf>,
    overrides: &[String],
    allow_unstable: bool,
) -> ExitCode {
    let mut cfg = match config::assemble(preset, config, overrides) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    if let Some(path) = out {
        cfg.out = path.display().to_string();
    }

    if let ModelChoice::Optomech { params, .. } = &cfg.model {
        match stability(params) {
            Ok(s) if s.stable => {}
            Ok(s) => {
                if allow_unstable {
                    println!("model unstable: max Re(eigenvalue) = {:.6e}", s.max_real);
                    for (k, ev) in s.eigenvalues.iter().enumerate() {
                        println!("eigenvalue {k}: {:+.9e} {:+.9e}i", ev.re, ev.im);
                    }
                    return ExitCode::SUCCESS;
                }
                return fail(
                    EXIT_UNSTABLE,
                    format!(
                        "model unstable (max Re eigenvalue {:.6e}); rerun with --allow-unstable \
                         for diagnostics",
                        s.max_real
                    ),
                );
            }
            Err(e) => return fail(EXIT_UNSTABLE, e),
        }
    }

    let result = match sweep::run_sweep(&cfg) {
        Ok(r) => r,
        Err(Error::Unstable(m)) => {
            return fail(EXIT_UNSTABLE, format!("model unstable (margin {m:.3e})"))
        }
        Err(e @ Error::Domain(_)) | Err(e @ Error::UnknownPreset(_)) => {
            return fail(EXIT_CONFIG, e)
        }
        Err(e) => return fail(EXIT_VALIDATION, e),
    };
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    let csv = sweep::to_csv(&cfg, &result);
    if let Err(e) = std::fs::write(&cfg.out, csv) {
        return fail(EXIT_CONFIG, format!("cannot write {}: {e}", cfg.out));
    }
    println!("wrote {} rows to {}", result.rows.len(), cfg.out);
    ExitCode::SUCCESS
}

fn cmd_validate(config: Option<&std::path::Path>, inject_fault: bool) -> ExitCode {
    let params = match config {
        None => OptomechanicalParams::reference(0.3),
        Some(path) => {
            let cfg = match config::parse_file(path)
                .map_err(|e| e.0)
                .and_then(|map| {
                    config::apply(config::RunConfig::default(), &map).map_err(|e| e.0)
                }) {
                Ok(c) => c,
                Err(e) => return fail(EXIT_CONFIG, ConfigError(e)),
            };
            match cfg.model {
                ModelChoice::Optomech { params, .. } => params,
                _ => {
                    return fail(
                        EXIT_CONFIG,
                        "validate requires an optomech model configuration",
                    )
                }
            }
        }
    };

    let mut report = validate::run_all(&params);
    if inject_fault {
        // Invert the detector check: corrupt a model and demand the
        // symplectic identity fails loudly.
        let bad = specsqueeze_core::spectral::CorruptedModel {
            inner: specsqueeze_core::models::NopaModel::new(1.0, 0.5).expect("below threshold"),
            row: 0,
            col: 2,
            factor: 1.1,
        };
        let residual = specsqueeze_core::check_symplectic_identity(&bad, 0.3);
        report.checks.push(validate::Check {
            name: "fault injection: corrupted model symplectic residual (expected to fail)".into(),
            residual,
            threshold: 1e-9,
            passed: residual <= 1e-9,
        });
    }

    for c in &report.checks {
        println!(
            "{} {} (residual {:.3e}, threshold {:.3e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.threshold
        );
    }
    if report.passed() {
        println!("all {} checks passed", report.checks.len());
        ExitCode::SUCCESS
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        eprintln!("error: {failed} validation check(s) failed");
        ExitCode::from(EXIT_VALIDATION)
    }
}

fn cmd_plot(
    csv: &std::path::Path,
    cols: &str,
    out: &std::path::Path,
    inset: bool,
    inset_center: f64,
    inset_halfwidth: f64,
) -> ExitCode {
    let data = match svg::read_csv(csv) {
        Ok(d) => d,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let names: Vec<&str> = cols.split(',').map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    let opts = svg::PlotOptions {
        inset,
        inset_center,
        inset_halfwidth,
    };
    let rendered = match svg::render(&data, &names, &opts) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    if let Err(e) = std::fs::write(out, rendered) {
        return fail(EXIT_CONFIG, format!("cannot write {}: {e}", out.display()));
    }
    println!("wrote {}", out.display());
    ExitCode::SUCCESS
}
