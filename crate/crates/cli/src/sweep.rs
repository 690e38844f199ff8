//! Sweep execution and CSV emission. Rows are computed in parallel and
//! written in grid order at full precision, so reruns of the same
//! configuration are byte-identical.

use rayon::prelude::*;

use specsqueeze_core::detection::{self, DetectionStrategy};
use specsqueeze_core::models::{NopaModel, VacuumModel};
use specsqueeze_core::optomech::{FrequencyGrid, OutputModel, SpectrumRoute};
use specsqueeze_core::spectral::{self, PowerSpectrum};
use specsqueeze_core::{log_negativity, Error};

use crate::config::{ModelChoice, RunConfig, SweepVariable};

pub struct SweepRow {
    pub x: f64,
    pub s: f64,
    pub s_min: f64,
    pub nu: f64,
    pub e_n: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    pub m: specsqueeze_core::linalg::C64,
    pub entangled: bool,
}

pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
    pub sweep_variable: &'static str,
}

fn build_model(choice: &ModelChoice) -> Result<Box<dyn PowerSpectrum>, Error> {
    match choice {
        ModelChoice::Optomech {
            params,
            matrix_route,
        } => {
            let route = if *matrix_route {
                SpectrumRoute::MatrixChain
            } else {
                SpectrumRoute::ClosedForm
            };
            Ok(Box::new(OutputModel::new(*params, route)?))
        }
        ModelChoice::Nopa { kappa, chi } => Ok(Box::new(NopaModel::new(*kappa, *chi)?)),
        ModelChoice::Vacuum => Ok(Box::new(VacuumModel)),
    }
}

fn row_at(
    model: &dyn PowerSpectrum,
    strategy: &DetectionStrategy,
    x: f64,
    omega: f64,
) -> Result<SweepRow, Error> {
    // At exactly ω = 0 the single-field sideband pair degenerates into one
    // self-conjugate mode; the plotted spectra are its continuum limit,
    // read off the duplicated-field entries.
    let c = match strategy {
        DetectionStrategy::SingleHomodyne { field } if omega == 0.0 => spectral::extract_nm(
            &specsqueeze_core::models::DuplicatedField {
                inner: model,
                field: *field,
            },
            0.0,
        )?,
        _ => detection::probe(model, strategy, omega)?,
    };
    let s_min = spectral::squeezing_s_min(&c);
    let nu = s_min;
    let e_n = log_negativity(s_min.max(1e-300))?;
    // Heterodyne measurements carry the image-band vacuum: the spectrum
    // columns report T = (S+1)/2, while ν and E_N remain those of the
    // probed cross-field pair.
    let (s_col, s_min_col) = if matches!(strategy, DetectionStrategy::Heterodyne { .. }) {
        detection::heterodyne_t(&c)
    } else {
        (spectral::squeezing_s(&c), s_min)
    };
    Ok(SweepRow {
        x,
        s: s_col,
        s_min: s_min_col,
        nu,
        e_n,
        n_plus: c.n_plus,
        n_minus: c.n_minus,
        m: c.m,
        entangled: spectral::is_entangled(&c),
    })
}

pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult, Error> {
    let model = build_model(&cfg.model)?;
    let mut warnings = cfg.strategy.check(model.signal_bandwidth())?;

    match cfg.sweep {
        SweepVariable::Omega => {
            let mut points =
                FrequencyGrid::uniform(cfg.grid_min, cfg.grid_max, cfg.grid_points)?.points;
            if cfg.insets {
                if let ModelChoice::Optomech { params, .. } = &cfg.model {
                    let dense = FrequencyGrid::reference(params).points;
                    points.extend(
                        dense
                            .into_iter()
                            .filter(|w| *w >= cfg.grid_min && *w <= cfg.grid_max),
                    );
                    points.sort_by(f64::total_cmp);
                    points.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
                }
            }
            let rows: Result<Vec<SweepRow>, Error> = points
                .par_iter()
                .map(|&w| row_at(model.as_ref(), &cfg.strategy, w, w))
                .collect();
            Ok(SweepResult {
                rows: rows?,
                warnings,
                sweep_variable: "omega",
            })
        }
        SweepVariable::MuRatio => {
            let (mu1_base, theta_c) = match cfg.strategy {
                DetectionStrategy::TwoModeHomodyne { mu1, theta_c, .. } => (mu1, theta_c),
                _ => unreachable!("validated by config"),
            };
            if mu1_base == 0.0 {
                warnings.push("mu1 = 0; ratio sweep uses mu1 = 1".into());
            }
            let step = (cfg.grid_max - cfg.grid_min) / (cfg.grid_points - 1) as f64;
            let ratios: Vec<f64> = (0..cfg.grid_points)
                .map(|i| cfg.grid_min + step * i as f64)
                .collect();
            let rows: Result<Vec<SweepRow>, Error> = ratios
                .par_iter()
                .map(|&r| {
                    let strat = DetectionStrategy::TwoModeHomodyne {
                        mu1: 1.0,
                        mu2: r,
                        theta_c,
                    };
                    row_at(model.as_ref(), &strat, r, cfg.omega_eval)
                })
                .collect();
            Ok(SweepResult {
                rows: rows?,
                warnings,
                sweep_variable: "mu_ratio",
            })
        }
    }
}

/// CSV at full f64 precision under the versioned schema header.
pub fn to_csv(cfg: &RunConfig, result: &SweepResult) -> String {
    let mut out = String::with_capacity(result.rows.len() * 200 + 256);
    out.push_str("# specsqueeze-csv v1\n");
    if let Some(p) = &cfg.preset {
        out.push_str(&format!("# preset: {p}\n"));
    }
    out.push_str(&format!("# sweep-variable: {}\n", result.sweep_variable));
    if let ModelChoice::Optomech { params, .. } = &cfg.model {
        out.push_str(&format!(
            "# model: optomech kappa1={:e} kappa2={:e} gamma={:e} omega_m={:e} delta={:e} g={:e} n_t={:e}\n",
            params.kappa1,
            params.kappa2,
            params.gamma,
            params.omega_m,
            params.delta,
            params.g,
            params.n_thermal
        ));
    }
    out.push_str("omega,S,S_min,nu,E_N,n_plus,n_minus,re_m,im_m,entangled\n");
    for r in &result.rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
            r.x,
            r.s,
            r.s_min,
            r.nu,
            r.e_n,
            r.n_plus,
            r.n_minus,
            r.m.re,
            r.m.im,
            u8::from(r.entangled)
        ));
    }
    out
}
