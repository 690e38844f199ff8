//! Run configuration: a flat key=value file, scenario presets, and CLI
//! overrides (overrides win). Frequencies are in units of ω_m unless
//! `units=si` selects Hz with a mandatory `omega_m_hz` anchor.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use specsqueeze_core::models::FieldIndex;
use specsqueeze_core::optomech::OptomechanicalParams;
use specsqueeze_core::DetectionStrategy;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Which spectrum model the sweep evaluates.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelChoice {
    Optomech {
        params: OptomechanicalParams,
        matrix_route: bool,
    },
    Nopa {
        kappa: f64,
        chi: f64,
    },
    Vacuum,
}

/// The variable the CSV rows scan over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Omega,
    MuRatio,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub model: ModelChoice,
    pub strategy: DetectionStrategy,
    pub sweep: SweepVariable,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    /// Add the log-dense insets near ±ω_m (optomech sweeps only).
    pub insets: bool,
    /// Fixed frequency for μ-ratio sweeps.
    pub omega_eval: f64,
    pub out: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: None,
            model: ModelChoice::Optomech {
                params: OptomechanicalParams::reference(0.3),
                matrix_route: false,
            },
            strategy: DetectionStrategy::SingleHomodyne {
                field: FieldIndex::One,
            },
            sweep: SweepVariable::Omega,
            grid_min: -2.0,
            grid_max: 2.0,
            grid_points: 2001,
            insets: true,
            omega_eval: 0.0,
            out: "sweep.csv".into(),
        }
    }
}

/// Scenario presets reproducing the reference figures: the two-sided cavity
/// at κ2/κ1 = 0, 0.3, 1 scanned in frequency, and the collective-weight
/// scan at ω = 0.
pub fn scenario_preset(name: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig {
        preset: Some(name.to_string()),
        ..RunConfig::default()
    };
    match name {
        "fig4a" => {
            cfg.model = ModelChoice::Optomech {
                params: OptomechanicalParams::reference(0.0),
                matrix_route: false,
            };
        }
        "fig4b" => {
            cfg.model = ModelChoice::Optomech {
                params: OptomechanicalParams::reference(0.3),
                matrix_route: false,
            };
        }
        "fig4c" => {
            cfg.model = ModelChoice::Optomech {
                params: OptomechanicalParams::reference(1.0),
                matrix_route: false,
            };
            cfg.strategy = DetectionStrategy::TwoModeHomodyne {
                mu1: 1.0,
                mu2: 1.0,
                theta_c: 0.0,
            };
        }
        "fig5" => {
            cfg.model = ModelChoice::Optomech {
                params: OptomechanicalParams::reference(0.3),
                matrix_route: false,
            };
            cfg.strategy = DetectionStrategy::TwoModeHomodyne {
                mu1: 1.0,
                mu2: 1.0,
                theta_c: 0.0,
            };
            cfg.sweep = SweepVariable::MuRatio;
            cfg.grid_min = 0.0;
            cfg.grid_max = 3.0;
            cfg.grid_points = 601;
            cfg.omega_eval = 0.0;
            cfg.insets = false;
        }
        other => return Err(ConfigError(format!("unknown preset `{other}`"))),
    }
    Ok(cfg)
}

/// Parse a flat key=value file. Lines starting with `#` and blank lines
/// are ignored.
pub fn parse_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
    parse_pairs(text.lines())
}

pub fn parse_pairs<'a>(
    lines: impl Iterator<Item = &'a str>,
) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in lines.enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| err(format!("line {}: expected key=value, got `{line}`", lineno + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn get_f64(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<f64>()
            .map(Some)
            .map_err(|_| err(format!("key `{key}`: `{v}` is not a number"))),
    }
}

fn get_usize(map: &BTreeMap<String, String>, key: &str) -> Result<Option<usize>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| err(format!("key `{key}`: `{v}` is not a positive integer"))),
    }
}

fn get_bool(map: &BTreeMap<String, String>, key: &str) -> Result<Option<bool>, ConfigError> {
    match map.get(key).map(|s| s.as_str()) {
        None => Ok(None),
        Some("true") | Some("1") | Some("yes") => Ok(Some(true)),
        Some("false") | Some("0") | Some("no") => Ok(Some(false)),
        Some(v) => Err(err(format!("key `{key}`: `{v}` is not a boolean"))),
    }
}

const KNOWN_KEYS: &[&str] = &[
    "model", "route", "kappa1", "kappa2", "gamma", "omega_m", "delta", "g", "n_t", "nopa_kappa",
    "nopa_chi", "strategy", "field", "mu1", "mu2", "theta_c", "detuning", "grid_min", "grid_max",
    "grid_points", "insets", "sweep_variable", "omega_eval", "units", "omega_m_hz", "out",
];

/// Apply a key=value map on top of a base configuration.
pub fn apply(mut cfg: RunConfig, map: &BTreeMap<String, String>) -> Result<RunConfig, ConfigError> {
    for key in map.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(err(format!("unknown key `{key}`")));
        }
    }

    // Unit handling: with units=si every rate/frequency key is in Hz and is
    // normalized by omega_m_hz.
    let unit_scale = match map.get("units").map(|s| s.as_str()) {
        None | Some("omega_m") => 1.0,
        Some("si") => {
            let anchor = get_f64(map, "omega_m_hz")?
                .ok_or_else(|| err("units=si requires omega_m_hz"))?;
            if anchor <= 0.0 {
                return Err(err("omega_m_hz must be positive"));
            }
            1.0 / anchor
        }
        Some(other) => return Err(err(format!("units must be omega_m or si, got `{other}`"))),
    };
    let freq =
        |v: Option<f64>| -> Option<f64> { v.map(|x| x * unit_scale) };

    // Model selection: at most one model key group.
    let wants_nopa = map.contains_key("nopa_kappa") || map.contains_key("nopa_chi");
    match map.get("model").map(|s| s.as_str()) {
        Some("optomech") | None if !wants_nopa => {
            let (mut params, mut matrix_route) = match &cfg.model {
                ModelChoice::Optomech {
                    params,
                    matrix_route,
                } => (*params, *matrix_route),
                _ => (OptomechanicalParams::reference(0.3), false),
            };
            if let Some(v) = freq(get_f64(map, "kappa1")?) {
                params.kappa1 = v;
            }
            if let Some(v) = freq(get_f64(map, "kappa2")?) {
                params.kappa2 = v;
            }
            if let Some(v) = freq(get_f64(map, "gamma")?) {
                params.gamma = v;
            }
            if let Some(v) = get_f64(map, "omega_m")? {
                params.omega_m = v;
            }
            if let Some(v) = freq(get_f64(map, "delta")?) {
                params.delta = v;
            }
            if let Some(v) = freq(get_f64(map, "g")?) {
                params.g = v;
            }
            if let Some(v) = get_f64(map, "n_t")? {
                params.n_thermal = v;
            }
            match map.get("route").map(|s| s.as_str()) {
                None => {}
                Some("closed") => matrix_route = false,
                Some("matrix") => matrix_route = true,
                Some(other) => {
                    return Err(err(format!("route must be closed or matrix, got `{other}`")))
                }
            }
            // Round-trip through the validating constructor.
            let params = OptomechanicalParams::new(
                params.kappa1,
                params.kappa2,
                params.gamma,
                params.omega_m,
                params.delta,
                params.g,
                params.n_thermal,
            )
            .map_err(|e| err(e.to_string()))?;
            cfg.model = ModelChoice::Optomech {
                params,
                matrix_route,
            };
        }
        Some("nopa") | None => {
            let kappa = freq(get_f64(map, "nopa_kappa")?).unwrap_or(1.0);
            let chi = freq(get_f64(map, "nopa_chi")?).unwrap_or(0.5);
            cfg.model = ModelChoice::Nopa { kappa, chi };
        }
        Some("vacuum") => {
            cfg.model = ModelChoice::Vacuum;
        }
        Some("optomech") => {
            return Err(err("model=optomech conflicts with nopa_* keys"));
        }
        Some(other) => {
            return Err(err(format!(
                "model must be optomech, nopa or vacuum, got `{other}`"
            )))
        }
    }

    // Detection strategy.
    let field = match get_usize(map, "field")? {
        None => FieldIndex::One,
        Some(1) => FieldIndex::One,
        Some(2) => FieldIndex::Two,
        Some(other) => return Err(err(format!("field must be 1 or 2, got {other}"))),
    };
    if let Some(s) = map.get("strategy") {
        cfg.strategy = match s.as_str() {
            "I" | "i" => DetectionStrategy::SingleHomodyne { field },
            "II" | "ii" => DetectionStrategy::TwoModeHomodyne {
                mu1: get_f64(map, "mu1")?.unwrap_or(1.0),
                mu2: get_f64(map, "mu2")?.unwrap_or(1.0),
                theta_c: get_f64(map, "theta_c")?.unwrap_or(0.0),
            },
            "III" | "iii" => DetectionStrategy::CrossField,
            "heterodyne" => DetectionStrategy::Heterodyne {
                detuning: freq(get_f64(map, "detuning")?).unwrap_or(100.0),
            },
            other => {
                return Err(err(format!(
                    "strategy must be I, II, III or heterodyne, got `{other}`"
                )))
            }
        };
    } else if let DetectionStrategy::TwoModeHomodyne { mu1, mu2, theta_c } = &mut cfg.strategy {
        if let Some(v) = get_f64(map, "mu1")? {
            *mu1 = v;
        }
        if let Some(v) = get_f64(map, "mu2")? {
            *mu2 = v;
        }
        if let Some(v) = get_f64(map, "theta_c")? {
            *theta_c = v;
        }
    }

    if let Some(v) = map.get("sweep_variable") {
        cfg.sweep = match v.as_str() {
            "omega" => SweepVariable::Omega,
            "mu_ratio" => SweepVariable::MuRatio,
            other => {
                return Err(err(format!(
                    "sweep_variable must be omega or mu_ratio, got `{other}`"
                )))
            }
        };
    }
    if let Some(v) = freq(get_f64(map, "grid_min")?) {
        cfg.grid_min = v;
    }
    if let Some(v) = freq(get_f64(map, "grid_max")?) {
        cfg.grid_max = v;
    }
    if let Some(v) = get_usize(map, "grid_points")? {
        cfg.grid_points = v;
    }
    if let Some(v) = get_bool(map, "insets")? {
        cfg.insets = v;
    }
    if let Some(v) = freq(get_f64(map, "omega_eval")?) {
        cfg.omega_eval = v;
    }
    if let Some(v) = map.get("out") {
        cfg.out = v.clone();
    }

    validate_shape(&cfg)?;
    Ok(cfg)
}

fn validate_shape(cfg: &RunConfig) -> Result<(), ConfigError> {
    if cfg.grid_min.is_nan() || cfg.grid_max.is_nan() || cfg.grid_min >= cfg.grid_max {
        return Err(err(format!(
            "grid min {} must be below grid max {}",
            cfg.grid_min, cfg.grid_max
        )));
    }
    if cfg.grid_points < 2 {
        return Err(err("grid needs at least 2 points"));
    }
    if cfg.sweep == SweepVariable::MuRatio {
        if !matches!(cfg.model, ModelChoice::Optomech { .. }) {
            return Err(err("mu_ratio sweeps require the optomech model"));
        }
        if !matches!(cfg.strategy, DetectionStrategy::TwoModeHomodyne { .. }) {
            return Err(err("mu_ratio sweeps require strategy II"));
        }
        if cfg.grid_min < 0.0 {
            return Err(err("mu ratios must be non-negative"));
        }
    }
    if let ModelChoice::Nopa { kappa, chi } = cfg.model {
        if chi.abs() >= kappa {
            return Err(err(format!(
                "parametric model above threshold: |chi| = {} >= kappa = {kappa}",
                chi.abs()
            )));
        }
    }
    Ok(())
}

/// Assemble the effective configuration from an optional preset, an
/// optional file, and `--set` overrides (strongest last).
pub fn assemble(
    preset: Option<&str>,
    file: Option<&Path>,
    overrides: &[String],
) -> Result<RunConfig, ConfigError> {
    let mut cfg = match preset {
        Some(name) => scenario_preset(name)?,
        None => RunConfig::default(),
    };
    if let Some(path) = file {
        cfg = apply(cfg, &parse_file(path)?)?;
    }
    if !overrides.is_empty() {
        let joined: Vec<&str> = overrides.iter().map(|s| s.as_str()).collect();
        cfg = apply(cfg, &parse_pairs(joined.into_iter())?)?;
    }
    validate_shape(&cfg)?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_fig4c_uses_balanced_collective_mode() {
        let cfg = scenario_preset("fig4c").unwrap();
        assert_eq!(
            cfg.strategy,
            DetectionStrategy::TwoModeHomodyne {
                mu1: 1.0,
                mu2: 1.0,
                theta_c: 0.0
            }
        );
        match cfg.model {
            ModelChoice::Optomech { params, .. } => {
                assert!((params.kappa1 - params.kappa2).abs() < 1e-15);
                assert!((params.kappa() - 0.1).abs() < 1e-15);
            }
            _ => panic!("optomech preset"),
        }
    }

    #[test]
    fn unknown_preset_rejected() {
        assert!(scenario_preset("fig9").is_err());
    }

    #[test]
    fn overrides_win_over_file_values() {
        let file = parse_pairs(["g = 0.25", "# comment", "", "kappa1 = 0.02"].into_iter()).unwrap();
        let cfg = apply(RunConfig::default(), &file).unwrap();
        let cfg = apply(cfg, &parse_pairs(["g=0.75"].into_iter()).unwrap()).unwrap();
        match cfg.model {
            ModelChoice::Optomech { params, .. } => {
                assert_eq!(params.g, 0.75);
                assert_eq!(params.kappa1, 0.02);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn si_units_normalize_by_anchor() {
        let map = parse_pairs(
            ["units=si", "omega_m_hz=1e6", "kappa1=5e4", "g=5e5", "grid_max=3e6"].into_iter(),
        )
        .unwrap();
        let cfg = apply(RunConfig::default(), &map).unwrap();
        match cfg.model {
            ModelChoice::Optomech { params, .. } => {
                assert!((params.kappa1 - 0.05).abs() < 1e-12);
                assert!((params.g - 0.5).abs() < 1e-12);
            }
            _ => panic!(),
        }
        assert!((cfg.grid_max - 3.0).abs() < 1e-12);
        assert!(apply(
            RunConfig::default(),
            &parse_pairs(["units=si"].into_iter()).unwrap()
        )
        .is_err());
    }

    #[test]
    fn shape_validation() {
        let bad = parse_pairs(["grid_min=2", "grid_max=-2"].into_iter()).unwrap();
        assert!(apply(RunConfig::default(), &bad).is_err());
        let bad = parse_pairs(["grid_points=1"].into_iter()).unwrap();
        assert!(apply(RunConfig::default(), &bad).is_err());
        let bad = parse_pairs(["bogus_key=1"].into_iter()).unwrap();
        assert!(apply(RunConfig::default(), &bad).is_err());
        let bad = parse_pairs(["model=nopa", "nopa_kappa=1", "nopa_chi=2"].into_iter()).unwrap();
        assert!(apply(RunConfig::default(), &bad).is_err());
    }
}
