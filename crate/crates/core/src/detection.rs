//! Virtual homodyne/heterodyne detectors: maps from measurement
//! configurations to the spectral-correlation triple (n+, n-, m) actually
//! probed.
//!
//! Three strategies are distinguished. (I) single-field homodyne probes the
//! sidebands ±ε of one field; (II) two-field homodyne with summed
//! photocurrents probes collective modes weighted by (μ1, μ2) and the
//! relative local-oscillator phase θ_c; (III) combined single-component
//! photocurrents probe the cross-field pair a1(ε), a2(-ε). Heterodyne
//! detection probes the same pair as (III) with a half-vacuum penalty.


use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::models::FieldIndex;
use crate::spectral::{extract_nm, PowerSpectrum, TwoModeSpectralCorrelation};

/// Measurement configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum DetectionStrategy {
    /// Homodyne of a single field; probes its own sidebands ±ε.
    SingleHomodyne { field: FieldIndex },
    /// Summed homodyne photocurrents of both fields with weights μ and
    /// relative local-oscillator phase θ_c = (θ1 - θ2)/2.
    TwoModeHomodyne { mu1: f64, mu2: f64, theta_c: f64 },
    /// Single spectral components of each field, combined: a1(ε), a2(-ε).
    CrossField,
    /// Heterodyne with local-oscillator detuning Δ; probes the same pair as
    /// `CrossField` plus the vacuum of the image bands.
    Heterodyne { detuning: f64 },
}

impl DetectionStrategy {
    /// Validate against a model; returns advisory warnings (the heterodyne
    /// detuning should dominate the signal bandwidth by a decade).
    pub fn check(&self, signal_bandwidth: f64) -> Result<Vec<String>> {
        match self {
            DetectionStrategy::TwoModeHomodyne { mu1, mu2, .. } => {
                if mu1 * mu1 + mu2 * mu2 == 0.0 {
                    return Err(Error::Domain("collective weights μ1 = μ2 = 0".into()));
                }
                Ok(Vec::new())
            }
            DetectionStrategy::Heterodyne { detuning } => {
                if detuning.abs() < 10.0 * signal_bandwidth {
                    Ok(vec![format!(
                        "heterodyne detuning |Δ| = {:.3e} is below 10x the signal bandwidth {:.3e}; \
                         image-band vacuum assumption is marginal",
                        detuning.abs(),
                        signal_bandwidth
                    )])
                } else {
                    Ok(Vec::new())
                }
            }
            _ => Ok(Vec::new()),
        }
    }
}

/// Composite-quadrature parameters carried by the sum of two filtered
/// photocurrents taken at local-oscillator phases (θ, θ') and filter phases
/// (φ, φ').
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotocurrentCombination {
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub xi_plus: f64,
    pub xi_minus: f64,
}

/// θ± = [θ + θ' ± (φ + φ')]/2 and ξ± = cos{[θ - θ' ± (φ - φ')]/2}.
pub fn photocurrent_combination(
    theta: f64,
    theta_p: f64,
    phi: f64,
    phi_p: f64,
) -> PhotocurrentCombination {
    PhotocurrentCombination {
        theta_plus: 0.5 * (theta + theta_p + (phi + phi_p)),
        theta_minus: 0.5 * (theta + theta_p - (phi + phi_p)),
        xi_plus: (0.5 * (theta - theta_p + (phi - phi_p))).cos(),
        xi_minus: (0.5 * (theta - theta_p - (phi - phi_p))).cos(),
    }
}

fn population(z: C64, what: &str) -> Result<f64> {
    if z.im.abs() > 1e-7 {
        return Err(Error::NonPhysical(format!(
            "{what} has imaginary residue {:.3e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Strategy I: sidebands ±ε of a single field.
pub fn strategy_i_nm(
    model: &dyn PowerSpectrum,
    field: FieldIndex,
    epsilon: f64,
) -> Result<TwoModeSpectralCorrelation> {
    if epsilon == 0.0 {
        return Err(Error::DegenerateFrequency);
    }
    let j = field.offset();
    let p_pos = model.eval(epsilon);
    let p_neg = model.eval(-epsilon);
    let n_plus = population(p_neg[(2 + j, j)], "n+")?;
    let n_minus = population(p_pos[(2 + j, j)], "n-")?;
    TwoModeSpectralCorrelation::new(n_plus, n_minus, p_pos[(j, j)])
}

/// Strategy II: collective modes c(±ε) built from both fields with weights
/// (μ1, μ2) and phase θ_c, expanded directly from the collective-operator
/// bilinears.
pub fn strategy_ii_nm(
    model: &dyn PowerSpectrum,
    epsilon: f64,
    mu1: f64,
    mu2: f64,
    theta_c: f64,
) -> Result<TwoModeSpectralCorrelation> {
    let norm = mu1 * mu1 + mu2 * mu2;
    if norm == 0.0 {
        return Err(Error::Domain("collective weights μ1 = μ2 = 0".into()));
    }
    let p_pos = model.eval(epsilon);
    let p_neg = model.eval(-epsilon);
    let e2i = C64::from_polar(1.0, 2.0 * theta_c);
    let e2i_c = e2i.conj();
    let [m1s, m2s, m12] = [mu1 * mu1, mu2 * mu2, mu1 * mu2];

    // v±^{jk} = ⟨a_j†(∓ε) a_k(±ε)⟩, w^{jk} = ⟨a_j(ε) a_k(-ε)⟩.
    let v = |p: &crate::linalg::CMat4, j: usize, k: usize| p[(2 + j, k)];
    let n_plus = population(
        (v(&p_neg, 0, 0) * crate::linalg::cr(m1s)
            + v(&p_neg, 1, 1) * crate::linalg::cr(m2s)
            + (e2i * v(&p_neg, 1, 0) + e2i_c * v(&p_neg, 0, 1)) * crate::linalg::cr(m12))
            / crate::linalg::cr(norm),
        "collective n+",
    )?;
    let n_minus = population(
        (v(&p_pos, 0, 0) * crate::linalg::cr(m1s)
            + v(&p_pos, 1, 1) * crate::linalg::cr(m2s)
            + (e2i * v(&p_pos, 1, 0) + e2i_c * v(&p_pos, 0, 1)) * crate::linalg::cr(m12))
            / crate::linalg::cr(norm),
        "collective n-",
    )?;
    let m = (e2i * p_pos[(0, 0)] * crate::linalg::cr(m1s)
        + e2i_c * p_pos[(1, 1)] * crate::linalg::cr(m2s)
        + (p_pos[(0, 1)] + p_pos[(1, 0)]) * crate::linalg::cr(m12))
        / crate::linalg::cr(norm);
    TwoModeSpectralCorrelation::new(n_plus, n_minus, m)
}

/// Residual of the collective commutator [c(ε), c†(-ε)] - 1, assembled from
/// the same bilinears plus the model's vacuum terms.
pub fn collective_commutator_residual(
    model: &dyn PowerSpectrum,
    epsilon: f64,
    mu1: f64,
    mu2: f64,
    theta_c: f64,
) -> f64 {
    let norm = mu1 * mu1 + mu2 * mu2;
    let p_pos = model.eval(epsilon);
    let p_neg = model.eval(-epsilon);
    let e2i = C64::from_polar(1.0, 2.0 * theta_c);
    // ⟨c(ε) c†(-ε)⟩ from u^{jk} = {P(ε)}_{j,2+k}.
    let u = |j: usize, k: usize| p_pos[(j, 2 + k)];
    let anti = (u(0, 0) * crate::linalg::cr(mu1 * mu1)
        + u(1, 1) * crate::linalg::cr(mu2 * mu2)
        + (e2i * u(0, 1) + e2i.conj() * u(1, 0)) * crate::linalg::cr(mu1 * mu2))
        / crate::linalg::cr(norm);
    let v = |j: usize, k: usize| p_neg[(2 + j, k)];
    let normal = (v(0, 0) * crate::linalg::cr(mu1 * mu1)
        + v(1, 1) * crate::linalg::cr(mu2 * mu2)
        + (e2i * v(1, 0) + e2i.conj() * v(0, 1)) * crate::linalg::cr(mu1 * mu2))
        / crate::linalg::cr(norm);
    (anti - normal - crate::linalg::ONE).norm()
}

/// Strategy III: the cross-field pair a1(ε), a2(-ε).
pub fn strategy_iii_nm(
    model: &dyn PowerSpectrum,
    epsilon: f64,
) -> Result<TwoModeSpectralCorrelation> {
    extract_nm(model, epsilon)
}

/// Heterodyne spectra from the strategy-III correlations:
/// T = (S + 1)/2 and T_min = (S_min + 1)/2; the added half is the vacuum of
/// the image bands at 2Δ ∓ ε.
pub fn heterodyne_t(c: &TwoModeSpectralCorrelation) -> (f64, f64) {
    (
        0.5 * (crate::spectral::squeezing_s(c) + 1.0),
        0.5 * (crate::spectral::squeezing_s_min(c) + 1.0),
    )
}

/// Normalization N_τ = sqrt((1 + τε)/(2 + τε)) making the filtered
/// photocurrent a canonical quadrature operator.
pub fn photocurrent_normalization(tau: f64, epsilon: f64) -> Result<f64> {
    if tau < 0.0 || epsilon < 0.0 {
        return Err(Error::Domain(format!(
            "normalization needs τ, ε >= 0 (got {tau}, {epsilon})"
        )));
    }
    let x = tau * epsilon;
    Ok(((1.0 + x) / (2.0 + x)).sqrt())
}

/// Dispatch a configuration to the correlation triple it probes at sideband
/// frequency ε.
pub fn probe(
    model: &dyn PowerSpectrum,
    strategy: &DetectionStrategy,
    epsilon: f64,
) -> Result<TwoModeSpectralCorrelation> {
    match strategy {
        DetectionStrategy::SingleHomodyne { field } => strategy_i_nm(model, *field, epsilon),
        DetectionStrategy::TwoModeHomodyne { mu1, mu2, theta_c } => {
            strategy_ii_nm(model, epsilon, *mu1, *mu2, *theta_c)
        }
        DetectionStrategy::CrossField | DetectionStrategy::Heterodyne { .. } => {
            strategy_iii_nm(model, epsilon)
        }
    }
}
