//! Membrane-in-the-middle optomechanical model: linearized Langevin
//! dynamics of one cavity mode coupled to one mechanical mode, with photon
//! loss through both mirrors. The stationary output power spectrum is
//! produced by two independent routes, the closed form in terms of the
//! response functions f, α, β and the input-output matrix chain, whose
//! agreement validates both.
//!
//! All rates and frequencies are in units of the mechanical frequency
//! unless stated otherwise; ω_m = 1 is the internal normalization.

use nalgebra::SMatrix;

use crate::detection::DetectionStrategy;
use crate::error::{Error, Result};
use crate::gaussian::log_negativity;
use crate::linalg::{ci, cr, eigenvalues4, try_inverse4, CMat4, CMat6, C64};
use crate::models::FieldIndex;
use crate::spectral::{vacuum_floor, PowerSpectrum, TwoModeSpectralCorrelation};

pub type RMat4x6 = SMatrix<f64, 4, 6>;
pub type RMat6 = SMatrix<f64, 6, 6>;

const HBAR: f64 = 1.054_571_817e-34;
const K_B: f64 = 1.380_649e-23;

/// Bose occupation of a mode at `omega_rad_s` in a bath at `temperature_k`.
/// 100 mK at ω_m = 1e6 rad/s gives the 13091 thermal phonons of the
/// reference scenario.
pub fn bose_occupation(temperature_k: f64, omega_rad_s: f64) -> f64 {
    let x = HBAR * omega_rad_s / (K_B * temperature_k);
    1.0 / x.exp_m1()
}

/// Linearized optomechanical parameters, rates in units of ω_m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptomechanicalParams {
    /// Photon decay rate through mirror 1.
    pub kappa1: f64,
    /// Photon decay rate through mirror 2.
    pub kappa2: f64,
    /// Mechanical decay rate.
    pub gamma: f64,
    /// Mechanical frequency (the normalization anchor; 1 internally).
    pub omega_m: f64,
    /// Laser detuning from the cavity resonance.
    pub delta: f64,
    /// Linearized optomechanical coupling (real, non-negative; the phase is
    /// absorbed into the field).
    pub g: f64,
    /// Thermal phonon occupation of the mechanical bath.
    pub n_thermal: f64,
}

impl OptomechanicalParams {
    pub fn new(
        kappa1: f64,
        kappa2: f64,
        gamma: f64,
        omega_m: f64,
        delta: f64,
        g: f64,
        n_thermal: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("kappa1", kappa1),
            ("kappa2", kappa2),
            ("gamma", gamma),
            ("g", g),
            ("n_thermal", n_thermal),
        ] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be >= 0, got {v}")));
            }
        }
        if omega_m.is_nan() || omega_m <= 0.0 {
            return Err(Error::Domain(format!("omega_m must be > 0, got {omega_m}")));
        }
        Ok(Self {
            kappa1,
            kappa2,
            gamma,
            omega_m,
            delta,
            g,
            n_thermal,
        })
    }

    /// Reference scenario of the two-sided cavity: total decay
    /// κ1 + κ2 = 0.1 ω_m split by the given ratio κ2/κ1, with δ = 0,
    /// g = 0.5 ω_m, γ = 1e-5 ω_m and 13091 thermal phonons.
    pub fn reference(kappa2_over_kappa1: f64) -> Self {
        let total = 0.1;
        let kappa1 = total / (1.0 + kappa2_over_kappa1);
        Self {
            kappa1,
            kappa2: total - kappa1,
            gamma: 1e-5,
            omega_m: 1.0,
            delta: 0.0,
            g: 0.5,
            n_thermal: 13091.0,
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa1 + self.kappa2
    }

    /// Denominator response f(ω).
    pub fn f_response(&self, w: f64) -> C64 {
        let k = self.kappa();
        let om = self.omega_m;
        let mech = cr(om * om) + (cr(self.gamma) - ci(w)).powu(2);
        let opt = cr(self.delta * self.delta) + (cr(k) - ci(w)).powu(2);
        cr(4.0 * self.g * self.g * self.delta * om) - mech * opt
    }

    /// Complex correlation amplitude α(ω); an even function of ω.
    pub fn alpha(&self, w: f64) -> C64 {
        let k = self.kappa();
        let om = self.omega_m;
        let g2 = self.g * self.g;
        let kd = C64::new(k, self.delta);
        let therm = self.gamma
            * (2.0 * self.n_thermal + 1.0)
            * (self.gamma * self.gamma + om * om + w * w);
        let chi = cr(therm) + ci(om * (self.gamma * self.gamma + om * om - w * w));
        -cr(4.0 * g2 * om * om) * kd - (kd * kd + cr(w * w)) * chi
    }

    /// Sideband weight β_{±ω}(ω); real and non-negative for physical
    /// parameters. `sign` selects the ± label.
    pub fn beta(&self, w: f64, sign: f64) -> f64 {
        let k = self.kappa();
        let om = self.omega_m;
        let lorentz = k * k + (self.delta + sign * w).powi(2);
        let therm =
            (2.0 * self.n_thermal + 1.0) * (self.gamma * self.gamma + om * om + w * w);
        4.0 * self.g * self.g * om * om * k + self.gamma * lorentz * (therm - sign * 2.0 * w * om)
    }
}

/// Matrix form of the quantum Langevin equations and the input
/// correlations: drift M, input coupling Q, output selector Z and input
/// correlation matrix C_in for the noise vector
/// (a1_in, a2_in, b_in, a1_in†, a2_in†, b_in†).
#[derive(Debug, Clone, PartialEq)]
pub struct DriftMatrices {
    pub m: CMat4,
    pub q: RMat4x6,
    pub z: RMat4x6,
    pub c_in: RMat6,
}

pub fn drift_matrix(p: &OptomechanicalParams) -> DriftMatrices {
    let k = p.kappa();
    let ig = ci(p.g);
    let m = CMat4::from_row_slice(&[
        C64::new(-k, -p.delta),
        -ig,
        cr(0.0),
        -ig,
        -ig,
        C64::new(-p.gamma, -p.omega_m),
        -ig,
        cr(0.0),
        cr(0.0),
        ig,
        C64::new(-k, p.delta),
        ig,
        ig,
        cr(0.0),
        ig,
        C64::new(-p.gamma, p.omega_m),
    ]);

    let s1 = (2.0 * p.kappa1).sqrt();
    let s2 = (2.0 * p.kappa2).sqrt();
    let sg = (2.0 * p.gamma).sqrt();
    let mut q = RMat4x6::zeros();
    q[(0, 0)] = s1;
    q[(0, 1)] = s2;
    q[(1, 2)] = sg;
    q[(2, 3)] = s1;
    q[(2, 4)] = s2;
    q[(3, 5)] = sg;

    let mut z = RMat4x6::zeros();
    z[(0, 0)] = 1.0;
    z[(1, 1)] = 1.0;
    z[(2, 3)] = 1.0;
    z[(3, 4)] = 1.0;

    let mut c_in = RMat6::zeros();
    c_in[(0, 3)] = 1.0;
    c_in[(1, 4)] = 1.0;
    c_in[(2, 5)] = p.n_thermal + 1.0;
    c_in[(5, 2)] = p.n_thermal;

    DriftMatrices { m, q, z, c_in }
}

/// Stability diagnosis: all drift eigenvalues must sit strictly in the left
/// half plane (margin 1e-12 ω_m; marginal counts as unstable).
#[derive(Debug, Clone, Copy)]
pub struct Stability {
    pub stable: bool,
    pub eigenvalues: [C64; 4],
    pub max_real: f64,
}

pub fn stability(p: &OptomechanicalParams) -> Result<Stability> {
    let d = drift_matrix(p);
    let eigenvalues = eigenvalues4(&d.m)?;
    let max_real = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(Stability {
        stable: max_real < -1e-12 * p.omega_m,
        eigenvalues,
        max_real,
    })
}

fn ensure_stable(p: &OptomechanicalParams) -> Result<()> {
    let s = stability(p)?;
    if !s.stable {
        return Err(Error::Unstable(s.max_real));
    }
    Ok(())
}

/// Output power spectrum through the input-output matrix chain,
/// P_out(ω) = Z [Qᵀ (M + iω)⁻¹ Q + 1] C_in [Qᵀ (M - iω)⁻¹ Q + 1]ᵀ Zᵀ.
pub fn pout_matrix_route(p: &OptomechanicalParams, w: f64) -> Result<CMat4> {
    let d = drift_matrix(p);
    let qc = d.q.map(cr);
    let zc = d.z.map(cr);
    let cinc = d.c_in.map(cr);

    let chain = |freq: f64| -> Result<CMat6> {
        let shifted = d.m + CMat4::identity() * ci(freq);
        let inv = try_inverse4(&shifted, 1e12)?;
        Ok(qc.transpose() * inv * qc + CMat6::identity())
    };

    let b_pos = chain(w)?;
    let b_neg = chain(-w)?;
    Ok(zc * b_pos * cinc * b_neg.transpose() * zc.transpose())
}

/// Output power spectrum in closed form,
/// P_out(ω) = (2g²/|f|²) Q_out W Q_out + Y, with W assembled from α and
/// β_{±ω} and Y the vacuum floor.
pub fn pout_closed_form(p: &OptomechanicalParams, w: f64) -> CMat4 {
    let f = p.f_response(w);
    let pref = 2.0 * p.g * p.g / f.norm_sqr();
    let a = p.alpha(w);
    let ac = a.conj();
    let bp = cr(p.beta(w, 1.0));
    let bm = cr(p.beta(w, -1.0));

    let w_mat = CMat4::from_row_slice(&[
        ac, ac, bp, bp, //
        ac, ac, bp, bp, //
        bm, bm, a, a, //
        bm, bm, a, a,
    ]);
    let q_out = CMat4::from_diagonal(&nalgebra::Vector4::new(
        cr((2.0 * p.kappa1).sqrt()),
        cr((2.0 * p.kappa2).sqrt()),
        cr((2.0 * p.kappa1).sqrt()),
        cr((2.0 * p.kappa2).sqrt()),
    ));
    q_out * w_mat * q_out * cr(pref) + vacuum_floor()
}

/// Which spectrum route backs an [`OutputModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumRoute {
    ClosedForm,
    MatrixChain,
}

/// The stationary output-field pair (a1_out, a2_out) of a stable
/// optomechanical system, as a power-spectrum model.
pub struct OutputModel {
    params: OptomechanicalParams,
    route: SpectrumRoute,
}

impl OutputModel {
    pub fn new(params: OptomechanicalParams, route: SpectrumRoute) -> Result<Self> {
        ensure_stable(&params)?;
        Ok(Self { params, route })
    }

    pub fn params(&self) -> &OptomechanicalParams {
        &self.params
    }
}

impl PowerSpectrum for OutputModel {
    fn eval(&self, omega: f64) -> CMat4 {
        match self.route {
            SpectrumRoute::ClosedForm => pout_closed_form(&self.params, omega),
            // Stability was established at construction; conditioning
            // failures cannot occur on the real axis of a stable system.
            SpectrumRoute::MatrixChain => pout_matrix_route(&self.params, omega)
                .expect("stable system has bounded response on the real axis"),
        }
    }

    fn labels(&self) -> (&str, &str) {
        ("mirror-1-out", "mirror-2-out")
    }

    fn signal_bandwidth(&self) -> f64 {
        self.params.omega_m + 3.0 * self.params.kappa()
    }

    fn resonances(&self) -> Vec<f64> {
        vec![-self.params.omega_m, 0.0, self.params.omega_m]
    }
}

/// Sideband amplitudes q± assigning the detected output channels:
/// strategy I uses one mirror twice, II the weighted collective channel,
/// III (and heterodyne) one mirror per sideband.
pub fn q_factors(p: &OptomechanicalParams, strategy: &DetectionStrategy) -> (C64, C64) {
    let s1 = p.kappa1.sqrt();
    let s2 = p.kappa2.sqrt();
    match strategy {
        DetectionStrategy::SingleHomodyne { field } => {
            let q = match field {
                FieldIndex::One => cr(s1),
                FieldIndex::Two => cr(s2),
            };
            (q, q)
        }
        DetectionStrategy::TwoModeHomodyne { mu1, mu2, theta_c } => {
            let norm = (mu1 * mu1 + mu2 * mu2).sqrt();
            let q = (C64::from_polar(*mu1, *theta_c) * cr(s1)
                + C64::from_polar(*mu2, -*theta_c) * cr(s2))
                / cr(norm);
            (q, q)
        }
        DetectionStrategy::CrossField | DetectionStrategy::Heterodyne { .. } => (cr(s1), cr(s2)),
    }
}

/// Squeezing spectra and entanglement measures of the detected pair at one
/// frequency.
#[derive(Debug, Clone, Copy)]
pub struct StrategySpectra {
    pub s: f64,
    pub s_min: f64,
    pub nu: f64,
    pub e_n: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    pub m: C64,
}

/// Closed-form spectra evaluator for one detection strategy; stability is
/// established once at construction.
pub struct SpectrumEvaluator {
    params: OptomechanicalParams,
    q_plus: C64,
    q_minus: C64,
}

impl SpectrumEvaluator {
    pub fn new(params: OptomechanicalParams, strategy: &DetectionStrategy) -> Result<Self> {
        ensure_stable(&params)?;
        let (q_plus, q_minus) = q_factors(&params, strategy);
        Ok(Self {
            params,
            q_plus,
            q_minus,
        })
    }

    /// The correlation triple of the detected pair.
    pub fn nm(&self, w: f64) -> TwoModeSpectralCorrelation {
        let p = &self.params;
        let pref = 4.0 * p.g * p.g / p.f_response(w).norm_sqr();
        TwoModeSpectralCorrelation {
            n_plus: pref * self.q_plus.norm_sqr() * p.beta(w, 1.0),
            n_minus: pref * self.q_minus.norm_sqr() * p.beta(w, -1.0),
            m: self.q_plus * self.q_minus * p.alpha(w).conj() * cr(pref),
        }
    }

    pub fn spectra(&self, w: f64) -> StrategySpectra {
        let c = self.nm(w);
        let s = crate::spectral::squeezing_s(&c);
        let s_min = crate::spectral::squeezing_s_min(&c);
        let e_n = log_negativity(s_min.max(1e-300)).expect("clamped ν is positive");
        StrategySpectra {
            s,
            s_min,
            nu: s_min,
            e_n,
            n_plus: c.n_plus,
            n_minus: c.n_minus,
            m: c.m,
        }
    }
}

/// Closed-form strategy spectra at a single frequency (stability is checked
/// per call; sweeps should use [`SpectrumEvaluator`]).
pub fn strategy_spectra(
    p: &OptomechanicalParams,
    strategy: &DetectionStrategy,
    w: f64,
) -> Result<StrategySpectra> {
    Ok(SpectrumEvaluator::new(*p, strategy)?.spectra(w))
}

/// Frequency grid with uniform coverage plus logarithmically dense insets
/// around the mechanical resonances, where features of width ~γ live.
#[derive(Debug, Clone)]
pub struct FrequencyGrid {
    pub points: Vec<f64>,
}

impl FrequencyGrid {
    pub fn uniform(min: f64, max: f64, n: usize) -> Result<Self> {
        if min.is_nan() || max.is_nan() || min >= max || n < 2 {
            return Err(Error::Domain(format!(
                "grid needs min < max and at least 2 points (got [{min}, {max}] x {n})"
            )));
        }
        let step = (max - min) / (n - 1) as f64;
        Ok(Self {
            points: (0..n).map(|i| min + step * i as f64).collect(),
        })
    }

    /// 2001 uniform points over [-2, 2] ω_m with 50-per-side log insets
    /// covering |ω ∓ ω_m| in [γ/10, 100γ].
    pub fn reference(p: &OptomechanicalParams) -> Self {
        let om = p.omega_m;
        let mut points = Self::uniform(-2.0 * om, 2.0 * om, 2001)
            .expect("valid bounds")
            .points;
        let lo = (p.gamma / 10.0).max(1e-300);
        let hi = 100.0 * p.gamma;
        if hi > lo {
            let per_side = 50;
            for center in [-om, om] {
                for i in 0..per_side {
                    let t = i as f64 / (per_side - 1) as f64;
                    let off = lo * (hi / lo).powf(t);
                    points.push(center - off);
                    points.push(center + off);
                }
            }
        }
        points.sort_by(f64::total_cmp);
        points.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * om);
        Self { points }
    }
}

/// Frequency intervals where the detected sideband pairs are entangled,
/// located by sign changes of β_ω β_{-ω} - |α|² on the grid and refined by
/// bisection. Empty when either detected channel is dark (q+ q- = 0).
pub fn entanglement_band(
    p: &OptomechanicalParams,
    strategy: &DetectionStrategy,
    grid: &FrequencyGrid,
) -> Result<Vec<(f64, f64)>> {
    ensure_stable(p)?;
    let (qp, qm) = q_factors(p, strategy);
    // Dark coupling or a dark detection channel leaves every pair on the
    // separability boundary n+ n- = |m|² = 0.
    if p.g == 0.0 || (qp * qm).norm() == 0.0 {
        return Ok(Vec::new());
    }
    let h = |w: f64| p.beta(w, 1.0) * p.beta(w, -1.0) - p.alpha(w).norm_sqr();

    let pts = &grid.points;
    let mut edges = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ha, hb) = (h(a), h(b));
        if ha == 0.0 {
            continue;
        }
        if ha.signum() != hb.signum() && hb != 0.0 {
            let mut lo = a;
            let mut hi = b;
            let mut hlo = ha;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let hm = h(mid);
                if hm.signum() == hlo.signum() {
                    lo = mid;
                    hlo = hm;
                } else {
                    hi = mid;
                }
            }
            edges.push(0.5 * (lo + hi));
        }
    }

    let mut bands = Vec::new();
    let mut open: Option<f64> = if h(pts[0]) < 0.0 { Some(pts[0]) } else { None };
    for e in edges {
        match open.take() {
            Some(start) => bands.push((start, e)),
            None => open = Some(e),
        }
    }
    if let Some(start) = open {
        bands.push((start, *pts.last().expect("non-empty grid")));
    }
    Ok(bands)
}
