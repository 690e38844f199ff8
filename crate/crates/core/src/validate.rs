//! The built-in invariant suite: every structural identity the library
//! relies on, runnable as one report. The CLI `validate` subcommand is a
//! thin wrapper over [`run_all`].

use crate::detection::{self, DetectionStrategy};
use crate::filters::{FilterKind, FilterKernel};
use crate::gaussian::{self, StandardFormParams};
use crate::linalg;
use crate::models::{FieldIndex, NopaModel};
use crate::optomech::{
    entanglement_band, pout_closed_form, pout_matrix_route, stability, FrequencyGrid,
    OptomechanicalParams, OutputModel, SpectrumEvaluator, SpectrumRoute,
};
use crate::rng::SplitMix64;
use crate::sampling;
use crate::spectral::{self, CorruptedModel, PowerSpectrum};

/// One invariant check: the measured residual against its threshold.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        let passed = residual.is_finite() && residual <= threshold;
        Self {
            name: name.into(),
            residual,
            threshold,
            passed,
        }
    }
}

/// Full report; `passed` only if every check passed.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }
}

/// Gaussian-core identities on deterministic random states.
pub fn gaussian_checks(report: &mut Report) {
    let mut rng = SplitMix64::new(0x5EED_0001);

    let mut worst_nu = 0.0f64;
    for _ in 0..1000 {
        let c = sampling::random_covariance(&mut rng);
        let closed = gaussian::symplectic_nu_closed(&gaussian::standard_form(&c));
        let oracle = gaussian::symplectic_nu_oracle(&c).expect("4x4 Schur converges");
        let scale = c.entries().abs().max().max(1.0);
        worst_nu = worst_nu.max((closed - oracle).abs() / scale);
    }
    report.push(Check::new(
        "gaussian: closed-form ν equals eigenvalue oracle (1000 random states)",
        worst_nu,
        1e-9,
    ));

    let mut worst_bridge = 0.0f64;
    for _ in 0..1000 {
        let (n1, n2, m) = sampling::random_physical_nm(&mut rng);
        let p = StandardFormParams {
            a: 2.0 * n1 + 1.0,
            b: 2.0 * n2 + 1.0,
            c: 2.0 * m.norm(),
            c_prime: -2.0 * m.norm(),
        };
        let nu = gaussian::symplectic_nu_closed(&p);
        let es = gaussian::duan_min(n1, n2, m.norm()).e_s_min;
        worst_bridge = worst_bridge.max((2.0 * nu - es).abs());
    }
    report.push(Check::new(
        "gaussian: 2ν = min E_S at m+ = 0 (1000 random states)",
        worst_bridge,
        1e-10,
    ));

    let mut worst_physical = 0.0f64;
    let mut worst_roundtrip = 0.0f64;
    for _ in 0..200 {
        let c = sampling::random_covariance(&mut rng);
        worst_physical = worst_physical.max(-c.physicality_min_eigenvalue());

        let p = gaussian::standard_form(&c);
        let a = gaussian::CorrelationMatrixA::from_standard(p.n1(), p.n2(), p.m_plus(), p.m_minus());
        let c2 = gaussian::correlation_to_covariance(&a).expect("constructed A is consistent");
        let e = c2.entries();
        let rec = [
            (e[(0, 0)] - 1.0) / 2.0 - p.n1(),
            (e[(2, 2)] - 1.0) / 2.0 - p.n2(),
            (e[(0, 2)] + e[(1, 3)]) / 4.0 - p.m_plus(),
            (e[(0, 2)] - e[(1, 3)]) / 4.0 - p.m_minus(),
        ];
        let scale = e.abs().max().max(1.0);
        for r in rec {
            worst_roundtrip = worst_roundtrip.max(r.abs() / scale);
        }
    }
    report.push(Check::new(
        "gaussian: random symplectic states satisfy C + iΣ >= 0",
        worst_physical,
        1e-9,
    ));
    report.push(Check::new(
        "gaussian: covariance/correlation constructor roundtrip",
        worst_roundtrip,
        1e-12,
    ));
}

/// Spectral-module identities, on random triples and the parametric toy
/// model.
pub fn spectral_checks(report: &mut Report) {
    let mut rng = SplitMix64::new(0x5EED_0002);

    let mut worst_order = 0.0f64;
    let mut predicate_disagreements = 0u32;
    let mut worst_nu_identity = 0.0f64;
    for _ in 0..1000 {
        let (n1, n2, m) = sampling::random_physical_nm(&mut rng);
        let c = spectral::TwoModeSpectralCorrelation::new(n1, n2, m).expect("valid triple");
        let s = spectral::squeezing_s(&c);
        let smin = spectral::squeezing_s_min(&c);
        worst_order = worst_order.max(smin - s);
        let margin = n1 * n2 - m.norm_sqr();
        if margin.abs() > 1e-12 && spectral::is_entangled(&c) != (smin < 1.0) {
            predicate_disagreements += 1;
        }
        let nu = spectral::nu_from_covariance(&c).expect("oracle converges");
        worst_nu_identity = worst_nu_identity.max((smin - nu).abs() / (1.0 + n1 + n2));
    }
    report.push(Check::new(
        "spectral: S_min <= S on 1000 random triples",
        worst_order,
        1e-12,
    ));
    report.push(Check::new(
        "spectral: entanglement predicate matches S_min < 1",
        predicate_disagreements as f64,
        0.0,
    ));
    report.push(Check::new(
        "spectral: S_min(Ω) equals symplectic ν of the pair covariance",
        worst_nu_identity,
        1e-9,
    ));

    let model = NopaModel::new(1.0, 0.5).expect("below threshold");
    let mut worst_sympl = 0.0f64;
    let mut worst_conj = 0.0f64;
    for i in 0..200 {
        let w = -4.0 + 8.0 * i as f64 / 199.0;
        worst_sympl = worst_sympl.max(spectral::check_symplectic_identity(&model, w));
        worst_conj = worst_conj.max(spectral::check_conjugation_identity(&model, w));
    }
    report.push(Check::new(
        "spectral: symplectic identity of the parametric model",
        worst_sympl,
        1e-9,
    ));
    report.push(Check::new(
        "spectral: conjugation identity of the parametric model",
        worst_conj,
        1e-9,
    ));
}

/// Filter normalization, commutator preservation and convergence.
pub fn filter_checks(report: &mut Report) {
    let mut worst_comm = 0.0f64;
    for kind in [FilterKind::Exponential, FilterKind::Step] {
        for tau in [0.01, 1.0, 100.0, 1e4] {
            let k = FilterKernel::new(kind, tau).expect("positive τ");
            let f = crate::filters::filtered_correlation(&crate::models::VacuumModel, &k, 0.8, -0.8)
                .expect("vacuum quadrature is exact");
            worst_comm = worst_comm.max((f[(0, 2)] - linalg::ONE).norm());
            worst_comm = worst_comm.max(f[(2, 0)].norm());
        }
    }
    report.push(Check::new(
        "filters: vacuum commutator exact for every τ, both kernels",
        worst_comm,
        1e-12,
    ));

    let model = NopaModel::new(1.0, 0.5).expect("below threshold");
    let gamma = model.linewidth();
    let rows = crate::filters::convergence_report(
        &model,
        FilterKind::Exponential,
        0.4,
        &[10.0 / gamma, 100.0 / gamma, 1000.0 / gamma],
    )
    .expect("quadrature within tolerance");
    let monotone = rows.windows(2).all(|w| w[1].residual < w[0].residual);
    report.push(Check::new(
        "filters: residual decreases monotonically in τ",
        if monotone { 0.0 } else { 1.0 },
        0.0,
    ));
    report.push(Check::new(
        "filters: residual below 1% at τ = 1000/Γ",
        rows.last().expect("non-empty").relative,
        0.01,
    ));

    // Cross-frequency correlations die off once |Ω + Ω'| τ >> 1.
    let k_small = FilterKernel::new(FilterKind::Exponential, 10.0 / gamma).expect("positive τ");
    let k_large = FilterKernel::new(FilterKind::Exponential, 1000.0 / gamma).expect("positive τ");
    let f_small = crate::filters::filtered_correlation(&model, &k_small, 0.4, 0.9)
        .expect("quadrature within tolerance");
    let f_large = crate::filters::filtered_correlation(&model, &k_large, 0.4, 0.9)
        .expect("quadrature within tolerance");
    report.push(Check::new(
        "filters: cross-frequency entries decay ~1/τ over two decades",
        linalg::max_abs(&f_large) / linalg::max_abs(&f_small).max(1e-300),
        0.02,
    ));
}

/// Detection-layer invariants on the parametric toy model.
pub fn detection_checks(report: &mut Report) {
    let model = NopaModel::new(1.0, 0.5).expect("below threshold");
    let mut rng = SplitMix64::new(0x5EED_0003);

    let mut worst_comm = 0.0f64;
    let mut worst_scale = 0.0f64;
    let mut worst_pop = 0.0f64;
    for _ in 0..200 {
        let mu1 = rng.range(0.05, 2.0);
        let mu2 = rng.range(0.0, 2.0);
        let th = rng.range(-3.0, 3.0);
        let eps = rng.range(0.05, 2.5);
        worst_comm =
            worst_comm.max(detection::collective_commutator_residual(&model, eps, mu1, mu2, th));
        let a = detection::strategy_ii_nm(&model, eps, mu1, mu2, th).expect("valid weights");
        let lam = rng.range(0.3, 4.0);
        let b = detection::strategy_ii_nm(&model, eps, lam * mu1, lam * mu2, th)
            .expect("valid weights");
        worst_scale = worst_scale
            .max((a.n_plus - b.n_plus).abs())
            .max((a.n_minus - b.n_minus).abs())
            .max((a.m - b.m).norm());
        worst_pop = worst_pop.max(-a.n_plus).max(-a.n_minus);
    }
    report.push(Check::new(
        "detection: collective commutator [c, c†] = 1",
        worst_comm,
        1e-10,
    ));
    report.push(Check::new(
        "detection: weight rescaling leaves the probed triple unchanged",
        worst_scale,
        1e-10,
    ));
    report.push(Check::new(
        "detection: probed populations non-negative",
        worst_pop,
        1e-9,
    ));

    // Symmetric spectra do not depend on the filter phase.
    let c = detection::strategy_i_nm(&model, FieldIndex::One, 0.5).expect("valid frequency");
    let mut worst_phi = 0.0f64;
    for i in 0..20 {
        let phi = 0.3 * i as f64;
        let comb = detection::photocurrent_combination(0.9, 0.9, phi, phi);
        let v = spectral::composite_variance(
            &c,
            comb.theta_plus,
            comb.theta_minus,
            comb.xi_plus,
            comb.xi_minus,
        )
        .expect("unit weights");
        let v0 = spectral::composite_variance(&c, 1.8, 0.0, 1.0, 1.0).expect("unit weights");
        worst_phi = worst_phi.max((v - v0).abs());
    }
    report.push(Check::new(
        "detection: symmetric spectrum independent of filter phase",
        worst_phi,
        1e-12,
    ));
}

/// Optomechanical identities: the dual-route spectrum, strategy relations
/// and entanglement-band consistency.
pub fn optomech_checks(report: &mut Report, params: &OptomechanicalParams) {
    let mut rng = SplitMix64::new(0x5EED_0004);

    match stability(params) {
        Ok(s) if s.stable => {}
        _ => {
            report.push(Check::new("optomech: configured model stable", 1.0, 0.0));
            return;
        }
    }

    let mut worst_dual = 0.0f64;
    let mut drawn = 0;
    while drawn < 500 {
        let p = OptomechanicalParams {
            kappa1: rng.range(0.005, 0.2),
            kappa2: rng.range(0.0, 0.2),
            gamma: rng.range(1e-6, 1e-2),
            omega_m: 1.0,
            delta: rng.range(-1.0, 1.0),
            g: rng.range(0.0, 0.8),
            n_thermal: rng.range(0.0, 2e4),
        };
        if !stability(&p).expect("eigensolve converges").stable {
            continue;
        }
        let w = rng.range(-2.0, 2.0);
        let closed = pout_closed_form(&p, w);
        let matrix = pout_matrix_route(&p, w).expect("stable system");
        let scale = linalg::max_abs(&closed).max(1.0);
        worst_dual = worst_dual.max(linalg::max_abs_diff(&closed, &matrix) / scale);
        drawn += 1;
    }
    report.push(Check::new(
        "optomech: closed-form spectrum equals matrix route (500 stable draws)",
        worst_dual,
        1e-9,
    ));

    let model = OutputModel::new(*params, SpectrumRoute::ClosedForm).expect("stable");
    let grid = FrequencyGrid::reference(params);
    let mut worst_sympl = 0.0f64;
    let mut worst_conj = 0.0f64;
    for &w in grid.points.iter().step_by(5) {
        let scale = linalg::max_abs(&model.eval(w)).max(1.0);
        worst_sympl = worst_sympl.max(spectral::check_symplectic_identity(&model, w) / scale);
        worst_conj = worst_conj.max(spectral::check_conjugation_identity(&model, w) / scale);
    }
    report.push(Check::new(
        "optomech: symplectic identity across the reference grid (relative)",
        worst_sympl,
        1e-9,
    ));
    report.push(Check::new(
        "optomech: conjugation identity across the reference grid (relative)",
        worst_conj,
        1e-9,
    ));

    // S - S_min is resonantly enhanced at ω_m against the midband.
    let strat = DetectionStrategy::SingleHomodyne {
        field: FieldIndex::One,
    };
    let eval = SpectrumEvaluator::new(*params, &strat).expect("stable");
    let at = |w: f64| {
        let s = eval.spectra(w);
        s.s - s.s_min
    };
    let gap_res = at(params.omega_m);
    let gap_mid = at(0.5 * params.omega_m);
    report.push(Check::new(
        "optomech: S - S_min at ω_m exceeds 10x its midband value",
        if gap_res > 10.0 * gap_mid { 0.0 } else { 1.0 },
        0.0,
    ));

    // Optimal two-sided detection equals the single-sided cavity of the
    // total decay rate.
    let total = OptomechanicalParams {
        kappa1: params.kappa(),
        kappa2: 0.0,
        ..*params
    };
    let single = SpectrumEvaluator::new(
        total,
        &DetectionStrategy::SingleHomodyne {
            field: FieldIndex::One,
        },
    )
    .expect("stable");
    let optimal = SpectrumEvaluator::new(
        *params,
        &DetectionStrategy::TwoModeHomodyne {
            mu1: 1.0,
            mu2: (params.kappa2 / params.kappa1).sqrt(),
            theta_c: 0.0,
        },
    )
    .expect("stable");
    let mut worst_opt = 0.0f64;
    for &w in grid.points.iter().step_by(3) {
        let a = optimal.spectra(w);
        let b = single.spectra(w);
        // Conditioning scale: S_min is a small difference of the sideband
        // populations, which peak near 1e8 on the thermal resonance.
        let scale = 1.0 + b.n_plus + b.n_minus;
        worst_opt = worst_opt.max((a.s_min - b.s_min).abs() / scale);
    }
    report.push(Check::new(
        "optomech: optimal-μ two-sided spectra equal single-sided κ1+κ2",
        worst_opt,
        1e-9,
    ));

    // Squeezing maximum over the collective weight ratio sits at
    // sqrt(κ2/κ1), located by golden-section search on S(0; μ2/μ1).
    if params.kappa1 > 0.0 && params.kappa2 > 0.0 {
        let s_at = |ratio: f64| {
            SpectrumEvaluator::new(
                *params,
                &DetectionStrategy::TwoModeHomodyne {
                    mu1: 1.0,
                    mu2: ratio,
                    theta_c: 0.0,
                },
            )
            .expect("stable")
            .spectra(0.0)
            .s
        };
        let (mut lo, mut hi) = (0.0f64, 3.0f64);
        let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
        for _ in 0..120 {
            let c = hi - inv_phi * (hi - lo);
            let d = lo + inv_phi * (hi - lo);
            if s_at(c) < s_at(d) {
                hi = d;
            } else {
                lo = c;
            }
        }
        let found = 0.5 * (lo + hi);
        report.push(Check::new(
            "optomech: squeezing extremum over μ2/μ1 at sqrt(κ2/κ1)",
            (found - (params.kappa2 / params.kappa1).sqrt()).abs(),
            1e-3,
        ));
    }

    // Band predicate agrees with the pointwise triple predicate.
    let bands = entanglement_band(params, &strat, &grid).expect("stable");
    let mut band_disagreements = 0u32;
    for &w in grid.points.iter().step_by(3) {
        let c = eval.nm(w);
        let margin = c.n_plus * c.n_minus - c.m.norm_sqr();
        if margin.abs() <= 1e-10 * (1.0 + c.n_plus + c.n_minus).powi(2) {
            continue;
        }
        let inside = bands.iter().any(|&(a, b)| w >= a && w <= b);
        if inside != spectral::is_entangled(&c) {
            band_disagreements += 1;
        }
    }
    report.push(Check::new(
        "optomech: entanglement band matches pointwise predicate",
        band_disagreements as f64,
        0.0,
    ));
}

/// Structure-check detector: a deliberately corrupted model must trip the
/// symplectic identity. Exercised via the CLI fault-injection hook.
pub fn corruption_check(report: &mut Report) {
    let bad = CorruptedModel {
        inner: NopaModel::new(1.0, 0.5).expect("below threshold"),
        row: 0,
        col: 2,
        factor: 1.1,
    };
    let residual = spectral::check_symplectic_identity(&bad, 0.3);
    report.push(Check::new(
        "fault injection: corrupted model trips the symplectic check (residual must exceed 0.05)",
        if residual > 0.05 { 0.0 } else { 1.0 },
        0.0,
    ));
}

/// Run every suite against one optomechanical configuration.
pub fn run_all(params: &OptomechanicalParams) -> Report {
    let mut report = Report::default();
    gaussian_checks(&mut report);
    spectral_checks(&mut report);
    filter_checks(&mut report);
    detection_checks(&mut report);
    optomech_checks(&mut report, params);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = run_all(&OptomechanicalParams::reference(0.3));
        for c in &report.checks {
            assert!(c.passed, "failed: {} (residual {:.3e})", c.name, c.residual);
        }
    }

    #[test]
    fn corruption_is_detected() {
        let mut r = Report::default();
        corruption_check(&mut r);
        assert!(r.passed());
    }
}
