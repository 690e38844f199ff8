//! Finite-time filtered modes and their convergence to spectral components.
//!
//! A filtered mode of central frequency Ω and duration τ carries the window
//! φ_τ; its correlations converge to the power spectrum matrix as τ → ∞,
//! with the residual decaying like 1/τ. The integrals here reduce the
//! double-frequency correlation integral to a single frequency integral via
//! the delta correlation of the Fourier-domain operators, split as
//!
//!   F(Ω, Ω') = overlap(Ω + Ω') · P(∞) + ∫ dω φ(ω-Ω) φ(-ω-Ω') [P(ω) - P(∞)]
//!
//! so the slowly decaying kernel tails only ever multiply the decaying
//! signal part; the constant vacuum part is handled in closed form.

use crate::error::{Error, Result};
use crate::linalg::{cr, CMat4, C64};
use crate::quad;
use crate::spectral::PowerSpectrum;

/// Filter window shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    /// φ(t) = √(2/τ) θ(t) e^{-t/τ}; Lorentzian frequency profile.
    Exponential,
    /// φ(t) = θ(t) θ(τ-t)/√τ; sinc frequency profile with the e^{iωτ/2}
    /// phase of a window ending at t.
    Step,
}

/// Normalized filter of duration scale τ: ∫ φ_τ(t)² dt = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterKernel {
    pub kind: FilterKind,
    pub tau: f64,
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x * x * x * x / 120.0
    } else {
        x.sin() / x
    }
}

impl FilterKernel {
    pub fn new(kind: FilterKind, tau: f64) -> Result<Self> {
        if tau.is_nan() || tau <= 0.0 {
            return Err(Error::Domain(format!("filter duration must be > 0, got {tau}")));
        }
        Ok(Self { kind, tau })
    }

    /// Time-domain window φ_τ(t).
    pub fn kernel_time(&self, t: f64) -> f64 {
        let tau = self.tau;
        match self.kind {
            FilterKind::Exponential => {
                if t < 0.0 {
                    0.0
                } else {
                    (2.0 / tau).sqrt() * (-t / tau).exp()
                }
            }
            FilterKind::Step => {
                if (0.0..=tau).contains(&t) {
                    1.0 / tau.sqrt()
                } else {
                    0.0
                }
            }
        }
    }

    /// Frequency-domain window φ̃_τ(ω), the Fourier transform of
    /// `kernel_time` with the e^{iωt} convention.
    pub fn kernel_freq(&self, omega: f64) -> C64 {
        let tau = self.tau;
        match self.kind {
            FilterKind::Exponential => {
                cr((tau / std::f64::consts::PI).sqrt()) / C64::new(1.0, -tau * omega)
            }
            FilterKind::Step => {
                let half = 0.5 * omega * tau;
                let mag = (tau / (2.0 * std::f64::consts::PI)).sqrt() * sinc(half);
                C64::from_polar(1.0, half) * cr(mag)
            }
        }
    }

    /// Closed form of ∫ dω φ̃(ω - Ω) φ̃(-ω - Ω') = ∫ dt φ(t)² e^{-iΔt} at
    /// Δ = Ω + Ω'. Equals 1 at Δ = 0 for any τ: filtered vacuum modes keep
    /// the canonical commutator exactly.
    pub fn pair_overlap(&self, delta: f64) -> C64 {
        let x = delta * self.tau;
        match self.kind {
            FilterKind::Exponential => cr(2.0) / C64::new(2.0, x),
            FilterKind::Step => C64::from_polar(1.0, -0.5 * x) * cr(sinc(0.5 * x)),
        }
    }

    /// Fraction of the kernel-product magnitude beyond distance `dist` from
    /// both kernel centers; the truncation bound for quadrature tails.
    fn tail_factor(&self, dist: f64) -> f64 {
        if dist <= 0.0 {
            return 1.0;
        }
        let x = self.tau * dist * std::f64::consts::PI;
        (2.0 / x).min(1.0)
    }

    fn seed_offsets(&self, cut: f64) -> Vec<f64> {
        let mut offs = vec![0.0];
        match self.kind {
            FilterKind::Exponential => {
                let mut step = 0.25 / self.tau;
                while step < cut {
                    offs.push(step);
                    offs.push(-step);
                    step *= 2.0;
                }
            }
            FilterKind::Step => {
                // One panel per sinc period near the peak, then geometric
                // growth in whole periods to keep oscillations resolved.
                let period = 2.0 * std::f64::consts::PI / self.tau;
                let mut edge = 0.0;
                let mut width = period;
                let mut count = 0;
                while edge < cut && count < 2000 {
                    edge += width;
                    offs.push(edge);
                    offs.push(-edge);
                    count += 1;
                    if count > 48 {
                        width *= 2.0;
                    }
                }
            }
        }
        offs
    }
}

/// Correlation matrix of the τ-filtered mode vector at central frequencies
/// (Ω, Ω'), evaluated at filter time t = 0 (stationary correlations do not
/// depend on it). Converges entrywise to δ_{Ω,-Ω'} P(Ω) as τ → ∞.
pub fn filtered_correlation(
    model: &dyn PowerSpectrum,
    kernel: &FilterKernel,
    omega: f64,
    omega_p: f64,
) -> Result<CMat4> {
    const ABS_TOL: f64 = 1e-10;
    const ACCEPT_TOL: f64 = 1e-8;

    let p_inf = model.asymptotic();
    let centers = [omega, -omega_p];

    // Truncation: grow the window until the product of the signal decay and
    // the kernel tail mass is negligible.
    let base = centers
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()))
        .max(model.signal_bandwidth());
    let mut cut = base + (20.0 * model.signal_bandwidth()).max(64.0 / kernel.tau);
    for _ in 0..60 {
        let decay = crate::linalg::max_abs(&(model.eval(cut) - p_inf))
            .max(crate::linalg::max_abs(&(model.eval(-cut) - p_inf)));
        let dist = cut - base;
        if decay * kernel.tail_factor(dist) < 0.25 * ABS_TOL {
            break;
        }
        cut *= 2.0;
    }

    let mut breakpoints = Vec::new();
    for &c in &centers {
        for off in kernel.seed_offsets(cut) {
            breakpoints.push(c + off);
        }
    }
    for r in model.resonances() {
        let w = model.signal_bandwidth().max(1.0 / kernel.tau);
        let mut step = w / 4.0;
        breakpoints.push(r);
        while step < 32.0 * w {
            breakpoints.push(r + step);
            breakpoints.push(r - step);
            step *= 2.0;
        }
    }
    breakpoints.push(-cut);
    breakpoints.push(cut);
    breakpoints.retain(|x| x.is_finite() && x.abs() <= cut);
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * cut);
    if breakpoints.len() < 2 {
        breakpoints = vec![-cut, cut];
    }

    let integrand = |w: f64| {
        let k = kernel.kernel_freq(w - omega) * kernel.kernel_freq(-w - omega_p);
        (model.eval(w) - p_inf) * k
    };
    let (signal, err) =
        quad::integrate_matrix_estimate(&integrand, &breakpoints, ABS_TOL, 60_000);
    if err > ACCEPT_TOL {
        return Err(Error::QuadratureFailure {
            tol: ACCEPT_TOL,
            err,
        });
    }

    Ok(p_inf * kernel.pair_overlap(omega + omega_p) + signal)
}

/// Mean of a filtered mode of a field with constant amplitude α:
/// ⟨a_τ(Ω, t)⟩ = √(2π) α e^{iΩt} φ̃_τ(-Ω).
pub fn filtered_mean(alpha: C64, kernel: &FilterKernel, omega: f64, t: f64) -> C64 {
    let phase = C64::from_polar(1.0, omega * t);
    cr((2.0 * std::f64::consts::PI).sqrt()) * alpha * phase * kernel.kernel_freq(-omega)
}

/// One row of a convergence study: the residual of the filtered correlation
/// against the narrow-band limit at a given τ.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub tau: f64,
    pub residual: f64,
    pub relative: f64,
}

/// Residuals |F_τ(Ω, -Ω) - P(Ω)| for an ascending list of filter times.
pub fn convergence_report(
    model: &dyn PowerSpectrum,
    kind: FilterKind,
    omega: f64,
    taus: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    if taus.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("filter times must be ascending".into()));
    }
    let target = model.eval(omega);
    let scale = crate::linalg::max_abs(&target).max(1.0);
    taus.iter()
        .map(|&tau| {
            let kernel = FilterKernel::new(kind, tau)?;
            let f = filtered_correlation(model, &kernel, omega, -omega)?;
            let residual = crate::linalg::max_abs(&(f - target));
            Ok(ConvergenceRow {
                tau,
                residual,
                relative: residual / scale,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{NopaModel, VacuumModel};
    use approx::assert_relative_eq;

    #[test]
    fn rejects_nonpositive_tau() {
        assert!(FilterKernel::new(FilterKind::Step, 0.0).is_err());
        assert!(FilterKernel::new(FilterKind::Exponential, -1.0).is_err());
    }

    #[test]
    fn normalization_by_quadrature() {
        // ∫ φ² dt = 1 across a log grid of τ, both kinds.
        let mut tau = 1e-2;
        while tau <= 1e4 {
            for kind in [FilterKind::Exponential, FilterKind::Step] {
                let k = FilterKernel::new(kind, tau).unwrap();
                let f = |t: f64| cr(k.kernel_time(t).powi(2));
                let mut bp: Vec<f64> = (0..=32).map(|i| tau * i as f64 / 32.0).collect();
                if kind == FilterKind::Exponential {
                    // e^{-2t/τ} tails matter out to ~20τ.
                    let mut t = tau;
                    while t < 24.0 * tau {
                        t *= 1.5;
                        bp.push(t);
                    }
                }
                let v = quad::integrate_complex(&f, &bp, 1e-11, 20_000).unwrap();
                assert_relative_eq!(v.re, 1.0, epsilon = 1e-8);
            }
            tau *= 10.0;
        }
    }

    #[test]
    fn step_kernel_dc_value() {
        let tau = 3.7;
        let k = FilterKernel::new(FilterKind::Step, tau).unwrap();
        let expect = (tau / (2.0 * std::f64::consts::PI)).sqrt();
        assert_relative_eq!(k.kernel_freq(0.0).re, expect, epsilon = 1e-14);
        assert_relative_eq!(k.kernel_freq(0.0).im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn exponential_kernel_is_normalized_lorentzian() {
        let tau = 2.0;
        let k = FilterKernel::new(FilterKind::Exponential, tau).unwrap();
        let sq = |w: f64| k.kernel_freq(w).norm_sqr();
        assert_relative_eq!(sq(0.0), tau / std::f64::consts::PI, epsilon = 1e-14);
        let f = |w: f64| cr(sq(w));
        let mut bp = vec![-4e4, -2e4, -1e4];
        let mut s = 1.0 / tau / 16.0;
        while s < 1e4 {
            bp.push(s);
            bp.push(-s);
            s *= 2.0;
        }
        bp.extend([0.0, 1e4, 2e4, 4e4]);
        bp.sort_by(f64::total_cmp);
        let v = quad::integrate_complex(&f, &bp, 1e-7, 40_000).unwrap();
        // 1/ω² tails beyond the window carry ~1e-5 of the mass.
        assert_relative_eq!(v.re, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn kernel_freq_matches_numeric_fourier_transform() {
        // Independent route: quadrature of (1/√2π) ∫ e^{iωt} φ(t) dt.
        let inv_sqrt_2pi = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        for (kind, tau) in [
            (FilterKind::Exponential, 0.8),
            (FilterKind::Exponential, 11.0),
            (FilterKind::Step, 0.8),
            (FilterKind::Step, 11.0),
        ] {
            let k = FilterKernel::new(kind, tau).unwrap();
            for i in 0..50 {
                let w = -6.0 + 12.0 * (i as f64 + 0.5) / 50.0;
                let f = |t: f64| C64::from_polar(k.kernel_time(t), w * t);
                let t_max = match kind {
                    FilterKind::Step => tau,
                    FilterKind::Exponential => tau * 40.0,
                };
                let period = if w.abs() > 1e-6 {
                    std::f64::consts::TAU / w.abs()
                } else {
                    t_max
                };
                let mut bp = vec![0.0];
                let mut t = 0.0;
                let dt = period.min(t_max / 8.0);
                while t < t_max {
                    t += dt;
                    bp.push(t.min(t_max));
                }
                let numeric =
                    quad::integrate_complex(&f, &bp, 1e-11, 60_000).unwrap() * cr(inv_sqrt_2pi);
                let closed = k.kernel_freq(w);
                assert!(
                    (numeric - closed).norm() < 1e-8,
                    "{kind:?} τ={tau} ω={w}: {numeric} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn pair_overlap_matches_quadrature() {
        for (kind, tau) in [(FilterKind::Exponential, 5.0), (FilterKind::Step, 5.0)] {
            let k = FilterKernel::new(kind, tau).unwrap();
            for delta in [0.0, 0.3, -1.7, 4.0] {
                let f = |w: f64| k.kernel_freq(w) * k.kernel_freq(-w - delta);
                let mut bp = vec![];
                for c in [0.0, -delta] {
                    for off in k.seed_offsets(2e4) {
                        bp.push(c + off);
                    }
                }
                bp.extend([-3e4, 3e4]);
                bp.sort_by(f64::total_cmp);
                bp.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
                let numeric = quad::integrate_complex(&f, &bp, 1e-8, 120_000).unwrap();
                let closed = k.pair_overlap(delta);
                assert!(
                    (numeric - closed).norm() < 2e-4,
                    "{kind:?} Δ={delta}: {numeric} vs {closed} (slow kernel tails)"
                );
            }
        }
    }

    #[test]
    fn vacuum_commutator_exact_for_every_tau() {
        for kind in [FilterKind::Exponential, FilterKind::Step] {
            for tau in [0.1, 1.0, 10.0, 1000.0] {
                let k = FilterKernel::new(kind, tau).unwrap();
                let f = filtered_correlation(&VacuumModel, &k, 0.8, -0.8).unwrap();
                assert_eq!(f[(0, 2)], crate::linalg::ONE, "⟨a a†⟩ exactly 1");
                assert_eq!(f[(2, 0)], crate::linalg::ZERO);
                assert_eq!(f[(1, 3)], crate::linalg::ONE);
            }
        }
    }

    #[test]
    fn filtered_mean_examples() {
        let k = FilterKernel::new(FilterKind::Step, 2.0).unwrap();
        assert_eq!(filtered_mean(crate::linalg::ZERO, &k, 1.0, 0.5), crate::linalg::ZERO);

        // DC component of the step filter retains the mean, growing as √τ.
        let alpha = cr(0.7);
        for tau in [1.0, 9.0, 100.0] {
            let k = FilterKernel::new(FilterKind::Step, tau).unwrap();
            let m = filtered_mean(alpha, &k, 0.0, 0.0);
            assert_relative_eq!(m.re, 0.7 * tau.sqrt(), epsilon = 1e-12);
        }

        // Nonzero sideband: magnitude decays monotonically with τ.
        let mags: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&tau| {
                let k = FilterKernel::new(FilterKind::Exponential, tau).unwrap();
                filtered_mean(alpha, &k, 1.0, 0.0).norm()
            })
            .collect();
        assert!(mags[0] > mags[1] && mags[1] > mags[2], "{mags:?}");
    }

    #[test]
    fn convergence_to_power_spectrum() {
        let model = NopaModel::new(1.0, 0.5).unwrap();
        let gamma = model.linewidth();
        let rows = convergence_report(
            &model,
            FilterKind::Exponential,
            0.4,
            &[10.0 / gamma, 100.0 / gamma, 1000.0 / gamma],
        )
        .unwrap();
        assert!(rows[0].residual > rows[1].residual);
        assert!(rows[1].residual > rows[2].residual);
        assert!(rows[1].relative < 0.05, "residual at τ = 100/Γ: {:?}", rows[1]);
        assert!(rows[2].relative < 0.01, "residual {:?}", rows[2]);
        // 1/τ scaling: one decade in τ buys about a decade in residual.
        let rate = rows[0].residual / rows[1].residual;
        assert!((4.0..25.0).contains(&rate), "decade ratio {rate}");
    }

    #[test]
    fn cross_frequency_entries_decay() {
        let model = NopaModel::new(1.0, 0.5).unwrap();
        let gamma = model.linewidth();
        let k_small = FilterKernel::new(FilterKind::Exponential, 10.0 / gamma).unwrap();
        let k_large = FilterKernel::new(FilterKind::Exponential, 1000.0 / gamma).unwrap();
        let f_small = filtered_correlation(&model, &k_small, 0.4, 0.9).unwrap();
        let f_large = filtered_correlation(&model, &k_large, 0.4, 0.9).unwrap();
        let n_small = crate::linalg::max_abs(&f_small);
        let n_large = crate::linalg::max_abs(&f_large);
        assert!(
            n_large < 0.02 * n_small,
            "1/τ decay over two decades: {n_large} vs {n_small}"
        );
    }

    #[test]
    fn ascending_taus_required() {
        let model = VacuumModel;
        assert!(convergence_report(&model, FilterKind::Step, 0.0, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn vacuum_report_is_exactly_zero() {
        let rows =
            convergence_report(&VacuumModel, FilterKind::Exponential, 0.7, &[1.0, 10.0, 100.0])
                .unwrap();
        for r in rows {
            assert_eq!(r.residual, 0.0);
        }
    }
}
