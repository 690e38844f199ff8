//! Spectral analysis of stationary continuous fields: the 4x4 power
//! spectrum matrix of an ordered field pair, pair-correlation assembly for
//! narrow filtered modes, the (n+, n-, m) spectral correlation triple and
//! the squeezing spectra built from it.
//!
//! Operator ordering everywhere is (a1, a2, a1†, a2†); frequencies are
//! relative to the carrier.


use crate::error::{Error, Result};
use crate::gaussian;
use crate::linalg::{cr, CMat4, C64, ONE, ZERO};

/// Stationary two-field power spectrum model: P(ω) is the Fourier transform
/// of the two-time correlation matrix of (a1, a2, a1†, a2†).
///
/// Implementations hold only immutable parameters; evaluation is re-entrant
/// and frequency sweeps may run concurrently.
pub trait PowerSpectrum: Send + Sync {
    /// The matrix P(ω) at frequency ω (relative to the carrier).
    fn eval(&self, omega: f64) -> CMat4;

    /// Labels of the ordered field pair.
    fn labels(&self) -> (&str, &str) {
        ("field-1", "field-2")
    }

    /// Bandwidth populated by signal photons, used by detection-validity
    /// guards and quadrature truncation.
    fn signal_bandwidth(&self) -> f64;

    /// Limit of P(ω) for |ω| → ∞; the vacuum floor for any damped system.
    fn asymptotic(&self) -> CMat4 {
        vacuum_floor()
    }

    /// Frequencies near which P(ω) has narrow features. Quadrature panels
    /// are seeded here.
    fn resonances(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<T: PowerSpectrum + ?Sized> PowerSpectrum for &T {
    fn eval(&self, omega: f64) -> CMat4 {
        (**self).eval(omega)
    }

    fn labels(&self) -> (&str, &str) {
        (**self).labels()
    }

    fn signal_bandwidth(&self) -> f64 {
        (**self).signal_bandwidth()
    }

    fn asymptotic(&self) -> CMat4 {
        (**self).asymptotic()
    }

    fn resonances(&self) -> Vec<f64> {
        (**self).resonances()
    }
}

/// Vacuum power spectrum: the only nonzero entries are ⟨a_j a_j†⟩ = 1.
pub fn vacuum_floor() -> CMat4 {
    let mut y = CMat4::zeros();
    y[(0, 2)] = ONE;
    y[(1, 3)] = ONE;
    y
}

/// The block form [[0, I2], [-I2, 0]] entering the symplectic identity of
/// power spectrum matrices.
pub fn symplectic_block() -> CMat4 {
    let mut j = CMat4::zeros();
    j[(0, 2)] = ONE;
    j[(1, 3)] = ONE;
    j[(2, 0)] = -ONE;
    j[(3, 1)] = -ONE;
    j
}

/// Spectral correlations of two narrow modes at opposite sidebands:
/// populations n± and the pair correlation m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeSpectralCorrelation {
    pub n_plus: f64,
    pub n_minus: f64,
    pub m: C64,
}

impl TwoModeSpectralCorrelation {
    pub fn new(n_plus: f64, n_minus: f64, m: C64) -> Result<Self> {
        if n_plus < -1e-9 || n_minus < -1e-9 {
            return Err(Error::NonPhysical(format!(
                "negative sideband population (n+ = {n_plus:.3e}, n- = {n_minus:.3e})"
            )));
        }
        Ok(Self {
            n_plus,
            n_minus,
            m,
        })
    }

    pub fn vacuum() -> Self {
        Self {
            n_plus: 0.0,
            n_minus: 0.0,
            m: ZERO,
        }
    }
}

const IMAG_TRUNCATE: f64 = 1e-7;

/// Read the correlation triple of the sideband pair (+Ω of field 1, -Ω of
/// field 2) off the power spectrum matrix:
/// n+ = {P(-Ω)}_{3,1}, n- = {P(Ω)}_{4,2}, m = {P(Ω)}_{1,2}.
pub fn extract_nm(model: &dyn PowerSpectrum, omega: f64) -> Result<TwoModeSpectralCorrelation> {
    let p_pos = model.eval(omega);
    let p_neg = model.eval(-omega);
    let n_plus = real_part(p_neg[(2, 0)], "n+")?;
    let n_minus = real_part(p_pos[(3, 1)], "n-")?;
    TwoModeSpectralCorrelation::new(n_plus, n_minus, p_pos[(0, 1)])
}

fn real_part(z: C64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAG_TRUNCATE {
        return Err(Error::NonPhysical(format!(
            "{what} has imaginary residue {:.3e}",
            z.im
        )));
    }
    Ok(z.re)
}

fn kron_eq(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12 * a.abs().max(1.0)
}

/// Correlation matrix of the four filtered operators
/// (a1(Ω), a2(Ω'), a1†(-Ω), a2†(-Ω')) in the narrow-band limit. Entries are
/// populated from P only where the Kronecker-delta selection rules allow;
/// frequency equality is decided with a relative tolerance.
pub fn assemble_pair_correlation(
    model: &dyn PowerSpectrum,
    omega: f64,
    omega_p: f64,
) -> CMat4 {
    let p = |w: f64, r: usize, c: usize| model.eval(w)[(r, c)];
    let d_opp = kron_eq(omega, -omega_p);
    let d_same = kron_eq(omega, omega_p);
    let d_zero = kron_eq(omega, 0.0) && kron_eq(omega_p, 0.0);
    let sel = |cond: bool, v: C64| if cond { v } else { ZERO };

    let mut out = CMat4::zeros();
    out[(0, 0)] = sel(d_zero, p(0.0, 0, 0));
    out[(0, 1)] = sel(d_opp, p(omega, 0, 1));
    out[(0, 2)] = p(omega, 0, 2);
    out[(0, 3)] = sel(d_same, p(omega, 0, 3));

    out[(1, 0)] = sel(d_opp, p(omega_p, 1, 0));
    out[(1, 1)] = sel(d_zero, p(0.0, 1, 1));
    out[(1, 2)] = sel(d_same, p(omega_p, 1, 2));
    out[(1, 3)] = p(omega_p, 1, 3);

    out[(2, 0)] = p(-omega, 2, 0);
    out[(2, 1)] = sel(d_same, p(-omega, 2, 1));
    out[(2, 2)] = sel(d_zero, p(0.0, 2, 2));
    out[(2, 3)] = sel(d_opp, p(-omega, 2, 3));

    out[(3, 0)] = sel(d_same, p(-omega_p, 3, 0));
    out[(3, 1)] = p(-omega_p, 3, 1);
    out[(3, 2)] = sel(d_opp, p(-omega_p, 3, 2));
    out[(3, 3)] = sel(d_zero, p(0.0, 3, 3));
    out
}

/// Variance of the weighted composite quadrature,
/// ΔX = 1 + [2 n+ ξ+² + 2 n- ξ-² + 2 ξ+ ξ- (m e^{i(θ+ + θ-)} + c.c.)] /
/// (ξ+² + ξ-²). Only the phase sum θ+ + θ- enters.
pub fn composite_variance(
    c: &TwoModeSpectralCorrelation,
    theta_plus: f64,
    theta_minus: f64,
    xi_plus: f64,
    xi_minus: f64,
) -> Result<f64> {
    let norm = xi_plus * xi_plus + xi_minus * xi_minus;
    if norm == 0.0 {
        return Err(Error::Domain("composite weights both zero".into()));
    }
    let phase = C64::from_polar(1.0, theta_plus + theta_minus);
    let cross = 2.0 * (c.m * phase).re;
    let num = 2.0 * c.n_plus * xi_plus * xi_plus
        + 2.0 * c.n_minus * xi_minus * xi_minus
        + 2.0 * xi_plus * xi_minus * cross;
    Ok(1.0 + num / norm)
}

/// Phase-optimized squeezing spectrum S = 1 + n+ + n- - 2|m|, the minimum of
/// the symmetric-weight composite variance over the quadrature phases.
pub fn squeezing_s(c: &TwoModeSpectralCorrelation) -> f64 {
    1.0 + c.n_plus + c.n_minus - 2.0 * c.m.norm()
}

/// Globally optimized squeezing spectrum
/// S_min = 1 + n+ + n- - sqrt(4|m|² + (n+ - n-)²), also the smallest
/// symplectic eigenvalue of the partially transposed two-mode covariance.
pub fn squeezing_s_min(c: &TwoModeSpectralCorrelation) -> f64 {
    let d = c.n_plus - c.n_minus;
    1.0 + c.n_plus + c.n_minus - (4.0 * c.m.norm_sqr() + d * d).sqrt()
}

/// Entanglement of the sideband pair: n+ n- < |m|² (strict; the boundary is
/// classified as not entangled). Equivalent to S_min < 1.
pub fn is_entangled(c: &TwoModeSpectralCorrelation) -> bool {
    c.n_plus * c.n_minus < c.m.norm_sqr()
}

/// Max-entry residual of P(Ω) - P(-Ω)ᵀ - [[0, I2], [-I2, 0]].
pub fn check_symplectic_identity(model: &dyn PowerSpectrum, omega: f64) -> f64 {
    let r = model.eval(omega) - model.eval(-omega).transpose() - symplectic_block();
    crate::linalg::max_abs(&r)
}

/// Max-entry residual of the conjugation property
/// {P(Ω)}_{1,2}* = {P(-Ω)}_{3,4}.
pub fn check_conjugation_identity(model: &dyn PowerSpectrum, omega: f64) -> f64 {
    (model.eval(omega)[(0, 1)].conj() - model.eval(-omega)[(2, 3)]).norm()
}

/// Symplectic eigenvalue ν(Ω) of the sideband pair, computed through the
/// covariance route of the Gaussian module. Equals `squeezing_s_min` for
/// physical correlations; exposed for cross-validation.
pub fn nu_from_covariance(c: &TwoModeSpectralCorrelation) -> Result<f64> {
    let cov = gaussian::two_mode_covariance_from_nm(c.n_plus, c.n_minus, c.m);
    gaussian::symplectic_nu_oracle(&cov)
}

/// Wrapper that scales a single entry of an inner model; a deliberately
/// broken model used to exercise the structure checks.
pub struct CorruptedModel<M> {
    pub inner: M,
    pub row: usize,
    pub col: usize,
    pub factor: f64,
}

impl<M: PowerSpectrum> PowerSpectrum for CorruptedModel<M> {
    fn eval(&self, omega: f64) -> CMat4 {
        let mut p = self.inner.eval(omega);
        p[(self.row, self.col)] *= cr(self.factor);
        p
    }

    fn signal_bandwidth(&self) -> f64 {
        self.inner.signal_bandwidth()
    }

    fn asymptotic(&self) -> CMat4 {
        self.inner.asymptotic()
    }

    fn resonances(&self) -> Vec<f64> {
        self.inner.resonances()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMat4;
    use crate::models::{NopaModel, VacuumModel};
    use crate::rng::SplitMix64;
    use approx::assert_relative_eq;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn vacuum_extraction_is_trivial() {
        let c = extract_nm(&VacuumModel, 0.7).unwrap();
        assert_eq!((c.n_plus, c.n_minus), (0.0, 0.0));
        assert_eq!(c.m, ZERO);
        assert!(!is_entangled(&c));
        assert_eq!(squeezing_s(&c), 1.0);
    }

    #[test]
    fn composite_variance_examples() {
        let vac = TwoModeSpectralCorrelation::vacuum();
        assert_relative_eq!(
            composite_variance(&vac, 0.3, -0.8, 1.0, 2.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );

        let c = TwoModeSpectralCorrelation::new(1.0, 1.0, cr(SQRT2)).unwrap();
        let v = composite_variance(&c, std::f64::consts::PI, 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(v, 3.0 - 2.0 * SQRT2, epsilon = 1e-12);
        assert!(composite_variance(&c, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn composite_variance_phase_shift_identity() {
        let mut rng = SplitMix64::new(10);
        for _ in 0..100 {
            let (n1, n2, m) = crate::sampling::random_physical_nm(&mut rng);
            let c = TwoModeSpectralCorrelation::new(n1, n2, m).unwrap();
            let tp = rng.range(0.0, 6.0);
            let tm = rng.range(0.0, 6.0);
            let s = rng.range(-3.0, 3.0);
            let xp = rng.range(0.1, 2.0);
            let xm = rng.range(0.1, 2.0);
            let v1 = composite_variance(&c, tp, tm, xp, xm).unwrap();
            let v2 = composite_variance(&c, tp + s, tm - s, xp, xm).unwrap();
            assert_relative_eq!(v1, v2, epsilon = 1e-12, max_relative = 1e-12);
            // The π/2-shifted conjugate quadrature has the same variance.
            let v3 = composite_variance(
                &c,
                tp + std::f64::consts::FRAC_PI_2,
                tm - std::f64::consts::FRAC_PI_2,
                xp,
                xm,
            )
            .unwrap();
            assert_relative_eq!(v1, v3, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn squeezing_examples() {
        let c = TwoModeSpectralCorrelation::new(1.0, 2.0, ZERO).unwrap();
        assert_relative_eq!(squeezing_s(&c), 4.0, epsilon = 1e-15);

        let c = TwoModeSpectralCorrelation::new(1.0, 2.0, ONE).unwrap();
        assert_relative_eq!(squeezing_s_min(&c), 4.0 - 5.0f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn s_minimization_over_phase_grid() {
        let mut rng = SplitMix64::new(77);
        for _ in 0..20 {
            let (n1, n2, m) = crate::sampling::random_physical_nm(&mut rng);
            let c = TwoModeSpectralCorrelation::new(n1, n2, m).unwrap();
            let mut best = f64::INFINITY;
            for k in 0..10_000 {
                let th = std::f64::consts::TAU * k as f64 / 10_000.0;
                best = best.min(composite_variance(&c, th, 0.0, 1.0, 1.0).unwrap());
            }
            let s = squeezing_s(&c);
            assert!(best >= s - 1e-10, "grid found lower than closed form");
            assert!(best - s < 1e-6, "grid {best} vs closed {s}");
        }
    }

    #[test]
    fn smin_bounds_and_predicate_equivalence() {
        let mut rng = SplitMix64::new(123);
        for _ in 0..1000 {
            let (n1, n2, m) = crate::sampling::random_physical_nm(&mut rng);
            let c = TwoModeSpectralCorrelation::new(n1, n2, m).unwrap();
            let s = squeezing_s(&c);
            let smin = squeezing_s_min(&c);
            assert!(smin <= s + 1e-12);
            if (n1 - n2).abs() < 1e-15 {
                assert_relative_eq!(smin, s, epsilon = 1e-12);
            }
            assert_eq!(is_entangled(&c), smin < 1.0 - 1e-14, "predicate mismatch");
        }
    }

    #[test]
    fn smin_equals_covariance_nu() {
        let mut rng = SplitMix64::new(321);
        for _ in 0..200 {
            let (n1, n2, m) = crate::sampling::random_physical_nm(&mut rng);
            let c = TwoModeSpectralCorrelation::new(n1, n2, m).unwrap();
            let nu = nu_from_covariance(&c).unwrap();
            assert_relative_eq!(squeezing_s_min(&c), nu, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn pair_correlation_delta_structure() {
        let model = NopaModel::new(1.0, 0.5).unwrap();
        // Incommensurate nonzero frequencies: only the delta-free column
        // pairs (1,3) and (2,4) survive.
        let a = assemble_pair_correlation(&model, 1.0, 2.0);
        assert_eq!(a[(0, 1)], ZERO);
        assert_eq!(a[(1, 0)], ZERO);
        assert_eq!(a[(0, 3)], ZERO);
        assert_eq!(a[(0, 0)], ZERO);
        assert!(a[(0, 2)].norm() > 0.0);
        assert!(a[(3, 1)].norm() > 0.0);

        // At Ω = Ω' = 0 the matrix reduces to P(0).
        let a0 = assemble_pair_correlation(&model, 0.0, 0.0);
        assert!(crate::linalg::max_abs_diff(&a0, &model.eval(0.0)) < 1e-14);

        // Opposite sidebands reproduce the (n, m) block structure.
        let w = 0.4;
        let a = assemble_pair_correlation(&model, w, -w);
        let c = extract_nm(&model, w).unwrap();
        assert_relative_eq!(a[(0, 1)].re, c.m.re, epsilon = 1e-12);
        assert_relative_eq!(a[(2, 0)].re, c.n_plus, epsilon = 1e-12);
        assert_relative_eq!(a[(3, 1)].re, c.n_minus, epsilon = 1e-12);
        assert_eq!(a[(0, 0)], ZERO);
        assert_eq!(a[(1, 2)], ZERO);
    }

    #[test]
    fn symplectic_identity_residuals() {
        assert_eq!(check_symplectic_identity(&VacuumModel, 0.3), 0.0);
        let model = NopaModel::new(1.0, 0.6).unwrap();
        for w in [-3.0, -0.5, 0.0, 0.2, 1.7] {
            assert!(check_symplectic_identity(&model, w) < 1e-12);
            assert!(check_conjugation_identity(&model, w) < 1e-12);
        }
        let bad = CorruptedModel {
            inner: NopaModel::new(1.0, 0.6).unwrap(),
            row: 0,
            col: 2,
            factor: 1.1,
        };
        assert!(check_symplectic_identity(&bad, 0.2) > 0.05);
    }

    struct ImaginaryPopulation;

    impl PowerSpectrum for ImaginaryPopulation {
        fn eval(&self, _omega: f64) -> CMat4 {
            let mut p = vacuum_floor();
            p[(2, 0)] = crate::linalg::ci(1e-3); // population with a large imaginary part
            p
        }

        fn signal_bandwidth(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn extract_rejects_imaginary_populations() {
        assert!(matches!(
            extract_nm(&ImaginaryPopulation, 0.4),
            Err(crate::error::Error::NonPhysical(_))
        ));
    }

    #[test]
    fn nopa_is_entangled_everywhere() {
        let model = NopaModel::new(1.0, 0.5).unwrap();
        for w in [0.0, 0.3, 1.0, 2.5] {
            let c = extract_nm(&model, w).unwrap();
            assert!(is_entangled(&c), "NOPA output entangled at ω = {w}");
            assert!(squeezing_s_min(&c) < 1.0);
        }
    }
}
