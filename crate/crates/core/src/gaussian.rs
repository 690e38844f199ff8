//! Two-mode Gaussian-state analysis: operator correlation matrices,
//! quadrature covariance, standard form, symplectic eigenvalues,
//! logarithmic negativity and the Duan two-mode squeezing witness.
//!
//! Conventions: quadratures are x = e^{iθ} b + e^{-iθ} b†, so vacuum has
//! unit variance and the covariance of vacuum is the identity. The
//! covariance ordering is (x1, p1, x2, p2).

use nalgebra::{Matrix2, Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::linalg::{cr, CMat4, C64, ONE, ZERO};

pub type RMat4 = Matrix4<f64>;

/// Map from (b1, b2, b1†, b2†) bilinears to quadrature bilinears:
/// C = T (A + Aᵀ)/2 Tᵀ.
pub fn quadrature_map() -> CMat4 {
    let i = C64::new(0.0, 1.0);
    CMat4::from_row_slice(&[
        ONE, ZERO, ONE, ZERO, //
        -i, ZERO, i, ZERO, //
        ZERO, ONE, ZERO, ONE, //
        ZERO, -i, ZERO, i,
    ])
}

/// Symplectic form for the (x1, p1, x2, p2) ordering.
pub fn symplectic_form() -> RMat4 {
    RMat4::from_row_slice(&[
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    ])
}

/// Partial-transpose reflection diag(1, -1, 1, 1).
pub fn partial_transpose() -> RMat4 {
    RMat4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, 1.0, 1.0))
}

const COMMUTATOR_TOL: f64 = 1e-10;

/// Operator-ordered correlation matrix ⟨b_j b_k⟩ for the vector
/// (b1, b2, b1†, b2†).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrixA {
    entries: CMat4,
}

impl CorrelationMatrixA {
    /// Validates commutator consistency: the antisymmetric part must carry
    /// [b_j, b_j†] = 1 and commuting cross-mode operators.
    pub fn new(entries: CMat4) -> Result<Self> {
        let comm1 = entries[(0, 2)] - entries[(2, 0)] - ONE;
        let comm2 = entries[(1, 3)] - entries[(3, 1)] - ONE;
        if comm1.norm() > COMMUTATOR_TOL || comm2.norm() > COMMUTATOR_TOL {
            return Err(Error::NonPhysical(format!(
                "commutator residues {:.3e}, {:.3e}",
                comm1.norm(),
                comm2.norm()
            )));
        }
        let cross = entries[(0, 1)] - entries[(1, 0)];
        if cross.norm() > COMMUTATOR_TOL {
            return Err(Error::NonPhysical(format!(
                "⟨b1 b2⟩ ≠ ⟨b2 b1⟩ (residue {:.3e})",
                cross.norm()
            )));
        }
        Ok(Self { entries })
    }

    /// Standard-form correlations for real parameters (n1, n2, m+, m-).
    pub fn from_standard(n1: f64, n2: f64, m_plus: f64, m_minus: f64) -> Self {
        let [n1c, n2c, mp, mm] = [cr(n1), cr(n2), cr(m_plus), cr(m_minus)];
        let one = ONE;
        Self {
            entries: CMat4::from_row_slice(&[
                ZERO,
                mm,
                n1c + one,
                mp,
                mm,
                ZERO,
                mp,
                n2c + one,
                n1c,
                mp,
                ZERO,
                mm,
                mp,
                n2c,
                mm,
                ZERO,
            ]),
        }
    }

    /// Correlations of two spectral components at opposite sidebands:
    /// populations n1, n2 and the complex pair correlation m,
    /// with ⟨b_j b_k†⟩ = 0 for j ≠ k.
    pub fn from_nm(n1: f64, n2: f64, m: C64) -> Self {
        let [n1c, n2c] = [cr(n1), cr(n2)];
        let mc = m.conj();
        Self {
            entries: CMat4::from_row_slice(&[
                ZERO,
                m,
                n1c + ONE,
                ZERO,
                m,
                ZERO,
                ZERO,
                n2c + ONE,
                n1c,
                ZERO,
                ZERO,
                mc,
                ZERO,
                n2c,
                mc,
                ZERO,
            ]),
        }
    }

    pub fn entries(&self) -> &CMat4 {
        &self.entries
    }
}

/// Real symmetric quadrature covariance in the (x1, p1, x2, p2) ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    entries: RMat4,
}

impl CovarianceMatrix {
    pub fn new(entries: RMat4) -> Result<Self> {
        let asym = (entries - entries.transpose()).abs().max();
        if asym > 1e-12 {
            return Err(Error::NonPhysical(format!(
                "covariance not symmetric (residue {asym:.3e})"
            )));
        }
        let sym = (entries + entries.transpose()) * 0.5;
        Ok(Self { entries: sym })
    }

    pub fn identity() -> Self {
        Self {
            entries: RMat4::identity(),
        }
    }

    pub fn entries(&self) -> &RMat4 {
        &self.entries
    }

    /// Minimum eigenvalue of the Hermitian matrix C + iΣ; non-negative
    /// (up to roundoff) exactly for physical states.
    pub fn physicality_min_eigenvalue(&self) -> f64 {
        let mut h = self.entries.map(cr);
        let sigma = symplectic_form();
        for r in 0..4 {
            for c in 0..4 {
                h[(r, c)] += C64::new(0.0, sigma[(r, c)]);
            }
        }
        let eig = nalgebra::SymmetricEigen::new(h);
        eig.eigenvalues.iter().fold(f64::INFINITY, |m, &x| m.min(x))
    }

    /// Physical within the roundoff allowance of -1e-9 on C + iΣ.
    pub fn is_physical(&self) -> bool {
        self.physicality_min_eigenvalue() >= -1e-9
    }
}

/// Standard-form parameters (a, b, c, c') of the covariance
/// `[[a,0,c,0],[0,a,0,c'],[c,0,b,0],[0,c',0,b]]`, with c >= |c'|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardFormParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub c_prime: f64,
}

impl StandardFormParams {
    pub fn m_plus(&self) -> f64 {
        (self.c + self.c_prime) / 4.0
    }

    pub fn m_minus(&self) -> f64 {
        (self.c - self.c_prime) / 4.0
    }

    pub fn n1(&self) -> f64 {
        (self.a - 1.0) / 2.0
    }

    pub fn n2(&self) -> f64 {
        (self.b - 1.0) / 2.0
    }

    /// Covariance matrix in standard form.
    pub fn covariance(&self) -> CovarianceMatrix {
        let (a, b, c, cp) = (self.a, self.b, self.c, self.c_prime);
        CovarianceMatrix {
            entries: RMat4::from_row_slice(&[
                a, 0.0, c, 0.0, //
                0.0, a, 0.0, cp, //
                c, 0.0, b, 0.0, //
                0.0, cp, 0.0, b,
            ]),
        }
    }
}

/// Quadrature covariance from operator correlations,
/// C = T (A + Aᵀ)/2 Tᵀ. The result is real for any valid A; an imaginary
/// residue above 1e-8 signals a malformed input.
pub fn correlation_to_covariance(a: &CorrelationMatrixA) -> Result<CovarianceMatrix> {
    let t = quadrature_map();
    let sym = (a.entries + a.entries.transpose()) * cr(0.5);
    let c = t * sym * t.transpose();
    let imag = c.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > 1e-8 {
        return Err(Error::NonPhysical(format!(
            "covariance has imaginary residue {imag:.3e}"
        )));
    }
    CovarianceMatrix::new(c.map(|z| z.re))
}

/// Reduce a covariance to its standard-form parameters through the local
/// symplectic invariants det A, det B, det C_off and det C. When the
/// off-diagonal block is numerically zero the correlations c, c' are zero.
pub fn standard_form(c: &CovarianceMatrix) -> StandardFormParams {
    let e = c.entries();
    let blk = |r0: usize, c0: usize| {
        Matrix2::new(
            e[(r0, c0)],
            e[(r0, c0 + 1)],
            e[(r0 + 1, c0)],
            e[(r0 + 1, c0 + 1)],
        )
    };
    let a_blk = blk(0, 0);
    let b_blk = blk(2, 2);
    let off = blk(0, 2);

    let a = a_blk.determinant().max(0.0).sqrt();
    let b = b_blk.determinant().max(0.0).sqrt();

    let scale = e.abs().max().max(1.0);
    if off.abs().max() < 1e-12 * scale {
        return StandardFormParams {
            a,
            b,
            c: 0.0,
            c_prime: 0.0,
        };
    }

    let p = off.determinant();
    let det_c = e.determinant();
    let ab = (a * b).max(f64::MIN_POSITIVE);
    let s = ((a * a * b * b + p * p - det_c) / ab).max(0.0);
    // The split of c² + c'² = s into the two squares loses half the digits
    // when the discriminant vanishes (|c| = |c'|, the opposite-sideband
    // family). Below the resolvable noise floor of s (dominated by the
    // a²b² vs det C cancellation) the collapsed split is the best
    // estimate and keeps m+ exactly zero there.
    let disc_sq = s * s - 4.0 * p * p;
    let s_noise = f64::EPSILON * (a * a * b * b + det_c.abs() + p * p) / ab;
    let (z1, z2) = if disc_sq < 16.0 * s * s_noise {
        (0.5 * s, 0.5 * s)
    } else {
        let z1 = 0.5 * (s + disc_sq.sqrt());
        // Product form keeps the small root accurate: z1 z2 = p².
        (z1, if z1 > 0.0 { (p * p) / z1 } else { 0.0 })
    };

    let c_big = z1.max(0.0).sqrt();
    let c_small = z2.max(0.0).sqrt() * p.signum();
    StandardFormParams {
        a,
        b,
        c: c_big,
        c_prime: if p == 0.0 { 0.0 } else { c_small },
    }
}

/// Smallest symplectic eigenvalue of the partially transposed covariance,
/// from the closed form in terms of the standard-form parameters.
pub fn symplectic_nu_closed(p: &StandardFormParams) -> f64 {
    let (a, b) = (p.a, p.b);
    let (mp, mm) = (p.m_plus(), p.m_minus());
    let apb = a + b;
    let amb = a - b;
    let ratio = amb / apb;
    let inner = (4.0 * mm * mm + amb * amb / 4.0 - 4.0 * ratio * ratio * mp * mp)
        .max(0.0)
        .sqrt();
    let bracket = apb / 2.0 - inner;
    let outer = bracket * bracket - 16.0 * a * b * mp * mp / (apb * apb);
    outer.max(0.0).sqrt()
}

/// Smallest symplectic eigenvalue of the partially transposed covariance by
/// brute force: the spectrum of Σ Π C Π comes in pairs ±iν, so ν_min is the
/// smallest eigenvalue modulus. Kept independent of the closed form above;
/// used for cross-validation.
pub fn symplectic_nu_oracle(c: &CovarianceMatrix) -> Result<f64> {
    let pi = partial_transpose();
    let k = symplectic_form() * pi * c.entries() * pi;
    let schur =
        nalgebra::linalg::Schur::try_new(k, 1e-14, 10_000).ok_or(Error::EigenFailure)?;
    let eig: Vector4<C64> = schur.complex_eigenvalues();
    Ok(eig.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min))
}

/// Logarithmic negativity E_N = max{0, -log2 ν}.
///
/// The main-text display of this quantity prints a `min`; the appendix
/// prints `max`, which is the correct definition for a non-negative
/// entanglement measure and is what we implement.
pub fn log_negativity(nu: f64) -> Result<f64> {
    if nu <= 0.0 || nu.is_nan() {
        return Err(Error::Domain(format!(
            "symplectic eigenvalue must be positive, got {nu}"
        )));
    }
    let nu = nu.max(1e-300);
    Ok((-nu.log2()).max(0.0))
}

/// Duan-type summed variance E_S of the two conjugate composite quadratures
/// with weights ξ and phases φ, for standard-form correlations
/// (n1, n2, m-).
pub fn duan_es(
    n1: f64,
    n2: f64,
    m_minus: f64,
    phi1: f64,
    phi2: f64,
    xi1: f64,
    xi2: f64,
) -> Result<f64> {
    let norm = xi1 * xi1 + xi2 * xi2;
    if norm == 0.0 {
        return Err(Error::Domain("composite weights both zero".into()));
    }
    let num = 2.0 * n1 * xi1 * xi1
        + 2.0 * n2 * xi2 * xi2
        + 4.0 * xi1 * xi2 * m_minus * (phi1 + phi2).cos();
    Ok(2.0 * (1.0 + num / norm))
}

/// Minimum of E_S with its optimizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuanMinimum {
    pub e_s_min: f64,
    /// Optimal φ1 + φ2 (any value is optimal at m- = 0; π is reported).
    pub phi_sum: f64,
    /// Optimal ξ1/ξ2; 1 is reported for the fully degenerate case and
    /// +∞ when all weight belongs on the second mode.
    pub xi_ratio: f64,
}

/// Closed-form minimum of the Duan variance E_S over phases and weights.
/// Satisfies 2ν = E_S_min whenever m+ = 0.
pub fn duan_min(n1: f64, n2: f64, m_minus: f64) -> DuanMinimum {
    let d = n1 - n2;
    let root = (4.0 * m_minus * m_minus + d * d).sqrt();
    let e_s_min = 2.0 * (1.0 + n1 + n2 - root);
    let phi_sum = if m_minus < 0.0 { 0.0 } else { std::f64::consts::PI };
    let xi_ratio = if m_minus == 0.0 {
        if d > 0.0 {
            0.0
        } else if d < 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    } else {
        2.0 * m_minus.abs() / (d + root)
    };
    DuanMinimum {
        e_s_min,
        phi_sum,
        xi_ratio,
    }
}

/// Covariance matrix of two spectral components with populations n1, n2 and
/// complex pair correlation m. A single-mode rotation by arg(m) brings it to
/// standard form with c = -c' = 2|m|.
pub fn two_mode_covariance_from_nm(n1: f64, n2: f64, m: C64) -> CovarianceMatrix {
    let d1 = 2.0 * n1 + 1.0;
    let d2 = 2.0 * n2 + 1.0;
    let re = 2.0 * m.re;
    let im = 2.0 * m.im;
    CovarianceMatrix {
        entries: RMat4::from_row_slice(&[
            d1, 0.0, re, im, //
            0.0, d1, im, -re, //
            re, im, d2, 0.0, //
            im, -re, 0.0, d2,
        ]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::rng::SplitMix64;
    use approx::assert_relative_eq;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn vacuum_a() -> CorrelationMatrixA {
        CorrelationMatrixA::from_standard(0.0, 0.0, 0.0, 0.0)
    }

    #[test]
    fn vacuum_covariance_is_identity() {
        let c = correlation_to_covariance(&vacuum_a()).unwrap();
        assert!((c.entries() - RMat4::identity()).abs().max() < 1e-14);
        assert!(c.is_physical());
    }

    #[test]
    fn two_mode_squeezed_standard_substitution() {
        // n1 = n2 = 1, m- = √2, m+ = 0 maps to a = b = 3, c = -c' = 2√2.
        let a = CorrelationMatrixA::from_standard(1.0, 1.0, 0.0, SQRT2);
        let c = correlation_to_covariance(&a).unwrap();
        let expect = StandardFormParams {
            a: 3.0,
            b: 3.0,
            c: 2.0 * SQRT2,
            c_prime: -2.0 * SQRT2,
        };
        assert!((c.entries() - expect.covariance().entries()).abs().max() < 1e-12);
        let p = standard_form(&c);
        assert_relative_eq!(p.a, 3.0, epsilon = 1e-12);
        assert_relative_eq!(p.c, 2.0 * SQRT2, epsilon = 1e-12);
        assert_relative_eq!(p.c_prime, -2.0 * SQRT2, epsilon = 1e-12);
    }

    #[test]
    fn standard_form_of_identity() {
        let p = standard_form(&CovarianceMatrix::identity());
        assert_eq!((p.a, p.b, p.c, p.c_prime), (1.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn commutator_violation_rejected() {
        let mut e = vacuum_a().entries;
        e[(0, 2)] = cr(1.5); // breaks [b1, b1†] = 1 against entry (2,0) = 0
        e[(2, 0)] = cr(0.2);
        assert!(CorrelationMatrixA::new(e).is_err());
    }

    #[test]
    fn covariance_rejects_imaginary_residue() {
        // ⟨b1 b2⟩ without its conjugate partner leaves an imaginary
        // quadrature covariance.
        let mut e = vacuum_a().entries().clone();
        let i = crate::linalg::ci(1.0);
        e[(0, 1)] = i;
        e[(1, 0)] = i;
        let a = CorrelationMatrixA::new(e).unwrap();
        assert!(matches!(
            correlation_to_covariance(&a),
            Err(crate::error::Error::NonPhysical(_))
        ));
    }

    #[test]
    fn nu_closed_known_values() {
        let vac = StandardFormParams {
            a: 1.0,
            b: 1.0,
            c: 0.0,
            c_prime: 0.0,
        };
        assert_relative_eq!(symplectic_nu_closed(&vac), 1.0, epsilon = 1e-14);

        let tms = StandardFormParams {
            a: 3.0,
            b: 3.0,
            c: 2.0 * SQRT2,
            c_prime: -2.0 * SQRT2,
        };
        assert_relative_eq!(symplectic_nu_closed(&tms), 3.0 - 2.0 * SQRT2, epsilon = 1e-12);
    }

    #[test]
    fn nu_oracle_trivial_and_tms() {
        assert_relative_eq!(
            symplectic_nu_oracle(&CovarianceMatrix::identity()).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        // Two-mode squeezed vacuum with parameter r: ν = e^{-2r}.
        for r in [0.1f64, 0.5, 1.2] {
            let ch = (2.0 * r).cosh();
            let sh = (2.0 * r).sinh();
            let p = StandardFormParams {
                a: ch,
                b: ch,
                c: sh,
                c_prime: -sh,
            };
            let nu = symplectic_nu_oracle(&p.covariance()).unwrap();
            assert_relative_eq!(nu, (-2.0 * r).exp(), epsilon = 1e-10);
        }
    }

    #[test]
    fn closed_form_matches_oracle_on_random_states() {
        let mut rng = SplitMix64::new(0xC0FFEE);
        for _ in 0..300 {
            let c = sampling::random_covariance(&mut rng);
            assert!(c.is_physical(), "sampled state must be physical");
            let nu_c = symplectic_nu_closed(&standard_form(&c));
            let nu_o = symplectic_nu_oracle(&c).unwrap();
            let scale = c.entries().abs().max().max(1.0);
            assert!(
                (nu_c - nu_o).abs() <= 1e-9 * scale,
                "closed {nu_c} vs oracle {nu_o} (scale {scale})"
            );
        }
    }

    #[test]
    fn standard_form_invariant_under_local_rotations() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..100 {
            let c = sampling::random_covariance(&mut rng);
            let p0 = standard_form(&c);
            let th1 = rng.range(0.0, std::f64::consts::TAU);
            let th2 = rng.range(0.0, std::f64::consts::TAU);
            let rot = sampling::local_rotation(th1, th2);
            let c2 = CovarianceMatrix::new(rot * c.entries() * rot.transpose()).unwrap();
            let p1 = standard_form(&c2);
            assert_relative_eq!(p0.a, p1.a, epsilon = 1e-9, max_relative = 1e-9);
            assert_relative_eq!(p0.b, p1.b, epsilon = 1e-9, max_relative = 1e-9);
            // The individual |c|, |c'| split is half-precision when the
            // discriminant degenerates; the invariants cc' and c²+c'² stay
            // tight.
            assert_relative_eq!(p0.c.abs(), p1.c.abs(), epsilon = 1e-6, max_relative = 1e-6);
            assert_relative_eq!(
                p0.c_prime.abs(),
                p1.c_prime.abs(),
                epsilon = 1e-6,
                max_relative = 1e-6
            );
            assert_relative_eq!(
                p0.c * p0.c_prime,
                p1.c * p1.c_prime,
                epsilon = 1e-9,
                max_relative = 1e-9
            );
            assert!(p1.c >= p1.c_prime.abs() - 1e-10, "sign convention c >= |c'|");
        }
    }

    #[test]
    fn log_negativity_values() {
        assert_eq!(log_negativity(1.0).unwrap(), 0.0);
        assert_eq!(log_negativity(2.0).unwrap(), 0.0);
        assert_relative_eq!(log_negativity(0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(
            log_negativity(3.0 - 2.0 * SQRT2).unwrap(),
            2.5431066063272256,
            epsilon = 1e-12
        );
        assert!(log_negativity(0.0).is_err());
        assert!(log_negativity(-1.0).is_err());
    }

    #[test]
    fn duan_es_examples() {
        // Vacuum bound.
        assert_relative_eq!(
            duan_es(0.0, 0.0, 0.0, 0.3, 1.2, 1.0, 0.7).unwrap(),
            2.0,
            epsilon = 1e-14
        );
        // Optimal two-mode squeezed configuration.
        let es = duan_es(1.0, 1.0, SQRT2, std::f64::consts::PI, 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(es, 2.0 * (3.0 - 2.0 * SQRT2), epsilon = 1e-12);
        assert!(duan_es(1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn duan_min_examples() {
        let d = duan_min(0.0, 0.0, 0.0);
        assert_relative_eq!(d.e_s_min, 2.0, epsilon = 1e-14);
        assert_eq!(d.xi_ratio, 1.0);

        let d = duan_min(1.0, 1.0, SQRT2);
        assert_relative_eq!(d.e_s_min, 2.0 * (3.0 - 2.0 * SQRT2), epsilon = 1e-12);
        assert_relative_eq!(d.xi_ratio, 1.0, epsilon = 1e-12);
        assert_relative_eq!(d.phi_sum, std::f64::consts::PI, epsilon = 1e-14);

        let d = duan_min(1.0, 2.0, 1.0);
        assert_relative_eq!(d.e_s_min, 2.0 * (4.0 - 5.0f64.sqrt()), epsilon = 1e-12);
    }

    #[test]
    fn duan_min_matches_grid_search() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let n1 = rng.range(0.0, 3.0);
            let n2 = rng.range(0.0, 3.0);
            let m = rng.range(-2.0, 2.0);
            let closed = duan_min(n1, n2, m).e_s_min;
            let mut best = f64::INFINITY;
            for i in 0..60 {
                let phi = std::f64::consts::TAU * i as f64 / 60.0;
                for j in 1..200 {
                    let eta = std::f64::consts::PI / 2.0 * j as f64 / 200.0;
                    let es = duan_es(n1, n2, m, phi, 0.0, eta.cos(), eta.sin()).unwrap();
                    best = best.min(es);
                }
            }
            assert!(
                best >= closed - 1e-9 && best - closed < 2e-3,
                "grid {best} vs closed {closed}"
            );
        }
    }

    #[test]
    fn covariance_from_nm_examples() {
        let c = two_mode_covariance_from_nm(0.0, 0.0, ZERO);
        assert!((c.entries() - RMat4::identity()).abs().max() < 1e-15);

        let c = two_mode_covariance_from_nm(1.0, 1.0, cr(SQRT2));
        let p = standard_form(&c);
        assert_relative_eq!(p.a, 3.0, epsilon = 1e-12);
        assert_relative_eq!(p.b, 3.0, epsilon = 1e-12);
        assert_relative_eq!(p.c, 2.0 * SQRT2, epsilon = 1e-12);
        assert_relative_eq!(p.c_prime, -2.0 * SQRT2, epsilon = 1e-12);
        assert!(p.m_plus().abs() < 1e-12);
    }

    #[test]
    fn covariance_from_nm_complex_phase_rotates_out() {
        let mut rng = SplitMix64::new(99);
        let mut kept = 0;
        while kept < 50 {
            let (n1, n2, m) = sampling::random_physical_nm(&mut rng);
            // Below |m| ~ 0.01 the determinant route resolves m- only to
            // the sqrt of the cancellation noise; skip that corner.
            if m.norm() < 0.01 {
                continue;
            }
            kept += 1;
            let c = two_mode_covariance_from_nm(n1, n2, m);
            let p = standard_form(&c);
            assert!(p.m_plus().abs() < 1e-9, "m+ must vanish after reduction");
            assert_relative_eq!(p.m_minus(), m.norm(), epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn constructor_covariance_roundtrip() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..50 {
            let c0 = sampling::random_covariance(&mut rng);
            let p = standard_form(&c0);
            let a = CorrelationMatrixA::from_standard(p.n1(), p.n2(), p.m_plus(), p.m_minus());
            let c = correlation_to_covariance(&a).unwrap();
            let e = c.entries();
            // Recover parameters straight off the standard-form covariance.
            assert_relative_eq!((e[(0, 0)] - 1.0) / 2.0, p.n1(), epsilon = 1e-12, max_relative = 1e-12);
            assert_relative_eq!((e[(2, 2)] - 1.0) / 2.0, p.n2(), epsilon = 1e-12, max_relative = 1e-12);
            assert_relative_eq!(
                (e[(0, 2)] + e[(1, 3)]) / 4.0,
                p.m_plus(),
                epsilon = 1e-12,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                (e[(0, 2)] - e[(1, 3)]) / 4.0,
                p.m_minus(),
                epsilon = 1e-12,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn duan_negativity_bridge_at_m_plus_zero() {
        let mut rng = SplitMix64::new(2024);
        for _ in 0..200 {
            let (n1, n2, m) = sampling::random_physical_nm(&mut rng);
            let p = StandardFormParams {
                a: 2.0 * n1 + 1.0,
                b: 2.0 * n2 + 1.0,
                c: 2.0 * m.norm(),
                c_prime: -2.0 * m.norm(),
            };
            let nu = symplectic_nu_closed(&p);
            let es = duan_min(n1, n2, m.norm()).e_s_min;
            assert!((2.0 * nu - es).abs() < 1e-10, "2ν = {} vs E_S = {}", 2.0 * nu, es);
        }
    }
}
