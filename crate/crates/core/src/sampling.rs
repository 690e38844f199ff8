//! Deterministic generators of random physical two-mode Gaussian states,
//! built by acting with random symplectic transformations on vacuum. Used by
//! the validation sweeps and the test suites.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::gaussian::{quadrature_map, CorrelationMatrixA, CovarianceMatrix, RMat4};
use crate::linalg::{cr, C64};
use crate::rng::SplitMix64;

/// Rotation of each mode by its own angle; a local symplectic map.
pub fn local_rotation(theta1: f64, theta2: f64) -> RMat4 {
    let mut m = RMat4::zeros();
    for (k, th) in [theta1, theta2].into_iter().enumerate() {
        let (s, c) = th.sin_cos();
        let o = 2 * k;
        m[(o, o)] = c;
        m[(o, o + 1)] = s;
        m[(o + 1, o)] = -s;
        m[(o + 1, o + 1)] = c;
    }
    m
}

fn local_squeeze(r1: f64, r2: f64) -> RMat4 {
    RMat4::from_diagonal(&nalgebra::Vector4::new(
        r1.exp(),
        (-r1).exp(),
        r2.exp(),
        (-r2).exp(),
    ))
}

fn beamsplitter(theta: f64) -> RMat4 {
    let (s, c) = theta.sin_cos();
    let mut m = RMat4::zeros();
    for k in 0..2 {
        m[(k, k)] = c;
        m[(k, k + 2)] = s;
        m[(k + 2, k)] = -s;
        m[(k + 2, k + 2)] = c;
    }
    m
}

fn two_mode_squeeze(r: f64) -> RMat4 {
    let ch = r.cosh();
    let sh = r.sinh();
    RMat4::from_row_slice(&[
        ch, 0.0, sh, 0.0, //
        0.0, ch, 0.0, -sh, //
        sh, 0.0, ch, 0.0, //
        0.0, -sh, 0.0, ch,
    ])
}

/// A random element of Sp(4, R), composed from local rotations, local
/// squeezers, a beamsplitter and a two-mode squeezer. Squeezing amplitudes
/// are kept moderate so the states stay well conditioned.
pub fn random_symplectic(rng: &mut SplitMix64) -> RMat4 {
    let tau = std::f64::consts::TAU;
    local_rotation(rng.range(0.0, tau), rng.range(0.0, tau))
        * local_squeeze(rng.range(-0.8, 0.8), rng.range(-0.8, 0.8))
        * beamsplitter(rng.range(0.0, tau))
        * two_mode_squeeze(rng.range(-1.0, 1.0))
        * local_rotation(rng.range(0.0, tau), rng.range(0.0, tau))
}

/// Covariance of a random pure two-mode Gaussian state, C = S Sᵀ.
pub fn random_covariance(rng: &mut SplitMix64) -> CovarianceMatrix {
    let s = random_symplectic(rng);
    CovarianceMatrix::new(s * s.transpose()).expect("S Sᵀ is symmetric")
}

/// Operator correlations of a random physical state. Reconstructs the full
/// (non-symmetric) correlation matrix from the covariance by restoring the
/// commutator part.
pub fn random_correlation_a(rng: &mut SplitMix64) -> CorrelationMatrixA {
    let c = random_covariance(rng);
    correlation_from_covariance(&c)
}

/// Invert C = T sym(A) Tᵀ and restore the canonical antisymmetric part.
pub fn correlation_from_covariance(c: &CovarianceMatrix) -> CorrelationMatrixA {
    let t = quadrature_map();
    let cc: Matrix4<C64> = c.entries().map(cr);
    // T⁻¹ = Tᴴ/2, (Tᵀ)⁻¹ = T̄/2.
    let sym = t.adjoint() * cc * t.map(|z| z.conj()) / cr(4.0);
    let mut a = sym;
    a[(0, 2)] += cr(0.5);
    a[(2, 0)] -= cr(0.5);
    a[(1, 3)] += cr(0.5);
    a[(3, 1)] -= cr(0.5);
    CorrelationMatrixA::new(a).expect("reconstructed correlations are consistent")
}

/// Random physical spectral-correlation triple: populations n± >= 0 and a
/// complex m within the physicality bound |m|² <= n+ n- + min(n+, n-).
pub fn random_physical_nm(rng: &mut SplitMix64) -> (f64, f64, Complex64) {
    let n1 = rng.range(0.0, 4.0);
    let n2 = rng.range(0.0, 4.0);
    let bound = (n1 * n2 + n1.min(n2)).sqrt();
    let mag = bound * rng.uniform().sqrt() * 0.999;
    let phase = rng.range(0.0, std::f64::consts::TAU);
    (n1, n2, Complex64::from_polar(mag, phase))
}
