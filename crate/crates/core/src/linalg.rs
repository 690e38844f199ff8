//! Dense complex linear-algebra helpers for the 4x4 / 6x6 matrices that
//! appear throughout: characteristic-polynomial eigenvalues for complex
//! drift matrices and condition-monitored inverses.

use nalgebra::{Matrix4, SMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat4 = Matrix4<C64>;
pub type CMat6 = SMatrix<C64, 6, 6>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[inline]
pub fn ci(x: f64) -> C64 {
    C64::new(0.0, x)
}

/// Coefficients of det(λI - M) = λ^4 + c3 λ^3 + c2 λ^2 + c1 λ + c0,
/// from the Faddeev–LeVerrier trace recursion.
pub fn charpoly4(m: &CMat4) -> [C64; 4] {
    let m2 = m * m;
    let m3 = m2 * m;
    let m4 = m3 * m;
    let t1 = m.trace();
    let t2 = m2.trace();
    let t3 = m3.trace();
    let t4 = m4.trace();

    let e1 = t1;
    let e2 = (t1 * t1 - t2) / cr(2.0);
    let e3 = (t1 * t1 * t1 - cr(3.0) * t1 * t2 + cr(2.0) * t3) / cr(6.0);
    let e4 = (t1 * t1 * t1 * t1 - cr(6.0) * t1 * t1 * t2 + cr(3.0) * t2 * t2
        + cr(8.0) * t1 * t3
        - cr(6.0) * t4)
        / cr(24.0);

    // λ^4 - e1 λ^3 + e2 λ^2 - e3 λ + e4
    [-e1, e2, -e3, e4]
}

/// All roots of `λ^4 + c[0] λ^3 + c[1] λ^2 + c[2] λ + c[3]` by the
/// Durand–Kerner (Weierstrass) iteration.
pub fn quartic_roots(c: &[C64; 4]) -> Result<[C64; 4]> {
    let eval = |z: C64| (((z + c[0]) * z + c[1]) * z + c[2]) * z + c[3];

    // Radius bound: 1 + max |c_k| contains all roots.
    let radius = 1.0 + c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z = [ZERO; 4];
    let mut acc = ONE;
    for zk in z.iter_mut() {
        acc *= seed;
        *zk = acc * cr(radius);
    }

    let tol = 1e-15 * radius.max(1.0);
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..4 {
            let mut denom = ONE;
            for j in 0..4 {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // Collided iterates; nudge apart.
                z[i] += cr(tol.max(1e-12));
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < tol {
            break;
        }
    }

    // Repeated roots stall the per-root steps at ~sqrt(eps); accept the
    // cluster when the elementary symmetric functions check out (Vieta).
    let sum: C64 = z.iter().sum();
    let prod: C64 = z.iter().product();
    let pair_sum = z[0] * z[1]
        + z[0] * z[2]
        + z[0] * z[3]
        + z[1] * z[2]
        + z[1] * z[3]
        + z[2] * z[3];
    let scale = radius.max(1.0);
    if (sum + c[0]).norm() > 1e-7 * scale
        || (pair_sum - c[1]).norm() > 1e-7 * scale * scale
        || (prod - c[3]).norm() > 1e-7 * scale.powi(4)
    {
        return Err(Error::EigenFailure);
    }
    Ok(z)
}

/// Eigenvalues of a general complex 4x4 matrix.
pub fn eigenvalues4(m: &CMat4) -> Result<[C64; 4]> {
    // Scale to unit norm first; Durand–Kerner tolerances are relative.
    let scale = m.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok([ZERO; 4]);
    }
    let scaled = m.map(|x| x / cr(scale));
    let roots = quartic_roots(&charpoly4(&scaled))?;
    Ok(roots.map(|r| r * cr(scale)))
}

/// Inverse with an infinity-norm condition estimate. Errors once the
/// estimate exceeds `cond_limit`.
pub fn try_inverse4(m: &CMat4, cond_limit: f64) -> Result<CMat4> {
    let inv = m
        .try_inverse()
        .ok_or(Error::SingularMatrix(f64::INFINITY))?;
    let cond = inf_norm4(m) * inf_norm4(&inv);
    if !cond.is_finite() || cond > cond_limit {
        return Err(Error::SingularMatrix(cond));
    }
    Ok(inv)
}

fn inf_norm4(m: &CMat4) -> f64 {
    (0..4)
        .map(|i| (0..4).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest entry modulus; the scale used for relative matrix comparisons.
pub fn max_abs(m: &CMat4) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Entrywise maximum modulus of the difference.
pub fn max_abs_diff(a: &CMat4, b: &CMat4) -> f64 {
    max_abs(&(a - b))
}
