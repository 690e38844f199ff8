//! Reference power-spectrum models: vacuum, a below-threshold nondegenerate
//! parametric amplifier (the single-pole toy used by convergence studies),
//! and the field-duplication adapter that feeds single-field detection.

use crate::error::{Error, Result};
use crate::linalg::{cr, CMat4, C64};
use crate::spectral::{vacuum_floor, PowerSpectrum};

/// Both fields in vacuum; P(ω) is the constant vacuum floor.
pub struct VacuumModel;

impl PowerSpectrum for VacuumModel {
    fn eval(&self, _omega: f64) -> CMat4 {
        vacuum_floor()
    }

    fn labels(&self) -> (&str, &str) {
        ("vacuum-1", "vacuum-2")
    }

    fn signal_bandwidth(&self) -> f64 {
        0.0
    }
}

/// Two-sided nondegenerate parametric amplifier below threshold: two cavity
/// modes with equal decay rate κ coupled by a pair-creation interaction of
/// strength χ < κ, each emptying into its own output field. The outputs are
/// a two-mode squeezed pair with poles of widths κ ± χ.
pub struct NopaModel {
    pub kappa: f64,
    pub chi: f64,
}

impl NopaModel {
    pub fn new(kappa: f64, chi: f64) -> Result<Self> {
        if kappa <= 0.0 {
            return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
        }
        if chi.abs() >= kappa {
            return Err(Error::Unstable(chi.abs() - kappa));
        }
        Ok(Self { kappa, chi })
    }

    /// Narrowest correlation width; the inverse memory time of the output.
    pub fn linewidth(&self) -> f64 {
        self.kappa - self.chi.abs()
    }

    fn g_h(&self, omega: f64) -> (C64, C64) {
        let d = C64::new(self.kappa, -omega);
        let denom = d * d - cr(self.chi * self.chi);
        let g = cr(self.kappa * self.kappa + self.chi * self.chi + omega * omega) / denom;
        let h = cr(2.0 * self.kappa * self.chi) / denom;
        (g, h)
    }
}

impl PowerSpectrum for NopaModel {
    fn eval(&self, omega: f64) -> CMat4 {
        let (g, _) = self.g_h(omega);
        let (_, h_m) = self.g_h(-omega);
        let mut p = CMat4::zeros();
        let m = g * h_m;
        let n = h_m.norm_sqr();
        p[(0, 1)] = m;
        p[(1, 0)] = m;
        p[(0, 2)] = cr(g.norm_sqr());
        p[(1, 3)] = cr(g.norm_sqr());
        p[(2, 0)] = cr(n);
        p[(3, 1)] = cr(n);
        let md = h_m.conj() * g.conj();
        p[(2, 3)] = md;
        p[(3, 2)] = md;
        p
    }

    fn labels(&self) -> (&str, &str) {
        ("nopa-out-1", "nopa-out-2")
    }

    fn signal_bandwidth(&self) -> f64 {
        self.kappa + self.chi.abs()
    }

    fn resonances(&self) -> Vec<f64> {
        vec![0.0]
    }
}

/// Which field of an ordered pair a single-field operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldIndex {
    One,
    Two,
}

impl FieldIndex {
    pub(crate) fn offset(self) -> usize {
        match self {
            FieldIndex::One => 0,
            FieldIndex::Two => 1,
        }
    }
}

/// Pair model (a_j, a_j) built from one field of an inner pair model; the
/// spectral pair probed by single-field homodyne detection.
///
/// The two slots hold the same mode, so cross-slot commutators do not
/// vanish and the independent-pair symplectic identity does not apply;
/// only the (n+, n-, m) entry positions are meaningful.
pub struct DuplicatedField<M> {
    pub inner: M,
    pub field: FieldIndex,
}

impl<M: PowerSpectrum> PowerSpectrum for DuplicatedField<M> {
    fn eval(&self, omega: f64) -> CMat4 {
        let p = self.inner.eval(omega);
        let j = self.field.offset();
        let map = [j, j, 2 + j, 2 + j];
        let mut out = CMat4::zeros();
        for r in 0..4 {
            for c in 0..4 {
                out[(r, c)] = p[(map[r], map[c])];
            }
        }
        out
    }

    fn signal_bandwidth(&self) -> f64 {
        self.inner.signal_bandwidth()
    }

    fn resonances(&self) -> Vec<f64> {
        self.inner.resonances()
    }
}
