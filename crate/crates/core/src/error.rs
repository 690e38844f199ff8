use thiserror::Error;

/// Errors surfaced by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Input correlations violate a structural requirement (commutator
    /// consistency, imaginary residue on a population, ...).
    #[error("non-physical correlation data: {0}")]
    NonPhysical(String),

    /// An eigenvalue iteration did not converge.
    #[error("eigenvalue computation failed to converge")]
    EigenFailure,

    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failed: estimated error {err:.3e} exceeds tolerance {tol:.3e}")]
    QuadratureFailure { tol: f64, err: f64 },

    /// A linear solve hit a numerically singular matrix.
    #[error("matrix numerically singular (condition estimate {0:.3e})")]
    SingularMatrix(f64),

    /// The optomechanical drift matrix has an eigenvalue with non-negative
    /// real part; stationary spectra do not exist.
    #[error("system unstable: max Re(eigenvalue) = {0:.6e}")]
    Unstable(f64),

    /// A sideband frequency of zero was passed where a non-degenerate
    /// sideband pair is required.
    #[error("degenerate sideband frequency (= 0)")]
    DegenerateFrequency,

    /// Unknown scenario preset name.
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
