//! Entanglement and squeezing of the spectral components of stationary
//! continuous-wave Gaussian fields.
//!
//! The crate computes squeezing spectra and logarithmic negativity of
//! narrow-band spectral modes directly from the 4x4 power spectrum matrix
//! of a field pair, models the spectral pairs probed by homodyne and
//! heterodyne detection, and applies the machinery to the output light of
//! a two-sided optomechanical cavity, cross-validating every closed form
//! against an independent numerical route.

pub mod detection;
pub mod error;
pub mod filters;
pub mod gaussian;
pub mod linalg;
pub mod models;
pub mod optomech;
pub mod quad;
pub mod rng;
pub mod sampling;
pub mod spectral;
pub mod validate;

pub use detection::{
    heterodyne_t, photocurrent_combination, photocurrent_normalization, probe, strategy_i_nm,
    strategy_ii_nm, strategy_iii_nm, DetectionStrategy,
};
pub use error::{Error, Result};
pub use filters::{filtered_correlation, filtered_mean, FilterKernel, FilterKind};
pub use gaussian::{
    correlation_to_covariance, duan_es, duan_min, log_negativity, standard_form,
    symplectic_nu_closed, symplectic_nu_oracle, two_mode_covariance_from_nm, CorrelationMatrixA,
    CovarianceMatrix, StandardFormParams,
};
pub use models::{DuplicatedField, FieldIndex, NopaModel, VacuumModel};
pub use optomech::{
    bose_occupation, drift_matrix, entanglement_band, pout_closed_form, pout_matrix_route,
    q_factors, stability, strategy_spectra, FrequencyGrid, OptomechanicalParams, OutputModel,
    SpectrumEvaluator, SpectrumRoute,
};
pub use spectral::{
    assemble_pair_correlation, check_symplectic_identity, composite_variance, extract_nm,
    is_entangled, squeezing_s, squeezing_s_min, PowerSpectrum, TwoModeSpectralCorrelation,
};
