//! Python bindings: the main spectral-entanglement types and operations.
//!
//! Build with `cargo build --release -p specsqueeze-python` and import the
//! produced cdylib as the module `specsqueeze` (see python/build_ext.sh).

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use specsqueeze_core::detection::{self, DetectionStrategy};
use specsqueeze_core::gaussian;
use specsqueeze_core::models::FieldIndex;
use specsqueeze_core::optomech;
use specsqueeze_core::spectral::{self, TwoModeSpectralCorrelation};

fn err(e: specsqueeze_core::Error) -> PyErr {
    match e {
        specsqueeze_core::Error::Domain(_) | specsqueeze_core::Error::UnknownPreset(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Linearized optomechanical parameters; all rates in units of omega_m.
#[pyclass(name = "OptomechanicalParams", from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: optomech::OptomechanicalParams,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (kappa1, kappa2, gamma, omega_m, delta, g, n_thermal))]
    fn new(
        kappa1: f64,
        kappa2: f64,
        gamma: f64,
        omega_m: f64,
        delta: f64,
        g: f64,
        n_thermal: f64,
    ) -> PyResult<Self> {
        Ok(Self {
            inner: optomech::OptomechanicalParams::new(
                kappa1, kappa2, gamma, omega_m, delta, g, n_thermal,
            )
            .map_err(err)?,
        })
    }

    /// The two-sided reference scenario with the given kappa2/kappa1 ratio.
    #[staticmethod]
    fn reference(kappa2_over_kappa1: f64) -> Self {
        Self {
            inner: optomech::OptomechanicalParams::reference(kappa2_over_kappa1),
        }
    }

    #[getter]
    fn kappa1(&self) -> f64 {
        self.inner.kappa1
    }

    #[getter]
    fn kappa2(&self) -> f64 {
        self.inner.kappa2
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn omega_m(&self) -> f64 {
        self.inner.omega_m
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }

    #[getter]
    fn g(&self) -> f64 {
        self.inner.g
    }

    #[getter]
    fn n_thermal(&self) -> f64 {
        self.inner.n_thermal
    }

    /// (stable, [four complex drift eigenvalues]).
    fn stability(&self) -> PyResult<(bool, Vec<Complex64>)> {
        let s = optomech::stability(&self.inner).map_err(err)?;
        Ok((s.stable, s.eigenvalues.to_vec()))
    }

    fn __repr__(&self) -> String {
        format!(
            "OptomechanicalParams(kappa1={}, kappa2={}, gamma={}, omega_m={}, delta={}, g={}, n_thermal={})",
            self.inner.kappa1,
            self.inner.kappa2,
            self.inner.gamma,
            self.inner.omega_m,
            self.inner.delta,
            self.inner.g,
            self.inner.n_thermal
        )
    }
}

/// Spectral correlations (n+, n-, m) of a sideband pair.
#[pyclass(name = "SpectralCorrelation", from_py_object)]
#[derive(Clone)]
struct PyCorrelation {
    inner: TwoModeSpectralCorrelation,
}

#[pymethods]
impl PyCorrelation {
    #[new]
    fn new(n_plus: f64, n_minus: f64, m: Complex64) -> PyResult<Self> {
        Ok(Self {
            inner: TwoModeSpectralCorrelation::new(n_plus, n_minus, m).map_err(err)?,
        })
    }

    #[getter]
    fn n_plus(&self) -> f64 {
        self.inner.n_plus
    }

    #[getter]
    fn n_minus(&self) -> f64 {
        self.inner.n_minus
    }

    #[getter]
    fn m(&self) -> Complex64 {
        self.inner.m
    }

    /// Phase-optimized squeezing spectrum S = 1 + n+ + n- - 2|m|.
    fn s(&self) -> f64 {
        spectral::squeezing_s(&self.inner)
    }

    /// Globally optimized spectrum; equals the symplectic eigenvalue ν.
    fn s_min(&self) -> f64 {
        spectral::squeezing_s_min(&self.inner)
    }

    /// Logarithmic negativity of the pair.
    fn log_negativity(&self) -> PyResult<f64> {
        gaussian::log_negativity(self.s_min().max(1e-300)).map_err(err)
    }

    fn is_entangled(&self) -> bool {
        spectral::is_entangled(&self.inner)
    }

    /// Heterodyne spectra (T, T_min) = ((S+1)/2, (S_min+1)/2).
    fn heterodyne_t(&self) -> (f64, f64) {
        detection::heterodyne_t(&self.inner)
    }

    /// Composite-quadrature variance at the given phases and weights.
    fn composite_variance(
        &self,
        theta_plus: f64,
        theta_minus: f64,
        xi_plus: f64,
        xi_minus: f64,
    ) -> PyResult<f64> {
        spectral::composite_variance(&self.inner, theta_plus, theta_minus, xi_plus, xi_minus)
            .map_err(err)
    }

    /// Symplectic eigenvalue via the independent covariance eigen route.
    fn nu_oracle(&self) -> PyResult<f64> {
        spectral::nu_from_covariance(&self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "SpectralCorrelation(n_plus={}, n_minus={}, m={})",
            self.inner.n_plus, self.inner.n_minus, self.inner.m
        )
    }
}

fn parse_strategy(
    strategy: &str,
    mu1: f64,
    mu2: f64,
    theta_c: f64,
    field: u8,
    detuning: f64,
) -> PyResult<DetectionStrategy> {
    let field = match field {
        1 => FieldIndex::One,
        2 => FieldIndex::Two,
        other => return Err(PyValueError::new_err(format!("field must be 1 or 2, got {other}"))),
    };
    match strategy {
        "I" | "i" => Ok(DetectionStrategy::SingleHomodyne { field }),
        "II" | "ii" => Ok(DetectionStrategy::TwoModeHomodyne { mu1, mu2, theta_c }),
        "III" | "iii" => Ok(DetectionStrategy::CrossField),
        "heterodyne" => Ok(DetectionStrategy::Heterodyne { detuning }),
        other => Err(PyValueError::new_err(format!(
            "strategy must be I, II, III or heterodyne, got `{other}`"
        ))),
    }
}

/// Output power spectrum matrix P(omega) as a 4x4 nested list, by either
/// route ("closed" or "matrix").
#[pyfunction]
#[pyo3(signature = (params, omega, route = "closed"))]
fn output_spectrum(
    params: &PyParams,
    omega: f64,
    route: &str,
) -> PyResult<Vec<Vec<Complex64>>> {
    let m = match route {
        "closed" => optomech::pout_closed_form(&params.inner, omega),
        "matrix" => optomech::pout_matrix_route(&params.inner, omega).map_err(err)?,
        other => {
            return Err(PyValueError::new_err(format!(
                "route must be closed or matrix, got `{other}`"
            )))
        }
    };
    Ok((0..4)
        .map(|r| (0..4).map(|c| m[(r, c)]).collect())
        .collect())
}

/// Correlation triple probed by a detection strategy at sideband omega.
#[pyfunction]
#[pyo3(signature = (params, omega, strategy = "I", mu1 = 1.0, mu2 = 1.0, theta_c = 0.0, field = 1, detuning = 100.0))]
#[allow(clippy::too_many_arguments)]
fn probe(
    params: &PyParams,
    omega: f64,
    strategy: &str,
    mu1: f64,
    mu2: f64,
    theta_c: f64,
    field: u8,
    detuning: f64,
) -> PyResult<PyCorrelation> {
    let strat = parse_strategy(strategy, mu1, mu2, theta_c, field, detuning)?;
    let eval = optomech::SpectrumEvaluator::new(params.inner, &strat).map_err(err)?;
    Ok(PyCorrelation { inner: eval.nm(omega) })
}

/// Squeezing/entanglement spectra over a frequency list; returns a dict of
/// equal-length lists (omega, s, s_min, nu, e_n, n_plus, n_minus, m).
#[pyfunction]
#[pyo3(signature = (params, omegas, strategy = "I", mu1 = 1.0, mu2 = 1.0, theta_c = 0.0, field = 1, detuning = 100.0))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    params: &PyParams,
    omegas: Vec<f64>,
    strategy: &str,
    mu1: f64,
    mu2: f64,
    theta_c: f64,
    field: u8,
    detuning: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let strat = parse_strategy(strategy, mu1, mu2, theta_c, field, detuning)?;
    let eval = optomech::SpectrumEvaluator::new(params.inner, &strat).map_err(err)?;
    let n = omegas.len();
    let mut s = Vec::with_capacity(n);
    let mut s_min = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    let mut e_n = Vec::with_capacity(n);
    let mut n_plus = Vec::with_capacity(n);
    let mut n_minus = Vec::with_capacity(n);
    let mut m = Vec::with_capacity(n);
    for &w in &omegas {
        let sp = eval.spectra(w);
        s.push(sp.s);
        s_min.push(sp.s_min);
        nu.push(sp.nu);
        e_n.push(sp.e_n);
        n_plus.push(sp.n_plus);
        n_minus.push(sp.n_minus);
        m.push(sp.m);
    }
    let out = PyDict::new(py);
    out.set_item("omega", omegas)?;
    out.set_item("s", s)?;
    out.set_item("s_min", s_min)?;
    out.set_item("nu", nu)?;
    out.set_item("e_n", e_n)?;
    out.set_item("n_plus", n_plus)?;
    out.set_item("n_minus", n_minus)?;
    out.set_item("m", m)?;
    Ok(out)
}

/// Reference frequency grid (uniform plus resonance insets).
#[pyfunction]
fn reference_grid(params: &PyParams) -> Vec<f64> {
    optomech::FrequencyGrid::reference(&params.inner).points
}

/// Logarithmic negativity from a symplectic eigenvalue.
#[pyfunction]
fn log_negativity(nu: f64) -> PyResult<f64> {
    gaussian::log_negativity(nu).map_err(err)
}

/// Smallest symplectic eigenvalue of the partially transposed covariance,
/// by the closed standard-form route and by the eigenvalue oracle.
#[pyfunction]
fn symplectic_nu(cov: [[f64; 4]; 4]) -> PyResult<(f64, f64)> {
    let m = nalgebra_from(cov);
    let c = gaussian::CovarianceMatrix::new(m).map_err(err)?;
    let closed = gaussian::symplectic_nu_closed(&gaussian::standard_form(&c));
    let oracle = gaussian::symplectic_nu_oracle(&c).map_err(err)?;
    Ok((closed, oracle))
}

fn nalgebra_from(cov: [[f64; 4]; 4]) -> gaussian::RMat4 {
    gaussian::RMat4::from_fn(|r, c| cov[r][c])
}

/// Minimum of the Duan summed variance: (E_S_min, optimal phi1+phi2,
/// optimal xi1/xi2).
#[pyfunction]
fn duan_min(n1: f64, n2: f64, m_minus: f64) -> (f64, f64, f64) {
    let d = gaussian::duan_min(n1, n2, m_minus);
    (d.e_s_min, d.phi_sum, d.xi_ratio)
}

/// Thermal occupation of a mode at omega_rad_s in a bath at temperature_k.
#[pyfunction]
fn bose_occupation(temperature_k: f64, omega_rad_s: f64) -> f64 {
    optomech::bose_occupation(temperature_k, omega_rad_s)
}

/// Frequency intervals with entangled sideband pairs.
#[pyfunction]
#[pyo3(signature = (params, strategy = "I", mu1 = 1.0, mu2 = 1.0, theta_c = 0.0, field = 1, detuning = 100.0))]
#[allow(clippy::too_many_arguments)]
fn entanglement_band(
    params: &PyParams,
    strategy: &str,
    mu1: f64,
    mu2: f64,
    theta_c: f64,
    field: u8,
    detuning: f64,
) -> PyResult<Vec<(f64, f64)>> {
    let strat = parse_strategy(strategy, mu1, mu2, theta_c, field, detuning)?;
    let grid = optomech::FrequencyGrid::reference(&params.inner);
    optomech::entanglement_band(&params.inner, &strat, &grid).map_err(err)
}

#[pymodule]
fn specsqueeze(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyCorrelation>()?;
    m.add_function(wrap_pyfunction!(output_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(reference_grid, m)?)?;
    m.add_function(wrap_pyfunction!(log_negativity, m)?)?;
    m.add_function(wrap_pyfunction!(symplectic_nu, m)?)?;
    m.add_function(wrap_pyfunction!(duan_min, m)?)?;
    m.add_function(wrap_pyfunction!(bose_occupation, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_band, m)?)?;
    Ok(())
}
