//! Python module `del_py`.

use std::collections::HashMap;
use std::path::PathBuf;

use del_core::expcli::{self, Experiment};
use del_core::gaussdyn::{integrate_tau, TauConfig};
use del_core::profiles::{self, GapGrid};
use del_core::specfun::{self, KummerArgs};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: del_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Kummer `M(a, b, z)`.
#[pyfunction]
fn kummer_m(a: f64, b: f64, z: f64) -> PyResult<f64> {
    specfun::kummer_m(KummerArgs::new(a, b, z).map_err(py_err)?).map_err(py_err)
}

/// Tricomi `U(a, b, z)` for `z > 0`.
#[pyfunction]
fn tricomi_u(a: f64, b: f64, z: f64) -> PyResult<f64> {
    specfun::tricomi_u(KummerArgs::new(a, b, z).map_err(py_err)?).map_err(py_err)
}

#[pyfunction]
fn log_gamma(x: f64) -> PyResult<f64> {
    specfun::log_gamma(x).map_err(py_err)
}

#[pyfunction]
fn f1(t: f64) -> PyResult<f64> {
    specfun::f1(t).map_err(py_err)
}

#[pyfunction]
fn f2(t: f64) -> PyResult<f64> {
    specfun::f2(t).map_err(py_err)
}

#[pyfunction]
fn wronskian(t: f64) -> PyResult<f64> {
    specfun::wronskian(t).map_err(py_err)
}

/// `(A, B, support_edge)` of the Barenblatt profile with mass `lam`.
#[pyfunction]
#[pyo3(signature = (gamma, lam = 1.0))]
fn barenblatt(gamma: f64, lam: f64) -> PyResult<(f64, f64, f64)> {
    let p = profiles::barenblatt_coefficients(gamma, lam).map_err(py_err)?;
    Ok((p.a(), p.b(), p.support_edge()))
}

#[pyfunction]
#[pyo3(signature = (gamma, xi, lam = 1.0))]
fn barenblatt_shape(gamma: f64, xi: Vec<f64>, lam: f64) -> PyResult<Vec<f64>> {
    let p = profiles::barenblatt_coefficients(gamma, lam).map_err(py_err)?;
    Ok(xi
        .iter()
        .map(|&x| profiles::barenblatt_shape(&p, x))
        .collect())
}

/// Sup-norm distance between the Barenblatt profile and its Gaussian limit.
#[pyfunction]
#[pyo3(signature = (gamma, lam = 1.0, half_width = 8.0, points = 20_001))]
fn limit_gap(gamma: f64, lam: f64, half_width: f64, points: usize) -> PyResult<f64> {
    profiles::limit_gap(gamma, lam, &GapGrid { half_width, points }).map_err(py_err)
}

/// `(tau, tau_dot)` sampled at `times` for the dispersion ODE.
#[pyfunction]
#[pyo3(signature = (times, alpha0 = 1.0, beta0 = 0.0, tolerance = 1e-10))]
fn tau(times: Vec<f64>, alpha0: f64, beta0: f64, tolerance: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let t_end = times.iter().copied().fold(0.0, f64::max).max(1e-12);
    let traj = integrate_tau(&TauConfig::new(alpha0, beta0, t_end, tolerance).map_err(py_err)?)
        .map_err(py_err)?;
    let mut tau = Vec::with_capacity(times.len());
    let mut tau_dot = Vec::with_capacity(times.len());
    for &t in &times {
        let s = traj.state(t).map_err(py_err)?;
        tau.push(s.tau);
        tau_dot.push(s.tau_dot);
    }
    Ok((tau, tau_dot))
}

/// Runs an experiment from config text. Returns `(passed, checks, files)`,
/// with `checks` mapping each check name to its verdict.
#[pyfunction]
#[pyo3(signature = (config, out = None))]
fn run_experiment(
    config: &str,
    out: Option<PathBuf>,
) -> PyResult<(bool, HashMap<String, bool>, Vec<String>)> {
    let mut spec = expcli::parse_config(config).map_err(py_err)?;
    if let Some(root) = out {
        spec.out_dir = root.join(spec.experiment.name());
    }
    let report = expcli::run(&spec).map_err(py_err)?;
    let checks = report
        .checks
        .iter()
        .map(|c| (c.name.clone(), c.passed))
        .collect();
    let files = report
        .files
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    Ok((report.passed(), checks, files))
}

#[pyfunction]
fn experiments() -> Vec<&'static str> {
    Experiment::ALL.iter().map(|e| e.name()).collect()
}

#[pymodule]
fn del_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(kummer_m, m)?)?;
    m.add_function(wrap_pyfunction!(tricomi_u, m)?)?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(f1, m)?)?;
    m.add_function(wrap_pyfunction!(f2, m)?)?;
    m.add_function(wrap_pyfunction!(wronskian, m)?)?;
    m.add_function(wrap_pyfunction!(barenblatt, m)?)?;
    m.add_function(wrap_pyfunction!(barenblatt_shape, m)?)?;
    m.add_function(wrap_pyfunction!(limit_gap, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(experiments, m)?)?;
    Ok(())
}
