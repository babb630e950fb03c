//! Python bindings: case construction, composite-wave evaluation,
//! interaction diagnostics, decay fits, simulation and verification.

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fourwave::composite::{build_composite, interaction_integrals, CompositeWave};
use fourwave::gas::{GasParams, ThermoState};
use fourwave::harness::config::RunConfig;
use fourwave::harness::verify as fv;
use fourwave::numerics::fit::{fit_decay, DecayModel};
use fourwave::wave_curves::{generate_case_from_sonic, CaseSetup, StrengthInput};

fn err(e: fourwave::error::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn state_tuple(s: &ThermoState) -> (f64, f64, f64) {
    (s.v, s.u, s.theta)
}

/// The four-wave case decomposition: end states, medium states and
/// realized wave strengths.
#[pyclass(name = "Case")]
#[derive(Clone)]
struct PyCase {
    case: CaseSetup,
    gas: GasParams,
}

#[pymethods]
impl PyCase {
    #[getter]
    fn left(&self) -> (f64, f64, f64) {
        state_tuple(&self.case.left)
    }
    #[getter]
    fn right(&self) -> (f64, f64, f64) {
        state_tuple(&self.case.right)
    }
    #[getter]
    fn star(&self) -> (f64, f64, f64) {
        state_tuple(&self.case.star)
    }
    #[getter]
    fn mid(&self) -> (f64, f64, f64) {
        state_tuple(&self.case.mid)
    }
    #[getter]
    fn star_up(&self) -> (f64, f64, f64) {
        state_tuple(&self.case.star_up)
    }
    #[getter]
    fn sigma_minus(&self) -> f64 {
        self.case.sigma_minus
    }
    /// (delta_b, delta_r1, delta_d, delta_r3, total).
    #[getter]
    fn strengths(&self) -> (f64, f64, f64, f64, f64) {
        let s = &self.case.strengths;
        (s.delta_b, s.delta_r1, s.delta_d, s.delta_r3, s.delta)
    }
    /// Assemble the composite wave for this case.
    fn composite(&self) -> PyResult<PyComposite> {
        let wave = build_composite(&self.case, &self.gas).map_err(err)?;
        Ok(PyComposite { wave })
    }
    fn __repr__(&self) -> String {
        format!(
            "Case(strengths=({}, {}, {}, {}), sigma_minus={})",
            self.case.strengths.delta_b,
            self.case.strengths.delta_r1,
            self.case.strengths.delta_d,
            self.case.strengths.delta_r3,
            self.case.sigma_minus
        )
    }
}

/// The superposed four-wave ansatz.
#[pyclass(name = "Composite")]
struct PyComposite {
    wave: CompositeWave,
}

#[pymethods]
impl PyComposite {
    /// Composite state (v, u, theta) at (t, xi).
    fn eval(&self, t: f64, xi: f64) -> (f64, f64, f64) {
        let p = self.wave.eval(t, xi);
        (p.v, p.u, p.theta)
    }
    /// Composite xi-derivatives (v_xi, u_xi, theta_xi) at (t, xi).
    fn eval_derivs(&self, t: f64, xi: f64) -> (f64, f64, f64) {
        let p = self.wave.eval(t, xi);
        (p.dv, p.du, p.dtheta)
    }
    /// Momentum and energy residual sources (G, H) at (t, xi).
    fn sources(&self, t: f64, xi: f64) -> (f64, f64) {
        self.wave.sources(t, xi)
    }
    /// The twelve pairwise interaction integrals and the source norms at
    /// time t, as a dict with keys I1..I12, G_L1, H_L1, G_L2, H_L2.
    fn interactions<'py>(&self, py: Python<'py>, t: f64) -> PyResult<Bound<'py, PyAny>> {
        let r = interaction_integrals(&self.wave, t).map_err(err)?;
        let d = pyo3::types::PyDict::new_bound(py);
        for (k, v) in r.i.iter().enumerate() {
            d.set_item(format!("I{}", k + 1), v)?;
        }
        d.set_item("G_L1", r.g_l1)?;
        d.set_item("H_L1", r.h_l1)?;
        d.set_item("G_L2", r.g_l2)?;
        d.set_item("H_L2", r.h_l2)?;
        Ok(d.into_any())
    }
}

/// Build a case from wave strengths anchored at a sonic state.
#[pyfunction]
#[pyo3(signature = (delta_b, delta_r1, delta_d, delta_r3, v_star=1.0, theta_star=1.0,
                    r=1.0, gamma=5.0/3.0, mu=1.0, kappa=1.0))]
#[allow(clippy::too_many_arguments)]
fn generate_case(
    delta_b: f64,
    delta_r1: f64,
    delta_d: f64,
    delta_r3: f64,
    v_star: f64,
    theta_star: f64,
    r: f64,
    gamma: f64,
    mu: f64,
    kappa: f64,
) -> PyResult<PyCase> {
    let g = GasParams::new(r, gamma, mu, kappa);
    let req = StrengthInput { delta_b, delta_r1, delta_d, delta_r3 };
    let case = generate_case_from_sonic(v_star, theta_star, &req, &g).map_err(err)?;
    Ok(PyCase { case, gas: g })
}

/// Fit a decay law y = C t^p ("power") or y = C e^{rate t} ("exponential")
/// to positive samples; returns (rate, amplitude, r_squared).
#[pyfunction]
fn fit_decay_rate(times: Vec<f64>, values: Vec<f64>, kind: &str) -> PyResult<(f64, f64, f64)> {
    let model = match kind {
        "power" => DecayModel::Power,
        "exponential" => DecayModel::Exponential,
        _ => return Err(PyValueError::new_err("kind must be 'power' or 'exponential'")),
    };
    let f = fit_decay(&times, &values, model).map_err(err)?;
    Ok((f.rate, f.amplitude, f.r_squared))
}

/// Run the time integration described by a TOML configuration string;
/// writes norms.csv / profiles.csv into out_dir and returns the norm
/// records as a list of (t, sup_phi, sup_psi, sup_theta, l2, h1, energy).
#[pyfunction]
#[pyo3(signature = (config_toml="", out_dir="out"))]
fn simulate(config_toml: &str, out_dir: &str) -> PyResult<Vec<(f64, f64, f64, f64, f64, f64, f64)>> {
    let cfg = RunConfig::from_toml(config_toml).map_err(err)?;
    let norms = fv::run_simulation(&cfg, &PathBuf::from(out_dir)).map_err(err)?;
    Ok(norms
        .iter()
        .map(|r| (r.t, r.sup_phi, r.sup_psi, r.sup_theta, r.l2, r.h1, r.energy))
        .collect())
}

/// Run one verification suite; returns a list of
/// (name, stated, measured, passed) tuples.
#[pyfunction]
#[pyo3(signature = (suite, config_toml="", out_dir="out"))]
fn verify(suite: &str, config_toml: &str, out_dir: &str) -> PyResult<Vec<(String, String, String, bool)>> {
    let cfg = RunConfig::from_toml(config_toml).map_err(err)?;
    let rep = fv::run_suite(&cfg, suite, &PathBuf::from(out_dir)).map_err(err)?;
    Ok(rep
        .assertions
        .into_iter()
        .map(|a| (a.name, a.stated, a.measured, a.pass))
        .collect())
}

#[pymodule]
fn fourwave_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCase>()?;
    m.add_class::<PyComposite>()?;
    m.add_function(wrap_pyfunction!(generate_case, m)?)?;
    m.add_function(wrap_pyfunction!(fit_decay_rate, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
