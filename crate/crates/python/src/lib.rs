//! Python bindings: special functions, the prepared operator, time
//! integration and path simulation. Fields cross the boundary as lists of
//! floats.

use levyfp_core::experiments::{DtRule, RunSpec};
use levyfp_core::montecarlo::{cms_sample, simulate_terminal, PathConfig};
use levyfp_core::specfun::{self, StabilityIndex};
use levyfp_core::stepper::select_dt_for;
use levyfp_core::verify::{cauchy_exact, mass_integral};
use levyfp_core::{
    evolve, AuxCondition, DensityField, DriftKind, InitialProfile, Integrator, NaturalEdge,
    OperatorWorkspace, StepControl,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;

fn err(e: levyfp_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> PyResult<T> {
    serde_plain(s).ok_or_else(|| PyValueError::new_err(format!("unknown {what} {s:?}")))
}

/// Maps a kebab-case name onto a unit enum variant.
fn serde_plain<T: serde::de::DeserializeOwned>(s: &str) -> Option<T> {
    use serde::de::value::{Error, StrDeserializer};
    use serde::de::IntoDeserializer;
    let de: StrDeserializer<Error> = s.into_deserializer();
    T::deserialize(de).ok()
}

#[pyfunction]
fn riemann_zeta(s: f64) -> PyResult<f64> {
    specfun::riemann_zeta(s).map_err(err)
}

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    specfun::gamma_fn(x).map_err(err)
}

#[pyfunction]
fn c_alpha(alpha: f64) -> PyResult<f64> {
    Ok(specfun::c_alpha(StabilityIndex::new(alpha).map_err(err)?))
}

/// Largest forward-Euler step ratio `dt / h^alpha` that keeps the maximum principle.
#[pyfunction]
#[pyo3(signature = (alpha, eps = 1.0))]
fn mp_threshold(alpha: f64, eps: f64) -> PyResult<f64> {
    Ok(specfun::mp_threshold(
        StabilityIndex::new(alpha).map_err(err)?,
        eps,
    ))
}

#[pyfunction]
#[pyo3(name = "cauchy_exact")]
fn py_cauchy_exact(x: f64, t: f64) -> f64 {
    cauchy_exact(x, t)
}

/// `n` standard symmetric alpha-stable variates.
#[pyfunction]
fn stable_samples(alpha: f64, n: usize, seed: u64) -> PyResult<Vec<f64>> {
    let a = StabilityIndex::new(alpha).map_err(err)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| cms_sample(a, &mut rng)).collect())
}

#[pyclass(name = "LevyParams", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyLevyParams {
    inner: levyfp_core::LevyParams,
}

#[pymethods]
impl PyLevyParams {
    #[new]
    #[pyo3(signature = (alpha, eps = 1.0, d = 0.0))]
    fn new(alpha: f64, eps: f64, d: f64) -> PyResult<Self> {
        Ok(Self {
            inner: levyfp_core::LevyParams::new(alpha, eps, d).map_err(err)?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }
    #[getter]
    fn eps(&self) -> f64 {
        self.inner.eps()
    }
    #[getter]
    fn d(&self) -> f64 {
        self.inner.d()
    }
    #[getter]
    fn c_alpha(&self) -> f64 {
        self.inner.c_alpha()
    }
    #[getter]
    fn zeta_am1(&self) -> f64 {
        self.inner.zeta_am1()
    }

    fn c_h(&self, h: f64) -> f64 {
        self.inner.c_h(h)
    }

    fn __repr__(&self) -> String {
        format!(
            "LevyParams(alpha={}, eps={}, d={})",
            self.inner.alpha(),
            self.inner.eps(),
            self.inner.d()
        )
    }
}

fn condition(kind: &str, half_width: f64) -> PyResult<AuxCondition> {
    match kind {
        "absorbing" => Ok(AuxCondition::Absorbing {
            a: -half_width,
            b: half_width,
        }),
        "natural" => Ok(AuxCondition::Natural { half_width }),
        other => Err(PyValueError::new_err(format!(
            "condition must be 'absorbing' or 'natural', got {other:?}"
        ))),
    }
}

/// Operator prepared for one parameter set and grid.
#[pyclass(name = "Solver", frozen)]
struct PySolver {
    spec: RunSpec,
    ws: OperatorWorkspace,
}

#[pymethods]
impl PySolver {
    #[new]
    #[pyo3(signature = (params, condition_kind, half_width, h, drift = "zero", weno_delta = 1e-6, natural_edge = "free"))]
    fn new(
        params: &PyLevyParams,
        condition_kind: &str,
        half_width: f64,
        h: f64,
        drift: &str,
        weno_delta: f64,
        natural_edge: &str,
    ) -> PyResult<Self> {
        let drift: DriftKind = parse("drift", drift)?;
        let mut spec = RunSpec::new(
            params.inner,
            condition(condition_kind, half_width)?,
            InitialProfile::Uniform,
            h,
            0.0,
        )
        .with_drift(drift)
        .with_natural_edge(parse::<NaturalEdge>("natural_edge", natural_edge)?);
        spec.weno_delta = weno_delta;
        let ws = spec.workspace().map_err(err)?;
        Ok(Self { spec, ws })
    }

    #[getter]
    fn h(&self) -> f64 {
        self.ws.grid().h()
    }

    #[getter]
    fn c_h(&self) -> f64 {
        self.ws.c_h()
    }

    fn __len__(&self) -> usize {
        self.ws.grid().len()
    }

    fn nodes(&self) -> Vec<f64> {
        self.ws.grid().nodes()
    }

    /// Sampled initial profile: "gaussian-paper", "gaussian-normalized",
    /// "uniform" or "cauchy-seed". Returns `(values, start_time)`.
    #[pyo3(signature = (kind, variance = 1.0, center = 0.0, t0 = 0.01, unit_mass = false))]
    fn initial(
        &self,
        kind: &str,
        variance: f64,
        center: f64,
        t0: f64,
        unit_mass: bool,
    ) -> PyResult<(Vec<f64>, f64)> {
        let profile = match kind {
            "gaussian-paper" => InitialProfile::GaussianPaper,
            "gaussian-normalized" => InitialProfile::GaussianNormalized { variance, center },
            "uniform" => InitialProfile::Uniform,
            "cauchy-seed" => InitialProfile::CauchySeed { t0 },
            other => return Err(PyValueError::new_err(format!("unknown profile {other:?}"))),
        };
        let mut spec = self.spec.clone();
        spec.initial = profile;
        spec.unit_mass = unit_mass;
        let p = levyfp_core::experiments::initial_field(&spec, &self.ws).map_err(err)?;
        let t = p.time();
        Ok((p.into_values(), t))
    }

    /// Semi-discrete right-hand side at every node.
    fn rhs(&self, values: Vec<f64>) -> PyResult<Vec<f64>> {
        let p = DensityField::new(*self.ws.grid(), values, 0.0).map_err(err)?;
        self.ws.rhs(&p).map_err(err)
    }

    /// `safety` times the composite stable step bound.
    #[pyo3(signature = (safety = 0.5))]
    fn select_dt(&self, safety: f64) -> PyResult<f64> {
        select_dt_for(&self.ws, safety).map_err(err)
    }

    /// `factor * h^alpha`, capped by the drift and diffusion bounds.
    fn dt_h_alpha(&self, factor: f64) -> PyResult<f64> {
        let spec = self.spec.clone().with_dt(DtRule::HAlpha { factor });
        spec.time_step(&self.ws).map_err(err)
    }

    /// Integrates from `(values, t0)` to `t_end`; returns the final field and
    /// `(t, values)` at each requested output time.
    #[pyo3(signature = (values, t0, t_end, dt, integrator = "tvd-rk3", output_times = Vec::new()))]
    #[allow(clippy::type_complexity, clippy::too_many_arguments)]
    fn evolve(
        &self,
        py: Python<'_>,
        values: Vec<f64>,
        t0: f64,
        t_end: f64,
        dt: f64,
        integrator: &str,
        output_times: Vec<f64>,
    ) -> PyResult<(Vec<f64>, Vec<(f64, Vec<f64>)>)> {
        let mode: Integrator = parse("integrator", integrator)?;
        let p0 = DensityField::new(*self.ws.grid(), values, t0).map_err(err)?;
        let ctrl = StepControl {
            dt,
            safety: 1.0,
            mode,
        };
        let ws = &self.ws;
        py.detach(|| {
            let mut snaps = Vec::new();
            let last = evolve(p0, ws, &ctrl, t_end, &output_times, |p| {
                snaps.push((p.time(), p.values().to_vec()))
            })
            .map_err(err)?;
            Ok((last.into_values(), snaps))
        })
    }

    /// Trapezoidal integral of a nodal field.
    fn mass(&self, values: Vec<f64>) -> PyResult<f64> {
        let p = DensityField::new(*self.ws.grid(), values, 0.0).map_err(err)?;
        Ok(mass_integral(&p))
    }
}

/// Euler-Maruyama terminal positions; returns `(samples, exited)`.
#[pyfunction]
#[pyo3(signature = (params, t_end, dt, n_paths, seed, drift = "zero", x0 = 0.0, guard_radius = 1e12))]
#[allow(clippy::too_many_arguments)]
fn simulate_paths(
    py: Python<'_>,
    params: &PyLevyParams,
    t_end: f64,
    dt: f64,
    n_paths: usize,
    seed: u64,
    drift: &str,
    x0: f64,
    guard_radius: f64,
) -> PyResult<(Vec<f64>, Vec<bool>)> {
    let cfg = PathConfig {
        params: params.inner,
        drift: parse("drift", drift)?,
        x0,
        t_end,
        dt,
        n_paths,
        seed,
        guard_radius,
    };
    let ens = py.detach(|| simulate_terminal(&cfg)).map_err(err)?;
    Ok((ens.samples, ens.exited))
}

#[pymodule]
fn levyfp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyLevyParams>()?;
    m.add_class::<PySolver>()?;
    m.add_function(wrap_pyfunction!(riemann_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(c_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(mp_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(py_cauchy_exact, m)?)?;
    m.add_function(wrap_pyfunction!(stable_samples, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_paths, m)?)?;
    Ok(())
}
