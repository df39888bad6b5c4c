//! Drivers for the verification experiments: a generic single-run helper
//! plus the convergence, mass, tail and Monte-Carlo comparisons built on it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{
    sample_initial, AuxCondition, DensityField, DriftField, DriftKind, Grid, InitialProfile,
    LevyParams,
};
use crate::operator::{NaturalEdge, OperatorOptions, OperatorWorkspace};
use crate::specfun::mp_threshold;
use crate::stepper::{evolve, select_dt_for, Integrator, StepControl};
use crate::verify::{
    cauchy_exact, error_report, least_squares_slope, mass_integral, observed_order,
    richardson_domain, ErrorReport,
};

/// How the time step of a run is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DtRule {
    /// `safety` times the composite stability bound of the operator.
    Auto {
        safety: f64,
    },
    /// `factor * h^alpha`, capped by the drift and diffusion bounds.
    HAlpha {
        factor: f64,
    },
    Fixed {
        dt: f64,
    },
}

impl Default for DtRule {
    fn default() -> Self {
        DtRule::Auto { safety: 0.5 }
    }
}

/// One deterministic solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub params: LevyParams,
    pub condition: AuxCondition,
    pub drift: DriftKind,
    pub initial: InitialProfile,
    pub h: f64,
    pub dt: DtRule,
    pub integrator: Integrator,
    pub weno_delta: f64,
    pub natural_edge: NaturalEdge,
    /// Rescale the sampled initial field to unit trapezoidal mass.
    pub unit_mass: bool,
    pub t_end: f64,
}

impl RunSpec {
    pub fn new(
        params: LevyParams,
        condition: AuxCondition,
        initial: InitialProfile,
        h: f64,
        t_end: f64,
    ) -> Self {
        Self {
            params,
            condition,
            drift: DriftKind::Zero,
            initial,
            h,
            dt: DtRule::default(),
            integrator: Integrator::TvdRk3,
            weno_delta: crate::weno::DEFAULT_WENO_DELTA,
            natural_edge: NaturalEdge::Free,
            unit_mass: false,
            t_end,
        }
    }

    pub fn with_drift(mut self, drift: DriftKind) -> Self {
        self.drift = drift;
        self
    }

    pub fn with_dt(mut self, dt: DtRule) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn with_natural_edge(mut self, edge: NaturalEdge) -> Self {
        self.natural_edge = edge;
        self
    }

    pub fn with_unit_mass(mut self, unit_mass: bool) -> Self {
        self.unit_mass = unit_mass;
        self
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.condition, self.h)
    }

    pub fn workspace(&self) -> Result<OperatorWorkspace> {
        let grid = self.grid()?;
        let drift = DriftField::new(self.drift, &grid)?;
        OperatorWorkspace::prepare_with(
            self.params,
            grid,
            drift,
            OperatorOptions {
                weno_delta: self.weno_delta,
                natural_edge: self.natural_edge,
                ..OperatorOptions::default()
            },
        )
    }

    /// Resolved time step for a prepared workspace.
    pub fn time_step(&self, ws: &OperatorWorkspace) -> Result<f64> {
        match self.dt {
            DtRule::Auto { safety } => select_dt_for(ws, safety),
            DtRule::HAlpha { factor } => {
                if !(factor > 0.0) {
                    return Err(invalid("dt.factor", "must be positive"));
                }
                let h = self.h;
                let mut dt = factor * h.powf(self.params.alpha());
                if self.params.d() > 0.0 {
                    dt = dt.min(0.5 * h * h / (2.0 * ws.c_h()));
                }
                let lambda = ws.drift().lf_speed();
                if lambda > 0.0 {
                    dt = dt.min(0.5 * h / lambda);
                }
                Ok(dt)
            }
            DtRule::Fixed { dt } => {
                if dt > 0.0 {
                    Ok(dt)
                } else {
                    Err(invalid("dt", "must be positive"))
                }
            }
        }
    }
}

/// Sampled initial field with the spec's edge and mass conventions applied.
pub fn initial_field(spec: &RunSpec, ws: &OperatorWorkspace) -> Result<DensityField> {
    let mut p0 = sample_initial(&spec.initial, ws.grid())?;
    let n = p0.values().len();
    if spec.natural_edge == NaturalEdge::Pinned {
        p0.values_mut()[0] = 0.0;
        p0.values_mut()[n - 1] = 0.0;
    }
    if spec.unit_mass {
        let m = mass_integral(&p0);
        if !(m > 0.0) {
            return Err(Error::Degenerate(format!(
                "initial mass {m} cannot be normalized"
            )));
        }
        p0.values_mut().iter_mut().for_each(|v| *v /= m);
    }
    Ok(p0)
}

/// Result of [`run`].
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub final_field: DensityField,
    pub dt: f64,
    pub c_h: f64,
    pub steps_hint: usize,
}

/// Samples the initial profile and evolves it to `spec.t_end`, calling
/// `observer` at each of `output_times`.
pub fn run<O>(spec: &RunSpec, output_times: &[f64], observer: O) -> Result<RunOutcome>
where
    O: FnMut(&DensityField),
{
    let ws = spec.workspace()?;
    let p0 = initial_field(spec, &ws)?;
    if spec.t_end < p0.time() {
        return Err(invalid(
            "t_end",
            format!("{} precedes the initial time {}", spec.t_end, p0.time()),
        ));
    }
    let dt = spec.time_step(&ws)?;
    let ctrl = StepControl {
        dt,
        safety: 1.0,
        mode: spec.integrator,
    };
    let steps_hint = ((spec.t_end - p0.time()) / dt).ceil() as usize;
    let final_field = evolve(p0, &ws, &ctrl, spec.t_end, output_times, observer)?;
    Ok(RunOutcome {
        final_field,
        dt,
        c_h: ws.c_h(),
        steps_hint,
    })
}

/// Cauchy configuration: `alpha = 1`, `eps = 1`, `d = 0`, `f = 0`, natural
/// condition on `(-half_width, half_width)`, seeded at `t0 = 0.01`.
pub fn cauchy_spec(half_width: f64, h: f64, t_end: f64, dt_factor: f64) -> Result<RunSpec> {
    Ok(RunSpec::new(
        LevyParams::new(1.0, 1.0, 0.0)?,
        AuxCondition::Natural { half_width },
        InitialProfile::CauchySeed { t0: 0.01 },
        h,
        t_end,
    )
    .with_dt(DtRule::HAlpha { factor: dt_factor }))
}

/// Error reports against the exact Cauchy solution at each output time.
pub fn cauchy_errors(
    half_width: f64,
    h: f64,
    times: &[f64],
    dt_factor: f64,
) -> Result<Vec<ErrorReport>> {
    let t_end = times.iter().copied().fold(f64::NAN, f64::max);
    let spec = cauchy_spec(half_width, h, t_end, dt_factor)?;
    let mut reports = Vec::new();
    let mut failure = None;
    run(&spec, times, |p| {
        let t = p.time();
        match error_report(p, |x| cauchy_exact(x, t)) {
            Ok(r) => reports.push(r),
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(reports),
    }
}

/// Numerical Cauchy solution at node `x` and time `t`.
pub fn cauchy_point_value(half_width: f64, h: f64, x: f64, t: f64, dt_factor: f64) -> Result<f64> {
    let spec = cauchy_spec(half_width, h, t, dt_factor)?;
    let out = run(&spec, &[], |_| {})?;
    let grid = out.final_field.grid();
    let i = grid
        .nearest_index(x)
        .filter(|&i| (grid.x(i) - x).abs() < 1e-9 * h)
        .ok_or_else(|| invalid("x", format!("{x} is not a node of the grid with h = {h}")))?;
    Ok(out.final_field.values()[i])
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub value: f64,
    pub error: f64,
    /// `log2(e(h) / e(h/2))`, absent for the last row.
    pub order: Option<f64>,
}

fn fill_orders(rows: &mut [ConvergenceRow]) -> Result<()> {
    for i in 0..rows.len().saturating_sub(1) {
        rows[i].order = Some(observed_order(rows[i].error, rows[i + 1].error)?);
    }
    Ok(())
}

/// The point-error convergence study at `(x, t) = (0.1, 0.02)` on `(-L, L)`.
pub fn point_convergence(
    half_width: f64,
    hs: &[f64],
    dt_factor: f64,
) -> Result<Vec<ConvergenceRow>> {
    let (x, t) = (0.1, 0.02);
    let exact = cauchy_exact(x, t);
    let values: Vec<Result<f64>> = hs
        .par_iter()
        .map(|&h| cauchy_point_value(half_width, h, x, t, dt_factor))
        .collect();
    let mut rows = Vec::with_capacity(hs.len());
    for (&h, v) in hs.iter().zip(values) {
        let value = v?;
        rows.push(ConvergenceRow {
            h,
            value,
            error: (value - exact).abs(),
            order: None,
        });
    }
    fill_orders(&mut rows)?;
    Ok(rows)
}

/// As [`point_convergence`], with the value at each `h` replaced by the
/// domain-size extrapolation over `(L, 2L, 4L)`.
pub fn point_convergence_extrapolated(
    half_width: f64,
    hs: &[f64],
    dt_factor: f64,
) -> Result<Vec<ConvergenceRow>> {
    let (x, t) = (0.1, 0.02);
    let exact = cauchy_exact(x, t);
    let jobs: Vec<(f64, f64)> = hs
        .iter()
        .flat_map(|&h| [1.0, 2.0, 4.0].map(|m| (h, m * half_width)))
        .collect();
    let values: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(h, l)| cauchy_point_value(l, h, x, t, dt_factor))
        .collect();
    let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;
    let mut rows: Vec<ConvergenceRow> = hs
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            let value = richardson_domain(values[3 * i], values[3 * i + 1], values[3 * i + 2]);
            ConvergenceRow {
                h,
                value,
                error: (value - exact).abs(),
                order: None,
            }
        })
        .collect();
    fill_orders(&mut rows)?;
    Ok(rows)
}

/// `0.1 / 2^m` for `m = 0..levels`.
pub fn halving_sequence(levels: usize) -> Vec<f64> {
    (0..levels)
        .map(|m| 0.1 / f64::powi(2.0, m as i32))
        .collect()
}

/// Trapezoidal mass of the Cauchy run at `t_end` for each half-width.
///
/// With `NaturalEdge::Pinned` the seed is also rescaled to unit mass, so the
/// deficit measures only what the truncated domain loses over time.
pub fn mass_study(
    half_widths: &[f64],
    h: f64,
    t_end: f64,
    dt_factor: f64,
    edge: NaturalEdge,
) -> Result<Vec<(f64, f64)>> {
    half_widths
        .par_iter()
        .map(|&l| {
            let spec = cauchy_spec(l, h, t_end, dt_factor)?
                .with_natural_edge(edge)
                .with_unit_mass(edge == NaturalEdge::Pinned);
            let out = run(&spec, &[], |_| {})?;
            Ok((l, mass_integral(&out.final_field)))
        })
        .collect()
}

/// Least-squares order of the mass deficit `1 - I(L)` in `L`.
pub fn mass_deficit_order(masses: &[(f64, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = masses
        .iter()
        .map(|&(l, m)| {
            let deficit = 1.0 - m;
            if deficit > 0.0 {
                Ok((l.ln(), deficit.ln()))
            } else {
                Err(Error::Degenerate(format!(
                    "mass {m} at L = {l} shows no deficit"
                )))
            }
        })
        .collect::<Result<_>>()?;
    Ok(-least_squares_slope(&pts)?)
}

/// Natural-condition run of the pure-jump equation from the Cauchy seed.
pub fn stable_density_run(
    alpha: f64,
    half_width: f64,
    h: f64,
    t_end: f64,
    dt_factor: f64,
) -> Result<DensityField> {
    let spec = RunSpec::new(
        LevyParams::new(alpha, 1.0, 0.0)?,
        AuxCondition::Natural { half_width },
        InitialProfile::CauchySeed { t0: 0.01 },
        h,
        t_end,
    )
    .with_dt(DtRule::HAlpha { factor: dt_factor });
    Ok(run(&spec, &[], |_| {})?.final_field)
}

/// Double-well drift `x - x^3` with `eps = 1`, natural condition, started
/// from a narrow unit-mass Gaussian at `x = -1` (variance 1/80, the profile
/// whose normalizing constant is `sqrt(40/pi)`).
pub fn double_well_spec(
    alpha: f64,
    d: f64,
    half_width: f64,
    h: f64,
    t_end: f64,
) -> Result<RunSpec> {
    Ok(RunSpec::new(
        LevyParams::new(alpha, 1.0, d)?,
        AuxCondition::Natural { half_width },
        InitialProfile::GaussianNormalized {
            variance: 1.0 / 80.0,
            center: -1.0,
        },
        h,
        t_end,
    )
    .with_drift(DriftKind::DoubleWell))
}

/// Interior local maxima `(x, p)` of a field, ignoring the two end nodes.
pub fn local_maxima(p: &DensityField) -> Vec<(f64, f64)> {
    let v = p.values();
    let g = p.grid();
    (1..v.len() - 1)
        .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1])
        .map(|i| (g.x(i), v[i]))
        .collect()
}

/// Values of the maximum-principle threshold on a uniform alpha grid.
pub fn threshold_curve(eps: f64, alphas: &[f64]) -> Result<Vec<(f64, f64)>> {
    alphas
        .iter()
        .map(|&a| {
            Ok((
                a,
                mp_threshold(crate::specfun::StabilityIndex::new(a)?, eps),
            ))
        })
        .collect()
}
