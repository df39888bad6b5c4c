//! Explicit time integration: forward Euler and the three-stage TVD
//! Runge-Kutta scheme, with step sizes chosen inside the discrete
//! maximum-principle bound.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{DensityField, Grid, LevyParams};
use crate::operator::{OperatorScratch, OperatorWorkspace};
use crate::specfun::mp_threshold;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    ForwardEuler,
    #[default]
    TvdRk3,
}

pub const DEFAULT_SAFETY: f64 = 0.5;

/// Step size and integrator for a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub dt: f64,
    pub safety: f64,
    pub mode: Integrator,
}

impl StepControl {
    pub fn fixed(dt: f64, mode: Integrator) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid(
                "dt",
                format!("time step must be positive, got {dt}"),
            ));
        }
        Ok(Self {
            dt,
            safety: 1.0,
            mode,
        })
    }

    /// Step size from [`select_dt_for`] with the given safety factor.
    pub fn auto(ws: &OperatorWorkspace, safety: f64, mode: Integrator) -> Result<Self> {
        Ok(Self {
            dt: select_dt_for(ws, safety)?,
            safety,
            mode,
        })
    }
}

fn check_safety(safety: f64) -> Result<()> {
    if safety > 0.0 && safety <= 1.0 {
        Ok(())
    } else {
        Err(invalid(
            "safety",
            format!("must lie in (0, 1], got {safety}"),
        ))
    }
}

/// `safety * h^alpha * mp_threshold(alpha, eps)`.
pub fn select_dt(params: &LevyParams, grid: &Grid, safety: f64) -> Result<f64> {
    check_safety(safety)?;
    Ok(safety
        * grid.h().powf(params.alpha())
        * mp_threshold(params.stability_index(), params.eps()))
}

/// Composite bound for a prepared operator: the jump bound, the explicit
/// diffusion bound `h^2 / (2 C_h)` when `d > 0`, and the advective CFL bound
/// `h / lambda_LF` when a drift is present, all scaled by `safety`.
pub fn select_dt_for(ws: &OperatorWorkspace, safety: f64) -> Result<f64> {
    let params = ws.params();
    let grid = ws.grid();
    let h = grid.h();
    let mut bound = h.powf(params.alpha()) * mp_threshold(params.stability_index(), params.eps());
    if params.d() > 0.0 {
        bound = bound.min(h * h / (2.0 * ws.c_h()));
    }
    let lambda = ws.drift().lf_speed();
    if lambda > 0.0 {
        bound = bound.min(h / lambda);
    }
    check_safety(safety)?;
    if !bound.is_finite() {
        return Err(Error::Degenerate(
            "no jump, diffusion or drift term bounds the step; give dt explicitly".into(),
        ));
    }
    Ok(safety * bound)
}

fn check_finite(u: &[f64], time: f64) -> Result<()> {
    match u.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite {
            index: i,
            value: u[i],
            time,
        }),
        None => Ok(()),
    }
}

/// Reusable stage buffers for repeated steps on one grid.
#[derive(Debug, Clone)]
pub struct Stepper {
    mode: Integrator,
    rhs: Vec<f64>,
    stage1: Vec<f64>,
    stage2: Vec<f64>,
}

impl Stepper {
    pub fn new(mode: Integrator, len: usize) -> Self {
        Self {
            mode,
            rhs: vec![0.0; len],
            stage1: vec![0.0; len],
            stage2: vec![0.0; len],
        }
    }

    pub fn mode(&self) -> Integrator {
        self.mode
    }

    /// Advances `u` in place by `dt` using `rhs(u, out)`.
    pub fn step<F>(&mut self, u: &mut [f64], dt: f64, mut rhs: F) -> Result<()>
    where
        F: FnMut(&[f64], &mut [f64]) -> Result<()>,
    {
        if !(dt > 0.0) {
            return Err(invalid(
                "dt",
                format!("time step must be positive, got {dt}"),
            ));
        }
        let n = u.len();
        if self.rhs.len() != n {
            *self = Self::new(self.mode, n);
        }
        match self.mode {
            Integrator::ForwardEuler => {
                rhs(u, &mut self.rhs)?;
                for (x, r) in u.iter_mut().zip(&self.rhs) {
                    *x += dt * r;
                }
            }
            Integrator::TvdRk3 => {
                // U1 = U + dt R(U)
                rhs(u, &mut self.rhs)?;
                for i in 0..n {
                    self.stage1[i] = u[i] + dt * self.rhs[i];
                }
                // U2 = 3/4 U + 1/4 U1 + 1/4 dt R(U1)
                rhs(&self.stage1, &mut self.rhs)?;
                for i in 0..n {
                    self.stage2[i] = 0.75 * u[i] + 0.25 * self.stage1[i] + 0.25 * dt * self.rhs[i];
                }
                // U^{n+1} = 1/3 U + 2/3 U2 + 2/3 dt R(U2)
                rhs(&self.stage2, &mut self.rhs)?;
                for i in 0..n {
                    u[i] = u[i] / 3.0 + 2.0 / 3.0 * self.stage2[i] + 2.0 / 3.0 * dt * self.rhs[i];
                }
            }
        }
        Ok(())
    }
}

fn step_field<F>(p: &DensityField, mode: Integrator, dt: f64, rhs: F) -> Result<DensityField>
where
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    let mut next = p.clone();
    let t = p.time() + dt;
    Stepper::new(mode, p.values().len()).step(next.values_mut(), dt, rhs)?;
    check_finite(next.values(), t)?;
    next.enforce_condition();
    next.set_time(t);
    Ok(next)
}

/// `P + dt R(P)`.
pub fn euler_step<F>(p: &DensityField, rhs: F, dt: f64) -> Result<DensityField>
where
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    step_field(p, Integrator::ForwardEuler, dt, rhs)
}

/// One TVD-RK3 step.
pub fn rk3_step<F>(p: &DensityField, rhs: F, dt: f64) -> Result<DensityField>
where
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    step_field(p, Integrator::TvdRk3, dt, rhs)
}

/// Upper bound on the number of steps `evolve` will take.
pub const DEFAULT_MAX_STEPS: usize = 50_000_000;

/// Advances `p0` to `t_end` with fixed steps of `ctrl.dt`.
///
/// Each entry of `output_times` inside `(p0.time, t_end]` is hit exactly (the
/// step before it is shortened) and `observer` is called with the field
/// there. Output times at or before `p0.time` are ignored.
pub fn evolve<O>(
    p0: DensityField,
    ws: &OperatorWorkspace,
    ctrl: &StepControl,
    t_end: f64,
    output_times: &[f64],
    mut observer: O,
) -> Result<DensityField>
where
    O: FnMut(&DensityField),
{
    if p0.grid() != ws.grid() {
        return Err(Error::GridMismatch(
            "initial field and operator use different grids".into(),
        ));
    }
    if !(ctrl.dt > 0.0) {
        return Err(invalid(
            "dt",
            format!("time step must be positive, got {}", ctrl.dt),
        ));
    }
    if t_end < p0.time() {
        return Err(invalid(
            "t_end",
            format!("{t_end} is before the initial time {}", p0.time()),
        ));
    }

    let mut stops: Vec<f64> = output_times
        .iter()
        .copied()
        .filter(|&t| t > p0.time() && t < t_end)
        .collect();
    stops.push(t_end);
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let mut field = p0;
    let mut scratch: OperatorScratch = ws.scratch();
    let mut stepper = Stepper::new(ctrl.mode, field.values().len());
    let mut steps = 0usize;
    let observe_end = output_times.contains(&t_end);

    for stop in stops {
        if stop <= field.time() {
            continue;
        }
        let span = stop - field.time();
        // Tolerate roundoff so that a span of exactly n steps is not split
        // into n full steps plus a sliver.
        let n_steps = ((span / ctrl.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        if steps + n_steps > DEFAULT_MAX_STEPS {
            return Err(Error::StepLimit {
                limit: DEFAULT_MAX_STEPS,
                target: stop,
            });
        }
        let start = field.time();
        for k in 0..n_steps {
            let t_next = if k + 1 == n_steps {
                stop
            } else {
                start + (k + 1) as f64 * ctrl.dt
            };
            let dt = t_next - field.time();
            stepper.step(field.values_mut(), dt, |u, out| {
                ws.rhs_into(u, out, &mut scratch)
            })?;
            check_finite(field.values(), t_next)?;
            field.enforce_condition();
            field.set_time(t_next);
        }
        steps += n_steps;
        if stop < t_end || observe_end {
            observer(&field);
        }
    }
    Ok(field)
}
