//! Scenario documents: one solver run (plus an optional Monte-Carlo
//! ensemble) described in TOML.
//!
//! ```toml
//! schema_version = 1
//! name = "cauchy"
//! drift = "zero"              # zero | ornstein-uhlenbeck | double-well
//! h = 0.001
//! t_outputs = [0.05, 0.1, 0.2]
//! # optional: safety = 0.5, dt = ..., dt_factor = ..., integrator = "tvd-rk3",
//! # weno_delta = 1e-6, natural_edge = "free", unit_mass = false, outputs_dir = "sub"
//!
//! [params]
//! alpha = 1.0
//! eps = 1.0                   # default 1
//! d = 0.0                     # default 0
//!
//! [condition]
//! kind = "natural"            # or kind = "absorbing", a = -1.0, b = 1.0
//! half_width = 50.0
//!
//! [initial]
//! kind = "cauchy-seed"        # gaussian-paper | gaussian-normalized | uniform
//! t0 = 0.01
//!
//! [mc]                        # optional
//! n_paths = 100000
//! dt = 0.01
//! seed = 1
//! ```

use levyfp_core::experiments::{DtRule, RunSpec};
use levyfp_core::{AuxCondition, DriftKind, InitialProfile, Integrator, LevyParams, NaturalEdge};
use serde::{Deserialize, Serialize};

use crate::error::{config, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    #[serde(default = "zero_drift")]
    pub drift: DriftKind,
    pub h: f64,
    /// Strictly increasing; a time equal to the profile's start time writes
    /// the initial field.
    pub t_outputs: Vec<f64>,
    #[serde(default = "default_safety")]
    pub safety: f64,
    /// Fixed step; exclusive with `dt_factor`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Step `dt_factor * h^alpha`; without either, `safety` times the
    /// stability bound is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_factor: Option<f64>,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default = "default_weno_delta")]
    pub weno_delta: f64,
    #[serde(default)]
    pub natural_edge: NaturalEdge,
    #[serde(default)]
    pub unit_mass: bool,
    /// Subdirectory of `--out` receiving this scenario's files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs_dir: Option<String>,
    pub params: ParamsSection,
    pub condition: AuxCondition,
    pub initial: InitialProfile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub alpha: f64,
    #[serde(default = "one")]
    pub eps: f64,
    #[serde(default)]
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default = "default_guard")]
    pub guard_radius: f64,
    /// Width of the bins used to compare the ensemble with the solver.
    #[serde(default = "default_bin_width")]
    pub bin_width: f64,
    /// Compare on `[-range, range]`; the whole grid when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<f64>,
}

fn zero_drift() -> DriftKind {
    DriftKind::Zero
}
fn default_safety() -> f64 {
    levyfp_core::stepper::DEFAULT_SAFETY
}
fn default_weno_delta() -> f64 {
    levyfp_core::weno::DEFAULT_WENO_DELTA
}
fn one() -> f64 {
    1.0
}
fn default_guard() -> f64 {
    1e12
}
fn default_bin_width() -> f64 {
    0.5
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> CliResult<Scenario> {
    let sc: Scenario = toml::from_str(text).map_err(|e| config(format!("scenario: {e}")))?;
    sc.validate()?;
    Ok(sc)
}

impl Scenario {
    /// A scenario with the documented defaults for everything optional.
    pub fn new(
        name: impl Into<String>,
        params: ParamsSection,
        condition: AuxCondition,
        initial: InitialProfile,
        h: f64,
        t_outputs: Vec<f64>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            name: name.into(),
            drift: DriftKind::Zero,
            h,
            t_outputs,
            safety: default_safety(),
            dt: None,
            dt_factor: None,
            integrator: Integrator::default(),
            weno_delta: default_weno_delta(),
            natural_edge: NaturalEdge::default(),
            unit_mass: false,
            outputs_dir: None,
            params,
            condition,
            initial,
            mc: None,
        }
    }

    pub fn with_drift(mut self, drift: DriftKind) -> Self {
        self.drift = drift;
        self
    }

    pub fn with_dt_factor(mut self, factor: f64) -> Self {
        self.dt_factor = Some(factor);
        self
    }

    pub fn with_outputs_dir(mut self, dir: impl Into<String>) -> Self {
        self.outputs_dir = Some(dir.into());
        self
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Checks every rule the solver would otherwise reject mid-run.
    pub fn validate(&self) -> CliResult<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(config(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                self.schema_version
            )));
        }
        check_name("name", &self.name)?;
        if let Some(dir) = &self.outputs_dir {
            for part in dir.split('/') {
                check_name("outputs_dir", part)?;
            }
        }
        if self.drift == DriftKind::Tabulated {
            return Err(config(
                "drift: tabulated drifts are only available through the library",
            ));
        }
        self.levy_params()?;
        self.initial.validate().map_err(core_config)?;
        self.run_spec()?.grid().map_err(core_config)?;
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(config(format!(
                "safety: must lie in (0, 1], got {}",
                self.safety
            )));
        }
        if !(self.weno_delta > 0.0 && self.weno_delta.is_finite()) {
            return Err(config(format!(
                "weno_delta: must be positive, got {}",
                self.weno_delta
            )));
        }
        match (self.dt, self.dt_factor) {
            (Some(_), Some(_)) => return Err(config("dt, dt_factor: give at most one")),
            (Some(v), None) | (None, Some(v)) if !(v > 0.0 && v.is_finite()) => {
                return Err(config(format!("dt / dt_factor: must be positive, got {v}")));
            }
            _ => {}
        }
        self.check_times()?;
        if let Some(mc) = &self.mc {
            if mc.n_paths == 0 {
                return Err(config("mc.n_paths: must be at least 1"));
            }
            if !(mc.dt > 0.0 && mc.dt.is_finite()) {
                return Err(config(format!("mc.dt: must be positive, got {}", mc.dt)));
            }
            if !mc.x0.is_finite() {
                return Err(config("mc.x0: must be finite"));
            }
            if !(mc.guard_radius > 0.0) {
                return Err(config("mc.guard_radius: must be positive"));
            }
            if !(mc.bin_width > 0.0 && mc.bin_width.is_finite()) {
                return Err(config("mc.bin_width: must be positive"));
            }
            if let Some(r) = mc.range {
                if !(r > 0.0 && r <= self.condition.half_width()) {
                    return Err(config(format!(
                        "mc.range: must lie in (0, half-width], got {r}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_times(&self) -> CliResult<()> {
        let t = &self.t_outputs;
        if t.is_empty() {
            return Err(config("t_outputs: at least one output time is required"));
        }
        if let Some(bad) = t.iter().find(|v| !v.is_finite()) {
            return Err(config(format!("t_outputs: {bad} is not finite")));
        }
        if let Some(w) = t.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(config(format!(
                "t_outputs: must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
        let start = self.initial.start_time();
        if t[0] < start {
            return Err(config(format!(
                "t_outputs: {} precedes the initial time {start}",
                t[0]
            )));
        }
        Ok(())
    }

    pub fn levy_params(&self) -> CliResult<LevyParams> {
        let p = self.params;
        LevyParams::new(p.alpha, p.eps, p.d).map_err(|e| config(format!("params: {e}")))
    }

    pub fn dt_rule(&self) -> DtRule {
        match (self.dt, self.dt_factor) {
            (Some(dt), _) => DtRule::Fixed { dt },
            (None, Some(factor)) => DtRule::HAlpha { factor },
            (None, None) => DtRule::Auto {
                safety: self.safety,
            },
        }
    }

    /// Final output time.
    pub fn t_end(&self) -> f64 {
        self.t_outputs.last().copied().unwrap_or(0.0)
    }

    pub fn run_spec(&self) -> CliResult<RunSpec> {
        Ok(RunSpec {
            params: self.levy_params()?,
            condition: self.condition,
            drift: self.drift,
            initial: self.initial,
            h: self.h,
            dt: self.dt_rule(),
            integrator: self.integrator,
            weno_delta: self.weno_delta,
            natural_edge: self.natural_edge,
            unit_mass: self.unit_mass,
            t_end: self.t_end(),
        })
    }

    /// True when the run is the Cauchy problem with a known closed form.
    pub fn has_exact_solution(&self) -> bool {
        let p = self.params;
        p.alpha == 1.0
            && p.eps == 1.0
            && p.d == 0.0
            && self.drift == DriftKind::Zero
            && !self.condition.is_absorbing()
            && matches!(self.initial, InitialProfile::CauchySeed { .. })
            && !self.unit_mass
    }
}

fn check_name(field: &str, s: &str) -> CliResult<()> {
    let ok = !s.is_empty()
        && s != "."
        && s != ".."
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(config(format!(
            "{field}: {s:?} must be non-empty and use only letters, digits, '-', '_' and '.'"
        )))
    }
}

fn core_config(e: levyfp_core::Error) -> crate::error::CliError {
    config(e.to_string())
}
