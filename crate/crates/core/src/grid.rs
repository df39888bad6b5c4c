//! Grids, nodal fields, drift descriptors and Levy parameters shared by the
//! solver modules.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::specfun::{c_alpha, riemann_zeta, StabilityIndex};

/// Parameters of the driving Levy motion: generating triplet `(0, d, eps nu_alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    alpha: StabilityIndex,
    eps: f64,
    d: f64,
    c_alpha: f64,
    zeta_am1: f64,
}

impl LevyParams {
    /// `eps` is the jump intensity and `d` the Gaussian diffusion constant.
    pub fn new(alpha: f64, eps: f64, d: f64) -> Result<Self> {
        let alpha = StabilityIndex::new(alpha)?;
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(invalid(
                "eps",
                format!("noise intensity must be >= 0, got {eps}"),
            ));
        }
        if !(d.is_finite() && d >= 0.0) {
            return Err(invalid("d", format!("diffusion must be >= 0, got {d}")));
        }
        Ok(Self {
            alpha,
            eps,
            d,
            c_alpha: c_alpha(alpha),
            zeta_am1: riemann_zeta(alpha.get() - 1.0)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.get()
    }

    pub fn stability_index(&self) -> StabilityIndex {
        self.alpha
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// `C_alpha` of the jump measure.
    pub fn c_alpha(&self) -> f64 {
        self.c_alpha
    }

    /// `zeta(alpha - 1)`.
    pub fn zeta_am1(&self) -> f64 {
        self.zeta_am1
    }

    /// Corrected diffusion coefficient `d/2 - eps C_alpha zeta(alpha-1) h^(2-alpha)`.
    pub fn c_h(&self, h: f64) -> f64 {
        0.5 * self.d - self.eps * self.c_alpha * self.zeta_am1 * h.powf(2.0 - self.alpha())
    }
}

/// Auxiliary condition imposed outside (or at the far field of) the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AuxCondition {
    /// Density vanishes identically outside `(a, b)`.
    Absorbing { a: f64, b: f64 },
    /// Density decays at infinity; the computation runs on `(-half_width, half_width)`.
    Natural { half_width: f64 },
}

impl AuxCondition {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AuxCondition::Absorbing { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(invalid(
                        "condition",
                        format!("absorbing interval needs a < b, got ({a}, {b})"),
                    ));
                }
                let half = 0.5 * (b - a);
                if (a + b).abs() > 1e-12 * half {
                    return Err(invalid(
                        "condition",
                        format!("absorbing interval must be symmetric about 0, got ({a}, {b})"),
                    ));
                }
                Ok(())
            }
            AuxCondition::Natural { half_width } => {
                if !(half_width.is_finite() && half_width >= 1.0) {
                    return Err(invalid(
                        "condition",
                        format!("natural half-width must be >= 1, got {half_width}"),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Half-width `B` of the computational interval `(-B, B)`.
    pub fn half_width(&self) -> f64 {
        match *self {
            AuxCondition::Absorbing { a, b } => 0.5 * (b - a),
            AuxCondition::Natural { half_width } => half_width,
        }
    }

    pub fn is_absorbing(&self) -> bool {
        matches!(self, AuxCondition::Absorbing { .. })
    }
}

/// Uniform mesh `x_j = j h`, `-J <= j <= J`.
///
/// Nodes are stored with offset `J`: storage index `i` holds node `j = i - J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    h: f64,
    half_nodes: usize,
    condition: AuxCondition,
}

impl Grid {
    /// Builds the grid for `condition` with spacing `h`; `h` must divide the
    /// half-width to within 1e-12.
    pub fn new(condition: AuxCondition, h: f64) -> Result<Self> {
        condition.validate()?;
        if !(h.is_finite() && h > 0.0) {
            return Err(invalid("h", format!("spacing must be positive, got {h}")));
        }
        let half = condition.half_width();
        let ratio = half / h;
        let j = ratio.round();
        if j < 1.0 || (ratio - j).abs() > 1e-12 * ratio.max(1.0) {
            return Err(invalid(
                "h",
                format!("spacing {h} does not divide the half-width {half}"),
            ));
        }
        // Re-derive h from J so that J*h reproduces the endpoint exactly.
        let j = j as usize;
        Ok(Self {
            h: half / j as f64,
            half_nodes: j,
            condition,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `J`: the largest node index.
    pub fn half_nodes(&self) -> usize {
        self.half_nodes
    }

    /// Number of nodes `2J + 1`.
    pub fn len(&self) -> usize {
        2 * self.half_nodes + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn condition(&self) -> AuxCondition {
        self.condition
    }

    pub fn half_width(&self) -> f64 {
        self.condition.half_width()
    }

    /// Coordinate of storage index `i`.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - self.half_nodes as f64) * self.h
    }

    /// Storage index of node `j`.
    #[inline]
    pub fn index_of(&self, j: isize) -> usize {
        (j + self.half_nodes as isize) as usize
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    /// Storage index of the node closest to `x`, if `x` lies on the grid span.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        let j = (x / self.h).round();
        if j.abs() > self.half_nodes as f64 {
            None
        } else {
            Some(self.index_of(j as isize))
        }
    }
}

/// Nodal probability density at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    values: Vec<f64>,
    grid: Grid,
    time: f64,
}

impl DensityField {
    pub fn new(grid: Grid, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                index: i,
                value: *v,
                time,
            });
        }
        let mut field = Self { values, grid, time };
        field.enforce_condition();
        Ok(field)
    }

    pub fn zeros(grid: Grid, time: f64) -> Self {
        Self {
            values: vec![0.0; grid.len()],
            grid,
            time,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    /// Value at node `j`.
    pub fn at(&self, j: isize) -> f64 {
        self.values[self.grid.index_of(j)]
    }

    /// Zeroes the boundary nodes for the absorbing condition.
    pub fn enforce_condition(&mut self) {
        if self.grid.condition.is_absorbing() {
            let n = self.values.len();
            self.values[0] = 0.0;
            self.values[n - 1] = 0.0;
        }
    }
}

/// Built-in drift fields `f(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriftKind {
    Zero,
    /// `f(x) = -x`
    OrnsteinUhlenbeck,
    /// `f(x) = x - x^3`
    DoubleWell,
    /// Nodal values supplied by the caller.
    Tabulated,
}

impl DriftKind {
    /// Analytic drift, `None` for tabulated fields.
    pub fn eval(self, x: f64) -> Option<f64> {
        match self {
            DriftKind::Zero => Some(0.0),
            DriftKind::OrnsteinUhlenbeck => Some(-x),
            DriftKind::DoubleWell => Some(x - x * x * x),
            DriftKind::Tabulated => None,
        }
    }

    /// `max |f|` over `[-b, b]`.
    fn max_speed(self, b: f64) -> Option<f64> {
        match self {
            DriftKind::Zero => Some(0.0),
            DriftKind::OrnsteinUhlenbeck => Some(b),
            DriftKind::DoubleWell => {
                // interior extremum at 1/sqrt(3), endpoint value b^3 - b
                let x_c = 1.0 / 3f64.sqrt();
                let interior = if b >= x_c { x_c - x_c.powi(3) } else { 0.0 };
                Some(interior.max((b - b * b * b).abs()))
            }
            DriftKind::Tabulated => None,
        }
    }
}

/// Drift evaluated on the nodes of a grid together with its global
/// Lax-Friedrichs speed `max |f|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftField {
    kind: DriftKind,
    nodal: Vec<f64>,
    lf_speed: f64,
}

impl DriftField {
    pub fn new(kind: DriftKind, grid: &Grid) -> Result<Self> {
        let Some(_) = kind.eval(0.0) else {
            return Err(invalid(
                "drift",
                "tabulated drift needs nodal values; use DriftField::tabulated",
            ));
        };
        let nodal: Vec<f64> = grid
            .nodes()
            .into_iter()
            .map(|x| kind.eval(x).unwrap())
            .collect();
        let lf_speed = kind.max_speed(grid.half_width()).unwrap();
        Ok(Self {
            kind,
            nodal,
            lf_speed,
        })
    }

    pub fn zero(grid: &Grid) -> Self {
        Self {
            kind: DriftKind::Zero,
            nodal: vec![0.0; grid.len()],
            lf_speed: 0.0,
        }
    }

    pub fn tabulated(values: Vec<f64>, grid: &Grid) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid(
                "drift",
                "tabulated drift contains non-finite values",
            ));
        }
        let lf_speed = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(Self {
            kind: DriftKind::Tabulated,
            nodal: values,
            lf_speed,
        })
    }

    pub fn kind(&self) -> DriftKind {
        self.kind
    }

    pub fn nodal(&self) -> &[f64] {
        &self.nodal
    }

    /// Global Lax-Friedrichs speed.
    pub fn lf_speed(&self) -> f64 {
        self.lf_speed
    }

    pub fn is_zero(&self) -> bool {
        self.lf_speed == 0.0
    }
}

/// Initial densities used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialProfile {
    /// `sqrt(40/pi) exp(-x^2/40)`, taken literally (its total mass is not 1).
    GaussianPaper,
    /// Unit-mass Gaussian with the given variance and center.
    GaussianNormalized {
        variance: f64,
        #[serde(default)]
        center: f64,
    },
    /// `0.5` on `[-1, 1]`, zero elsewhere.
    Uniform,
    /// Cauchy density at time `t0`: `t0 / (pi (t0^2 + x^2))`.
    CauchySeed {
        #[serde(default = "default_t0")]
        t0: f64,
    },
}

fn default_t0() -> f64 {
    0.01
}

impl InitialProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            InitialProfile::GaussianNormalized { variance, center } => {
                if !(variance.is_finite() && variance > 0.0) {
                    return Err(invalid(
                        "initial.variance",
                        format!("must be positive, got {variance}"),
                    ));
                }
                if !center.is_finite() {
                    return Err(invalid("initial.center", "must be finite"));
                }
            }
            InitialProfile::CauchySeed { t0 } => {
                if !(t0.is_finite() && t0 > 0.0) {
                    return Err(invalid("initial.t0", format!("must be positive, got {t0}")));
                }
            }
            InitialProfile::GaussianPaper | InitialProfile::Uniform => {}
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            InitialProfile::GaussianPaper => (40.0 / PI).sqrt() * (-x * x / 40.0).exp(),
            InitialProfile::GaussianNormalized { variance, center } => {
                let z = x - center;
                (-z * z / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
            }
            InitialProfile::Uniform => {
                if x.abs() <= 1.0 {
                    0.5
                } else {
                    0.0
                }
            }
            InitialProfile::CauchySeed { t0 } => t0 / (PI * (t0 * t0 + x * x)),
        }
    }

    /// Time stamp carried by the sampled field.
    pub fn start_time(&self) -> f64 {
        match *self {
            InitialProfile::CauchySeed { t0 } => t0,
            _ => 0.0,
        }
    }
}

/// Nodal evaluation of `profile` on `grid`. Absorbing boundary nodes are set
/// to zero, all other nodes carry the analytic value.
pub fn sample_initial(profile: &InitialProfile, grid: &Grid) -> Result<DensityField> {
    profile.validate()?;
    let values = (0..grid.len()).map(|i| profile.eval(grid.x(i))).collect();
    DensityField::new(*grid, values, profile.start_time())
}
