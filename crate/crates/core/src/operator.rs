//! Semi-discrete right-hand side of the nonlocal Fokker-Planck equation.
//!
//! For node `j` the scheme reads
//!
//! ```text
//! dP_j/dt = C_h (P_{j-1} - 2 P_j + P_{j+1}) / h^2
//!         - [ D+ (fP)+ + D- (fP)- ]_j
//!         - E_j P_j                                  (absorbing only)
//!         + eps C_alpha h sum''_{k=-J-j..J-j, k!=0} (P_{j+k} - P_j) / |x_k|^(1+alpha)
//! ```
//!
//! where `sum''` halves the two end terms, `C_h = d/2 - eps C_alpha zeta(alpha-1) h^(2-alpha)`
//! absorbs the quadrature correction of the singular integral, and
//! `E_j = eps C_alpha / alpha [(B + x_j)^-alpha + (B - x_j)^-alpha]` is the
//! exterior part of the jump integral evaluated in closed form.
//!
//! The sum is a symmetric Toeplitz product with column `w_k = h / |k h|^(1+alpha)`
//! plus an `O(1)` per-row correction for the halved end terms.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{AuxCondition, DensityField, DriftField, Grid, LevyParams};
use crate::toeplitz::{PreparedToeplitz, SymmetricToeplitzKernel, ToeplitzScratch};
use crate::weno::{weno3_minus_padded, weno3_plus_padded, DEFAULT_WENO_DELTA};

/// How the Toeplitz part of the nonlocal sum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelPath {
    #[default]
    Fft,
    /// Direct `O(J^2)` product; reference path for testing.
    Naive,
}

/// Treatment of the end nodes `x = +-L` under the natural condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NaturalEdge {
    /// End nodes evolve like interior ones, with zero ghost values beyond them.
    #[default]
    Free,
    /// End nodes are held at their current (normally zero) value; the
    /// truncated problem then behaves as if `p` vanished from `+-L` outwards.
    Pinned,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorOptions {
    pub weno_delta: f64,
    pub kernel_path: KernelPath,
    pub natural_edge: NaturalEdge,
}

impl Default for OperatorOptions {
    fn default() -> Self {
        Self {
            weno_delta: DEFAULT_WENO_DELTA,
            kernel_path: KernelPath::Fft,
            natural_edge: NaturalEdge::Free,
        }
    }
}

/// Everything about the discrete operator that does not depend on `P`.
#[derive(Debug, Clone)]
pub struct OperatorWorkspace {
    params: LevyParams,
    grid: Grid,
    drift: DriftField,
    kernel: SymmetricToeplitzKernel,
    prepared: Option<PreparedToeplitz>,
    diag_sums: Vec<f64>,
    exterior: Option<Vec<f64>>,
    c_h: f64,
    options: OperatorOptions,
}

/// Per-caller buffers for right-hand-side evaluation.
#[derive(Debug, Clone)]
pub struct OperatorScratch {
    toeplitz: Option<ToeplitzScratch>,
    conv: Vec<f64>,
    ext_plus: Vec<f64>,
    ext_minus: Vec<f64>,
    d_plus: Vec<f64>,
    d_minus: Vec<f64>,
    adv: Vec<f64>,
}

/// Minimum `J` for which the WENO stencils fit inside the grid.
pub const MIN_HALF_NODES: usize = 4;

impl OperatorWorkspace {
    pub fn prepare(params: LevyParams, grid: Grid, drift: DriftField) -> Result<Self> {
        Self::prepare_with(params, grid, drift, OperatorOptions::default())
    }

    pub fn prepare_with(
        params: LevyParams,
        grid: Grid,
        drift: DriftField,
        options: OperatorOptions,
    ) -> Result<Self> {
        if grid.half_nodes() < MIN_HALF_NODES {
            return Err(invalid(
                "h",
                format!(
                    "grid has J = {}, at least {MIN_HALF_NODES} interior steps per side are required",
                    grid.half_nodes()
                ),
            ));
        }
        if drift.nodal().len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "drift has {} nodes, grid has {}",
                drift.nodal().len(),
                grid.len()
            )));
        }
        if !(options.weno_delta.is_finite() && options.weno_delta > 0.0) {
            return Err(invalid("weno_delta", "must be positive"));
        }

        let n = grid.len();
        let h = grid.h();
        let alpha = params.alpha();

        // w_k = h / |k h|^(1+alpha), k = 0..2J, with w_0 unused (k != 0).
        let h_pow = h.powf(-alpha);
        let mut col = vec![0.0; n];
        for (k, w) in col.iter_mut().enumerate().skip(1) {
            *w = h_pow * (k as f64).powf(-(1.0 + alpha));
        }

        // prefix[m] = sum_{k=1}^{m} w_k
        let mut prefix = vec![0.0; n];
        for k in 1..n {
            prefix[k] = prefix[k - 1] + col[k];
        }
        // Row i reaches i nodes to the left and n-1-i to the right; the two
        // outermost terms carry weight 1/2.
        let diag_sums = (0..n)
            .map(|i| {
                let (l, r) = (i, n - 1 - i);
                prefix[l] + prefix[r] - 0.5 * (col[l] + col[r])
            })
            .collect();

        let exterior = match grid.condition() {
            AuxCondition::Absorbing { .. } => {
                let b = grid.half_width();
                let coef = params.eps() * params.c_alpha() / alpha;
                let mut e: Vec<f64> = (0..n)
                    .map(|i| {
                        let x = grid.x(i);
                        coef * ((b + x).powf(-alpha) + (b - x).powf(-alpha))
                    })
                    .collect();
                // boundary rows are never used
                e[0] = 0.0;
                e[n - 1] = 0.0;
                Some(e)
            }
            AuxCondition::Natural { .. } => None,
        };

        let kernel = SymmetricToeplitzKernel::new(col)?;
        let prepared = match options.kernel_path {
            KernelPath::Fft => Some(PreparedToeplitz::new(&kernel)),
            KernelPath::Naive => None,
        };

        Ok(Self {
            c_h: params.c_h(h),
            params,
            grid,
            drift,
            kernel,
            prepared,
            diag_sums,
            exterior,
            options,
        })
    }

    pub fn params(&self) -> &LevyParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn drift(&self) -> &DriftField {
        &self.drift
    }

    pub fn options(&self) -> OperatorOptions {
        self.options
    }

    /// Toeplitz column `w_k`, `k = 0..2J` (`w_0 = 0`).
    pub fn kernel_column(&self) -> &[f64] {
        self.kernel.first_col()
    }

    /// `S_j = h sum''_{k != 0} 1/|x_k|^(1+alpha)` per node.
    pub fn diag_sums(&self) -> &[f64] {
        &self.diag_sums
    }

    /// `E_j` for the absorbing condition (zero at the two boundary nodes).
    pub fn exterior(&self) -> Option<&[f64]> {
        self.exterior.as_deref()
    }

    pub fn c_h(&self) -> f64 {
        self.c_h
    }

    pub fn scratch(&self) -> OperatorScratch {
        let n = self.grid.len();
        OperatorScratch {
            toeplitz: self.prepared.as_ref().map(|p| p.scratch()),
            conv: vec![0.0; n],
            ext_plus: vec![0.0; n + 4],
            ext_minus: vec![0.0; n + 4],
            d_plus: vec![0.0; n],
            d_minus: vec![0.0; n],
            adv: vec![0.0; n],
        }
    }

    fn check_field(&self, p: &DensityField) -> Result<()> {
        if p.grid() != &self.grid {
            return Err(Error::GridMismatch(
                "density field is bound to a different grid".into(),
            ));
        }
        Ok(())
    }

    fn check_len(&self, u: &[f64], out: &[f64]) -> Result<()> {
        let n = self.grid.len();
        for len in [u.len(), out.len()] {
            if len != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: len,
                });
            }
        }
        Ok(())
    }

    /// `out_j = eps C_alpha (conv_j - S_j u_j)`.
    fn nonlocal_into(
        &self,
        u: &[f64],
        out: &mut [f64],
        scratch: &mut OperatorScratch,
    ) -> Result<()> {
        let n = u.len();
        let conv = &mut scratch.conv;
        match (&self.prepared, scratch.toeplitz.as_mut()) {
            (Some(p), Some(ts)) => p.matvec_into(u, conv, ts)?,
            (Some(p), None) => {
                let mut ts = p.scratch();
                p.matvec_into(u, conv, &mut ts)?;
                scratch.toeplitz = Some(ts);
            }
            (None, _) => conv.copy_from_slice(&self.kernel.matvec_naive(u)?),
        }
        let w = self.kernel.first_col();
        let scale = self.params.eps() * self.params.c_alpha();
        let (first, last) = (u[0], u[n - 1]);
        for i in 0..n {
            // end-index halving at m = -J and m = J (w_0 = 0 covers m = i)
            let c = conv[i] - 0.5 * (w[i] * first + w[n - 1 - i] * last);
            out[i] = scale * (c - self.diag_sums[i] * u[i]);
        }
        Ok(())
    }

    /// `out = -[D+ (fP)+ + D- (fP)-]` with global Lax-Friedrichs splitting.
    fn advection_into(&self, u: &[f64], out: &mut [f64], scratch: &mut OperatorScratch) {
        if self.drift.is_zero() {
            out.iter_mut().for_each(|o| *o = 0.0);
            return;
        }
        let n = u.len();
        let lambda = self.drift.lf_speed();
        let f = self.drift.nodal();
        let (ep, em) = (&mut scratch.ext_plus, &mut scratch.ext_minus);
        ep.iter_mut().for_each(|v| *v = 0.0);
        em.iter_mut().for_each(|v| *v = 0.0);
        // split fluxes vanish at j = +-J and beyond
        for i in 1..n - 1 {
            let fp = f[i] * u[i];
            ep[i + 2] = 0.5 * (fp + lambda * u[i]);
            em[i + 2] = 0.5 * (fp - lambda * u[i]);
        }
        let h = self.grid.h();
        let delta = self.options.weno_delta;
        weno3_plus_padded(ep, h, delta, &mut scratch.d_plus);
        weno3_minus_padded(em, h, delta, &mut scratch.d_minus);
        for ((o, a), b) in out.iter_mut().zip(&scratch.d_plus).zip(&scratch.d_minus) {
            *o = -(a + b);
        }
    }

    /// Full right-hand side for the workspace's auxiliary condition.
    pub fn rhs_into(
        &self,
        u: &[f64],
        out: &mut [f64],
        scratch: &mut OperatorScratch,
    ) -> Result<()> {
        self.check_len(u, out)?;
        let n = u.len();
        self.nonlocal_into(u, out, scratch)?;

        if !self.drift.is_zero() {
            let mut adv = std::mem::take(&mut scratch.adv);
            adv.resize(n, 0.0);
            self.advection_into(u, &mut adv, scratch);
            for (o, a) in out.iter_mut().zip(&adv) {
                *o += a;
            }
            scratch.adv = adv;
        }

        let diff = self.c_h / (self.grid.h() * self.grid.h());
        for i in 0..n {
            let left = if i > 0 { u[i - 1] } else { 0.0 };
            let right = if i + 1 < n { u[i + 1] } else { 0.0 };
            out[i] += diff * (left - 2.0 * u[i] + right);
        }
        if let Some(e) = &self.exterior {
            for i in 0..n {
                out[i] -= e[i] * u[i];
            }
            out[0] = 0.0;
            out[n - 1] = 0.0;
        } else if self.options.natural_edge == NaturalEdge::Pinned {
            out[0] = 0.0;
            out[n - 1] = 0.0;
        }
        Ok(())
    }

    /// Nonlocal sum term alone.
    pub fn nonlocal_sum(&self, p: &DensityField) -> Result<Vec<f64>> {
        self.check_field(p)?;
        let mut out = vec![0.0; p.values().len()];
        self.nonlocal_into(p.values(), &mut out, &mut self.scratch())?;
        Ok(out)
    }

    /// Advection term alone.
    pub fn advection_term(&self, p: &DensityField) -> Result<Vec<f64>> {
        self.check_field(p)?;
        let mut out = vec![0.0; p.values().len()];
        self.advection_into(p.values(), &mut out, &mut self.scratch());
        Ok(out)
    }

    /// Right-hand side under the absorbing condition.
    pub fn rhs_absorbing(&self, p: &DensityField) -> Result<Vec<f64>> {
        self.check_field(p)?;
        if !self.grid.condition().is_absorbing() {
            return Err(Error::GridMismatch(
                "workspace was prepared for the natural condition".into(),
            ));
        }
        self.rhs(p)
    }

    /// Right-hand side under the natural far-field condition.
    pub fn rhs_natural(&self, p: &DensityField) -> Result<Vec<f64>> {
        self.check_field(p)?;
        if self.grid.condition().is_absorbing() {
            return Err(Error::GridMismatch(
                "workspace was prepared for the absorbing condition".into(),
            ));
        }
        self.rhs(p)
    }

    pub fn rhs(&self, p: &DensityField) -> Result<Vec<f64>> {
        self.check_field(p)?;
        let mut out = vec![0.0; p.values().len()];
        self.rhs_into(p.values(), &mut out, &mut self.scratch())?;
        Ok(out)
    }
}

/// Split fluxes `(fP)+-` = `(f P +- lambda P) / 2` at every node.
pub fn split_fluxes(f: &[f64], p: &[f64], lambda: f64) -> (Vec<f64>, Vec<f64>) {
    f.iter()
        .zip(p)
        .map(|(fi, pi)| (0.5 * (fi * pi + lambda * pi), 0.5 * (fi * pi - lambda * pi)))
        .unzip()
}
