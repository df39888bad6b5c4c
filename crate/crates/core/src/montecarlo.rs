//! Stochastic cross-checks: Chambers-Mallows-Stuck sampling of symmetric
//! alpha-stable variates and Euler-Maruyama paths of
//! `dX = f(X) dt + dL_t`.
//!
//! With the jump measure normalized by `C_alpha`, the Levy exponent of
//! `L_t` is `eps t |xi|^alpha + d t xi^2 / 2`, so an increment over `dt` is
//! `(eps dt)^(1/alpha) S + sqrt(d dt) N` with `S` standard symmetric stable
//! (characteristic function `exp(-|xi|^alpha)`) and `N` standard normal.
//!
//! Path `k` draws from ChaCha8 seeded with `seed` on stream `k`, so results
//! do not depend on how paths are scheduled across threads.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::grid::{DensityField, DriftKind, Grid, LevyParams};
use crate::specfun::StabilityIndex;

/// CMS transform of an angle `u` in `(-pi/2, pi/2)` and an exponential `w`.
pub fn cms_transform(alpha: f64, u: f64, w: f64) -> f64 {
    if alpha == 1.0 {
        return u.tan();
    }
    let cos_u = u.cos();
    let a = (alpha * u).sin() / cos_u.powf(1.0 / alpha);
    let b = ((u - alpha * u).cos() / w).powf((1.0 - alpha) / alpha);
    a * b
}

/// One standard symmetric alpha-stable variate.
pub fn cms_sample<R: Rng + ?Sized>(alpha: StabilityIndex, rng: &mut R) -> f64 {
    let a = alpha.get();
    loop {
        let u = PI * (rng.random::<f64>() - 0.5);
        let w: f64 = Exp1.sample(rng);
        // cos U -> 0 or W -> 0 can overflow; redraw
        if u.abs() >= FRAC_PI_2 || w <= 0.0 {
            continue;
        }
        let x = cms_transform(a, u, w);
        if x.is_finite() {
            return x;
        }
    }
}

/// Settings for [`simulate_terminal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConfig {
    pub params: LevyParams,
    pub drift: DriftKind,
    pub x0: f64,
    pub t_end: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    /// Paths leaving `[-guard, guard]` are frozen and flagged.
    pub guard_radius: f64,
}

/// Terminal positions of an ensemble of simulated paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub samples: Vec<f64>,
    pub exited: Vec<bool>,
    pub n_paths: usize,
    pub seed: u64,
    pub params: LevyParams,
    pub drift: DriftKind,
}

impl PathEnsemble {
    pub fn n_exited(&self) -> usize {
        self.exited.iter().filter(|e| **e).count()
    }

    /// Terminal positions of paths that stayed inside the guard radius.
    pub fn retained(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples
            .iter()
            .zip(&self.exited)
            .filter(|(_, e)| !**e)
            .map(|(x, _)| *x)
    }
}

fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

fn simulate_path(cfg: &PathConfig, path: usize, n_steps: usize) -> (f64, bool) {
    let mut rng = path_rng(cfg.seed, path);
    let alpha = cfg.params.stability_index();
    let inv_alpha = 1.0 / alpha.get();
    let eps = cfg.params.eps();
    let d = cfg.params.d();
    let f = |x: f64| cfg.drift.eval(x).unwrap_or(0.0);

    let mut x = cfg.x0;
    let mut t = 0.0;
    for k in 0..n_steps {
        let dt = if k + 1 == n_steps {
            cfg.t_end - t
        } else {
            cfg.dt
        };
        let mut next = x + f(x) * dt;
        if d > 0.0 {
            let z: f64 = StandardNormal.sample(&mut rng);
            next += (d * dt).sqrt() * z;
        }
        if eps > 0.0 {
            next += (eps * dt).powf(inv_alpha) * cms_sample(alpha, &mut rng);
        }
        x = next;
        t += dt;
        if !(x.abs() <= cfg.guard_radius) {
            return (x, true);
        }
    }
    (x, false)
}

/// Euler-Maruyama terminal samples at `t_end`; the last step is shortened to
/// land on `t_end`. Paths run in parallel on the current rayon pool.
pub fn simulate_terminal(cfg: &PathConfig) -> Result<PathEnsemble> {
    if !(cfg.t_end > 0.0 && cfg.t_end.is_finite()) {
        return Err(invalid(
            "t_end",
            format!("must be positive, got {}", cfg.t_end),
        ));
    }
    if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
        return Err(invalid("dt", format!("must be positive, got {}", cfg.dt)));
    }
    if cfg.drift == DriftKind::Tabulated {
        return Err(invalid("drift", "path simulation needs an analytic drift"));
    }
    if !(cfg.guard_radius > 0.0) {
        return Err(invalid("guard_radius", "must be positive"));
    }
    let n_steps = ((cfg.t_end / cfg.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let (samples, exited): (Vec<f64>, Vec<bool>) = (0..cfg.n_paths)
        .into_par_iter()
        .map(|k| simulate_path(cfg, k, n_steps))
        .unzip();
    Ok(PathEnsemble {
        samples,
        exited,
        n_paths: cfg.n_paths,
        seed: cfg.seed,
        params: cfg.params,
        drift: cfg.drift,
    })
}

/// Histogram with one bin of width `h` centered on each node, normalized by
/// `n_paths * h`. Samples outside the grid span and exited paths count
/// towards `n_paths` but not towards any bin.
pub fn empirical_density(ensemble: &PathEnsemble, grid: &Grid) -> Result<DensityField> {
    if ensemble.n_paths == 0 {
        return Err(Error::Degenerate("empty ensemble".into()));
    }
    let mut counts = vec![0u64; grid.len()];
    for x in ensemble.retained() {
        if let Some(i) = grid.nearest_index(x) {
            counts[i] += 1;
        }
    }
    let norm = 1.0 / (ensemble.n_paths as f64 * grid.h());
    let values = counts.into_iter().map(|c| c as f64 * norm).collect();
    DensityField::new(*grid, values, 0.0)
}

/// Probability mass of one bin under the ensemble and under the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinMass {
    pub lo: f64,
    pub hi: f64,
    pub empirical: f64,
    pub solver: f64,
}

/// Bins of `width` tiling `[lo, hi]`: fraction of all paths ending in each
/// bin, and the trapezoidal integral of `p` over it. Bin edges must be nodes
/// of `p`'s grid.
pub fn binned_masses(
    ensemble: &PathEnsemble,
    p: &DensityField,
    lo: f64,
    hi: f64,
    width: f64,
) -> Result<Vec<BinMass>> {
    if ensemble.n_paths == 0 {
        return Err(Error::Degenerate("empty ensemble".into()));
    }
    if !(width > 0.0 && hi > lo) {
        return Err(invalid(
            "bins",
            format!("need lo < hi and width > 0, got [{lo}, {hi}] / {width}"),
        ));
    }
    let n_bins = ((hi - lo) / width).round() as usize;
    if n_bins == 0 || ((hi - lo) / width - n_bins as f64).abs() > 1e-9 {
        return Err(invalid("width", "must tile [lo, hi]"));
    }
    let grid = p.grid();
    let per_bin = width / grid.h();
    let step = per_bin.round() as usize;
    if step == 0 || (per_bin - step as f64).abs() > 1e-9 {
        return Err(Error::GridMismatch(format!(
            "bin width {width} is not a multiple of h = {}",
            grid.h()
        )));
    }
    let first = grid
        .nearest_index(lo)
        .filter(|&i| (grid.x(i) - lo).abs() <= 1e-9 * width)
        .ok_or_else(|| Error::GridMismatch(format!("{lo} is not a grid node")))?;
    if first + n_bins * step >= grid.len() {
        return Err(Error::GridMismatch(format!(
            "[{lo}, {hi}] exceeds the grid"
        )));
    }

    let mut counts = vec![0u64; n_bins];
    for x in ensemble.retained() {
        if x >= lo && x < hi {
            let b = (((x - lo) / width) as usize).min(n_bins - 1);
            counts[b] += 1;
        }
    }
    let v = p.values();
    let h = grid.h();
    let n = ensemble.n_paths as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(b, &c)| {
            let i0 = first + b * step;
            BinMass {
                lo: lo + b as f64 * width,
                hi: lo + (b + 1) as f64 * width,
                empirical: c as f64 / n,
                solver: (i0..i0 + step).map(|i| 0.5 * h * (v[i] + v[i + 1])).sum(),
            }
        })
        .collect())
}

/// `sum_b |n_b / n_paths - int_b p dx|` over the bins of [`binned_masses`].
pub fn binned_l1_distance(
    ensemble: &PathEnsemble,
    p: &DensityField,
    lo: f64,
    hi: f64,
    width: f64,
) -> Result<f64> {
    Ok(binned_masses(ensemble, p, lo, hi, width)?
        .iter()
        .map(|b| (b.empirical - b.solver).abs())
        .sum())
}

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// CDF of the Cauchy law with the given scale.
pub fn cauchy_cdf(x: f64, scale: f64) -> f64 {
    0.5 + (x / scale).atan() / PI
}
