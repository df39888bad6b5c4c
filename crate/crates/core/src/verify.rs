//! Exact solutions, error norms, convergence orders, domain-size
//! extrapolation, mass integrals and tail-slope fits.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::DensityField;

/// Cauchy density `t / (pi (t^2 + x^2))`: the exact solution for
/// `alpha = 1`, `eps = 1`, `f = 0`, `d = 0` on the whole line.
pub fn cauchy_exact(x: f64, t: f64) -> f64 {
    t / (PI * (t * t + x * x))
}

/// Maximum absolute error and relative 2-norm error at one time level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub max_abs: f64,
    pub rel_l2: f64,
    pub at_time: f64,
}

pub fn error_report<F>(p: &DensityField, exact: F) -> Result<ErrorReport>
where
    F: Fn(f64) -> f64,
{
    let grid = p.grid();
    let mut max_abs = 0.0_f64;
    let mut err2 = 0.0;
    let mut ref2 = 0.0;
    for (i, &v) in p.values().iter().enumerate() {
        let e = exact(grid.x(i));
        let diff = v - e;
        max_abs = max_abs.max(diff.abs());
        err2 += diff * diff;
        ref2 += e * e;
    }
    if ref2 == 0.0 {
        return Err(Error::Degenerate(
            "exact solution vanishes at every node".into(),
        ));
    }
    Ok(ErrorReport {
        max_abs,
        rel_l2: (err2 / ref2).sqrt(),
        at_time: p.time(),
    })
}

/// `log2 |e(h) / e(h/2)|`.
pub fn observed_order(e_h: f64, e_h2: f64) -> Result<f64> {
    if e_h == 0.0 || e_h2 == 0.0 || !e_h.is_finite() || !e_h2.is_finite() {
        return Err(Error::Degenerate(format!(
            "observed order needs two nonzero errors, got {e_h} and {e_h2}"
        )));
    }
    Ok((e_h / e_h2).abs().log2())
}

/// `P(L)/3 - 2 P(2L) + 8 P(4L)/3`, which cancels the `1/L` and `1/L^2`
/// terms of the domain-truncation error.
pub fn richardson_domain(p_l: f64, p_2l: f64, p_4l: f64) -> f64 {
    p_l / 3.0 - 2.0 * p_2l + 8.0 * p_4l / 3.0
}

/// Composite trapezoidal rule over all nodes.
pub fn mass_integral(p: &DensityField) -> f64 {
    let v = p.values();
    let n = v.len();
    let inner: f64 = v.iter().sum();
    p.grid().h() * (inner - 0.5 * (v[0] + v[n - 1]))
}

/// Least-squares slope of `log p` against `log x` over nodes with
/// `x_lo <= x <= x_hi`.
pub fn tail_slope(p: &DensityField, x_lo: f64, x_hi: f64) -> Result<f64> {
    if !(x_lo > 0.0 && x_hi > x_lo) {
        return Err(invalid(
            "window",
            format!("need 0 < x_lo < x_hi, got [{x_lo}, {x_hi}]"),
        ));
    }
    let grid = p.grid();
    let mut pts = Vec::new();
    for (i, &v) in p.values().iter().enumerate() {
        let x = grid.x(i);
        // small slack so window ends that sit on nodes are included
        if x >= x_lo * (1.0 - 1e-12) && x <= x_hi * (1.0 + 1e-12) {
            if !(v > 0.0) {
                return Err(Error::Degenerate(format!(
                    "non-positive density {v} at x = {x}"
                )));
            }
            pts.push((x.ln(), v.ln()));
        }
    }
    least_squares_slope(&pts)
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> Result<f64> {
    if pts.len() < 2 {
        return Err(Error::Degenerate(
            "slope fit needs at least two points".into(),
        ));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate(
            "slope fit needs distinct abscissae".into(),
        ));
    }
    Ok(sxy / sxx)
}
