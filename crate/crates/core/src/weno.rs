//! Third-order WENO derivatives on upwind-biased stencils.
//!
//! `weno3_plus` approximates `phi_x(x_j)` on the left-biased stencil
//! `{j-2, .., j+1}` and is applied to the positive split flux;
//! `weno3_minus` uses `{j-1, .., j+2}` for the negative split flux.
//! Values beyond either end of the input are ghost nodes, zero unless given.

/// Default regularization of the smoothness ratio.
pub const DEFAULT_WENO_DELTA: f64 = 1e-6;

/// Two ghost values on each side, listed outermost first on the left
/// (`[phi_{-2}, phi_{-1}]`) and innermost first on the right (`[phi_n, phi_{n+1}]`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Ghosts {
    pub left: [f64; 2],
    pub right: [f64; 2],
}

impl Ghosts {
    /// Linear extrapolation from the two outermost nodes at each end.
    pub fn linear(phi: &[f64]) -> Self {
        let n = phi.len();
        assert!(n >= 2, "linear ghosts need at least two nodes");
        let dl = phi[1] - phi[0];
        let dr = phi[n - 1] - phi[n - 2];
        Self {
            left: [phi[0] - 2.0 * dl, phi[0] - dl],
            right: [phi[n - 1] + dr, phi[n - 1] + 2.0 * dr],
        }
    }
}

fn pad(phi: &[f64], ghosts: Ghosts) -> Vec<f64> {
    let mut ext = Vec::with_capacity(phi.len() + 4);
    ext.extend_from_slice(&ghosts.left);
    ext.extend_from_slice(phi);
    ext.extend_from_slice(&ghosts.right);
    ext
}

#[inline]
fn second_diff(e: &[f64], k: usize) -> f64 {
    e[k + 1] - 2.0 * e[k] + e[k - 1]
}

/// Left-biased derivative of a ghost-padded array (`ext.len() == out.len() + 4`).
pub fn weno3_plus_padded(ext: &[f64], h: f64, delta: f64, out: &mut [f64]) {
    debug_assert_eq!(ext.len(), out.len() + 4);
    let inv2h = 0.5 / h;
    for (i, o) in out.iter_mut().enumerate() {
        let p = i + 2;
        let d_m2 = ext[p - 1] - ext[p - 2];
        let d_m1 = ext[p] - ext[p - 1];
        let d_0 = ext[p + 1] - ext[p];
        let s_m = second_diff(ext, p - 1);
        let s_0 = second_diff(ext, p);
        let r = (delta + s_m * s_m) / (delta + s_0 * s_0);
        let w = 1.0 / (1.0 + 2.0 * r * r);
        *o = inv2h * (d_m1 + d_0) - w * inv2h * (d_m2 - 2.0 * d_m1 + d_0);
    }
}

/// Right-biased derivative of a ghost-padded array (`ext.len() == out.len() + 4`).
pub fn weno3_minus_padded(ext: &[f64], h: f64, delta: f64, out: &mut [f64]) {
    debug_assert_eq!(ext.len(), out.len() + 4);
    let inv2h = 0.5 / h;
    for (i, o) in out.iter_mut().enumerate() {
        let p = i + 2;
        let d_m1 = ext[p] - ext[p - 1];
        let d_0 = ext[p + 1] - ext[p];
        let d_p1 = ext[p + 2] - ext[p + 1];
        let s_p = second_diff(ext, p + 1);
        let s_0 = second_diff(ext, p);
        let r = (delta + s_p * s_p) / (delta + s_0 * s_0);
        let w = 1.0 / (1.0 + 2.0 * r * r);
        *o = inv2h * (d_m1 + d_0) - w * inv2h * (d_p1 - 2.0 * d_0 + d_m1);
    }
}

pub fn weno3_plus_with_ghosts(phi: &[f64], ghosts: Ghosts, h: f64, delta: f64) -> Vec<f64> {
    let mut out = vec![0.0; phi.len()];
    weno3_plus_padded(&pad(phi, ghosts), h, delta, &mut out);
    out
}

pub fn weno3_minus_with_ghosts(phi: &[f64], ghosts: Ghosts, h: f64, delta: f64) -> Vec<f64> {
    let mut out = vec![0.0; phi.len()];
    weno3_minus_padded(&pad(phi, ghosts), h, delta, &mut out);
    out
}

/// Left-biased derivative with zero ghosts.
pub fn weno3_plus(phi: &[f64], h: f64, delta: f64) -> Vec<f64> {
    weno3_plus_with_ghosts(phi, Ghosts::default(), h, delta)
}

/// Right-biased derivative with zero ghosts.
pub fn weno3_minus(phi: &[f64], h: f64, delta: f64) -> Vec<f64> {
    weno3_minus_with_ghosts(phi, Ghosts::default(), h, delta)
}
