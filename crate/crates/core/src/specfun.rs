//! Special functions and scheme constants.
//!
//! Gamma (Lanczos approximation with reflection), the real Riemann zeta
//! function left of the pole (Borwein's accelerated Dirichlet eta series),
//! the jump-measure normalization `C_alpha` and the time-step threshold that
//! keeps the explicit schemes within the discrete maximum principle.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Stability index of a symmetric alpha-stable law, restricted to `(0, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct StabilityIndex(f64);

impl StabilityIndex {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha < 2.0 {
            Ok(Self(alpha))
        } else {
            Err(invalid(
                "alpha",
                format!("stability index must lie in the open interval (0, 2), got {alpha}"),
            ))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for StabilityIndex {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<StabilityIndex> for f64 {
    fn from(value: StabilityIndex) -> f64 {
        value.0
    }
}

// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn gamma_lanczos(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_lanczos(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Gamma function for positive real arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            func: "gamma_fn",
            arg: x,
            range: "x > 0",
        });
    }
    Ok(gamma_lanczos(x))
}

// Number of terms in Borwein's eta acceleration. The truncation error decays
// like (3 + sqrt 8)^-n, so 30 terms sit far below double precision even after
// the n^|s| growth for s down to -3.
const BORWEIN_TERMS: usize = 30;

fn borwein_weights() -> [f64; BORWEIN_TERMS + 1] {
    // d_k = n * sum_{i=0}^{k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let n = BORWEIN_TERMS;
    let mut d = [0.0; BORWEIN_TERMS + 1];
    let mut term = 1.0 / n as f64; // i = 0: (n-1)!/n! = 1/n
    let mut sum = term;
    d[0] = n as f64 * sum;
    for i in 1..=n {
        // ratio of consecutive terms: (n+i-1) * 4 * (n-i+1) / ((2i)(2i-1))
        let (nf, i_f) = (n as f64, i as f64);
        term *= (nf + i_f - 1.0) * 4.0 * (nf - i_f + 1.0) / ((2.0 * i_f) * (2.0 * i_f - 1.0));
        sum += term;
        d[i] = nf * sum;
    }
    d
}

/// Dirichlet eta function via Borwein's algorithm.
fn dirichlet_eta(s: f64) -> f64 {
    let d = borwein_weights();
    let dn = d[BORWEIN_TERMS];
    // Neumaier-compensated alternating sum of (1 - d_k/d_n) (k+1)^-s
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (k, dk) in d.iter().take(BORWEIN_TERMS).enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let t = sign * (1.0 - dk / dn) * ((k + 1) as f64).powf(-s);
        let next = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - next) + t;
        } else {
            comp += (t - next) + sum;
        }
        sum = next;
    }
    sum + comp
}

/// Riemann zeta function for real `s < 1`.
///
/// Evaluated as `eta(s) / (1 - 2^(1-s))`; accurate to roughly 1e-14 absolute
/// on `[-3, 1)` away from the immediate neighbourhood of the pole.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s < 1.0) || !s.is_finite() {
        return Err(Error::Domain {
            func: "riemann_zeta",
            arg: s,
            range: "s < 1",
        });
    }
    // 1 - 2^(1-s) = -expm1((1-s) ln 2), evaluated without cancellation near s = 1.
    let denom = -((1.0 - s) * LN_2).exp_m1();
    Ok(dirichlet_eta(s) / denom)
}

/// Normalization constant of the symmetric alpha-stable jump measure
/// `nu(dy) = C_alpha |y|^-(1+alpha) dy`.
pub fn c_alpha(alpha: StabilityIndex) -> f64 {
    let a = alpha.get();
    let num = gamma_lanczos(0.5 * (1.0 + a));
    let den = gamma_lanczos(1.0 - 0.5 * a);
    a / (2f64.powf(1.0 - a) * PI.sqrt()) * num / den
}

/// Largest `dt / h^alpha` for which forward Euler on the pure-jump scheme
/// keeps every nodal value inside the initial bounds.
///
/// Returns `+inf` when `eps == 0` (no jump term, no restriction).
pub fn mp_threshold(alpha: StabilityIndex, eps: f64) -> f64 {
    let a = alpha.get();
    // alpha - 1 < 1 always holds for a valid index
    let zeta = riemann_zeta(a - 1.0).expect("alpha - 1 lies left of the pole");
    1.0 / (2.0 * eps * c_alpha(alpha) * (1.0 + 1.0 / a - zeta))
}
