//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into `levyfp_core` numerics: zeta comes from
//! Euler-Maclaurin summation, gamma from statrs, and the right-hand side is a
//! literal term-by-term transcription of the scheme on index `j = -J..J`.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Riemann zeta by Euler-Maclaurin with `N = 30` and eight Bernoulli terms;
/// valid for real `s != 1` well beyond the range needed here.
pub fn zeta_em(s: f64) -> f64 {
    const B2K: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    // A small cutoff keeps the partial sum small: at s = -3 the terms grow
    // like k^3 and cancel down to ~1e-2, so N = 30 would lose ~1e-11.
    let n = 10.0_f64;
    let mut sum: f64 = (1..10).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2) and (2k)!
    let mut rising = s;
    let mut fact = 2.0;
    for (k, b) in B2K.iter().enumerate() {
        let k = k + 1;
        sum += b / fact * rising * n.powf(-s - 2.0 * k as f64 + 1.0);
        rising *= (s + 2.0 * k as f64 - 1.0) * (s + 2.0 * k as f64);
        fact *= (2.0 * k as f64 + 1.0) * (2.0 * k as f64 + 2.0);
    }
    sum
}

pub fn gamma_ref(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Normalizing constant of the symmetric alpha-stable jump measure.
pub fn c_alpha_ref(alpha: f64) -> f64 {
    alpha / (2f64.powf(1.0 - alpha) * std::f64::consts::PI.sqrt()) * gamma_ref(0.5 * (1.0 + alpha))
        / gamma_ref(1.0 - 0.5 * alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefCondition {
    Absorbing { b: f64 },
    Natural { l: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefDrift {
    Zero,
    Ou,
    DoubleWell,
}

impl RefDrift {
    pub fn f(self, x: f64) -> f64 {
        match self {
            RefDrift::Zero => 0.0,
            RefDrift::Ou => -x,
            RefDrift::DoubleWell => x - x * x * x,
        }
    }

    /// max |f| over [-b, b]: endpoints plus interior critical points.
    pub fn max_speed(self, b: f64) -> f64 {
        let mut cands = vec![b];
        if self == RefDrift::DoubleWell {
            let c = 1.0 / 3f64.sqrt();
            if c <= b {
                cands.push(c);
            }
        }
        cands
            .into_iter()
            .map(|x| self.f(x).abs())
            .fold(0.0, f64::max)
    }
}

pub struct RefProblem {
    pub alpha: f64,
    pub eps: f64,
    pub d: f64,
    pub cond: RefCondition,
    pub half_nodes: i64,
    pub drift: RefDrift,
    pub delta: f64,
}

impl RefProblem {
    pub fn half_width(&self) -> f64 {
        match self.cond {
            RefCondition::Absorbing { b } => b,
            RefCondition::Natural { l } => l,
        }
    }

    pub fn h(&self) -> f64 {
        self.half_width() / self.half_nodes as f64
    }

    /// Right-hand side at every node, transcribed from the printed scheme.
    pub fn rhs(&self, p: &[f64]) -> Vec<f64> {
        let jj = self.half_nodes;
        assert_eq!(p.len() as i64, 2 * jj + 1);
        let h = self.h();
        let a = self.alpha;
        let c_a = c_alpha_ref(a);
        let c_h = self.d / 2.0 - self.eps * c_a * zeta_em(a - 1.0) * h.powf(2.0 - a);
        // P_j with zero values beyond the grid
        let pv = |j: i64| {
            if j.abs() > jj {
                0.0
            } else {
                p[(j + jj) as usize]
            }
        };
        let x = |j: i64| j as f64 * h;

        // split fluxes, zero at and beyond j = +-J
        let lam = self.drift.max_speed(self.half_width());
        let phi = |j: i64, sign: f64| {
            if j.abs() >= jj {
                0.0
            } else {
                0.5 * (self.drift.f(x(j)) * pv(j) + sign * lam * pv(j))
            }
        };
        let dp = |j: i64, s: f64| phi(j + 1, s) - phi(j, s);
        let dmdp = |j: i64, s: f64| phi(j + 1, s) - 2.0 * phi(j, s) + phi(j - 1, s);
        let delta = self.delta;
        let weno_plus = |j: i64| {
            let s = 1.0;
            let r = (delta + dmdp(j - 1, s).powi(2)) / (delta + dmdp(j, s).powi(2));
            let w = 1.0 / (1.0 + 2.0 * r * r);
            (dp(j - 1, s) + dp(j, s)) / (2.0 * h)
                - w / (2.0 * h) * (dp(j - 2, s) - 2.0 * dp(j - 1, s) + dp(j, s))
        };
        let weno_minus = |j: i64| {
            let s = -1.0;
            let r = (delta + dmdp(j + 1, s).powi(2)) / (delta + dmdp(j, s).powi(2));
            let w = 1.0 / (1.0 + 2.0 * r * r);
            (dp(j - 1, s) + dp(j, s)) / (2.0 * h)
                - w / (2.0 * h) * (dp(j + 1, s) - 2.0 * dp(j, s) + dp(j - 1, s))
        };

        let mut out = Vec::with_capacity(p.len());
        for j in -jj..=jj {
            if matches!(self.cond, RefCondition::Absorbing { .. }) && j.abs() == jj {
                out.push(0.0);
                continue;
            }
            let mut v = c_h * (pv(j - 1) - 2.0 * pv(j) + pv(j + 1)) / (h * h);
            if self.drift != RefDrift::Zero {
                v -= weno_plus(j) + weno_minus(j);
            }
            if let RefCondition::Absorbing { b } = self.cond {
                v -= self.eps * c_a / a * ((b + x(j)).powf(-a) + (b - x(j)).powf(-a)) * pv(j);
            }
            let (k_lo, k_hi) = (-jj - j, jj - j);
            let mut sum = 0.0;
            for k in k_lo..=k_hi {
                if k == 0 {
                    continue;
                }
                let weight = if k == k_lo || k == k_hi { 0.5 } else { 1.0 };
                sum += weight * (pv(j + k) - pv(j)) / x(k).abs().powf(1.0 + a);
            }
            v += self.eps * c_a * h * sum;
            out.push(v);
        }
        out
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Global error at `t = 1` for `u' = -u`, `u(0) = 1`, with `steps` steps.
pub fn decay_error(mode: levyfp_core::Integrator, steps: usize) -> f64 {
    let mut s = levyfp_core::stepper::Stepper::new(mode, 1);
    let mut u = [1.0];
    let dt = 1.0 / steps as f64;
    for _ in 0..steps {
        s.step(&mut u, dt, |x, o| {
            o[0] = -x[0];
            Ok(())
        })
        .unwrap();
    }
    (u[0] - (-1.0f64).exp()).abs()
}

/// Observed order of `mode` on `u' = -u` between `steps` and `2 steps`.
pub fn decay_order(mode: levyfp_core::Integrator, steps: usize) -> f64 {
    (decay_error(mode, steps) / decay_error(mode, 2 * steps)).log2()
}

/// Max-norm error of the WENO3 derivatives of `tanh` on `[-2, 2]` with
/// `n` cells and exact ghost values: `(plus, minus)`.
pub fn weno_tanh_errors(n: usize) -> (f64, f64) {
    use levyfp_core::weno::{weno3_minus_with_ghosts, weno3_plus_with_ghosts, Ghosts};
    let h = 4.0 / n as f64;
    let x = |i: isize| -2.0 + i as f64 * h;
    let phi: Vec<f64> = (0..=n as isize).map(|i| x(i).tanh()).collect();
    let ghosts = Ghosts {
        left: [x(-2).tanh(), x(-1).tanh()],
        right: [x(n as isize + 1).tanh(), x(n as isize + 2).tanh()],
    };
    let exact: Vec<f64> = (0..=n as isize)
        .map(|i| 1.0 / x(i).cosh().powi(2))
        .collect();
    let plus = weno3_plus_with_ghosts(&phi, ghosts, h, 1e-6);
    let minus = weno3_minus_with_ghosts(&phi, ghosts, h, 1e-6);
    (max_abs_diff(&plus, &exact), max_abs_diff(&minus, &exact))
}
