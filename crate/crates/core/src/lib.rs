//! Finite-difference solver for one-dimensional nonlocal Fokker-Planck
//! equations driven by symmetric alpha-stable Levy motion.
//!
//! The density `p(x, t)` of `dX = f(X) dt + dL_t` evolves under
//!
//! ```text
//! p_t = -(f p)_x + d/2 p_xx + eps C_alpha p.v. int (p(x+y) - p(x)) / |y|^(1+alpha) dy
//! ```
//!
//! with either an absorbing exterior condition on `(-B, B)` or a natural
//! far-field condition approximated on a truncated domain. The nonlocal
//! integral is discretized by a trapezoidal rule with a zeta-function
//! correction, advection by flux-split WENO3, and time by forward Euler or
//! TVD-RK3. The dense Toeplitz sum is applied in `O(J log J)` via FFT.

// Comparisons are written `!(x > 0.0)` so that NaN is rejected, and the
// Lanczos coefficients are kept as published.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

pub mod error;
pub mod experiments;
pub mod grid;
pub mod montecarlo;
pub mod operator;
pub mod specfun;
pub mod stepper;
pub mod toeplitz;
pub mod verify;
pub mod weno;

pub use error::{Error, Result};
pub use grid::{
    sample_initial, AuxCondition, DensityField, DriftField, DriftKind, Grid, InitialProfile,
    LevyParams,
};
pub use operator::{KernelPath, NaturalEdge, OperatorOptions, OperatorScratch, OperatorWorkspace};
pub use specfun::StabilityIndex;
pub use stepper::{evolve, Integrator, StepControl};
