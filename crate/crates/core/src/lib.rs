//! Decay of weak gasdynamic shocks in planar, cylindrical and spherical geometry.
//!
//! Four approximation routes are implemented and cross-checked against each
//! other:
//!
//! - [`transport`]: singular-surface transport equations for the shock
//!   strength `[p]` and the first-order discontinuity `[p_x]`, their truncated
//!   weak-shock form, closed-form solution and asymptotic decay laws;
//! - [`wavefront`]: weakly nonlinear geometrical optics with shock fitting,
//!   the exact simple wave from Riemann invariants and relatively undistorted
//!   wave states;
//! - [`ccw`]: the Chester–Chisnell–Whitham shock ODE and its generalization
//!   obtained from the shock-strength transport equation.
//!
//! Every quantity is nondimensional: velocities are scaled by the upstream
//! sound speed `a₊`, density by `ρ₊`, pressure by `ρ₊a₊²` (so `p₊ = 1/γ`),
//! lengths by a reference length `x₀` (the boundary sits at `x = 1`) and time
//! by `x₀/a₊`.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ccw;
pub mod compare;
mod csvio;
pub mod decay;
mod error;
pub mod gas;
pub mod ode;
pub mod quad;
pub mod reference;
pub mod roots;
pub mod transport;
pub mod wavefront;

pub use error::{Error, Result};
pub use gas::{GasParams, Geometry, JumpSet};
