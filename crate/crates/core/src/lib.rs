//! Finite-volume solver for one-dimensional crowd motion with a singular
//! congestion pressure and a transported maximal density `rho_star`.
//!
//! Every time step is split into three sub-steps:
//!
//! 1. [`hyperbolic`]: the mass flux and the singular pressure are implicit.
//!    Substituting the momentum update into the mass balance gives a
//!    nonlinear elliptic equation for the singular pressure, solved by
//!    Newton's method with a finite-difference Jacobian. The density is then
//!    recovered by inverting the pressure law, which keeps `rho < rho_star`
//!    structurally, and the momentum is updated directly.
//! 2. [`diffusion`]: implicit viscous update of the velocity.
//! 3. [`transport`]: first-order upwind advection of `rho_star`.
//!
//! The crate is `no_std` (with `alloc`); IO, configuration files and the
//! command-line front end live in the `congestion-sim` crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod diagnostics;
pub mod diffusion;
pub mod driver;
mod error;
pub mod grid;
pub mod hyperbolic;
pub mod linalg;
mod math;
pub mod pressure;
pub mod scenario;
pub mod stencil;
pub mod transport;

pub use diagnostics::DiagnosticsRecord;
pub use driver::{
    run, run_epsilon_sweep, step, CflPolicy, RunConfig, RunResult, RunStatus, Snapshot,
    StepOutcome, SweepEntry,
};
pub use error::{Error, Result};
pub use grid::{Boundary, FlowState, Grid1D, DEFAULT_VELOCITY_FLOOR};
pub use hyperbolic::{HyperbolicResult, NewtonConfig};
pub use pressure::PressureParams;
pub use scenario::{Profile, Scenario};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
