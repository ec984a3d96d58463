//! Non-iterative transformation method for Blasius-class boundary-layer
//! problems on semi-infinite domains.
//!
//! The boundary value problems handled here are invariant under a scaling
//! group, so one initial value problem in transformed ("star") variables plus
//! a rescaling replaces shooting on the missing initial condition. Covered
//! problems: the classic flat plate, a moving wall, a slip-flow wall and
//! surface gasification.
//!
//! Modules:
//! - [`ode`]: fixed-step RK4 on `(f, f', f'')`.
//! - [`models`]: right-hand sides of the similarity equations.
//! - [`scaling`]: λ recovery, rescaling, parameter maps and invariance checks.
//! - [`solvers`]: problem drivers, sweeps, the critical moving-wall parameter
//!   and target-parameter solves.
//! - [`analysis`]: power-series and truncated-boundary error-bound checks.

pub mod analysis;
pub mod error;
pub mod models;
pub mod ode;
pub mod scaling;
pub mod solvers;

pub use error::{Error, Result};
pub use ode::{GridConfig, SolutionTable, State3};
pub use scaling::ScalingGroup;
pub use solvers::{NitmConfig, NitmResult, ProblemSpec, Sign, Variant};
