//! Convergence and cycle atlas for the heavy-ball method on smooth strongly
//! convex functions.
//!
//! A tuning `(gamma, beta)` is classified as convergent when a quadratic plus
//! linear Lyapunov function is certified by a small semidefinite program, and
//! as non-convergent when a cycle is certified, either in dimension one (a
//! linear program per sort permutation) or on the unit circle in dimension two.

pub mod atlas;
pub mod cycle_lp;
pub mod dim2;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod interp;
pub mod lp;
pub mod lyapunov;
pub mod model1d;
pub mod permutation;
pub mod quadratic_rate;
pub mod sdp;
pub mod types;

pub use error::{Error, Result};
pub use types::{ClassParams, DataPoint, HbState, Tuning};
