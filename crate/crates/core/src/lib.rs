//! Stein factors and moderate-deviation error bounds for Poisson
//! approximation of rare-event counts.
//!
//! - [`special`]: log-domain Poisson/normal tails and log arithmetic.
//! - [`stein`]: the Stein-equation solution for `h = 1[k, inf)` and its
//!   sup-norm constants.
//! - [`oracles`]: exact (or Monte Carlo) laws of the count variables.
//! - [`bounds`]: the generic moderate-deviation bounds and their
//!   instantiations.

pub mod bounds;
pub mod error;
pub mod exec;
pub mod oracles;
pub mod special;
pub mod stein;

pub use error::{Error, Result};
pub use exec::Execution;
pub use special::LogProb;
