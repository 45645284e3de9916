//! Exact computation and certification of objects attached to Euler's
//! totient function: the inverse sets phi^-1(m) with their extremes N2/N3,
//! the sparsely totient numbers N1, explicit infinite families inside N2
//! and N3, interval-window density estimates, and arithmetic/geometric
//! progression structure.
//!
//! Every verdict is exact 64-bit integer or rational arithmetic; floating
//! point appears only in diagnostics and in the opt-in Rosser-Schoenfeld
//! horizon (a proven bound applied with a safety margin).

pub mod arith;
pub mod cache;
pub mod density;
pub mod error;
pub mod families;
pub mod inverse_totient;
pub mod progressions;
pub mod sparsely_totient;
pub mod verify;

pub use error::{Error, Result};

/// Exact unsigned rational in lowest terms.
pub type Rational = num_rational::Ratio<u64>;
