//! Certified determination of the rational points on the discriminant curves
//! attached to degree-three maps on X₁(16) and X₁(20).

pub mod algebra;
pub mod curves;
pub mod jacobian;
pub mod padic;
pub mod sieve;
pub mod verdicts;
pub mod error;

pub use error::{Error, Result};
