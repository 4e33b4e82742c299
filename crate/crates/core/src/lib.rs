//! Combinatorial and arithmetic invariants of the proalgebraic completion
//! `X^F_Q` of a toric variety.
//!
//! Everything is exact: integer linear algebra over `BigInt`, angles and
//! moduli as rationals. Fan input is 1-based at the JSON boundary and 0-based
//! internally.

pub mod cli;
pub mod error;
pub mod fan;
pub mod homogeneous;
pub mod kring;
pub mod lattice;
pub mod moment;
pub mod quotient;
pub mod semigroup;
pub mod solenoid;

pub use error::{Error, Result};
pub use fan::{ConeRef, Fan, FanFile};
pub use lattice::{IntMatrix, IntVector};
