//! Exact computations for two-state (conditionally free) probability.

pub mod cumulants;
pub mod jacobi;
pub mod laws;
pub mod ncpart;
pub mod rational;
pub mod series;
pub mod verify;

pub use ncpart::{BlockKind, NCPartition, SetPartition};
pub use rational::Rational;
pub use series::TruncatedSeries;
