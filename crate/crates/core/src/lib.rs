//! Arithmetic dynamics of polynomial maps over Q and quadratic fields.

pub mod algebra;
pub mod bottcher;
pub mod heights;
pub mod pairs;
pub mod plane;
pub mod transcendence;
pub mod error;

pub use error::{Error, Result};
/// Exact scalars used throughout the public API.
pub use rug::{Integer, Rational};
