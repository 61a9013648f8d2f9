//! Böttcher coordinates, escape radii and the monomial-type classifier.

pub mod classify;
pub mod escape;
pub mod evaluate;
pub mod series;
pub mod system;

pub use classify::{classify_polynomial_type, MonomialForm, PolynomialType};
pub use escape::{escape_radius, EscapeBound, EscapeRadius};
pub use evaluate::{evaluate_bottcher_arch, BottcherValue};
pub use series::{compute_bottcher, BottcherCoeffs, BottcherSeries, LeadingRoot};
pub use system::PolynomialSystem;
