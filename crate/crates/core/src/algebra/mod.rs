//! Exact base arithmetic and certified numerics.

pub mod field;
pub mod linalg;
pub mod modular;
pub mod mpoly;
pub mod places;
pub mod poly;
pub mod quotient;
pub mod rational;
pub mod real;
pub mod roots;
pub mod ring;
pub mod series;

pub use field::{galois_conjugate, FieldElement, FieldSpec};
pub use poly::{Poly, QPoly};
pub use real::{CertifiedComplex, CertifiedReal};
pub use ring::{ExactRing, Ring};
pub use series::{compose_series, LaurentSeries};
