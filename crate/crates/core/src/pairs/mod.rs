//! Dynamical pairs, their equivalence, semiconjugacies and orbit closures.

pub mod equivalence;
pub mod geometric;
pub(crate) mod interp;
pub mod orbit;
pub mod pair;
pub mod semiconj;

pub use equivalence::{equivalent, ratio, weakly_equivalent, EquivOptions, Equivalence, EquivalenceCertificate, Obstruction, WeakEquivalence};
pub use geometric::{assemble, geometric_data, pairwise_tests, Block, GeometricData};
pub use orbit::{orbit_structure, OrbitStructure, SparsePoly};
pub use pair::DynamicalPair;
pub use semiconj::{semiconjugacies, semiconjugacy_search, Semiconjugacy};
