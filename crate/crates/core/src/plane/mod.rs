//! Polynomial endomorphisms of A² that extend to P², their boundary dynamics on
//! the line at infinity, and invariant curves through boundary periodic points.

pub mod boundary;
pub mod census;
pub mod endo;
pub mod germ;
pub mod homogeneity;

pub use boundary::{
    extends_to_p2, fixed_point_count_diagnostic, np_check, ns_check, periodic_points_at_infinity, BoundaryMap,
    BoundaryPeriodicPoint, BoundaryPoint, FixedPointRow, MultiplierRepr, NpResult, NsResult, PointRepr,
};
pub use endo::{parse_terms, Form, PlaneEndomorphism};
pub use germ::{curve_branch, germ_algebraicity_test, germ_at, invariant_germ, required_jet, Algebraicity, GermSeries};
pub use census::{is_line_through, periodic_curve_census, FoundCurve, PeriodicCurveReport, UnmatchedGerm};
pub use homogeneity::{homogeneity_detect, Homogeneity};
