//! Green functions, canonical heights and escape classification.

pub mod green;
pub mod height;

pub use green::{green, green_arch, green_nonarch, GreenStatus, GreenValue};
pub use height::{
    canonical_height, exact_cycle, in_t_d, liminf_diagnostic, naive_height, preperiodicity, HeightValue, LiminfEntry,
    Preperiodicity, TdMembership,
};
