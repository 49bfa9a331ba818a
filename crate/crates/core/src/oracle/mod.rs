//! Independent ground truth for the series path.
//!
//! Nothing here is used by [`crate::series`]; each piece recomputes a quantity
//! by a different route so the two can be compared.

mod roots;
mod truncated;
mod vpath;

pub use roots::{match_roots, reference_roots, Matching, ReferenceRoots};
pub use truncated::{
    brute_k, verify_prop1, Identity, Prop1Bounds, Prop1Failure, Prop1Report, TruncatedSeries,
};
pub use vpath::{build_m1, build_m1_inv, v_path, VPath, V_PATH_MAX_TERMS};
