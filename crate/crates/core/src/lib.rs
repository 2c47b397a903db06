//! Euclidean operator radius and Euclidean operator norm of d-tuples of complex
//! matrices, executable upper bounds for `w_e`, and a seeded verification harness.
//!
//! For `A = (A_1, …, A_d)` acting on `C^n`:
//!
//! ```text
//! w_e(A) = sup_{‖x‖=1} (Σ_k |<A_k x, x>|²)^{1/2}      ‖A‖ = sup_{‖x‖=1} (Σ_k ‖A_k x‖²)^{1/2}
//! ```
//!
//! `‖A‖` has a closed form. `w_e` is a nonconvex maximization; every value this
//! crate reports for it is attained at an explicit unit vector, hence a
//! certified lower bound. Bounds are checked as `lower(LHS) <= RHS`, so an
//! optimizer shortfall can only hide a violation on the left, never invent one.

pub mod blockmat;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod matfun;
pub mod radii;
pub mod seed;
pub mod verify;

pub use error::{Error, Result};
pub use matfun::{CMatrix, SpectralFunctionPair, C64};
pub use radii::{
    euclidean_radius, numerical_radius, tuple_op_norm, EuclideanRadiusConfig,
    NumericalRadiusConfig, OperatorTuple, RadiusEstimate,
};
