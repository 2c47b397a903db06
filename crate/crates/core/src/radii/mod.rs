//! The three basic quantities: numerical radius `w`, Euclidean operator norm `‖A‖`
//! and Euclidean operator radius `w_e`, plus brute-force oracles for testing.

mod euclidean;
mod numerical;
mod oracle;
mod tuple;

use serde::{Deserialize, Serialize};

pub use euclidean::{euclidean_radius, objective_gradient, EuclideanRadiusConfig, LambdaReduction};
pub use numerical::{numerical_radius, numerical_radius_oracle, NumericalRadiusConfig};
pub use oracle::euclidean_radius_oracle;
pub use tuple::{tuple_op_norm, OperatorTuple};

use crate::matfun::C64;

/// Result of maximizing a supremum-defined radius.
///
/// `certified_lower` is the objective attained at `argmax`, so it never exceeds
/// the true radius. `value` is the best such value over all starts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub value: f64,
    pub certified_lower: f64,
    pub restarts: usize,
    pub iterations: usize,
    pub tolerance: f64,
    pub method: String,
    /// Unit maximizer, first nonzero component real and nonnegative.
    pub argmax: Vec<C64>,
    /// Best value of the gradient strategy alone (Euclidean radius only).
    pub gradient_value: Option<f64>,
    /// Best value of the λ-reduction alone, when it ran.
    pub lambda_value: Option<f64>,
}

/// Rotates `x` so its first nonzero component is real and nonnegative.
pub(crate) fn phase_gauge(mut x: Vec<C64>) -> Vec<C64> {
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(p) = x.iter().find(|z| z.norm() > 1e-12 * scale).copied() {
        let rot = p.conj() / p.norm();
        x.iter_mut().for_each(|z| *z *= rot);
    }
    x
}
