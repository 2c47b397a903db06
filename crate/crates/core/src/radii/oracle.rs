use std::f64::consts::PI;

use super::OperatorTuple;
use crate::error::{Error, Result};
use crate::matfun::C64;

const REFINE_LEVELS: usize = 2;
const REFINE_POINTS: usize = 21;

/// Brute-force `w_e` for `dim = 2`. Unit vectors of `C²` modulo phase are
/// `x = (cos θ, e^{iφ} sin θ)`, `(θ, φ) ∈ [0, π/2] × [0, 2π)`; the objective is
/// evaluated on a `grid_density²` grid, then on two finer grids around the best cell.
pub fn euclidean_radius_oracle(a: &OperatorTuple, grid_density: usize) -> Result<f64> {
    if a.dim() != 2 {
        return Err(Error::Unsupported(format!(
            "grid oracle only covers dim = 2, got dim = {}",
            a.dim()
        )));
    }
    if grid_density < 100 {
        return Err(Error::Config(format!("grid density must be >= 100, got {grid_density}")));
    }
    let coeffs: Vec<[C64; 4]> = a
        .iter()
        .map(|m| [m.get(0, 0), m.get(1, 1), m.get(0, 1), m.get(1, 0)])
        .collect();
    // <Mx, x> = a² m11 + b² m22 + ab (m12 e^{iφ} + m21 e^{-iφ})
    let objective = |theta: f64, phi: f64| -> f64 {
        let (b, aa) = theta.sin_cos();
        let e = C64::from_polar(1.0, phi);
        coeffs
            .iter()
            .map(|[m11, m22, m12, m21]| {
                (m11 * (aa * aa) + m22 * (b * b) + (m12 * e + m21 * e.conj()) * (aa * b)).norm_sqr()
            })
            .sum()
    };

    let theta_max = PI / 2.0;
    let mut dt = theta_max / grid_density as f64;
    let mut dp = 2.0 * PI / grid_density as f64;
    let (mut best, mut bt, mut bp) = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=grid_density {
        let t = i as f64 * dt;
        for j in 0..grid_density {
            let p = j as f64 * dp;
            let v = objective(t, p);
            if v > best {
                (best, bt, bp) = (v, t, p);
            }
        }
    }
    for _ in 0..REFINE_LEVELS {
        let (ct, cp) = (bt, bp);
        let half = (REFINE_POINTS / 2) as f64;
        let (sub_t, sub_p) = (dt / half, dp / half);
        for i in 0..REFINE_POINTS {
            let t = (ct + (i as f64 - half) * sub_t).clamp(0.0, theta_max);
            for j in 0..REFINE_POINTS {
                let p = cp + (j as f64 - half) * sub_p;
                let v = objective(t, p);
                if v > best {
                    (best, bt, bp) = (v, t, p);
                }
            }
        }
        dt = sub_t;
        dp = sub_p;
    }
    Ok(best.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matfun::CMatrix;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fixtures() {
        let j = CMatrix::jordan(2);
        let single = OperatorTuple::single(j.clone());
        assert_abs_diff_eq!(euclidean_radius_oracle(&single, 1000).unwrap(), 0.5, epsilon = 1e-4);
        let id = OperatorTuple::identity(1, 2);
        assert_abs_diff_eq!(euclidean_radius_oracle(&id, 100).unwrap(), 1.0, epsilon = 1e-12);
        let pair = OperatorTuple::new(vec![j.clone(), j.adjoint()]).unwrap();
        assert_abs_diff_eq!(
            euclidean_radius_oracle(&pair, 1000).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-4
        );
        assert_abs_diff_eq!(
            euclidean_radius_oracle(&OperatorTuple::pauli(), 400).unwrap(),
            1.0,
            epsilon = 1e-4
        );
    }

    #[test]
    fn unsupported_shapes() {
        let a = OperatorTuple::identity(1, 3);
        assert!(matches!(euclidean_radius_oracle(&a, 1000), Err(Error::Unsupported(_))));
        let b = OperatorTuple::identity(1, 2);
        assert!(matches!(euclidean_radius_oracle(&b, 10), Err(Error::Config(_))));
    }
}
