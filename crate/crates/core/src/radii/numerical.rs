use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::RadiusEstimate;
use crate::error::{Error, Result};
use crate::matfun::{self, CMatrix, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct NumericalRadiusConfig {
    /// Uniform θ-grid size on `[0, 2π)`; rounded up to an even number.
    pub grid_points: usize,
    /// Golden-section stopping width in θ.
    pub refine_tol: f64,
    /// Number of grid local maxima refined.
    pub top_k: usize,
}

impl Default for NumericalRadiusConfig {
    fn default() -> Self {
        Self { grid_points: 720, refine_tol: 1e-9, top_k: 5 }
    }
}

impl NumericalRadiusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 4 || self.top_k == 0 || !(self.refine_tol > 0.0) {
            return Err(Error::Config(format!(
                "numerical radius needs grid_points >= 4, top_k >= 1, refine_tol > 0 (got {self:?})"
            )));
        }
        Ok(())
    }
}

/// `H_θ = (e^{iθ} M + e^{-iθ} M*)/2`.
fn rotated_hermitian(m: &DMatrix<C64>, theta: f64) -> DMatrix<C64> {
    let n = m.nrows();
    let e = C64::from_polar(0.5, theta);
    DMatrix::from_fn(n, n, |i, j| e * m[(i, j)] + (e * m[(j, i)]).conj())
}

fn extremes(h: DMatrix<C64>) -> (f64, f64) {
    h.symmetric_eigenvalues()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| (lo.min(l), hi.max(l)))
}

fn lambda_max_at(m: &DMatrix<C64>, theta: f64) -> f64 {
    extremes(rotated_hermitian(m, theta)).1
}

/// Golden-section maximization of a unimodal-near-the-seed function on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64, usize) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    let mut evals = 2;
    while hi - lo > tol {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
        evals += 1;
    }
    if fa >= fb {
        (a, fa, evals)
    } else {
        (b, fb, evals)
    }
}

/// `w(M) = max_θ λ_max(H_θ)`, by a coarse θ-grid plus golden-section refinement
/// of the best grid local maxima. The reported value is `|<Mx, x>|` at the top
/// eigenvector `x` of the best `H_θ`, an attained (hence certified) value.
pub fn numerical_radius(m: &CMatrix, cfg: &NumericalRadiusConfig) -> Result<RadiusEstimate> {
    cfg.validate()?;
    let mat = m.as_dmatrix();
    let n = cfg.grid_points + cfg.grid_points % 2;
    let half = n / 2;
    let step = 2.0 * PI / n as f64;
    // λ_max(H_{θ+π}) = -λ_min(H_θ), so half the grid gives all of it.
    let mut grid = vec![0.0; n];
    for j in 0..half {
        let (lo, hi) = extremes(rotated_hermitian(mat, j as f64 * step));
        grid[j] = hi;
        grid[j + half] = -lo;
    }
    let mut evals = half;

    let mut peaks: Vec<usize> = (0..n)
        .filter(|&j| grid[j] >= grid[(j + n - 1) % n] && grid[j] >= grid[(j + 1) % n])
        .collect();
    peaks.sort_by(|&a, &b| grid[b].total_cmp(&grid[a]).then(a.cmp(&b)));
    peaks.truncate(cfg.top_k);

    let (mut best_theta, mut best_val) = (peaks[0] as f64 * step, grid[peaks[0]]);
    for &j in &peaks {
        let center = j as f64 * step;
        let (theta, val, e) =
            golden_max(|t| lambda_max_at(mat, t), center - step, center + step, cfg.refine_tol);
        evals += e;
        if val > best_val {
            best_val = val;
            best_theta = theta;
        }
    }

    let h = CMatrix::wrap(rotated_hermitian(mat, best_theta));
    let (_, x) = matfun::top_eigenpair(&h);
    let attained = m.quadratic_form(&x).norm();
    let value = attained.max(best_val.max(0.0));
    Ok(RadiusEstimate {
        value,
        certified_lower: attained.min(value),
        restarts: peaks.len(),
        iterations: evals,
        tolerance: cfg.refine_tol,
        method: "theta-sweep+golden".into(),
        argmax: super::phase_gauge(x),
        gradient_value: None,
        lambda_value: None,
    })
}

/// Dense θ-grid maximum of `λ_max(H_θ)` with no refinement; a test oracle.
pub fn numerical_radius_oracle(m: &CMatrix, grid_points: usize) -> Result<f64> {
    if grid_points < 10_000 {
        return Err(Error::Config(format!(
            "numerical radius oracle needs at least 10^4 grid points, got {grid_points}"
        )));
    }
    let mat = m.as_dmatrix();
    let step = 2.0 * PI / grid_points as f64;
    Ok((0..grid_points)
        .map(|j| lambda_max_at(mat, j as f64 * step))
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0))
}
