//! Dense complex matrices and the spectral machinery the bound formulas consume:
//! powers of `|M| = (M*M)^{1/2}` and `|M*|`, the unitary polar factor, Hermitian
//! functional calculus, operator norm and spectral radius.
//!
//! Powers use the convention `0^0 = 1`, so `|M|^0 = I` even for singular `M`.
//! With a full-SVD unitary polar factor this is exact: `U|M|^0 = U` has `|U| = I`.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues of a PSD power base down to `-PSD_CLAMP_TOL * ‖H‖` are treated as zero.
pub const PSD_CLAMP_TOL: f64 = 1e-12;

/// A dense square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    m: DMatrix<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix{}", self.m)
    }
}

impl CMatrix {
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::Dimension("matrix must have dim >= 1".into()));
        }
        if let Some(pos) = m.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            let n = m.nrows();
            // nalgebra storage is column-major
            return Err(Error::Domain(format!(
                "non-finite entry at ({}, {})",
                pos % n,
                pos / n
            )));
        }
        Ok(Self { m })
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: DMatrix::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: DMatrix::zeros(dim, dim) }
    }

    pub fn diag(values: &[C64]) -> Self {
        Self { m: DMatrix::from_diagonal(&DVector::from_column_slice(values)) }
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// The n×n nilpotent Jordan block: ones on the superdiagonal.
    pub fn jordan(dim: usize) -> Self {
        Self {
            m: DMatrix::from_fn(dim, dim, |i, j| {
                if j == i + 1 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// Skips validation; only for results of arithmetic on valid matrices.
    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.m[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self { m: &self.m * alpha }
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        self.scale(C64::new(alpha, 0.0))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = DMatrix::identity(self.dim(), self.dim());
        for _ in 0..n {
            out = &out * &self.m;
        }
        Self { m: out }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `(M + M*)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self { m: (&self.m + self.m.adjoint()) * C64::new(0.5, 0.0) }
    }

    pub fn hermitian_residual(&self) -> f64 {
        (&self.m - self.m.adjoint()).norm()
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermitian_residual() <= rel_tol * self.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    /// `<Mx, x> = x* M x`.
    pub fn quadratic_form(&self, x: &[C64]) -> C64 {
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..n {
                row += self.m[(i, j)] * x[j];
            }
            acc += x[i].conj() * row;
        }
        acc
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.m[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn entries_col_major(&self) -> &[C64] {
        self.m.as_slice()
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix { m: &self.m + &rhs.m }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix { m: &self.m - &rhs.m }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix { m: &self.m * &rhs.m }
    }
}

/// Full SVD `M = W Σ V*`, returned as `(W, σ, V)`.
pub(crate) fn svd(m: &CMatrix) -> (DMatrix<C64>, Vec<f64>, DMatrix<C64>) {
    let svd = m.m.clone().svd(true, true);
    let w = svd.u.expect("left singular vectors requested");
    let v = svd.v_t.expect("right singular vectors requested").adjoint();
    (w, svd.singular_values.iter().copied().collect(), v)
}

/// `Q diag(vals) Q*`, symmetrized to suppress round-off.
fn spectral_synth(q: &DMatrix<C64>, vals: &[f64]) -> CMatrix {
    let n = q.nrows();
    let mut scaled = q.clone();
    for (j, &v) in vals.iter().enumerate() {
        for i in 0..n {
            scaled[(i, j)] *= v;
        }
    }
    let out = &scaled * q.adjoint();
    CMatrix::wrap(out).hermitian_part()
}

fn check_power(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!("power must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// `0^0 = 1`; `f64::powf` already follows this.
fn spectral_pow(s: f64, t: f64) -> f64 {
    s.max(0.0).powf(t)
}

/// `|M|^t = V Σ^t V*`.
pub fn abs_pow(m: &CMatrix, t: f64) -> Result<CMatrix> {
    check_power(t)?;
    let (_, s, v) = svd(m);
    let p: Vec<f64> = s.iter().map(|&x| spectral_pow(x, t)).collect();
    Ok(spectral_synth(&v, &p))
}

/// `|M*|^t = W Σ^t W*`.
pub fn abs_adjoint_pow(m: &CMatrix, t: f64) -> Result<CMatrix> {
    check_power(t)?;
    let (w, s, _) = svd(m);
    let p: Vec<f64> = s.iter().map(|&x| spectral_pow(x, t)).collect();
    Ok(spectral_synth(&w, &p))
}

/// `h(|M|)` computed directly from the singular values.
pub fn abs_apply(m: &CMatrix, h: impl Fn(f64) -> f64) -> CMatrix {
    let (_, s, v) = svd(m);
    let p: Vec<f64> = s.iter().map(|&x| h(x)).collect();
    spectral_synth(&v, &p)
}

/// `h(|M*|)` computed directly from the singular values.
pub fn abs_adjoint_apply(m: &CMatrix, h: impl Fn(f64) -> f64) -> CMatrix {
    let (w, s, _) = svd(m);
    let p: Vec<f64> = s.iter().map(|&x| h(x)).collect();
    spectral_synth(&w, &p)
}

/// Unitary polar factor `U = W V*`, so that `M = U|M|` and `U|M|^s U* = |M*|^s`.
pub fn polar_unitary(m: &CMatrix) -> CMatrix {
    let (w, _, v) = svd(m);
    CMatrix::wrap(w * v.adjoint())
}

fn require_hermitian(h: &CMatrix) -> Result<()> {
    let res = h.hermitian_residual();
    let scale = h.frobenius_norm();
    if res > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Precondition(format!(
            "matrix is not Hermitian: ‖H - H*‖ = {res:.3e}, ‖H‖ = {scale:.3e}"
        )));
    }
    Ok(())
}

/// Hermitian functional calculus `f(H) = Q f(Λ) Q*`.
pub fn spectral_apply(h: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    require_hermitian(h)?;
    let eig = SymmetricEigen::new(h.hermitian_part().m);
    let vals: Vec<f64> = eig.eigenvalues.iter().map(|&l| f(l)).collect();
    Ok(spectral_synth(&eig.eigenvectors, &vals))
}

/// `H^p` for a Hermitian PSD `H`; small negative eigenvalues from round-off are clamped to zero.
pub fn psd_pow(h: &CMatrix, p: f64) -> Result<CMatrix> {
    check_power(p)?;
    require_hermitian(h)?;
    let eig = SymmetricEigen::new(h.hermitian_part().m);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    let mut vals = Vec::with_capacity(eig.eigenvalues.len());
    for &l in eig.eigenvalues.iter() {
        if l < -PSD_CLAMP_TOL * scale {
            return Err(Error::Precondition(format!(
                "power base has negative eigenvalue {l:.3e}"
            )));
        }
        vals.push(spectral_pow(l, p));
    }
    Ok(spectral_synth(&eig.eigenvectors, &vals))
}

/// Projects a Hermitian matrix onto the PSD cone by clamping negative eigenvalues.
pub fn psd_project(h: &CMatrix) -> CMatrix {
    let eig = SymmetricEigen::new(h.hermitian_part().m);
    let vals: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    spectral_synth(&eig.eigenvectors, &vals)
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    m.m.singular_values().iter().fold(0.0, |a: f64, &s| a.max(s))
}

/// Largest eigenvalue modulus.
pub fn spectral_radius_mat(m: &CMatrix) -> Result<f64> {
    let schur = Schur::try_new(m.m.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let eigs = schur
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("Schur form is not triangular".into()))?;
    Ok(eigs.iter().fold(0.0, |a: f64, z| a.max(z.norm())))
}

/// Eigenvalues of the Hermitian part, ascending.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = h.hermitian_part().m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

pub fn lambda_max(h: &CMatrix) -> f64 {
    h.hermitian_part()
        .m
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::NEG_INFINITY, |a, &l| a.max(l))
}

pub fn lambda_min(h: &CMatrix) -> f64 {
    h.hermitian_part()
        .m
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |a, &l| a.min(l))
}

/// Top eigenpair of the Hermitian part.
pub fn top_eigenpair(h: &CMatrix) -> (f64, Vec<C64>) {
    let eig = SymmetricEigen::new(h.hermitian_part().m);
    let (k, &l) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("dim >= 1");
    (l, eig.eigenvectors.column(k).iter().copied().collect())
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Nonnegative `f`, `g` on `[0, ∞)` with `f(λ) g(λ) = λ`.
#[derive(Clone)]
pub struct SpectralFunctionPair {
    f: ScalarFn,
    g: ScalarFn,
    label: String,
}

impl fmt::Debug for SpectralFunctionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralFunctionPair").field("label", &self.label).finish()
    }
}

impl SpectralFunctionPair {
    /// Grid on which the pair constraints are validated.
    pub const SAMPLE_GRID: [f64; 8] = [0.0, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3];
    pub const PRODUCT_TOL: f64 = 1e-10;

    pub fn new(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let label = label.into();
        for &l in &Self::SAMPLE_GRID {
            let (fv, gv) = (f(l), g(l));
            if !(fv.is_finite() && gv.is_finite()) || fv < 0.0 || gv < 0.0 {
                return Err(Error::Domain(format!(
                    "function pair '{label}' must be finite and nonnegative: f({l}) = {fv}, g({l}) = {gv}"
                )));
            }
            if (fv * gv - l).abs() > Self::PRODUCT_TOL * l.max(f64::MIN_POSITIVE) {
                return Err(Error::Domain(format!(
                    "function pair '{label}' violates f(λ)g(λ) = λ at λ = {l}: got {}",
                    fv * gv
                )));
            }
        }
        Ok(Self { f: Arc::new(f), g: Arc::new(g), label })
    }

    /// `f(λ) = λ^α`, `g(λ) = λ^{1-α}`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain(format!("α must lie in [0, 1], got {alpha}")));
        }
        Self::new(
            format!("power({alpha})"),
            move |l| spectral_pow(l, alpha),
            move |l| spectral_pow(l, 1.0 - alpha),
        )
    }

    /// `f = g = √`.
    pub fn sqrt() -> Self {
        Self::new("sqrt", |l: f64| l.max(0.0).sqrt(), |l: f64| l.max(0.0).sqrt())
            .expect("sqrt pair is valid")
    }

    /// Parses `sqrt` or `power:<α>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sqrt" => Ok(Self::sqrt()),
            _ => match s.strip_prefix("power:") {
                Some(a) => {
                    let alpha: f64 = a
                        .parse()
                        .map_err(|_| Error::Domain(format!("cannot parse α in '{s}'")))?;
                    Self::power(alpha)
                }
                None => Err(Error::Domain(format!(
                    "unknown function pair '{s}' (expected 'sqrt' or 'power:<alpha>')"
                ))),
            },
        }
    }

    pub fn f(&self, l: f64) -> f64 {
        (self.f)(l)
    }

    pub fn g(&self, l: f64) -> f64 {
        (self.g)(l)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `f^p(|M|)`.
    pub fn f_pow_abs(&self, m: &CMatrix, p: i32) -> CMatrix {
        abs_apply(m, |s| self.f(s).powi(p))
    }

    /// `g^p(|M*|)`.
    pub fn g_pow_abs_adjoint(&self, m: &CMatrix, p: i32) -> CMatrix {
        abs_adjoint_apply(m, |s| self.g(s).powi(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) {
        let d = a.max_abs_diff(b);
        assert!(d <= tol, "matrices differ by {d}: {a:?} vs {b:?}");
    }

    #[test]
    fn abs_pow_of_jordan_block() {
        let j = CMatrix::jordan(2);
        close(&abs_pow(&j, 1.0).unwrap(), &CMatrix::real_diag(&[0.0, 1.0]), 1e-14);
        close(&abs_pow(&j, 0.0).unwrap(), &CMatrix::identity(2), 1e-14);
        close(&abs_adjoint_pow(&j, 1.0).unwrap(), &CMatrix::real_diag(&[1.0, 0.0]), 1e-14);
    }

    #[test]
    fn abs_pow_identity_and_scaled() {
        for n in 1..5 {
            close(&abs_pow(&CMatrix::identity(n), 0.37).unwrap(), &CMatrix::identity(n), 1e-14);
        }
        let two = CMatrix::identity(3).scale_real(2.0);
        close(&abs_adjoint_pow(&two, 2.0).unwrap(), &CMatrix::identity(3).scale_real(4.0), 1e-13);
    }

    #[test]
    fn abs_pow_rejects_negative_power() {
        assert!(matches!(abs_pow(&CMatrix::identity(2), -0.1), Err(Error::Domain(_))));
        assert!(matches!(abs_adjoint_pow(&CMatrix::identity(2), f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn non_square_rejected() {
        let m = DMatrix::<C64>::zeros(2, 3);
        assert!(matches!(CMatrix::from_dmatrix(m), Err(Error::Dimension(_))));
        let rows = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0)]];
        assert!(matches!(CMatrix::from_rows(&rows), Err(Error::Dimension(_))));
    }

    #[test]
    fn non_finite_rejected() {
        let rows = vec![vec![c(1.0, 0.0), c(f64::NAN, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(CMatrix::from_rows(&rows), Err(Error::Domain(_))));
    }

    #[test]
    fn psd_abs_adjoint_matches_abs() {
        let h = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.5, 0.5)],
            vec![c(0.5, -0.5), c(1.0, 0.0)],
        ])
        .unwrap();
        for t in [0.0, 0.3, 1.0, 2.5] {
            close(&abs_pow(&h, t).unwrap(), &abs_adjoint_pow(&h, t).unwrap(), 1e-12);
        }
    }

    #[test]
    fn polar_factor_examples() {
        let j = CMatrix::jordan(2);
        let u = polar_unitary(&j);
        close(&(&u * &abs_pow(&j, 1.0).unwrap()), &j, 1e-14);
        let conj = &(&u * &abs_pow(&j, 1.0).unwrap()) * &u.adjoint();
        close(&conj, &abs_adjoint_pow(&j, 1.0).unwrap(), 1e-14);
        // completion on ker J is whatever the SVD picks; only U e2 = e1 is forced
        close(&(&u * &u.adjoint()), &CMatrix::identity(2), 1e-14);
        assert!((u.get(0, 1) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(u.get(1, 1).norm() < 1e-14);

        let d = CMatrix::real_diag(&[3.0, -5.0]);
        close(&polar_unitary(&d), &CMatrix::real_diag(&[1.0, -1.0]), 1e-14);

        let s = 1.0 / 2f64.sqrt();
        let unitary = CMatrix::from_rows(&[vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]])
            .unwrap();
        close(&polar_unitary(&unitary), &unitary, 1e-14);
    }

    #[test]
    fn spectral_apply_examples() {
        let sqrt = |l: f64| l.max(0.0).sqrt();
        close(
            &spectral_apply(&CMatrix::real_diag(&[0.0, 1.0]), sqrt).unwrap(),
            &CMatrix::real_diag(&[0.0, 1.0]),
            1e-14,
        );
        close(
            &spectral_apply(&CMatrix::real_diag(&[4.0, 9.0]), sqrt).unwrap(),
            &CMatrix::real_diag(&[2.0, 3.0]),
            1e-14,
        );
        let h = CMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let sq = CMatrix::from_real_rows(&[vec![5.0, 4.0], vec![4.0, 5.0]]).unwrap();
        close(&spectral_apply(&h, |l| l * l).unwrap(), &sq, 1e-13);
    }

    #[test]
    fn spectral_apply_rejects_non_hermitian() {
        let err = spectral_apply(&CMatrix::jordan(2), |l| l).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn psd_pow_clamps_round_off_only() {
        let h = CMatrix::real_diag(&[4.0, -1e-14]);
        close(&psd_pow(&h, 0.5).unwrap(), &CMatrix::real_diag(&[2.0, 0.0]), 1e-14);
        assert!(psd_pow(&CMatrix::real_diag(&[4.0, -1e-3]), 0.5).is_err());
    }

    #[test]
    fn norm_and_spectral_radius_examples() {
        let j = CMatrix::jordan(2);
        assert_abs_diff_eq!(op_norm(&j), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(spectral_radius_mat(&j).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(op_norm(&CMatrix::identity(3)), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(spectral_radius_mat(&CMatrix::identity(3)).unwrap(), 1.0, epsilon = 1e-14);
        let d = CMatrix::real_diag(&[1.0, -3.0]);
        assert_abs_diff_eq!(op_norm(&d), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(spectral_radius_mat(&d).unwrap(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn function_pair_validation() {
        assert!(SpectralFunctionPair::power(0.0).is_ok());
        assert!(SpectralFunctionPair::power(1.0).is_ok());
        assert!(SpectralFunctionPair::power(1.5).is_err());
        assert!(SpectralFunctionPair::new("bad", |l: f64| l, |_| 2.0).is_err());
        assert!(SpectralFunctionPair::new("neg", |l: f64| -l, |_| -1.0).is_err());
        let p = SpectralFunctionPair::parse("power:0.25").unwrap();
        assert_eq!(p.label(), "power(0.25)");
        assert!(SpectralFunctionPair::parse("cube").is_err());
    }

    #[test]
    fn function_pair_applied_to_abs() {
        // f = g = sqrt: f^2(|J|) + g^2(|J*|) = |J| + |J*| = I
        let j = CMatrix::jordan(2);
        let p = SpectralFunctionPair::sqrt();
        let sum = &p.f_pow_abs(&j, 2) + &p.g_pow_abs_adjoint(&j, 2);
        close(&sum, &CMatrix::identity(2), 1e-14);
    }
}
