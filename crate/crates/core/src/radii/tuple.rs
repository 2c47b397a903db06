use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matfun::{self, CMatrix, C64};

/// An ordered d-tuple `(A_1, …, A_d)` of same-size square matrices.
///
/// Arithmetic is entrywise: `A + B = (A_k + B_k)`, `AB = (A_k B_k)`, `|A|^t = (|A_k|^t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTuple {
    mats: Vec<CMatrix>,
}

impl OperatorTuple {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| Error::Dimension("tuple must contain at least one matrix".into()))?;
        let dim = first.dim();
        if let Some((k, m)) = mats.iter().enumerate().find(|(_, m)| m.dim() != dim) {
            return Err(Error::Dimension(format!(
                "tuple entry {k} has dim {}, expected {dim}",
                m.dim()
            )));
        }
        Ok(Self { mats })
    }

    pub fn single(m: CMatrix) -> Self {
        Self { mats: vec![m] }
    }

    pub fn zeros(d: usize, dim: usize) -> Self {
        Self { mats: vec![CMatrix::zeros(dim); d.max(1)] }
    }

    pub fn identity(d: usize, dim: usize) -> Self {
        Self { mats: vec![CMatrix::identity(dim); d.max(1)] }
    }

    /// The Pauli triple `(σx, σy, σz)`.
    pub fn pauli() -> Self {
        let c = |re, im| C64::new(re, im);
        let z = c(0.0, 0.0);
        let sx = CMatrix::from_rows(&[vec![z, c(1.0, 0.0)], vec![c(1.0, 0.0), z]]).unwrap();
        let sy = CMatrix::from_rows(&[vec![z, c(0.0, -1.0)], vec![c(0.0, 1.0), z]]).unwrap();
        let sz = CMatrix::real_diag(&[1.0, -1.0]);
        Self { mats: vec![sx, sy, sz] }
    }

    pub fn d(&self) -> usize {
        self.mats.len()
    }

    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }

    pub fn get(&self, k: usize) -> &CMatrix {
        &self.mats[k]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn iter(&self) -> impl Iterator<Item = &CMatrix> {
        self.mats.iter()
    }

    pub fn into_matrices(self) -> Vec<CMatrix> {
        self.mats
    }

    pub fn check_same_shape(&self, other: &OperatorTuple) -> Result<()> {
        if self.d() != other.d() || self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "tuple shapes differ: (d={}, dim={}) vs (d={}, dim={})",
                self.d(),
                self.dim(),
                other.d(),
                other.dim()
            )));
        }
        Ok(())
    }

    /// Entrywise map; `f` must preserve the matrix dimension.
    pub fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Self { mats: self.mats.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&CMatrix) -> Result<CMatrix>) -> Result<Self> {
        Ok(Self { mats: self.mats.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn zip_with(
        &self,
        other: &OperatorTuple,
        f: impl Fn(&CMatrix, &CMatrix) -> CMatrix,
    ) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self { mats: self.mats.iter().zip(&other.mats).map(|(a, b)| f(a, b)).collect() })
    }

    pub fn add(&self, other: &OperatorTuple) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// `A + iB`.
    pub fn add_imag(&self, other: &OperatorTuple) -> Result<Self> {
        self.zip_with(other, |a, b| a + &b.scale(C64::new(0.0, 1.0)))
    }

    /// Entrywise product `(A_k B_k)`.
    pub fn mul(&self, other: &OperatorTuple) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, alpha: C64) -> Self {
        self.map(|a| a.scale(alpha))
    }

    pub fn adjoint(&self) -> Self {
        self.map(CMatrix::adjoint)
    }

    /// Entrywise matrix power `(A_k^n)`.
    pub fn pow(&self, n: u32) -> Self {
        self.map(|a| a.pow(n))
    }

    pub fn abs_pow(&self, t: f64) -> Result<Self> {
        self.try_map(|a| matfun::abs_pow(a, t))
    }

    pub fn abs_adjoint_pow(&self, t: f64) -> Result<Self> {
        self.try_map(|a| matfun::abs_adjoint_pow(a, t))
    }

    /// Entrywise unitary polar factors.
    pub fn polar_unitary(&self) -> Self {
        self.map(matfun::polar_unitary)
    }

    /// `Σ_k A_k`.
    pub fn sum(&self) -> CMatrix {
        let n = self.dim();
        let mut acc = DMatrix::<C64>::zeros(n, n);
        for a in &self.mats {
            acc += a.as_dmatrix();
        }
        CMatrix::wrap(acc)
    }

    /// `Σ_k A_k* A_k`.
    pub fn gram_sum(&self) -> CMatrix {
        let n = self.dim();
        let mut acc = DMatrix::<C64>::zeros(n, n);
        for a in &self.mats {
            acc += a.as_dmatrix().adjoint() * a.as_dmatrix();
        }
        CMatrix::wrap(acc).hermitian_part()
    }

    /// Euclidean operator norm `sup_{‖x‖=1} (Σ‖A_k x‖²)^{1/2} = λ_max(Σ A_k*A_k)^{1/2}`.
    pub fn op_norm(&self) -> f64 {
        matfun::lambda_max(&self.gram_sum()).max(0.0).sqrt()
    }

    /// `Σ_k |<A_k x, x>|²`.
    pub fn objective(&self, x: &[C64]) -> f64 {
        self.mats.iter().map(|a| a.quadratic_form(x).norm_sqr()).sum()
    }

    /// `(<A_1 x, x>, …, <A_d x, x>)`.
    pub fn quadratic_forms(&self, x: &[C64]) -> Vec<C64> {
        self.mats.iter().map(|a| a.quadratic_form(x)).collect()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.mats
            .iter()
            .flat_map(|m| m.entries_col_major().iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of the stacked tuple.
    pub fn frobenius_norm(&self) -> f64 {
        self.mats.iter().map(|m| m.frobenius_norm().powi(2)).sum::<f64>().sqrt()
    }
}

/// Tuple operator norm `‖A‖ = λ_max(Σ A_k*A_k)^{1/2}`, closed form.
pub fn tuple_op_norm(a: &OperatorTuple) -> f64 {
    a.op_norm()
}
