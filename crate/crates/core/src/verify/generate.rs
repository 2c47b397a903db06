use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::blockmat::BlockOperatorMatrix;
use crate::error::{Error, Result};
use crate::matfun::{self, CMatrix, C64};
use crate::radii::OperatorTuple;
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GeneratorKind {
    Ginibre,
    Hermitian,
    Psd,
    UnitaryHaar,
    CommutingPair,
    PositiveBlock,
    Tuple,
    BlockMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub dim: usize,
    pub d: usize,
    /// Block grid size for `BLOCK_MATRIX`.
    pub n: usize,
    pub scale: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, dim: usize, seed: u64) -> Self {
        Self { kind, dim, d: 1, n: 1, scale: 1.0, seed }
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 || self.d < 1 || self.n < 1 {
            return Err(Error::Config(format!(
                "dim, d and n must be >= 1 (got dim = {}, d = {}, n = {})",
                self.dim, self.d, self.n
            )));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::Config(format!("scale must be finite and > 0, got {}", self.scale)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generated {
    Matrix(CMatrix),
    Tuple(OperatorTuple),
    /// `(B, C)` with `|B_k| C_k = C_k* |B_k|`.
    CommutingPair { b: OperatorTuple, c: OperatorTuple },
    /// `(A, B, C)` with every `[[A_k, C_k*], [C_k, B_k]] >= 0`.
    PositiveBlock { a: OperatorTuple, b: OperatorTuple, c: OperatorTuple },
    Block(BlockOperatorMatrix),
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    spec.validate()?;
    let rng = &mut seed::rng(spec.seed);
    let (dim, d, s) = (spec.dim, spec.d, spec.scale);
    Ok(match spec.kind {
        GeneratorKind::Ginibre => Generated::Matrix(ginibre(rng, dim, s)),
        GeneratorKind::Hermitian => Generated::Matrix(hermitian(rng, dim, s)),
        GeneratorKind::Psd => Generated::Matrix(psd(rng, dim, s)),
        GeneratorKind::UnitaryHaar => Generated::Matrix(haar_unitary(rng, dim)),
        GeneratorKind::CommutingPair => {
            let (b, c) = commuting_pair(rng, d, dim, s);
            Generated::CommutingPair { b, c }
        }
        GeneratorKind::PositiveBlock => {
            let (a, b, c) = positive_block(rng, d, dim, s);
            Generated::PositiveBlock { a, b, c }
        }
        GeneratorKind::Tuple => Generated::Tuple(random_tuple(rng, d, dim, s)),
        GeneratorKind::BlockMatrix => Generated::Block(random_block_matrix(rng, spec.n, d, dim, s)),
    })
}

fn normal_c64(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Independent standard complex Gaussian entries (`E|z|² = scale²`).
pub fn ginibre(rng: &mut impl Rng, dim: usize, scale: f64) -> CMatrix {
    let m = DMatrix::from_fn(dim, dim, |_, _| normal_c64(rng) * scale);
    CMatrix::wrap(m)
}

/// `G X H` with `G`, `H` of sizes `dim × rank` and `rank × dim`.
pub fn low_rank_ginibre(rng: &mut impl Rng, dim: usize, rank: usize, scale: f64) -> CMatrix {
    let g = DMatrix::from_fn(dim, rank, |_, _| normal_c64(rng));
    let h = DMatrix::from_fn(rank, dim, |_, _| normal_c64(rng) * scale);
    CMatrix::wrap(g * h)
}

pub fn hermitian(rng: &mut impl Rng, dim: usize, scale: f64) -> CMatrix {
    ginibre(rng, dim, scale).hermitian_part()
}

/// `G G* / dim`, eigenvalues clamped at zero.
pub fn psd(rng: &mut impl Rng, dim: usize, scale: f64) -> CMatrix {
    let g = ginibre(rng, dim, scale.sqrt());
    matfun::psd_project(&(&g * &g.adjoint()).scale_real(1.0 / dim as f64))
}

/// Haar unitary: `Q` of a Ginibre QR with the phases of `diag(R)` folded in.
pub fn haar_unitary(rng: &mut impl Rng, dim: usize) -> CMatrix {
    let qr = ginibre(rng, dim, 1.0).into_dmatrix().qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    CMatrix::wrap(q)
}

pub fn random_tuple(rng: &mut impl Rng, d: usize, dim: usize, scale: f64) -> OperatorTuple {
    OperatorTuple::new((0..d).map(|_| ginibre(rng, dim, scale)).collect()).expect("uniform shapes")
}

/// Ginibre `B_k` and `C_k = p_k(|B_k|)` for a random real cubic `p_k` with coefficients in `[-1, 1]`.
pub fn commuting_pair(
    rng: &mut impl Rng,
    d: usize,
    dim: usize,
    scale: f64,
) -> (OperatorTuple, OperatorTuple) {
    let b = random_tuple(rng, d, dim, scale);
    let c = b
        .iter()
        .map(|m| {
            let coef: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
            matfun::abs_apply(m, |s| {
                let x = s / scale;
                scale * (coef[0] + x * (coef[1] + x * (coef[2] + x * coef[3])))
            })
        })
        .collect();
    (b, OperatorTuple::new(c).expect("same shapes"))
}

/// `A = XX*`, `B = Y*Y`, `C = Y*X*`: the block `[[XX*, XY], [Y*X*, Y*Y]] = [X; Y*][X* Y]` is positive.
pub fn positive_block(
    rng: &mut impl Rng,
    d: usize,
    dim: usize,
    scale: f64,
) -> (OperatorTuple, OperatorTuple, OperatorTuple) {
    let s = scale.sqrt();
    let x = random_tuple(rng, d, dim, s);
    let y = random_tuple(rng, d, dim, s);
    let a = x.mul(&x.adjoint()).expect("same shape");
    let b = y.adjoint().mul(&y).expect("same shape");
    let c = y.adjoint().mul(&x.adjoint()).expect("same shape");
    (a, b, c)
}

pub fn random_block_matrix(
    rng: &mut impl Rng,
    n: usize,
    d: usize,
    m: usize,
    scale: f64,
) -> BlockOperatorMatrix {
    let blocks = (0..n)
        .map(|_| (0..n).map(|_| random_tuple(rng, d, m, scale)).collect())
        .collect();
    BlockOperatorMatrix::new(blocks).expect("uniform shapes")
}

pub fn random_unit_vector(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| normal_c64(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}
