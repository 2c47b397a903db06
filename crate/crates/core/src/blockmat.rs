//! `n × n` operator matrices whose entries are `d`-tuples, and the scalar
//! comparison matrices whose numerical radius bounds their `w_e`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::bounds::{entry_key, two_by_two_closed_form, BoundConfig, BoundId, BoundReport};
use crate::error::{Error, Result};
use crate::matfun::{CMatrix, SpectralFunctionPair};
use crate::radii::OperatorTuple;

/// Square grid of tuples sharing `d` and the block dimension `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperatorMatrix {
    blocks: Vec<Vec<OperatorTuple>>,
}

impl BlockOperatorMatrix {
    pub fn new(blocks: Vec<Vec<OperatorTuple>>) -> Result<Self> {
        let n = blocks.len();
        if n == 0 {
            return Err(Error::Empty("block matrix needs n >= 1".into()));
        }
        let first = &blocks[0][..];
        let Some(head) = first.first() else {
            return Err(Error::Dimension("row 0 is empty".into()));
        };
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} blocks, expected {n}",
                    row.len()
                )));
            }
            for (j, b) in row.iter().enumerate() {
                if b.d() != head.d() || b.dim() != head.dim() {
                    return Err(Error::Dimension(format!(
                        "block ({i}, {j}) is d = {}, m = {}; expected d = {}, m = {}",
                        b.d(),
                        b.dim(),
                        head.d(),
                        head.dim()
                    )));
                }
            }
        }
        Ok(Self { blocks })
    }

    /// `diag(A_11, …, A_nn)` with zero off-diagonal blocks.
    pub fn block_diagonal(diag: Vec<OperatorTuple>) -> Result<Self> {
        let n = diag.len();
        let Some(head) = diag.first() else {
            return Err(Error::Empty("block matrix needs n >= 1".into()));
        };
        let zero = OperatorTuple::zeros(head.d(), head.dim());
        let mut blocks = vec![vec![zero; n]; n];
        for (i, b) in diag.into_iter().enumerate() {
            blocks[i][i] = b;
        }
        Self::new(blocks)
    }

    /// `[[A, B], [C, D]]`.
    pub fn two_by_two(
        a: OperatorTuple,
        b: OperatorTuple,
        c: OperatorTuple,
        d: OperatorTuple,
    ) -> Result<Self> {
        Self::new(vec![vec![a, b], vec![c, d]])
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn d(&self) -> usize {
        self.blocks[0][0].d()
    }

    /// Block dimension `m`.
    pub fn block_dim(&self) -> usize {
        self.blocks[0][0].dim()
    }

    pub fn block(&self, i: usize, j: usize) -> &OperatorTuple {
        &self.blocks[i][j]
    }

    pub fn blocks(&self) -> &[Vec<OperatorTuple>] {
        &self.blocks
    }
}

/// The `d`-tuple of `nm × nm` matrices, the `k`-th built from the `k`-th components.
pub fn assemble(bm: &BlockOperatorMatrix) -> OperatorTuple {
    let (n, m) = (bm.n(), bm.block_dim());
    let mats = (0..bm.d())
        .map(|k| {
            CMatrix::wrap(DMatrix::from_fn(n * m, n * m, |r, c| {
                bm.blocks[r / m][c / m].get(k).get(r % m, c % m)
            }))
        })
        .collect();
    OperatorTuple::new(mats).expect("uniform blocks assemble to a valid tuple")
}

/// Which comparison matrix to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ComparisonMode {
    Them1Fg,
    Cor1Alpha,
    Cor2FgNorm,
    Cor3AlphaNorm,
    Cor4Sym,
    Cor5SymNorm,
}

impl ComparisonMode {
    pub const ALL: [ComparisonMode; 6] = [
        ComparisonMode::Them1Fg,
        ComparisonMode::Cor1Alpha,
        ComparisonMode::Cor2FgNorm,
        ComparisonMode::Cor3AlphaNorm,
        ComparisonMode::Cor4Sym,
        ComparisonMode::Cor5SymNorm,
    ];

    pub fn bound_id(self) -> BoundId {
        match self {
            ComparisonMode::Them1Fg => BoundId::Them1Fg,
            ComparisonMode::Cor1Alpha => BoundId::Cor1Alpha,
            ComparisonMode::Cor2FgNorm => BoundId::Cor2FgNorm,
            ComparisonMode::Cor3AlphaNorm => BoundId::Cor3AlphaNorm,
            ComparisonMode::Cor4Sym => BoundId::Cor4Sym,
            ComparisonMode::Cor5SymNorm => BoundId::Cor5SymNorm,
        }
    }

    /// Modes parameterized by a function pair; the rest take `α`.
    pub fn takes_pair(self) -> bool {
        matches!(self, ComparisonMode::Them1Fg | ComparisonMode::Cor2FgNorm)
    }

    /// Off-diagonal entries use tuple norms instead of `w_e`.
    pub fn uses_norm(self) -> bool {
        matches!(
            self,
            ComparisonMode::Cor2FgNorm | ComparisonMode::Cor3AlphaNorm | ComparisonMode::Cor5SymNorm
        )
    }

    /// Symmetrized modes put half the product on both sides of the diagonal.
    pub fn symmetric(self) -> bool {
        matches!(self, ComparisonMode::Cor4Sym | ComparisonMode::Cor5SymNorm)
    }
}

impl fmt::Display for ComparisonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.bound_id().name())
    }
}

#[derive(Clone, Debug)]
pub enum ComparisonParams {
    Pair(SpectralFunctionPair),
    Alpha(f64),
}

impl ComparisonParams {
    fn resolve(&self, mode: ComparisonMode) -> Result<SpectralFunctionPair> {
        match (self, mode.takes_pair()) {
            (ComparisonParams::Pair(fg), true) => Ok(fg.clone()),
            (ComparisonParams::Alpha(a), false) => SpectralFunctionPair::power(*a),
            (ComparisonParams::Pair(_), false) => {
                Err(Error::Config(format!("{mode} takes α, not a function pair")))
            }
            (ComparisonParams::Alpha(_), true) => {
                Err(Error::Config(format!("{mode} takes a function pair, not α")))
            }
        }
    }
}

/// Entrywise nonnegative scalar matrix dominating an operator matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonMatrix {
    pub mode: ComparisonMode,
    pub entries: Vec<Vec<f64>>,
    pub alpha: Option<f64>,
    pub function_pair: Option<String>,
}

impl ComparisonMatrix {
    pub fn n(&self) -> usize {
        self.entries.len()
    }
}

/// Builds the comparison matrix of `bm` in the given mode.
pub fn comparison_matrix(
    bm: &BlockOperatorMatrix,
    mode: ComparisonMode,
    params: &ComparisonParams,
    cfg: &BoundConfig,
) -> Result<ComparisonMatrix> {
    let diag = diagonal_radii(bm, cfg)?;
    comparison_matrix_with_diag(bm, mode, params, cfg, &diag)
}

/// `w_e(A_ii)` for every diagonal block, as used on the comparison diagonal.
pub fn diagonal_radii(bm: &BlockOperatorMatrix, cfg: &BoundConfig) -> Result<Vec<f64>> {
    (0..bm.n()).map(|i| cfg.rhs_radius(bm.block(i, i))).collect()
}

/// As [`comparison_matrix`] with the diagonal radii supplied by the caller.
pub fn comparison_matrix_with_diag(
    bm: &BlockOperatorMatrix,
    mode: ComparisonMode,
    params: &ComparisonParams,
    cfg: &BoundConfig,
    diag: &[f64],
) -> Result<ComparisonMatrix> {
    let fg = params.resolve(mode)?;
    let n = bm.n();
    if diag.len() != n {
        return Err(Error::Dimension(format!("{} diagonal radii for n = {n}", diag.len())));
    }
    let mut entries = vec![vec![0.0; n]; n];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = diag[i];
    }
    let measure = |x: &OperatorTuple| -> Result<f64> {
        if mode.uses_norm() {
            Ok(x.op_norm())
        } else {
            cfg.rhs_radius(x)
        }
    };
    // f²(|X|) + g²(|Y*|)
    let combo = |x: &OperatorTuple, y: &OperatorTuple| -> Result<OperatorTuple> {
        x.map(|m| fg.f_pow_abs(m, 2)).add(&y.map(|m| fg.g_pow_abs_adjoint(m, 2)))
    };
    for i in 0..n {
        for j in i + 1..n {
            let (aij, aji) = (bm.block(i, j), bm.block(j, i));
            let first = measure(&combo(aji, aij)?)?;
            let second = measure(&combo(aij, aji)?)?;
            let prod = (first * second).sqrt();
            if mode.symmetric() {
                entries[i][j] = 0.5 * prod;
                entries[j][i] = 0.5 * prod;
            } else {
                entries[i][j] = prod;
            }
        }
    }
    let (alpha, function_pair) = match params {
        ComparisonParams::Alpha(a) => (Some(*a), None),
        ComparisonParams::Pair(fg) => (None, Some(fg.label().to_string())),
    };
    Ok(ComparisonMatrix { mode, entries, alpha, function_pair })
}

/// `λ_max((B + Bᵀ)/2)` of a square real matrix.
pub(crate) fn symmetric_part_lambda_max(b: &[Vec<f64>]) -> f64 {
    let n = b.len();
    let sym = DMatrix::from_fn(n, n, |i, j| 0.5 * (b[i][j] + b[j][i]));
    SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Numerical radius of an entrywise nonnegative matrix.
///
/// For `B >= 0` entrywise, `w(B) = w((B + Bᵀ)/2) = λ_max((B + Bᵀ)/2)` by
/// Perron–Frobenius.
pub fn nonneg_numrad(cm: &ComparisonMatrix) -> Result<f64> {
    for (i, row) in cm.entries.iter().enumerate() {
        if row.len() != cm.n() {
            return Err(Error::Dimension(format!("comparison matrix row {i} has wrong length")));
        }
        for (j, &v) in row.iter().enumerate() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Precondition(format!(
                    "comparison matrix entry ({i}, {j}) = {v} is not a finite nonnegative number"
                )));
            }
        }
    }
    Ok(symmetric_part_lambda_max(&cm.entries).max(0.0))
}

/// `w_e(assemble(bm)) <= w(comparison matrix)` as a report.
pub fn block_radius_bound(
    bm: &BlockOperatorMatrix,
    mode: ComparisonMode,
    params: &ComparisonParams,
    cfg: &BoundConfig,
) -> Result<BoundReport> {
    let cm = comparison_matrix(bm, mode, params, cfg)?;
    comparison_report(&cm)
}

/// Wraps an already computed comparison matrix in a report.
pub fn comparison_report(cm: &ComparisonMatrix) -> Result<BoundReport> {
    let value = nonneg_numrad(cm)?;
    let mut components = BTreeMap::new();
    for (i, row) in cm.entries.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            components.insert(entry_key(i, j), v);
        }
    }
    let mut params = BTreeMap::new();
    params.insert("n".to_string(), cm.n() as f64);
    if let Some(a) = cm.alpha {
        params.insert("alpha".to_string(), a);
    }
    let id = cm.mode.bound_id();
    let report = BoundReport {
        bound_id: id,
        params,
        function_pair: cm.function_pair.clone(),
        value,
        components,
        anchor: id.anchor().to_string(),
    };
    debug_assert!(report.is_consistent());
    Ok(report)
}

/// Closed-form `2 × 2` bounds on `w_e([[A, B], [C, D]])` (`COR6`, `COR7`).
pub fn two_by_two_bounds(
    a: &OperatorTuple,
    b: &OperatorTuple,
    c: &OperatorTuple,
    d: &OperatorTuple,
    cfg: &BoundConfig,
) -> Result<[BoundReport; 2]> {
    for t in [b, c, d] {
        a.check_same_shape(t)?;
    }
    let we_a = cfg.rhs_radius(a)?;
    let we_d = cfg.rhs_radius(d)?;
    let b_cstar = b.abs_pow(1.0)?.add(&c.abs_adjoint_pow(1.0)?)?;
    let c_bstar = c.abs_pow(1.0)?.add(&b.abs_adjoint_pow(1.0)?)?;
    let report = |id: BoundId, keys: [&str; 2], vals: [f64; 2]| {
        let mut components = BTreeMap::new();
        components.insert("we_a".to_string(), we_a);
        components.insert("we_d".to_string(), we_d);
        components.insert(keys[0].to_string(), vals[0]);
        components.insert(keys[1].to_string(), vals[1]);
        BoundReport {
            bound_id: id,
            params: BTreeMap::new(),
            function_pair: None,
            value: two_by_two_closed_form(we_a, we_d, vals[0] * vals[1]),
            components,
            anchor: id.anchor().to_string(),
        }
    };
    Ok([
        report(
            BoundId::Cor6,
            ["we_b_cstar", "we_c_bstar"],
            [cfg.rhs_radius(&b_cstar)?, cfg.rhs_radius(&c_bstar)?],
        ),
        report(BoundId::Cor7, ["norm_b_cstar", "norm_c_bstar"], [b_cstar.op_norm(), c_bstar.op_norm()]),
    ])
}

/// Default `α` sweep for block bounds.
pub fn default_alpha_grid() -> [f64; 5] {
    [0.0, 0.25, 0.5, 0.75, 1.0]
}

/// The zero-diagonal `[[0, J], [J, 0]]` instance with `d = 1`.
pub fn jordan_swap_instance() -> BlockOperatorMatrix {
    let z = OperatorTuple::zeros(1, 2);
    let j = OperatorTuple::single(CMatrix::jordan(2));
    BlockOperatorMatrix::two_by_two(z.clone(), j.clone(), j, z).expect("uniform shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matfun::C64;
    use crate::radii::euclidean_radius;
    use approx::assert_abs_diff_eq;

    fn cfg() -> BoundConfig {
        BoundConfig::default()
    }

    fn cm(entries: Vec<Vec<f64>>) -> ComparisonMatrix {
        ComparisonMatrix { mode: ComparisonMode::Them1Fg, entries, alpha: None, function_pair: None }
    }

    #[test]
    fn assemble_examples() {
        let a = OperatorTuple::single(CMatrix::jordan(2));
        let one = BlockOperatorMatrix::new(vec![vec![a.clone()]]).unwrap();
        assert_eq!(assemble(&one), a);

        let diag = BlockOperatorMatrix::block_diagonal(vec![OperatorTuple::identity(1, 2), a.clone()])
            .unwrap();
        let m = assemble(&diag);
        assert_eq!(m.dim(), 4);
        assert_eq!(m.get(0).get(0, 0), C64::new(1.0, 0.0));
        assert_eq!(m.get(0).get(2, 3), C64::new(1.0, 0.0));
        assert_eq!(m.get(0).get(0, 2), C64::new(0.0, 0.0));

        let z = OperatorTuple::zeros(1, 2);
        let top = BlockOperatorMatrix::two_by_two(z.clone(), a, z.clone(), z).unwrap();
        let m = assemble(&top);
        assert_eq!(m.get(0).get(0, 3), C64::new(1.0, 0.0));
        assert_eq!(m.get(0).frobenius_norm(), 1.0);
    }

    #[test]
    fn rejects_nonuniform_blocks() {
        let a = OperatorTuple::identity(1, 2);
        let b = OperatorTuple::identity(2, 2);
        assert!(BlockOperatorMatrix::new(vec![vec![a.clone(), b], vec![a.clone(), a.clone()]]).is_err());
        assert!(BlockOperatorMatrix::new(vec![vec![a.clone()], vec![a]]).is_err());
        assert!(BlockOperatorMatrix::new(vec![]).is_err());
    }

    #[test]
    fn nonneg_numrad_examples() {
        assert_abs_diff_eq!(nonneg_numrad(&cm(vec![vec![0.0, 1.0], vec![0.0, 0.0]])).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(nonneg_numrad(&cm(vec![vec![1.0, 0.0], vec![0.0, 0.5]])).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(nonneg_numrad(&cm(vec![vec![1.0, 2.0], vec![2.0, 1.0]])).unwrap(), 3.0, epsilon = 1e-14);
        assert!(matches!(
            nonneg_numrad(&cm(vec![vec![1.0, -2.0], vec![0.0, 1.0]])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn comparison_examples() {
        let bm = jordan_swap_instance();
        let c = comparison_matrix(&bm, ComparisonMode::Them1Fg, &ComparisonParams::Pair(SpectralFunctionPair::sqrt()), &cfg())
            .unwrap();
        assert_abs_diff_eq!(c.entries[0][1], 1.0, epsilon = 1e-9);
        assert_eq!(c.entries[1][0], 0.0);
        assert_abs_diff_eq!(c.entries[0][0], 0.0, epsilon = 1e-12);

        let diag = BlockOperatorMatrix::block_diagonal(vec![
            OperatorTuple::identity(1, 2),
            OperatorTuple::single(CMatrix::jordan(2)),
        ])
        .unwrap();
        let c = comparison_matrix(&diag, ComparisonMode::Cor1Alpha, &ComparisonParams::Alpha(0.5), &cfg()).unwrap();
        assert_abs_diff_eq!(c.entries[0][0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.entries[1][1], 0.5, epsilon = 1e-9);
        assert_eq!(c.entries[0][1], 0.0);
    }

    #[test]
    fn symmetrized_mode_halves_off_diagonal() {
        let bm = jordan_swap_instance();
        let upper = comparison_matrix(&bm, ComparisonMode::Cor1Alpha, &ComparisonParams::Alpha(0.3), &cfg()).unwrap();
        let sym = comparison_matrix(&bm, ComparisonMode::Cor4Sym, &ComparisonParams::Alpha(0.3), &cfg()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let t = &upper.entries;
                assert_abs_diff_eq!(sym.entries[i][j], 0.5 * (t[i][j] + t[j][i]), epsilon = 1e-9);
            }
        }
        assert_abs_diff_eq!(nonneg_numrad(&upper).unwrap(), nonneg_numrad(&sym).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn mode_param_mismatch() {
        let bm = jordan_swap_instance();
        assert!(matches!(
            comparison_matrix(&bm, ComparisonMode::Them1Fg, &ComparisonParams::Alpha(0.5), &cfg()),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            comparison_matrix(&bm, ComparisonMode::Cor3AlphaNorm, &ComparisonParams::Pair(SpectralFunctionPair::sqrt()), &cfg()),
            Err(Error::Config(_))
        ));
        assert!(comparison_matrix(&bm, ComparisonMode::Cor1Alpha, &ComparisonParams::Alpha(1.5), &cfg()).is_err());
    }

    #[test]
    fn block_bound_examples() {
        let bm = jordan_swap_instance();
        let r = block_radius_bound(&bm, ComparisonMode::Them1Fg, &ComparisonParams::Pair(SpectralFunctionPair::sqrt()), &cfg())
            .unwrap();
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-9);
        assert!(r.is_consistent());
        let truth = euclidean_radius(&assemble(&bm), &Default::default()).unwrap().value;
        assert_abs_diff_eq!(truth, 0.5, epsilon = 1e-9);

        let diag = BlockOperatorMatrix::block_diagonal(vec![
            OperatorTuple::identity(1, 2),
            OperatorTuple::single(CMatrix::jordan(2)),
        ])
        .unwrap();
        let r = block_radius_bound(&diag, ComparisonMode::Cor3AlphaNorm, &ComparisonParams::Alpha(0.5), &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-9);

        let a = OperatorTuple::pauli();
        let one = BlockOperatorMatrix::new(vec![vec![a.clone()]]).unwrap();
        let r = block_radius_bound(&one, ComparisonMode::Cor4Sym, &ComparisonParams::Alpha(0.5), &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn two_by_two_examples() {
        let z = OperatorTuple::zeros(1, 2);
        let j = OperatorTuple::single(CMatrix::jordan(2));
        let [c6, c7] = two_by_two_bounds(&z, &j, &j, &z, &cfg()).unwrap();
        assert_abs_diff_eq!(c6.value, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(c7.value, 0.5, epsilon = 1e-9);
        assert!(c6.is_consistent() && c7.is_consistent());

        let id = OperatorTuple::identity(1, 2);
        let [c6, c7] = two_by_two_bounds(&id, &z, &z, &j, &cfg()).unwrap();
        assert_abs_diff_eq!(c6.value, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c7.value, 1.0, epsilon = 1e-9);

        let [c6, _] = two_by_two_bounds(&id, &j, &j, &id, &cfg()).unwrap();
        assert_abs_diff_eq!(c6.value, 1.5, epsilon = 1e-9);
        let truth = euclidean_radius(
            &assemble(&BlockOperatorMatrix::two_by_two(id.clone(), j.clone(), j, id).unwrap()),
            &Default::default(),
        )
        .unwrap()
        .value;
        assert!(truth <= 1.5 + 1e-9);
    }

    #[test]
    fn closed_form_matches_comparison_matrix() {
        let z = OperatorTuple::zeros(2, 2);
        let a = OperatorTuple::pauli().mul(&OperatorTuple::identity(3, 2)).unwrap();
        let a = OperatorTuple::new(a.matrices()[..2].to_vec()).unwrap();
        let b = OperatorTuple::new(vec![CMatrix::jordan(2), CMatrix::identity(2)]).unwrap();
        let bm = BlockOperatorMatrix::two_by_two(a.clone(), b.clone(), a.adjoint(), z.clone()).unwrap();
        let [c6, c7] = two_by_two_bounds(&a, &b, &a.adjoint(), &z, &cfg()).unwrap();
        let r4 = block_radius_bound(&bm, ComparisonMode::Cor4Sym, &ComparisonParams::Alpha(0.5), &cfg()).unwrap();
        let r5 = block_radius_bound(&bm, ComparisonMode::Cor5SymNorm, &ComparisonParams::Alpha(0.5), &cfg()).unwrap();
        assert_abs_diff_eq!(c6.value, r4.value, epsilon = 1e-9);
        assert_abs_diff_eq!(c7.value, r5.value, epsilon = 1e-12);
    }
}
