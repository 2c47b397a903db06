use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{commuting_pair, positive_block, random_block_matrix, random_tuple};
use super::{check_lemmas, sort_records, InstanceHasher, VerificationRecord};
use crate::blockmat::{
    assemble, comparison_matrix_with_diag, comparison_report, diagonal_radii,
    jordan_swap_instance, BlockOperatorMatrix, ComparisonMode, ComparisonParams,
};
use crate::bounds::{self, BoundConfig, BoundId, BoundReport};
use crate::error::{Error, Result};
use crate::matfun::{CMatrix, SpectralFunctionPair};
use crate::radii::{euclidean_radius, EuclideanRadiusConfig, OperatorTuple};
use crate::seed;

/// Instance families; every bound of a family is evaluated on the same instance per trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    /// One tuple `A`: sandwich, polar, function-pair, imaginary-combo, quarter and power bounds.
    Tuple,
    /// A pair `B`, `C` bounding `w_e(BC)`.
    Product,
    /// `A, B >= 0` with a positive `[[A, C*], [C, B]]`.
    PositiveBlock,
    /// `B`, `C` with `|B_k| C_k = C_k* |B_k|`.
    Commuting,
    /// `n × n` operator matrices, all comparison modes.
    BlockMatrix,
    /// `[[A, B], [C, D]]` closed forms.
    TwoByTwo,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Tuple,
        Family::Product,
        Family::PositiveBlock,
        Family::Commuting,
        Family::BlockMatrix,
        Family::TwoByTwo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Tuple => "TUPLE",
            Family::Product => "PRODUCT",
            Family::PositiveBlock => "POSITIVE_BLOCK",
            Family::Commuting => "COMMUTING",
            Family::BlockMatrix => "BLOCK_MATRIX",
            Family::TwoByTwo => "TWO_BY_TWO",
        }
    }

    pub fn bound_ids(self) -> &'static [BoundId] {
        use BoundId::*;
        match self {
            Family::Tuple => &[
                Sandwich,
                SandwichLower,
                Th2,
                Th3,
                Th4,
                Th8Radius,
                Th8Norm,
                Th10Radius,
                Th10MaxNorm,
                Th10Norm,
                RemarkAlphaTRadius,
                RemarkAlphaTMaxNorm,
                RemarkAlphaTNorm,
                Abstract,
                Theo1,
                Power,
            ],
            Family::Product => &[Cor11I, Cor11Ii, Cor11Iii, Th7, Th15],
            Family::PositiveBlock => &[Th1I, Th1Ii, Th1Iii],
            Family::Commuting => &[Th9Radius, Th9Norm],
            Family::BlockMatrix => {
                &[Them1Fg, Cor1Alpha, Cor2FgNorm, Cor3AlphaNorm, Cor4Sym, Cor5SymNorm]
            }
            Family::TwoByTwo => &[Cor6, Cor7],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Lemmas,
    Bounds,
    Blockmat,
    All,
}

impl SuiteName {
    pub fn families(self) -> Vec<Family> {
        match self {
            SuiteName::Lemmas => vec![],
            SuiteName::Bounds => {
                vec![Family::Tuple, Family::Product, Family::PositiveBlock, Family::Commuting]
            }
            SuiteName::Blockmat => vec![Family::BlockMatrix, Family::TwoByTwo],
            SuiteName::All => Family::ALL.to_vec(),
        }
    }

    pub fn includes_lemmas(self) -> bool {
        matches!(self, SuiteName::Lemmas | SuiteName::All)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Lemmas => "lemmas",
            SuiteName::Bounds => "bounds",
            SuiteName::Blockmat => "blockmat",
            SuiteName::All => "all",
        }
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemmas" => Ok(SuiteName::Lemmas),
            "bounds" => Ok(SuiteName::Bounds),
            "blockmat" => Ok(SuiteName::Blockmat),
            "all" => Ok(SuiteName::All),
            _ => Err(Error::Config(format!(
                "unknown suite '{s}' (expected lemmas, bounds, blockmat or all)"
            ))),
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub families: Vec<Family>,
    /// Keep only these bounds; `None` keeps all.
    pub bound_ids: Option<BTreeSet<BoundId>>,
    pub trials: usize,
    pub master_seed: u64,
    pub min_dim: usize,
    pub max_dim: usize,
    pub max_d: usize,
    pub block_sizes: Vec<usize>,
    pub block_dim: usize,
    pub block_max_d: usize,
    pub scale: f64,
    /// Optimizer settings for left-hand sides.
    pub lhs_radius: EuclideanRadiusConfig,
    /// Optimizer settings for right-hand-side `w_e` terms (boosted internally).
    pub bounds: BoundConfig,
    /// Replace the first trials of each family by fixed equality instances.
    pub fixtures: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let light = EuclideanRadiusConfig { restarts: 16, lambda_seeds: 8, ..Default::default() };
        Self {
            families: Family::ALL.to_vec(),
            bound_ids: None,
            trials: 1000,
            master_seed: seed::DEFAULT_SEED,
            min_dim: 2,
            max_dim: 5,
            max_d: 3,
            block_sizes: vec![2, 3],
            block_dim: 2,
            block_max_d: 2,
            scale: 1.0,
            lhs_radius: light.clone(),
            bounds: BoundConfig {
                radius: EuclideanRadiusConfig { restarts: 4, lambda_seeds: 4, ..light },
                rhs_boost: 4,
            },
            fixtures: true,
        }
    }
}

impl SuiteConfig {
    pub fn for_suite(name: SuiteName, trials: usize, master_seed: u64) -> Self {
        Self { families: name.families(), trials, master_seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.trials < 1 {
            return bad("trials must be >= 1".into());
        }
        if self.min_dim < 1 || self.min_dim > self.max_dim || self.max_dim > 8 {
            return bad(format!("need 1 <= min_dim <= max_dim <= 8, got {}..={}", self.min_dim, self.max_dim));
        }
        if self.max_d < 1 || self.max_d > 4 || self.block_max_d < 1 || self.block_max_d > 4 {
            return bad("d ranges must lie in 1..=4".into());
        }
        if self.block_sizes.is_empty() || self.block_sizes.iter().any(|&n| n < 1 || n > 4) {
            return bad("block sizes must be non-empty and lie in 1..=4".into());
        }
        if self.block_dim < 1 || self.block_dim > 4 {
            return bad("block dim must lie in 1..=4".into());
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return bad(format!("scale must be finite and > 0, got {}", self.scale));
        }
        self.lhs_radius.validate()?;
        self.bounds.radius.validate()
    }

    fn wants(&self, family: Family) -> bool {
        match &self.bound_ids {
            None => true,
            Some(ids) => family.bound_ids().iter().any(|b| ids.contains(b)),
        }
    }
}

const PARAM_GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
const ALPHA_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Per-trial state: instance seed, derived optimizer settings, shared parameters and digest.
struct Trial<'a> {
    cfg: &'a SuiteConfig,
    index: u64,
    seed: u64,
    rng: ChaCha8Rng,
    lhs_cfg: EuclideanRadiusConfig,
    bcfg: BoundConfig,
    params: BTreeMap<String, f64>,
    digest: String,
    out: Vec<VerificationRecord>,
}

impl<'a> Trial<'a> {
    fn new(cfg: &'a SuiteConfig, family: Family, index: u64) -> Self {
        let seed = seed::mix(seed::mix(cfg.master_seed, seed::label_key(family.name())), index);
        let mut bcfg = cfg.bounds.clone();
        bcfg.radius.seed = seed::mix(seed, 1);
        let lhs_cfg = EuclideanRadiusConfig { seed: seed::mix(seed, 2), ..cfg.lhs_radius.clone() };
        Self {
            cfg,
            index,
            seed,
            rng: seed::rng(seed),
            lhs_cfg,
            bcfg,
            params: BTreeMap::new(),
            digest: String::new(),
            out: Vec::new(),
        }
    }

    fn fixture(&self, k: u64) -> bool {
        self.cfg.fixtures && self.index == k
    }

    fn dim(&mut self) -> usize {
        self.rng.random_range(self.cfg.min_dim..=self.cfg.max_dim)
    }

    fn d(&mut self, max: usize) -> usize {
        self.rng.random_range(1..=max)
    }

    fn pick(&mut self, grid: &[f64]) -> f64 {
        grid[self.rng.random_range(0..grid.len())]
    }

    /// `sqrt` on even trials, `power(α)` on odd ones.
    fn pair(&mut self, alpha: f64) -> SpectralFunctionPair {
        if self.index % 2 == 0 {
            SpectralFunctionPair::sqrt()
        } else {
            self.params.insert("fg_alpha".into(), alpha);
            SpectralFunctionPair::power(alpha).expect("grid α in [0, 1]")
        }
    }

    fn seal(&mut self, tag: &str, tuples: &[&OperatorTuple]) {
        let mut h = InstanceHasher::new(tag);
        for t in tuples {
            h.tuple(t);
        }
        h.params(&self.params);
        self.digest = h.finish();
    }

    fn lhs(&self, a: &OperatorTuple) -> Result<f64> {
        Ok(euclidean_radius(a, &self.lhs_cfg)?.certified_lower)
    }

    fn push(&mut self, id: BoundId, lhs: f64, rhs: f64) {
        let r = VerificationRecord::new(id, self.index, self.seed, lhs, rhs, self.digest.clone())
            .with_params(&self.params);
        self.out.push(r);
    }

    fn push_reports<'r>(&mut self, lhs: f64, reports: impl IntoIterator<Item = &'r BoundReport>) {
        for r in reports {
            self.push(r.bound_id, lhs, r.value);
        }
    }
}

fn tuple_family(tr: &mut Trial) -> Result<()> {
    let a = if tr.fixture(0) {
        OperatorTuple::identity(1, 2)
    } else if tr.fixture(1) {
        OperatorTuple::zeros(2, 3)
    } else {
        let (dim, d) = (tr.dim(), tr.d(tr.cfg.max_d));
        random_tuple(&mut tr.rng, d, dim, tr.cfg.scale)
    };
    let t = tr.pick(&PARAM_GRID);
    let alpha = tr.pick(&PARAM_GRID);
    let n = 2 + (tr.index % 2) as u32;
    tr.params.insert("t".into(), t);
    tr.params.insert("alpha".into(), alpha);
    tr.params.insert("n".into(), n as f64);
    let fg = tr.pair(alpha);
    tr.seal("tuple", &[&a]);

    let bcfg = tr.bcfg.clone();
    // boosted estimate of w_e(A): left side of every bound, right side of the power bound
    let we = euclidean_radius(&a, &bcfg.radius.boosted(bcfg.rhs_boost))?.certified_lower;
    let [upper, lower] = bounds::sandwich_reports(&a)?;
    tr.push(BoundId::Sandwich, we, upper.value);
    tr.push(BoundId::SandwichLower, lower.value, we);
    tr.push_reports(we, &bounds::polar_power_bounds(&a, t, &bcfg)?);
    tr.push_reports(we, &bounds::imaginary_combo_bound(&a, t, &bcfg)?);
    tr.push_reports(we, &bounds::fg_polar_bounds(&a, t, &fg, &bcfg)?);
    tr.push_reports(we, &bounds::remark_bound(&a, alpha, t, &bcfg)?);
    tr.push_reports(we, [&bounds::abstract_bound(&a)?]);
    tr.push_reports(we, [&bounds::quarter_polar_bound(&a, t, &bcfg)?]);
    let pow = bounds::sqrt_d_power(&a, we, n);
    let lhs = tr.lhs(&a.pow(n))?;
    tr.push(BoundId::Power, lhs, pow);
    Ok(())
}

fn product_family(tr: &mut Trial) -> Result<()> {
    let (b, c) = if tr.fixture(0) {
        (OperatorTuple::identity(1, 2), OperatorTuple::identity(1, 2))
    } else if tr.fixture(1) {
        let j = OperatorTuple::single(CMatrix::jordan(2));
        (j.clone(), j)
    } else {
        let (dim, d) = (tr.dim(), tr.d(tr.cfg.max_d));
        let b = random_tuple(&mut tr.rng, d, dim, tr.cfg.scale);
        (b, random_tuple(&mut tr.rng, d, dim, tr.cfg.scale))
    };
    tr.seal("product", &[&b, &c]);
    let bcfg = tr.bcfg.clone();
    let lhs = tr.lhs(&b.mul(&c)?)?;
    tr.push_reports(lhs, &bounds::product_bounds(&b, &c, &bcfg)?);
    tr.push_reports(lhs, [&bounds::imaginary_combo_product_bound(&b, &c, &bcfg)?]);
    tr.push_reports(lhs, [&bounds::product_quarter_bound(&b, &c, &bcfg)?]);
    Ok(())
}

fn positive_block_family(tr: &mut Trial) -> Result<()> {
    let (a, b, c) = if tr.fixture(0) {
        let id = OperatorTuple::identity(1, 2);
        (id.clone(), id.clone(), id)
    } else {
        let (dim, d) = (tr.dim(), tr.d(tr.cfg.max_d));
        positive_block(&mut tr.rng, d, dim, tr.cfg.scale)
    };
    tr.seal("positive-block", &[&a, &b, &c]);
    let bcfg = tr.bcfg.clone();
    let lhs = tr.lhs(&c)?;
    tr.push_reports(lhs, &bounds::block_dominance_bounds(&a, &b, &c, &bcfg)?);
    Ok(())
}

fn commuting_family(tr: &mut Trial) -> Result<()> {
    let (b, c) = if tr.fixture(0) {
        (OperatorTuple::identity(1, 2), OperatorTuple::identity(1, 2))
    } else if tr.fixture(1) {
        let j = CMatrix::jordan(2);
        let abs_j = crate::matfun::abs_pow(&j, 1.0)?;
        (OperatorTuple::single(j), OperatorTuple::single(abs_j))
    } else {
        let (dim, d) = (tr.dim(), tr.d(tr.cfg.max_d));
        commuting_pair(&mut tr.rng, d, dim, tr.cfg.scale)
    };
    let alpha = tr.pick(&PARAM_GRID);
    let fg = tr.pair(alpha);
    tr.seal("commuting", &[&b, &c]);
    let bcfg = tr.bcfg.clone();
    let lhs = tr.lhs(&b.mul(&c)?)?;
    tr.push_reports(lhs, &bounds::commuting_fg_bound(&b, &c, &fg, &bcfg)?);
    Ok(())
}

fn block_family(tr: &mut Trial) -> Result<()> {
    let bm = if tr.fixture(0) {
        jordan_swap_instance()
    } else {
        let sizes = tr.cfg.block_sizes.clone();
        let n = sizes[tr.rng.random_range(0..sizes.len())];
        let d = tr.d(tr.cfg.block_max_d);
        random_block_matrix(&mut tr.rng, n, d, tr.cfg.block_dim, tr.cfg.scale)
    };
    let alpha = tr.pick(&ALPHA_GRID);
    tr.params.insert("alpha".into(), alpha);
    tr.params.insert("n".into(), bm.n() as f64);
    let fg = tr.pair(alpha);
    let flat: Vec<&OperatorTuple> = bm.blocks().iter().flatten().collect();
    tr.seal("block-matrix", &flat);
    let bcfg = tr.bcfg.clone();
    let lhs = tr.lhs(&assemble(&bm))?;
    let diag = diagonal_radii(&bm, &bcfg)?;
    for mode in ComparisonMode::ALL {
        let params = if mode.takes_pair() {
            ComparisonParams::Pair(fg.clone())
        } else {
            ComparisonParams::Alpha(alpha)
        };
        let cm = comparison_matrix_with_diag(&bm, mode, &params, &bcfg, &diag)?;
        tr.push_reports(lhs, [&comparison_report(&cm)?]);
    }
    Ok(())
}

fn two_by_two_family(tr: &mut Trial) -> Result<()> {
    let [a, b, c, d] = if tr.fixture(0) {
        let z = OperatorTuple::zeros(1, 2);
        let j = OperatorTuple::single(CMatrix::jordan(2));
        [z.clone(), j.clone(), j, z]
    } else {
        let m = tr.rng.random_range(tr.cfg.min_dim..=tr.cfg.min_dim + 1);
        let k = tr.d(tr.cfg.max_d);
        let s = tr.cfg.scale;
        std::array::from_fn(|_| random_tuple(&mut tr.rng, k, m, s))
    };
    tr.seal("two-by-two", &[&a, &b, &c, &d]);
    let bcfg = tr.bcfg.clone();
    let bm = BlockOperatorMatrix::two_by_two(a.clone(), b.clone(), c.clone(), d.clone())?;
    let lhs = tr.lhs(&assemble(&bm))?;
    tr.push_reports(lhs, &crate::blockmat::two_by_two_bounds(&a, &b, &c, &d, &bcfg)?);
    Ok(())
}

fn run_trial(cfg: &SuiteConfig, family: Family, index: u64) -> Result<Vec<VerificationRecord>> {
    let mut tr = Trial::new(cfg, family, index);
    let res = match family {
        Family::Tuple => tuple_family(&mut tr),
        Family::Product => product_family(&mut tr),
        Family::PositiveBlock => positive_block_family(&mut tr),
        Family::Commuting => commuting_family(&mut tr),
        Family::BlockMatrix => block_family(&mut tr),
        Family::TwoByTwo => two_by_two_family(&mut tr),
    };
    res.map_err(|e| {
        Error::Numerical(format!("{family} trial {index} (seed {}): {e}", tr.seed))
    })?;
    Ok(tr.out)
}

/// Runs every configured family for `cfg.trials` trials; records are canonically sorted.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationRecord>> {
    cfg.validate()?;
    let jobs: Vec<(Family, u64)> = cfg
        .families
        .iter()
        .copied()
        .filter(|&f| cfg.wants(f))
        .flat_map(|f| (0..cfg.trials as u64).map(move |i| (f, i)))
        .collect();
    let batches: Vec<Vec<VerificationRecord>> = jobs
        .into_par_iter()
        .map(|(f, i)| run_trial(cfg, f, i))
        .collect::<Result<_>>()?;
    let mut out: Vec<VerificationRecord> = batches
        .into_iter()
        .flatten()
        .filter(|r| cfg.bound_ids.as_ref().is_none_or(|ids| ids.contains(&r.bound_id)))
        .collect();
    sort_records(&mut out);
    Ok(out)
}

/// A named suite with default settings: lemma checks and/or bound families.
pub fn run_named_suite(
    name: SuiteName,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<VerificationRecord>> {
    let mut out = if name.includes_lemmas() { check_lemmas(trials, master_seed) } else { vec![] };
    let families = name.families();
    if !families.is_empty() {
        out.extend(run_suite(&SuiteConfig::for_suite(name, trials, master_seed))?);
    }
    sort_records(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(families: Vec<Family>, trials: usize) -> SuiteConfig {
        SuiteConfig { families, trials, ..SuiteConfig::default() }
    }

    #[test]
    fn every_family_passes_and_is_deterministic() {
        let cfg = small(Family::ALL.to_vec(), 6);
        let r1 = run_suite(&cfg).unwrap();
        let failing: Vec<_> = r1.iter().filter(|r| !r.pass).collect();
        assert!(failing.is_empty(), "{failing:?}");
        let ids: BTreeSet<BoundId> = r1.iter().map(|r| r.bound_id).collect();
        for f in Family::ALL {
            for id in f.bound_ids() {
                assert!(ids.contains(id), "no records for {id}");
            }
        }
        assert_eq!(r1, run_suite(&cfg).unwrap());
    }

    #[test]
    fn filter_by_bound_id() {
        let cfg = SuiteConfig {
            bound_ids: Some([BoundId::Th15].into_iter().collect()),
            ..small(Family::ALL.to_vec(), 4)
        };
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|r| r.bound_id == BoundId::Th15 && r.pass));
    }

    #[test]
    fn zero_tuple_sandwich_has_zero_slack() {
        let cfg = small(vec![Family::Tuple], 2);
        let r = run_suite(&cfg).unwrap();
        let z = r.iter().find(|r| r.bound_id == BoundId::Sandwich && r.trial == 1).unwrap();
        assert_eq!((z.lhs, z.rhs, z.slack), (0.0, 0.0, 0.0));
        assert!(z.pass);
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig { trials: 0, ..Default::default() }.validate().is_err());
        assert!(SuiteConfig { max_dim: 9, ..Default::default() }.validate().is_err());
        assert!(SuiteConfig { max_d: 5, ..Default::default() }.validate().is_err());
        assert!("nosuch".parse::<SuiteName>().is_err());
        assert_eq!("all".parse::<SuiteName>().unwrap(), SuiteName::All);
    }
}
