//! Upper bounds for the Euclidean operator radius as auditable calculators.
//!
//! Each calculator returns [`BoundReport`]s carrying every intermediate norm and
//! radius that enters the formula, so the value can be recomputed independently
//! with [`BoundReport::recompute`]. `w_e` terms on the right-hand side come from
//! the optimizer and are therefore lower estimates of the true term; the
//! computed bound can only be weaker than the exact one.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matfun::{self, CMatrix, SpectralFunctionPair};
use crate::radii::{euclidean_radius, EuclideanRadiusConfig, OperatorTuple};

macro_rules! bound_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Identity of a checked inequality.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum BoundId {
            $($variant),*
        }

        impl BoundId {
            pub const ALL: &'static [BoundId] = &[$(BoundId::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(BoundId::$variant => $name),*
                }
            }
        }
    };
}

bound_ids! {
    Sandwich => "SANDWICH",
    SandwichLower => "SANDWICH_LOWER",
    Th1I => "TH1_I",
    Th1Ii => "TH1_II",
    Th1Iii => "TH1_III",
    Cor11I => "COR1_1_I",
    Cor11Ii => "COR1_1_II",
    Cor11Iii => "COR1_1_III",
    Th2 => "TH2",
    Th3 => "TH3",
    Th4 => "TH4",
    Th9Radius => "TH9_RADIUS",
    Th9Norm => "TH9_NORM",
    Th10Radius => "TH10_RADIUS",
    Th10MaxNorm => "TH10_MAXNORM",
    Th10Norm => "TH10_NORM",
    RemarkAlphaTRadius => "REMARK_ALPHA_T_RADIUS",
    RemarkAlphaTMaxNorm => "REMARK_ALPHA_T_MAXNORM",
    RemarkAlphaTNorm => "REMARK_ALPHA_T_NORM",
    Abstract => "ABSTRACT",
    Th7 => "TH7",
    Th8Radius => "TH8_RADIUS",
    Th8Norm => "TH8_NORM",
    Th15 => "TH15",
    Theo1 => "THEO1",
    Power => "POWER",
    Them1Fg => "THEM1_FG",
    Cor1Alpha => "COR1_ALPHA",
    Cor2FgNorm => "COR2_FG_NORM",
    Cor3AlphaNorm => "COR3_ALPHA_NORM",
    Cor4Sym => "COR4_SYM",
    Cor5SymNorm => "COR5_SYM_NORM",
    Cor6 => "COR6",
    Cor7 => "COR7",
    McCarthy => "MCCARTHY",
    Buzano => "BUZANO",
    Bohr => "BOHR",
    PositiveBlockSchwarz => "POSITIVE_BLOCK_SCHWARZ",
    MixedSchwarz => "MIXED_SCHWARZ",
}

impl BoundId {
    /// The inequality in words; the audit anchor stored in reports.
    pub fn anchor(self) -> &'static str {
        use BoundId::*;
        match self {
            Sandwich => "w_e(A) <= ‖A‖",
            SandwichLower => "‖A‖/(2√d) <= w_e(A)",
            Th1I => "w_e(C) <= sqrt(½‖Σ(A_k²+B_k²)‖) when A,B >= 0 and [[A,C*],[C,B]] >= 0",
            Th1Ii => "w_e(C) <= sqrt(½‖A‖‖B‖ + (√d/2) w_e(AB)) when A,B >= 0 and [[A,C*],[C,B]] >= 0",
            Th1Iii => "w_e(C) <= sqrt(¼‖Σ(A_k²+B_k²)‖ + (√d/2) w_e(AB)) when A,B >= 0 and [[A,C*],[C,B]] >= 0",
            Cor11I => "w_e(BC) <= sqrt(½‖Σ(|B_k*|⁴+|C_k|⁴)‖)",
            Cor11Ii => "w_e(BC) <= sqrt(½‖BB*‖‖C*C‖ + (√d/2) w_e(B(CB)*C))",
            Cor11Iii => "w_e(BC) <= sqrt(¼‖Σ(|B_k*|⁴+|C_k|⁴)‖ + (√d/2) w_e(B(CB)*C))",
            Th2 => "w_e(A) <= sqrt(½‖Σ(|A_k*|^{4(1-t)}+|A_k|^{4t})‖)",
            Th3 => "w_e(A) <= sqrt(½‖|A*|^{2(1-t)}‖‖|A|^{2t}‖ + (√d/2) w_e(|A|^{2t}|A*|^{2(1-t)}))",
            Th4 => "w_e(A) <= sqrt(¼‖Σ(|A_k*|^{4(1-t)}+|A_k|^{4t})‖ + (√d/2) w_e(|A|^{2t}|A*|^{2(1-t)}))",
            Th9Radius => "w_e(BC) <= (1/√2) max_k r(C_k) w_e(f²(|B|)+i g²(|B*|)) when |B_k|C_k = C_k*|B_k|",
            Th9Norm => "w_e(BC) <= (1/√2) max_k r(C_k) sqrt(‖Σ(f⁴(|B_k|)+g⁴(|B_k*|))‖) when |B_k|C_k = C_k*|B_k|",
            Th10Radius => "w_e(A) <= (1/√2) max_k ‖A_k‖^t w_e(f²(|A|^{1-t})+i g²(|A*|^{1-t}))",
            Th10MaxNorm => "w_e(A) <= (1/√2) max_k ‖A_k‖^t sqrt(‖Σ(f⁴(|A_k|^{1-t})+g⁴(|A_k*|^{1-t}))‖)",
            Th10Norm => "w_e(A) <= (1/√2) ‖A‖^t sqrt(‖Σ(f⁴(|A_k|^{1-t})+g⁴(|A_k*|^{1-t}))‖)",
            RemarkAlphaTRadius => "w_e(A) <= (1/√2) max_k ‖A_k‖^t w_e(|A|^{2α(1-t)}+i|A*|^{2(1-α)(1-t)})",
            RemarkAlphaTMaxNorm => "w_e(A) <= (1/√2) max_k ‖A_k‖^t sqrt(‖Σ(|A_k|^{4α(1-t)}+|A_k*|^{4(1-α)(1-t)})‖)",
            RemarkAlphaTNorm => "w_e(A) <= (1/√2) ‖A‖^t sqrt(‖Σ(|A_k|^{4α(1-t)}+|A_k*|^{4(1-α)(1-t)})‖)",
            Abstract => "w_e(A) <= (1/√2) ‖A‖^{1/2} sqrt(‖Σ(|A_k|+|A_k*|)‖)",
            Th7 => "w_e(BC) <= (1/√2) w_e(|C|²+i|B*|²)",
            Th8Radius => "w_e(A) <= (1/√2) w_e(|A|^{2t}+i|A*|^{2(1-t)})",
            Th8Norm => "w_e(A) <= (1/√2) ‖Σ(|A_k*|^{4(1-t)}+|A_k|^{4t})‖^{1/2}",
            Th15 => "w_e(BC) <= (√d/4) w_e(|B|+|C*|) w_e(|C|+|B*|)",
            Theo1 => "w_e(A) <= (√d/4) w_e(|A|^{1-t}+|A|^t) w_e(|A|^t+|A*|^{1-t})",
            Power => "w_e(A^n) <= √d w_e(A)^n",
            Them1Fg => "w_e([A_ij]) <= w([a_ij]), a_ij = sqrt(w_e(f²(|A_ji|)+g²(|A_ij*|)) w_e(f²(|A_ij|)+g²(|A_ji*|))) for i<j",
            Cor1Alpha => "w_e([A_ij]) <= w([b_ij]), b_ij = w_e(|A_ji|^{2α}+|A_ij*|^{2(1-α)})^{1/2} w_e(|A_ij|^{2α}+|A_ji*|^{2(1-α)})^{1/2} for i<j",
            Cor2FgNorm => "w_e([A_ij]) <= w([c_ij]), c_ij = ‖f²(|A_ji|)+g²(|A_ij*|)‖^{1/2} ‖f²(|A_ij|)+g²(|A_ji*|)‖^{1/2} for i<j",
            Cor3AlphaNorm => "w_e([A_ij]) <= w([d_ij]), d_ij = ‖|A_ji|^{2α}+|A_ij*|^{2(1-α)}‖^{1/2} ‖|A_ij|^{2α}+|A_ji*|^{2(1-α)}‖^{1/2} for i<j",
            Cor4Sym => "w_e([A_ij]) <= w([e_ij]), e_ij = ½ b_ij-type radius product for i≠j",
            Cor5SymNorm => "w_e([A_ij]) <= w([f_ij]), f_ij = ½ d_ij-type norm product for i≠j",
            Cor6 => "w_e([[A,B],[C,D]]) <= ½(w_e(A)+w_e(D)+sqrt((w_e(A)-w_e(D))²+β²)), β² = w_e(|B|+|C*|) w_e(|C|+|B*|)",
            Cor7 => "w_e([[A,B],[C,D]]) <= ½(w_e(A)+w_e(D)+sqrt((w_e(A)-w_e(D))²+γ²)), γ² = ‖|B|+|C*|‖ ‖|C|+|B*|‖",
            McCarthy => "<Ax,x>^p <= <A^p x,x> for A >= 0, ‖x‖ = 1, p >= 1",
            Buzano => "|<x,z><z,y>| <= (‖x‖‖y‖+|<x,y>|)/2 for ‖z‖ = 1",
            Bohr => "(Σ a_k)^p <= n^{p-1} Σ a_k^p for a_k >= 0, p >= 1",
            PositiveBlockSchwarz => "Σ_k |<C_k x,y>|² <= Σ_k <A_k x,x><B_k y,y> when [[A_k,C_k*],[C_k,B_k]] >= 0",
            MixedSchwarz => "|<ABx,y>| <= r(B) ‖f(|A|)x‖ ‖g(|A*|)y‖ when |A|B = B*|A|",
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .iter()
            .copied()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown bound id '{s}'")))
    }
}

impl Serialize for BoundId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for BoundId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One evaluated bound with its full audit trail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub params: BTreeMap<String, f64>,
    pub function_pair: Option<String>,
    pub value: f64,
    pub components: BTreeMap<String, f64>,
    pub anchor: String,
}

impl BoundReport {
    fn new(bound_id: BoundId) -> Self {
        Self {
            bound_id,
            params: BTreeMap::new(),
            function_pair: None,
            value: 0.0,
            components: BTreeMap::new(),
            anchor: bound_id.anchor().to_string(),
        }
    }

    fn param(mut self, name: &str, v: f64) -> Self {
        self.params.insert(name.into(), v);
        self
    }

    fn pair(mut self, fg: &SpectralFunctionPair) -> Self {
        self.function_pair = Some(fg.label().to_string());
        self
    }

    fn comp(mut self, name: &str, v: f64) -> Self {
        self.components.insert(name.into(), v);
        self
    }

    /// Computes `value` from the components; fails on non-finite or negative results.
    fn finish(mut self) -> Result<Self> {
        self.value = self.recompute()?;
        if !self.value.is_finite() || self.value < 0.0 {
            return Err(Error::Numerical(format!(
                "{} evaluated to {}",
                self.bound_id, self.value
            )));
        }
        if let Some((k, v)) = self.components.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Numerical(format!("{}: component {k} = {v}", self.bound_id)));
        }
        Ok(self)
    }

    fn get(&self, name: &str) -> Result<f64> {
        self.components
            .get(name)
            .or_else(|| self.params.get(name))
            .copied()
            .ok_or_else(|| Error::Domain(format!("{}: missing component '{name}'", self.bound_id)))
    }

    /// Re-evaluates the bound formula from `components` and `params` alone.
    pub fn recompute(&self) -> Result<f64> {
        use BoundId::*;
        let c = |n: &str| self.get(n);
        let sqrt_d = || c("d").map(f64::sqrt);
        let v = match self.bound_id {
            Sandwich => c("tuple_norm")?,
            SandwichLower => c("tuple_norm")? / (2.0 * sqrt_d()?),
            Th1I | Cor11I | Th2 => (0.5 * c("sum_norm")?).sqrt(),
            Th1Ii => (0.5 * c("norm_a")? * c("norm_b")? + 0.5 * sqrt_d()? * c("we_product")?).sqrt(),
            Cor11Ii => {
                (0.5 * c("norm_bbstar")? * c("norm_cstarc")? + 0.5 * sqrt_d()? * c("we_middle")?)
                    .sqrt()
            }
            Th3 => {
                (0.5 * c("norm_adj_pow")? * c("norm_abs_pow")? + 0.5 * sqrt_d()? * c("we_product")?)
                    .sqrt()
            }
            Th1Iii | Th4 => (0.25 * c("sum_norm")? + 0.5 * sqrt_d()? * c("we_product")?).sqrt(),
            Cor11Iii => (0.25 * c("sum_norm")? + 0.5 * sqrt_d()? * c("we_middle")?).sqrt(),
            Th9Radius => FRAC_1_SQRT_2 * c("max_spectral_radius")? * c("we_fg")?,
            Th9Norm => FRAC_1_SQRT_2 * c("max_spectral_radius")? * c("sum_norm")?.sqrt(),
            Th10Radius | RemarkAlphaTRadius => FRAC_1_SQRT_2 * c("max_norm_pow_t")? * c("we_fg")?,
            Th10MaxNorm | RemarkAlphaTMaxNorm => {
                FRAC_1_SQRT_2 * c("max_norm_pow_t")? * c("sum_norm")?.sqrt()
            }
            Th10Norm | RemarkAlphaTNorm => {
                FRAC_1_SQRT_2 * c("tuple_norm_pow_t")? * c("sum_norm")?.sqrt()
            }
            Abstract => FRAC_1_SQRT_2 * c("tuple_norm")?.sqrt() * c("sum_norm")?.sqrt(),
            Th7 | Th8Radius => FRAC_1_SQRT_2 * c("we_combo")?,
            Th8Norm => FRAC_1_SQRT_2 * c("sum_norm")?.sqrt(),
            Th15 | Theo1 => 0.25 * sqrt_d()? * c("we_first")? * c("we_second")?,
            Power => sqrt_d()? * c("we_base")?.powf(c("n")?),
            Them1Fg | Cor1Alpha | Cor2FgNorm | Cor3AlphaNorm | Cor4Sym | Cor5SymNorm => {
                let n = c("n")? as usize;
                let mut entries = vec![vec![0.0; n]; n];
                for (i, row) in entries.iter_mut().enumerate() {
                    for (j, e) in row.iter_mut().enumerate() {
                        *e = c(&entry_key(i, j))?;
                    }
                }
                crate::blockmat::symmetric_part_lambda_max(&entries)
            }
            Cor6 => {
                let beta_sq = c("we_b_cstar")? * c("we_c_bstar")?;
                two_by_two_closed_form(c("we_a")?, c("we_d")?, beta_sq)
            }
            Cor7 => {
                let gamma_sq = c("norm_b_cstar")? * c("norm_c_bstar")?;
                two_by_two_closed_form(c("we_a")?, c("we_d")?, gamma_sq)
            }
            McCarthy | Buzano | Bohr | PositiveBlockSchwarz | MixedSchwarz => {
                return Err(Error::Unsupported(format!(
                    "{} is a lemma check, not a bound calculator",
                    self.bound_id
                )))
            }
        };
        Ok(v)
    }

    /// Self-consistency: the stored value matches the recomputation to 1e-12 (relative).
    pub fn is_consistent(&self) -> bool {
        match self.recompute() {
            Ok(v) => (v - self.value).abs() <= 1e-12 * self.value.abs().max(1.0),
            Err(_) => false,
        }
    }
}

pub(crate) fn entry_key(i: usize, j: usize) -> String {
    format!("a[{}][{}]", i + 1, j + 1)
}

/// `½(a + d + sqrt((a-d)² + s))`, the top eigenvalue of `[[a, √s/2], [√s/2, d]]`.
pub(crate) fn two_by_two_closed_form(a: f64, d: f64, s: f64) -> f64 {
    0.5 * (a + d + ((a - d).powi(2) + s).sqrt())
}

/// Optimizer settings for `w_e` evaluations inside the calculators.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundConfig {
    pub radius: EuclideanRadiusConfig,
    /// Restart multiplier for `w_e` terms on the right-hand side.
    pub rhs_boost: usize,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self { radius: EuclideanRadiusConfig::default(), rhs_boost: 4 }
    }
}

impl BoundConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { radius: EuclideanRadiusConfig::with_seed(seed), ..Self::default() }
    }

    /// Best `w_e` estimate of a right-hand-side term.
    pub fn rhs_radius(&self, a: &OperatorTuple) -> Result<f64> {
        Ok(euclidean_radius(a, &self.radius.boosted(self.rhs_boost))?.value)
    }
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")));
    }
    Ok(())
}

/// `‖Σ_k X_k‖` for a tuple of PSD matrices.
fn psd_sum_norm(x: &OperatorTuple) -> f64 {
    matfun::lambda_max(&x.sum()).max(0.0)
}

/// `‖Σ_k (X_k + Y_k)‖`.
fn psd_pair_sum_norm(x: &OperatorTuple, y: &OperatorTuple) -> Result<f64> {
    Ok(psd_sum_norm(&x.add(y)?))
}

fn max_norm_pow(a: &OperatorTuple, t: f64) -> f64 {
    a.iter().map(|m| matfun::op_norm(m).powf(t)).fold(0.0, f64::max)
}

fn ensure_chain(reports: &[BoundReport]) -> Result<()> {
    for w in reports.windows(2) {
        if w[0].value > w[1].value + 1e-9 * w[1].value.max(1.0) {
            return Err(Error::Numerical(format!(
                "chain out of order: {} = {} > {} = {}",
                w[0].bound_id, w[0].value, w[1].bound_id, w[1].value
            )));
        }
    }
    Ok(())
}

/// The two sides of `‖A‖/(2√d) <= w_e(A) <= ‖A‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
}

pub fn sandwich(a: &OperatorTuple) -> Sandwich {
    let norm = a.op_norm();
    Sandwich { lower: norm / (2.0 * (a.d() as f64).sqrt()), upper: norm }
}

/// Both sides of the sandwich as reports (`SANDWICH` upper, `SANDWICH_LOWER`).
pub fn sandwich_reports(a: &OperatorTuple) -> Result<[BoundReport; 2]> {
    let norm = a.op_norm();
    let d = a.d() as f64;
    Ok([
        BoundReport::new(BoundId::Sandwich).comp("tuple_norm", norm).comp("d", d).finish()?,
        BoundReport::new(BoundId::SandwichLower).comp("tuple_norm", norm).comp("d", d).finish()?,
    ])
}

/// Relative PSD tolerance for inputs that must be positive.
pub const PSD_TOL: f64 = 1e-10;

fn check_psd(m: &CMatrix, what: &str, k: usize) -> Result<()> {
    let scale = matfun::op_norm(m);
    if !m.is_hermitian(matfun::HERMITIAN_TOL) {
        return Err(Error::Precondition(format!("{what}_{k} is not Hermitian")));
    }
    let lmin = matfun::lambda_min(m);
    if lmin < -PSD_TOL * scale {
        return Err(Error::Precondition(format!(
            "{what}_{k} is not positive: min eigenvalue {lmin:.3e}"
        )));
    }
    Ok(())
}

/// `[[A, C*], [C, B]]` as a `2n × 2n` matrix.
fn two_by_two_block(a: &CMatrix, c: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.dim();
    let ch = c.adjoint();
    let m = nalgebra::DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => a.get(i, j),
        (true, false) => ch.get(i, j - n),
        (false, true) => c.get(i - n, j),
        (false, false) => b.get(i - n, j - n),
    });
    CMatrix::wrap(m)
}

/// Checks the hypotheses of the positive-block bounds and returns the PSD-projected `A`, `B`.
pub fn check_positive_block(
    a: &OperatorTuple,
    b: &OperatorTuple,
    c: &OperatorTuple,
) -> Result<(OperatorTuple, OperatorTuple)> {
    a.check_same_shape(b)?;
    a.check_same_shape(c)?;
    for k in 0..a.d() {
        check_psd(a.get(k), "A", k)?;
        check_psd(b.get(k), "B", k)?;
        check_psd(&two_by_two_block(a.get(k), c.get(k), b.get(k)), "[[A,C*],[C,B]]", k)?;
    }
    Ok((a.map(matfun::psd_project), b.map(matfun::psd_project)))
}

/// Bounds on `w_e(C)` when `A, B >= 0` and every `[[A_k, C_k*], [C_k, B_k]] >= 0`.
pub fn block_dominance_bounds(
    a: &OperatorTuple,
    b: &OperatorTuple,
    c: &OperatorTuple,
    cfg: &BoundConfig,
) -> Result<[BoundReport; 3]> {
    let (a, b) = check_positive_block(a, b, c)?;
    let d = a.d() as f64;
    let squares = a.mul(&a)?.add(&b.mul(&b)?)?;
    let sum_norm = psd_sum_norm(&squares);
    let we_product = cfg.rhs_radius(&a.mul(&b)?)?;
    let (norm_a, norm_b) = (a.op_norm(), b.op_norm());
    Ok([
        BoundReport::new(BoundId::Th1I).comp("sum_norm", sum_norm).finish()?,
        BoundReport::new(BoundId::Th1Ii)
            .comp("norm_a", norm_a)
            .comp("norm_b", norm_b)
            .comp("we_product", we_product)
            .comp("d", d)
            .finish()?,
        BoundReport::new(BoundId::Th1Iii)
            .comp("sum_norm", sum_norm)
            .comp("we_product", we_product)
            .comp("d", d)
            .finish()?,
    ])
}

/// Bounds on `w_e(BC)` from the positive block `[[BB*, BC], [C*B*, C*C]]`.
pub fn product_bounds(
    b: &OperatorTuple,
    c: &OperatorTuple,
    cfg: &BoundConfig,
) -> Result<[BoundReport; 3]> {
    b.check_same_shape(c)?;
    let d = b.d() as f64;
    let sum_norm = psd_pair_sum_norm(&b.abs_adjoint_pow(4.0)?, &c.abs_pow(4.0)?)?;
    let bbstar = b.mul(&b.adjoint())?;
    let cstarc = c.adjoint().mul(c)?;
    // B (CB)* C = B B* C* C, entrywise
    let middle = bbstar.mul(&cstarc)?;
    let we_middle = cfg.rhs_radius(&middle)?;
    Ok([
        BoundReport::new(BoundId::Cor11I).comp("sum_norm", sum_norm).finish()?,
        BoundReport::new(BoundId::Cor11Ii)
            .comp("norm_bbstar", bbstar.op_norm())
            .comp("norm_cstarc", cstarc.op_norm())
            .comp("we_middle", we_middle)
            .comp("d", d)
            .finish()?,
        BoundReport::new(BoundId::Cor11Iii)
            .comp("sum_norm", sum_norm)
            .comp("we_middle", we_middle)
            .comp("d", d)
            .finish()?,
    ])
}

/// Polar-decomposition bounds on `w_e(A)` for `t ∈ [0, 1]` (`TH2`, `TH3`, `TH4`).
pub fn polar_power_bounds(
    a: &OperatorTuple,
    t: f64,
    cfg: &BoundConfig,
) -> Result<[BoundReport; 3]> {
    check_unit_interval("t", t)?;
    let d = a.d() as f64;
    let sum_norm = psd_pair_sum_norm(&a.abs_adjoint_pow(4.0 * (1.0 - t))?, &a.abs_pow(4.0 * t)?)?;
    let adj_pow = a.abs_adjoint_pow(2.0 * (1.0 - t))?;
    let abs_pow = a.abs_pow(2.0 * t)?;
    let we_product = cfg.rhs_radius(&abs_pow.mul(&adj_pow)?)?;
    Ok([
        BoundReport::new(BoundId::Th2).param("t", t).comp("sum_norm", sum_norm).finish()?,
        BoundReport::new(BoundId::Th3)
            .param("t", t)
            .comp("norm_adj_pow", adj_pow.op_norm())
            .comp("norm_abs_pow", abs_pow.op_norm())
            .comp("we_product", we_product)
            .comp("d", d)
            .finish()?,
        BoundReport::new(BoundId::Th4)
            .param("t", t)
            .comp("sum_norm", sum_norm)
            .comp("we_product", we_product)
            .comp("d", d)
            .finish()?,
    ])
}

/// Relative tolerance on `‖|B_k|C_k - C_k*|B_k|‖`.
pub const COMMUTING_TOL: f64 = 1e-8;

/// Largest residual `‖|B_k|C_k - C_k*|B_k|‖` relative to `‖|B_k|‖‖C_k‖`.
pub fn commuting_residual(b: &OperatorTuple, c: &OperatorTuple) -> Result<(usize, f64)> {
    b.check_same_shape(c)?;
    let mut worst = (0, 0.0);
    for k in 0..b.d() {
        let abs_b = matfun::abs_pow(b.get(k), 1.0)?;
        let ck = c.get(k);
        let res = (&(&abs_b * ck) - &(&ck.adjoint() * &abs_b)).frobenius_norm();
        let scale = abs_b.frobenius_norm() * ck.frobenius_norm();
        let rel = if scale > 0.0 { res / scale } else { res };
        if rel > worst.1 {
            worst = (k, rel);
        }
    }
    Ok(worst)
}

/// Chained bounds on `w_e(BC)` under `|B_k|C_k = C_k*|B_k|` (`TH9_RADIUS <= TH9_NORM`).
pub fn commuting_fg_bound(
    b: &OperatorTuple,
    c: &OperatorTuple,
    fg: &SpectralFunctionPair,
    cfg: &BoundConfig,
) -> Result<[BoundReport; 2]> {
    let (k, res) = commuting_residual(b, c)?;
    if res > COMMUTING_TOL {
        return Err(Error::Precondition(format!(
            "|B_{k}| C_{k} != C_{k}* |B_{k}|: relative residual {res:.3e}"
        )));
    }
    let mut max_r = 0.0f64;
    for m in c.iter() {
        max_r = max_r.max(matfun::spectral_radius_mat(m)?);
    }
    let f2 = b.map(|m| fg.f_pow_abs(m, 2));
    let g2 = b.map(|m| fg.g_pow_abs_adjoint(m, 2));
    let we_fg = cfg.rhs_radius(&f2.add_imag(&g2)?)?;
    let sum_norm = psd_pair_sum_norm(&b.map(|m| fg.f_pow_abs(m, 4)), &b.map(|m| fg.g_pow_abs_adjoint(m, 4)))?;
    let reports = [
        BoundReport::new(BoundId::Th9Radius)
            .pair(fg)
            .comp("max_spectral_radius", max_r)
            .comp("we_fg", we_fg)
            .finish()?,
        BoundReport::new(BoundId::Th9Norm)
            .pair(fg)
            .comp("max_spectral_radius", max_r)
            .comp("sum_norm", sum_norm)
            .finish()?,
    ];
    ensure_chain(&reports)?;
    Ok(reports)
}

/// Chained function-pair bounds on `w_e(A)` for `t ∈ [0, 1]`
/// (`TH10_RADIUS <= TH10_MAXNORM <= TH10_NORM`).
pub fn fg_polar_bounds(
    a: &OperatorTuple,
    t: f64,
    fg: &SpectralFunctionPair,
    cfg: &BoundConfig,
) -> Result<[BoundReport; 3]> {
    check_unit_interval("t", t)?;
    let s = 1.0 - t;
    // f^p(|A_k|^{1-t}) straight from the singular values of A_k
    let f_of = |p: i32| a.map(|m| matfun::abs_apply(m, |x| fg.f(x.powf(s)).powi(p)));
    let g_of = |p: i32| a.map(|m| matfun::abs_adjoint_apply(m, |x| fg.g(x.powf(s)).powi(p)));
    let we_fg = cfg.rhs_radius(&f_of(2).add_imag(&g_of(2))?)?;
    let sum_norm = psd_pair_sum_norm(&f_of(4), &g_of(4))?;
    chain_reports(
        [BoundId::Th10Radius, BoundId::Th10MaxNorm, BoundId::Th10Norm],
        a,
        t,
        we_fg,
        sum_norm,
        |r| r.pair(fg),
    )
}

fn chain_reports(
    ids: [BoundId; 3],
    a: &OperatorTuple,
    t: f64,
    we_fg: f64,
    sum_norm: f64,
    decorate: impl Fn(BoundReport) -> BoundReport,
) -> Result<[BoundReport; 3]> {
    let max_norm_t = max_norm_pow(a, t);
    let tuple_norm_t = a.op_norm().powf(t);
    let reports = [
        decorate(BoundReport::new(ids[0]).param("t", t))
            .comp("max_norm_pow_t", max_norm_t)
            .comp("we_fg", we_fg)
            .finish()?,
        decorate(BoundReport::new(ids[1]).param("t", t))
            .comp("max_norm_pow_t", max_norm_t)
            .comp("sum_norm", sum_norm)
            .finish()?,
        decorate(BoundReport::new(ids[2]).param("t", t))
            .comp("tuple_norm_pow_t", tuple_norm_t)
            .comp("sum_norm", sum_norm)
            .finish()?,
    ];
    ensure_chain(&reports)?;
    Ok(reports)
}

/// The power-pair specialization `f = λ^α`, `g = λ^{1-α}`, evaluated with explicit
/// powers `|A|^{2α(1-t)}` and `|A*|^{2(1-α)(1-t)}`.
pub fn remark_bound(
    a: &OperatorTuple,
    alpha: f64,
    t: f64,
    cfg: &BoundConfig,
) -> Result<[BoundReport; 3]> {
    check_unit_interval("α", alpha)?;
    check_unit_interval("t", t)?;
    let (p, q) = (alpha * (1.0 - t), (1.0 - alpha) * (1.0 - t));
    let we_fg = cfg.rhs_radius(&a.abs_pow(2.0 * p)?.add_imag(&a.abs_adjoint_pow(2.0 * q)?)?)?;
    let sum_norm = psd_pair_sum_norm(&a.abs_pow(4.0 * p)?, &a.abs_adjoint_pow(4.0 * q)?)?;
    chain_reports(
        [BoundId::RemarkAlphaTRadius, BoundId::RemarkAlphaTMaxNorm, BoundId::RemarkAlphaTNorm],
        a,
        t,
        we_fg,
        sum_norm,
        |r| r.param("alpha", alpha),
    )
}

/// `w_e(A) <= (1/√2) ‖A‖^{1/2} sqrt(‖Σ(|A_k| + |A_k*|)‖)`.
pub fn abstract_bound(a: &OperatorTuple) -> Result<BoundReport> {
    let sum_norm = psd_pair_sum_norm(&a.abs_pow(1.0)?, &a.abs_adjoint_pow(1.0)?)?;
    BoundReport::new(BoundId::Abstract)
        .comp("tuple_norm", a.op_norm())
        .comp("sum_norm", sum_norm)
        .finish()
}

/// `w_e(BC) <= (1/√2) w_e(|C|² + i|B*|²)`.
pub fn imaginary_combo_product_bound(
    b: &OperatorTuple,
    c: &OperatorTuple,
    cfg: &BoundConfig,
) -> Result<BoundReport> {
    b.check_same_shape(c)?;
    let combo = c.abs_pow(2.0)?.add_imag(&b.abs_adjoint_pow(2.0)?)?;
    BoundReport::new(BoundId::Th7).comp("we_combo", cfg.rhs_radius(&combo)?).finish()
}

/// `TH8_RADIUS <= TH8_NORM` on `w_e(A)` for `t ∈ [0, 1]`.
pub fn imaginary_combo_bound(
    a: &OperatorTuple,
    t: f64,
    cfg: &BoundConfig,
) -> Result<[BoundReport; 2]> {
    check_unit_interval("t", t)?;
    let combo = a.abs_pow(2.0 * t)?.add_imag(&a.abs_adjoint_pow(2.0 * (1.0 - t))?)?;
    let sum_norm = psd_pair_sum_norm(&a.abs_adjoint_pow(4.0 * (1.0 - t))?, &a.abs_pow(4.0 * t)?)?;
    let reports = [
        BoundReport::new(BoundId::Th8Radius)
            .param("t", t)
            .comp("we_combo", cfg.rhs_radius(&combo)?)
            .finish()?,
        BoundReport::new(BoundId::Th8Norm).param("t", t).comp("sum_norm", sum_norm).finish()?,
    ];
    ensure_chain(&reports)?;
    Ok(reports)
}

/// `w_e(BC) <= (√d/4) w_e(|B| + |C*|) w_e(|C| + |B*|)`.
pub fn product_quarter_bound(
    b: &OperatorTuple,
    c: &OperatorTuple,
    cfg: &BoundConfig,
) -> Result<BoundReport> {
    b.check_same_shape(c)?;
    let first = b.abs_pow(1.0)?.add(&c.abs_adjoint_pow(1.0)?)?;
    let second = c.abs_pow(1.0)?.add(&b.abs_adjoint_pow(1.0)?)?;
    BoundReport::new(BoundId::Th15)
        .comp("we_first", cfg.rhs_radius(&first)?)
        .comp("we_second", cfg.rhs_radius(&second)?)
        .comp("d", b.d() as f64)
        .finish()
}

/// `w_e(A) <= (√d/4) w_e(|A|^{1-t} + |A|^t) w_e(|A|^t + |A*|^{1-t})`.
pub fn quarter_polar_bound(a: &OperatorTuple, t: f64, cfg: &BoundConfig) -> Result<BoundReport> {
    check_unit_interval("t", t)?;
    let abs_t = a.abs_pow(t)?;
    let first = a.abs_pow(1.0 - t)?.add(&abs_t)?;
    let second = abs_t.add(&a.abs_adjoint_pow(1.0 - t)?)?;
    BoundReport::new(BoundId::Theo1)
        .param("t", t)
        .comp("we_first", cfg.rhs_radius(&first)?)
        .comp("we_second", cfg.rhs_radius(&second)?)
        .comp("d", a.d() as f64)
        .finish()
}

/// Right-hand side of `w_e(A^n) <= √d w_e(A)^n`.
pub fn power_bound(a: &OperatorTuple, n: u32, cfg: &BoundConfig) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::Domain("power must be a positive integer".into()));
    }
    BoundReport::new(BoundId::Power)
        .param("n", n as f64)
        .comp("we_base", cfg.rhs_radius(a)?)
        .comp("d", a.d() as f64)
        .finish()
}

/// `√d · w^n`, the right side of the power bound for a known `w = w_e(A)`.
pub fn sqrt_d_power(a: &OperatorTuple, we: f64, n: u32) -> f64 {
    (a.d() as f64).sqrt() * we.powi(n as i32)
}

/// Default sweep grid for `t` and `α`: `{0, 0.1, …, 1}`.
pub fn default_parameter_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// Every single-tuple bound on `w_e(A)` at one `(t, α)` and function pair.
pub fn all_tuple_bounds(
    a: &OperatorTuple,
    t: f64,
    alpha: f64,
    fg: &SpectralFunctionPair,
    cfg: &BoundConfig,
) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    out.extend(sandwich_reports(a)?.into_iter().take(1));
    out.extend(polar_power_bounds(a, t, cfg)?);
    out.extend(fg_polar_bounds(a, t, fg, cfg)?);
    out.extend(remark_bound(a, alpha, t, cfg)?);
    out.push(abstract_bound(a)?);
    out.extend(imaginary_combo_bound(a, t, cfg)?);
    out.push(quarter_polar_bound(a, t, cfg)?);
    Ok(out)
}
