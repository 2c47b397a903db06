//! Random-instance generators, lemma checks, the inequality suite and tightness summaries.
//!
//! Every record compares a certified lower bound of the left-hand side with the
//! right-hand side of an inequality, so a failing record is an implementation
//! bug and never a counterexample.

mod generate;
mod lemmas;
mod suite;
mod tightness;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use generate::{
    commuting_pair, generate, ginibre, haar_unitary, hermitian, low_rank_ginibre, positive_block,
    psd, random_block_matrix, random_tuple, random_unit_vector, Generated, GeneratorKind,
    GeneratorSpec,
};
pub use lemmas::check_lemmas;
pub use suite::{run_named_suite, run_suite, Family, SuiteConfig, SuiteName};
pub use tightness::{tightness_report, BoundStats, TightnessReport, POLICY};

use crate::bounds::BoundId;
use crate::matfun::CMatrix;
use crate::radii::OperatorTuple;

/// Relative slack tolerance: a record passes iff `rhs - lhs >= -SLACK_TOL · max(1, rhs)`.
pub const SLACK_TOL: f64 = 1e-8;

/// Ratio above which an instance counts as an equality case.
pub const EQUALITY_RATIO: f64 = 1.0 - 1e-6;

/// One inequality evaluated on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub bound_id: BoundId,
    pub trial: u64,
    /// Seed that regenerates the instance.
    pub trial_seed: u64,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub instance_digest: String,
}

impl VerificationRecord {
    pub fn new(
        bound_id: BoundId,
        trial: u64,
        trial_seed: u64,
        lhs: f64,
        rhs: f64,
        instance_digest: String,
    ) -> Self {
        let slack = rhs - lhs;
        Self {
            bound_id,
            trial,
            trial_seed,
            params: BTreeMap::new(),
            lhs,
            rhs,
            slack,
            pass: passes(lhs, rhs),
            instance_digest,
        }
    }

    pub fn with_params(mut self, params: &BTreeMap<String, f64>) -> Self {
        self.params = params.clone();
        self
    }

    /// `lhs / rhs`, with `0/0 = 1`.
    pub fn ratio(&self) -> f64 {
        if self.rhs > 0.0 {
            self.lhs / self.rhs
        } else if self.lhs <= 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    }
}

pub fn passes(lhs: f64, rhs: f64) -> bool {
    let slack = rhs - lhs;
    slack.is_finite() && slack >= -SLACK_TOL * rhs.abs().max(1.0)
}

/// Incremental SHA-256 over instance data.
#[derive(Clone, Default)]
pub struct InstanceHasher(Sha256);

impl InstanceHasher {
    pub fn new(tag: &str) -> Self {
        let mut h = Self(Sha256::new());
        h.str(tag);
        h
    }

    pub fn str(&mut self, s: &str) -> &mut Self {
        self.0.update((s.len() as u64).to_le_bytes());
        self.0.update(s.as_bytes());
        self
    }

    pub fn f64(&mut self, v: f64) -> &mut Self {
        self.0.update(v.to_bits().to_le_bytes());
        self
    }

    pub fn matrix(&mut self, m: &CMatrix) -> &mut Self {
        self.0.update((m.dim() as u64).to_le_bytes());
        for z in m.entries_col_major() {
            self.f64(z.re).f64(z.im);
        }
        self
    }

    pub fn tuple(&mut self, a: &OperatorTuple) -> &mut Self {
        self.0.update((a.d() as u64).to_le_bytes());
        for m in a.iter() {
            self.matrix(m);
        }
        self
    }

    pub fn params(&mut self, p: &BTreeMap<String, f64>) -> &mut Self {
        for (k, v) in p {
            self.str(k).f64(*v);
        }
        self
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

/// Digest of a whole record set, for determinism checks.
pub fn records_digest(records: &[VerificationRecord]) -> String {
    let mut h = InstanceHasher::new("records");
    for r in records {
        h.str(r.bound_id.name()).str(&r.instance_digest).params(&r.params).f64(r.lhs).f64(r.rhs);
        h.f64(r.trial as f64).f64(r.trial_seed as f64);
    }
    h.finish()
}

/// Sorts records canonically by bound id name, then trial index.
pub fn sort_records(records: &mut [VerificationRecord]) {
    records.sort_by(|a, b| {
        a.bound_id
            .name()
            .cmp(b.bound_id.name())
            .then(a.trial.cmp(&b.trial))
            .then(a.instance_digest.cmp(&b.instance_digest))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule_is_relative() {
        assert!(passes(1.0, 1.0));
        assert!(passes(1.0 + 0.5e-8, 1.0));
        assert!(!passes(1.0 + 2e-8, 1.0));
        assert!(passes(1e3 * (1.0 + 0.5e-8), 1e3));
        assert!(!passes(1e3 * (1.0 + 2e-8), 1e3));
        assert!(passes(0.0, 0.0));
        assert!(!passes(f64::NAN, 1.0));
    }

    #[test]
    fn ratio_conventions() {
        let r = VerificationRecord::new(BoundId::Sandwich, 0, 0, 0.0, 0.0, String::new());
        assert_eq!(r.ratio(), 1.0);
        assert_eq!(r.slack, 0.0);
        assert!(r.pass);
        let r = VerificationRecord::new(BoundId::Sandwich, 0, 0, 0.5, 2.0, String::new());
        assert_eq!(r.ratio(), 0.25);
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = OperatorTuple::pauli();
        let mut h1 = InstanceHasher::new("x");
        h1.tuple(&a);
        let mut h2 = InstanceHasher::new("x");
        h2.tuple(&a);
        let (d1, d2) = (h1.finish(), h2.finish());
        assert_eq!(d1, d2);
        let mut h3 = InstanceHasher::new("x");
        h3.tuple(&a.adjoint().scale(crate::C64::new(2.0, 0.0)));
        assert_ne!(d1, h3.finish());
    }
}
