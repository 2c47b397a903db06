use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{VerificationRecord, EQUALITY_RATIO};
use crate::error::{Error, Result};

/// Stated in every report header.
pub const POLICY: &str = "lhs values are certified lower bounds (objective values attained at explicit unit vectors); \
rhs values are the bound formulas with optimizer-estimated w_e terms at boosted restarts. \
A failing record is treated as an implementation bug, not as a counterexample. \
Equality instances in the first trials of each family (identity tuples, the zero tuple, the (J, J*) block) are fixtures chosen for this suite.";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundStats {
    pub count: usize,
    pub failures: usize,
    pub mean_ratio: f64,
    pub median_ratio: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Instances with `lhs / rhs > 1 - 1e-6`.
    pub equality_count: usize,
    /// Most negative relative slack `(rhs - lhs) / max(1, rhs)`.
    pub worst_relative_slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub policy: String,
    pub per_bound: BTreeMap<String, BoundStats>,
    /// `win_rate[a][b]`: share of shared instances where `a` has the smaller right side; ties count ½.
    pub win_rate: BTreeMap<String, BTreeMap<String, f64>>,
    /// Number of shared instances behind each `win_rate` entry.
    pub shared: BTreeMap<String, BTreeMap<String, usize>>,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Per-bound ratio statistics and pairwise win rates on shared instances.
///
/// Two records share an instance when they have the same digest and the same
/// left side, i.e. they bound the same quantity on the same input.
pub fn tightness_report(records: &[VerificationRecord]) -> Result<TightnessReport> {
    if records.is_empty() {
        return Err(Error::Empty("tightness report needs at least one record".into()));
    }
    let mut by_bound: BTreeMap<String, Vec<&VerificationRecord>> = BTreeMap::new();
    for r in records {
        by_bound.entry(r.bound_id.name().to_string()).or_default().push(r);
    }
    let per_bound = by_bound
        .into_iter()
        .map(|(id, rs)| {
            let mut ratios: Vec<f64> = rs.iter().map(|r| r.ratio()).collect();
            ratios.sort_by(f64::total_cmp);
            let stats = BoundStats {
                count: rs.len(),
                failures: rs.iter().filter(|r| !r.pass).count(),
                mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
                median_ratio: median(&ratios),
                min_ratio: ratios[0],
                max_ratio: ratios[ratios.len() - 1],
                equality_count: ratios.iter().filter(|&&x| x > EQUALITY_RATIO).count(),
                worst_relative_slack: rs
                    .iter()
                    .map(|r| r.slack / r.rhs.abs().max(1.0))
                    .fold(f64::INFINITY, f64::min),
            };
            (id, stats)
        })
        .collect();

    let mut groups: HashMap<(&str, u64), Vec<&VerificationRecord>> = HashMap::new();
    for r in records {
        groups.entry((r.instance_digest.as_str(), r.lhs.to_bits())).or_default().push(r);
    }
    let mut wins: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    let mut shared: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for group in groups.values() {
        for a in group {
            for b in group {
                if a.bound_id == b.bound_id {
                    continue;
                }
                let tol = 1e-12 * a.rhs.abs().max(b.rhs.abs()).max(1.0);
                let w = if (a.rhs - b.rhs).abs() <= tol {
                    0.5
                } else if a.rhs < b.rhs {
                    1.0
                } else {
                    0.0
                };
                let (ka, kb) = (a.bound_id.name().to_string(), b.bound_id.name().to_string());
                *wins.entry(ka.clone()).or_default().entry(kb.clone()).or_default() += w;
                *shared.entry(ka).or_default().entry(kb).or_default() += 1;
            }
        }
    }
    for (a, row) in wins.iter_mut() {
        for (b, w) in row.iter_mut() {
            *w /= shared[a][b] as f64;
        }
    }
    Ok(TightnessReport { policy: POLICY.to_string(), per_bound, win_rate: wins, shared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundId;

    fn rec(id: BoundId, lhs: f64, rhs: f64, digest: &str) -> VerificationRecord {
        VerificationRecord::new(id, 0, 0, lhs, rhs, digest.into())
    }

    #[test]
    fn singleton_statistics() {
        let r = tightness_report(&[rec(BoundId::Th2, 0.5, 2.0, "x")]).unwrap();
        let s = &r.per_bound["TH2"];
        assert_eq!((s.count, s.mean_ratio, s.median_ratio, s.min_ratio), (1, 0.25, 0.25, 0.25));
        assert_eq!(s.equality_count, 0);
        assert!(r.win_rate.is_empty());
    }

    #[test]
    fn win_rates_sum_to_one() {
        let records = vec![
            rec(BoundId::Th2, 1.0, 2.0, "a"),
            rec(BoundId::Th4, 1.0, 1.5, "a"),
            rec(BoundId::Th2, 1.0, 1.2, "b"),
            rec(BoundId::Th4, 1.0, 1.4, "b"),
            rec(BoundId::Th2, 1.0, 1.3, "c"),
            rec(BoundId::Th4, 1.0, 1.3, "c"),
        ];
        let r = tightness_report(&records).unwrap();
        let (ab, ba) = (r.win_rate["TH2"]["TH4"], r.win_rate["TH4"]["TH2"]);
        assert!((ab + ba - 1.0).abs() < 1e-15);
        assert!((ab - 0.5).abs() < 1e-15);
        assert_eq!(r.shared["TH2"]["TH4"], 3);
    }

    #[test]
    fn equality_and_empty() {
        let r = tightness_report(&[rec(BoundId::Th7, 1.0, 1.0, "i")]).unwrap();
        assert_eq!(r.per_bound["TH7"].equality_count, 1);
        assert!(tightness_report(&[]).is_err());
    }
}
