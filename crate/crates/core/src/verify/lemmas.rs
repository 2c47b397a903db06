use std::collections::BTreeMap;

use rand::Rng;

use super::generate::{commuting_pair, positive_block, psd, random_unit_vector};
use super::{InstanceHasher, VerificationRecord};
use crate::bounds::BoundId;
use crate::matfun::{self, CMatrix, SpectralFunctionPair, C64};
use crate::seed;

const MCCARTHY_POWERS: [f64; 3] = [1.5, 2.0, 3.0];

fn inner(x: &[C64], y: &[C64]) -> C64 {
    // <x, y> = Σ x_i conj(y_i)
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn random_vector(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
    let scale = rng.random_range(0.1..10.0);
    random_unit_vector(rng, dim).into_iter().map(|z| z * scale).collect()
}

fn trial_seed(master: u64, id: BoundId, trial: u64) -> u64 {
    seed::mix(seed::mix(master, seed::label_key(id.name())), trial)
}

fn record(
    id: BoundId,
    trial: u64,
    tseed: u64,
    lhs: f64,
    rhs: f64,
    params: BTreeMap<String, f64>,
    hasher: InstanceHasher,
) -> VerificationRecord {
    let mut h = hasher;
    h.params(&params);
    VerificationRecord::new(id, trial, tseed, lhs, rhs, h.finish()).with_params(&params)
}

fn mccarthy(trial: u64, tseed: u64) -> VerificationRecord {
    let rng = &mut seed::rng(tseed);
    let dim = rng.random_range(2..=5);
    let a = psd(rng, dim, 1.0);
    let x = random_unit_vector(rng, dim);
    let p = MCCARTHY_POWERS[(trial % 3) as usize];
    let ap = matfun::psd_pow(&a, p).expect("projected PSD input");
    let lhs = a.quadratic_form(&x).re.max(0.0).powf(p);
    let rhs = ap.quadratic_form(&x).re;
    let mut h = InstanceHasher::new("mccarthy");
    h.matrix(&a);
    record(BoundId::McCarthy, trial, tseed, lhs, rhs, BTreeMap::from([("p".into(), p)]), h)
}

fn buzano(trial: u64, tseed: u64) -> VerificationRecord {
    let rng = &mut seed::rng(tseed);
    let dim = rng.random_range(2..=5);
    let x = random_vector(rng, dim);
    let y = random_vector(rng, dim);
    let z = random_unit_vector(rng, dim);
    let lhs = (inner(&x, &z) * inner(&z, &y)).norm();
    let rhs = 0.5 * (norm(&x) * norm(&y) + inner(&x, &y).norm());
    let mut h = InstanceHasher::new("buzano");
    for v in [&x, &y, &z] {
        v.iter().for_each(|c| {
            h.f64(c.re).f64(c.im);
        });
    }
    record(BoundId::Buzano, trial, tseed, lhs, rhs, BTreeMap::new(), h)
}

fn bohr(trial: u64, tseed: u64) -> VerificationRecord {
    let rng = &mut seed::rng(tseed);
    let n = rng.random_range(1..=6);
    let a: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.0..10.0) })
        .collect();
    let p = rng.random_range(1.0..4.0);
    let lhs = a.iter().sum::<f64>().powf(p);
    let rhs = (n as f64).powf(p - 1.0) * a.iter().map(|v| v.powf(p)).sum::<f64>();
    let mut h = InstanceHasher::new("bohr");
    a.iter().for_each(|v| {
        h.f64(*v);
    });
    record(BoundId::Bohr, trial, tseed, lhs, rhs, BTreeMap::from([("p".into(), p)]), h)
}

fn positive_block_schwarz(trial: u64, tseed: u64) -> VerificationRecord {
    let rng = &mut seed::rng(tseed);
    let dim = rng.random_range(2..=5);
    let d = rng.random_range(1..=3);
    let (a, b, c) = positive_block(rng, d, dim, 1.0);
    let x = random_vector(rng, dim);
    let y = random_vector(rng, dim);
    let lhs: f64 = c.iter().map(|ck| inner(&ck.apply(&x), &y).norm_sqr()).sum();
    let rhs: f64 = a
        .iter()
        .zip(b.iter())
        .map(|(ak, bk)| ak.quadratic_form(&x).re * bk.quadratic_form(&y).re)
        .sum();
    let mut h = InstanceHasher::new("positive-block");
    h.tuple(&a).tuple(&b).tuple(&c);
    record(BoundId::PositiveBlockSchwarz, trial, tseed, lhs, rhs, BTreeMap::new(), h)
}

fn mixed_schwarz(trial: u64, tseed: u64) -> VerificationRecord {
    let rng = &mut seed::rng(tseed);
    let dim = rng.random_range(2..=5);
    let (a, b) = commuting_pair(rng, 1, dim, 1.0);
    let (a, b): (&CMatrix, &CMatrix) = (a.get(0), b.get(0));
    let mut params = BTreeMap::new();
    let fg = if trial % 2 == 0 {
        SpectralFunctionPair::sqrt()
    } else {
        let alpha = rng.random_range(0..=10) as f64 / 10.0;
        params.insert("alpha".to_string(), alpha);
        SpectralFunctionPair::power(alpha).expect("α in [0, 1]")
    };
    let x = random_vector(rng, dim);
    let y = random_vector(rng, dim);
    let lhs = inner(&(a * b).apply(&x), &y).norm();
    let r = matfun::spectral_radius_mat(b).expect("finite input");
    let fx = fg.f_pow_abs(a, 1).apply(&x);
    let gy = fg.g_pow_abs_adjoint(a, 1).apply(&y);
    let rhs = r * norm(&fx) * norm(&gy);
    let mut h = InstanceHasher::new("mixed-schwarz");
    h.matrix(a).matrix(b).str(fg.label());
    record(BoundId::MixedSchwarz, trial, tseed, lhs, rhs, params, h)
}

/// One record per lemma per trial, `5 · trials` in total, canonically sorted.
pub fn check_lemmas(trials: usize, master_seed: u64) -> Vec<VerificationRecord> {
    type Check = fn(u64, u64) -> VerificationRecord;
    let checks: [(BoundId, Check); 5] = [
        (BoundId::McCarthy, mccarthy),
        (BoundId::Buzano, buzano),
        (BoundId::Bohr, bohr),
        (BoundId::PositiveBlockSchwarz, positive_block_schwarz),
        (BoundId::MixedSchwarz, mixed_schwarz),
    ];
    let mut out = Vec::with_capacity(5 * trials);
    for (id, check) in checks {
        for t in 0..trials as u64 {
            out.push(check(t, trial_seed(master_seed, id, t)));
        }
    }
    super::sort_records(&mut out);
    out
}
