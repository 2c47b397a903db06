use eoradius::blockmat::{self, BlockOperatorMatrix, ComparisonMode, ComparisonParams};
use eoradius::bounds::{self, BoundConfig, BoundReport};
use eoradius::cli::TupleFile;
use eoradius::matfun::{self, SpectralFunctionPair, C64};
use eoradius::radii::{
    euclidean_radius, numerical_radius, objective_gradient, tuple_op_norm, EuclideanRadiusConfig,
    LambdaReduction, NumericalRadiusConfig, OperatorTuple,
};
use eoradius::seed;
use eoradius::verify::{self, run_suite, Family, SuiteConfig};
use proptest::prelude::*;

fn tuple(s: u64, d: usize, dim: usize) -> OperatorTuple {
    verify::random_tuple(&mut seed::rng(s), d, dim, 1.0)
}

fn we(a: &OperatorTuple) -> f64 {
    euclidean_radius(a, &EuclideanRadiusConfig::default()).unwrap().value
}

fn cfg() -> BoundConfig {
    BoundConfig::with_seed(7)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn has_radius_term(r: &BoundReport) -> bool {
    r.components.keys().any(|k| k.starts_with("we"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn abs_powers_multiply(s in any::<u64>(), dim in 1usize..6, p in 0.0f64..2.0, q in 0.0f64..2.0) {
        let m = verify::ginibre(&mut seed::rng(s), dim, 1.0);
        let lhs = matfun::abs_pow(&m, p).unwrap().as_dmatrix() * matfun::abs_pow(&m, q).unwrap().as_dmatrix();
        let rhs = matfun::abs_pow(&m, p + q).unwrap();
        let scale = matfun::op_norm(&m).powf(p + q).max(1.0);
        let diff = (lhs - rhs.as_dmatrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-9 * scale, "{diff}");
    }

    #[test]
    fn spectral_identity_round_trip(s in any::<u64>(), dim in 1usize..7) {
        let h = verify::hermitian(&mut seed::rng(s), dim, 1.0);
        let back = matfun::spectral_apply(&h, |x| x).unwrap();
        prop_assert!(back.max_abs_diff(&h) <= 1e-10 * matfun::op_norm(&h).max(1.0));
    }

    #[test]
    fn d1_matches_numerical_radius(s in any::<u64>(), dim in 1usize..7) {
        let m = verify::ginibre(&mut seed::rng(s), dim, 1.0);
        let w = numerical_radius(&m, &NumericalRadiusConfig::default()).unwrap().value;
        prop_assert!((we(&OperatorTuple::single(m)) - w).abs() <= 1e-6);
    }

    #[test]
    fn sandwich_holds(s in any::<u64>(), d in 1usize..4, dim in 1usize..6) {
        let a = tuple(s, d, dim);
        let r = euclidean_radius(&a, &EuclideanRadiusConfig::default()).unwrap();
        let norm = tuple_op_norm(&a);
        prop_assert!(norm / (2.0 * (d as f64).sqrt()) <= r.value + 1e-12);
        prop_assert!(r.value <= norm + 1e-8);
        prop_assert!((a.objective(&r.argmax).sqrt() - r.certified_lower).abs() <= 1e-12 * norm.max(1.0));
    }

    #[test]
    fn homogeneity(s in any::<u64>(), d in 1usize..4, dim in 2usize..5, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let alpha = C64::new(re, im);
        prop_assume!(alpha.norm() > 1e-3);
        let a = tuple(s, d, dim);
        let lhs = we(&a.scale(alpha));
        prop_assert!((lhs - alpha.norm() * we(&a)).abs() <= 1e-6 * alpha.norm().max(1.0), "{lhs}");
    }

    #[test]
    fn triangle_inequality(s in any::<u64>(), d in 1usize..4, dim in 2usize..5) {
        let (a, b) = (tuple(s, d, dim), tuple(s ^ 0x5555, d, dim));
        prop_assert!(we(&a.add(&b).unwrap()) <= we(&a) + we(&b) + 1e-6);
    }

    #[test]
    fn strategies_agree(s in any::<u64>(), d in 2usize..4, dim in 2usize..5) {
        let a = tuple(s, d, dim);
        let r = euclidean_radius(&a, &EuclideanRadiusConfig { lambda_reduction: LambdaReduction::Always, ..Default::default() }).unwrap();
        let (g, l) = (r.gradient_value.unwrap(), r.lambda_value.unwrap());
        prop_assert!((g - l).abs() <= 1e-5, "gradient {g} vs lambda {l}");
    }

    #[test]
    fn power_property(s in any::<u64>(), d in 1usize..4, dim in 2usize..5, n in 2u32..4) {
        let a = tuple(s, d, dim);
        let lhs = we(&a.pow(n));
        prop_assert!(lhs <= bounds::sqrt_d_power(&a, we(&a), n) + 1e-6);
    }

    #[test]
    fn gradient_matches_central_differences(s in any::<u64>(), d in 1usize..4, dim in 1usize..6) {
        let rng = &mut seed::rng(s);
        let a = verify::random_tuple(rng, d, dim, 1.0);
        let x = verify::random_unit_vector(rng, dim);
        let g = objective_gradient(&a, &x);
        let h = 1e-5;
        for k in 0..dim {
            for (exact, dir) in [(g[k].re, C64::new(h, 0.0)), (g[k].im, C64::new(0.0, h))] {
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[k] += dir;
                xm[k] -= dir;
                let fd = (a.objective(&xp) - a.objective(&xm)) / (2.0 * h);
                let scale = g.iter().map(|z| z.norm()).fold(1e-12, f64::max);
                prop_assert!((fd - exact).abs() <= 1e-5 * scale, "{fd} vs {exact}");
            }
        }
    }

    #[test]
    fn tuple_file_round_trip(s in any::<u64>(), d in 1usize..4, dim in 1usize..5) {
        let a = tuple(s, d, dim);
        let f = TupleFile::from_tuple(&a);
        let back = TupleFile::parse(&f.to_json()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_tuple().unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reports_are_self_consistent_and_homogeneous_at_half(
        s in any::<u64>(), d in 1usize..3, dim in 2usize..4, c in 0.1f64..5.0,
    ) {
        // at t = α = 1/2 every term is homogeneous of degree one
        let a = tuple(s, d, dim);
        let fg = SpectralFunctionPair::sqrt();
        let base = bounds::all_tuple_bounds(&a, 0.5, 0.5, &fg, &cfg()).unwrap();
        let scaled = bounds::all_tuple_bounds(&a.scale(C64::new(0.0, c)), 0.5, 0.5, &fg, &cfg()).unwrap();
        for (r, rs) in base.iter().zip(&scaled) {
            prop_assert!(r.is_consistent() && rs.is_consistent(), "{}", r.bound_id);
            let tol = if has_radius_term(r) { 1e-5 } else { 1e-9 };
            prop_assert!(rel(rs.value, c * r.value) <= tol, "{}: {} vs {}", r.bound_id, rs.value, c * r.value);
        }
    }

    #[test]
    fn polar_terms_scale_with_their_own_powers(
        s in any::<u64>(), d in 1usize..3, dim in 2usize..4, t in 0.0f64..=1.0, c in 0.1f64..5.0,
    ) {
        let a = tuple(s, d, dim);
        let scaled = bounds::polar_power_bounds(&a.scale(C64::new(c, 0.0)), t, &cfg()).unwrap();
        // ‖Σ |cA_k*|^{4(1-t)} + |cA_k|^{4t}‖ = ‖Σ c^{4(1-t)}|A_k*|^{4(1-t)} + c^{4t}|A_k|^{4t}‖
        let mut sum = matfun::CMatrix::zeros(dim).into_dmatrix();
        for m in a.iter() {
            sum += matfun::abs_adjoint_pow(m, 4.0 * (1.0 - t)).unwrap().as_dmatrix() * C64::from(c.powf(4.0 * (1.0 - t)));
            sum += matfun::abs_pow(m, 4.0 * t).unwrap().as_dmatrix() * C64::from(c.powf(4.0 * t));
        }
        let expected = matfun::lambda_max(&matfun::CMatrix::from_dmatrix(sum).unwrap());
        prop_assert!(rel(scaled[0].components["sum_norm"], expected) <= 1e-9);
        prop_assert!(scaled.iter().all(BoundReport::is_consistent));
    }

    #[test]
    fn chains_are_monotone(s in any::<u64>(), d in 1usize..3, dim in 2usize..4, t in 0.0f64..=1.0, alpha in 0.0f64..=1.0) {
        let a = tuple(s, d, dim);
        let fg = SpectralFunctionPair::power(alpha).unwrap();
        for chain in [
            bounds::fg_polar_bounds(&a, t, &fg, &cfg()).unwrap().to_vec(),
            bounds::remark_bound(&a, alpha, t, &cfg()).unwrap().to_vec(),
            bounds::imaginary_combo_bound(&a, t, &cfg()).unwrap().to_vec(),
        ] {
            for w in chain.windows(2) {
                prop_assert!(w[0].value <= w[1].value + 1e-9, "{} > {}", w[0].bound_id, w[1].bound_id);
            }
        }
        let rng = &mut seed::rng(s);
        let (b, c) = verify::commuting_pair(rng, d, dim, 1.0);
        let th9 = bounds::commuting_fg_bound(&b, &c, &fg, &cfg()).unwrap();
        prop_assert!(th9[0].value <= th9[1].value + 1e-9);
    }

    #[test]
    fn sqrt_pair_at_half_is_the_abstract_bound(s in any::<u64>(), d in 1usize..4, dim in 2usize..5) {
        let a = tuple(s, d, dim);
        let fg = bounds::fg_polar_bounds(&a, 0.5, &SpectralFunctionPair::sqrt(), &cfg()).unwrap();
        let abs = bounds::abstract_bound(&a).unwrap();
        prop_assert!(rel(fg[2].value, abs.value) <= 1e-12);
    }

    #[test]
    fn comparison_modes(s in any::<u64>(), n in 2usize..4, d in 1usize..3, alpha in 0.0f64..=1.0) {
        let bm = verify::random_block_matrix(&mut seed::rng(s), n, d, 2, 1.0);
        let lhs = euclidean_radius(&blockmat::assemble(&bm), &EuclideanRadiusConfig::default()).unwrap().certified_lower;
        let pair = ComparisonParams::Pair(SpectralFunctionPair::sqrt());
        let al = ComparisonParams::Alpha(alpha);
        let diag = blockmat::diagonal_radii(&bm, &cfg()).unwrap();
        let mut values = std::collections::BTreeMap::new();
        for mode in ComparisonMode::ALL.iter().copied() {
            let params = if mode.takes_pair() { &pair } else { &al };
            let cm = blockmat::comparison_matrix_with_diag(&bm, mode, params, &cfg(), &diag).unwrap();
            let report = blockmat::comparison_report(&cm).unwrap();
            prop_assert!(report.is_consistent());
            prop_assert!(lhs <= report.value + 1e-8 * report.value.max(1.0), "{mode}: {lhs} > {}", report.value);
            values.insert(mode, report.value);
        }
        prop_assert!(values[&ComparisonMode::Them1Fg] <= values[&ComparisonMode::Cor2FgNorm] + 1e-9);
        prop_assert!(rel(values[&ComparisonMode::Cor1Alpha], values[&ComparisonMode::Cor4Sym]) <= 1e-12);
        prop_assert!(rel(values[&ComparisonMode::Cor3AlphaNorm], values[&ComparisonMode::Cor5SymNorm]) <= 1e-12);
    }

    #[test]
    fn two_by_two_closed_form_matches_comparison_matrix(s in any::<u64>(), d in 1usize..3, m in 2usize..4) {
        let rng = &mut seed::rng(s);
        let blocks: Vec<OperatorTuple> = (0..4).map(|_| verify::random_tuple(rng, d, m, 1.0)).collect();
        let [a, b, c, dd] = <[OperatorTuple; 4]>::try_from(blocks).unwrap();
        let bm = BlockOperatorMatrix::two_by_two(a.clone(), b.clone(), c.clone(), dd.clone()).unwrap();
        let closed = blockmat::two_by_two_bounds(&a, &b, &c, &dd, &cfg()).unwrap();
        let diag = blockmat::diagonal_radii(&bm, &cfg()).unwrap();
        let al = ComparisonParams::Alpha(0.5);
        let cor4 = blockmat::comparison_matrix_with_diag(&bm, ComparisonMode::Cor4Sym, &al, &cfg(), &diag).unwrap();
        let cor5 = blockmat::comparison_matrix_with_diag(&bm, ComparisonMode::Cor5SymNorm, &al, &cfg(), &diag).unwrap();
        prop_assert!(rel(closed[0].value, blockmat::nonneg_numrad(&cor4).unwrap()) <= 1e-12);
        prop_assert!(rel(closed[1].value, blockmat::nonneg_numrad(&cor5).unwrap()) <= 1e-12);
    }
}

#[test]
fn generators_satisfy_preconditions() {
    for s in 0..50u64 {
        let rng = &mut seed::rng(s);
        let p = verify::psd(rng, 4, 1.0);
        assert!(matfun::lambda_min(&p) >= 0.0);
        let (a, b, c) = verify::positive_block(rng, 2, 3, 1.0);
        bounds::check_positive_block(&a, &b, &c).unwrap();
        let (b, c) = verify::commuting_pair(rng, 2, 3, 1.0);
        assert!(bounds::commuting_residual(&b, &c).unwrap().1 <= bounds::COMMUTING_TOL);
    }
}

#[test]
fn stress_scale_suite_passes() {
    let mut cfg = SuiteConfig { trials: 4, scale: 1e3, ..SuiteConfig::default() };
    cfg.families = vec![Family::Tuple, Family::Product, Family::BlockMatrix];
    let records = run_suite(&cfg).unwrap();
    let bad: Vec<_> = records.iter().filter(|r| !r.pass).collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn records_are_schedule_independent() {
    let cfg = SuiteConfig { trials: 3, ..SuiteConfig::default() };
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let parallel = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let a = serial.install(|| run_suite(&cfg).unwrap());
    let b = parallel.install(|| run_suite(&cfg).unwrap());
    assert_eq!(verify::records_digest(&a), verify::records_digest(&b));
    assert_eq!(a, b);
}
