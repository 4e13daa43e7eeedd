use proptest::prelude::*;

use opdyn::builder::{build, verify_fu, BlockPlan};
use opdyn::experiment::{ExperimentConfig, Scenario};
use opdyn::orbits::{density_stats, Bitset, HittingSet, IntPolynomial};
use opdyn::symbol::{apply_adjoint, PolySymbol};
use opdyn::vector::axpy;
use opdyn::{CoefVec, Complex64, LogScalar, ScalingSeq, ShiftOp, Side, WeightSeq};

fn complex() -> impl Strategy<Value = Complex64> {
    (-30.0f64..30.0, -3.1f64..3.1).prop_map(|(l, t)| Complex64::from_polar(l.exp(), t))
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * a.norm().max(b.norm())
}

fn sparse(side: Side, lo: i64, hi: i64) -> impl Strategy<Value = CoefVec> {
    prop::collection::btree_map(lo..=hi, (-5.0f64..5.0, -3.1f64..3.1), 1..6).prop_map(move |m| {
        CoefVec::from_log(side, m.into_iter().map(|(k, (l, t))| (k, LogScalar::from_log(l, t)))).unwrap()
    })
}

fn same_vec(a: &CoefVec, b: &CoefVec, tol: f64) -> bool {
    let ka: Vec<i64> = a.iter().map(|(k, _)| k).collect();
    let kb: Vec<i64> = b.iter().map(|(k, _)| k).collect();
    ka == kb
        && ka.iter().all(|&k| {
            let (x, y) = (a.get(k), b.get(k));
            (x.log_mag() - y.log_mag()).abs() <= tol && (x.to_complex() / y.to_complex()).arg().abs() <= tol
        })
}

fn weights() -> impl Strategy<Value = (Side, WeightSeq)> {
    prop_oneof![
        (0.2f64..3.0).prop_map(|c| (Side::Unilateral, WeightSeq::ConstantW { c })),
        Just((Side::Unilateral, WeightSeq::SqrtRatio)),
        Just((Side::Bilateral, WeightSeq::StepBilateral)),
        Just((Side::Bilateral, WeightSeq::InverseStepBilateral)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn logscalar_arithmetic_matches_complex(a in complex(), b in complex()) {
        let (la, lb) = (LogScalar::from_complex(a), LogScalar::from_complex(b));
        prop_assert!(close((la * lb).to_complex(), a * b));
        prop_assert!(close((la / lb).to_complex(), a / b));
        prop_assert!(close(la.conj().to_complex(), a.conj()));
        let s = la.add(&lb).to_complex();
        prop_assert!((s - (a + b)).norm() <= 1e-9 * (a.norm() + b.norm()));
    }

    #[test]
    fn logscalar_powers(a in complex(), n in 0u64..40) {
        let got = LogScalar::from_complex(a).powi(n);
        let want_log = n as f64 * a.norm().ln();
        prop_assert!((got.log_mag() - want_log).abs() <= 1e-9 * want_log.abs().max(1.0));
    }

    #[test]
    fn shift_powers_compose((side, w) in weights(), a in 0u64..30, b in 0u64..30, seed in 0i64..20) {
        let op = ShiftOp::new(side, w).unwrap();
        let lo = if side == Side::Bilateral { -20 } else { 1 };
        let x = CoefVec::from_log(side, [(lo + seed, LogScalar::from_real(1.5)), (lo + seed + 7, LogScalar::from_log(-1.0, 0.4))]).unwrap();
        let split = op.power_apply(a, &op.power_apply(b, &x).unwrap()).unwrap();
        let whole = op.power_apply(a + b, &x).unwrap();
        prop_assert!(same_vec(&split, &whole, 1e-9));
    }

    #[test]
    fn and_shifted_matches_naive(
        a in prop::collection::vec(any::<bool>(), 1..400),
        b in prop::collection::vec(any::<bool>(), 1..400),
        shift in 0usize..200,
    ) {
        let mut x = Bitset::new(a.len());
        let mut y = Bitset::new(b.len());
        a.iter().enumerate().filter(|(_, &v)| v).for_each(|(i, _)| x.set(i));
        b.iter().enumerate().filter(|(_, &v)| v).for_each(|(i, _)| y.set(i));
        x.and_shifted(&y, shift);
        for i in 0..a.len() {
            let want = a[i] && b.get(i + shift).copied().unwrap_or(false);
            prop_assert_eq!(x.contains(i), want, "bit {}", i);
        }
    }

    #[test]
    fn density_estimates_are_ordered(
        members in prop::collection::btree_set(1u64..3000, 0..600),
        n_max in 100u64..3000,
    ) {
        let h = HittingSet::from_indices(n_max, members.into_iter().filter(|&n| n <= n_max)).unwrap();
        let d = density_stats(&h, 10).unwrap();
        prop_assert!(0.0 <= d.lower_est);
        prop_assert!(d.lower_est <= d.upper_est);
        prop_assert!(d.upper_est <= 1.0);
        prop_assert_eq!(d.count, h.len() as u64);
    }

    #[test]
    fn hitting_set_round_trips(members in prop::collection::btree_set(1u64..2000, 0..300)) {
        let h = HittingSet::from_indices(2000, members.iter().copied()).unwrap();
        prop_assert_eq!(h.indices(), members.iter().copied().collect::<Vec<_>>());
        for n in 1..=2000 {
            prop_assert_eq!(h.contains(n), members.contains(&n));
        }
    }

    #[test]
    fn int_polynomial_forms_agree(coeffs in prop::collection::vec(-20i64..20, 1..5), k in 0u64..60) {
        let p = IntPolynomial::from_monomial(&coeffs).unwrap();
        let want: i128 = coeffs.iter().enumerate().map(|(i, &a)| a as i128 * (k as i128).pow(i as u32 + 1)).sum();
        prop_assert_eq!(p.eval(k), Some(want));
        let q = IntPolynomial::from_binomial(p.binomial_coeffs().to_vec());
        prop_assert_eq!(q.eval(k), Some(want));
    }

    #[test]
    fn adjoint_is_linear_in_x(
        x in sparse(Side::HardyCoef, 0, 30),
        y in sparse(Side::HardyCoef, 0, 30),
        c in complex().prop_filter("moderate", |c| c.norm() < 1e3 && c.norm() > 1e-3),
        coeffs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..4),
    ) {
        let phi = PolySymbol::new(coeffs.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap();
        let cx = LogScalar::from_complex(c);
        let lhs = apply_adjoint(&phi, &axpy(cx, &x, &y).unwrap(), 30).unwrap();
        let rhs = axpy(cx, &apply_adjoint(&phi, &x, 30).unwrap(), &apply_adjoint(&phi, &y, 30).unwrap()).unwrap();
        let scale = opdyn::vector::norm(&lhs).unwrap().max(opdyn::vector::norm(&rhs).unwrap()).max(1.0);
        let diff = opdyn::vector::dist(&lhs, &rhs).unwrap();
        prop_assert!(diff <= 1e-9 * scale, "diff {}", diff);
    }

    #[test]
    fn config_toml_round_trip(
        idx in 0usize..7,
        workers in prop::option::of(1usize..64),
        n in prop::option::of(100u64..1_000_000),
        gap in prop::option::of(10u64..64),
    ) {
        let mut cfg = ExperimentConfig::new(Scenario::ALL[idx]);
        cfg.workers = workers;
        cfg.horizons.n = n;
        cfg.params.gap = gap;
        let back = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn widening_the_gap_keeps_a_build_valid(
        k in 1i64..4,
        log_eps in -6.0f64..-2.0,
        n_max in 2000u64..6000,
    ) {
        let eps = 10f64.powf(log_eps);
        let y = CoefVec::basis(Side::Unilateral, k).unwrap();
        let op = ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(2.0, 0.0));
        let lam = ScalingSeq::constant(1.0);
        // gap chosen so 2^-gap already sits below eps
        let g = (-(eps.log2())).ceil() as u64 + 4;
        for gap in [g, 2 * g] {
            let plan = BlockPlan::new(vec![(y.clone(), eps)], Some(gap)).unwrap();
            let v = build(&lam, &op, plan, n_max).unwrap();
            let checks = verify_fu(&v, None).unwrap();
            prop_assert!(v.report().iter().all(|r| r.hits == r.planned), "gap {}", gap);
            prop_assert!(checks[0].hits.len() as u64 >= v.report()[0].planned);
        }
    }
}
