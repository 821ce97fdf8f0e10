// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use relatherm::cli::config::Grid;
use relatherm::cli::output::fmt_f64;
use relatherm::dynamics::{pauli_rates, pauli_stationary, stationary_state};
use relatherm::kms::{kms_residual, ImageSumSpec};
use relatherm::linalg::{c, max_abs, trace, CMat};
use relatherm::liouville::{apply, DEFAULT_OMEGA_TOL};
use relatherm::spectral::{lamb_shift, n_via_directional_average, planck_n};
use relatherm::thermo::sigma_moving;
use relatherm::{build_liouvillian, decompose_transitions, presets, BathSpec, Coupling, QuadratureSpec};

fn coupling() -> impl Strategy<Value = Coupling> {
    prop_oneof![Just(Coupling::UdW), Just(Coupling::TD)]
}

fn hermitian(d: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |v| {
        let m = CMat::from_fn(d, d, |i, j| c(v[2 * (i * d + j)], v[2 * (i * d + j) + 1]));
        (&m + m.adjoint()).scale(0.5)
    })
}

fn state(d: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |v| {
        let m = CMat::from_fn(d, d, |i, j| c(v[2 * (i * d + j)], v[2 * (i * d + j) + 1]));
        let r = &m * m.adjoint() + CMat::identity(d, d).scale(1e-3);
        let tr = r.trace();
        r / tr
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn occupation_is_even_in_u_and_positive(cp in coupling(), bw in 0.05f64..30.0, u in 0.0f64..4.0) {
        let a = BathSpec::new(cp, bw, u, 1.0).unwrap().occupation(1.0).unwrap();
        let b = BathSpec::new(cp, bw, -u, 1.0).unwrap().occupation(1.0).unwrap();
        prop_assert!(a > 0.0);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn occupation_decreases_with_frequency(cp in coupling(), bw in 0.05f64..20.0, u in 0.0f64..3.0) {
        let bath = BathSpec::new(cp, 1.0, u, 1.0).unwrap();
        prop_assert!(bath.occupation(bw * 1.01).unwrap() < bath.occupation(bw).unwrap());
    }

    #[test]
    fn occupation_matches_directional_average(cp in coupling(), bw in 0.1f64..10.0, u in 0.0f64..2.5) {
        let bath = BathSpec::new(cp, bw, u, 1.0).unwrap();
        let n = bath.occupation(1.0).unwrap();
        let avg = n_via_directional_average(&bath, 1.0, &QuadratureSpec::default()).unwrap();
        prop_assert!((n - avg).abs() < 1e-8 * n.max(1.0));
    }

    #[test]
    fn small_rapidity_branches_join(cp in coupling(), bw in 0.1f64..10.0) {
        for cut in [1e-6, 1e-3] {
            let lo = BathSpec::new(cp, bw, cut * (1.0 - 1e-9), 1.0).unwrap().occupation(1.0).unwrap();
            let hi = BathSpec::new(cp, bw, cut * (1.0 + 1e-9), 1.0).unwrap().occupation(1.0).unwrap();
            prop_assert!((lo - hi).abs() < 1e-10 * lo, "cut {}: {} vs {}", cut, lo, hi);
        }
        let p = planck_n(bw, 1.0).unwrap();
        let n = BathSpec::new(cp, bw, 1e-7, 1.0).unwrap().occupation(1.0).unwrap();
        prop_assert_eq!(n, p);
    }

    #[test]
    fn lamb_shift_is_odd(cp in coupling(), w in 0.1f64..5.0, u in 0.0f64..2.0, beta in 0.2f64..5.0) {
        let bath = BathSpec::new(cp, beta, u, 0.5).unwrap();
        let q = QuadratureSpec::default();
        let plus = lamb_shift(&bath, w, 0.01, &q).unwrap();
        let minus = lamb_shift(&bath, -w, 0.01, &q).unwrap();
        prop_assert_eq!(plus, -minus);
    }

    #[test]
    fn generator_preserves_trace_and_hermiticity(
        seed in 0u64..10_000,
        cp in coupling(),
        u in 0.0f64..2.0,
        x in hermitian(3),
    ) {
        let sys = presets::random(seed, 3).unwrap();
        let Ok(dec) = decompose_transitions(&sys, DEFAULT_OMEGA_TOL) else { return Ok(()) };
        let bath = BathSpec::new(cp, 1.0, u, 0.7).unwrap();
        let gen = build_liouvillian(&sys, &bath, &dec, true, Some(0.05)).unwrap();
        let y = apply(&gen, &x).unwrap();
        let scale = max_abs(&gen.l_total) * max_abs(&x);
        prop_assert!(trace(&y).norm() < 1e-12 * scale);
        prop_assert!(max_abs(&(&y - y.adjoint())) < 1e-12 * scale);
    }

    #[test]
    fn pauli_populations_match_full_stationary_state(seed in 0u64..10_000, cp in coupling(), u in 0.0f64..2.0) {
        let sys = presets::random(seed, 4).unwrap();
        let Ok(dec) = decompose_transitions(&sys, DEFAULT_OMEGA_TOL) else { return Ok(()) };
        prop_assume!(!dec.has_degenerate_levels() && dec.frequencies.len() == 6);
        let bath = BathSpec::new(cp, 1.0, u, 0.5).unwrap();
        let gen = build_liouvillian(&sys, &bath, &dec, false, None).unwrap();
        let rho = stationary_state(&gen, 1e-10).unwrap();
        let eig = dec.basis.adjoint() * rho.matrix() * &dec.basis;
        let p = pauli_stationary(&pauli_rates(&sys, &dec, &bath).unwrap()).unwrap();
        for (i, pi) in p.iter().enumerate() {
            prop_assert!((eig[(i, i)].re - pi).abs() < 1e-9);
        }
        prop_assert!(rho.eigenvalues().iter().all(|&e| e > -1e-12));
    }

    #[test]
    fn entropy_production_is_non_negative(
        seed in 0u64..10_000,
        cp in coupling(),
        beta in 0.2f64..5.0,
        u in 0.0f64..2.0,
        rho in state(3),
    ) {
        let sys = presets::random(seed, 3).unwrap();
        let Ok(dec) = decompose_transitions(&sys, DEFAULT_OMEGA_TOL) else { return Ok(()) };
        let bath = BathSpec::new(cp, beta, u, 1.0).unwrap();
        let q = QuadratureSpec { gauss_legendre_points: 24, ..Default::default() };
        prop_assert!(sigma_moving(&sys, &dec, &bath, &rho, &q).unwrap() >= -1e-12);
    }

    #[test]
    fn thermal_image_sum_is_kms_periodic(beta in 0.3f64..3.0, t in 0.05f64..2.0, r in 0.0f64..2.0) {
        let spec = ImageSumSpec::new(beta, 10_000, 0.0).unwrap();
        prop_assert!(kms_residual(&spec, t, r).unwrap() < 1e-8);
    }

    #[test]
    fn csv_numbers_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let back: f64 = fmt_f64(x).parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn ranges_increase(start in -10.0f64..10.0, len in 0.01f64..10.0, count in 2usize..200) {
        let g = Grid::Range { start, stop: start + len, count, log: false };
        let v = g.values("grid").unwrap();
        prop_assert_eq!(v.len(), count);
        prop_assert_eq!(v[0], start);
        prop_assert!(v.windows(2).all(|w| w[1] > w[0]));
    }
}
