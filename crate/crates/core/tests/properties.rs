mod common;

use approx::abs_diff_eq;
use num_complex::Complex;
use proptest::prelude::*;
use qdecay_core::analytic::{self, LambdaFamily};
use qdecay_core::channels::{
    amplitude_channel, channel_for, completeness_defect, compose, dephasing_channel, lift, symmetric, symmetric_pair,
    NoiseKind, NoiseSpec, Qubit,
};
use qdecay_core::entanglement::{classify, concurrence, concurrence_x, evolve, XState, XSTATE_TOL};
use qdecay_core::qmat::{hermitian_eigvals, kron, product_spectrum, spin_flip, validate_density, ComplexMat};

fn mat2() -> impl Strategy<Value = ComplexMat<f64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 4)
        .prop_map(|v| ComplexMat::new(2, v.into_iter().map(|(re, im)| Complex::new(re, im)).collect()).unwrap())
}

fn kind() -> impl Strategy<Value = NoiseKind> {
    prop_oneof![Just(NoiseKind::Amplitude), Just(NoiseKind::Phase)]
}

fn qubit() -> impl Strategy<Value = Qubit> {
    prop_oneof![Just(Qubit::A), Just(Qubit::B)]
}

fn specs() -> impl Strategy<Value = Vec<NoiseSpec<f64>>> {
    prop::collection::vec((qubit(), kind(), 0.0..3.0f64), 0..4).prop_map(|v| {
        v.into_iter()
            .map(|(q, k, r)| NoiseSpec::new(q, k, r).unwrap())
            .collect()
    })
}

proptest! {
    #[test]
    fn kron_is_bilinear(a in mat2(), b in mat2(), c in mat2(), k in -3.0..3.0f64) {
        let lhs = kron(&(&a + &c.scale_real(k)), &b).unwrap();
        let rhs = &kron(&a, &b).unwrap() + &kron(&c, &b).unwrap().scale_real(k);
        prop_assert!(lhs.max_diff(&rhs) < 1e-12);
    }

    #[test]
    fn kron_mixed_product(a in mat2(), b in mat2(), c in mat2(), d in mat2()) {
        let lhs = &kron(&a, &b).unwrap() * &kron(&c, &d).unwrap();
        let rhs = kron(&(&a * &c), &(&b * &d)).unwrap();
        prop_assert!(lhs.max_diff(&rhs) < 1e-12);
    }

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>()) {
        let rho = common::random_density(&mut common::rng(seed), 2);
        let ev = hermitian_eigvals(rho.matrix()).unwrap();
        prop_assert!(abs_diff_eq!(ev.iter().sum::<f64>(), 1.0, epsilon = 1e-12));
        prop_assert!(ev.iter().all(|&x| x >= -1e-12));
    }

    #[test]
    fn product_spectrum_is_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let rho = common::random_density(&mut rng, 2);
        let u = common::local_unitary(&mut rng);
        let rotated = u.sandwich(rho.matrix());
        let before = product_spectrum(&(rho.matrix() * &spin_flip(rho.matrix()).unwrap())).unwrap();
        let after = product_spectrum(&(&rotated * &spin_flip(&rotated).unwrap())).unwrap();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_state_concurrence_is_overlap(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let rho = common::random_pure(&mut rng, 2);
        let u = common::local_unitary(&mut rng);
        let rotated = validate_density(u.sandwich(rho.matrix())).unwrap();
        // for a pure state the concurrence is |⟨ψ|ψ̃⟩| = sqrt(tr ρρ̃)
        let expected = (rho.matrix() * &spin_flip(rho.matrix()).unwrap()).trace().re.max(0.0).sqrt();
        prop_assert!((concurrence(&rho).unwrap() - expected).abs() < 1e-7);
        prop_assert!((concurrence(&rotated).unwrap() - expected).abs() < 1e-7);
    }

    #[test]
    fn channels_are_complete(rate in 0.0..50.0f64, t in 0.0..100.0f64, specs in specs()) {
        let deph = dephasing_channel(rate, t).unwrap();
        let amp = amplitude_channel(rate, t).unwrap();
        prop_assert!(completeness_defect(&deph) <= 1e-10);
        prop_assert!(completeness_defect(&amp) <= 1e-10);
        prop_assert!(completeness_defect(&compose(&deph, &amp).unwrap()) <= 1e-10);
        prop_assert!(completeness_defect(&lift(&deph, &amp).unwrap()) <= 1e-10);
        prop_assert!(completeness_defect(&channel_for(&specs, 2, t).unwrap()) <= 1e-10);
    }

    #[test]
    fn evolution_preserves_states(seed in any::<u64>(), specs in specs(), t in 0.0..10.0f64) {
        let rho = common::random_density(&mut common::rng(seed), 2);
        let out = evolve(&rho, &specs, t).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(hermitian_eigvals(out.matrix()).unwrap()[0] >= -1e-12);
    }

    #[test]
    fn evolution_is_a_semigroup(seed in any::<u64>(), specs in specs(), s in 0.0..3.0f64, t in 0.0..3.0f64) {
        let rho = common::random_density(&mut common::rng(seed), 2);
        let stepwise = evolve(&evolve(&rho, &specs, s).unwrap(), &specs, t).unwrap();
        let direct = evolve(&rho, &specs, s + t).unwrap();
        prop_assert!(stepwise.matrix().max_diff(direct.matrix()) < 1e-12);
    }

    #[test]
    fn x_states_stay_x(seed in any::<u64>(), specs in specs(), t in 0.0..10.0f64) {
        let x = common::random_x(&mut common::rng(seed));
        let out = evolve(&x.to_density().unwrap(), &specs, t).unwrap();
        let back = XState::from_density(&out, XSTATE_TOL);
        prop_assert!(back.is_some());
        let back = back.unwrap();
        prop_assert!((concurrence(&out).unwrap() - concurrence_x(&back).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn general_concurrence_matches_x_form(seed in any::<u64>()) {
        let x = common::random_x(&mut common::rng(seed));
        let general = concurrence(&x.to_density().unwrap()).unwrap();
        prop_assert!((general - concurrence_x(&x).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn combined_form_reduces_to_single_noises(lambda in 3.0..=4.0f64, g in 0.1..3.0f64, t in 0.0..10.0f64) {
        let fam = LambdaFamily::new(lambda).unwrap();
        prop_assert!((analytic::c_combined(fam, 0.0, g, t) - analytic::c_phase(fam, g, t)).abs() < 1e-12);
        prop_assert!((analytic::c_combined(fam, g, 0.0, t) - analytic::c_amp(fam, g, t).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn combined_form_matches_kraus(lambda in 0.05..=4.0f64, g1 in 0.1..3.0f64, g2 in 0.1..3.0f64, t in 0.0..5.0f64) {
        let fam = LambdaFamily::new(lambda).unwrap();
        let rho = XState::lambda_family(lambda).unwrap().to_density().unwrap();
        let numeric = concurrence(&evolve(&rho, &symmetric_pair(g1, g2).unwrap(), t).unwrap()).unwrap();
        prop_assert!((numeric - analytic::c_combined(fam, g1, g2, t)).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn amplitude_classification_is_sign_test(a in 0.0..1.0f64, frac in 0.02..1.0f64) {
        let z = frac * (1.0 - a) / 2.0;
        prop_assume!((a - z * z).abs() > 1e-3);
        let x = XState::slice_point(a, z).unwrap();
        let class = classify(&x, &symmetric(NoiseKind::Amplitude, 1.0).unwrap(), 20.0).unwrap();
        prop_assert_eq!(class.is_sudden_death(), a > z * z);
    }
}
