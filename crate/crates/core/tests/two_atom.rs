use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twinfock::numerics::hermitian_eigen;
use twinfock::oracle::{enumerate_b_weights, two_atom_first_principles};
use twinfock::twin_fock::{dicke_distribution, jz_moments};
use twinfock::two_atom::{concurrence, evolve_pair};
use twinfock::{BipartiteInit, FieldTreatment, TransitionAmplitudes};

fn random_init(rng: &mut ChaCha8Rng) -> BipartiteInit {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    let (pa, pb): (f64, f64) = (rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3));
    BipartiteInit::new(
        Complex64::from_polar(theta.cos(), pa),
        Complex64::from_polar(theta.sin(), pb),
    )
    .unwrap()
}

fn random_amps(rng: &mut ChaCha8Rng) -> TransitionAmplitudes {
    let e0 = 10f64.powf(rng.gen_range(-6.0..1.0));
    let e1 = 10f64.powf(rng.gen_range(-6.0..1.0));
    TransitionAmplitudes::from_eta_sq(e0, e1).unwrap()
}

#[test]
fn closed_form_matches_explicit_field_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for draw in 0..100 {
        let init = random_init(&mut rng);
        let amps = random_amps(&mut rng);
        for treatment in [FieldTreatment::CoLocated, FieldTreatment::Distant] {
            let pair = evolve_pair(&init, &amps, treatment).unwrap();
            let oracle = two_atom_first_principles(&init, &amps, treatment);
            for r in 0..4 {
                for c in 0..4 {
                    let diff = (pair.rho.matrix()[(r, c)] - oracle.rho[(r, c)]).norm();
                    assert!(diff <= 1e-13, "draw {draw} {treatment:?} ({r},{c}) off by {diff:e}");
                }
            }
            assert!((pair.jz_mean() - oracle.jz_mean).abs() <= 1e-13);
            assert!((pair.jz_mean_unnormalized() - oracle.jz_mean_unnormalized).abs() <= 1e-13);
            let c = concurrence(&pair.rho).unwrap();
            // the square-root route loses half the digits near rank deficiency
            assert!((c - oracle.concurrence).abs() <= 1e-7, "draw {draw}: {c} vs {}", oracle.concurrence);
        }
    }
}

#[test]
fn distant_pair_jz_matches_two_atom_dicke_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let amps = random_amps(&mut rng);
        let pair = evolve_pair(&BipartiteInit::symmetric(), &amps, FieldTreatment::Distant).unwrap();
        let w = enumerate_b_weights(2, &amps).unwrap();
        assert_relative_eq!(pair.trace_unnormalized(), 1.0, max_relative = 1e-14);
        assert!((pair.jz_mean_unnormalized() - (w[&1] - w[&-1])).abs() <= 1e-14);
        let m = jz_moments(&dicke_distribution(2, &amps).unwrap());
        assert!((pair.jz_mean() - m.jz_mean).abs() <= 1e-13);
    }
}

#[test]
fn concurrence_bounded_and_vanishing_for_product_inputs() {
    let amps = TransitionAmplitudes::from_eta_sq(0.15, 0.24).unwrap();
    for k in 0..=16 {
        let theta = f64::from(k) * std::f64::consts::FRAC_PI_2 / 16.0;
        let init = BipartiteInit::from_angle(theta);
        let pair = evolve_pair(&init, &amps, FieldTreatment::CoLocated).unwrap();
        let c = concurrence(&pair.rho).unwrap();
        assert!((0.0..=1.0).contains(&c));
        if k == 0 || k == 16 {
            assert!(c < 1e-12);
        }
    }
}

fn amps_strategy() -> impl Strategy<Value = TransitionAmplitudes> {
    (-8.0f64..1.5, -8.0f64..1.5)
        .prop_map(|(a, b)| TransitionAmplitudes::from_eta_sq(10f64.powf(a), 10f64.powf(b)).unwrap())
}

fn init_strategy() -> impl Strategy<Value = BipartiteInit> {
    (0.0f64..std::f64::consts::FRAC_PI_2, 0.0f64..6.3, 0.0f64..6.3).prop_map(|(t, pa, pb)| {
        BipartiteInit::new(Complex64::from_polar(t.cos(), pa), Complex64::from_polar(t.sin(), pb)).unwrap()
    })
}

fn treatment_strategy() -> impl Strategy<Value = FieldTreatment> {
    prop_oneof![Just(FieldTreatment::CoLocated), Just(FieldTreatment::Distant)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn evolved_state_is_a_density_matrix(
        init in init_strategy(), amps in amps_strategy(), t in treatment_strategy(),
    ) {
        let rho = evolve_pair(&init, &amps, t).unwrap().rho;
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
        prop_assert!(rho.matrix().hermiticity_defect() < 1e-15);
        let (vals, _) = hermitian_eigen(rho.matrix());
        prop_assert!(vals[0] >= -1e-12, "{:?}", vals);
        let c = concurrence(&rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn without_coupling_concurrence_is_twice_overlap(init in init_strategy(), t in treatment_strategy()) {
        let amps = TransitionAmplitudes::from_eta_sq(0.0, 0.0).unwrap();
        let pair = evolve_pair(&init, &amps, t).unwrap();
        let want = 2.0 * init.alpha.norm() * init.beta.norm();
        prop_assert!((concurrence(&pair.rho).unwrap() - want).abs() < 1e-12);
        let other = match t {
            FieldTreatment::CoLocated => FieldTreatment::Distant,
            FieldTreatment::Distant => FieldTreatment::CoLocated,
        };
        let alt = evolve_pair(&init, &amps, other).unwrap();
        prop_assert!(alt.rho.matrix().max_abs_diff(pair.rho.matrix()) < 1e-15);
    }

    #[test]
    fn swapping_amplitudes_swaps_atoms(
        init in init_strategy(), amps in amps_strategy(), t in treatment_strategy(),
    ) {
        let swapped = BipartiteInit::new(init.beta, init.alpha).unwrap();
        let a = evolve_pair(&init, &amps, t).unwrap().rho;
        let b = evolve_pair(&swapped, &amps, t).unwrap().rho;
        prop_assert!(a.swap_atoms().matrix().max_abs_diff(b.matrix()) < 1e-15);
        prop_assert!((concurrence(&a).unwrap() - concurrence(&b).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn white_noise_never_adds_entanglement(
        init in init_strategy(), amps in amps_strategy(), t in treatment_strategy(),
        e1 in 0.0f64..1.0, e2 in 0.0f64..1.0,
    ) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let rho = evolve_pair(&init, &amps, t).unwrap().rho;
        let c_lo = concurrence(&rho.mix_with_identity(lo).unwrap()).unwrap();
        let c_hi = concurrence(&rho.mix_with_identity(hi).unwrap()).unwrap();
        prop_assert!(c_hi <= c_lo + 1e-12, "{} > {}", c_hi, c_lo);
    }
}
