use approx::assert_relative_eq;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::UBig;
use nalgebra::Matrix4;
use num_complex::{Complex, Complex64};
use proptest::prelude::*;

use twinfock::numerics::{
    concurrence_spectrum, integrate_complex, log_binomial, log_sum_exp, spin_flip, LogWeight,
    Matrix4c, QuadratureConfig,
};

fn range_product(lo: u64, hi: u64) -> UBig {
    // product of lo..hi by binary splitting
    if hi - lo <= 16 {
        (lo..hi).fold(UBig::ONE, |acc, i| acc * UBig::from(i))
    } else {
        let mid = lo + (hi - lo) / 2;
        range_product(lo, mid) * range_product(mid, hi)
    }
}

fn exact_log_binomial(n: u64, r: u64) -> f64 {
    let r = r.min(n - r);
    let c = range_product(n - r + 1, n + 1) / range_product(1, r + 1);
    let big: FBig<HalfEven, 2> = FBig::from(c).with_precision(256).value();
    big.ln().to_f64().value()
}

#[test]
fn log_binomial_against_big_integers() {
    let cases = [
        (10_000, 5_000),
        (10_000, 17),
        (10_000, 16),
        (1_000_000, 17),
        (1_000_000, 1_000),
        (1_000_000, 20_000),
        (999_999, 499_999),
        (40, 20),
    ];
    for (n, r) in cases {
        let got: f64 = log_binomial(n, r).unwrap();
        let want = exact_log_binomial(n, r);
        assert_relative_eq!(got, want, max_relative = 1e-12);
    }
}

#[test]
fn werner_state_against_dense_eigensolver() {
    for &p in &[0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut rho = Matrix4::<Complex64>::zeros();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            rho[(i, j)] += Complex64::new(p * s * s, 0.0);
        }
        for i in 0..4 {
            rho[(i, i)] += Complex64::new((1.0 - p) / 4.0, 0.0);
        }
        // general (non-Hermitian) Schur eigenvalues of ρρ̃
        let mut flip = Matrix4::<Complex64>::zeros();
        for (r, c, v) in [(0, 3, -1.0), (1, 2, 1.0), (2, 1, 1.0), (3, 0, -1.0)] {
            flip[(r, c)] = Complex64::new(v, 0.0);
        }
        let prod = rho * (flip * rho.conjugate() * flip);
        let mut oracle: Vec<f64> = prod
            .schur()
            .eigenvalues()
            .unwrap()
            .iter()
            .map(|z| z.re.max(0.0).sqrt())
            .collect();
        oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());

        let mut m = Matrix4c::<f64>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = rho[(i, j)];
            }
        }
        let l = concurrence_spectrum(&m).unwrap();
        for (a, b) in l.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-7, "p={p}: {l:?} vs {oracle:?}");
        }
        let c = (l[0] - l[1] - l[2] - l[3]).max(0.0);
        let c_oracle = (oracle[0] - oracle[1] - oracle[2] - oracle[3]).max(0.0);
        assert!((c - c_oracle).abs() < 1e-7);
        assert_relative_eq!(c, ((3.0 * p - 1.0) / 2.0).max(0.0), epsilon = 1e-12);
    }
}

#[test]
fn spin_flip_of_bell_state_is_itself() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex::new(0.0, 0.0);
    let bell = Matrix4c::outer(&[Complex::new(s, 0.0), z, z, Complex::new(s, 0.0)]);
    assert!(spin_flip(&bell).max_abs_diff(&bell) < 1e-15);
}

fn unitary2(a: f64, b: f64, c: f64, d: f64) -> [[Complex64; 2]; 2] {
    // e^{id} [[e^{ia} cos b, e^{ic} sin b], [-e^{-ic} sin b, e^{-ia} cos b]]
    let ph = Complex64::from_polar(1.0, d);
    [
        [ph * Complex64::from_polar(b.cos(), a), ph * Complex64::from_polar(b.sin(), c)],
        [-ph * Complex64::from_polar(b.sin(), -c), ph * Complex64::from_polar(b.cos(), -a)],
    ]
}

fn kron(u: &[[Complex64; 2]; 2], v: &[[Complex64; 2]; 2]) -> Matrix4c<f64> {
    let mut m = Matrix4c::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = u[i / 2][j / 2] * v[i % 2][j % 2];
        }
    }
    m
}

fn random_state(entries: &[f64]) -> Matrix4c<f64> {
    let mut g = Matrix4c::zeros();
    for i in 0..4 {
        for j in 0..4 {
            g[(i, j)] = Complex::new(entries[8 * i + 2 * j], entries[8 * i + 2 * j + 1]);
        }
    }
    let rho = g * g.adjoint();
    let tr = rho.trace().re;
    rho.scale(1.0 / tr)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn concurrence_spectrum_local_unitary_invariance(
        entries in proptest::collection::vec(-1.0f64..1.0, 32),
        angles in proptest::collection::vec(0.0f64..6.283, 8),
        rank_cut in 0usize..3,
    ) {
        let mut rho = random_state(&entries);
        if rank_cut > 0 {
            // lower the rank through a projector onto the first 4 - rank_cut columns of g
            let mut g = Matrix4c::zeros();
            for i in 0..4 {
                for j in 0..(4 - rank_cut) {
                    g[(i, j)] = Complex::new(entries[8 * i + 2 * j], entries[8 * i + 2 * j + 1]);
                }
            }
            let r = g * g.adjoint();
            rho = r.scale(1.0 / r.trace().re);
        }
        let u = kron(
            &unitary2(angles[0], angles[1], angles[2], angles[3]),
            &unitary2(angles[4], angles[5], angles[6], angles[7]),
        );
        let rotated = u * rho * u.adjoint();
        let a = concurrence_spectrum(&rho).unwrap();
        let b = concurrence_spectrum(&rotated).unwrap();
        for k in 0..4 {
            prop_assert!((a[k] - b[k]).abs() < 1e-9, "{:?} vs {:?}", a, b);
        }
        prop_assert!(a.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn log_sum_exp_is_order_independent(
        logs in proptest::collection::vec(-50.0f64..50.0, 1..40),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let w: Vec<LogWeight<f64>> = logs.iter().map(|&l| LogWeight(l)).collect();
        let mut shuffled = w.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(log_sum_exp(&w).ln().to_bits(), log_sum_exp(&shuffled).ln().to_bits());
        let direct: f64 = logs.iter().map(|l| l.exp()).sum::<f64>().ln();
        prop_assert!((log_sum_exp(&w).ln() - direct).abs() < 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn integration_is_linear(
        k1 in -20.0f64..20.0, k2 in -20.0f64..20.0, s in 0.2f64..3.0,
        ar in -3.0f64..3.0, ai in -3.0f64..3.0, br in -3.0f64..3.0,
    ) {
        let cfg = QuadratureConfig::default();
        let alpha = Complex64::new(ar, ai);
        let beta = Complex64::new(br, 0.5);
        let f = move |x: f64| Complex64::new(0.0, k1 * x).exp() * (-(x / s).powi(2)).exp();
        let g = move |x: f64| Complex64::new(x * x, (k2 * x).sin()) / (1.0 + x * x);
        let qf = integrate_complex(f, -6.0, 6.0, &cfg).unwrap();
        let qg = integrate_complex(g, -6.0, 6.0, &cfg).unwrap();
        let qh = integrate_complex(move |x| alpha * f(x) + beta * g(x), -6.0, 6.0, &cfg).unwrap();
        let combo = alpha * qf.value + beta * qg.value;
        let scale = (alpha.norm() * qf.value.norm() + beta.norm() * qg.value.norm()).max(1e-300);
        prop_assert!((qh.value - combo).norm() <= 10.0 * cfg.rel_tol * scale + 2.0 * cfg.abs_tol);
    }

    #[test]
    fn halving_tolerance_stays_within_error_estimate(
        k in 0.0f64..60.0, c in 0.1f64..4.0, p in 0.0f64..3.0,
    ) {
        let f = move |x: f64| Complex64::new(-c * x * x, k * x + p * x * x * x).exp();
        let coarse = QuadratureConfig { rel_tol: 1e-6, ..QuadratureConfig::default() };
        let fine = QuadratureConfig { rel_tol: 5e-7, ..coarse };
        let a = integrate_complex(f, -5.0, 5.0, &coarse).unwrap();
        let b = integrate_complex(f, -5.0, 5.0, &fine).unwrap();
        prop_assert!((a.value - b.value).norm() <= a.err_estimate);
    }
}
