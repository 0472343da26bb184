//! Brute-force reference computations for small systems.
//!
//! Nothing here goes through the production code paths: weights are summed
//! term by term in binary big-float arithmetic, the two-atom state is built
//! from an explicit atom-field amplitude table, and spin moments come from
//! dense matrices. Only plain input data (`eta0_sq`, `eta1_sq`, `alpha`,
//! `beta`, weight lists) is shared with the rest of the crate.

use std::collections::BTreeMap;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use nalgebra::{DMatrix, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::detector::TransitionAmplitudes;
use crate::error::{Error, Result};
use crate::two_atom::{BipartiteInit, FieldTreatment};

type Big = FBig<HalfEven, 2>;

/// Working precision of the big-float sums, in bits (about 210 decimal digits).
pub const ORACLE_PRECISION_BITS: usize = 700;

/// A closed-form value next to its brute-force counterpart.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub quantity: String,
    pub closed_form: f64,
    pub brute_force: f64,
    pub rel_gap: f64,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, closed_form: f64, brute_force: f64) -> Self {
        Self {
            quantity: quantity.into(),
            closed_form,
            brute_force,
            rel_gap: (closed_form - brute_force).abs() / brute_force.abs().max(1e-300),
        }
    }
}

fn big(x: f64) -> Big {
    Big::try_from(x)
        .expect("finite input")
        .with_precision(ORACLE_PRECISION_BITS)
        .value()
}

fn big_one() -> Big {
    Big::ONE.with_precision(ORACLE_PRECISION_BITS).value()
}

fn big_pow(x: &Big, n: u64) -> Big {
    let mut out = big_one();
    for _ in 0..n {
        out = out * x;
    }
    out
}

/// Exact binomial row `C(h, 0..=h)` as big floats.
fn binomial_row(h: u64) -> Vec<Big> {
    let mut row = Vec::with_capacity(h as usize + 1);
    let mut c = big_one();
    row.push(c.clone());
    for k in 0..h {
        c = c * Big::from(h - k) / Big::from(k + 1);
        row.push(c.clone());
    }
    row
}

struct BigAmps {
    eta0: Big,
    eta1: Big,
    d: Big,
}

fn big_amps(eta0_sq: f64, eta1_sq: f64) -> BigAmps {
    let (e0, e1) = (big(eta0_sq), big(eta1_sq));
    let one = big_one();
    let d0 = &one / (&one + &e0).sqrt();
    let d1 = &one / (&one + &e1).sqrt();
    BigAmps {
        eta0: e0.sqrt(),
        eta1: e1.sqrt(),
        d: d0 * d1,
    }
}

fn check_n(n: u64, limit: u64) -> Result<u64> {
    if n < 2 || n % 2 != 0 || n > limit {
        return Err(Error::param("N", format!("must be even with 2 <= N <= {limit}")));
    }
    Ok(n / 2)
}

fn big_b0_sq(h: u64, row: &[Big], a: &BigAmps) -> Big {
    let eta01_sq = big_pow(&(&a.eta0 * &a.eta1), 2);
    let mut sum = Big::ZERO.with_precision(ORACLE_PRECISION_BITS).value();
    let mut eta_pow = big_one();
    for c in row.iter().take(h as usize + 1) {
        sum = sum + big_pow(c, 4) * &eta_pow;
        eta_pow = eta_pow * &eta01_sq;
    }
    sum * big_pow(&a.d, 2 * h)
}

/// Unnormalized weights `w_0 = B₀²` and `w_m = |B_m|²`, summed term by term
/// in big-float arithmetic.
pub fn enumerate_b_weights(n: u64, amps: &TransitionAmplitudes<f64>) -> Result<BTreeMap<i64, f64>> {
    let h = check_n(n, 40)?;
    let a = big_amps(amps.eta0_sq, amps.eta1_sq);
    let row = binomial_row(h);
    let eta01 = &a.eta0 * &a.eta1;
    let dh = big_pow(&a.d, h);

    let mut out = BTreeMap::new();
    out.insert(0, big_b0_sq(h, &row, &a).to_f64().value());
    for am in 1..=h {
        let mut sum = Big::ZERO.with_precision(ORACLE_PRECISION_BITS).value();
        let mut eta_pow = big_one();
        for k in 0..=(h - am) {
            sum = sum + &row[k as usize] * &row[(k + am) as usize] * &eta_pow;
            eta_pow = eta_pow * &eta01;
        }
        let b_abs = sum * &dh;
        let b_sq = &b_abs * &b_abs;
        let plus = &b_sq * big_pow(&a.eta0, 2 * am);
        let minus = b_sq * big_pow(&a.eta1, 2 * am);
        out.insert(am as i64, plus.to_f64().value());
        out.insert(-(am as i64), minus.to_f64().value());
    }
    Ok(out)
}

/// `ln B₀²` summed directly at high precision; usable for large `N` where the
/// weight itself overflows a double.
pub fn big_log_b0_sq(n: u64, amps: &TransitionAmplitudes<f64>) -> Result<f64> {
    let h = check_n(n, u64::MAX - 1)?;
    let a = big_amps(amps.eta0_sq, amps.eta1_sq);
    Ok(big_b0_sq(h, &binomial_row(h), &a).ln().to_f64().value())
}

/// Output of [`two_atom_first_principles`].
#[derive(Debug, Clone, PartialEq)]
pub struct PairOracle {
    pub rho: Matrix4<Complex64>,
    pub jz_mean: f64,
    pub jz_mean_unnormalized: f64,
    pub concurrence: f64,
}

/// Builds the joint atom-field state term by term, traces out the field
/// explicitly and evaluates observables with dense linear algebra.
pub fn two_atom_first_principles(
    init: &BipartiteInit<f64>,
    amps: &TransitionAmplitudes<f64>,
    treatment: FieldTreatment,
) -> PairOracle {
    let (g, e) = (0usize, 1usize);
    let atoms = |a: usize, b: usize| 2 * a + b;
    let eta0 = amps.eta0_sq.sqrt();
    let eta1 = amps.eta1_sq.sqrt();
    let d = 1.0 / ((1.0 + amps.eta0_sq) * (1.0 + amps.eta1_sq)).sqrt();
    let (alpha, beta) = (init.alpha, init.beta);
    let i = Complex64::new(0.0, 1.0);

    // field labels: Distant |00>,|01>,|10>,|11>; CoLocated |0>,|1>,|1>,|2>
    let field = |na: usize, nb: usize| match treatment {
        FieldTreatment::Distant => 2 * na + nb,
        FieldTreatment::CoLocated => na + nb,
    };
    let n_field = match treatment {
        FieldTreatment::Distant => 4,
        FieldTreatment::CoLocated => 3,
    };
    let terms: [(Complex64, usize, usize, usize, usize); 8] = [
        (alpha, g, e, 0, 0),
        (beta, e, g, 0, 0),
        (-i * alpha * eta1, g, g, 0, 1),
        (-i * beta * eta0, e, e, 0, 1),
        (-i * beta * eta1, g, g, 1, 0),
        (-i * alpha * eta0, e, e, 1, 0),
        (alpha * eta0 * eta1, e, g, 1, 1),
        (beta * eta0 * eta1, g, e, 1, 1),
    ];
    let mut psi = vec![[Complex64::new(0.0, 0.0); 4]; 4];
    for (coef, a, b, na, nb) in terms {
        psi[atoms(a, b)][field(na, nb)] += coef * d;
    }

    let mut rho = Matrix4::<Complex64>::zeros();
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = Complex64::new(0.0, 0.0);
            for f in 0..n_field {
                acc += psi[r][f] * psi[c][f].conj();
            }
            rho[(r, c)] = acc;
        }
    }
    let jz = Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 0.0, 0.0, 1.0).map(|x| Complex64::new(x, 0.0)));
    let jz_mean_unnormalized = (rho * jz).trace().re;
    let rho = rho * Complex64::new(1.0 / rho.trace().re, 0.0);
    PairOracle {
        rho,
        jz_mean: (rho * jz).trace().re,
        jz_mean_unnormalized,
        concurrence: concurrence_by_square_roots(&rho),
    }
}

fn hermitian_sqrt(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let eig = SymmetricEigen::new(*m);
    let roots = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    eig.eigenvectors * Matrix4::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

/// Concurrence from the eigenvalues of `√(√ρ ρ̃ √ρ)`.
pub fn concurrence_by_square_roots(rho: &Matrix4<Complex64>) -> f64 {
    let flip = {
        let mut s = Matrix4::<Complex64>::zeros();
        for (r, c, v) in [(0, 3, -1.0), (1, 2, 1.0), (2, 1, 1.0), (3, 0, -1.0)] {
            s[(r, c)] = Complex64::new(v, 0.0);
        }
        s
    };
    let rho_tilde = flip * rho.conjugate() * flip;
    let root = hermitian_sqrt(rho);
    let r = root * rho_tilde * root;
    let r = (r + r.adjoint()) * Complex64::new(0.5, 0.0);
    let mut lam: Vec<f64> = SymmetricEigen::new(r)
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}

/// `J_z`, `J_+` and `J_-` in the Dicke basis `m = -j..=j` (index `m + j`).
fn spin_matrices(n: u64) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let dim = n as usize + 1;
    let j = n as f64 / 2.0;
    let jz = DMatrix::from_fn(dim, dim, |r, c| if r == c { r as f64 - j } else { 0.0 });
    let jp = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c + 1 {
            let m = c as f64 - j;
            (j * (j + 1.0) - m * (m + 1.0)).sqrt()
        } else {
            0.0
        }
    });
    let jm = jp.transpose();
    (jz, jp, jm)
}

/// Moments and squeezing parameter of a Dicke-diagonal state obtained from
/// dense matrix traces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixMoments {
    pub jz_mean: f64,
    pub jz2_mean: f64,
    pub jz4_mean: f64,
    pub jz_var: f64,
    pub djz2: f64,
    pub j2_mean: f64,
    pub xi_e_sq: f64,
}

/// `weights` are indexed by `m + N/2` and normalized here.
pub fn dicke_matrix_moments(n: u64, weights: &[f64]) -> Result<MatrixMoments> {
    check_n(n, 12)?;
    if weights.len() != n as usize + 1 || weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::param("weights", "need N+1 nonnegative entries"));
    }
    let total: f64 = weights.iter().sum();
    let rho = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        weights.len(),
        weights.iter().map(|w| w / total),
    ));
    let (jz, jp, jm) = spin_matrices(n);
    let jz2 = &jz * &jz;
    let j2 = &jz2 + (&jp * &jm + &jm * &jp) * 0.5;
    let tr = |op: &DMatrix<f64>| (&rho * op).trace();
    let jz_mean = tr(&jz);
    let jz2_mean = tr(&jz2);
    let jz4_mean = tr(&(&jz2 * &jz2));
    let jz_var = jz2_mean - jz_mean * jz_mean;
    let djz2 = (jz4_mean - jz2_mean * jz2_mean).max(0.0).sqrt();
    let j2_mean = tr(&j2);
    let nf = n as f64;
    Ok(MatrixMoments {
        jz_mean,
        jz2_mean,
        jz4_mean,
        jz_var,
        djz2,
        j2_mean,
        xi_e_sq: ((nf - 1.0) * jz_var + jz2_mean) / (j2_mean - nf / 2.0),
    })
}

/// `J_x` statistics of the pure Dicke state `|N/2, m>` from explicit matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DickeXMoments {
    pub jx2_mean: f64,
    pub djx2: f64,
    pub v_xz: f64,
}

pub fn dicke_x_moments(n: u64, m: i64) -> Result<DickeXMoments> {
    check_n(n, 40)?;
    let j = (n / 2) as i64;
    if m.abs() > j {
        return Err(Error::param("m", "must satisfy |m| <= N/2"));
    }
    let (jz, jp, jm) = spin_matrices(n);
    let jx = (&jp + &jm) * 0.5;
    let idx = (m + j) as usize;
    let expect = |op: &DMatrix<f64>| op[(idx, idx)];
    let jx2 = &jx * &jx;
    let jz2 = &jz * &jz;
    let jx2_mean = expect(&jx2);
    let jx4_mean = expect(&(&jx2 * &jx2));
    let anti = &jx * &jz + &jz * &jx;
    let v_xz = expect(&(&anti * &anti)) + expect(&(&jz2 * &jx2 + &jx2 * &jz2))
        - 2.0 * expect(&jz2) * jx2_mean;
    Ok(DickeXMoments {
        jx2_mean,
        djx2: (jx4_mean - jx2_mean * jx2_mean).max(0.0).sqrt(),
        v_xz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex;

    fn amps(e0: f64, e1: f64) -> TransitionAmplitudes<f64> {
        TransitionAmplitudes::from_eta_sq(e0, e1).unwrap()
    }

    #[test]
    fn pair_weights_by_hand() {
        let w = enumerate_b_weights(2, &amps(0.09, 0.04)).unwrap();
        let d2 = 1.0 / (1.09 * 1.04);
        assert_relative_eq!(w[&1], d2 * 0.09, max_relative = 1e-15);
        assert_relative_eq!(w[&-1], d2 * 0.04, max_relative = 1e-15);
        assert_relative_eq!(w[&0], d2 * 1.0036, max_relative = 1e-15);
    }

    #[test]
    fn zero_coupling_point_mass() {
        let w = enumerate_b_weights(6, &amps(0.0, 0.0)).unwrap();
        assert_eq!(w[&0], 1.0);
        assert!(w.iter().filter(|(m, _)| **m != 0).all(|(_, v)| *v == 0.0));
        assert!(enumerate_b_weights(42, &amps(0.1, 0.1)).is_err());
    }

    #[test]
    fn pair_oracle_limits() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let init = BipartiteInit::new(Complex::new(s, 0.0), Complex::new(0.0, s)).unwrap();
        let out = two_atom_first_principles(&init, &amps(0.0, 0.0), FieldTreatment::CoLocated);
        assert_relative_eq!(out.concurrence, 1.0, epsilon = 1e-12);
        let out = two_atom_first_principles(&init, &amps(0.2, 0.5), FieldTreatment::Distant);
        let d2 = 1.0 / (1.2 * 1.5);
        assert_relative_eq!(out.jz_mean_unnormalized, d2 * (0.2 - 0.5), max_relative = 1e-14);
    }

    #[test]
    fn matrix_moments_of_point_masses() {
        let mut w = vec![0.0; 5];
        w[2] = 1.0;
        assert_eq!(dicke_matrix_moments(4, &w).unwrap().xi_e_sq, 0.0);
        let mut w = vec![0.0; 7];
        w[6] = 1.0;
        assert_relative_eq!(dicke_matrix_moments(6, &w).unwrap().xi_e_sq, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn x_moments_of_twin_fock() {
        let x = dicke_x_moments(40, 0).unwrap();
        assert_relative_eq!(x.jx2_mean, 0.5 * 420.0, max_relative = 1e-13);
        assert_relative_eq!(x.v_xz, 0.5 * 420.0, max_relative = 1e-13);
    }

    #[test]
    fn report_gap() {
        let r = OracleReport::new("w", 1.0 + 1e-13, 1.0);
        assert!(r.rel_gap < 2e-13 && r.rel_gap > 0.0);
    }
}
