//! Two detectors accelerated together from an entangled single-excitation
//! state, with the field traced out.

use num_complex::Complex;
use rayon::prelude::*;

use crate::detector::{transition_amplitudes, DetectorParams, TransitionAmplitudes};
use crate::error::{Error, Result};
use crate::numerics::{concurrence_spectrum, hermitian_eigen, Matrix4c, QuadratureConfig};
use crate::scalar::Real;
use crate::twin_fock::{dicke_distribution, squeezing_parameter};

/// Basis order used for every 4x4 operator: `|gg>, |ge>, |eg>, |ee>`, atom A first.
pub const GG: usize = 0;
pub const GE: usize = 1;
pub const EG: usize = 2;
pub const EE: usize = 3;

/// Initial state `α|ge> + β|eg>` with the field in its vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteInit<T> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
}

impl<T: Real> BipartiteInit<T> {
    pub fn new(alpha: Complex<T>, beta: Complex<T>) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        let tol = T::lit(1e-12).max(T::lit(8.0) * T::epsilon());
        if !((norm - T::one()).abs() <= tol) {
            return Err(Error::param("alpha/beta", format!("|alpha|^2 + |beta|^2 = {norm:?}, expected 1")));
        }
        Ok(Self { alpha, beta })
    }

    /// `(|ge> + |eg>)/√2`.
    pub fn symmetric() -> Self {
        let s = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        Self { alpha: s, beta: s }
    }

    /// Real amplitudes on the Bloch circle, `α = cos θ`, `β = sin θ`.
    pub fn from_angle(theta: T) -> Self {
        Self {
            alpha: Complex::new(theta.cos(), T::zero()),
            beta: Complex::new(theta.sin(), T::zero()),
        }
    }
}

/// How the single-quantum field states of the two atoms are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldTreatment {
    /// Atoms close together: `|0>_A|1>_B` and `|1>_A|0>_B` are one field state.
    #[default]
    CoLocated,
    /// Atoms far apart: the two single-quantum states are orthogonal.
    Distant,
}

/// Two-atom density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4<T>(Matrix4c<T>);

impl<T: Real> DensityMatrix4<T> {
    pub fn new(m: Matrix4c<T>) -> Result<Self> {
        let herm_tol = T::lit(1e-12).max(T::lit(64.0) * T::epsilon());
        let neg_tol = T::lit(1e-10).max(T::lit(256.0) * T::epsilon());
        if !(m.hermiticity_defect() <= herm_tol) {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        let tr = m.trace().re;
        if !((tr - T::one()).abs() <= herm_tol) {
            return Err(Error::InvalidState(format!("trace is {tr:?}, expected 1")));
        }
        let (vals, _) = hermitian_eigen(&m);
        if vals[0] < -neg_tol {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:?}",
                vals[0]
            )));
        }
        Ok(Self(m))
    }

    /// Normalizes a nonzero positive operator to unit trace.
    pub fn from_unnormalized(m: Matrix4c<T>) -> Result<Self> {
        let tr = m.trace().re;
        if !(tr > T::min_positive_value()) || !tr.is_finite() {
            return Err(Error::InvalidState(format!(
                "cannot normalize operator with trace {tr:?}"
            )));
        }
        Self::new(m.scale(tr.recip()))
    }

    pub fn pure(psi: &[Complex<T>; 4]) -> Result<Self> {
        Self::from_unnormalized(Matrix4c::outer(psi))
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix4c::from_real_diagonal([T::lit(0.25); 4]))
    }

    /// `p |Φ⁺><Φ⁺| + (1 - p) I/4`.
    pub fn werner(p: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::param("p", "must lie in [0, 1]"));
        }
        let s = T::FRAC_1_SQRT_2();
        let z = T::zero();
        let bell = Matrix4c::outer(&[
            Complex::new(s, z),
            Complex::new(z, z),
            Complex::new(z, z),
            Complex::new(s, z),
        ]);
        Self::new(bell.scale(p).add(&Self::maximally_mixed().0.scale(T::one() - p)))
    }

    /// `(1 - eps) ρ + eps I/4`.
    pub fn mix_with_identity(&self, eps: T) -> Result<Self> {
        if !(eps >= T::zero() && eps <= T::one()) {
            return Err(Error::param("eps", "must lie in [0, 1]"));
        }
        Self::new(self.0.scale(T::one() - eps).add(&Self::maximally_mixed().0.scale(eps)))
    }

    /// Exchanges the roles of atoms A and B.
    pub fn swap_atoms(&self) -> Self {
        const PERM: [usize; 4] = [GG, EG, GE, EE];
        let mut m = Matrix4c::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(PERM[i], PERM[j])] = self.0[(i, j)];
            }
        }
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4c<T> {
        &self.0
    }
}

/// Result of [`evolve_pair`]: the normalized state and the summed branch
/// projectors before normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedPair<T> {
    pub rho: DensityMatrix4<T>,
    pub unnormalized: Matrix4c<T>,
}

impl<T: Real> EvolvedPair<T> {
    pub fn trace_unnormalized(&self) -> T {
        self.unnormalized.trace().re
    }

    /// `Tr(ρ J_z)` with the branch weights as they stand, before normalization.
    pub fn jz_mean_unnormalized(&self) -> T {
        jz_trace(&self.unnormalized)
    }

    pub fn jz_mean(&self) -> T {
        jz_mean_pair(&self.rho)
    }
}

fn jz_trace<T: Real>(m: &Matrix4c<T>) -> T {
    m[(EE, EE)].re - m[(GG, GG)].re
}

/// Atom states attached to each orthogonal field state after first-order
/// evolution of both atoms.
pub(crate) fn branches<T: Real>(
    init: &BipartiteInit<T>,
    amps: &TransitionAmplitudes<T>,
    treatment: FieldTreatment,
) -> Vec<[Complex<T>; 4]> {
    let zero = Complex::new(T::zero(), T::zero());
    let d = amps.d0 * amps.d1;
    let (e0, e1) = (amps.eta0(), amps.eta1());
    let (a, b) = (init.alpha * d, init.beta * d);
    let minus_i = Complex::new(T::zero(), -T::one());

    let vacuum = [zero, a, b, zero];
    let one_b = [minus_i * a * e1, zero, zero, minus_i * b * e0];
    let one_a = [minus_i * b * e1, zero, zero, minus_i * a * e0];
    let both = [zero, b * (e0 * e1), a * (e0 * e1), zero];

    match treatment {
        FieldTreatment::Distant => vec![vacuum, one_b, one_a, both],
        FieldTreatment::CoLocated => {
            let single = [
                one_b[0] + one_a[0],
                zero,
                zero,
                one_b[3] + one_a[3],
            ];
            vec![vacuum, single, both]
        }
    }
}

/// Two-atom state after both atoms are accelerated and the field is traced out.
pub fn evolve_pair<T: Real>(
    init: &BipartiteInit<T>,
    amps: &TransitionAmplitudes<T>,
    treatment: FieldTreatment,
) -> Result<EvolvedPair<T>> {
    let unnormalized = branches(init, amps, treatment)
        .iter()
        .fold(Matrix4c::zeros(), |acc, v| acc.add(&Matrix4c::outer(v)));
    let rho = DensityMatrix4::from_unnormalized(unnormalized)?;
    Ok(EvolvedPair { rho, unnormalized })
}

/// Wootters concurrence `max(0, λ₁ - λ₂ - λ₃ - λ₄)`.
pub fn concurrence<T: Real>(rho: &DensityMatrix4<T>) -> Result<T> {
    let l = concurrence_spectrum(rho.matrix())?;
    Ok((l[0] - l[1] - l[2] - l[3]).max(T::zero()).min(T::one()))
}

/// `Tr(ρ J_z)` with `J_z = diag(-1, 0, 0, 1)`.
pub fn jz_mean_pair<T: Real>(rho: &DensityMatrix4<T>) -> T {
    jz_trace(rho.matrix())
}

/// One point of [`pair_entanglement_curve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPoint<T> {
    pub accel: T,
    pub amplitudes: TransitionAmplitudes<T>,
    pub concurrence: T,
    pub xi_e_sq: T,
}

/// Concurrence of the evolved pair and the `N = 2` squeezing parameter at each
/// acceleration, in grid order.
pub fn pair_entanglement_curve<T: Real>(
    template: &DetectorParams<T>,
    a_grid: &[T],
    init: &BipartiteInit<T>,
    treatment: FieldTreatment,
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<PairPoint<T>>> {
    if a_grid.is_empty() {
        return Err(Error::param("a_grid", "must not be empty"));
    }
    a_grid
        .par_iter()
        .map(|&accel| {
            let amplitudes = transition_amplitudes(&template.with_accel(accel), cfg)?;
            let pair = evolve_pair(init, &amplitudes, treatment)?;
            let xi_e_sq = squeezing_parameter(&dicke_distribution(2, &amplitudes)?)?;
            Ok(PairPoint {
                accel,
                amplitudes,
                concurrence: concurrence(&pair.rho)?,
                xi_e_sq,
            })
        })
        .collect()
}
