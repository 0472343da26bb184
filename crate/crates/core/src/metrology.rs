//! Phase sensitivity of a Ramsey interferometer `exp(-iθJ_y)` read out through
//! `<J_z²>`, estimated by error propagation.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::twin_fock::{jz_moments, DickeDistribution, JzMoments};

/// Collective-spin moments of an interferometer input state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMoments<T> {
    pub jz_mean: T,
    pub jz2_mean: T,
    pub jz4_mean: T,
    pub jz_var: T,
    /// Standard deviation of `J_z²`.
    pub djz2: T,
    pub jx2_mean: T,
    /// Standard deviation of `J_x²`.
    pub djx2: T,
    /// `<(J_xJ_z + J_zJ_x)²> + <J_z²J_x² + J_x²J_z²> - 2<J_z²><J_x²>`
    pub v_xz: T,
    pub j2_mean: T,
}

impl<T: Real> SpinMoments<T> {
    pub fn from_parts(jz: JzMoments<T>, jx2_mean: T, djx2: T, v_xz: T) -> Self {
        Self {
            jz_mean: jz.jz_mean,
            jz2_mean: jz.jz2_mean,
            jz4_mean: jz.jz4_mean,
            jz_var: jz.jz_var,
            djz2: jz.djz2,
            jx2_mean,
            djx2,
            v_xz,
            j2_mean: jz.j2_mean,
        }
    }
}

/// Moments of the input state together with the atom number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerInput<T> {
    moments: SpinMoments<T>,
    n: u64,
}

impl<T: Real> InterferometerInput<T> {
    /// Rejects inputs with `<J_x²> = <J_z²>`, for which the signal slope vanishes.
    pub fn new(moments: SpinMoments<T>, n: u64) -> Result<Self> {
        let fields = [
            moments.jz2_mean,
            moments.djz2,
            moments.jx2_mean,
            moments.djx2,
            moments.v_xz,
        ];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("moments", "must be finite"));
        }
        if moments.djz2 < T::zero() || moments.djx2 < T::zero() {
            return Err(Error::param("moments", "standard deviations must be >= 0"));
        }
        let scale = moments.jx2_mean.abs().max(moments.jz2_mean.abs());
        if !((moments.jx2_mean - moments.jz2_mean).abs() > T::lit(64.0) * T::epsilon() * scale) {
            return Err(Error::Domain(format!(
                "<Jx^2> = {:?} and <Jz^2> = {:?} coincide",
                moments.jx2_mean, moments.jz2_mean
            )));
        }
        Ok(Self { moments, n })
    }

    pub fn moments(&self) -> &SpinMoments<T> {
        &self.moments
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    fn denominator(&self) -> T {
        let gap = self.moments.jx2_mean - self.moments.jz2_mean;
        T::lit(4.0) * gap * gap
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSensitivity<T> {
    pub theta_opt: T,
    pub dtheta_sq_opt: T,
    /// Leading-order series estimate, where one applies.
    pub dtheta_sq_series: Option<T>,
}

/// `<J_z²>` after the rotation: `<J_z²> cos²θ + <J_x²> sin²θ`.
pub fn rotated_jz2<T: Real>(input: &InterferometerInput<T>, theta: T) -> T {
    let (s, c) = theta.sin_cos();
    input.moments.jz2_mean * c * c + input.moments.jx2_mean * s * s
}

/// `(Δθ)²` at rotation angle `theta`.
pub fn sensitivity_at<T: Real>(input: &InterferometerInput<T>, theta: T) -> Result<T> {
    let m = &input.moments;
    let half_pi = T::FRAC_PI_2();
    if !(theta >= T::zero() && theta <= half_pi) {
        return Err(Error::Domain(format!("theta = {theta:?} outside [0, pi/2]")));
    }
    let z_term = if m.djz2 == T::zero() {
        T::zero()
    } else if theta == T::zero() {
        return Err(Error::Domain("cot(theta) diverges at theta = 0".into()));
    } else {
        let cot = theta.tan().recip();
        m.djz2 * m.djz2 * cot * cot
    };
    let x_term = if m.djx2 == T::zero() {
        T::zero()
    } else if theta == half_pi {
        return Err(Error::Domain("tan(theta) diverges at theta = pi/2".into()));
    } else {
        let tan = theta.tan();
        m.djx2 * m.djx2 * tan * tan
    };
    Ok((z_term + x_term + m.v_xz) / input.denominator())
}

/// Angle minimizing [`sensitivity_at`]: `tan²θ = Δ(J_z²)/Δ(J_x²)`.
pub fn optimal_theta<T: Real>(input: &InterferometerInput<T>) -> Result<T> {
    let m = &input.moments;
    if m.djz2 == T::zero() {
        return Ok(T::zero());
    }
    if m.djx2 == T::zero() {
        return Err(Error::Domain("optimal angle undefined for Delta(Jx^2) = 0".into()));
    }
    Ok((m.djz2 / m.djx2).sqrt().atan())
}

/// `(Δθ)²` at the optimal angle: `[2Δ(J_z²)Δ(J_x²) + V_xz] / [4(<J_x²> - <J_z²>)²]`.
pub fn optimal_sensitivity<T: Real>(input: &InterferometerInput<T>) -> Result<PhaseSensitivity<T>> {
    let m = &input.moments;
    // with Δ(J_x²) = 0 the minimum sits at the θ → π/2 limit
    let theta_opt = if m.djx2 == T::zero() && m.djz2 > T::zero() {
        T::FRAC_PI_2()
    } else {
        optimal_theta(input)?
    };
    let value = (T::lit(2.0) * m.djz2 * m.djx2 + m.v_xz) / input.denominator();
    if !(value > T::zero()) || !value.is_finite() {
        return Err(Error::Numerical(format!("phase sensitivity evaluated to {value:?}")));
    }
    Ok(PhaseSensitivity {
        theta_opt,
        dtheta_sq_opt: value,
        dtheta_sq_series: None,
    })
}

fn check_dicke<T: Real>(j: T, m: T) -> Result<()> {
    let twice_j = T::lit(2.0) * j;
    if !(j > T::zero()) || (twice_j - twice_j.round()).abs() > T::zero() {
        return Err(Error::param("j", "must be a positive integer or half-integer"));
    }
    if !(m.abs() <= j) || ((j - m) - (j - m).round()).abs() > T::zero() {
        return Err(Error::param("m", "must be one of -j, -j+1, ..., j"));
    }
    Ok(())
}

/// Optimal `(Δθ)²` for the Dicke state `|j, m>`.
pub fn dicke_sensitivity<T: Real>(j: T, m: T) -> Result<T> {
    check_dicke(j, m)?;
    let jj = j * (j + T::one());
    let m2 = m * m;
    let gap = jj - T::lit(3.0) * m2;
    if gap == T::zero() {
        return Err(Error::Domain("j(j+1) = 3m^2 makes the sensitivity diverge".into()));
    }
    let four_m2 = T::lit(4.0) * m2;
    Ok(((four_m2 + T::one()) * (jj - m2) - four_m2) / (T::lit(2.0) * gap * gap))
}

/// `<j, m'| J_± |j, m>` amplitude for a single ladder step; `raise` picks `J_+`.
fn ladder<T: Real>(jj: T, m: T, raise: bool) -> T {
    let v = if raise {
        jj - m * (m + T::one())
    } else {
        jj - m * (m - T::one())
    };
    v.max(T::zero()).sqrt()
}

/// `<j,m| word |j,m>` for a product of ladder operators, applied right to left.
fn ladder_word<T: Real>(jj: T, m: T, word: &[bool]) -> T {
    let mut amp = T::one();
    let mut level = m;
    for &raise in word.iter().rev() {
        amp = amp * ladder(jj, level, raise);
        level = if raise { level + T::one() } else { level - T::one() };
    }
    amp
}

/// Exact moments of the Dicke state `|j, m>`.
pub fn dicke_moments<T: Real>(j: T, m: T) -> Result<SpinMoments<T>> {
    check_dicke(j, m)?;
    let jj = j * (j + T::one());
    let m2 = m * m;
    let jx2 = T::lit(0.5) * (jj - m2);
    // J_x⁴ = (J₊ + J₋)⁴ / 16; only words with two raises and two lowers survive
    let words = [
        [true, true, false, false],
        [true, false, true, false],
        [true, false, false, true],
        [false, true, true, false],
        [false, true, false, true],
        [false, false, true, true],
    ];
    let jx4 = words
        .iter()
        .fold(T::zero(), |acc, w| acc + ladder_word(jj, m, w))
        / T::lit(16.0);
    let four_m2 = T::lit(4.0) * m2;
    Ok(SpinMoments {
        jz_mean: m,
        jz2_mean: m2,
        jz4_mean: m2 * m2,
        jz_var: T::zero(),
        djz2: T::zero(),
        jx2_mean: jx2,
        djx2: (jx4 - jx2 * jx2).max(T::zero()).sqrt(),
        v_xz: T::lit(0.5) * (four_m2 + T::one()) * (jj - m2) - T::lit(2.0) * m2,
        j2_mean: jj,
    })
}

/// `Σ_{m≠0} (w_m/Z)(4m² + 1)`.
fn excited_sum<T: Real>(dist: &DickeDistribution<T>) -> T {
    dist.normalized()
        .filter(|(m, _)| *m != 0)
        .fold(T::zero(), |acc, (m, w)| {
            let mf = T::lit(m as f64);
            acc + w * (T::lit(4.0) * mf * mf + T::one())
        })
}

/// Moments of the accelerated twin-Fock state: exact `J_z` statistics from the
/// weights, and the leading-order `J_x` family valid while `|B_m|² << B₀²`.
pub fn accelerated_moments<T: Real>(dist: &DickeDistribution<T>) -> SpinMoments<T> {
    let jz = jz_moments(dist);
    let jj = jz.j2_mean;
    let b0_sq = dist.b0_sq();
    let half = T::lit(0.5);
    SpinMoments::from_parts(
        jz,
        half * jj * b0_sq,
        b0_sq.sqrt() / (T::lit(2.0) * T::SQRT_2()) * jj,
        half * jj * (T::one() + excited_sum(dist)),
    )
}

/// Both estimates of `(Δθ)²` for an accelerated twin-Fock state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceleratedSensitivity<T> {
    pub moments: SpinMoments<T>,
    /// Optimal-angle formula on [`accelerated_moments`]; `None` when those
    /// moments give `<J_x²> = <J_z²>`.
    pub optimal: Option<PhaseSensitivity<T>>,
    /// `1/(2j(j+1)) + √2 B₀ Δ(J_z²)/(2j(j+1)) + Σ_{m≠0}|B_m|²(4m²+1)/(2j(j+1))`
    pub series: T,
}

impl<T: Real> AcceleratedSensitivity<T> {
    pub fn dtheta_sq_opt(&self) -> Option<T> {
        self.optimal.map(|p| p.dtheta_sq_opt)
    }
}

pub fn accelerated_sensitivity<T: Real>(dist: &DickeDistribution<T>) -> Result<AcceleratedSensitivity<T>> {
    let moments = accelerated_moments(dist);
    let two_jj = T::lit(2.0) * moments.j2_mean;
    let series = (T::one() + T::SQRT_2() * dist.b0_sq().sqrt() * moments.djz2 + excited_sum(dist)) / two_jj;
    let optimal = match InterferometerInput::new(moments, dist.n()) {
        Ok(input) => {
            let mut p = optimal_sensitivity(&input)?;
            p.dtheta_sq_series = Some(series);
            Some(p)
        }
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(AcceleratedSensitivity {
        moments,
        optimal,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::TransitionAmplitudes;
    use crate::twin_fock::dicke_distribution;
    use approx::assert_relative_eq;

    fn input(j: f64, m: f64) -> InterferometerInput<f64> {
        InterferometerInput::new(dicke_moments(j, m).unwrap(), (2.0 * j) as u64).unwrap()
    }

    #[test]
    fn rotation_endpoints() {
        let inp = input(3.0, 1.0);
        let m = inp.moments();
        assert_relative_eq!(rotated_jz2(&inp, 0.0), m.jz2_mean);
        assert_relative_eq!(rotated_jz2(&inp, std::f64::consts::FRAC_PI_2), m.jx2_mean, max_relative = 1e-15);
        assert_relative_eq!(
            rotated_jz2(&inp, std::f64::consts::FRAC_PI_4),
            0.5 * (m.jz2_mean + m.jx2_mean),
            max_relative = 1e-15
        );
    }

    #[test]
    fn twin_fock_pair_reaches_quarter() {
        let inp = input(1.0, 0.0);
        let theta = optimal_theta(&inp).unwrap();
        assert_eq!(theta, 0.0);
        assert_relative_eq!(sensitivity_at(&inp, theta).unwrap(), 0.25, max_relative = 1e-15);
    }

    #[test]
    fn dicke_closed_forms() {
        assert_relative_eq!(dicke_sensitivity(50.0, 0.0).unwrap(), 1.960_784_313_725_490_3e-4, max_relative = 1e-14);
        assert_relative_eq!(dicke_sensitivity(1.0, 1.0).unwrap(), 0.5, max_relative = 1e-15);
        assert!(dicke_sensitivity(1.0, 2.0).is_err());
        assert!(dicke_sensitivity(1.0, 0.5).is_err());
    }

    #[test]
    fn dicke_moments_reproduce_closed_form() {
        for (j, m) in [(1.0, 0.0), (1.0, 1.0), (50.0, 0.0), (50.0, 50.0), (7.5, 2.5), (10.0, 3.0)] {
            let p = optimal_sensitivity(&input(j, m)).unwrap();
            assert_relative_eq!(p.dtheta_sq_opt, dicke_sensitivity(j, m).unwrap(), max_relative = 1e-13);
        }
    }

    #[test]
    fn divergent_endpoints_rejected() {
        let mut mom = dicke_moments(4.0, 1.0).unwrap();
        mom.djz2 = 0.3;
        let inp = InterferometerInput::new(mom, 8).unwrap();
        assert!(sensitivity_at(&inp, 0.0).is_err());
        assert!(sensitivity_at(&inp, std::f64::consts::FRAC_PI_2).is_err());
        assert!(sensitivity_at(&inp, 2.0).is_err());
    }

    #[test]
    fn vanishing_x_spread_puts_optimum_at_quarter_turn() {
        let mut mom = dicke_moments(4.0, 0.0).unwrap();
        mom.djz2 = 0.3;
        mom.djx2 = 0.0;
        let inp = InterferometerInput::new(mom, 8).unwrap();
        assert!(optimal_theta(&inp).is_err());
        let p = optimal_sensitivity(&inp).unwrap();
        assert_eq!(p.theta_opt, std::f64::consts::FRAC_PI_2);
        let near = sensitivity_at(&inp, std::f64::consts::FRAC_PI_2 - 1e-6).unwrap();
        assert_relative_eq!(p.dtheta_sq_opt, near, max_relative = 1e-9);
    }

    #[test]
    fn equal_spreads_give_quarter_turn() {
        let mut mom = dicke_moments(4.0, 1.0).unwrap();
        mom.djz2 = mom.djx2;
        let inp = InterferometerInput::new(mom, 8).unwrap();
        assert_relative_eq!(optimal_theta(&inp).unwrap(), std::f64::consts::FRAC_PI_4, max_relative = 1e-15);
        let p = optimal_sensitivity(&inp).unwrap();
        assert_relative_eq!(sensitivity_at(&inp, p.theta_opt).unwrap(), p.dtheta_sq_opt, max_relative = 1e-12);
    }

    #[test]
    fn degenerate_input_rejected() {
        let mut mom = dicke_moments(2.0, 0.0).unwrap();
        mom.jz2_mean = mom.jx2_mean;
        assert!(InterferometerInput::new(mom, 4).is_err());
        // |j, j> has <Jx^2> < <Jz^2> and is still a valid input
        assert!(InterferometerInput::new(dicke_moments(3.0, 3.0).unwrap(), 6).is_ok());
    }

    #[test]
    fn zero_coupling_accelerated_state() {
        let d = dicke_distribution(100, &TransitionAmplitudes::from_eta_sq(0.0, 0.0).unwrap()).unwrap();
        let mom = accelerated_moments(&d);
        assert_relative_eq!(mom.jx2_mean, 0.5 * 2550.0);
        assert_relative_eq!(mom.v_xz, 0.5 * 2550.0);
        assert_eq!(mom.djz2, 0.0);
        let s = accelerated_sensitivity(&d).unwrap();
        let heisenberg = 1.0 / (2.0 * 2550.0);
        assert_relative_eq!(s.series, heisenberg, max_relative = 1e-15);
        assert_relative_eq!(s.dtheta_sq_opt().unwrap(), heisenberg, max_relative = 1e-15);
    }
}
