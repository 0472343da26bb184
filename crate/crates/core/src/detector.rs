//! Single uniformly accelerated two-level detector coupled to a massive
//! scalar field in 1+1 dimensions.
//!
//! The mode integrals are evaluated in rapidity, `k = m sinh ξ`, and the
//! proper-time integral runs along `Im τ = δ` instead of the real axis. On
//! that line the field phase acquires a positive imaginary part, which turns
//! the fast oscillation at large `a` into exponential decay.

use std::cell::{Cell, RefCell};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{integrate_complex_best_effort, integrate_complex_with_breaks, MomentumCutoff, QuadratureConfig};
use crate::scalar::Real;

/// Below this acceleration the phase is evaluated in product form; the reduced
/// form drops `k/a`, which costs `eps * k / a` of absolute phase accuracy.
const SMALL_ACCEL: f64 = 0.1;
const MAX_RAPIDITY_DOUBLINGS: usize = 12;

/// Physical inputs for one detector, in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams<T> {
    pub coupling: T,
    pub sigma: T,
    pub omega: T,
    pub accel: T,
    pub mass: T,
}

impl<T: Real> DetectorParams<T> {
    pub fn new(coupling: T, sigma: T, omega: T, accel: T, mass: T) -> Result<Self> {
        let p = Self {
            coupling,
            sigma,
            omega,
            accel,
            mass,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: T| x.is_finite();
        if !(self.coupling >= T::zero()) || !finite(self.coupling) {
            return Err(Error::param("lambda", "must be finite and >= 0"));
        }
        if !(self.sigma > T::zero()) || !finite(self.sigma) {
            return Err(Error::param("sigma", "must be finite and > 0"));
        }
        if !(self.omega > T::zero()) || !finite(self.omega) {
            return Err(Error::param("omega", "must be finite and > 0"));
        }
        if !(self.accel >= T::zero()) || !finite(self.accel) {
            return Err(Error::param("accel", "must be finite and >= 0"));
        }
        if !(self.mass > T::zero()) || !finite(self.mass) {
            return Err(Error::param("mass", "must be finite and > 0"));
        }
        Ok(())
    }

    pub fn with_coupling(self, coupling: T) -> Self {
        Self { coupling, ..self }
    }

    pub fn with_sigma(self, sigma: T) -> Self {
        Self { sigma, ..self }
    }

    pub fn with_omega(self, omega: T) -> Self {
        Self { omega, ..self }
    }

    pub fn with_accel(self, accel: T) -> Self {
        Self { accel, ..self }
    }

    pub fn with_mass(self, mass: T) -> Self {
        Self { mass, ..self }
    }
}

/// Minkowski coordinates of the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub t: T,
    pub x: T,
}

/// Which sideband of the gap enters the phase: `+Ω` excites the atom while
/// emitting a quantum, `-Ω` de-excites it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transition {
    Excitation,
    Deexcitation,
}

impl Transition {
    fn signed_gap<T: Real>(self, omega: T) -> T {
        match self {
            Transition::Excitation => omega,
            Transition::Deexcitation => -omega,
        }
    }
}

/// First-order transition weights of one detector and the normalizations of
/// the evolved states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionAmplitudes<T> {
    /// `|η₀|²`, emission with excitation.
    pub eta0_sq: T,
    /// `|η₁|²`, emission with de-excitation.
    pub eta1_sq: T,
    pub d0: T,
    pub d1: T,
    pub eta0_err: T,
    pub eta1_err: T,
    /// Combined quadrature error estimate of the two weights.
    pub err: T,
}

impl<T: Real> TransitionAmplitudes<T> {
    /// Amplitudes with given weights and no quadrature error attached.
    pub fn from_eta_sq(eta0_sq: T, eta1_sq: T) -> Result<Self> {
        for (field, v) in [("eta0_sq", eta0_sq), ("eta1_sq", eta1_sq)] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::param(field, "must be finite and >= 0"));
            }
        }
        Ok(Self::assemble(eta0_sq, eta1_sq, T::zero(), T::zero()))
    }

    fn assemble(eta0_sq: T, eta1_sq: T, eta0_err: T, eta1_err: T) -> Self {
        Self {
            eta0_sq,
            eta1_sq,
            d0: (T::one() + eta0_sq).sqrt().recip(),
            d1: (T::one() + eta1_sq).sqrt().recip(),
            eta0_err,
            eta1_err,
            err: eta0_err + eta1_err,
        }
    }

    pub fn eta0(&self) -> T {
        self.eta0_sq.sqrt()
    }

    pub fn eta1(&self) -> T {
        self.eta1_sq.sqrt()
    }

    /// Same weights with `η₀` and `η₁` exchanged.
    pub fn swapped(&self) -> Self {
        Self::assemble(self.eta1_sq, self.eta0_sq, self.eta1_err, self.eta0_err)
    }
}

/// Trend of the excitation weight across an increasing acceleration grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Unruh,
    AntiUnruh,
    Mixed,
}

/// Position on the hyperbola of proper acceleration `a` at proper time `tau`.
pub fn trajectory<T: Real>(a: T, tau: T) -> TrajectoryPoint<T> {
    if a == T::zero() {
        return TrajectoryPoint { t: tau, x: T::zero() };
    }
    let half = T::lit(0.5) * a * tau;
    let sh = half.sinh();
    TrajectoryPoint {
        t: (a * tau).sinh() / a,
        // cosh(aτ) - 1 = 2 sinh²(aτ/2), which keeps small aτ accurate
        x: T::lit(2.0) * sh * sh / a,
    }
}

/// Gaussian switching profile `exp(-τ²/(2σ²))`.
pub fn switching<T: Real>(tau: T, sigma: T) -> T {
    let r = tau / sigma;
    (-T::lit(0.5) * r * r).exp()
}

pub fn mode_frequency<T: Real>(k: T, m: T) -> T {
    k.hypot(m)
}

/// Contour offset and proper-time window for the integral at rapidity `xi`.
/// An empty window means the integrand underflows everywhere.
struct Contour<T> {
    delta: T,
    lo: T,
    hi: T,
}

fn contour<T: Real>(p: &DetectorParams<T>, xi: T, cfg: &QuadratureConfig<T>) -> Option<Contour<T>> {
    let a = p.accel;
    let span = cfg.tau_span_sigmas * p.sigma;
    let mut delta = p.sigma.min(p.omega.recip());
    let (mut lo, mut hi) = (-span, span);
    if a > T::zero() {
        delta = delta.min(T::FRAC_PI_2() / a);
        // the field factor is exp(-(m/a) cosh(a s - ξ) sin(aδ)); drop where it underflows
        let cut = -T::min_positive_value().ln() + T::lit(2.0);
        let threshold = cut * a / (p.mass * (a * delta).sin());
        if threshold <= T::one() {
            return None;
        }
        let reach = threshold.acosh();
        lo = lo.max((xi - reach) / a);
        hi = hi.min((xi + reach) / a);
    }
    if lo >= hi {
        return None;
    }
    Some(Contour { delta, lo, hi })
}

/// `ωt - kx` along the worldline at complex proper time, minus the constant
/// `k/a` when `reduced` is set (that constant only contributes a global phase).
fn field_phase<T: Real>(a: T, m: T, xi: T, z: Complex<T>, reduced: bool) -> Complex<T> {
    if a == T::zero() {
        return z * (m * xi.cosh());
    }
    if reduced {
        (z * a - xi).sinh() * (m / a)
    } else {
        let half = z * (T::lit(0.5) * a);
        half.sinh() * (half - xi).cosh() * (T::lit(2.0) * m / a)
    }
}

/// `∫ χ(τ) exp(i ν τ + i φ(τ)) dτ` at rapidity `xi`, with its error estimate
/// and whether the requested tolerance was met.
fn overlap<T: Real>(
    p: &DetectorParams<T>,
    gap: T,
    xi: T,
    reduced: bool,
    cfg: &QuadratureConfig<T>,
) -> Result<(Complex<T>, T, bool)> {
    let Some(Contour { delta, lo, hi }) = contour(p, xi, cfg) else {
        return Ok((Complex::new(T::zero(), T::zero()), T::zero(), true));
    };
    let (a, m) = (p.accel, p.mass);
    let inv_two_var = (T::lit(2.0) * p.sigma * p.sigma).recip();
    let i = Complex::new(T::zero(), T::one());
    let integrand = |s: T| {
        let z = Complex::new(s, delta);
        let phase = z * gap + field_phase(a, m, xi, z, reduced);
        (-(z * z) * inv_two_var + i * phase).exp()
    };

    let mut points: Vec<T> = (0..=4)
        .map(|j| lo + (hi - lo) * T::from_count(j) / T::lit(4.0))
        .collect();
    if a > T::zero() {
        let turn = xi / a;
        if turn > lo && turn < hi && points.iter().all(|&q| q != turn) {
            points.push(turn);
            points.sort_by(|x, y| x.partial_cmp(y).unwrap());
        }
    }
    let (q, converged) = integrate_complex_best_effort(integrand, &points, cfg)
        .map_err(|e| e.with_context(format!("proper-time integral at rapidity {xi:?}")))?;
    Ok((q.value, q.err_estimate, converged))
}

fn use_reduced_phase<T: Real>(a: T) -> bool {
    a >= T::lit(SMALL_ACCEL)
}

/// Response integral `I_{±,k}` for a single field mode.
pub fn response_integral<T: Real>(
    params: &DetectorParams<T>,
    k: T,
    transition: Transition,
    cfg: &QuadratureConfig<T>,
) -> Result<Complex<T>> {
    params.validate()?;
    cfg.validate()?;
    if !k.is_finite() {
        return Err(Error::param("k", "must be finite"));
    }
    response_integral_signed(params, transition.signed_gap(params.omega), k, cfg)
}

fn response_integral_signed<T: Real>(
    params: &DetectorParams<T>,
    gap: T,
    k: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Complex<T>> {
    let (a, m) = (params.accel, params.mass);
    let xi = (k / m).asinh();
    let omega_k = mode_frequency(k, m);
    let reduced = use_reduced_phase(a);
    let (mut j, err, converged) = overlap(params, gap, xi, reduced, cfg)?;
    if !converged {
        let (lo, hi) = contour(params, xi, cfg).map_or((T::zero(), T::zero()), |c| (c.lo, c.hi));
        return Err(Error::ConvergenceFailure {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
            err_estimate: err.to_f64().unwrap_or(f64::NAN),
            subdivisions: cfg.max_subdivisions,
            context: format!("proper-time integral at rapidity {xi:?}"),
        });
    }
    if reduced {
        j = j * Complex::from_polar(T::one(), k / a);
    }
    Ok(j / (T::lit(4.0) * T::PI() * omega_k).sqrt())
}

/// `∫ dk |I_k|²` for one sign of the gap, with its error estimate.
fn mode_weight<T: Real>(p: &DetectorParams<T>, gap: T, cfg: &QuadratureConfig<T>) -> Result<(T, T)> {
    let four_pi = T::lit(4.0) * T::PI();
    let reduced = use_reduced_phase(p.accel);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    // real part: |J|²/4π; imaginary part carries the propagated inner error
    let integrand = |xi: T| {
        if failure.borrow().is_some() {
            return Complex::new(T::zero(), T::zero());
        }
        match overlap(p, gap, xi, reduced, cfg) {
            Ok((j, e, _)) => {
                let r = j.norm();
                Complex::new(r * r / four_pi, (T::lit(2.0) * r * e + e * e) / four_pi)
            }
            Err(err) => {
                *failure.borrow_mut() = Some(err);
                Complex::new(T::zero(), T::zero())
            }
        }
    };
    let inner = Cell::new(T::zero());
    let run = |points: &[T]| -> Result<(T, T)> {
        let q = integrate_complex_with_breaks(&integrand, points, cfg);
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        let q = q.map_err(|e| e.with_context("mode integral"))?;
        inner.set(inner.get() + q.value.im.abs());
        Ok((q.value.re, q.err_estimate + q.value.im.abs()))
    };
    // a proper-time integral that ran out of subdivisions is kept as long as
    // the error it carries into the mode integral stays small
    let settled = |total: T, lo: T, hi: T| -> Result<()> {
        let limit = cfg.abs_tol.max(T::lit(10.0) * cfg.rel_tol * total.abs());
        if inner.get() <= limit {
            return Ok(());
        }
        Err(Error::ConvergenceFailure {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
            err_estimate: inner.get().to_f64().unwrap_or(f64::NAN),
            subdivisions: cfg.max_subdivisions,
            context: "proper-time integrals too inaccurate for the mode integral".into(),
        })
    };

    let m = p.mass;
    let core_k = match cfg.k_max {
        MomentumCutoff::Fixed(k) => k,
        MomentumCutoff::Adaptive => {
            T::lit(8.0) * p.omega.max(m).max(p.sigma.recip())
        }
    };
    let core = (core_k / m).asinh();
    let mut points: Vec<T> = (0..=8)
        .map(|j| -core + core * T::from_count(j) / T::lit(4.0))
        .collect();
    if gap.abs() > m {
        let res = (gap.abs() / m).acosh();
        if res < core {
            points.extend([-res, res]);
            points.sort_by(|x, y| x.partial_cmp(y).unwrap());
            points.dedup();
        }
    }
    let (mut total, mut err) = run(&points)?;
    if let MomentumCutoff::Fixed(_) = cfg.k_max {
        settled(total, -core, core)?;
        return Ok((total.max(T::zero()), err));
    }

    let mut edge = core;
    for _ in 0..MAX_RAPIDITY_DOUBLINGS {
        let (right, right_err) = run(&[edge, T::lit(2.0) * edge])?;
        let (left, left_err) = run(&[-T::lit(2.0) * edge, -edge])?;
        let shell = right + left;
        total = total + shell;
        err = err + right_err + left_err;
        edge = T::lit(2.0) * edge;
        if shell.abs() <= (cfg.k_tail_tol * total.abs()).max(cfg.abs_tol) {
            settled(total, -edge, edge)?;
            return Ok((total.max(T::zero()), err + shell.abs()));
        }
    }
    Err(Error::ConvergenceFailure {
        lo: -edge.to_f64().unwrap_or(f64::NAN),
        hi: edge.to_f64().unwrap_or(f64::NAN),
        err_estimate: err.to_f64().unwrap_or(f64::NAN),
        subdivisions: MAX_RAPIDITY_DOUBLINGS,
        context: "momentum cutoff did not settle".into(),
    })
}

/// Transition weights `|η₀|² = λ²∫dk|I₊|²` and `|η₁|² = λ²∫dk|I₋|²` together
/// with the state normalizations.
pub fn transition_amplitudes<T: Real>(
    params: &DetectorParams<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<TransitionAmplitudes<T>> {
    params.validate()?;
    cfg.validate()?;
    let lambda_sq = params.coupling * params.coupling;
    if lambda_sq == T::zero() {
        return Ok(TransitionAmplitudes::assemble(T::zero(), T::zero(), T::zero(), T::zero()));
    }
    let (plus, minus) = rayon::join(
        || mode_weight(params, params.omega, cfg),
        || mode_weight(params, -params.omega, cfg),
    );
    let (w0, e0) = plus?;
    let (w1, e1) = minus?;
    Ok(TransitionAmplitudes::assemble(
        lambda_sq * w0,
        lambda_sq * w1,
        lambda_sq * e0,
        lambda_sq * e1,
    ))
}

/// Classifies the trend of `|η₀|²` over `a_grid`.
pub fn classify_regime<T: Real>(
    params: &DetectorParams<T>,
    a_grid: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<Regime> {
    params.validate()?;
    if a_grid.len() < 3 {
        return Err(Error::param("a_grid", "needs at least three points"));
    }
    if a_grid.iter().any(|&a| !(a > T::zero()) || !a.is_finite()) {
        return Err(Error::param("a_grid", "accelerations must be finite and > 0"));
    }
    if a_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::param("a_grid", "must be strictly increasing"));
    }
    use rayon::prelude::*;
    let etas = a_grid
        .par_iter()
        .map(|&a| transition_amplitudes(&params.with_accel(a), cfg).map(|t| t.eta0_sq))
        .collect::<Result<Vec<T>>>()?;
    let up = etas.windows(2).all(|w| w[1] > w[0]);
    let down = etas.windows(2).all(|w| w[1] < w[0]);
    Ok(match (up, down) {
        (true, _) => Regime::Unruh,
        (_, true) => Regime::AntiUnruh,
        _ => Regime::Mixed,
    })
}

/// Unruh temperature in kelvin for a proper acceleration in m/s².
pub fn unruh_temperature_si(a_si: f64) -> Result<f64> {
    const HBAR: f64 = 1.054_571_817e-34;
    const C: f64 = 299_792_458.0;
    const K_B: f64 = 1.380_649e-23;
    if !(a_si >= 0.0) || !a_si.is_finite() {
        return Err(Error::param("a_si", "must be finite and >= 0"));
    }
    Ok(HBAR * a_si / (2.0 * std::f64::consts::PI * C * K_B))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig1(omega: f64, accel: f64) -> DetectorParams<f64> {
        DetectorParams::new(1.0, 0.4, omega, accel, 1.0).unwrap()
    }

    #[test]
    fn trajectory_values() {
        assert_eq!(trajectory(1.0, 0.0), TrajectoryPoint { t: 0.0, x: 0.0 });
        assert_eq!(trajectory(0.0, 3.7), TrajectoryPoint { t: 3.7, x: 0.0 });
        let p = trajectory(1.0_f64, 1.0);
        assert_relative_eq!(p.t, 1.0_f64.sinh(), max_relative = 1e-15);
        assert_relative_eq!(p.x, 1.0_f64.cosh() - 1.0, max_relative = 1e-14);
        assert_relative_eq!(p.t, 1.175_201_2, epsilon = 1e-7);
        assert_relative_eq!(p.x, 0.543_080_6, epsilon = 1e-7);
    }

    #[test]
    fn hyperbola_identity() {
        for &a in &[0.01, 0.5, 1.0, 3.0, 10.0] {
            for i in -40..=40 {
                let tau = f64::from(i) * 0.5 / a;
                if (a * tau).abs() > 20.0 {
                    continue;
                }
                let p = trajectory(a, tau);
                let lhs = (p.t * a).powi(2) - (p.x * a + 1.0).powi(2);
                let scale = (p.x * a + 1.0).powi(2);
                assert!((lhs + 1.0).abs() <= 1e-12 * scale, "a={a} tau={tau}");
            }
        }
    }

    #[test]
    fn switching_profile() {
        assert_eq!(switching(0.0, 0.4), 1.0);
        assert_relative_eq!(switching(0.4, 0.4), (-0.5_f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(switching(0.4, 0.4), 0.606_530_7, epsilon = 1e-7);
        for t in [0.1, 0.7, 2.3] {
            assert_eq!(switching(t, 0.4), switching(-t, 0.4));
        }
    }

    #[test]
    fn mode_frequency_values() {
        assert_eq!(mode_frequency(0.0, 1.0), 1.0);
        assert_eq!(mode_frequency(3.0, 4.0), 5.0);
        assert_eq!(mode_frequency(-2.5, 1.0), mode_frequency(2.5, 1.0));
    }

    #[test]
    fn parameter_validation() {
        assert!(DetectorParams::new(1.0, -0.4, 0.5, 1.0, 1.0).is_err());
        assert!(DetectorParams::new(1.0, 0.4, 0.0, 1.0, 1.0).is_err());
        assert!(DetectorParams::new(-1.0, 0.4, 0.5, 1.0, 1.0).is_err());
        assert!(DetectorParams::new(1.0, 0.4, 0.5, -1.0, 1.0).is_err());
        assert!(DetectorParams::new(1.0, 0.4, 0.5, 1.0, 0.0).is_err());
        assert!(DetectorParams::new(0.0, 0.4, 0.5, 0.0, 1.0).is_ok());
    }

    #[test]
    fn response_integral_ignores_coupling() {
        let cfg = QuadratureConfig::default();
        let p = fig1(0.5, 2.0);
        let a = response_integral(&p.with_coupling(0.1), 0.7, Transition::Excitation, &cfg).unwrap();
        let b = response_integral(&p.with_coupling(10.0), 0.7, Transition::Excitation, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn response_integral_inertial_limit() {
        let cfg = QuadratureConfig::default();
        for &accel in &[0.0, 1e-7, 1e-4] {
            for &k in &[-2.0, 0.0, 0.3, 1.5] {
                let p = fig1(0.5, accel);
                let i = response_integral(&p, k, Transition::Excitation, &cfg).unwrap();
                let w = mode_frequency(k, 1.0);
                let s: f64 = 0.4;
                let exact = s * s / (2.0 * w) * (-s * s * (0.5 + w) * (0.5 + w)).exp();
                assert_relative_eq!(i.norm_sqr(), exact, max_relative = 1e-3);
            }
        }
    }

    #[test]
    fn sign_flip_is_negated_gap() {
        let cfg = QuadratureConfig::default();
        for &(k, accel) in &[(0.4, 1.0), (-1.3, 3.0), (2.0, 0.2)] {
            let p = fig1(0.5, accel);
            let minus = response_integral(&p, k, Transition::Deexcitation, &cfg).unwrap();
            let flipped = response_integral_signed(&p, -0.5, k, &cfg).unwrap();
            assert_eq!(minus, flipped);
            let plus = response_integral(&p, k, Transition::Excitation, &cfg).unwrap();
            assert!((plus - minus).norm() > 1e-6);
        }
    }

    #[test]
    fn contour_shift_agrees_with_real_axis() {
        // plain real-axis trapezoid at a single mode
        let p = fig1(0.5, 1.0);
        let k = 0.8;
        let w = mode_frequency(k, 1.0);
        let n = 20_000;
        let span = 3.2;
        let h = 2.0 * span / n as f64;
        let mut acc = Complex::new(0.0, 0.0);
        for j in 0..=n {
            let tau = -span + h * j as f64;
            let tr = trajectory(1.0, tau);
            let ph = 0.5 * tau + w * tr.t - k * tr.x;
            let wgt = if j == 0 || j == n { 0.5 } else { 1.0 };
            acc += Complex::from_polar(switching(tau, 0.4) * wgt, ph);
        }
        let reference = acc * h / (4.0 * std::f64::consts::PI * w).sqrt();
        let got = response_integral(&p, k, Transition::Excitation, &QuadratureConfig::default()).unwrap();
        assert!((got - reference).norm() < 1e-10 * reference.norm().max(1e-3));
    }

    #[test]
    fn zero_coupling_gives_trivial_amplitudes() {
        let t = transition_amplitudes(&fig1(0.5, 2.0).with_coupling(0.0), &QuadratureConfig::default())
            .unwrap();
        assert_eq!((t.eta0_sq, t.eta1_sq, t.d0, t.d1), (0.0, 0.0, 1.0, 1.0));
    }

    #[test]
    fn coupling_scales_quadratically() {
        let cfg = QuadratureConfig::default();
        let p = fig1(0.5, 3.0);
        let one = transition_amplitudes(&p, &cfg).unwrap();
        let two = transition_amplitudes(&p.with_coupling(2.0), &cfg).unwrap();
        assert_eq!(two.eta0_sq, 4.0 * one.eta0_sq);
        assert_eq!(two.eta1_sq, 4.0 * one.eta1_sq);
    }

    #[test]
    fn small_gap_weights_coincide() {
        let cfg = QuadratureConfig::default();
        let t = transition_amplitudes(&fig1(1e-9, 2.0), &cfg).unwrap();
        assert_relative_eq!(t.eta0_sq, t.eta1_sq, max_relative = 1e-8);
    }

    #[test]
    fn normalizations_follow_weights() {
        let t = transition_amplitudes(&fig1(5.0, 4.0), &QuadratureConfig::default()).unwrap();
        assert_relative_eq!(t.d0, 1.0 / (1.0 + t.eta0_sq).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(t.d1, 1.0 / (1.0 + t.eta1_sq).sqrt(), max_relative = 1e-15);
        assert!(t.d0 > 0.0 && t.d0 < 1.0 && t.d1 > 0.0 && t.d1 < 1.0);
    }

    #[test]
    fn fixed_cutoff_truncates() {
        let adaptive = QuadratureConfig::default();
        let fixed = QuadratureConfig {
            k_max: MomentumCutoff::Fixed(0.5),
            ..adaptive
        };
        let p = fig1(0.5, 1.0);
        let full = transition_amplitudes(&p, &adaptive).unwrap();
        let part = transition_amplitudes(&p, &fixed).unwrap();
        assert!(part.eta0_sq < full.eta0_sq && part.eta0_sq > 0.0);
    }

    #[test]
    fn regime_grid_validation() {
        let cfg = QuadratureConfig::default();
        let p = fig1(0.5, 1.0);
        assert!(classify_regime(&p, &[1.0, 2.0], &cfg).is_err());
        assert!(classify_regime(&p, &[1.0, 2.0, 2.0], &cfg).is_err());
        assert!(classify_regime(&p, &[0.0, 1.0, 2.0], &cfg).is_err());
    }

    #[test]
    fn unruh_temperature() {
        assert_eq!(unruh_temperature_si(0.0).unwrap(), 0.0);
        let t = unruh_temperature_si(1e20).unwrap();
        assert!(t > 0.3 && t < 0.5);
        let expected = 1.054_571_817e-34 * 2.47e20 / (2.0 * std::f64::consts::PI * 299_792_458.0 * 1.380_649e-23);
        assert_relative_eq!(unruh_temperature_si(2.47e20).unwrap(), expected, max_relative = 1e-15);
        assert_relative_eq!(expected, 1.0, epsilon = 0.01);
        assert!(unruh_temperature_si(-1.0).is_err());
    }

    #[test]
    fn single_precision_runs() {
        let p = DetectorParams::<f32>::new(1.0, 0.4, 0.5, 2.0, 1.0).unwrap();
        let cfg = QuadratureConfig::<f32> {
            rel_tol: 1e-4,
            abs_tol: 1e-7,
            k_tail_tol: 1e-4,
            ..QuadratureConfig::default()
        };
        let t = transition_amplitudes(&p, &cfg).unwrap();
        let d = transition_amplitudes(&fig1(0.5, 2.0), &QuadratureConfig::default()).unwrap();
        assert!((f64::from(t.eta0_sq) - d.eta0_sq).abs() < 1e-3 * d.eta0_sq);
    }
}
