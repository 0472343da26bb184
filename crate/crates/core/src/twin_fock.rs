//! Dicke-level weights of an accelerated twin-Fock state `|j, 0>` and the
//! collective-spin statistics built from them.
//!
//! Every weight is kept as a logarithm: binomials such as `C(5000, 2500)`
//! are far outside the range of any float format.

use crate::detector::TransitionAmplitudes;
use crate::error::{Error, Result};
use crate::numerics::{log_binomial, log_sum_exp, LogWeight};
use crate::scalar::Real;

fn check_even(n: u64) -> Result<u64> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::param("N", format!("must be an even integer >= 2, got {n}")));
    }
    Ok(n / 2)
}

/// `ln C(h, k)` for `k = 0..=h`.
fn log_binomial_row<T: Real>(h: u64) -> Result<Vec<T>> {
    (0..=h).map(|k| log_binomial(h, k)).collect()
}

/// Log-sum of terms that may span thousands of orders of magnitude. Terms
/// smaller than the largest by more than the working precision times the
/// term count cannot change the result and are dropped before summation.
fn log_sum_pruned<T: Real>(terms: &[T]) -> LogWeight<T> {
    let max = terms.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() {
        return LogWeight::zero();
    }
    let floor = max + T::epsilon().ln() - T::from_count(terms.len() as u64).ln() - T::lit(2.0);
    let kept: Vec<LogWeight<T>> = terms
        .iter()
        .filter(|&&t| t >= floor)
        .map(|&t| LogWeight(t))
        .collect();
    log_sum_exp(&kept)
}

struct Logs<T> {
    h: u64,
    row: Vec<T>,
    /// `ln(D₀D₁)`
    ln_d: T,
    /// `ln(η₀η₁)`, `-inf` when either vanishes
    ln_eta01: LogWeight<T>,
    ln_eta0: LogWeight<T>,
    ln_eta1: LogWeight<T>,
}

impl<T: Real> Logs<T> {
    fn new(n: u64, amps: &TransitionAmplitudes<T>) -> Result<Self> {
        let h = check_even(n)?;
        for (field, v) in [("eta0_sq", amps.eta0_sq), ("eta1_sq", amps.eta1_sq)] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::param(field, "must be finite and >= 0"));
            }
        }
        let half = T::lit(0.5);
        let ln_eta0 = LogWeight(half * amps.eta0_sq.ln());
        let ln_eta1 = LogWeight(half * amps.eta1_sq.ln());
        Ok(Self {
            h,
            row: log_binomial_row(h)?,
            ln_d: -half * (amps.eta0_sq.ln_1p() + amps.eta1_sq.ln_1p()),
            ln_eta01: ln_eta0.mul(ln_eta1),
            ln_eta0,
            ln_eta1,
        })
    }

    fn b0_sq(&self) -> LogWeight<T> {
        let n = T::from_count(2 * self.h);
        let terms: Vec<T> = (0..=self.h)
            .map(|k| {
                let eta = self.ln_eta01.powi(2 * k);
                if eta.is_zero() {
                    T::neg_infinity()
                } else {
                    T::lit(4.0) * self.row[k as usize] + eta.ln()
                }
            })
            .collect();
        log_sum_pruned(&terms).mul(LogWeight(n * self.ln_d))
    }

    fn bm_sq(&self, m: i64) -> LogWeight<T> {
        let am = m.unsigned_abs();
        let terms: Vec<T> = (0..=(self.h - am))
            .map(|k| {
                let eta = self.ln_eta01.powi(k);
                if eta.is_zero() {
                    T::neg_infinity()
                } else {
                    self.row[k as usize] + self.row[(k + am) as usize] + eta.ln()
                }
            })
            .collect();
        let amplitude = log_sum_pruned(&terms).mul(LogWeight(T::from_count(self.h) * self.ln_d));
        let tail = if m > 0 { self.ln_eta0 } else { self.ln_eta1 };
        amplitude.powi(2).mul(tail.powi(2 * am))
    }
}

/// `ln B₀²`: probability weight of the unchanged twin-Fock component.
pub fn log_b0_sq<T: Real>(n: u64, amps: &TransitionAmplitudes<T>) -> Result<LogWeight<T>> {
    Ok(Logs::new(n, amps)?.b0_sq())
}

/// `ln |B_m|²` for `m != 0`.
pub fn log_bm_sq<T: Real>(n: u64, m: i64, amps: &TransitionAmplitudes<T>) -> Result<LogWeight<T>> {
    let h = check_even(n)?;
    if m == 0 {
        return Err(Error::Domain("m = 0 has weight B0^2, use log_b0_sq".into()));
    }
    if m.unsigned_abs() > h {
        return Err(Error::Domain(format!("|m| = {} exceeds j = {h}", m.unsigned_abs())));
    }
    Ok(Logs::new(n, amps)?.bm_sq(m))
}

/// Diagonal Dicke weights `w_m` over `m = -N/2..=N/2`, stored as logarithms
/// together with their sum `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeDistribution<T> {
    n: u64,
    log_w: Vec<LogWeight<T>>,
    log_z: LogWeight<T>,
}

impl<T: Real> DickeDistribution<T> {
    /// From unnormalized log weights indexed by `m + N/2`.
    pub fn from_log_weights(n: u64, log_w: Vec<LogWeight<T>>) -> Result<Self> {
        let h = check_even(n)?;
        if log_w.len() as u64 != 2 * h + 1 {
            return Err(Error::param("log_w", format!("expected {} weights, got {}", 2 * h + 1, log_w.len())));
        }
        if log_w.iter().any(|w| w.0.is_nan() || w.0 == T::infinity()) {
            return Err(Error::Numerical("non-finite Dicke weight".into()));
        }
        let log_z = log_sum_exp(&log_w);
        if log_z.is_zero() || !log_z.0.is_finite() {
            return Err(Error::InvalidState("Dicke weights sum to zero".into()));
        }
        Ok(Self { n, log_w, log_z })
    }

    /// From plain nonnegative weights indexed by `m + N/2`.
    pub fn from_weights(n: u64, weights: &[T]) -> Result<Self> {
        if weights.iter().any(|w| !(*w >= T::zero())) {
            return Err(Error::param("weights", "must be nonnegative"));
        }
        Self::from_log_weights(n, weights.iter().map(|&w| LogWeight::from_value(w)).collect())
    }

    /// All weight on `|j, m>`.
    pub fn point_mass(n: u64, m: i64) -> Result<Self> {
        let h = check_even(n)?;
        if m.unsigned_abs() > h {
            return Err(Error::param("m", format!("|m| must not exceed {h}")));
        }
        let mut log_w = vec![LogWeight::zero(); (2 * h + 1) as usize];
        log_w[(m + h as i64) as usize] = LogWeight::one();
        Self::from_log_weights(n, log_w)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn j(&self) -> u64 {
        self.n / 2
    }

    pub fn log_z(&self) -> LogWeight<T> {
        self.log_z
    }

    /// Unnormalized `ln w_m`.
    pub fn log_weight(&self, m: i64) -> LogWeight<T> {
        let idx = m + self.j() as i64;
        match usize::try_from(idx).ok().and_then(|i| self.log_w.get(i)) {
            Some(w) => *w,
            None => LogWeight::zero(),
        }
    }

    /// Normalized `w_m / Z`.
    pub fn weight(&self, m: i64) -> T {
        self.log_weight(m).div(self.log_z).value()
    }

    /// `(m, w_m / Z)` for every level, in increasing `m`.
    pub fn normalized(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        let j = self.j() as i64;
        self.log_w
            .iter()
            .enumerate()
            .map(move |(i, w)| (i as i64 - j, w.div(self.log_z).value()))
    }

    /// `B₀² = w₀ / Z`.
    pub fn b0_sq(&self) -> T {
        self.weight(0)
    }
}

/// Weights of the accelerated twin-Fock state: `w₀ = B₀²`, `w_m = |B_m|²`.
pub fn dicke_distribution<T: Real>(n: u64, amps: &TransitionAmplitudes<T>) -> Result<DickeDistribution<T>> {
    let logs = Logs::new(n, amps)?;
    let h = logs.h as i64;
    let log_w = (-h..=h)
        .map(|m| if m == 0 { logs.b0_sq() } else { logs.bm_sq(m) })
        .collect();
    DickeDistribution::from_log_weights(n, log_w)
}

/// `J_z` statistics of a Dicke-diagonal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JzMoments<T> {
    pub jz_mean: T,
    pub jz2_mean: T,
    pub jz4_mean: T,
    /// `(ΔJ_z)²`
    pub jz_var: T,
    /// `Δ(J_z²)`, the standard deviation of `J_z²`
    pub djz2: T,
    /// `<J²> = j(j+1)`
    pub j2_mean: T,
}

pub fn jz_moments<T: Real>(dist: &DickeDistribution<T>) -> JzMoments<T> {
    let w: Vec<(T, T)> = dist
        .normalized()
        .filter(|(_, p)| *p > T::zero())
        .map(|(m, p)| (T::lit(m as f64), p))
        .collect();
    let sum = |f: &dyn Fn(T) -> T| w.iter().fold(T::zero(), |acc, &(m, p)| acc + p * f(m));
    // odd moment summed in ±m pairs so mirror-symmetric weights give exactly 0
    let jz_mean = (1..=dist.j() as i64).fold(T::zero(), |acc, m| {
        acc + T::lit(m as f64) * (dist.weight(m) - dist.weight(-m))
    });
    let jz2_mean = sum(&|m| m * m);
    let jz4_mean = sum(&|m| m * m * m * m);
    // central forms avoid cancellation between the raw moments
    let jz_var = sum(&|m| (m - jz_mean) * (m - jz_mean));
    let djz2 = sum(&|m| (m * m - jz2_mean) * (m * m - jz2_mean)).sqrt();
    let j = T::from_count(dist.j());
    JzMoments {
        jz_mean,
        jz2_mean,
        jz4_mean,
        jz_var,
        djz2,
        j2_mean: j * (j + T::one()),
    }
}

fn witness_sides<T: Real>(moments: &JzMoments<T>, n: u64) -> Result<(T, T)> {
    check_even(n)?;
    let nf = T::from_count(n);
    let j = nf / T::lit(2.0);
    let bound = j * (j + T::one()) - nf / T::lit(2.0);
    if !(bound > T::zero()) {
        return Err(Error::Domain(format!("<J^2> - N/2 = {bound:?} is not positive")));
    }
    let lhs = (nf - T::one()) * moments.jz_var + moments.jz2_mean;
    Ok((lhs, bound))
}

/// `ξ_E² = [(N-1)(ΔJ_z)² + <J_z²>] / (<J²> - N/2)`.
pub fn squeezing_parameter<T: Real>(dist: &DickeDistribution<T>) -> Result<T> {
    let (lhs, bound) = witness_sides(&jz_moments(dist), dist.n())?;
    Ok((lhs / bound).max(T::zero()))
}

/// True when `(N-1)(ΔJ_z)² + <J_z²> < <J²> - N/2`, which no separable state satisfies.
pub fn witness_violated<T: Real>(moments: &JzMoments<T>, n: u64) -> Result<bool> {
    let (lhs, bound) = witness_sides(moments, n)?;
    Ok(lhs < bound)
}

/// `ξ_E²` for each atom number at fixed amplitudes.
pub fn squeezing_vs_n<T: Real>(amps: &TransitionAmplitudes<T>, ns: &[u64]) -> Result<Vec<(u64, T)>> {
    ns.iter()
        .map(|&n| Ok((n, squeezing_parameter(&dicke_distribution(n, amps)?)?)))
        .collect()
}
