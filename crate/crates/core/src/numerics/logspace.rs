use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A nonnegative real stored as its natural logarithm; `-inf` is exact zero.
///
/// Phases are never carried here: every quantity summed in log space is a
/// product of nonnegative factors.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogWeight<T>(pub T);

impl<T: Real> LogWeight<T> {
    pub fn zero() -> Self {
        LogWeight(T::neg_infinity())
    }

    pub fn one() -> Self {
        LogWeight(T::zero())
    }

    /// Panics on negative input.
    pub fn from_value(x: T) -> Self {
        assert!(x >= T::zero(), "LogWeight::from_value({x:?}) of a negative number");
        LogWeight(x.ln())
    }

    pub fn ln(self) -> T {
        self.0
    }

    pub fn value(self) -> T {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == T::neg_infinity()
    }

    /// `self * other`.
    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            Self::zero()
        } else {
            LogWeight(self.0 + other.0)
        }
    }

    /// `self / other`; `other` must not be zero.
    pub fn div(self, other: Self) -> Self {
        if self.is_zero() {
            Self::zero()
        } else {
            LogWeight(self.0 - other.0)
        }
    }

    /// `self^n` with `0^0 = 1`.
    pub fn powi(self, n: u64) -> Self {
        if n == 0 {
            Self::one()
        } else if self.is_zero() {
            Self::zero()
        } else {
            LogWeight(self.0 * T::from_count(n))
        }
    }
}

/// `ln(sum_i exp(l_i))`, shifted by the largest term.
///
/// Terms are sorted descending before accumulation so the result does not
/// depend on input order, bit for bit. Zeros are skipped; an empty (or
/// all-zero) input gives zero.
pub fn log_sum_exp<T: Real>(terms: &[LogWeight<T>]) -> LogWeight<T> {
    let mut sorted: Vec<T> = terms.iter().map(|w| w.0).filter(|l| *l != T::neg_infinity()).collect();
    if sorted.is_empty() {
        return LogWeight::zero();
    }
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    let max = sorted[0];
    if max == T::infinity() {
        return LogWeight(max);
    }
    let sum = sorted.iter().fold(T::zero(), |acc, &l| acc + (l - max).exp());
    LogWeight(max + sum.ln())
}

// Below this, ln C(n, r) is summed term by term.
const DIRECT_SUM_LIMIT: u64 = 16;

/// `ln C(n, r)`.
///
/// Small `min(r, n - r)` sums `ln(1 + (n-r)/i)` directly; otherwise the three
/// log-gamma values are expanded in Stirling form so the leading terms
/// combine as `r ln(n/r) + (n-r) ln(n/(n-r))` without cancellation.
pub fn log_binomial<T: Real>(n: u64, r: u64) -> Result<T> {
    if r > n {
        return Err(Error::Domain(format!("binomial C({n}, {r}) with r > n")));
    }
    let r = r.min(n - r);
    if r == 0 {
        return Ok(T::zero());
    }
    let rest = n - r;
    if r <= DIRECT_SUM_LIMIT {
        let rest_t = T::from_count(rest);
        return Ok((1..=r).fold(T::zero(), |acc, i| acc + (rest_t / T::from_count(i)).ln_1p()));
    }
    let (nt, rt, mt) = (T::from_count(n), T::from_count(r), T::from_count(rest));
    let main = rt * (nt / rt).ln() - mt * (-(rt / nt)).ln_1p();
    let half_log = T::lit(0.5) * (nt / (T::lit(2.0) * T::PI() * rt * mt)).ln();
    Ok(main + half_log + stirling_tail(nt) - stirling_tail(rt) - stirling_tail(mt))
}

/// `ln Γ(x+1) - [x ln x - x + ½ ln(2πx)]`, asymptotic series, x ≥ 17.
fn stirling_tail<T: Real>(x: T) -> T {
    let inv = x.recip();
    let inv2 = inv * inv;
    let series = T::lit(1.0 / 12.0)
        - inv2
            * (T::lit(1.0 / 360.0)
                - inv2 * (T::lit(1.0 / 1260.0) - inv2 * (T::lit(1.0 / 1680.0) - inv2 * T::lit(1.0 / 1188.0))));
    series * inv
}
