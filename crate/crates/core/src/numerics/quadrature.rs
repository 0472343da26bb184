use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Upper end of the mode integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentumCutoff<T> {
    /// Grow the cutoff until the outermost shell is negligible.
    Adaptive,
    /// Integrate over `|k| <= K` only.
    Fixed(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_subdivisions: usize,
    /// Half-width of the proper-time window in units of the switching time.
    pub tau_span_sigmas: T,
    pub k_max: MomentumCutoff<T>,
    /// Relative size of the outermost momentum shell at which growth stops.
    pub k_tail_tol: T,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-9),
            abs_tol: T::lit(1e-14),
            max_subdivisions: 2000,
            tau_span_sigmas: T::lit(8.0),
            k_max: MomentumCutoff::Adaptive,
            k_tail_tol: T::lit(1e-8),
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) {
            return Err(Error::param("rel_tol", "must be > 0"));
        }
        if !(self.abs_tol >= T::zero()) {
            return Err(Error::param("abs_tol", "must be >= 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::param("max_subdivisions", "must be >= 1"));
        }
        if !(self.tau_span_sigmas >= T::one()) || !self.tau_span_sigmas.is_finite() {
            return Err(Error::param("tau_span_sigmas", "must be finite and >= 1"));
        }
        if let MomentumCutoff::Fixed(k) = self.k_max {
            if !(k > T::zero()) || !k.is_finite() {
                return Err(Error::param("k_max", "must be finite and > 0"));
            }
        }
        if !(self.k_tail_tol > T::zero()) {
            return Err(Error::param("k_tail_tol", "must be > 0"));
        }
        Ok(())
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: Complex<T>,
    pub err_estimate: T,
    pub subdivisions: usize,
    pub evaluations: usize,
}

// 21-point Gauss-Kronrod abscissae and weights (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_878_069,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Weights of the embedded 10-point Gauss rule, paired with XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    lo: T,
    hi: T,
    value: Complex<T>,
    err: T,
    resabs: T,
}

fn rescale_error<T: Real>(err: T, resabs: T, resasc: T) -> T {
    let mut err = err.abs();
    if resasc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = if scale < T::one() { resasc * scale } else { resasc };
    }
    let fifty_eps = T::lit(50.0) * T::epsilon();
    if resabs > T::min_positive_value() / fifty_eps {
        err = err.max(fifty_eps * resabs);
    }
    err
}

fn kronrod21<T, F>(f: &F, lo: T, hi: T) -> Segment<T>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let half = T::lit(0.5);
    let center = half * (lo + hi);
    let half_len = half * (hi - lo);
    let mut fv1 = [Complex::new(T::zero(), T::zero()); 10];
    let mut fv2 = fv1;

    let f_center = f(center);
    let mut res_k = f_center * T::lit(WGK[10]);
    let mut res_g = Complex::new(T::zero(), T::zero());
    let mut res_abs = f_center.norm() * T::lit(WGK[10]);

    for j in 0..10 {
        let x = half_len * T::lit(XGK[j]);
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + (f1 + f2) * w;
        res_abs = res_abs + (f1.norm() + f2.norm()) * w;
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * T::lit(WG[j / 2]);
        }
    }

    let mean = res_k * half;
    let mut res_asc = (f_center - mean).norm() * T::lit(WGK[10]);
    for j in 0..10 {
        res_asc = res_asc + ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * T::lit(WGK[j]);
    }

    let abs_half = half_len.abs();
    let err = ((res_k - res_g) * half_len).norm();
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    Segment {
        lo,
        hi,
        value: res_k * half_len,
        err: rescale_error(err, res_abs, res_asc),
        resabs: res_abs,
    }
}

/// Adaptive 21-point Gauss-Kronrod integration of a complex-valued
/// function over `[lo, hi]`.
///
/// Subdivides the interval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol * |value|)`, or below the
/// round-off floor of the rule.
pub fn integrate_complex<T, F>(
    f: F,
    lo: T,
    hi: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    integrate_complex_with_breaks(f, &[lo, hi], cfg)
}

/// As [`integrate_complex`], with the initial partition given explicitly.
/// `points` must be strictly increasing and contain at least two entries.
pub fn integrate_complex_with_breaks<T, F>(
    f: F,
    points: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let (q, converged) = integrate_complex_best_effort(f, points, cfg)?;
    if converged {
        Ok(q)
    } else {
        Err(Error::ConvergenceFailure {
            lo: points[0].to_f64().unwrap_or(f64::NAN),
            hi: points[points.len() - 1].to_f64().unwrap_or(f64::NAN),
            err_estimate: q.err_estimate.to_f64().unwrap_or(f64::NAN),
            subdivisions: q.subdivisions,
            context: String::new(),
        })
    }
}

/// As [`integrate_complex_with_breaks`], but an exhausted subdivision budget
/// returns the current estimate with `false` instead of an error.
pub fn integrate_complex_best_effort<T, F>(
    f: F,
    points: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<(Quadrature<T>, bool)>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    cfg.validate()?;
    if points.len() < 2 {
        return Err(Error::Domain("integration needs at least two points".into()));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("integration bounds must be finite".into()));
    }
    if points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain(
            "integration breakpoints must be strictly increasing".into(),
        ));
    }

    let mut segments: Vec<Segment<T>> = points
        .windows(2)
        .map(|w| kronrod21(&f, w[0], w[1]))
        .collect();
    let mut evaluations = 21 * segments.len();
    let roundoff_factor = T::lit(100.0) * T::epsilon();

    loop {
        let (value, err, resabs) = totals(&segments);
        if !value.re.is_finite() || !value.im.is_finite() || !err.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite integrand on [{:?}, {:?}]",
                points[0],
                points[points.len() - 1]
            )));
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.norm());
        let q = Quadrature {
            value,
            err_estimate: err,
            subdivisions: segments.len(),
            evaluations,
        };
        if err <= tol || err <= roundoff_factor * resabs {
            return Ok((q, true));
        }

        let worst = segments
            .iter()
            .enumerate()
            .fold(0, |best, (i, s)| if s.err > segments[best].err { i } else { best });
        let seg = segments[worst];
        let mid = T::lit(0.5) * (seg.lo + seg.hi);
        let too_narrow = !(seg.lo < mid && mid < seg.hi)
            || (seg.hi - seg.lo) <= T::lit(1e3) * T::epsilon() * seg.lo.abs().max(seg.hi.abs());
        if segments.len() >= cfg.max_subdivisions || too_narrow {
            return Ok((q, false));
        }
        let left = kronrod21(&f, seg.lo, mid);
        let right = kronrod21(&f, mid, seg.hi);
        evaluations += 42;
        segments[worst] = left;
        segments.insert(worst + 1, right);
    }
}

fn totals<T: Real>(segments: &[Segment<T>]) -> (Complex<T>, T, T) {
    segments.iter().fold(
        (Complex::new(T::zero(), T::zero()), T::zero(), T::zero()),
        |(v, e, r), s| (v + s.value, e + s.err, r + s.resabs),
    )
}
