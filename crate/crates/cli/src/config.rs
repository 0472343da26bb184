//! Run configuration: JSON schema, defaults and validation.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use twinfock::numerics::MomentumCutoff;
use twinfock::{DetectorParams, FieldTreatment, QuadratureConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorSection {
    pub lambda: f64,
    pub sigma: f64,
    pub omega: f64,
    pub accel: f64,
    pub mass: f64,
}

impl Default for DetectorSection {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            sigma: 0.4,
            omega: 0.5,
            accel: 1.0,
            mass: 1.0,
        }
    }
}

impl DetectorSection {
    pub fn params(&self) -> twinfock::Result<DetectorParams> {
        DetectorParams::new(self.lambda, self.sigma, self.omega, self.accel, self.mass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tau_span_sigmas: f64,
    /// `null` grows the momentum cutoff adaptively.
    pub k_max: Option<f64>,
    pub k_tail_tol: f64,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        Self::from(&QuadratureConfig::default())
    }
}

impl From<&QuadratureConfig> for QuadratureSection {
    fn from(q: &QuadratureConfig) -> Self {
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_subdivisions: q.max_subdivisions,
            tau_span_sigmas: q.tau_span_sigmas,
            k_max: match q.k_max {
                MomentumCutoff::Adaptive => None,
                MomentumCutoff::Fixed(k) => Some(k),
            },
            k_tail_tol: q.k_tail_tol,
        }
    }
}

impl QuadratureSection {
    pub fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            tau_span_sigmas: self.tau_span_sigmas,
            k_max: self.k_max.map_or(MomentumCutoff::Adaptive, MomentumCutoff::Fixed),
            k_tail_tol: self.k_tail_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "accel")]
    Accel,
    #[serde(rename = "omega")]
    Omega,
    #[serde(rename = "sigma")]
    Sigma,
    #[serde(rename = "N")]
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

/// Either `from`/`to`/`steps` (with `spacing`) or an explicit `values` list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub steps: Option<usize>,
    pub spacing: Spacing,
    pub values: Option<Vec<f64>>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            parameter: SweepParameter::Accel,
            from: Some(0.02),
            to: Some(10.0),
            steps: Some(101),
            spacing: Spacing::Log,
            values: None,
        }
    }
}

impl SweepSection {
    pub fn explicit(parameter: SweepParameter, values: Vec<f64>) -> Self {
        Self {
            parameter,
            from: None,
            to: None,
            steps: None,
            spacing: Spacing::Linear,
            values: Some(values),
        }
    }

    pub fn range(parameter: SweepParameter, from: f64, to: f64, steps: usize, spacing: Spacing) -> Self {
        Self {
            parameter,
            from: Some(from),
            to: Some(to),
            steps: Some(steps),
            spacing,
            values: None,
        }
    }

    /// The sweep points, or a description of what is wrong with the section.
    pub fn points(&self) -> Result<Vec<f64>, Vec<String>> {
        let mut errs = Vec::new();
        let pts = match (&self.values, self.from, self.to, self.steps) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(from), Some(to), Some(steps)) => {
                if steps == 0 {
                    errs.push("sweep.steps: must be >= 1".to_string());
                    Vec::new()
                } else if steps == 1 {
                    if from != to {
                        errs.push("sweep.steps: a single step needs from == to".to_string());
                    }
                    vec![from]
                } else if self.spacing == Spacing::Log && !(from > 0.0 && to > 0.0) {
                    errs.push("sweep.from/to: log spacing needs positive end points".to_string());
                    Vec::new()
                } else {
                    spaced(from, to, steps, self.spacing)
                }
            }
            _ => {
                errs.push("sweep: give either `values` or all of `from`, `to`, `steps`".to_string());
                Vec::new()
            }
        };
        if errs.is_empty() {
            if pts.is_empty() {
                errs.push("sweep: no points".to_string());
            }
            if pts.iter().any(|x| !x.is_finite()) {
                errs.push("sweep: values must be finite".to_string());
            }
            if pts.windows(2).any(|w| !(w[0] < w[1])) {
                errs.push("sweep: values must be strictly increasing".to_string());
            }
            if self.parameter == SweepParameter::N {
                for &x in &pts {
                    if !(x >= 2.0 && x.fract() == 0.0 && x % 2.0 == 0.0 && x <= 1e9) {
                        errs.push(format!("sweep: N = {x} is not an even integer in [2, 1e9]"));
                    }
                }
            }
        }
        if errs.is_empty() {
            Ok(pts)
        } else {
            Err(errs)
        }
    }
}

fn spaced(from: f64, to: f64, steps: usize, spacing: Spacing) -> Vec<f64> {
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i == 0 {
                return from;
            }
            if i == steps - 1 {
                return to;
            }
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => from + (to - from) * t,
                Spacing::Log => (from.ln() + (to.ln() - from.ln()) * t).exp(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observable {
    Amplitudes,
    Concurrence,
    Squeezing,
    Witness,
    Sensitivity,
}

impl Observable {
    pub const ALL: [Observable; 5] = [
        Observable::Amplitudes,
        Observable::Concurrence,
        Observable::Squeezing,
        Observable::Witness,
        Observable::Sensitivity,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Treatment {
    #[default]
    Colocated,
    Distant,
}

impl From<Treatment> for FieldTreatment {
    fn from(t: Treatment) -> Self {
        match t {
            Treatment::Colocated => FieldTreatment::CoLocated,
            Treatment::Distant => FieldTreatment::Distant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// `null` writes to standard output.
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub detector: DetectorSection,
    pub quadrature: QuadratureSection,
    pub sweep: SweepSection,
    pub observables: Vec<Observable>,
    #[serde(rename = "N")]
    pub n: u64,
    pub treatment: Treatment,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            detector: DetectorSection::default(),
            quadrature: QuadratureSection::default(),
            sweep: SweepSection::default(),
            observables: Observable::ALL.to_vec(),
            n: 100,
            treatment: Treatment::default(),
            output: OutputSection::default(),
        }
    }
}

/// A configuration that passed validation, with its sweep points expanded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub config: RunConfig,
    pub sweep_values: Vec<f64>,
}

impl ResolvedConfig {
    pub fn wants(&self, o: Observable) -> bool {
        self.config.observables.contains(&o)
    }

    /// Detector parameters at one sweep point.
    pub fn detector_at(&self, value: f64) -> DetectorSection {
        let mut d = self.config.detector.clone();
        match self.config.sweep.parameter {
            SweepParameter::Accel => d.accel = value,
            SweepParameter::Omega => d.omega = value,
            SweepParameter::Sigma => d.sigma = value,
            SweepParameter::N => {}
        }
        d
    }

    pub fn n_at(&self, value: f64) -> u64 {
        match self.config.sweep.parameter {
            SweepParameter::N => value as u64,
            _ => self.config.n,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, Vec<String>> {
        serde_json::from_str(text).map_err(|e| vec![format!("config: {e}")])
    }

    /// Checks every constraint and collects all violations.
    pub fn resolve(self) -> Result<ResolvedConfig, Vec<String>> {
        let mut errs = Vec::new();
        // for parameter sweeps the base value is replaced point by point and checked below
        if self.sweep.parameter == SweepParameter::N {
            if let Err(e) = self.detector.params() {
                errs.push(format!("detector: {e}"));
            }
        }
        if let Err(e) = self.quadrature.config().validate() {
            errs.push(format!("quadrature: {e}"));
        }
        if self.n < 2 || self.n % 2 != 0 {
            errs.push(format!("N: {} is not an even integer >= 2", self.n));
        }
        if self.observables.is_empty() {
            errs.push("observables: must not be empty".to_string());
        }
        let mut seen = self.observables.clone();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            errs.push("observables: duplicate entries".to_string());
        }
        let points = match self.sweep.points() {
            Ok(p) => p,
            Err(e) => {
                errs.extend(e);
                Vec::new()
            }
        };
        let resolved = ResolvedConfig {
            config: self,
            sweep_values: points,
        };
        if resolved.config.sweep.parameter != SweepParameter::N {
            let bad: Vec<(f64, String)> = resolved
                .sweep_values
                .iter()
                .filter_map(|&v| resolved.detector_at(v).params().err().map(|e| (v, e.to_string())))
                .collect();
            let uniform = bad.len() == resolved.sweep_values.len() && bad.windows(2).all(|w| w[0].1 == w[1].1);
            match bad.first() {
                Some((_, e)) if uniform => errs.push(format!("detector: {e}")),
                _ => errs.extend(bad.into_iter().map(|(v, e)| format!("sweep value {v}: {e}"))),
            }
        }
        if errs.is_empty() {
            Ok(resolved)
        } else {
            Err(errs)
        }
    }
}
