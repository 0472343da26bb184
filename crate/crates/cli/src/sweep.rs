//! Sweep evaluation: detector → twin-Fock weights → observables, one row per point.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use twinfock::detector::transition_amplitudes;
use twinfock::metrology::accelerated_sensitivity;
use twinfock::twin_fock::{dicke_distribution, jz_moments, squeezing_parameter, witness_violated};
use twinfock::two_atom::{concurrence, evolve_pair};
use twinfock::{BipartiteInit, TransitionAmplitudes};

use crate::config::{Observable, ResolvedConfig, SweepParameter};
use crate::CliError;

pub const CSV_HEADER: [&str; 9] = [
    "sweep_value",
    "eta0_sq",
    "eta1_sq",
    "concurrence",
    "xi_e_sq",
    "witness_violated",
    "dtheta_sq_eq20",
    "dtheta_sq_eq24",
    "quad_err",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResultRow {
    pub sweep_value: f64,
    pub eta0_sq: Option<f64>,
    pub eta1_sq: Option<f64>,
    /// Only for `N = 2`.
    pub concurrence: Option<f64>,
    pub xi_e_sq: Option<f64>,
    pub witness_violated: Option<bool>,
    pub dtheta_sq_eq20: Option<f64>,
    pub dtheta_sq_eq24: Option<f64>,
    pub quad_err: f64,
}

impl ResultRow {
    fn csv_fields(&self) -> [String; 9] {
        let f = |x: Option<f64>| x.map(fmt_float).unwrap_or_default();
        [
            fmt_float(self.sweep_value),
            f(self.eta0_sq),
            f(self.eta1_sq),
            f(self.concurrence),
            f(self.xi_e_sq),
            self.witness_violated.map(|b| b.to_string()).unwrap_or_default(),
            f(self.dtheta_sq_eq20),
            f(self.dtheta_sq_eq24),
            fmt_float(self.quad_err),
        ]
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub library: &'static str,
    pub version: &'static str,
    pub resolved: ResolvedConfig,
    pub workers: usize,
    pub rows: usize,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<ResultRow>,
    pub manifest: Manifest,
}

fn evaluate(cfg: &ResolvedConfig, value: f64, shared: Option<&TransitionAmplitudes>) -> twinfock::Result<ResultRow> {
    let amps = match shared {
        Some(a) => *a,
        None => {
            let params = cfg.detector_at(value).params()?;
            transition_amplitudes(&params, &cfg.config.quadrature.config())?
        }
    };
    let n = cfg.n_at(value);
    let mut row = ResultRow {
        sweep_value: value,
        eta0_sq: None,
        eta1_sq: None,
        concurrence: None,
        xi_e_sq: None,
        witness_violated: None,
        dtheta_sq_eq20: None,
        dtheta_sq_eq24: None,
        quad_err: amps.err,
    };
    if cfg.wants(Observable::Amplitudes) {
        row.eta0_sq = Some(amps.eta0_sq);
        row.eta1_sq = Some(amps.eta1_sq);
    }
    if cfg.wants(Observable::Concurrence) && n == 2 {
        let pair = evolve_pair(&BipartiteInit::symmetric(), &amps, cfg.config.treatment.into())?;
        row.concurrence = Some(concurrence(&pair.rho)?);
    }
    let needs_dist = [Observable::Squeezing, Observable::Witness, Observable::Sensitivity]
        .iter()
        .any(|&o| cfg.wants(o));
    if needs_dist {
        let dist = dicke_distribution(n, &amps)?;
        if cfg.wants(Observable::Squeezing) {
            row.xi_e_sq = Some(squeezing_parameter(&dist)?);
        }
        if cfg.wants(Observable::Witness) {
            row.witness_violated = Some(witness_violated(&jz_moments(&dist), n)?);
        }
        if cfg.wants(Observable::Sensitivity) {
            let s = accelerated_sensitivity(&dist)?;
            row.dtheta_sq_eq20 = s.dtheta_sq_opt();
            row.dtheta_sq_eq24 = Some(s.series);
        }
    }
    Ok(row)
}

/// Evaluates every sweep point on a pool of `workers` threads. Rows come back
/// in sweep order; the first failing point (in sweep order) aborts the run.
pub fn run_sweep(cfg: &ResolvedConfig, workers: usize) -> Result<SweepOutput, CliError> {
    let start = Instant::now();
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;

    let rows = pool.install(|| -> Result<Vec<ResultRow>, CliError> {
        // amplitudes do not depend on the atom number
        let shared = if cfg.config.sweep.parameter == SweepParameter::N {
            let params = cfg.config.detector.params().map_err(|e| CliError::row(f64::NAN, e))?;
            let amps = transition_amplitudes(&params, &cfg.config.quadrature.config())
                .map_err(|e| CliError::row(f64::NAN, e))?;
            Some(amps)
        } else {
            None
        };
        let results: Vec<twinfock::Result<ResultRow>> = cfg
            .sweep_values
            .par_iter()
            .map(|&v| evaluate(cfg, v, shared.as_ref()))
            .collect();
        results
            .into_iter()
            .zip(&cfg.sweep_values)
            .map(|(r, &v)| r.map_err(|e| CliError::row(v, e)))
            .collect()
    })?;

    let manifest = Manifest {
        library: "twinfock",
        version: twinfock::VERSION,
        resolved: cfg.clone(),
        workers,
        rows: rows.len(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok(SweepOutput { rows, manifest })
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record(r.csv_fields()).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

pub fn csv_string(rows: &[ResultRow]) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))
}

/// `{"manifest": ..., "rows": [...]}`
pub fn json_string(output: &SweepOutput) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Doc<'a> {
        manifest: &'a Manifest,
        rows: &'a [ResultRow],
    }
    serde_json::to_string_pretty(&Doc {
        manifest: &output.manifest,
        rows: &output.rows,
    })
    .map_err(|e| CliError::Io(e.to_string()))
}
