//! Preset sweeps for figures 1 to 5.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::config::{
    DetectorSection, Observable, QuadratureSection, ResolvedConfig, RunConfig, SweepParameter, SweepSection,
};
use crate::sweep::{run_sweep, write_csv, Manifest, ResultRow};
use crate::CliError;

pub const FIGURES: [u8; 5] = [1, 2, 3, 4, 5];

/// One Ω branch of a figure: a file label and its configuration.
#[derive(Debug, Clone)]
pub struct Preset {
    pub label: &'static str,
    pub config: RunConfig,
}

fn accel_sweep() -> SweepSection {
    SweepSection::default()
}

fn base(omega: f64, n: u64, observables: &[Observable], quadrature: &QuadratureSection) -> RunConfig {
    RunConfig {
        detector: DetectorSection {
            lambda: 1.0,
            sigma: 0.4,
            omega,
            accel: 10.0,
            mass: 1.0,
        },
        quadrature: quadrature.clone(),
        sweep: accel_sweep(),
        observables: observables.to_vec(),
        n,
        ..RunConfig::default()
    }
}

/// Configurations behind figure `id`, one per Ω branch.
pub fn presets(id: u8, quadrature: &QuadratureSection) -> Result<Vec<Preset>, CliError> {
    use Observable::*;
    let both = |n: u64, obs: &[Observable]| {
        vec![
            Preset {
                label: "omega0.5",
                config: base(0.5, n, obs, quadrature),
            },
            Preset {
                label: "omega5",
                config: base(5.0, n, obs, quadrature),
            },
        ]
    };
    Ok(match id {
        1 => both(2, &[Amplitudes, Concurrence, Squeezing]),
        2 => both(100, &[Amplitudes, Squeezing]),
        3 => {
            let mut p = both(2, &[Amplitudes, Squeezing]);
            let ns: Vec<f64> = (1..=20).map(|k| f64::from(2 * k)).collect();
            for b in &mut p {
                b.config.sweep = SweepSection::explicit(SweepParameter::N, ns.clone());
            }
            p
        }
        4 => both(100, &[Amplitudes, Sensitivity]),
        5 => {
            let mut c = base(std::f64::consts::TAU, 10_000, &[Amplitudes, Sensitivity], quadrature);
            c.detector.sigma = 30.0;
            vec![Preset {
                label: "omega2pi",
                config: c,
            }]
        }
        _ => return Err(CliError::Config(vec![format!("figure: {id} is not one of 1-5")])),
    })
}

/// Whether the swept sensitivities respect the Heisenberg term and reach the
/// 1e-6 scale.
#[derive(Debug, Clone, Serialize)]
pub struct Feasibility {
    pub heisenberg_bound: f64,
    pub min_dtheta_sq_eq24: f64,
    pub min_at_accel: f64,
    pub bound_holds: bool,
    /// Values `v` with `10^-6.5 <= v < 10^-5.5` count as order 1e-6.
    pub order_1e6_definition: &'static str,
    pub order_1e6_eq24_accels: Vec<f64>,
    pub order_1e6_eq20_accels: Vec<f64>,
    pub order_1e6_present: bool,
}

fn order_1e6(v: f64) -> bool {
    v >= 10f64.powf(-6.5) && v < 10f64.powf(-5.5)
}

pub fn feasibility(rows: &[ResultRow], n: u64) -> Feasibility {
    let j = (n / 2) as f64;
    let bound = 1.0 / (2.0 * j * (j + 1.0));
    let (min, at) = rows
        .iter()
        .filter_map(|r| r.dtheta_sq_eq24.map(|v| (v, r.sweep_value)))
        .fold((f64::INFINITY, f64::NAN), |acc, x| if x.0 < acc.0 { x } else { acc });
    let hits = |f: fn(&ResultRow) -> Option<f64>| -> Vec<f64> {
        rows.iter()
            .filter(|r| f(r).is_some_and(order_1e6))
            .map(|r| r.sweep_value)
            .collect()
    };
    let eq24 = hits(|r| r.dtheta_sq_eq24);
    let eq20 = hits(|r| r.dtheta_sq_eq20);
    Feasibility {
        heisenberg_bound: bound,
        min_dtheta_sq_eq24: min,
        min_at_accel: at,
        bound_holds: rows.iter().all(|r| r.dtheta_sq_eq24.is_some_and(|v| v >= bound)),
        order_1e6_definition: "10^-6.5 <= value < 10^-5.5",
        order_1e6_present: !eq24.is_empty() || !eq20.is_empty(),
        order_1e6_eq24_accels: eq24,
        order_1e6_eq20_accels: eq20,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchRecord {
    pub label: &'static str,
    pub file: Option<PathBuf>,
    pub manifest: Manifest,
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureManifest {
    pub figure: u8,
    pub library: &'static str,
    pub version: &'static str,
    pub spacing_note: &'static str,
    pub branches: Vec<BranchRecord>,
    pub feasibility: Option<Feasibility>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct FigureRun {
    pub rows: Vec<(&'static str, Vec<ResultRow>)>,
    pub manifest: FigureManifest,
}

/// Runs every branch of figure `id`. With `out_dir` set, writes
/// `fig<id>_<label>.csv` per branch and `fig<id>_manifest.json`.
pub fn run_figure(
    id: u8,
    quadrature: &QuadratureSection,
    workers: usize,
    out_dir: Option<&Path>,
) -> Result<FigureRun, CliError> {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut branches = Vec::new();
    for preset in presets(id, quadrature)? {
        let resolved: ResolvedConfig = preset.config.resolve().map_err(CliError::Config)?;
        let out = run_sweep(&resolved, workers)?;
        let file = match out_dir {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                let path = dir.join(format!("fig{id}_{}.csv", preset.label));
                let f = fs::File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                write_csv(&out.rows, std::io::BufWriter::new(f))?;
                Some(path)
            }
            None => None,
        };
        branches.push(BranchRecord {
            label: preset.label,
            file,
            manifest: out.manifest,
        });
        rows.push((preset.label, out.rows));
    }
    let feasibility = (id == 5).then(|| feasibility(&rows[0].1, 10_000));
    let manifest = FigureManifest {
        figure: id,
        library: "twinfock",
        version: twinfock::VERSION,
        spacing_note: "acceleration sweeps use log spacing; the plotted ranges are not known, [0.02, 10] is assumed",
        branches,
        feasibility,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    if let Some(dir) = out_dir {
        let path = dir.join(format!("fig{id}_manifest.json"));
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(FigureRun { rows, manifest })
}
