use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use twinfock::detector::transition_amplitudes;
use twinfock_cli::config::{Format, RunConfig, Treatment};
use twinfock_cli::sweep::{csv_string, fmt_float, json_string};
use twinfock_cli::{run_figure, run_sweep, CliError};

#[derive(Parser)]
#[command(name = "twinfock", version, about = "Accelerated twin-Fock states: amplitudes, entanglement and phase sensitivity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transition weights for a single detector.
    Amplitudes(Overrides),
    /// Run a parameter sweep.
    Sweep(Overrides),
    /// Write the data behind one of the figure presets.
    Figure {
        /// Figure number, 1 to 5.
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        id: u8,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Check a configuration and print it fully resolved.
    Validate(Overrides),
}

/// Command-line values override those from `--config`.
#[derive(Args, Clone, Default)]
struct Overrides {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    accel: Option<f64>,
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long, value_enum)]
    treatment: Option<Treatment>,
    /// Output file; for `figure`, the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    quad_rel_tol: Option<f64>,
    /// Proper-time window half-width in units of sigma.
    #[arg(long)]
    tau_span: Option<f64>,
    #[arg(long)]
    k_tail_tol: Option<f64>,
}

impl Overrides {
    fn load(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                RunConfig::from_json(&text).map_err(CliError::Config)?
            }
            None => RunConfig::default(),
        };
        let d = &mut c.detector;
        set(&mut d.omega, self.omega);
        set(&mut d.sigma, self.sigma);
        set(&mut d.lambda, self.lambda);
        set(&mut d.mass, self.mass);
        set(&mut d.accel, self.accel);
        set(&mut c.n, self.n);
        set(&mut c.treatment, self.treatment);
        set(&mut c.output.format, self.format);
        if self.out.is_some() {
            c.output.path = self.out.clone();
        }
        let q = &mut c.quadrature;
        set(&mut q.rel_tol, self.quad_rel_tol);
        set(&mut q.tau_span_sigmas, self.tau_span);
        set(&mut q.k_tail_tol, self.k_tail_tol);
        Ok(c)
    }
}

fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn sidecar(path: &std::path::Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct AmplitudeRecord {
    omega: f64,
    accel: f64,
    sigma: f64,
    lambda: f64,
    mass: f64,
    eta0_sq: f64,
    eta1_sq: f64,
    d0: f64,
    d1: f64,
    eta0_err: f64,
    eta1_err: f64,
}

fn amplitudes(o: &Overrides) -> Result<(), CliError> {
    let c = o.load()?;
    let d = &c.detector;
    let params = d.params().map_err(|e| CliError::Config(vec![format!("detector: {e}")]))?;
    let q = c.quadrature.config();
    q.validate().map_err(|e| CliError::Config(vec![format!("quadrature: {e}")]))?;
    let t = transition_amplitudes(&params, &q).map_err(|e| CliError::Point { value: d.accel, source: e })?;
    let rec = AmplitudeRecord {
        omega: d.omega,
        accel: d.accel,
        sigma: d.sigma,
        lambda: d.lambda,
        mass: d.mass,
        eta0_sq: t.eta0_sq,
        eta1_sq: t.eta1_sq,
        d0: t.d0,
        d1: t.d1,
        eta0_err: t.eta0_err,
        eta1_err: t.eta1_err,
    };
    let text = match c.output.format {
        Format::Json => serde_json::to_string_pretty(&rec).map_err(|e| CliError::Io(e.to_string()))? + "\n",
        Format::Csv => {
            let vals = [
                rec.omega, rec.accel, rec.sigma, rec.lambda, rec.mass, rec.eta0_sq, rec.eta1_sq, rec.d0, rec.d1,
                rec.eta0_err, rec.eta1_err,
            ];
            let body: Vec<String> = vals.iter().map(|&v| fmt_float(v)).collect();
            format!(
                "omega,accel,sigma,lambda,mass,eta0_sq,eta1_sq,d0,d1,eta0_err,eta1_err\n{}\n",
                body.join(",")
            )
        }
    };
    emit(&text, c.output.path.as_ref())
}

fn sweep(o: &Overrides) -> Result<(), CliError> {
    let resolved = o.load()?.resolve().map_err(CliError::Config)?;
    let out = run_sweep(&resolved, o.workers)?;
    let path = resolved.config.output.path.clone();
    match resolved.config.output.format {
        Format::Csv => {
            emit(&csv_string(&out.rows)?, path.as_ref())?;
            if let Some(p) = &path {
                let m = serde_json::to_string_pretty(&out.manifest).map_err(|e| CliError::Io(e.to_string()))?;
                emit(&(m + "\n"), Some(&sidecar(p)))?;
            }
            Ok(())
        }
        Format::Json => emit(&(json_string(&out)? + "\n"), path.as_ref()),
    }
}

fn figure(id: u8, o: &Overrides) -> Result<(), CliError> {
    let c = o.load()?;
    let dir = o.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let run = run_figure(id, &c.quadrature, o.workers, Some(&dir))?;
    for b in &run.manifest.branches {
        if let Some(f) = &b.file {
            eprintln!("wrote {}", f.display());
        }
    }
    if let Some(f) = &run.manifest.feasibility {
        eprintln!(
            "min dtheta_sq_eq24 = {:e} at a = {} (Heisenberg term {:e}, bound {}); order 1e-6 present: {}",
            f.min_dtheta_sq_eq24,
            f.min_at_accel,
            f.heisenberg_bound,
            if f.bound_holds { "holds" } else { "violated" },
            f.order_1e6_present
        );
    }
    Ok(())
}

fn validate(o: &Overrides) -> Result<(), CliError> {
    let resolved = o.load()?.resolve().map_err(CliError::Config)?;
    let text = serde_json::to_string_pretty(&resolved).map_err(|e| CliError::Io(e.to_string()))?;
    emit(&(text + "\n"), None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Amplitudes(o) => amplitudes(o),
        Command::Sweep(o) => sweep(o),
        Command::Figure { id, opts } => figure(*id, opts),
        Command::Validate(o) => validate(o),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twinfock: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
