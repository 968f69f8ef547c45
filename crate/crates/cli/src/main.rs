mod config;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nhqc::analysis::{
    convergence, format_sig, logical_basis, oracle_suite, run_gate, theta_scan, write_matrix,
    write_scan, write_time_series, OracleOptions,
};
use nhqc::holonomy::{DfsEncoding, GateKind, GateSpec};

use config::RunConfig;

const PHYSICS_FAILURE: u8 = 1;
const USAGE_ERROR: u8 = 2;

// Limits for the master-equation invariants and refinement checks.
const TRACE_DRIFT_MAX: f64 = 1e-6;
const HERMITICITY_MAX: f64 = 1e-8;
const NEGATIVITY_MIN: f64 = -1e-8;
const DT_DELTA_MAX: f64 = 1e-6;
const CUTOFF_DELTA_MAX: f64 = 1e-4;

#[derive(Parser)]
#[command(name = "nhqc", version, about = "Holonomic gates in decoherence-free subspaces of NV centers in a cavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    U1,
    U2,
}

impl From<Kind> for GateKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::U1 => GateKind::U1,
            Kind::U2 => GateKind::U2,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the analytic gate matrix as CSV, each entry as `re,im`
    GateMatrix {
        #[arg(long, value_enum)]
        kind: Kind,
        /// θ for u1, ϑ for u2 (radians)
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        phi: f64,
    },
    /// Simulate one gate on the full model and write the time series
    Simulate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        gate: Kind,
        /// Logical initial state, e.g. 0L or 01L
        #[arg(long)]
        initial: String,
        /// Output CSV (default: <output.directory>/<gate>_<initial>.csv)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum fidelity over Θ for identical and individual rates
    ScanTheta {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Output CSV (default: <output.directory>/theta_scan.csv)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle suite and print a pass/fail table
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Build the drives with the second pair's detuning sign reversed
        #[arg(long, hide = true)]
        flip_minus_detuning: bool,
    },
    /// Final-fidelity change under dt halving and a raised photon cutoff
    Convergence {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "u1")]
        gate: Kind,
        #[arg(long, default_value = "0L")]
        initial: String,
    },
}

enum Failure {
    Usage(String),
    Physics(String),
}

impl From<config::ConfigError> for Failure {
    fn from(e: config::ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<nhqc::Error> for Failure {
    fn from(e: nhqc::Error) -> Self {
        match e {
            nhqc::Error::IntegrationDiverged { .. } | nhqc::Error::Cyclicity { .. } => Failure::Physics(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(path: Option<&Path>) -> Result<RunConfig, Failure> {
    Ok(match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::defaults(),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let f = File::create(path).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

fn encoding(kind: GateKind) -> DfsEncoding {
    match kind {
        GateKind::U1 => DfsEncoding::s1(),
        GateKind::U2 => DfsEncoding::s2(),
    }
}

fn check_invariants(report: &nhqc::dynamics::IntegrationReport<f64>) -> Result<(), Failure> {
    let mut bad = Vec::new();
    if report.max_trace_drift >= TRACE_DRIFT_MAX {
        bad.push(format!("trace drift {:e}", report.max_trace_drift));
    }
    if report.max_hermiticity_error >= HERMITICITY_MAX {
        bad.push(format!("hermiticity error {:e}", report.max_hermiticity_error));
    }
    if report.min_eigenvalue <= NEGATIVITY_MIN {
        bad.push(format!("eigenvalue {:e}", report.min_eigenvalue));
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Physics(format!("density-matrix invariants violated: {}", bad.join(", "))))
    }
}

fn gate_matrix(kind: Kind, theta: f64, phi: f64) -> Result<(), Failure> {
    let gate = GateSpec::new(kind.into(), theta, phi)?;
    let stdout = io::stdout();
    write_matrix(stdout.lock(), &gate.matrix())?;
    Ok(())
}

fn simulate(config: Option<&Path>, kind: Kind, initial: &str, out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = load(config)?;
    let kind: GateKind = kind.into();
    let init = logical_basis(&encoding(kind), initial)?;
    let gate = cfg.gate(kind);
    let run = run_gate(&gate, &init, &cfg.params, cfg.mode, &cfg.simulation)?;
    let name = format!("{}_{initial}.csv", if kind == GateKind::U1 { "u1" } else { "u2" });
    let path = out.unwrap_or_else(|| cfg.output_dir.join(name));
    let mut w = create(&path)?;
    write_time_series(&mut w, &run.series)?;
    w.flush()?;
    println!("gate duration (ns): {}", format_sig(run.tau));
    println!("final fidelity: {}", format_sig(run.final_fidelity()));
    println!("wrote {}", path.display());
    check_invariants(&run.report)
}

fn scan(config: Option<&Path>, points: usize, out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = load(config)?;
    let result = theta_scan(&cfg.gate(GateKind::U1), points, &cfg.params, &cfg.simulation)?;
    let path = out.unwrap_or_else(|| cfg.output_dir.join("theta_scan.csv"));
    let mut w = create(&path)?;
    write_scan(&mut w, &result)?;
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}

fn verify(config: Option<&Path>, flip: bool) -> Result<(), Failure> {
    let cfg = load(config)?;
    let outcomes = oracle_suite(&cfg.params, &cfg.simulation, OracleOptions { flip_minus_detuning: flip })?;
    println!("{:<22} {:>12} {:>14}  result", "oracle", "value", "limit");
    for o in &outcomes {
        let limit = format!("{} {:e}", if o.at_least { ">=" } else { "<=" }, o.tolerance);
        println!("{:<22} {:>12.3e} {:>14}  {}", o.name, o.value, limit, if o.passed { "PASS" } else { "FAIL" });
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Physics(format!("{failed} oracle(s) failed")))
    }
}

fn convergence_check(config: Option<&Path>, kind: Kind, initial: &str) -> Result<(), Failure> {
    let cfg = load(config)?;
    let kind: GateKind = kind.into();
    let init = logical_basis(&encoding(kind), initial)?;
    let c = convergence(&cfg.gate(kind), &init, &cfg.params, cfg.mode, &cfg.simulation)?;
    println!("final fidelity: {}", format_sig(c.fidelity));
    println!("dt halved: |dF| = {:e} (limit {DT_DELTA_MAX:e})", c.dt_halved_delta);
    println!("n_max + 1: |dF| = {:e} (limit {CUTOFF_DELTA_MAX:e})", c.n_max_raised_delta);
    check_invariants(&c.report)?;
    if c.dt_halved_delta >= DT_DELTA_MAX || c.n_max_raised_delta >= CUTOFF_DELTA_MAX {
        return Err(Failure::Physics("not converged".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::GateMatrix { kind, theta, phi } => gate_matrix(kind, theta, phi),
        Command::Simulate { config, gate, initial, out } => simulate(config.as_deref(), gate, &initial, out),
        Command::ScanTheta { config, points, out } => scan(config.as_deref(), points, out),
        Command::Verify { config, flip_minus_detuning } => verify(config.as_deref(), flip_minus_detuning),
        Command::Convergence { config, gate, initial } => convergence_check(config.as_deref(), gate, &initial),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(USAGE_ERROR)
        }
        Err(Failure::Physics(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(PHYSICS_FAILURE)
        }
    }
}
