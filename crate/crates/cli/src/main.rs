use std::path::PathBuf;
use std::process::ExitCode;

use bianchi_cli::config::RunConfig;
use bianchi_cli::sweep::{sweep, GridSpec};
use bianchi_cli::verify::{verify, Check, Suite};
use bianchi_cli::{CliError, Result};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "bianchi",
    version,
    about = "Backward Ricci flow on Bianchi geometries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one trajectory and write its CSV files and JSON report.
    Run {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        rel_tol: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        /// Overwrite existing output files.
        #[arg(long)]
        force: bool,
    },
    /// Run verification checks; exits 2 if any fail.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long)]
        rel_tol: Option<f64>,
    },
    /// Run a grid of initial conditions.
    Sweep {
        gridspec: PathBuf,
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
        #[arg(long)]
        rel_tol: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        /// Worker threads; defaults to the number of available cores.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write into a non-empty output directory.
        #[arg(long)]
        force: bool,
    },
}

fn positive_flag(name: &str, x: Option<f64>) -> Result<()> {
    match x {
        Some(v) if !(v.is_finite() && v > 0.0) => Err(CliError::Config(format!(
            "--{name} must be positive, got {v}"
        ))),
        _ => Ok(()),
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run {
            config,
            out,
            rel_tol,
            t_max,
            force,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(r) = rel_tol {
                cfg.override_rel_tol(r)?;
            }
            if let Some(t) = t_max {
                cfg.override_t_max(t)?;
            }
            for w in cfg.warnings() {
                eprintln!("warning: {w}");
            }
            let done = bianchi_cli::run::run(&cfg, &out, force)?;
            let r = &done.report;
            println!(
                "{}: {} at t = {} after {} samples",
                r.class, r.stop_reason, r.end_time, r.samples
            );
            for f in &done.files {
                println!("wrote {}", f.display());
            }
            Ok(())
        }
        Command::Verify { suite, rel_tol } => {
            positive_flag("rel-tol", rel_tol)?;
            let suite: Suite = suite.parse()?;
            let checks = verify(suite, rel_tol, |c| println!("{c}"))?;
            let failed = checks.iter().filter(|c| !Check::passed(c)).count();
            println!("{} checks, {failed} failed", checks.len());
            if failed > 0 {
                return Err(CliError::VerificationFailed {
                    failed,
                    total: checks.len(),
                });
            }
            Ok(())
        }
        Command::Sweep {
            gridspec,
            out,
            rel_tol,
            t_max,
            jobs,
            force,
        } => {
            positive_flag("rel-tol", rel_tol)?;
            positive_flag("t-max", t_max)?;
            let mut spec = GridSpec::load(&gridspec)?;
            if let Some(r) = rel_tol {
                spec.integrator.rel_tol = r;
            }
            if let Some(t) = t_max {
                spec.integrator.t_max = Some(t);
            }
            if jobs == Some(0) {
                return Err(CliError::Config("--jobs must be at least 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()
                .map_err(|e| CliError::Config(e.to_string()))?;
            let outcomes = pool.install(|| sweep(&spec, &out, force))?;
            let failed = outcomes.iter().filter(|p| p.result.is_err()).count();
            println!(
                "{} points, {failed} failed; index at {}",
                outcomes.len(),
                out.join("index.csv").display()
            );
            match outcomes.into_iter().find_map(|p| p.result.err()) {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
