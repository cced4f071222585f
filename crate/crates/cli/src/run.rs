//! `bianchi run`: one trajectory, its envelopes and its report.

use std::path::{Path, PathBuf};

use bianchi_core::flow::{integrate, Trajectory};
use bianchi_core::spectrum::{integrate_envelope, monotone_quantity, EnvelopePoint};

use crate::config::{OutputKind, RunConfig, TauSpec};
use crate::error::{CliError, Result};
use crate::io;
use crate::report::{analyze, Report};

#[derive(Debug)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    pub report: Report,
    pub envelope: Vec<EnvelopePoint>,
    pub envelope_tau: f64,
    pub files: Vec<PathBuf>,
}

/// Refuses to clobber existing output files unless `force` is set.
pub fn check_targets(paths: &[PathBuf], force: bool) -> Result<()> {
    if force {
        return Ok(());
    }
    match paths.iter().find(|p| p.exists()) {
        Some(p) => Err(CliError::Config(format!(
            "{} already exists; pass --force to overwrite",
            p.display()
        ))),
        None => Ok(()),
    }
}

/// Computes everything a run needs without touching the filesystem.
pub fn compute(cfg: &RunConfig) -> Result<(Trajectory, Report, f64, Vec<EnvelopePoint>)> {
    let traj = integrate(cfg.class, &cfg.initial, &cfg.integrator)?;
    let report = analyze(&traj)?;
    let tau = match cfg.tau {
        TauSpec::At(t) => t,
        TauSpec::Keyword(_) => report.tau.unwrap_or(0.0),
    };
    let envelope = integrate_envelope(&traj, cfg.lambda0, tau)?;
    Ok((traj, report, tau, envelope))
}

fn write_outputs(
    cfg: &RunConfig,
    out: &Path,
    traj: &Trajectory,
    report: &Report,
    tau: f64,
    envelope: &[EnvelopePoint],
    written: &mut Vec<PathBuf>,
) -> Result<()> {
    for kind in &cfg.outputs {
        let path = out.join(kind.file_name());
        written.push(path.clone());
        match kind {
            OutputKind::TrajectoryCsv => io::write_trajectory_csv(&path, traj)?,
            OutputKind::ReportJson => io::write_json(&path, report)?,
            OutputKind::EnvelopeCsv => {
                let columns = cfg
                    .monotone
                    .iter()
                    .map(|m| {
                        monotone_quantity(traj, envelope, m.bound, m.ricci_index, tau)
                            .map(|q| (m.column(), q))
                    })
                    .collect::<bianchi_core::Result<Vec<_>>>()?;
                io::write_envelope_csv(&path, envelope, &columns)?;
            }
        }
    }
    Ok(())
}

/// Runs `cfg` and writes the requested files into `out`. On failure every
/// file this call created is removed again.
pub fn run(cfg: &RunConfig, out: &Path, force: bool) -> Result<RunOutput> {
    let targets: Vec<PathBuf> = cfg
        .outputs
        .iter()
        .map(|k| out.join(k.file_name()))
        .collect();
    check_targets(&targets, force)?;
    let (trajectory, report, envelope_tau, envelope) = compute(cfg)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut written = Vec::new();
    if let Err(e) = write_outputs(
        cfg,
        out,
        &trajectory,
        &report,
        envelope_tau,
        &envelope,
        &mut written,
    ) {
        for path in &written {
            let _ = std::fs::remove_file(path);
        }
        return Err(e);
    }
    Ok(RunOutput {
        trajectory,
        report,
        envelope,
        envelope_tau,
        files: written,
    })
}
