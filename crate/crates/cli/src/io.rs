//! CSV and JSON files. Floats are written with 17 significant digits so
//! they read back bit for bit.

use std::fs::File;
use std::path::Path;

use bianchi_core::flow::Trajectory;
use bianchi_core::geometry::MetricState;
use bianchi_core::spectrum::{EnvelopePoint, MonotoneQuantity};
use serde::{de::DeserializeOwned, Serialize};

use crate::error::{CliError, Result};

pub const TRAJECTORY_HEADER: [&str; 8] = ["t", "A", "B", "C", "R11", "R22", "R33", "R"];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| CliError::io(path, e))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(TRAJECTORY_HEADER)?;
    for s in traj.samples() {
        let k = s.curvature;
        let row = [
            s.state.t, s.state.a, s.state.b, s.state.c, k.r11, k.r22, k.r33, k.r,
        ];
        w.write_record(row.map(fmt_f64))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// States `(t, A, B, C)` from a trajectory CSV; curvature columns are
/// ignored since they are recomputed on use.
pub fn read_trajectory_csv(path: &Path) -> Result<Vec<MetricState>> {
    let mut r = csv::Reader::from_reader(open(path)?);
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != TRAJECTORY_HEADER {
        return Err(CliError::Config(format!(
            "{}: unexpected header '{}'",
            path.display(),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut states = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<f64> {
            record[i].trim().parse().map_err(|_| {
                CliError::Config(format!(
                    "{}: row {}: '{}' is not a number",
                    path.display(),
                    line + 2,
                    &record[i]
                ))
            })
        };
        states.push(MetricState::new(field(0)?, field(1)?, field(2)?, field(3)?));
    }
    Ok(states)
}

pub fn write_envelope_csv(
    path: &Path,
    envelope: &[EnvelopePoint],
    monotone: &[(String, MonotoneQuantity)],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let mut header = vec!["t".to_string(), "lambda_low".into(), "lambda_high".into()];
    header.extend(monotone.iter().map(|(name, _)| name.clone()));
    w.write_record(&header)?;
    for (i, p) in envelope.iter().enumerate() {
        let mut row = vec![fmt_f64(p.t), fmt_f64(p.lambda_low), fmt_f64(p.lambda_high)];
        row.extend(monotone.iter().map(|(_, q)| fmt_f64(q.values[i].1)));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            2f64.sqrt(),
            1e-300,
            6.02e23,
            -0.0,
            f64::MIN_POSITIVE,
        ] {
            let back: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x}");
        }
    }
}
