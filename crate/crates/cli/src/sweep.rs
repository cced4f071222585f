//! `bianchi sweep`: a grid of initial data on `A·B·C = V`, one report per
//! point and an index summarizing them.
//!
//! ```json
//! {"class": "sl2r", "A0": {"min": 0.5, "max": 3, "n": 20},
//!  "B0": {"values": [1, 2, 4]}, "volume": 4, "t_max": 50}
//! ```

use std::path::{Path, PathBuf};

use bianchi_core::flow::{integrate, IntegratorConfig};
use bianchi_core::geometry::{BianchiClass, MetricState};
use bianchi_core::spectrum::integrate_envelope;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{parse_class, IntegratorKeys};
use crate::error::{CliError, Result};
use crate::io::{self, fmt_f64};
use crate::report::{analyze, Report};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum Axis {
    /// `n` evenly spaced values from `min` to `max` inclusive.
    Range {
        min: f64,
        max: f64,
        n: usize,
    },
    Values {
        values: Vec<f64>,
    },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Range { min, max, n } => match n {
                0 => Vec::new(),
                1 => vec![*min],
                n => (0..*n)
                    .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
            Axis::Values { values } => values.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    class: String,
    #[serde(rename = "A0")]
    a0: Axis,
    #[serde(rename = "B0")]
    b0: Axis,
    #[serde(default = "four")]
    volume: f64,
    #[serde(default = "one")]
    lambda0: f64,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    max_steps: Option<usize>,
    blowup_threshold: Option<f64>,
    min_step: Option<f64>,
    t_max: Option<f64>,
    max_step: Option<f64>,
}

fn four() -> f64 {
    4.0
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub class: BianchiClass,
    pub a0: Vec<f64>,
    pub b0: Vec<f64>,
    pub volume: f64,
    pub lambda0: f64,
    pub integrator: IntegratorConfig,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{name} must be positive, got {x}"
        )))
    }
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawGrid =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let class = parse_class(&raw.class)?;
        positive("volume", raw.volume)?;
        positive("lambda0", raw.lambda0)?;
        let (a0, b0) = (raw.a0.values(), raw.b0.values());
        if a0.is_empty() || b0.is_empty() {
            return Err(CliError::Config("grid axes must not be empty".into()));
        }
        for x in a0.iter().chain(&b0) {
            positive("grid coordinate", *x)?;
        }
        let integrator = IntegratorKeys {
            rel_tol: raw.rel_tol,
            abs_tol: raw.abs_tol,
            max_steps: raw.max_steps,
            blowup_threshold: raw.blowup_threshold,
            min_step: raw.min_step,
            t_max: raw.t_max,
            max_step: raw.max_step,
        }
        .build();
        let probe = MetricState::initial(a0[0], b0[0], raw.volume / (a0[0] * b0[0]));
        integrator
            .validate(&probe)
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(GridSpec {
            class,
            a0,
            b0,
            volume: raw.volume,
            lambda0: raw.lambda0,
            integrator,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// `(i, j, initial state)` for every grid point, row-major in A0.
    pub fn points(&self) -> Vec<(usize, usize, MetricState)> {
        let mut out = Vec::with_capacity(self.a0.len() * self.b0.len());
        for (i, &a) in self.a0.iter().enumerate() {
            for (j, &b) in self.b0.iter().enumerate() {
                out.push((i, j, MetricState::initial(a, b, self.volume / (a * b))));
            }
        }
        out
    }
}

/// Final values of the eigenvalue envelopes started at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSummary {
    pub lambda_low_final: f64,
    pub lambda_high_final: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub i: usize,
    pub j: usize,
    #[serde(flatten)]
    pub report: Report,
    pub envelope: EnvelopeSummary,
}

#[derive(Debug)]
pub struct PointOutcome {
    pub i: usize,
    pub j: usize,
    pub initial: MetricState,
    pub result: Result<PointReport>,
}

fn run_point(spec: &GridSpec, i: usize, j: usize, initial: &MetricState) -> Result<PointReport> {
    let traj = integrate(spec.class, initial, &spec.integrator)?;
    let report = analyze(&traj)?;
    let env = integrate_envelope(&traj, spec.lambda0, 0.0)?;
    let last = env.last().expect("envelope holds its starting point");
    Ok(PointReport {
        i,
        j,
        report,
        envelope: EnvelopeSummary {
            lambda_low_final: last.lambda_low,
            lambda_high_final: last.lambda_high,
        },
    })
}

pub const INDEX_HEADER: [&str; 16] = [
    "i",
    "j",
    "A0",
    "B0",
    "C0",
    "stop_reason",
    "end_time",
    "T_plus",
    "fixed_point",
    "regime",
    "sl2r_case",
    "tau",
    "pattern",
    "lambda_low_final",
    "lambda_high_final",
    "error",
];

fn index_row(p: &PointOutcome) -> Vec<String> {
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    let mut row = vec![
        p.i.to_string(),
        p.j.to_string(),
        fmt_f64(p.initial.a),
        fmt_f64(p.initial.b),
        fmt_f64(p.initial.c),
    ];
    match &p.result {
        Ok(pr) => {
            let r = &pr.report;
            row.extend([
                r.stop_reason.name().to_string(),
                fmt_f64(r.end_time),
                opt(r.t_plus),
                r.fixed_point.to_string(),
                r.regime.map(|k| k.name().to_string()).unwrap_or_default(),
                r.sl2r_case
                    .as_ref()
                    .map(|c| c.tag.name().to_string())
                    .unwrap_or_default(),
                opt(r.tau),
                r.pattern.clone(),
                fmt_f64(pr.envelope.lambda_low_final),
                fmt_f64(pr.envelope.lambda_high_final),
                String::new(),
            ]);
        }
        Err(e) => {
            row.extend(std::iter::repeat_n(String::new(), 10));
            row.push(e.to_string());
        }
    }
    row
}

/// Output directory must be absent or empty unless `force` is set.
fn prepare_dir(out: &Path, force: bool) -> Result<()> {
    if out.exists() {
        let mut entries = std::fs::read_dir(out).map_err(|e| CliError::io(out, e))?;
        if entries.next().is_some() && !force {
            return Err(CliError::Config(format!(
                "{} exists and is not empty; pass --force to write into it",
                out.display()
            )));
        }
    }
    let points = out.join("points");
    std::fs::create_dir_all(&points).map_err(|e| CliError::io(&points, e))
}

pub fn point_path(out: &Path, i: usize, j: usize) -> PathBuf {
    out.join("points").join(format!("{i}_{j}.json"))
}

/// Runs every grid point on the current rayon pool, writing
/// `points/<i>_<j>.json` as each finishes and `index.csv` at the end.
/// Points that fail are recorded in the index rather than aborting the
/// sweep.
pub fn sweep(spec: &GridSpec, out: &Path, force: bool) -> Result<Vec<PointOutcome>> {
    prepare_dir(out, force)?;
    let outcomes: Vec<PointOutcome> = spec
        .points()
        .into_par_iter()
        .map(|(i, j, initial)| {
            let result = run_point(spec, i, j, &initial).and_then(|pr| {
                io::write_json(&point_path(out, i, j), &pr)?;
                Ok(pr)
            });
            PointOutcome {
                i,
                j,
                initial,
                result,
            }
        })
        .collect();
    let index = out.join("index.csv");
    let mut w = csv::Writer::from_writer(
        std::fs::File::create(&index).map_err(|e| CliError::io(&index, e))?,
    );
    w.write_record(INDEX_HEADER)?;
    for p in &outcomes {
        w.write_record(index_row(p))?;
    }
    w.flush().map_err(|e| CliError::io(&index, e))?;
    Ok(outcomes)
}
