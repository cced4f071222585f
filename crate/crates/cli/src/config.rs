//! Run configuration: a flat JSON object.
//!
//! ```json
//! {"class": "heisenberg", "A0": 1, "B0": 2, "C0": 2, "lambda0": 1,
//!  "t_max": 50, "rel_tol": 1e-9, "monotone": ["low:1", "high:2"]}
//! ```

use std::path::Path;

use bianchi_core::flow::IntegratorConfig;
use bianchi_core::geometry::{BianchiClass, MetricState};
use bianchi_core::spectrum::Bound;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Horizon used when a config does not set `t_max`.
pub const DEFAULT_T_MAX: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    TrajectoryCsv,
    EnvelopeCsv,
    ReportJson,
}

impl OutputKind {
    pub const ALL: [OutputKind; 3] = [
        OutputKind::TrajectoryCsv,
        OutputKind::EnvelopeCsv,
        OutputKind::ReportJson,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            OutputKind::TrajectoryCsv => "trajectory.csv",
            OutputKind::EnvelopeCsv => "envelope.csv",
            OutputKind::ReportJson => "report.json",
        }
    }
}

/// Where the eigenvalue envelopes start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TauSpec {
    At(f64),
    /// `"auto"`: the detected regime time, or 0 when there is none.
    Keyword(TauKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauKeyword {
    Auto,
}

impl Default for TauSpec {
    fn default() -> Self {
        TauSpec::At(0.0)
    }
}

/// A monotone quantity column request such as `"low:1"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotoneSpec {
    pub bound: Bound,
    pub ricci_index: usize,
}

impl MonotoneSpec {
    pub fn column(&self) -> String {
        format!("mono_{}_{}", self.bound.name(), self.ricci_index)
    }
}

impl std::str::FromStr for MonotoneSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            CliError::Config(format!(
                "monotone entry '{s}' is not of the form low:1 or high:3"
            ))
        };
        let (bound, idx) = s.split_once(':').ok_or_else(bad)?;
        let bound = match bound.trim() {
            "low" => Bound::Low,
            "high" => Bound::High,
            _ => return Err(bad()),
        };
        let ricci_index: usize = idx.trim().parse().map_err(|_| bad())?;
        if !(1..=3).contains(&ricci_index) {
            return Err(bad());
        }
        Ok(MonotoneSpec { bound, ricci_index })
    }
}

/// Integrator keys shared by run configs and sweep grid specs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegratorKeys {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_steps: Option<usize>,
    pub blowup_threshold: Option<f64>,
    pub min_step: Option<f64>,
    pub t_max: Option<f64>,
    pub max_step: Option<f64>,
}

impl IntegratorKeys {
    pub fn build(&self) -> IntegratorConfig {
        let d = IntegratorConfig::default();
        IntegratorConfig {
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            max_steps: self.max_steps.unwrap_or(d.max_steps),
            blowup_threshold: self.blowup_threshold.unwrap_or(d.blowup_threshold),
            min_step: self.min_step.unwrap_or(d.min_step),
            t_max: Some(self.t_max.unwrap_or(DEFAULT_T_MAX)),
            max_step: self.max_step,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    class: String,
    #[serde(rename = "A0")]
    a0: f64,
    #[serde(rename = "B0")]
    b0: f64,
    #[serde(rename = "C0")]
    c0: f64,
    #[serde(default = "one")]
    lambda0: f64,
    #[serde(default)]
    tau: TauSpec,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    max_steps: Option<usize>,
    blowup_threshold: Option<f64>,
    min_step: Option<f64>,
    t_max: Option<f64>,
    max_step: Option<f64>,
    outputs: Option<Vec<OutputKind>>,
    #[serde(default)]
    monotone: Vec<String>,
}

pub(crate) fn parse_class(name: &str) -> Result<BianchiClass> {
    name.parse()
        .map_err(|_| CliError::Config(format!("unknown Bianchi class '{name}'")))
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub class: BianchiClass,
    pub initial: MetricState,
    pub lambda0: f64,
    pub tau: TauSpec,
    pub integrator: IntegratorConfig,
    pub outputs: Vec<OutputKind>,
    pub monotone: Vec<MonotoneSpec>,
}

/// Relative tolerance on `A0·B0·C0 = 4` before a warning is issued.
const VOLUME_WARN_TOL: f64 = 1e-12;

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let class = parse_class(&raw.class)?;
        let initial = MetricState::initial(raw.a0, raw.b0, raw.c0);
        initial
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if !(raw.lambda0.is_finite() && raw.lambda0 > 0.0) {
            return Err(CliError::Config(format!(
                "lambda0 must be positive, got {}",
                raw.lambda0
            )));
        }
        if let TauSpec::At(t) = raw.tau {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Config(format!(
                    "tau must be nonnegative, got {t}"
                )));
            }
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
        integrator
            .validate(&initial)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let monotone = raw
            .monotone
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<MonotoneSpec>>>()?;
        let mut outputs = raw.outputs.unwrap_or_else(|| OutputKind::ALL.to_vec());
        outputs.dedup();
        if outputs.is_empty() {
            return Err(CliError::Config("outputs must not be empty".into()));
        }
        Ok(RunConfig {
            class,
            initial,
            lambda0: raw.lambda0,
            tau: raw.tau,
            integrator,
            outputs,
            monotone,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Non-fatal remarks about the configuration.
    pub fn warnings(&self) -> Vec<String> {
        let v = self.initial.volume();
        if (v / 4.0 - 1.0).abs() > VOLUME_WARN_TOL {
            vec![format!(
                "A0*B0*C0 = {v} differs from the normalization 4; results are stated for that normalization"
            )]
        } else {
            Vec::new()
        }
    }

    pub fn override_rel_tol(&mut self, rel_tol: f64) -> Result<()> {
        self.integrator.rel_tol = rel_tol;
        self.integrator
            .validate(&self.initial)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn override_t_max(&mut self, t_max: f64) -> Result<()> {
        self.integrator.t_max = Some(t_max);
        self.integrator
            .validate(&self.initial)
            .map_err(|e| CliError::Config(e.to_string()))
    }
}
