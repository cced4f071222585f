//! The JSON summary of one trajectory. Every number in it is a function of
//! the sampled states and the stop reason alone, so a trajectory read back
//! from CSV reproduces it.

use bianchi_core::asymptotics::{
    analyze_growth, analyze_singularity, classify_sl2r_unordered, detect_tau, identify_regime,
    PowerLaw, RegimeKind, RicciPattern, Sl2rCase,
};
use bianchi_core::flow::{flow_rhs, StopReason, Trajectory};
use bianchi_core::geometry::{BianchiClass, MetricState};
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Largest relative rate `|dX/dt|/X` at which initial data count as a fixed
/// point.
pub const FIXED_POINT_RATE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    #[serde(rename = "A")]
    pub a: PowerLaw,
    #[serde(rename = "B")]
    pub b: PowerLaw,
    #[serde(rename = "C")]
    pub c: PowerLaw,
}

impl Exponents {
    fn new([a, b, c]: [PowerLaw; 3]) -> Self {
        Exponents { a, b, c }
    }

    pub fn as_array(&self) -> [PowerLaw; 3] {
        [self.a, self.b, self.c]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentMode {
    /// Laws in `T₊ − t`.
    Singular,
    /// Laws in `t`.
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternSource {
    /// The pattern the regime's analysis predicts.
    Predicted,
    /// No prediction applies; the pattern at the final sample.
    Observed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sl2rReport {
    pub tag: Sl2rCase,
    pub witness_time: Option<f64>,
    pub horizon: f64,
    pub c_law: Option<PowerLaw>,
    /// B and C were exchanged because `C0 > B0`.
    pub labels_swapped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub class: BianchiClass,
    pub initial: MetricState,
    pub stop_reason: StopReason,
    pub end_time: f64,
    pub samples: usize,
    pub volume_drift: f64,
    #[serde(rename = "T_plus")]
    pub t_plus: Option<f64>,
    pub exponents: Option<Exponents>,
    pub exponent_mode: Option<ExponentMode>,
    pub fit_window: Option<(f64, f64)>,
    /// Why `exponents` is missing, when it is.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis_error: Option<String>,
    pub fixed_point: bool,
    pub regime: Option<RegimeKind>,
    pub pattern: String,
    pub pattern_source: PatternSource,
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sl2r_case: Option<Sl2rReport>,
}

/// Whether the flow vanishes at `state` to within [`FIXED_POINT_RATE`].
pub fn is_fixed_point(class: BianchiClass, state: &MetricState) -> Result<bool> {
    let rhs = flow_rhs(class, state)?;
    Ok(rhs
        .iter()
        .zip(state.coefficients())
        .all(|(d, x)| (d / x).abs() <= FIXED_POINT_RATE))
}

pub fn analyze(traj: &Trajectory) -> Result<Report> {
    let initial = traj.initial().state;
    let class = traj.class();
    let mut report = Report {
        class,
        initial,
        stop_reason: traj.stop_reason(),
        end_time: traj.end_time(),
        samples: traj.len(),
        volume_drift: traj.volume_drift(),
        t_plus: None,
        exponents: None,
        exponent_mode: None,
        fit_window: None,
        analysis_error: None,
        fixed_point: is_fixed_point(class, &initial)?,
        regime: None,
        pattern: String::new(),
        pattern_source: PatternSource::Observed,
        tau: None,
        sl2r_case: None,
    };

    let fit = if traj.stop_reason().is_singular() {
        analyze_singularity(traj).map(|s| {
            report.t_plus = Some(s.t_plus);
            (s.exponents, ExponentMode::Singular, s.fit_window)
        })
    } else {
        analyze_growth(traj).map(|g| (g.exponents, ExponentMode::Polynomial, g.fit_window))
    };
    match fit {
        Ok((laws, mode, window)) => {
            report.exponents = Some(Exponents::new(laws));
            report.exponent_mode = Some(mode);
            report.fit_window = Some(window);
        }
        Err(e) => report.analysis_error = Some(e.to_string()),
    }

    let regime = identify_regime(traj)?;
    report.regime = regime.map(|r| r.kind);
    let (pattern, source) = match regime {
        Some(r) => (r.pattern, PatternSource::Predicted),
        None => (
            RicciPattern::observe(&traj.last().curvature),
            PatternSource::Observed,
        ),
    };
    report.pattern = pattern.to_string();
    report.pattern_source = source;
    report.tau = detect_tau(traj, &pattern).ok();

    if class == BianchiClass::Sl2r {
        let (c, swapped) = classify_sl2r_unordered(traj)?;
        report.sl2r_case = Some(Sl2rReport {
            tag: c.case,
            witness_time: c.witness_time,
            horizon: c.horizon,
            c_law: c.c_law,
            labels_swapped: swapped,
        });
    }
    Ok(report)
}
