use std::fmt;

use serde::{Deserialize, Serialize};

use super::{analyze_singularity, fit_exponent, FitMode, PowerLaw};
use crate::error::{Error, Result};
use crate::flow::{integrate, IntegratorConfig, Trajectory};
use crate::geometry::{BianchiClass, MetricState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sl2rCase {
    /// `A ≥ B` at some time.
    #[serde(rename = "case1_a_dominates")]
    ADominates,
    /// `A ≤ B − C` at some time.
    #[serde(rename = "case2_b_dominates")]
    BDominates,
    /// `A < B < A + C` at every sample.
    #[serde(rename = "case3_balanced")]
    Balanced,
}

impl Sl2rCase {
    pub fn name(self) -> &'static str {
        match self {
            Sl2rCase::ADominates => "case1_a_dominates",
            Sl2rCase::BDominates => "case2_b_dominates",
            Sl2rCase::Balanced => "case3_balanced",
        }
    }

    /// Which case a single state witnesses, if any.
    pub fn witnessed_by(state: &MetricState) -> Option<Sl2rCase> {
        if state.a >= state.b {
            Some(Sl2rCase::ADominates)
        } else if state.a <= state.b - state.c {
            Some(Sl2rCase::BDominates)
        } else {
            None
        }
    }
}

impl fmt::Display for Sl2rCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sl2rClassification {
    pub case: Sl2rCase,
    /// First sample time at which the defining condition held; absent for
    /// the balanced case.
    pub witness_time: Option<f64>,
    /// Balanced means balanced up to this time.
    pub horizon: f64,
    /// Fitted `C ≈ η(T₊ − t)^p` for a balanced trajectory that stopped at a
    /// singularity.
    pub c_law: Option<PowerLaw>,
}

fn check_order(initial: &MetricState) -> Result<()> {
    if initial.b < initial.c {
        return Err(Error::UnorderedSl2r {
            b0: initial.b,
            c0: initial.c,
        });
    }
    Ok(())
}

/// Classifies a computed SL(2,R) trajectory with `B₀ ≥ C₀`.
pub fn classify_sl2r_trajectory(traj: &Trajectory) -> Result<Sl2rClassification> {
    if !traj.is_empty() {
        check_order(&traj.initial().state)?;
    }
    classify_labelled(traj, false)
}

/// Classifies any SL(2,R) trajectory, exchanging the roles of B and C when
/// `C₀ > B₀` (the flow is symmetric under that exchange). The flag reports
/// whether the labels were exchanged.
pub fn classify_sl2r_unordered(traj: &Trajectory) -> Result<(Sl2rClassification, bool)> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let init = traj.initial().state;
    let swap = init.c > init.b;
    classify_labelled(traj, swap).map(|c| (c, swap))
}

/// Classification with the roles of B and C exchanged when `swap_bc` is set,
/// for data with `C₀ > B₀`.
pub(crate) fn classify_labelled(traj: &Trajectory, swap_bc: bool) -> Result<Sl2rClassification> {
    if traj.class() != BianchiClass::Sl2r {
        return Err(Error::WrongClass {
            expected: BianchiClass::Sl2r.name(),
            got: traj.class().name(),
        });
    }
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let horizon = traj.end_time();
    for s in traj.samples() {
        let mut state = s.state;
        if swap_bc {
            std::mem::swap(&mut state.b, &mut state.c);
        }
        if let Some(case) = Sl2rCase::witnessed_by(&state) {
            return Ok(Sl2rClassification {
                case,
                witness_time: Some(s.state.t),
                horizon,
                c_law: None,
            });
        }
    }
    let c_index = if swap_bc { 1 } else { 2 };
    let c_law = match analyze_singularity(traj) {
        Ok(report) => {
            let window: Vec<_> = traj
                .coefficient_series(c_index)
                .into_iter()
                .filter(|p| p.0 >= report.fit_window.0)
                .collect();
            Some(fit_exponent(
                &window,
                FitMode::Singular {
                    t_plus: report.t_plus,
                },
            )?)
        }
        Err(Error::NoSingularity(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(Sl2rClassification {
        case: Sl2rCase::Balanced,
        witness_time: None,
        horizon,
        c_law,
    })
}

/// Integrates from `initial` and classifies the result.
pub fn classify_sl2r(
    initial: &MetricState,
    config: &IntegratorConfig,
) -> Result<(Sl2rClassification, Trajectory)> {
    check_order(initial)?;
    let traj = integrate(BianchiClass::Sl2r, initial, config)?;
    Ok((classify_sl2r_trajectory(&traj)?, traj))
}

/// Bisects along `A = a0`, `C = 4/(a0·B)` between a `B` giving the
/// A-dominated case and one giving the B-dominated case, returning the first
/// balanced point found (or the last midpoint once `B` stops changing).
///
/// The balanced case is a codimension-one boundary between the other two;
/// how long a bisected point stays balanced is limited by `config`'s
/// blow-up threshold and by floating-point resolution in `B`.
pub fn refine_sl2r_separatrix(
    a0: f64,
    b_a_dominated: f64,
    b_b_dominated: f64,
    config: &IntegratorConfig,
) -> Result<(MetricState, Sl2rClassification, Trajectory)> {
    let state = |b: f64| MetricState::initial(a0, b, 4.0 / (a0 * b));
    let case = |b: f64| classify_sl2r(&state(b), config).map(|(c, _)| c.case);
    if case(b_a_dominated)? != Sl2rCase::ADominates || case(b_b_dominated)? != Sl2rCase::BDominates
    {
        return Err(Error::InvalidConfig(format!(
            "bisection needs B = {b_a_dominated} in case 1 and B = {b_b_dominated} in case 2"
        )));
    }
    let (mut lo, mut hi) = (b_a_dominated, b_b_dominated);
    loop {
        let mid = (lo * hi).sqrt();
        let mid_state = state(mid);
        let (classification, traj) = classify_sl2r(&mid_state, config)?;
        let converged = mid == lo || mid == hi;
        match classification.case {
            Sl2rCase::Balanced => return Ok((mid_state, classification, traj)),
            _ if converged => return Ok((mid_state, classification, traj)),
            Sl2rCase::ADominates => lo = mid,
            Sl2rCase::BDominates => hi = mid,
        }
    }
}
