//! Which case of the per-class analysis a trajectory falls into, and the
//! Ricci pattern and monotone quantities that case predicts.

use serde::{Deserialize, Serialize};

use super::sl2r::{classify_labelled, Sl2rCase};
use super::tau::{detect_tau, RicciPattern, Sign};
use crate::error::Result;
use crate::flow::Trajectory;
use crate::geometry::BianchiClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    HeisenbergCollapse,
    Su2Round,
    Su2TwoEqual,
    Su2Collapse,
    E11Symmetric,
    E11Collapse,
    E2Flat,
    E2Collapse,
    Sl2rADominates,
    Sl2rBDominates,
    Sl2rBalanced,
}

impl RegimeKind {
    pub fn name(self) -> &'static str {
        match self {
            RegimeKind::HeisenbergCollapse => "heisenberg_collapse",
            RegimeKind::Su2Round => "su2_round",
            RegimeKind::Su2TwoEqual => "su2_two_equal",
            RegimeKind::Su2Collapse => "su2_collapse",
            RegimeKind::E11Symmetric => "e11_symmetric",
            RegimeKind::E11Collapse => "e11_collapse",
            RegimeKind::E2Flat => "e2_flat",
            RegimeKind::E2Collapse => "e2_collapse",
            RegimeKind::Sl2rADominates => "sl2r_a_dominates",
            RegimeKind::Sl2rBDominates => "sl2r_b_dominates",
            RegimeKind::Sl2rBalanced => "sl2r_balanced",
        }
    }

    /// Metric does not move at all.
    pub fn is_fixed_point(self) -> bool {
        matches!(self, RegimeKind::Su2Round | RegimeKind::E2Flat)
    }
}

/// Predicted eventual behaviour, in the trajectory's own labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub kind: RegimeKind,
    /// Ricci signs and ordering that hold after some time τ.
    pub pattern: RicciPattern,
    /// Ricci index whose monotone quantity on the lower envelope is
    /// nondecreasing after τ.
    pub lower_index: usize,
    /// Ricci index whose monotone quantity on the upper envelope is
    /// nonincreasing after τ.
    pub upper_index: usize,
    /// Whether the flow runs into a finite-time singularity.
    pub singular: bool,
}

impl Regime {
    fn new(
        kind: RegimeKind,
        signs: [Sign; 3],
        order: [usize; 3],
        singular: bool,
        perm: [usize; 3],
    ) -> Self {
        let pattern = RicciPattern::new(signs, order).relabel(perm);
        Regime {
            kind,
            pattern,
            lower_index: pattern.largest(),
            upper_index: pattern.smallest(),
            singular,
        }
    }

    /// Regime entry time along `traj`.
    pub fn tau(&self, traj: &Trajectory) -> Result<f64> {
        detect_tau(traj, &self.pattern)
    }
}

use Sign::{Negative as N, Positive as P, Zero as Z};

/// Matches the trajectory's initial data (and, for SL(2,R), its computed
/// path) against the cases covered by the per-class analysis. Returns `None`
/// for data outside those cases, e.g. E(1,1) with `A₀ > C₀` but `B₀ > C₀`.
pub fn identify_regime(traj: &Trajectory) -> Result<Option<Regime>> {
    let [a, b, c] = traj.initial().state.coefficients();
    let regime = match traj.class() {
        BianchiClass::Heisenberg => {
            let perm = if b >= c { [1, 2, 3] } else { [1, 3, 2] };
            Some(Regime::new(
                RegimeKind::HeisenbergCollapse,
                [P, N, N],
                [1, 3, 2],
                true,
                perm,
            ))
        }
        BianchiClass::Su2 => {
            let x = [a, b, c];
            let mut perm = [1, 2, 3];
            perm.sort_by(|&i, &j| x[j - 1].total_cmp(&x[i - 1]));
            let [x1, x2, x3] = perm.map(|i| x[i - 1]);
            Some(if x1 == x3 {
                Regime::new(RegimeKind::Su2Round, [P, P, P], [1, 2, 3], false, perm)
            } else if x1 == x2 {
                Regime::new(RegimeKind::Su2TwoEqual, [P, P, P], [1, 2, 3], false, perm)
            } else {
                Regime::new(RegimeKind::Su2Collapse, [P, N, N], [1, 3, 2], true, perm)
            })
        }
        BianchiClass::E11 => {
            let (perm, hi, lo) = if a >= c {
                ([1, 2, 3], a, c)
            } else {
                ([3, 2, 1], c, a)
            };
            if hi == lo {
                Some(Regime::new(
                    RegimeKind::E11Symmetric,
                    [Z, N, Z],
                    [1, 3, 2],
                    true,
                    perm,
                ))
            } else if lo >= b {
                Some(Regime::new(
                    RegimeKind::E11Collapse,
                    [P, N, N],
                    [1, 2, 3],
                    true,
                    perm,
                ))
            } else {
                None
            }
        }
        BianchiClass::E2 => {
            let (perm, hi, lo) = if a >= b {
                ([1, 2, 3], a, b)
            } else {
                ([2, 1, 3], b, a)
            };
            if hi == lo {
                Some(Regime::new(
                    RegimeKind::E2Flat,
                    [Z, Z, Z],
                    [1, 2, 3],
                    false,
                    perm,
                ))
            } else if c >= lo {
                Some(Regime::new(
                    RegimeKind::E2Collapse,
                    [P, N, N],
                    [1, 2, 3],
                    true,
                    perm,
                ))
            } else {
                None
            }
        }
        BianchiClass::Sl2r => {
            let swap = c > b;
            let perm = if swap { [1, 3, 2] } else { [1, 2, 3] };
            let (a_idx, c_idx) = (0, if swap { 1 } else { 2 });
            match classify_labelled(traj, swap)?.case {
                Sl2rCase::ADominates => Some(Regime::new(
                    RegimeKind::Sl2rADominates,
                    [P, N, N],
                    [1, 3, 2],
                    true,
                    perm,
                )),
                Sl2rCase::BDominates => {
                    let a_passes_c = traj.samples().iter().any(|s| {
                        let x = s.state.coefficients();
                        x[a_idx] > x[c_idx]
                    });
                    a_passes_c.then(|| {
                        Regime::new(RegimeKind::Sl2rBDominates, [N, P, N], [2, 3, 1], true, perm)
                    })
                }
                Sl2rCase::Balanced => Some(Regime::new(
                    RegimeKind::Sl2rBalanced,
                    [P, N, N],
                    [1, 2, 3],
                    true,
                    perm,
                )),
            }
        }
    };
    Ok(regime)
}
