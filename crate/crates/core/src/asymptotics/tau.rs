use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::Trajectory;
use crate::geometry::CurvatureData;

/// Ricci eigenvalues within this fraction of the curvature magnitude count
/// as zero, and as equal to each other.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    fn of(x: f64, tol: f64) -> Sign {
        if x > tol {
            Sign::Positive
        } else if x < -tol {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
            Sign::Zero => '0',
        }
    }
}

/// Signs of `(R11, R22, R33)` together with a descending order of the three
/// (1-based indices). Neighbours in `order` may be equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RicciPattern {
    pub signs: [Sign; 3],
    pub order: [usize; 3],
}

impl RicciPattern {
    pub fn new(signs: [Sign; 3], order: [usize; 3]) -> Self {
        RicciPattern { signs, order }
    }

    /// Pattern of a single curvature sample, ties broken by index.
    pub fn observe(k: &CurvatureData) -> Self {
        let ricci = k.ricci();
        let tol = TIE_TOLERANCE * k.magnitude();
        let mut order = [1, 2, 3];
        order.sort_by(|&i, &j| ricci[j - 1].total_cmp(&ricci[i - 1]));
        RicciPattern {
            signs: ricci.map(|x| Sign::of(x, tol)),
            order,
        }
    }

    pub fn holds(&self, k: &CurvatureData) -> bool {
        let ricci = k.ricci();
        let tol = TIE_TOLERANCE * k.magnitude();
        let signs_match = ricci
            .iter()
            .zip(self.signs)
            .all(|(&x, s)| Sign::of(x, tol) == s);
        signs_match
            && self
                .order
                .windows(2)
                .all(|w| ricci[w[0] - 1] >= ricci[w[1] - 1] - tol)
    }

    /// Index of the largest Ricci eigenvalue.
    pub fn largest(&self) -> usize {
        self.order[0]
    }

    /// Index of the smallest Ricci eigenvalue.
    pub fn smallest(&self) -> usize {
        self.order[2]
    }

    /// Same pattern with coefficient labels exchanged by `perm`, where label
    /// `i` of this pattern becomes label `perm[i - 1]`.
    pub fn relabel(&self, perm: [usize; 3]) -> Self {
        let mut signs = self.signs;
        for i in 0..3 {
            signs[perm[i] - 1] = self.signs[i];
        }
        RicciPattern {
            signs,
            order: self.order.map(|i| perm[i - 1]),
        }
    }
}

impl fmt::Display for RicciPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.signs.map(Sign::symbol);
        let [i, j, k] = self.order;
        write!(f, "({a},{b},{c}) R{i}{i}>=R{j}{j}>=R{k}{k}")
    }
}

/// First sample time after which `pattern` holds at every remaining sample.
pub fn detect_tau(traj: &Trajectory, pattern: &RicciPattern) -> Result<f64> {
    let samples = traj.samples();
    match samples.iter().rposition(|s| !pattern.holds(&s.curvature)) {
        None if samples.is_empty() => Err(Error::EmptyTrajectory),
        None => Ok(samples[0].state.t),
        Some(i) if i + 1 == samples.len() => Err(Error::PatternNotFound),
        Some(i) => Ok(samples[i + 1].state.t),
    }
}
