//! Bianchi classes, their Milnor frames, and the diagonal Ricci curvature of a
//! left-invariant metric `g = A f¹⊗f¹ + B f²⊗f² + C f³⊗f³`.
//!
//! Curvature is always evaluated from the factored per-class formulas, never
//! from expanded polynomials, and is recomputed from the metric on demand.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients at or below this magnitude are treated as degenerate.
pub const MIN_COEFFICIENT: f64 = 1e-300;

/// The five unimodular Bianchi geometries handled by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BianchiClass {
    Heisenberg,
    Su2,
    E11,
    E2,
    Sl2r,
}

impl BianchiClass {
    pub const ALL: [BianchiClass; 5] = [
        BianchiClass::Heisenberg,
        BianchiClass::Su2,
        BianchiClass::E11,
        BianchiClass::E2,
        BianchiClass::Sl2r,
    ];

    /// Short machine name, as used in config files and reports.
    pub fn name(self) -> &'static str {
        match self {
            BianchiClass::Heisenberg => "heisenberg",
            BianchiClass::Su2 => "su2",
            BianchiClass::E11 => "e11",
            BianchiClass::E2 => "e2",
            BianchiClass::Sl2r => "sl2r",
        }
    }
}

impl fmt::Display for BianchiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BianchiClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ',' | '_' | '-' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "heisenberg" | "nil" => Ok(BianchiClass::Heisenberg),
            "su2" => Ok(BianchiClass::Su2),
            "e11" => Ok(BianchiClass::E11),
            "e2" => Ok(BianchiClass::E2),
            "sl2r" | "sl2" => Ok(BianchiClass::Sl2r),
            _ => Err(format!(
                "unknown Bianchi class '{s}' (expected heisenberg, su2, e11, e2 or sl2r)"
            )),
        }
    }
}

/// Signed structure constants `(λ₁, λ₂, λ₃)` of a Milnor frame:
/// `[f₂,f₃] = 2λ₁f₁`, `[f₃,f₁] = 2λ₂f₂`, `[f₁,f₂] = 2λ₃f₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StructureConstants(pub [i8; 3]);

pub fn structure_constants(class: BianchiClass) -> StructureConstants {
    StructureConstants(match class {
        BianchiClass::Heisenberg => [1, 0, 0],
        BianchiClass::Su2 => [1, 1, 1],
        BianchiClass::E11 => [1, 0, -1],
        BianchiClass::E2 => [1, 1, 0],
        BianchiClass::Sl2r => [-1, 1, 1],
    })
}

/// A point on a flow line: time plus the diagonal metric coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricState {
    pub t: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl MetricState {
    pub fn new(t: f64, a: f64, b: f64, c: f64) -> Self {
        MetricState { t, a, b, c }
    }

    /// State at `t = 0`.
    pub fn initial(a: f64, b: f64, c: f64) -> Self {
        MetricState { t: 0.0, a, b, c }
    }

    pub fn from_coefficients(t: f64, [a, b, c]: [f64; 3]) -> Self {
        MetricState { t, a, b, c }
    }

    pub fn coefficients(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// `A·B·C`, which the normalized flow preserves.
    pub fn volume(&self) -> f64 {
        self.a * self.b * self.c
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("A", self.a), ("B", self.b), ("C", self.c)] {
            if !value.is_finite() || value <= MIN_COEFFICIENT {
                return Err(Error::DegenerateMetric { name, value });
            }
        }
        Ok(())
    }
}

/// Diagonal Ricci components in the Milnor frame and the scalar curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureData {
    #[serde(rename = "R11")]
    pub r11: f64,
    #[serde(rename = "R22")]
    pub r22: f64,
    #[serde(rename = "R33")]
    pub r33: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl CurvatureData {
    pub const FLAT: CurvatureData = CurvatureData {
        r11: 0.0,
        r22: 0.0,
        r33: 0.0,
        r: 0.0,
    };

    pub fn ricci(&self) -> [f64; 3] {
        [self.r11, self.r22, self.r33]
    }

    /// Ricci component by 1-based index.
    pub fn ricci_component(&self, index: usize) -> Result<f64> {
        match index {
            1 => Ok(self.r11),
            2 => Ok(self.r22),
            3 => Ok(self.r33),
            _ => Err(Error::InvalidRicciIndex(index)),
        }
    }

    pub fn max_ricci(&self) -> f64 {
        self.r11.max(self.r22).max(self.r33)
    }

    pub fn min_ricci(&self) -> f64 {
        self.r11.min(self.r22).min(self.r33)
    }

    /// Largest absolute curvature scalar, used to scale zero tests.
    pub fn magnitude(&self) -> f64 {
        self.r11
            .abs()
            .max(self.r22.abs())
            .max(self.r33.abs())
            .max(self.r.abs())
    }
}

pub fn curvature(class: BianchiClass, state: &MetricState) -> Result<CurvatureData> {
    state.validate()?;
    let MetricState { a, b, c, .. } = *state;
    let data = match class {
        BianchiClass::Heisenberg => CurvatureData {
            r11: 0.5 * a.powi(3),
            r22: -0.5 * a * a * b,
            r33: -0.5 * a * a * c,
            r: -0.5 * a * a,
        },
        BianchiClass::Su2 => {
            let (p, q, s) = (
                a * a - (b - c) * (b - c),
                b * b - (a - c) * (a - c),
                c * c - (a - b) * (a - b),
            );
            CurvatureData {
                r11: 0.5 * a * p,
                r22: 0.5 * b * q,
                r33: 0.5 * c * s,
                r: 0.5 * p + 0.5 * q + 0.5 * s,
            }
        }
        BianchiClass::E11 => CurvatureData {
            r11: 0.5 * a * (a * a - c * c),
            r22: -0.5 * b * (a + c) * (a + c),
            r33: 0.5 * c * (c * c - a * a),
            r: -0.5 * (a + c) * (a + c),
        },
        BianchiClass::E2 => CurvatureData {
            r11: 0.5 * a * (a * a - b * b),
            r22: 0.5 * b * (b * b - a * a),
            r33: -0.5 * c * (a - b) * (a - b),
            r: -0.5 * (a - b) * (a - b),
        },
        BianchiClass::Sl2r => {
            let (p, q, s) = (
                a * a - (b - c) * (b - c),
                b * b - (a + c) * (a + c),
                c * c - (a + b) * (a + b),
            );
            CurvatureData {
                r11: 0.5 * a * p,
                r22: 0.5 * b * q,
                r33: 0.5 * c * s,
                r: 0.5 * p + 0.5 * q + 0.5 * s,
            }
        }
    };
    Ok(data)
}
