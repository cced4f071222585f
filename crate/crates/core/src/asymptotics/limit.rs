use serde::{Deserialize, Serialize};

use super::{analyze_singularity, fit_exponent, FitMode};
use crate::error::{Error, Result};
use crate::flow::Trajectory;

/// Dual components whose fitted decay exponent exceeds this are
/// extrapolated to zero.
const VANISHING_EXPONENT: f64 = 0.1;

/// Rescaled co-metric `(s₀/s(t))⁻¹·(1/A, 1/B, 1/C)` near the singularity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubRiemannianLimit {
    /// Zero-based index of the coefficient `s` used for rescaling.
    pub rescale_index: usize,
    /// Dual components at the final sample.
    pub dual_final: [f64; 3],
    /// Fitted exponents of the dual components in `T₊ − t`.
    pub dual_exponents: [f64; 3],
    /// Extrapolated limits: zero where the component decays, otherwise its
    /// final value.
    pub dual_limit: [f64; 3],
}

/// Rescales by the slowest-decaying vanishing coefficient and extrapolates
/// the dual components to the singular time.
pub fn subriemannian_limit(traj: &Trajectory) -> Result<SubRiemannianLimit> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let first = traj.initial().state.coefficients();
    let last = traj.last().state.coefficients();
    let rescale_index = (0..3)
        .filter(|&i| last[i] < first[i])
        .max_by(|&i, &j| last[i].total_cmp(&last[j]))
        .ok_or(Error::NoVanishingCoefficient)?;
    let report = analyze_singularity(traj)?;
    let s0 = first[rescale_index];
    let dual_at = |x: [f64; 3]| x.map(|xi| x[rescale_index] / (s0 * xi));
    let window: Vec<(f64, [f64; 3])> = traj
        .samples()
        .iter()
        .filter(|s| s.state.t >= report.fit_window.0)
        .map(|s| (s.state.t, dual_at(s.state.coefficients())))
        .collect();
    let dual_final = dual_at(last);
    let mut dual_exponents = [0.0; 3];
    let mut dual_limit = dual_final;
    for i in 0..3 {
        let series: Vec<(f64, f64)> = window.iter().map(|(t, d)| (*t, d[i])).collect();
        let law = fit_exponent(
            &series,
            FitMode::Singular {
                t_plus: report.t_plus,
            },
        )?;
        dual_exponents[i] = law.exponent;
        if law.exponent > VANISHING_EXPONENT {
            dual_limit[i] = 0.0;
        }
    }
    Ok(SubRiemannianLimit {
        rescale_index,
        dual_final,
        dual_exponents,
        dual_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{integrate, IntegratorConfig};
    use crate::geometry::{BianchiClass, MetricState};

    #[test]
    fn heisenberg_limit() {
        let traj = integrate(
            BianchiClass::Heisenberg,
            &MetricState::initial(1.0, 2.0, 2.0),
            &IntegratorConfig::default(),
        )
        .unwrap();
        let lim = subriemannian_limit(&traj).unwrap();
        assert_eq!(lim.rescale_index, 2);
        assert_eq!(lim.dual_limit[0], 0.0);
        assert!((lim.dual_limit[1] - 0.5).abs() < 1e-6);
        assert!((lim.dual_limit[2] - 0.5).abs() < 1e-15);
        assert!((lim.dual_exponents[0] - 0.75).abs() < 0.02);
    }

    #[test]
    fn su2_collapse_rescales_by_b() {
        let traj = integrate(
            BianchiClass::Su2,
            &MetricState::initial(2.0, 1.6, 1.25),
            &IntegratorConfig::default(),
        )
        .unwrap();
        let lim = subriemannian_limit(&traj).unwrap();
        assert_eq!(lim.rescale_index, 1);
        assert_eq!(lim.dual_limit[0], 0.0);
        assert!(lim.dual_limit[1] > 0.0 && lim.dual_limit[2] > 0.0);
    }

    #[test]
    fn fixed_point_has_no_limit() {
        let c = 4f64.cbrt();
        let traj = integrate(
            BianchiClass::Su2,
            &MetricState::initial(c, c, c),
            &IntegratorConfig::default().with_t_max(1.0),
        )
        .unwrap();
        assert_eq!(
            subriemannian_limit(&traj),
            Err(Error::NoVanishingCoefficient)
        );
    }
}
