//! Normalized backward Ricci flow `∂g/∂t = 2Rc − (2R/3)g` restricted to
//! diagonal left-invariant metrics, plus an adaptive integrator that stops
//! cleanly at finite-time singularities.

mod dopri;
mod exact;
mod trajectory;

pub use exact::{
    closed_form_e11_symmetric, closed_form_heisenberg, e11_symmetric_singular_time,
    heisenberg_singular_time,
};
pub use trajectory::{
    integrate, EnvelopeIntegrals, IntegratorConfig, Sample, StopReason, Trajectory,
};

use crate::error::Result;
use crate::geometry::{BianchiClass, MetricState};

/// Right-hand side `(dA/dt, dB/dt, dC/dt)` of the class-specific flow system.
///
/// These are the factored per-class equations. They agree with
/// `2R_XX − (2/3)R·X` from [`crate::geometry::curvature`] up to rounding,
/// which the tests check independently.
pub fn flow_rhs(class: BianchiClass, state: &MetricState) -> Result<[f64; 3]> {
    state.validate()?;
    let MetricState { a, b, c, .. } = *state;
    const TWO_THIRDS: f64 = 2.0 / 3.0;
    let rhs = match class {
        BianchiClass::Heisenberg => [
            4.0 / 3.0 * a.powi(3),
            -TWO_THIRDS * a * a * b,
            -TWO_THIRDS * a * a * c,
        ],
        BianchiClass::Su2 => [
            -TWO_THIRDS * a * (-a * (2.0 * a - b - c) + (b - c) * (b - c)),
            -TWO_THIRDS * b * (-b * (2.0 * b - a - c) + (a - c) * (a - c)),
            -TWO_THIRDS * c * (-c * (2.0 * c - a - b) + (a - b) * (a - b)),
        ],
        BianchiClass::E11 => [
            TWO_THIRDS * a * (2.0 * a * a + a * c - c * c),
            -TWO_THIRDS * b * (a + c) * (a + c),
            TWO_THIRDS * c * (2.0 * c * c + a * c - a * a),
        ],
        BianchiClass::E2 => [
            TWO_THIRDS * a * (2.0 * a + b) * (a - b),
            -TWO_THIRDS * b * (2.0 * b + a) * (a - b),
            -TWO_THIRDS * c * (a - b) * (a - b),
        ],
        BianchiClass::Sl2r => [
            -TWO_THIRDS * (-a * a * (2.0 * a + b + c) + a * (b - c) * (b - c)),
            -TWO_THIRDS * (-b * b * (2.0 * b + a - c) + b * (a + c) * (a + c)),
            -TWO_THIRDS * (-c * c * (2.0 * c + a - b) + c * (a + b) * (a + b)),
        ],
    };
    Ok(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curvature;
    use proptest::prelude::*;

    #[test]
    fn su2_round_metric_is_a_fixed_point() {
        let c = 4f64.cbrt();
        assert_eq!(
            flow_rhs(BianchiClass::Su2, &MetricState::initial(c, c, c)).unwrap(),
            [0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn heisenberg_rhs_example() {
        let rhs = flow_rhs(
            BianchiClass::Heisenberg,
            &MetricState::initial(1.0, 2.0, 2.0),
        )
        .unwrap();
        for (got, want) in rhs.iter().zip([4.0 / 3.0, -4.0 / 3.0, -4.0 / 3.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn e2_rhs_vanishes_on_a_equals_b() {
        assert_eq!(
            flow_rhs(BianchiClass::E2, &MetricState::initial(0.8, 0.8, 6.25)).unwrap(),
            [0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn rhs_rejects_degenerate_state() {
        assert!(flow_rhs(BianchiClass::Su2, &MetricState::initial(1.0, 0.0, 1.0)).is_err());
    }

    fn coefficient() -> impl Strategy<Value = f64> {
        (-2.5f64..2.5).prop_map(f64::exp)
    }

    proptest! {
        #[test]
        fn rhs_matches_ricci_identity(a in coefficient(), b in coefficient(), c in coefficient()) {
            let state = MetricState::initial(a, b, c);
            for class in BianchiClass::ALL {
                let rhs = flow_rhs(class, &state).unwrap();
                let k = curvature(class, &state).unwrap();
                for ((x, rxx), d) in state.coefficients().iter().zip(k.ricci()).zip(rhs) {
                    let expected = 2.0 * rxx - 2.0 / 3.0 * k.r * x;
                    let scale = (2.0 * rxx).abs() + (2.0 / 3.0 * k.r * x).abs();
                    prop_assert!((d - expected).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE),
                        "{class}: {d} vs {expected}");
                }
            }
        }

        #[test]
        fn rhs_is_volume_preserving(a in coefficient(), b in coefficient(), c in coefficient()) {
            let state = MetricState::initial(a, b, c);
            for class in BianchiClass::ALL {
                let [da, db, dc] = flow_rhs(class, &state).unwrap();
                let terms = [da * b * c, a * db * c, a * b * dc];
                let scale: f64 = terms.iter().map(|x| x.abs()).sum();
                prop_assert!(terms.iter().sum::<f64>().abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
            }
        }
    }
}
