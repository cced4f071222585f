use bianchi_core::{
    curvature, integrate, integrate_envelope, BianchiClass, IntegratorConfig, MetricState,
};
use proptest::prelude::*;

fn normalized() -> impl Strategy<Value = MetricState> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(la, lb)| {
        let (a, b) = (la.exp(), lb.exp());
        MetricState::initial(a, b, 4.0 / (a * b))
    })
}

fn class() -> impl Strategy<Value = BianchiClass> {
    prop::sample::select(BianchiClass::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn volume_is_conserved(class in class(), state in normalized()) {
        let cfg = IntegratorConfig::default().with_t_max(2.0);
        let traj = integrate(class, &state, &cfg).unwrap();
        prop_assert!(traj.volume_drift() <= 1e-7, "{class}: drift {}", traj.volume_drift());
        for s in traj.samples() {
            prop_assert!(s.state.validate().is_ok());
        }
    }

    #[test]
    fn envelopes_stay_ordered_and_positive(class in class(), state in normalized()) {
        let cfg = IntegratorConfig::default().with_t_max(2.0);
        let traj = integrate(class, &state, &cfg).unwrap();
        for p in integrate_envelope(&traj, 1.0, 0.0).unwrap() {
            prop_assert!(p.log_low <= p.log_high + 1e-12);
            prop_assert!(p.lambda_high > 0.0);
        }
    }

    #[test]
    fn heisenberg_stops_at_the_exact_singular_time(a in 0.5f64..2.0, b in 0.5f64..4.0) {
        let state = MetricState::initial(a, b, 4.0 / (a * b));
        // A² obeys d(A²)/dt = (8/3)A⁴, so A blows up when 1 + 16R₀t/3 = 0.
        let r0 = curvature(BianchiClass::Heisenberg, &state).unwrap().r;
        let t_plus = -3.0 / (16.0 * r0);
        let traj = integrate(BianchiClass::Heisenberg, &state, &IntegratorConfig::default()).unwrap();
        prop_assert!(traj.stop_reason().is_singular());
        prop_assert!((t_plus - traj.end_time()).abs() / t_plus < 1e-3);
    }
}
