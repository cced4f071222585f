//! The upper eigenvalue envelope decays like a positive power of `T₊ − t`
//! in every sub-Riemannian collapse.

use bianchi_core::{
    analyze_singularity, fit_exponent, integrate, integrate_envelope, BianchiClass, FitMode,
    IntegratorConfig, MetricState,
};

fn decay_exponent(class: BianchiClass, [a, b, c]: [f64; 3]) -> f64 {
    let traj = integrate(
        class,
        &MetricState::initial(a, b, c),
        &IntegratorConfig::default(),
    )
    .unwrap();
    let report = analyze_singularity(&traj).unwrap();
    let (start, _) = report.fit_window;
    let env = integrate_envelope(&traj, 1.0, 0.0).unwrap();
    let series: Vec<(f64, f64)> = env
        .iter()
        .filter(|p| p.t >= start && p.t < report.t_plus)
        .map(|p| (p.t, p.lambda_high))
        .collect();
    fit_exponent(
        &series,
        FitMode::Singular {
            t_plus: report.t_plus,
        },
    )
    .unwrap()
    .exponent
}

#[test]
fn upper_envelope_decays_in_every_collapse() {
    for (class, abc) in [
        (BianchiClass::Heisenberg, [1.0, 2.0, 2.0]),
        (BianchiClass::Su2, [2.0, 1.6, 1.25]),
        (BianchiClass::E11, [2.0, 1.25, 1.6]),
        (BianchiClass::E2, [2.0, 1.25, 1.6]),
        (BianchiClass::Sl2r, [2.0, 2.0, 1.0]),
        (BianchiClass::Sl2r, [0.5, 4.0, 2.0]),
    ] {
        let p = decay_exponent(class, abc);
        assert!(p > 0.0 && p < 1.0, "{class} {abc:?}: decay exponent {p}");
    }
}

#[test]
fn heisenberg_decay_exponent_is_one_eighth() {
    // high = exp(3(1 − s^{1/4}))·s^{1/8} with s ∝ T₊ − t: the power is 1/8
    // once s^{1/4} is negligible.
    let p = decay_exponent(BianchiClass::Heisenberg, [1.0, 2.0, 2.0]);
    assert!((p - 0.125).abs() < 0.05, "{p}");
}
