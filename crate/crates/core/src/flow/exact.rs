//! Exact solutions for the two explicitly solvable cases, used as oracles.

use crate::error::{Error, Result};
use crate::geometry::MetricState;

/// Singular time `−3/(16R₀)` of the Heisenberg flow, with `R₀ = −A₀²/2`.
pub fn heisenberg_singular_time(a0: f64) -> f64 {
    3.0 / (8.0 * a0 * a0)
}

/// Exact Heisenberg solution at absolute time `t`, started from `initial`
/// (at `initial.t`).
pub fn closed_form_heisenberg(initial: &MetricState, t: f64) -> Result<MetricState> {
    initial.validate()?;
    let r0 = -0.5 * initial.a * initial.a;
    let elapsed = t - initial.t;
    let s = 1.0 + 16.0 / 3.0 * r0 * elapsed;
    if !(s > 0.0) {
        return Err(Error::BeyondSingularTime {
            t,
            singular: initial.t + heisenberg_singular_time(initial.a),
        });
    }
    Ok(MetricState::new(
        t,
        initial.a / s.sqrt(),
        initial.b * s.powf(0.25),
        initial.c * s.powf(0.25),
    ))
}

/// Blow-up time `3B₀/32` of the symmetric (`A = C`) E(1,1) flow.
pub fn e11_symmetric_singular_time(b0: f64) -> f64 {
    3.0 * b0 / 32.0
}

/// Exact symmetric E(1,1) solution with `A₀ = C₀` and `A₀²B₀ = 4`.
pub fn closed_form_e11_symmetric(b0: f64, t: f64) -> Result<MetricState> {
    if !(b0.is_finite() && b0 > 0.0) {
        return Err(Error::DegenerateMetric {
            name: "B",
            value: b0,
        });
    }
    let t_plus = e11_symmetric_singular_time(b0);
    let remaining = t_plus - t;
    if !(remaining > 0.0) {
        return Err(Error::BeyondSingularTime {
            t,
            singular: t_plus,
        });
    }
    let a = 6f64.sqrt() / 4.0 / remaining.sqrt();
    Ok(MetricState::new(t, a, 32.0 / 3.0 * remaining, a))
}
