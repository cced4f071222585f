//! Two-sided envelopes for the first eigenvalue of the Laplacian along a
//! trajectory, the monotone quantities built from them, and the two explicit
//! bounds available in closed form.
//!
//! Both envelopes solve linear ODEs whose rates are the Ricci integrals
//! already carried by each [`Sample`](crate::flow::Sample), so
//! `low(t) = λ(τ)·exp(lower(t) − lower(τ))` and likewise for `high`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{e11_symmetric_singular_time, heisenberg_singular_time, Trajectory};
use crate::geometry::CurvatureData;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub t: f64,
    pub lambda_low: f64,
    pub lambda_high: f64,
    /// Natural logarithms of the bounds. These stay finite after the bounds
    /// themselves under- or overflow close to a singularity.
    pub log_low: f64,
    pub log_high: f64,
}

impl EnvelopePoint {
    pub fn from_logs(t: f64, log_low: f64, log_high: f64) -> Self {
        EnvelopePoint {
            t,
            lambda_low: log_low.exp(),
            lambda_high: log_high.exp(),
            log_low,
            log_high,
        }
    }
}

fn check_positive(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveEigenvalue(lambda))
    }
}

/// Time derivatives `(d low/dt, d high/dt)` of the two envelopes.
pub fn envelope_rhs(curv: &CurvatureData, point: &EnvelopePoint) -> Result<(f64, f64)> {
    check_positive(point.lambda_low)?;
    check_positive(point.lambda_high)?;
    let base = 2.0 / 3.0 * curv.r;
    Ok((
        (base - 2.0 * curv.max_ricci()) * point.lambda_low,
        (base - 2.0 * curv.min_ricci()) * point.lambda_high,
    ))
}

/// Envelopes starting from `lambda_init` at `tau`. The first point sits at
/// `tau`; the rest are the trajectory samples strictly after it.
pub fn integrate_envelope(
    traj: &Trajectory,
    lambda_init: f64,
    tau: f64,
) -> Result<Vec<EnvelopePoint>> {
    check_positive(lambda_init)?;
    let start = traj.integrals_at(tau)?;
    let ln0 = lambda_init.ln();
    let first = EnvelopePoint {
        t: tau,
        lambda_low: lambda_init,
        lambda_high: lambda_init,
        log_low: ln0,
        log_high: ln0,
    };
    let rest = traj.samples().iter().filter(|s| s.state.t > tau).map(|s| {
        EnvelopePoint::from_logs(
            s.state.t,
            ln0 + (s.integrals.lower - start.lower),
            ln0 + (s.integrals.upper - start.upper),
        )
    });
    Ok(std::iter::once(first).chain(rest).collect())
}

/// Which envelope a monotone quantity is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Low,
    High,
}

impl Bound {
    pub fn name(self) -> &'static str {
        match self {
            Bound::Low => "low",
            Bound::High => "high",
        }
    }

    pub fn of(self, point: &EnvelopePoint) -> f64 {
        match self {
            Bound::Low => point.lambda_low,
            Bound::High => point.lambda_high,
        }
    }

    pub fn log_of(self, point: &EnvelopePoint) -> f64 {
        match self {
            Bound::Low => point.log_low,
            Bound::High => point.log_high,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
}

impl Monotonicity {
    pub fn name(self) -> &'static str {
        match self {
            Monotonicity::Nondecreasing => "nondecreasing",
            Monotonicity::Nonincreasing => "nonincreasing",
        }
    }
}

/// `λ_bound(t)·exp(∫_τ^t (−2R/3 + 2Rᵢᵢ) ds)` sampled on the envelope grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneQuantity {
    pub ricci_index: usize,
    pub bound: Bound,
    pub tau: f64,
    /// `(t, value)` pairs.
    pub values: Vec<(f64, f64)>,
    /// Natural logarithm of each value.
    pub log_values: Vec<f64>,
}

/// Result of a discrete monotonicity test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    /// Largest step against the claimed direction, as a relative change of
    /// the value. Non-positive when the series is monotone outright.
    pub worst_violation: f64,
    pub slack: f64,
}

impl MonotonicityCheck {
    pub fn holds(&self) -> bool {
        self.worst_violation <= self.slack
    }
}

impl MonotoneQuantity {
    /// Tests the claimed direction, tolerating `slack·|value|` per step.
    pub fn check(&self, direction: Monotonicity, slack: f64) -> MonotonicityCheck {
        let sign = match direction {
            Monotonicity::Nondecreasing => 1.0,
            Monotonicity::Nonincreasing => -1.0,
        };
        let worst_violation = self
            .log_values
            .windows(2)
            .map(|w| -(sign * (w[1] - w[0])).exp_m1())
            .fold(f64::NEG_INFINITY, f64::max);
        MonotonicityCheck {
            worst_violation,
            slack,
        }
    }

    /// Largest relative deviation from the starting value.
    pub fn spread(&self) -> f64 {
        let l0 = self.log_values[0];
        self.log_values
            .iter()
            .map(|l| (l - l0).exp_m1().abs())
            .fold(0.0, f64::max)
    }
}

/// Builds the monotone quantity with exponent index `ricci_index` (1-based)
/// on the chosen envelope. Only points at or after `tau` are used.
pub fn monotone_quantity(
    traj: &Trajectory,
    series: &[EnvelopePoint],
    bound: Bound,
    ricci_index: usize,
    tau: f64,
) -> Result<MonotoneQuantity> {
    if !(1..=3).contains(&ricci_index) {
        return Err(Error::InvalidRicciIndex(ricci_index));
    }
    let start = traj.integrals_at(tau)?.ricci[ricci_index - 1];
    let mut values = Vec::with_capacity(series.len());
    let mut log_values = Vec::with_capacity(series.len());
    for p in series.iter().filter(|p| p.t >= tau) {
        let integral = traj.integrals_at(p.t)?.ricci[ricci_index - 1] - start;
        let log_value = bound.log_of(p) - integral;
        values.push((p.t, log_value.exp()));
        log_values.push(log_value);
    }
    if values.is_empty() {
        return Err(Error::TooFewPoints { got: 0, need: 1 });
    }
    Ok(MonotoneQuantity {
        ricci_index,
        bound,
        tau,
        values,
        log_values,
    })
}

/// Explicit Heisenberg bounds from `λ(0) = lambda0`, for `B₀ ≥ C₀`.
///
/// With `s = 1 + 16R₀t/3` and `R₀ = −A₀²/2`:
/// `low = λ₀·exp(3A₀/4·(1 − s^{−1/2}))·s^{1/8}`,
/// `high = λ₀·exp(3B₀/2·(1 − s^{1/4}))·s^{1/8}`.
pub fn heisenberg_bounds_closed_form(a0: f64, b0: f64, lambda0: f64, t: f64) -> Result<(f64, f64)> {
    for (name, value) in [("A", a0), ("B", b0)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::DegenerateMetric { name, value });
        }
    }
    check_positive(lambda0)?;
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let r0 = -0.5 * a0 * a0;
    let s = 1.0 + 16.0 * r0 * t / 3.0;
    if !(s > 0.0) {
        return Err(Error::BeyondSingularTime {
            t,
            singular: heisenberg_singular_time(a0),
        });
    }
    let tail = s.powf(0.125);
    Ok((
        lambda0 * (0.75 * a0 * (1.0 - 1.0 / s.sqrt())).exp() * tail,
        lambda0 * (1.5 * b0 * (1.0 - s.powf(0.25))).exp() * tail,
    ))
}

/// Explicit bounds for the symmetric E(1,1) flow (`A₀ = C₀`, `A₀²B₀ = 4`):
/// `low = λ₀((T₊ − t)/T₊)^{1/2}`, `high = low·e^{16t}`.
pub fn e11_symmetric_bounds(b0: f64, lambda0: f64, t: f64) -> Result<(f64, f64)> {
    if !(b0.is_finite() && b0 > 0.0) {
        return Err(Error::DegenerateMetric {
            name: "B",
            value: b0,
        });
    }
    check_positive(lambda0)?;
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let t_plus = e11_symmetric_singular_time(b0);
    if !(t < t_plus) {
        return Err(Error::BeyondSingularTime {
            t,
            singular: t_plus,
        });
    }
    let low = lambda0 * ((t_plus - t) / t_plus).sqrt();
    Ok((low, low * (16.0 * t).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{integrate, IntegratorConfig};
    use crate::geometry::{curvature, BianchiClass, MetricState};
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    const UNIT: EnvelopePoint = EnvelopePoint {
        t: 0.0,
        lambda_low: 1.0,
        lambda_high: 1.0,
        log_low: 0.0,
        log_high: 0.0,
    };

    #[test]
    fn rhs_examples() {
        let k = curvature(
            BianchiClass::Heisenberg,
            &MetricState::initial(1.0, 2.0, 2.0),
        )
        .unwrap();
        let (lo, hi) = envelope_rhs(&k, &UNIT).unwrap();
        assert!((lo + 4.0 / 3.0).abs() < 1e-15);
        assert!((hi - 5.0 / 3.0).abs() < 1e-15);

        assert_eq!(
            envelope_rhs(&CurvatureData::FLAT, &UNIT).unwrap(),
            (0.0, 0.0)
        );

        let c = 4f64.cbrt();
        let k = curvature(BianchiClass::Su2, &MetricState::initial(c, c, c)).unwrap();
        let (lo, hi) = envelope_rhs(&k, &UNIT).unwrap();
        assert_eq!(lo, hi);
        assert!(rel(lo, c * c - c * c * c) < 1e-14);
    }

    #[test]
    fn rhs_rejects_nonpositive_bounds() {
        let p = EnvelopePoint {
            lambda_low: 0.0,
            log_low: f64::NEG_INFINITY,
            ..UNIT
        };
        assert_eq!(
            envelope_rhs(&CurvatureData::FLAT, &p),
            Err(Error::NonPositiveEigenvalue(0.0))
        );
    }

    #[test]
    fn heisenberg_closed_form_examples() {
        assert_eq!(
            heisenberg_bounds_closed_form(1.0, 2.0, 1.0, 0.0).unwrap(),
            (1.0, 1.0)
        );
        let (lo, hi) = heisenberg_bounds_closed_form(1.0, 2.0, 1.0, 0.1875).unwrap();
        let tail = 0.5f64.powf(0.125);
        assert!(rel(lo, (0.75 * (1.0 - 2f64.sqrt())).exp() * tail) < 1e-14);
        assert!(rel(hi, (3.0 * (1.0 - 0.5f64.powf(0.25))).exp() * tail) < 1e-14);
        assert!((lo - 0.672_129_956_6).abs() < 1e-9);
        assert!((hi - 1.477_966_795_8).abs() < 1e-9);

        let (lo, _) = heisenberg_bounds_closed_form(1.0, 2.0, 1.0, 0.375 * (1.0 - 1e-10)).unwrap();
        assert!(lo < 1e-100);
        assert!(heisenberg_bounds_closed_form(1.0, 2.0, 1.0, 0.375).is_err());
        assert!(heisenberg_bounds_closed_form(1.0, 2.0, 1.0, -0.1).is_err());
        assert!(heisenberg_bounds_closed_form(1.0, 2.0, -1.0, 0.1).is_err());
    }

    #[test]
    fn e11_closed_form_examples() {
        assert_eq!(e11_symmetric_bounds(2.0, 1.0, 0.0).unwrap(), (1.0, 1.0));
        let (lo, hi) = e11_symmetric_bounds(2.0, 1.0, 0.09375).unwrap();
        assert!(rel(lo, 0.5f64.sqrt()) < 1e-15);
        assert!((hi - 3.169).abs() < 1e-3);
        let (lo, _) = e11_symmetric_bounds(2.0, 1.0, 0.1875 - 1e-12).unwrap();
        assert!(lo < 1e-5);
        assert!(e11_symmetric_bounds(2.0, 1.0, 0.1875).is_err());
    }

    fn heisenberg() -> Trajectory {
        integrate(
            BianchiClass::Heisenberg,
            &MetricState::initial(1.0, 2.0, 2.0),
            &IntegratorConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn heisenberg_envelope_matches_closed_form() {
        let traj = heisenberg();
        let env = integrate_envelope(&traj, 1.0, 0.0).unwrap();
        let mut checked = 0;
        for p in env.iter().filter(|p| p.t <= 0.3375) {
            let (lo, hi) = heisenberg_bounds_closed_form(1.0, 2.0, 1.0, p.t).unwrap();
            assert!(
                rel(p.lambda_low, lo) < 1e-6,
                "t={} {} vs {}",
                p.t,
                p.lambda_low,
                lo
            );
            assert!(
                rel(p.lambda_high, hi) < 1e-6,
                "t={} {} vs {}",
                p.t,
                p.lambda_high,
                hi
            );
            checked += 1;
        }
        assert!(checked > 20);
    }

    #[test]
    fn heisenberg_monotone_quantities() {
        let traj = heisenberg();
        let env = integrate_envelope(&traj, 1.0, 0.0).unwrap();
        let up = monotone_quantity(&traj, &env, Bound::Low, 1, 0.0).unwrap();
        assert!(up.check(Monotonicity::Nondecreasing, 1e-8).holds());
        // R11 is the largest Ricci eigenvalue, so this one is constant.
        assert!(up.spread() < 1e-10, "{}", up.spread());
        let down = monotone_quantity(&traj, &env, Bound::High, 2, 0.0).unwrap();
        assert!(down.check(Monotonicity::Nonincreasing, 1e-8).holds());
        // Against the claim it fails outright.
        let wrong = monotone_quantity(&traj, &env, Bound::Low, 2, 0.0).unwrap();
        assert!(!wrong.check(Monotonicity::Nondecreasing, 1e-8).holds());
    }

    #[test]
    fn monotone_quantity_starts_at_bound() {
        let traj = heisenberg();
        let tau = 0.1234;
        let env = integrate_envelope(&traj, 2.5, tau).unwrap();
        assert_eq!(env[0].t, tau);
        assert!(env[1..].iter().all(|p| p.t > tau));
        for idx in 1..=3 {
            let q = monotone_quantity(&traj, &env, Bound::High, idx, tau).unwrap();
            assert_eq!(q.values[0], (tau, 2.5));
        }
        assert_eq!(
            monotone_quantity(&traj, &env, Bound::High, 4, tau),
            Err(Error::InvalidRicciIndex(4))
        );
    }

    #[test]
    fn envelope_rejects_bad_start() {
        let traj = heisenberg();
        assert!(matches!(
            integrate_envelope(&traj, 1.0, 1.0),
            Err(Error::TauOutOfRange { .. })
        ));
        assert!(integrate_envelope(&traj, 0.0, 0.0).is_err());
    }

    #[test]
    fn su2_round_envelopes_coincide() {
        let c = 4f64.cbrt();
        let traj = integrate(
            BianchiClass::Su2,
            &MetricState::initial(c, c, c),
            &IntegratorConfig::default().with_t_max(10.0),
        )
        .unwrap();
        for p in integrate_envelope(&traj, 1.0, 0.0).unwrap() {
            assert_eq!(p.lambda_low, p.lambda_high);
        }
    }

    #[test]
    fn symmetric_e11_lower_envelope_is_explicit() {
        let a = 2f64.sqrt();
        let traj = integrate(
            BianchiClass::E11,
            &MetricState::initial(a, 2.0, a),
            &IntegratorConfig::default(),
        )
        .unwrap();
        for p in integrate_envelope(&traj, 1.0, 0.0).unwrap() {
            if p.t > 0.9 * 0.1875 {
                break;
            }
            let (lo, hi) = e11_symmetric_bounds(2.0, 1.0, p.t).unwrap();
            assert!(rel(p.lambda_low, lo) < 1e-6);
            assert!(p.lambda_high <= hi * (1.0 + 1e-6));
        }
    }

    fn coefficient() -> impl Strategy<Value = f64> {
        (-1.0f64..1.0).prop_map(f64::exp)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn envelopes_stay_ordered(a in coefficient(), b in coefficient(), class in 0usize..5) {
            let class = BianchiClass::ALL[class];
            let state = MetricState::initial(a, b, 4.0 / (a * b));
            let cfg = IntegratorConfig::default().with_t_max(2.0);
            let traj = integrate(class, &state, &cfg).unwrap();
            for p in integrate_envelope(&traj, 1.0, 0.0).unwrap() {
                prop_assert!(p.log_low.is_finite() && p.log_high.is_finite());
                prop_assert!(p.log_low <= p.log_high);
                prop_assert!(p.lambda_low <= p.lambda_high);
            }
        }
    }
}
