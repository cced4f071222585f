use std::fmt;

use serde::{Deserialize, Serialize};

use super::dopri::{self, ORDER};
use super::flow_rhs;
use crate::error::{Error, Result};
use crate::geometry::{curvature, BianchiClass, CurvatureData, MetricState, MIN_COEFFICIENT};

/// Consecutive samples never change a coefficient by more than this factor.
pub const SAMPLE_RATIO: f64 = 1.2;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
/// Default step cap is the horizon span divided by this.
const HORIZON_SUBDIVISIONS: f64 = 256.0;

/// Controls for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Budget of attempted (accepted plus rejected) steps.
    pub max_steps: usize,
    /// Integration stops once any coefficient reaches this magnitude.
    pub blowup_threshold: f64,
    /// Integration stops once the controller asks for a smaller step.
    pub min_step: f64,
    pub t_max: Option<f64>,
    /// Largest admissible step. When unset and `t_max` is given, steps are
    /// capped at 1/256 of the horizon span.
    #[serde(default)]
    pub max_step: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-30,
            max_steps: 1_000_000,
            blowup_threshold: 1e8,
            min_step: 1e-14,
            t_max: None,
            max_step: None,
        }
    }
}

impl IntegratorConfig {
    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = Some(t_max);
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_blowup_threshold(mut self, threshold: f64) -> Self {
        self.blowup_threshold = threshold;
        self
    }

    pub fn validate(&self, initial: &MetricState) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {x}"
                )))
            }
        };
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("min_step", self.min_step)?;
        if let Some(h) = self.max_step {
            positive("max_step", h)?;
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        let largest = initial.a.max(initial.b).max(initial.c);
        if !(self.blowup_threshold > largest) {
            return Err(Error::InvalidConfig(format!(
                "blowup_threshold {} must exceed the largest initial coefficient {largest}",
                self.blowup_threshold
            )));
        }
        if let Some(t_max) = self.t_max {
            if !(t_max.is_finite() && t_max > initial.t) {
                return Err(Error::InvalidConfig(format!(
                    "t_max {t_max} must be finite and later than the initial time {}",
                    initial.t
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    HorizonReached,
    BlowupDetected,
    StepUnderflow,
    StepBudget,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::HorizonReached => "horizon_reached",
            StopReason::BlowupDetected => "blowup_detected",
            StopReason::StepUnderflow => "step_underflow",
            StopReason::StepBudget => "step_budget",
        }
    }

    /// True when the stop signals an approaching finite-time singularity.
    pub fn is_singular(self) -> bool {
        matches!(self, StopReason::BlowupDetected | StopReason::StepUnderflow)
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for StopReason {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "horizon_reached" => Ok(StopReason::HorizonReached),
            "blowup_detected" => Ok(StopReason::BlowupDetected),
            "step_underflow" => Ok(StopReason::StepUnderflow),
            "step_budget" => Ok(StopReason::StepBudget),
            other => Err(format!("unknown stop reason '{other}'")),
        }
    }
}

/// Running integrals, from the start of the trajectory, of the log-rates
/// that drive the eigenvalue envelopes:
///
/// * `lower  = ∫ (2R/3 − 2·max Rᵢᵢ)`
/// * `upper  = ∫ (2R/3 − 2·min Rᵢᵢ)`
/// * `ricci[i] = ∫ (2R/3 − 2Rᵢᵢ)`
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnvelopeIntegrals {
    pub lower: f64,
    pub upper: f64,
    pub ricci: [f64; 3],
}

impl EnvelopeIntegrals {
    /// Integrands at a point with curvature `k`.
    pub fn rates(k: &CurvatureData) -> Self {
        let base = 2.0 / 3.0 * k.r;
        EnvelopeIntegrals {
            lower: base - 2.0 * k.max_ricci(),
            upper: base - 2.0 * k.min_ricci(),
            ricci: k.ricci().map(|rii| base - 2.0 * rii),
        }
    }

    fn to_array(self) -> [f64; 5] {
        [
            self.lower,
            self.upper,
            self.ricci[0],
            self.ricci[1],
            self.ricci[2],
        ]
    }

    fn from_array(x: [f64; 5]) -> Self {
        EnvelopeIntegrals {
            lower: x[0],
            upper: x[1],
            ricci: [x[2], x[3], x[4]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub state: MetricState,
    pub curvature: CurvatureData,
    pub integrals: EnvelopeIntegrals,
}

/// A computed flow line. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    class: BianchiClass,
    samples: Vec<Sample>,
    stop_reason: StopReason,
    volume_drift: f64,
    config: IntegratorConfig,
    accepted_steps: usize,
    rejected_steps: usize,
}

impl Trajectory {
    pub fn class(&self) -> BianchiClass {
        self.class
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn stop_reason(&self) -> StopReason {
        self.stop_reason
    }

    /// Largest relative deviation of `A·B·C` from its initial value.
    pub fn volume_drift(&self) -> f64 {
        self.volume_drift
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.config
    }

    pub fn accepted_steps(&self) -> usize {
        self.accepted_steps
    }

    pub fn rejected_steps(&self) -> usize {
        self.rejected_steps
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn initial(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples
            .last()
            .expect("trajectory holds at least the initial sample")
    }

    pub fn start_time(&self) -> f64 {
        self.initial().state.t
    }

    pub fn end_time(&self) -> f64 {
        self.last().state.t
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.state.t).collect()
    }

    /// `(t, X)` pairs for coefficient `index` (0 = A, 1 = B, 2 = C).
    pub fn coefficient_series(&self, index: usize) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .map(|s| (s.state.t, s.state.coefficients()[index]))
            .collect()
    }

    /// Rebuilds a trajectory from bare states, e.g. ones read back from disk.
    /// Curvature is recomputed and the envelope integrals use the trapezoidal
    /// rule on the given grid.
    pub fn from_states(
        class: BianchiClass,
        states: &[MetricState],
        stop_reason: StopReason,
        config: IntegratorConfig,
    ) -> Result<Trajectory> {
        let Some(first) = states.first() else {
            return Err(Error::EmptyTrajectory);
        };
        let v0 = first.volume();
        let mut samples: Vec<Sample> = Vec::with_capacity(states.len());
        let mut drift: f64 = 0.0;
        for state in states {
            let k = curvature(class, state)?;
            let integrals = match samples.last() {
                None => EnvelopeIntegrals::default(),
                Some(prev) => {
                    let h = state.t - prev.state.t;
                    if !(h > 0.0) {
                        return Err(Error::InvalidConfig(format!(
                            "sample times must be strictly increasing ({} then {})",
                            prev.state.t, state.t
                        )));
                    }
                    let r0 = EnvelopeIntegrals::rates(&prev.curvature).to_array();
                    let r1 = EnvelopeIntegrals::rates(&k).to_array();
                    let acc = prev.integrals.to_array();
                    EnvelopeIntegrals::from_array(std::array::from_fn(|i| {
                        acc[i] + 0.5 * h * (r0[i] + r1[i])
                    }))
                }
            };
            drift = drift.max((state.volume() / v0 - 1.0).abs());
            samples.push(Sample {
                state: *state,
                curvature: k,
                integrals,
            });
        }
        Ok(Trajectory {
            class,
            samples,
            stop_reason,
            volume_drift: drift,
            config,
            accepted_steps: states.len() - 1,
            rejected_steps: 0,
        })
    }

    /// Envelope integrals at an arbitrary time inside the trajectory, by cubic
    /// Hermite interpolation using the sampled integrands as derivatives.
    pub fn integrals_at(&self, t: f64) -> Result<EnvelopeIntegrals> {
        let (start, end) = (self.start_time(), self.end_time());
        if !(t >= start && t <= end) {
            return Err(Error::TauOutOfRange { tau: t, start, end });
        }
        let idx = self.samples.partition_point(|s| s.state.t < t);
        let right = &self.samples[idx];
        if right.state.t == t {
            return Ok(right.integrals);
        }
        let left = &self.samples[idx - 1];
        let h = right.state.t - left.state.t;
        let u = (t - left.state.t) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u),
            u * (1.0 - u) * (1.0 - u),
            u * u * (3.0 - 2.0 * u),
            u * u * (u - 1.0),
        );
        let (y0, y1) = (left.integrals.to_array(), right.integrals.to_array());
        let d0 = EnvelopeIntegrals::rates(&left.curvature).to_array();
        let d1 = EnvelopeIntegrals::rates(&right.curvature).to_array();
        Ok(EnvelopeIntegrals::from_array(std::array::from_fn(|i| {
            h00 * y0[i] + h10 * h * d0[i] + h01 * y1[i] + h11 * h * d1[i]
        })))
    }
}

/// Neumaier-compensated running time, so thousands of tiny steps near a
/// singularity do not smear the distance to it.
struct Clock {
    sum: f64,
    comp: f64,
}

impl Clock {
    fn new(t0: f64) -> Self {
        Clock { sum: t0, comp: 0.0 }
    }

    fn advance(&mut self, h: f64) {
        let t = self.sum + h;
        if self.sum.abs() >= h.abs() {
            self.comp += (self.sum - t) + h;
        } else {
            self.comp += (h - t) + self.sum;
        }
        self.sum = t;
    }

    fn set(&mut self, t: f64) {
        self.sum = t;
        self.comp = 0.0;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }

    fn until(&self, t: f64) -> f64 {
        (t - self.sum) - self.comp
    }
}

const DIM: usize = 8;

/// Integrates the flow from `initial` with an adaptive Dormand–Prince 5(4)
/// pair. The envelope integrals ride along as extra components under the same
/// error control.
pub fn integrate(
    class: BianchiClass,
    initial: &MetricState,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    initial.validate()?;
    config.validate(initial)?;

    let system = |y: &[f64; DIM]| -> Option<[f64; DIM]> {
        let state = MetricState::from_coefficients(0.0, [y[0], y[1], y[2]]);
        let rhs = flow_rhs(class, &state).ok()?;
        let k = curvature(class, &state).ok()?;
        let q = EnvelopeIntegrals::rates(&k).to_array();
        let out = [rhs[0], rhs[1], rhs[2], q[0], q[1], q[2], q[3], q[4]];
        out.iter().all(|x| x.is_finite()).then_some(out)
    };

    let mut y = [initial.a, initial.b, initial.c, 0.0, 0.0, 0.0, 0.0, 0.0];
    let mut dy = system(&y).ok_or(Error::DegenerateMetric {
        name: "A",
        value: initial.a,
    })?;
    let step_cap = config.max_step.unwrap_or_else(|| {
        config.t_max.map_or(f64::INFINITY, |t_max| {
            (t_max - initial.t) / HORIZON_SUBDIVISIONS
        })
    });
    let mut h =
        dopri::initial_step(&system, &y, &dy, 3, config.rel_tol, config.abs_tol).min(step_cap);

    let mut clock = Clock::new(initial.t);
    let v0 = initial.volume();
    let mut drift: f64 = 0.0;
    let mut samples = vec![Sample {
        state: *initial,
        curvature: curvature(class, initial)?,
        integrals: EnvelopeIntegrals::default(),
    }];
    let mut attempts = 0usize;
    let mut rejected = 0usize;
    let max_log_ratio = SAMPLE_RATIO.ln();

    let stop_reason = loop {
        if attempts >= config.max_steps {
            break StopReason::StepBudget;
        }
        let mut last = false;
        if let Some(t_max) = config.t_max {
            let remaining = clock.until(t_max);
            if remaining <= 0.0 {
                break StopReason::HorizonReached;
            }
            if h >= remaining {
                h = remaining;
                last = true;
            }
        }
        if !last && !(h >= config.min_step) {
            break StopReason::StepUnderflow;
        }
        attempts += 1;

        let Some(step) = dopri::try_step(&system, &y, &dy, h, config.rel_tol, config.abs_tol)
        else {
            h *= 0.25;
            rejected += 1;
            continue;
        };
        if step.y[..3]
            .iter()
            .any(|x| !(x.is_finite() && *x > MIN_COEFFICIENT))
        {
            h *= 0.25;
            rejected += 1;
            continue;
        }
        if step.error > 1.0 {
            h *= (SAFETY * step.error.powf(-1.0 / ORDER as f64)).max(MIN_FACTOR);
            rejected += 1;
            continue;
        }
        let log_ratio = (0..3)
            .map(|i| (step.y[i] / y[i]).ln().abs())
            .fold(0.0, f64::max);
        if log_ratio > max_log_ratio {
            h *= SAFETY * max_log_ratio / log_ratio;
            rejected += 1;
            continue;
        }

        match (last, config.t_max) {
            (true, Some(t_max)) => clock.set(t_max),
            _ => clock.advance(h),
        }
        y = step.y;
        dy = step.dy;
        let state = MetricState::from_coefficients(clock.value(), [y[0], y[1], y[2]]);
        drift = drift.max((state.volume() / v0 - 1.0).abs());
        samples.push(Sample {
            state,
            curvature: curvature(class, &state)?,
            integrals: EnvelopeIntegrals::from_array([y[3], y[4], y[5], y[6], y[7]]),
        });

        if last {
            break StopReason::HorizonReached;
        }
        if y[0].max(y[1]).max(y[2]) >= config.blowup_threshold {
            break StopReason::BlowupDetected;
        }
        let factor = if step.error == 0.0 {
            MAX_FACTOR
        } else {
            (SAFETY * step.error.powf(-1.0 / ORDER as f64)).clamp(MIN_FACTOR, MAX_FACTOR)
        };
        h = (h * factor).min(step_cap).min(f64::MAX);
    };

    Ok(Trajectory {
        class,
        accepted_steps: samples.len() - 1,
        samples,
        stop_reason,
        volume_drift: drift,
        config: *config,
        rejected_steps: rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{closed_form_e11_symmetric, closed_form_heisenberg};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn heisenberg_matches_closed_form_at_horizon() {
        let init = MetricState::initial(1.0, 2.0, 2.0);
        let traj = integrate(
            BianchiClass::Heisenberg,
            &init,
            &IntegratorConfig::default().with_t_max(0.1875),
        )
        .unwrap();
        assert_eq!(traj.stop_reason(), StopReason::HorizonReached);
        let end = traj.last().state;
        assert_eq!(end.t, 0.1875);
        let exact = closed_form_heisenberg(&init, 0.1875).unwrap();
        for (x, e) in end.coefficients().iter().zip(exact.coefficients()) {
            assert!(rel(*x, e) < 1e-6, "{x} vs {e}");
        }
    }

    #[test]
    fn su2_round_stays_put() {
        let c = 4f64.cbrt();
        let init = MetricState::initial(c, c, c);
        let traj = integrate(
            BianchiClass::Su2,
            &init,
            &IntegratorConfig::default().with_t_max(10.0),
        )
        .unwrap();
        assert_eq!(traj.stop_reason(), StopReason::HorizonReached);
        for s in traj.samples() {
            assert_eq!(s.state.coefficients(), [c, c, c]);
        }
        assert_eq!(traj.end_time(), 10.0);
    }

    #[test]
    fn symmetric_e11_stops_before_singular_time() {
        let s = 2f64.sqrt();
        let traj = integrate(
            BianchiClass::E11,
            &MetricState::initial(s, 2.0, s),
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert!(traj.stop_reason().is_singular());
        // The numerical flow line carries a global time shift of order rel_tol.
        assert!(traj.end_time() < 0.1875 * (1.0 + 1e-9));
        assert!(traj.volume_drift() <= 100.0 * 1e-9);
        let near = traj
            .samples()
            .iter()
            .rev()
            .find(|p| p.state.t <= 0.9 * 0.1875)
            .unwrap();
        let expect = closed_form_e11_symmetric(2.0, near.state.t).unwrap();
        assert!(rel(near.state.b, expect.b) < 1e-6);
        assert!(rel(near.state.a, expect.a) < 1e-6);
    }

    #[test]
    fn samples_are_dense_and_increasing() {
        let traj = integrate(
            BianchiClass::Sl2r,
            &MetricState::initial(2.0, 2.0, 1.0),
            &IntegratorConfig::default(),
        )
        .unwrap();
        for w in traj.samples().windows(2) {
            assert!(w[1].state.t > w[0].state.t);
            for (x0, x1) in w[0]
                .state
                .coefficients()
                .iter()
                .zip(w[1].state.coefficients())
            {
                let r = x1 / x0;
                assert!(r < SAMPLE_RATIO && r > 1.0 / SAMPLE_RATIO);
            }
        }
    }

    #[test]
    fn step_budget_is_reported() {
        let config = IntegratorConfig {
            max_steps: 5,
            ..IntegratorConfig::default()
        };
        let traj = integrate(
            BianchiClass::Heisenberg,
            &MetricState::initial(1.0, 2.0, 2.0),
            &config,
        )
        .unwrap();
        assert_eq!(traj.stop_reason(), StopReason::StepBudget);
        assert!(traj.len() <= 6);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let init = MetricState::initial(1.0, 2.0, 2.0);
        let bad = [
            IntegratorConfig {
                rel_tol: 0.0,
                ..Default::default()
            },
            IntegratorConfig {
                abs_tol: -1.0,
                ..Default::default()
            },
            IntegratorConfig {
                min_step: 0.0,
                ..Default::default()
            },
            IntegratorConfig {
                blowup_threshold: 1.5,
                ..Default::default()
            },
            IntegratorConfig::default().with_t_max(-1.0),
            IntegratorConfig {
                max_steps: 0,
                ..Default::default()
            },
        ];
        for config in bad {
            assert!(matches!(
                integrate(BianchiClass::Heisenberg, &init, &config),
                Err(Error::InvalidConfig(_))
            ));
        }
        assert!(integrate(
            BianchiClass::Heisenberg,
            &MetricState::initial(-1.0, 2.0, 2.0),
            &IntegratorConfig::default()
        )
        .is_err());
    }

    #[test]
    fn rebuilt_trajectory_matches_integrated_integrals() {
        let traj = integrate(
            BianchiClass::Heisenberg,
            &MetricState::initial(1.0, 2.0, 2.0),
            &IntegratorConfig::default().with_t_max(0.2),
        )
        .unwrap();
        let states: Vec<_> = traj.samples().iter().map(|s| s.state).collect();
        let rebuilt =
            Trajectory::from_states(traj.class(), &states, traj.stop_reason(), *traj.config())
                .unwrap();
        assert_eq!(rebuilt.volume_drift(), traj.volume_drift());
        let (a, b) = (traj.last().integrals, rebuilt.last().integrals);
        assert!(rel(b.lower, a.lower) < 1e-3);
        assert!(rel(b.upper, a.upper) < 1e-3);
        assert!(Trajectory::from_states(
            traj.class(),
            &[states[1], states[0]],
            traj.stop_reason(),
            *traj.config()
        )
        .is_err());
    }

    #[test]
    fn hermite_interpolation_hits_samples_and_stays_in_range() {
        let traj = integrate(
            BianchiClass::Heisenberg,
            &MetricState::initial(1.0, 2.0, 2.0),
            &IntegratorConfig::default().with_t_max(0.3),
        )
        .unwrap();
        let s = &traj.samples()[7];
        assert_eq!(traj.integrals_at(s.state.t).unwrap(), s.integrals);
        assert!(traj.integrals_at(-0.1).is_err());
        assert!(traj.integrals_at(0.31).is_err());
        let mid = 0.5 * (traj.samples()[7].state.t + traj.samples()[8].state.t);
        let q = traj.integrals_at(mid).unwrap();
        // lower integral for Heisenberg from (1,2,2): (3/4)(1 - s^{-1/2}) + (1/8) ln s, s = 1 - 8t/3
        let sv = 1.0 - 8.0 * mid / 3.0;
        let exact = 0.75 * (1.0 - sv.powf(-0.5)) + 0.125 * sv.ln();
        assert!(rel(q.lower, exact) < 1e-7);
    }
}
