//! Blow-up time estimation, power-law fitting, regime detection and the
//! SL(2,R) trichotomy.

mod limit;
mod regime;
mod sl2r;
mod tau;

pub use limit::{subriemannian_limit, SubRiemannianLimit};
pub use regime::{identify_regime, Regime, RegimeKind};
pub use sl2r::{
    classify_sl2r, classify_sl2r_trajectory, classify_sl2r_unordered, refine_sl2r_separatrix,
    Sl2rCase, Sl2rClassification,
};
pub use tau::{detect_tau, RicciPattern, Sign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::Trajectory;

/// Fits need at least this many points.
pub const MIN_FIT_POINTS: usize = 10;

/// The singular fit window starts where the blowing-up coefficient first
/// reaches this fraction of its final value.
pub const WINDOW_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
struct LinearFit {
    slope: f64,
    intercept: f64,
}

/// Least squares `y ≈ slope·x + intercept`, computed about the centroid.
fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("abscissae do not vary".into()));
    }
    let slope = sxy / sxx;
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// `value ≈ prefactor · x^exponent` where `x` is `T₊ − t` or `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    #[serde(rename = "p")]
    pub exponent: f64,
    #[serde(rename = "eta")]
    pub prefactor: f64,
    /// Largest relative deviation of the data from the fitted law.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMode {
    /// Abscissa `T₊ − t`.
    Singular { t_plus: f64 },
    /// Abscissa `t`, for laws that hold as `t → ∞`.
    Polynomial,
}

/// Log-log least squares over the whole of `series`; the caller picks the
/// window.
pub fn fit_exponent(series: &[(f64, f64)], mode: FitMode) -> Result<PowerLaw> {
    if series.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            got: series.len(),
            need: MIN_FIT_POINTS,
        });
    }
    let mut xs = Vec::with_capacity(series.len());
    let mut ys = Vec::with_capacity(series.len());
    for &(t, v) in series {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::NonPositiveSeries { t, value: v });
        }
        let x = match mode {
            FitMode::Singular { t_plus } => t_plus - t,
            FitMode::Polynomial => t,
        };
        if !(x > 0.0) {
            return Err(match mode {
                FitMode::Singular { t_plus } => Error::BeyondSingularTime {
                    t,
                    singular: t_plus,
                },
                FitMode::Polynomial => {
                    Error::DegenerateFit(format!("polynomial fit needs t > 0, got {t}"))
                }
            });
        }
        xs.push(x.ln());
        ys.push(v.ln());
    }
    let fit = linear_fit(&xs, &ys)?;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - fit.intercept - fit.slope * x).exp_m1().abs())
        .fold(0.0, f64::max);
    Ok(PowerLaw {
        exponent: fit.slope,
        prefactor: fit.intercept.exp(),
        residual,
    })
}

/// Tail of `series` from the first point reaching `WINDOW_FRACTION` of the
/// final value onwards, i.e. the final decade of growth.
fn growth_window(series: &[(f64, f64)]) -> &[(f64, f64)] {
    let last = series.last().map_or(0.0, |p| p.1);
    let start = series
        .iter()
        .rposition(|p| p.1 < WINDOW_FRACTION * last)
        .map_or(0, |i| i + 1);
    &series[start..]
}

/// Blow-up time from a series growing like `(T₊ − t)^{−1/2}`: root of the
/// least-squares line through `X^{−2}` over the final decade of growth.
/// Returns `(T₊, window)`.
pub fn blowup_time_from_series(series: &[(f64, f64)]) -> Result<(f64, (f64, f64))> {
    let window = growth_window(series);
    if window.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            got: window.len(),
            need: MIN_FIT_POINTS,
        });
    }
    if let Some(&(t, value)) = window.iter().find(|p| !(p.1 > 0.0 && p.1.is_finite())) {
        return Err(Error::NonPositiveSeries { t, value });
    }
    let t_last = window[window.len() - 1].0;
    let xs: Vec<f64> = window.iter().map(|p| p.0 - t_last).collect();
    let ys: Vec<f64> = window.iter().map(|p| p.1.powi(-2)).collect();
    let fit = linear_fit(&xs, &ys)?;
    if !(fit.slope < 0.0) {
        return Err(Error::DegenerateFit(
            "inverse square of the series is not decreasing".into(),
        ));
    }
    let t_plus = t_last - fit.intercept / fit.slope;
    if !(t_plus > t_last) {
        return Err(Error::DegenerateFit(format!(
            "extrapolated singular time {t_plus} does not exceed the last sample {t_last}"
        )));
    }
    Ok((t_plus, (window[0].0, t_last)))
}

fn blowing_up_index(traj: &Trajectory) -> usize {
    let last = traj.last().state.coefficients();
    (0..3).fold(0, |best, i| if last[i] > last[best] { i } else { best })
}

fn require_singular(traj: &Trajectory) -> Result<()> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if !traj.stop_reason().is_singular() {
        return Err(Error::NoSingularity(traj.stop_reason()));
    }
    Ok(())
}

/// Blow-up time of a trajectory that stopped at a singularity, taken from the
/// coefficient that is largest at the final sample.
pub fn estimate_blowup_time(traj: &Trajectory) -> Result<f64> {
    require_singular(traj)?;
    let series = traj.coefficient_series(blowing_up_index(traj));
    blowup_time_from_series(&series).map(|(t, _)| t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub t_plus: f64,
    /// Fitted laws in `T₊ − t` for A, B and C.
    pub exponents: [PowerLaw; 3],
    pub fit_window: (f64, f64),
    /// Largest of the three fit residuals.
    pub residual: f64,
    /// Zero-based index of the coefficient that blows up fastest.
    pub blowup_index: usize,
}

/// Blow-up time and per-coefficient power laws near the singularity.
pub fn analyze_singularity(traj: &Trajectory) -> Result<SingularityReport> {
    require_singular(traj)?;
    let blowup_index = blowing_up_index(traj);
    let lead = traj.coefficient_series(blowup_index);
    let (t_plus, fit_window) = blowup_time_from_series(&lead)?;
    let in_window = |idx: usize| -> Vec<(f64, f64)> {
        traj.coefficient_series(idx)
            .into_iter()
            .filter(|p| p.0 >= fit_window.0)
            .collect()
    };
    let exponents = [
        fit_exponent(&in_window(0), FitMode::Singular { t_plus })?,
        fit_exponent(&in_window(1), FitMode::Singular { t_plus })?,
        fit_exponent(&in_window(2), FitMode::Singular { t_plus })?,
    ];
    let residual = exponents.iter().map(|p| p.residual).fold(0.0, f64::max);
    Ok(SingularityReport {
        t_plus,
        exponents,
        fit_window,
        residual,
        blowup_index,
    })
}

/// Long-time laws in `t` for a trajectory that ran to its horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub exponents: [PowerLaw; 3],
    pub fit_window: (f64, f64),
    pub residual: f64,
}

/// Fits `X ≈ η·t^p` over the last decade of time, `t ≥ t_end/10`.
pub fn analyze_growth(traj: &Trajectory) -> Result<GrowthReport> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let t_end = traj.end_time();
    if !(t_end > 0.0) {
        return Err(Error::DegenerateFit(format!(
            "horizon {t_end} leaves no positive times to fit"
        )));
    }
    let from = t_end / 10.0;
    let in_window = |idx: usize| -> Vec<(f64, f64)> {
        traj.coefficient_series(idx)
            .into_iter()
            .filter(|p| p.0 >= from && p.0 > 0.0)
            .collect()
    };
    let exponents = [
        fit_exponent(&in_window(0), FitMode::Polynomial)?,
        fit_exponent(&in_window(1), FitMode::Polynomial)?,
        fit_exponent(&in_window(2), FitMode::Polynomial)?,
    ];
    let residual = exponents.iter().map(|p| p.residual).fold(0.0, f64::max);
    Ok(GrowthReport {
        exponents,
        fit_window: (from, t_end),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{integrate, IntegratorConfig, StopReason};
    use crate::geometry::{BianchiClass, MetricState};
    use proptest::prelude::*;

    fn samples(n: usize, end: f64, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|i| {
                let t = end * i as f64 / n as f64;
                (t, f(t))
            })
            .collect()
    }

    #[test]
    fn synthetic_inverse_square_root() {
        let series = samples(990, 0.99, |t| (1.0 - t).powf(-0.5));
        let (t_plus, window) = blowup_time_from_series(&series).unwrap();
        assert!((t_plus - 1.0).abs() < 1e-12);
        assert_eq!(window, (0.0, 0.99));
        let law = fit_exponent(&series, FitMode::Singular { t_plus }).unwrap();
        assert!((law.exponent + 0.5).abs() < 1e-9);
        assert!((law.prefactor - 1.0).abs() < 1e-9);
        assert!(law.residual < 1e-9);
    }

    #[test]
    fn constant_series_has_zero_exponent() {
        let series = samples(50, 0.5, |_| 3.0);
        let law = fit_exponent(&series, FitMode::Singular { t_plus: 1.0 }).unwrap();
        assert!(law.exponent.abs() < 1e-12);
        assert!((law.prefactor - 3.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_mode() {
        let series: Vec<_> = samples(100, 50.0, |t| 8.0 / 3.0 * t)
            .into_iter()
            .skip(1)
            .collect();
        let law = fit_exponent(&series, FitMode::Polynomial).unwrap();
        assert!((law.exponent - 1.0).abs() < 1e-12);
        assert!((law.prefactor - 8.0 / 3.0).abs() < 1e-12);
        assert!(fit_exponent(&samples(100, 1.0, |t| t + 1.0), FitMode::Polynomial).is_err());
    }

    #[test]
    fn fit_errors() {
        let short = samples(5, 0.5, |_| 1.0);
        assert_eq!(
            fit_exponent(&short, FitMode::Polynomial),
            Err(Error::TooFewPoints { got: 6, need: 10 })
        );
        let mut bad = samples(20, 0.5, |_| 1.0);
        bad[7].1 = -1.0;
        assert!(matches!(
            fit_exponent(&bad, FitMode::Singular { t_plus: 1.0 }),
            Err(Error::NonPositiveSeries { .. })
        ));
        let good = samples(20, 0.5, |_| 1.0);
        assert!(fit_exponent(&good, FitMode::Singular { t_plus: 0.4 }).is_err());
        let decaying = samples(20, 0.5, |t| 2.0 - t);
        assert!(blowup_time_from_series(&decaying).is_err());
    }

    #[test]
    fn horizon_trajectories_have_no_blowup_time() {
        let c = 4f64.cbrt();
        let traj = integrate(
            BianchiClass::Su2,
            &MetricState::initial(c, c, c),
            &IntegratorConfig::default().with_t_max(10.0),
        )
        .unwrap();
        assert_eq!(
            estimate_blowup_time(&traj),
            Err(Error::NoSingularity(StopReason::HorizonReached))
        );
        let growth = analyze_growth(&traj).unwrap();
        for law in growth.exponents {
            assert!(law.exponent.abs() < 1e-12);
        }
    }

    #[test]
    fn heisenberg_singularity() {
        let traj = integrate(
            BianchiClass::Heisenberg,
            &MetricState::initial(1.0, 2.0, 2.0),
            &IntegratorConfig::default(),
        )
        .unwrap();
        let report = analyze_singularity(&traj).unwrap();
        assert!((report.t_plus - 0.375).abs() < 1e-3);
        assert!(report.t_plus > traj.end_time());
        assert_eq!(report.blowup_index, 0);
        let [a, b, c] = report.exponents;
        assert!((a.exponent + 0.5).abs() < 0.02);
        assert!((b.exponent - 0.25).abs() < 0.02);
        assert!((c.exponent - 0.25).abs() < 0.02);
        assert!((a.prefactor / (6f64.sqrt() / 4.0) - 1.0).abs() < 0.05);
        // B = B0 (8A0²/3)^{1/4} (T₊ − t)^{1/4}
        let eta_b = 2.0 * (8.0f64 / 3.0).powf(0.25);
        assert!((b.prefactor / eta_b - 1.0).abs() < 0.05);
    }

    proptest! {
        #[test]
        fn synthetic_power_laws_are_recovered(
            t_plus in 0.1f64..10.0,
            p in prop::sample::select(vec![-0.5, 0.25, 1.0]),
            eta in 0.1f64..10.0,
        ) {
            let series = samples(200, 0.99 * t_plus, |t| eta * (t_plus - t).powf(p));
            let law = fit_exponent(&series, FitMode::Singular { t_plus }).unwrap();
            prop_assert!((law.exponent - p).abs() < 1e-6);
            prop_assert!((law.prefactor / eta - 1.0).abs() < 1e-6);
            if p == -0.5 {
                let (est, _) = blowup_time_from_series(&series).unwrap();
                prop_assert!((est / t_plus - 1.0).abs() < 1e-6);
            }
        }
    }
}
