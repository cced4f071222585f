use thiserror::Error;

use crate::flow::StopReason;

/// Errors returned by the geometry, flow, spectrum and asymptotics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("metric coefficient {name} = {value} is not a positive finite number")]
    DegenerateMetric { name: &'static str, value: f64 },

    #[error("time {t} is at or beyond the singular time {singular}")]
    BeyondSingularTime { t: f64, singular: f64 },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("eigenvalue bound must be positive and finite, got {0}")]
    NonPositiveEigenvalue(f64),

    #[error("time {0} precedes the initial time 0")]
    NegativeTime(f64),

    #[error("start time {tau} lies outside the trajectory range [{start}, {end}]")]
    TauOutOfRange { tau: f64, start: f64, end: f64 },

    #[error("ricci index must be 1, 2 or 3, got {0}")]
    InvalidRicciIndex(usize),

    #[error("trajectory stopped with {0}; there is no finite-time singularity to analyse")]
    NoSingularity(StopReason),

    #[error("series value {value} at t = {t} is not positive")]
    NonPositiveSeries { t: f64, value: f64 },

    #[error("fit window holds {got} points, at least {need} are required")]
    TooFewPoints { got: usize, need: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("the requested curvature pattern does not persist to the end of the trajectory")]
    PatternNotFound,

    #[error("SL(2,R) classification requires B0 >= C0, got B0 = {b0}, C0 = {c0}")]
    UnorderedSl2r { b0: f64, c0: f64 },

    #[error("no metric coefficient vanishes along this trajectory")]
    NoVanishingCoefficient,

    #[error("expected a {expected} trajectory, got {got}")]
    WrongClass {
        expected: &'static str,
        got: &'static str,
    },

    #[error("trajectory has no samples")]
    EmptyTrajectory,
}

pub type Result<T> = std::result::Result<T, Error>;
