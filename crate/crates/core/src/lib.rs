//! Normalized backward Ricci flow on the five unimodular Bianchi geometries
//! with diagonal left-invariant metrics, two-sided bounds on the first
//! eigenvalue of the Laplacian, and asymptotic analysis near singularities.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod spectrum;

pub use asymptotics::{
    analyze_growth, analyze_singularity, classify_sl2r, detect_tau, estimate_blowup_time,
    fit_exponent, identify_regime, FitMode, GrowthReport, PowerLaw, Regime, RegimeKind,
    RicciPattern, SingularityReport, Sl2rCase, Sl2rClassification,
};
pub use error::{Error, Result};
pub use flow::{flow_rhs, integrate, IntegratorConfig, StopReason, Trajectory};
pub use geometry::{curvature, BianchiClass, CurvatureData, MetricState};
pub use spectrum::{
    integrate_envelope, monotone_quantity, Bound, EnvelopePoint, MonotoneQuantity, Monotonicity,
};
