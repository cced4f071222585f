//! `bianchi verify`: the library's claims checked against exact solutions,
//! closed-form bounds and the qualitative predictions of each case.

use std::fmt;

use bianchi_core::asymptotics::{
    analyze_singularity, blowup_time_from_series, classify_sl2r, fit_exponent, identify_regime,
    refine_sl2r_separatrix, FitMode, Sl2rCase,
};
use bianchi_core::flow::{
    closed_form_e11_symmetric, closed_form_heisenberg, e11_symmetric_singular_time, flow_rhs,
    heisenberg_singular_time, integrate, IntegratorConfig, Trajectory,
};
use bianchi_core::geometry::{curvature, BianchiClass, MetricState};
use bianchi_core::spectrum::{
    e11_symmetric_bounds, heisenberg_bounds_closed_form, integrate_envelope, monotone_quantity,
    Bound, Monotonicity,
};

use crate::error::{CliError, Result};

const SQRT6_4: f64 = 0.612_372_435_695_794_5;
const MONOTONE_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Heisenberg,
    Volume,
    Consistency,
    E11Symmetric,
    Su2Growth,
    Exponents,
    Sl2rTrichotomy,
    Su2Round,
    FixedPoints,
    Monotone,
    Synthetic,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::All,
        Suite::Heisenberg,
        Suite::Volume,
        Suite::Consistency,
        Suite::E11Symmetric,
        Suite::Su2Growth,
        Suite::Exponents,
        Suite::Sl2rTrichotomy,
        Suite::Su2Round,
        Suite::FixedPoints,
        Suite::Monotone,
        Suite::Synthetic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Heisenberg => "heisenberg",
            Suite::Volume => "volume",
            Suite::Consistency => "consistency",
            Suite::E11Symmetric => "e11-symmetric",
            Suite::Su2Growth => "su2-growth",
            Suite::Exponents => "exponents",
            Suite::Sl2rTrichotomy => "sl2r-trichotomy",
            Suite::Su2Round => "su2-round",
            Suite::FixedPoints => "fixed-points",
            Suite::Monotone => "monotone",
            Suite::Synthetic => "synthetic",
        }
    }

    /// The leaf suites `self` expands to. `su2-round` is contained in
    /// `fixed-points`, so `all` skips it.
    fn leaves(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::ALL
                .into_iter()
                .filter(|s| !matches!(s, Suite::All | Suite::Su2Round))
                .collect(),
            s => vec![s],
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                CliError::Config(format!(
                    "unknown suite '{s}'; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    /// `|measured − expected| ≤ tol`.
    Absolute(f64),
    /// `|measured − expected| ≤ tol·|expected|`.
    Relative(f64),
    /// `measured ≤ expected`.
    AtMost,
    /// `measured < expected`.
    Below,
    /// `measured == expected`.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub criterion: Criterion,
}

impl Check {
    pub fn passed(&self) -> bool {
        let (m, e) = (self.measured, self.expected);
        match self.criterion {
            Criterion::Absolute(tol) => (m - e).abs() <= tol,
            Criterion::Relative(tol) => (m - e).abs() <= tol * e.abs(),
            Criterion::AtMost => m <= e,
            Criterion::Below => m < e,
            Criterion::Exact => m == e,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        let (expected, tol) = match self.criterion {
            Criterion::Absolute(t) => (format!("{:.10e}", self.expected), format!("abs {t:.1e}")),
            Criterion::Relative(t) => (format!("{:.10e}", self.expected), format!("rel {t:.1e}")),
            Criterion::AtMost => (format!("<= {:.3e}", self.expected), "-".into()),
            Criterion::Below => (format!("< {:.3e}", self.expected), "-".into()),
            Criterion::Exact => (format!("{}", self.expected), "exact".into()),
        };
        write!(
            f,
            "{tag} {}/{}: measured {:.10e} expected {expected} tol {tol}",
            self.suite, self.name, self.measured
        )
    }
}

struct Collector {
    suite: Suite,
    checks: Vec<Check>,
}

impl Collector {
    fn push(
        &mut self,
        name: impl Into<String>,
        measured: f64,
        expected: f64,
        criterion: Criterion,
    ) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            measured,
            expected,
            criterion,
        });
    }

    fn flag(&mut self, name: impl Into<String>, ok: bool) {
        self.push(name, f64::from(u8::from(ok)), 1.0, Criterion::Exact);
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn base_config(rel_tol: Option<f64>) -> IntegratorConfig {
    let cfg = IntegratorConfig::default();
    match rel_tol {
        Some(r) => cfg.with_rel_tol(r),
        None => cfg,
    }
}

fn traj(class: BianchiClass, [a, b, c]: [f64; 3], cfg: &IntegratorConfig) -> Result<Trajectory> {
    Ok(integrate(class, &MetricState::initial(a, b, c), cfg)?)
}

fn separatrix(cfg: &IntegratorConfig) -> Result<(MetricState, Trajectory)> {
    let cfg = cfg.with_blowup_threshold(300.0);
    let (state, _, t) = refine_sl2r_separatrix(1.0, 2.0, 3.0, &cfg)?;
    Ok((state, t))
}

fn heisenberg(c: &mut Collector, cfg: &IntegratorConfig) -> Result<()> {
    let init = MetricState::initial(1.0, 2.0, 2.0);
    let t_plus = heisenberg_singular_time(1.0);
    let window = 0.9 * t_plus;
    let tr = integrate(BianchiClass::Heisenberg, &init, cfg)?;
    let mut worst: f64 = 0.0;
    for s in tr.samples().iter().filter(|s| s.state.t <= window) {
        let exact = closed_form_heisenberg(&init, s.state.t)?;
        for (x, e) in s.state.coefficients().iter().zip(exact.coefficients()) {
            worst = worst.max(rel(*x, e));
        }
    }
    c.push("closed_form_max_rel_error", worst, 1e-6, Criterion::AtMost);

    let env = integrate_envelope(&tr, 1.0, 0.0)?;
    let mut worst: f64 = 0.0;
    for p in env.iter().filter(|p| p.t <= window) {
        let (low, high) = heisenberg_bounds_closed_form(1.0, 2.0, 1.0, p.t)?;
        worst = worst
            .max(rel(p.lambda_low, low))
            .max(rel(p.lambda_high, high));
    }
    c.push("bounds_max_rel_error", worst, 1e-6, Criterion::AtMost);

    let up = monotone_quantity(&tr, &env, Bound::Low, 1, 0.0)?
        .check(Monotonicity::Nondecreasing, MONOTONE_SLACK);
    c.push(
        "low_index1_nondecreasing",
        up.worst_violation,
        MONOTONE_SLACK,
        Criterion::AtMost,
    );
    let down = monotone_quantity(&tr, &env, Bound::High, 2, 0.0)?
        .check(Monotonicity::Nonincreasing, MONOTONE_SLACK);
    c.push(
        "high_index2_nonincreasing",
        down.worst_violation,
        MONOTONE_SLACK,
        Criterion::AtMost,
    );

    let at = tr.integrals_at(0.99 * t_plus)?;
    let high_99 = (at.upper - tr.initial().integrals.upper).exp();
    c.push(
        "lambda_high_at_99pct_T_plus",
        high_99,
        0.35,
        Criterion::Below,
    );
    Ok(())
}

fn volume(c: &mut Collector, cfg: &IntegratorConfig) -> Result<()> {
    let r = 4f64.cbrt();
    let s2 = 2f64.sqrt();
    let to = |t| cfg.with_t_max(t);
    let runs = [
        (
            "heisenberg_(1,2,2)",
            traj(BianchiClass::Heisenberg, [1.0, 2.0, 2.0], cfg)?,
        ),
        ("su2_round", traj(BianchiClass::Su2, [r, r, r], &to(10.0))?),
        (
            "su2_(2,2,1)",
            traj(BianchiClass::Su2, [2.0, 2.0, 1.0], &to(50.0))?,
        ),
        (
            "su2_(2,1.6,1.25)",
            traj(BianchiClass::Su2, [2.0, 1.6, 1.25], cfg)?,
        ),
        (
            "e11_symmetric",
            traj(BianchiClass::E11, [s2, 2.0, s2], cfg)?,
        ),
        (
            "e11_(2,1.25,1.6)",
            traj(BianchiClass::E11, [2.0, 1.25, 1.6], cfg)?,
        ),
        (
            "e2_(1,1,4)",
            traj(BianchiClass::E2, [1.0, 1.0, 4.0], &to(10.0))?,
        ),
        (
            "e2_(2,1.25,1.6)",
            traj(BianchiClass::E2, [2.0, 1.25, 1.6], cfg)?,
        ),
        (
            "sl2r_(2,2,1)",
            traj(BianchiClass::Sl2r, [2.0, 2.0, 1.0], cfg)?,
        ),
        (
            "sl2r_(0.5,4,2)",
            traj(BianchiClass::Sl2r, [0.5, 4.0, 2.0], cfg)?,
        ),
        ("sl2r_balanced", separatrix(cfg)?.1),
    ];
    for (name, tr) in runs {
        c.push(
            format!("{name}_drift"),
            tr.volume_drift(),
            1e-7,
            Criterion::AtMost,
        );
    }
    Ok(())
}

/// Deterministic states on `A·B·C = 4`, spread log-uniformly in A and B.
fn sample_states(n: usize) -> Vec<MetricState> {
    let golden = 0.618_033_988_749_894_9;
    (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) / n as f64;
            let v = (i as f64 * golden).fract();
            let (a, b) = ((4.0 * u - 2.0).exp(), (4.0 * v - 2.0).exp());
            MetricState::initial(a, b, 4.0 / (a * b))
        })
        .collect()
}

fn consistency(c: &mut Collector) -> Result<()> {
    for class in BianchiClass::ALL {
        let mut worst: f64 = 0.0;
        for state in sample_states(100) {
            let rhs = flow_rhs(class, &state)?;
            let k = curvature(class, &state)?;
            for ((x, rxx), d) in state.coefficients().iter().zip(k.ricci()).zip(rhs) {
                let expected = 2.0 * rxx - 2.0 / 3.0 * k.r * x;
                let scale = (2.0 * rxx).abs() + (2.0 / 3.0 * k.r * x).abs();
                if scale > 0.0 {
                    worst = worst.max((d - expected).abs() / scale);
                }
            }
        }
        c.push(
            format!("{class}_rhs_vs_ricci"),
            worst,
            1e-12,
            Criterion::AtMost,
        );
    }
    Ok(())
}

fn e11_symmetric(c: &mut Collector, cfg: &IntegratorConfig) -> Result<()> {
    let b0: f64 = 2.0;
    let a0 = (4.0 / b0).sqrt();
    let t_plus = e11_symmetric_singular_time(b0);
    let tr = traj(BianchiClass::E11, [a0, b0, a0], cfg)?;
    let est = analyze_singularity(&tr)?.t_plus;
    c.push("T_plus", est, t_plus, Criterion::Absolute(1e-3));

    let mut worst: f64 = 0.0;
    for s in tr.samples().iter().filter(|s| s.state.t <= 0.9 * t_plus) {
        let exact = closed_form_e11_symmetric(b0, s.state.t)?;
        for (x, e) in s.state.coefficients().iter().zip(exact.coefficients()) {
            worst = worst.max(rel(*x, e));
        }
    }
    c.push("closed_form_max_rel_error", worst, 1e-6, Criterion::AtMost);

    let env = integrate_envelope(&tr, 1.0, 0.0)?;
    let (mut low_err, mut ratio_excess) = (0.0f64, f64::NEG_INFINITY);
    for p in &env {
        if p.t <= 0.9 * t_plus {
            let (low, _) = e11_symmetric_bounds(b0, 1.0, p.t)?;
            low_err = low_err.max(rel(p.lambda_low, low));
        }
        ratio_excess = ratio_excess.max((p.log_high - p.log_low - 16.0 * p.t).exp_m1());
    }
    c.push("lambda_low_max_rel_error", low_err, 1e-6, Criterion::AtMost);
    c.push(
        "high_over_low_excess_vs_e^16t",
        ratio_excess,
        1e-6,
        Criterion::AtMost,
    );
    Ok(())
}

fn su2_growth(c: &mut Collector, cfg: &IntegratorConfig) -> Result<()> {
    let tr = traj(BianchiClass::Su2, [2.0, 2.0, 1.0], &cfg.with_t_max(50.0))?;
    let s = tr.last().state;
    c.push("end_time", s.t, 50.0, Criterion::Exact);
    c.push("A_over_t", s.a / s.t, 8.0 / 3.0, Criterion::Relative(0.05));
    c.push(
        "C_times_t^2",
        s.c * s.t * s.t,
        9.0 / 16.0,
        Criterion::Relative(0.05),
    );
    Ok(())
}

fn exponents(c: &mut Collector, cfg: &IntegratorConfig) -> Result<()> {
    let cases: [(&str, BianchiClass, [f64; 3]); 7] = [
        (
            "heisenberg_(1,2,2)",
            BianchiClass::Heisenberg,
            [1.0, 2.0, 2.0],
        ),
        ("su2_(2,1.6,1.25)", BianchiClass::Su2, [2.0, 1.6, 1.25]),
        ("e11_(2,1.25,1.6)", BianchiClass::E11, [2.0, 1.25, 1.6]),
        ("e2_(2,1.25,1.6)", BianchiClass::E2, [2.0, 1.25, 1.6]),
        ("sl2r_(2,2,1)", BianchiClass::Sl2r, [2.0, 2.0, 1.0]),
        ("sl2r_(0.5,4,2)", BianchiClass::Sl2r, [0.5, 4.0, 2.0]),
        ("sl2r_(1,4,1)", BianchiClass::Sl2r, [1.0, 4.0, 1.0]),
    ];
    for (name, class, abc) in cases {
        let report = analyze_singularity(&traj(class, abc, cfg)?)?;
        let mut p = report.exponents.map(|l| l.exponent);
        p.sort_by(f64::total_cmp);
        for (k, (got, want)) in p.iter().zip([-0.5, 0.25, 0.25]).enumerate() {
            c.push(
                format!("{name}_sorted_p{}", k + 1),
                *got,
                want,
                Criterion::Absolute(0.02),
            );
        }
        let eta = report.exponents[report.blowup_index].prefactor;
        c.push(
            format!("{name}_eta"),
            eta,
            SQRT6_4,
            Criterion::Relative(0.05),
        );
    }
    Ok(())
}

fn sl2r_trichotomy(c: &mut Collector, cfg: &IntegratorConfig) -> Result<()> {
    let case_code = |case: Sl2rCase| match case {
        Sl2rCase::ADominates => 1.0,
        Sl2rCase::BDominates => 2.0,
        Sl2rCase::Balanced => 3.0,
    };
    for (name, abc, want) in [
        ("(2,2,1)", [2.0, 2.0, 1.0], Sl2rCase::ADominates),
        ("(0.5,4,2)", [0.5, 4.0, 2.0], Sl2rCase::BDominates),
    ] {
        let [a, b, cc] = abc;
        let (cl, _) = classify_sl2r(&MetricState::initial(a, b, cc), cfg)?;
        c.push(
            format!("{name}_case"),
            case_code(cl.case),
            case_code(want),
            Criterion::Exact,
        );
        c.push(
            format!("{name}_witness_time"),
            cl.witness_time.unwrap_or(f64::NAN),
            0.0,
            Criterion::Exact,
        );
    }
    let (state, tr) = separatrix(cfg)?;
    let (cl, _) = classify_sl2r(&state, &cfg.with_blowup_threshold(300.0))?;
    c.push("separatrix_case", case_code(cl.case), 3.0, Criterion::Exact);
    let sustained = tr
        .samples()
        .iter()
        .all(|s| s.state.a < s.state.b && s.state.b < s.state.a + s.state.c);
    c.flag("separatrix_balanced_to_stop", sustained);
    let (p, eta) = cl
        .c_law
        .map_or((f64::NAN, f64::NAN), |l| (l.exponent, l.prefactor));
    c.push("separatrix_C_slope", p, 1.0, Criterion::Absolute(0.02));
    c.push(
        "separatrix_C_eta",
        eta,
        32.0 / 3.0,
        Criterion::Relative(0.1),
    );
    Ok(())
}

fn fixed_point(
    c: &mut Collector,
    cfg: &IntegratorConfig,
    name: &str,
    class: BianchiClass,
    abc: [f64; 3],
) -> Result<()> {
    let tr = traj(class, abc, &cfg.with_t_max(10.0))?;
    c.push(
        format!("{name}_end_time"),
        tr.end_time(),
        10.0,
        Criterion::Exact,
    );
    let [a, b, cc] = abc;
    let rhs = flow_rhs(class, &MetricState::initial(a, b, cc))?;
    let rate = rhs
        .iter()
        .zip(abc)
        .map(|(d, x)| (d / x).abs())
        .fold(0.0, f64::max);
    c.push(
        format!("{name}_initial_rate"),
        rate,
        1e-10,
        Criterion::AtMost,
    );
    let mut worst: f64 = 0.0;
    for s in tr.samples() {
        for (x, x0) in s.state.coefficients().iter().zip(abc) {
            worst = worst.max(rel(*x, x0));
        }
    }
    c.push(
        format!("{name}_coefficient_deviation"),
        worst,
        1e-9,
        Criterion::AtMost,
    );
    let mut dev: f64 = 0.0;
    for p in integrate_envelope(&tr, 1.0, 0.0)? {
        dev = dev
            .max((p.lambda_low - 1.0).abs())
            .max((p.lambda_high - 1.0).abs());
    }
    c.push(
        format!("{name}_envelope_deviation"),
        dev,
        1e-9,
        Criterion::AtMost,
    );
    Ok(())
}

fn monotone(c: &mut Collector, cfg: &IntegratorConfig) -> Result<()> {
    let s2 = 2f64.sqrt();
    let runs = [
        (
            "su2_(2,2,1)",
            traj(BianchiClass::Su2, [2.0, 2.0, 1.0], &cfg.with_t_max(50.0))?,
        ),
        (
            "su2_(2,1.6,1.25)",
            traj(BianchiClass::Su2, [2.0, 1.6, 1.25], cfg)?,
        ),
        (
            "e11_symmetric",
            traj(BianchiClass::E11, [s2, 2.0, s2], cfg)?,
        ),
        (
            "e11_(2,1.25,1.6)",
            traj(BianchiClass::E11, [2.0, 1.25, 1.6], cfg)?,
        ),
        (
            "e2_(2,1.25,1.6)",
            traj(BianchiClass::E2, [2.0, 1.25, 1.6], cfg)?,
        ),
        (
            "sl2r_(2,2,1)",
            traj(BianchiClass::Sl2r, [2.0, 2.0, 1.0], cfg)?,
        ),
        (
            "sl2r_(1,4,1)",
            traj(BianchiClass::Sl2r, [1.0, 4.0, 1.0], cfg)?,
        ),
        ("sl2r_balanced", separatrix(cfg)?.1),
    ];
    for (name, tr) in runs {
        let Some(regime) = identify_regime(&tr)? else {
            c.flag(format!("{name}_regime_identified"), false);
            continue;
        };
        let Ok(tau) = regime.tau(&tr) else {
            c.flag(format!("{name}_pattern_persists"), false);
            continue;
        };
        let env = integrate_envelope(&tr, 1.0, tau)?;
        let up = monotone_quantity(&tr, &env, Bound::Low, regime.lower_index, tau)?
            .check(Monotonicity::Nondecreasing, MONOTONE_SLACK);
        c.push(
            format!("{name}_low_index{}_nondecreasing", regime.lower_index),
            up.worst_violation,
            MONOTONE_SLACK,
            Criterion::AtMost,
        );
        let down = monotone_quantity(&tr, &env, Bound::High, regime.upper_index, tau)?
            .check(Monotonicity::Nonincreasing, MONOTONE_SLACK);
        c.push(
            format!("{name}_high_index{}_nonincreasing", regime.upper_index),
            down.worst_violation,
            MONOTONE_SLACK,
            Criterion::AtMost,
        );
    }
    Ok(())
}

fn synthetic(c: &mut Collector) -> Result<()> {
    let n = 990;
    let grid: Vec<f64> = (0..=n).map(|i| 0.99 * i as f64 / n as f64).collect();
    let series = |eta: f64, p: f64| -> Vec<(f64, f64)> {
        grid.iter().map(|&t| (t, eta * (1.0 - t).powf(p))).collect()
    };
    let (t_plus, _) = blowup_time_from_series(&series(SQRT6_4, -0.5))?;
    c.push("T_plus", t_plus, 1.0, Criterion::Relative(1e-6));
    for (eta, p) in [(SQRT6_4, -0.5), (1.7, 0.25), (32.0 / 3.0, 1.0)] {
        let law = fit_exponent(&series(eta, p), FitMode::Singular { t_plus })?;
        c.push(format!("p_{p}"), law.exponent, p, Criterion::Relative(1e-6));
        c.push(
            format!("eta_{eta:.4}"),
            law.prefactor,
            eta,
            Criterion::Relative(1e-6),
        );
    }
    Ok(())
}

fn run_leaf(suite: Suite, cfg: &IntegratorConfig) -> Result<Vec<Check>> {
    let mut c = Collector {
        suite,
        checks: Vec::new(),
    };
    let r = 4f64.cbrt();
    match suite {
        Suite::All => unreachable!("expanded by leaves()"),
        Suite::Heisenberg => heisenberg(&mut c, cfg)?,
        Suite::Volume => volume(&mut c, cfg)?,
        Suite::Consistency => consistency(&mut c)?,
        Suite::E11Symmetric => e11_symmetric(&mut c, cfg)?,
        Suite::Su2Growth => su2_growth(&mut c, cfg)?,
        Suite::Exponents => exponents(&mut c, cfg)?,
        Suite::Sl2rTrichotomy => sl2r_trichotomy(&mut c, cfg)?,
        Suite::Su2Round => fixed_point(&mut c, cfg, "su2_round", BianchiClass::Su2, [r, r, r])?,
        Suite::FixedPoints => {
            fixed_point(&mut c, cfg, "su2_round", BianchiClass::Su2, [r, r, r])?;
            fixed_point(&mut c, cfg, "e2_(1,1,4)", BianchiClass::E2, [1.0, 1.0, 4.0])?;
        }
        Suite::Monotone => monotone(&mut c, cfg)?,
        Suite::Synthetic => synthetic(&mut c)?,
    }
    Ok(c.checks)
}

/// Runs `suite`, calling `on_check` as each check completes.
pub fn verify(
    suite: Suite,
    rel_tol: Option<f64>,
    mut on_check: impl FnMut(&Check),
) -> Result<Vec<Check>> {
    let cfg = base_config(rel_tol);
    let mut all = Vec::new();
    for leaf in suite.leaves() {
        for check in run_leaf(leaf, &cfg)? {
            on_check(&check);
            all.push(check);
        }
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(CliError::Config(_))));
    }

    #[test]
    fn all_expands_to_distinct_leaves() {
        let leaves = Suite::All.leaves();
        assert_eq!(leaves.len(), Suite::ALL.len() - 2);
        assert!(!leaves.contains(&Suite::Su2Round));
    }

    #[test]
    fn criteria() {
        let check = |m, e, criterion| Check {
            suite: Suite::Synthetic,
            name: "x".into(),
            measured: m,
            expected: e,
            criterion,
        };
        assert!(check(1.0005, 1.0, Criterion::Absolute(1e-3)).passed());
        assert!(!check(1.1, 1.0, Criterion::Relative(0.05)).passed());
        assert!(check(0.3, 0.35, Criterion::Below).passed());
        assert!(!check(0.35, 0.35, Criterion::Below).passed());
        assert!(check(0.35, 0.35, Criterion::AtMost).passed());
        assert!(!check(f64::NAN, 0.0, Criterion::Exact).passed());
        let line = check(2.0, 1.0, Criterion::Relative(0.05)).to_string();
        assert!(line.starts_with("FAIL synthetic/x: measured"));
    }

    #[test]
    fn sample_states_are_normalized() {
        for s in sample_states(100) {
            assert!((s.volume() / 4.0 - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn synthetic_suite_passes() {
        let checks = verify(Suite::Synthetic, None, |_| {}).unwrap();
        assert!(checks.len() >= 7);
        assert!(checks.iter().all(Check::passed), "{checks:?}");
    }
}
