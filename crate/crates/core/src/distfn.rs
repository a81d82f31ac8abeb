//! Distribution functions: non-decreasing maps `R -> [0, 1]` with infimum 0
//! and supremum 1.
//!
//! Rational and step kinds evaluate to 0 on `t <= 0`. A piecewise-linear
//! function is 0 left of its first breakpoint, interpolates linearly between
//! breakpoints and stays at the last value to the right.

use serde::{Deserialize, Serialize};

use crate::budget::{SampleBudget, EPSILON_STRICT, LIMIT_PROBE, NEGATIVE_PROBES, PROBE_STEPS};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Violation};

/// A one-sided difference sequence counts as vanishing when its last term is
/// within tolerance or shrinks at least linearly with the probe step, up to
/// this slack factor.
const DECAY_SLACK: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionFunction {
    /// `t / (t + r)` on `t > 0`; `rational(0)` is 1 on `t > 0`.
    Rational {
        r: f64,
    },
    /// `1` if `t > threshold`, else 0. Left-continuous.
    Step {
        threshold: f64,
    },
    /// `1` if `t >= threshold` (and `t > 0`), else 0. Right-continuous.
    StepClosed {
        threshold: f64,
    },
    PiecewiseLinear {
        breakpoints: Vec<(f64, f64)>,
    },
}

impl DistributionFunction {
    pub fn rational(r: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!(
                "rational parameter must be >= 0, got {r}"
            )));
        }
        Ok(DistributionFunction::Rational { r })
    }

    pub fn step(threshold: f64) -> Result<Self> {
        if !(threshold >= 0.0 && threshold.is_finite()) {
            return Err(Error::invalid(format!(
                "step threshold must be >= 0, got {threshold}"
            )));
        }
        Ok(DistributionFunction::Step { threshold })
    }

    pub fn step_closed(threshold: f64) -> Result<Self> {
        if !(threshold >= 0.0 && threshold.is_finite()) {
            return Err(Error::invalid(format!(
                "step threshold must be >= 0, got {threshold}"
            )));
        }
        Ok(DistributionFunction::StepClosed { threshold })
    }

    /// Breakpoints must have strictly increasing `t` and values in `[0, 1]`.
    /// Values need not be monotone; membership in the class is checked
    /// separately.
    pub fn piecewise_linear(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        let f = DistributionFunction::PiecewiseLinear { breakpoints };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DistributionFunction::Rational { r } => Self::rational(*r).map(drop),
            DistributionFunction::Step { threshold } => Self::step(*threshold).map(drop),
            DistributionFunction::StepClosed { threshold } => {
                Self::step_closed(*threshold).map(drop)
            }
            DistributionFunction::PiecewiseLinear { breakpoints } => {
                if breakpoints.is_empty() {
                    return Err(Error::invalid(
                        "piecewise_linear needs at least one breakpoint",
                    ));
                }
                if breakpoints
                    .iter()
                    .any(|&(t, v)| !t.is_finite() || !(0.0..=1.0).contains(&v))
                {
                    return Err(Error::invalid(
                        "breakpoints need finite t and values in [0, 1]",
                    ));
                }
                if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::invalid("breakpoint t values must strictly increase"));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            DistributionFunction::Rational { r } => {
                if t <= 0.0 {
                    0.0
                } else if *r == 0.0 {
                    1.0
                } else {
                    t / (t + r)
                }
            }
            DistributionFunction::Step { threshold } => {
                if t > 0.0 && t > *threshold {
                    1.0
                } else {
                    0.0
                }
            }
            DistributionFunction::StepClosed { threshold } => {
                if t > 0.0 && t >= *threshold {
                    1.0
                } else {
                    0.0
                }
            }
            DistributionFunction::PiecewiseLinear { breakpoints } => eval_piecewise(breakpoints, t),
        }
    }

    /// Points where the function may fail to be continuous.
    pub fn critical_points(&self) -> Vec<f64> {
        match self {
            DistributionFunction::Rational { .. } => Vec::new(),
            DistributionFunction::Step { threshold }
            | DistributionFunction::StepClosed { threshold } => vec![*threshold],
            DistributionFunction::PiecewiseLinear { breakpoints } => {
                breakpoints.iter().map(|&(t, _)| t).collect()
            }
        }
    }
}

fn eval_piecewise(points: &[(f64, f64)], t: f64) -> f64 {
    let (t0, _) = points[0];
    if t < t0 {
        return 0.0;
    }
    let (tn, vn) = points[points.len() - 1];
    if t >= tn {
        return vn;
    }
    // index of the first breakpoint strictly right of t; >= 1 here
    let i = points.partition_point(|&(ti, _)| ti <= t);
    let (ta, va) = points[i - 1];
    let (tb, vb) = points[i];
    let v = va + (vb - va) * (t - ta) / (tb - ta);
    v.clamp(va.min(vb), va.max(vb))
}

/// `min(f(t), g(t))`.
pub fn pointwise_min(f: &DistributionFunction, g: &DistributionFunction, t: f64) -> f64 {
    f.eval(t).min(g.eval(t))
}

/// Checks monotonicity on adjacent probe pairs, the range, and the limits at
/// `-inf` and `+inf`. The probe set is the budget grid plus `0`, the negative
/// probes, the function's critical points and `+-LIMIT_PROBE`.
pub fn check_delta_membership(f: &DistributionFunction, budget: &SampleBudget) -> CheckReport {
    let eps = budget.epsilon;
    let mut report = CheckReport::new(budget.rng_seed);
    let mut probes: Vec<f64> = vec![-LIMIT_PROBE, 0.0, LIMIT_PROBE];
    probes.extend(NEGATIVE_PROBES);
    probes.extend(&budget.t_grid);
    probes.extend(f.critical_points());
    probes.sort_by(f64::total_cmp);
    probes.dedup();

    let values: Vec<f64> = probes.iter().map(|&t| f.eval(t)).collect();
    for (&t, &v) in probes.iter().zip(&values) {
        report.samples_run += 1;
        if !(0.0..=1.0).contains(&v) {
            report.record(Violation::new("range", v, 1.0).scalar("t", t));
        }
    }
    for i in 1..probes.len() {
        if values[i - 1] > values[i] + eps {
            report.record(
                Violation::new("monotone", values[i - 1], values[i])
                    .scalar("s", probes[i - 1])
                    .scalar("t", probes[i]),
            );
        }
    }
    let lo = f.eval(-LIMIT_PROBE);
    if lo > eps {
        report.record(Violation::new("infimum", lo, 0.0).scalar("t", -LIMIT_PROBE));
    }
    let hi = f.eval(LIMIT_PROBE);
    if hi < 1.0 - eps {
        report.record(Violation::new("supremum", hi, 1.0).scalar("t", LIMIT_PROBE));
    }
    report
}

fn vanishes(diffs: &[f64; 3], eps: f64) -> bool {
    let last = diffs[2];
    last <= eps || last <= DECAY_SLACK * (PROBE_STEPS[2] / PROBE_STEPS[1]) * diffs[1]
}

fn left_diffs(f: &DistributionFunction, t: f64) -> [f64; 3] {
    let ft = f.eval(t);
    PROBE_STEPS.map(|d| (ft - f.eval(t - d)).abs())
}

fn two_sided_diffs(f: &DistributionFunction, t: f64) -> [f64; 3] {
    PROBE_STEPS.map(|d| (f.eval(t + d) - f.eval(t - d)).abs())
}

/// Probes `f(t) - f(t - delta)` over the geometric probe steps.
pub fn check_left_continuity(
    f: &DistributionFunction,
    t: f64,
    budget: &SampleBudget,
) -> Result<CheckReport> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::precondition(format!(
            "left continuity is probed at t > 0, got {t}"
        )));
    }
    let mut report = CheckReport::new(budget.rng_seed);
    report.samples_run = PROBE_STEPS.len() as u64;
    let d = left_diffs(f, t);
    if !vanishes(&d, budget.epsilon) {
        report.record(
            Violation::new("left_continuity", f.eval(t), f.eval(t - PROBE_STEPS[2]))
                .scalar("t", t)
                .input("diffs", &d),
        );
    }
    Ok(report)
}

/// Checks both clauses of the continuity-plus-strict-monotonicity condition.
///
/// Continuity is probed two-sidedly at every grid point and positive critical
/// point. Strictness is required on adjacent probe pairs whose values both lie
/// in `(eps, 1 - eps)`. A note records when that band is empty, in which case
/// the strictness clause holds vacuously.
pub fn check_upsilon(f: &DistributionFunction, budget: &SampleBudget) -> CheckReport {
    let eps = budget.epsilon;
    let mut report = CheckReport::new(budget.rng_seed);
    let mut probes: Vec<f64> = budget.t_grid.clone();
    probes.extend(f.critical_points().into_iter().filter(|&t| t > 0.0));
    probes.sort_by(f64::total_cmp);
    probes.dedup();

    for &t in &probes {
        report.samples_run += 1;
        let d = two_sided_diffs(f, t);
        if !vanishes(&d, eps) {
            report.record(
                Violation::new(
                    "continuity",
                    f.eval(t + PROBE_STEPS[2]),
                    f.eval(t - PROBE_STEPS[2]),
                )
                .scalar("t", t),
            );
        }
    }

    let inside: Vec<(f64, f64)> = probes
        .iter()
        .map(|&t| (t, f.eval(t)))
        .filter(|&(_, v)| v > eps && v < 1.0 - eps)
        .collect();
    if inside.is_empty() {
        report.note("strictness clause vacuous: no probe with 0 < f < 1");
    }
    for w in inside.windows(2) {
        let ((t1, v1), (t2, v2)) = (w[0], w[1]);
        if v2 <= v1 + EPSILON_STRICT {
            report.record(
                Violation::new("strict_increase", v1, v2)
                    .scalar("s", t1)
                    .scalar("t", t2),
            );
        }
    }
    report
}
