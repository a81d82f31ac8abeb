//! Witness constructions for the neighborhood basis, local base, Hausdorff
//! separation and continuity of the vector operations in `tau_mu`.
//!
//! Each construction picks concrete parameters (midpoints of feasible
//! intervals) and then checks the claimed containment or disjointness on
//! sampled ball members.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::balls::{contains_raw, feasible_midpoint, margin_raw, Ball, BallSampler, EXHAUSTED};
use crate::budget::{run_sampled, streams, SampleBudget, EPSILON_STRICT};
use crate::distfn::check_upsilon;
use crate::error::{Error, Result};
use crate::pmspace::{validate_beta, PmSpace};
use crate::report::{CheckReport, Violation};
use crate::vector::{check_dim, Vector};

/// Smallest `|λ|` used when scaling by `|λ|^β`.
pub const LAMBDA_FLOOR: f64 = 1e-6;
/// Extra decades searched below the grid for a separation argument.
const SEPARATION_EXTRA_DECADES: i32 = 2;
const SEPARATION_STEPS_PER_DECADE: i32 = 8;
const REVERSE: u64 = 1 << 32;

/// A constructed witness with its sampled verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessReport<W> {
    pub witness: W,
    pub evidence: CheckReport,
}

impl<W> WitnessReport<W> {
    pub fn passed(&self) -> bool {
        self.evidence.passed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefinementWitness {
    pub inner: Ball,
    pub t_star: f64,
    pub alpha_star: f64,
    pub s: f64,
    pub alpha_1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectionWitness {
    pub first: RefinementWitness,
    pub second: RefinementWitness,
    pub ball: Ball,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalBaseWitness {
    pub n: u64,
    pub ball: Ball,
}

/// Two disjoint balls; `level = 1 - alpha_1` for both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparationWitness {
    pub ball_x: Ball,
    pub ball_y: Ball,
    pub t0: f64,
    pub alpha_1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ContinuityWitness {
    /// `B1 + B2 ⊂ target`.
    Addition { b1: Ball, b2: Ball },
    /// `ξ B1 ⊂ target` whenever `|ξ - λ| < r`.
    Scalar { b1: Ball, r: f64, lambda: f64 },
}

fn check_c(c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!(
            "Delta2 constant must be positive, got {c}"
        )));
    }
    Ok(())
}

fn check_ball(space: &PmSpace, ball: &Ball) -> Result<()> {
    ball.validate()?;
    check_dim(space.dim, &ball.center)
}

fn require_origin(space: &PmSpace, ball: &Ball) -> Result<()> {
    check_ball(space, ball)?;
    if !ball.center.is_zero() {
        return Err(Error::precondition(
            "target ball must be centered at the origin",
        ));
    }
    Ok(())
}

/// Runs `n` draws of a member of the sampler's ball through `check`.
fn verify_members<F>(
    sampler: &BallSampler<'_>,
    seed: u64,
    stream: u64,
    n: usize,
    check: F,
) -> CheckReport
where
    F: Fn(&Vector, &mut ChaCha8Rng, usize) -> Option<Violation> + Sync,
{
    run_sampled(seed, stream, n, |rng, i, rep| match sampler.member(rng) {
        Some(y) => {
            if let Some(v) = check(&y, rng, i) {
                rep.record(v);
            }
        }
        None => rep.note(EXHAUSTED),
    })
}

fn escapes(space: &PmSpace, outer: &Ball, y: &Vector, check: &str) -> Option<Violation> {
    let m = margin_raw(space, outer, y);
    (m <= EPSILON_STRICT).then(|| {
        Violation::new(check, m, EPSILON_STRICT)
            .input("y", y.coords())
            .input("outer_center", outer.center.coords())
    })
}

/// Builds `B(z, 1 - α1, (t - t*)/c) ⊂ B(x, α, t)` without verification.
pub fn construct_refinement(
    space: &PmSpace,
    c: f64,
    outer: &Ball,
    z: &Vector,
) -> Result<RefinementWitness> {
    check_c(c)?;
    check_ball(space, outer)?;
    check_dim(space.dim, z)?;
    let (alpha, t) = (outer.level, outer.scale);
    let bound = 1.0 - alpha;
    let f = space.mu_raw(outer.center.sub(z).coords());
    if !(f.eval(t) > bound) {
        return Err(Error::precondition(format!(
            "point is not in the outer ball: mu(t) = {} <= 1 - alpha = {bound}",
            f.eval(t)
        )));
    }
    let at_core = f.eval(t / c);
    if !(at_core > bound) {
        return Err(Error::infeasible(format!(
            "mu(t/c) = {at_core} <= 1 - alpha = {bound}: no t* < t with mu(t*/c) > 1 - alpha"
        )));
    }
    let t_star = feasible_midpoint(|s| f.eval(s / c), bound, t)?;
    let alpha_star = f.eval(t_star / c);
    let one_minus_s = 0.5 * (bound + alpha_star);
    let alpha_1 = 0.5 * (one_minus_s + 1.0);
    if !(alpha_star > one_minus_s && alpha_1 > one_minus_s && one_minus_s > bound && alpha_1 < 1.0)
    {
        return Err(Error::infeasible(format!(
            "cannot order alpha* = {alpha_star}, alpha_1 = {alpha_1} > 1 - s = {one_minus_s} > {bound}"
        )));
    }
    let inner = Ball::new(z.clone(), 1.0 - alpha_1, (t - t_star) / c)?;
    Ok(RefinementWitness {
        inner,
        t_star,
        alpha_star,
        s: 1.0 - one_minus_s,
        alpha_1,
    })
}

/// A basis ball about `z` inside `outer`, for a space with Delta2 constant `c`.
pub fn refine_ball(
    space: &PmSpace,
    c: f64,
    outer: &Ball,
    z: &Vector,
    budget: &SampleBudget,
) -> Result<WitnessReport<RefinementWitness>> {
    let witness = construct_refinement(space, c, outer, z)?;
    let sampler = BallSampler::calibrate(
        space,
        &witness.inner,
        budget.rng_seed,
        streams::REFINE,
        budget.epsilon,
    );
    let evidence = verify_members(
        &sampler,
        budget.rng_seed,
        streams::REFINE,
        budget.witness_samples,
        |y, _, _| escapes(space, outer, y, "refine_ball").map(|v| v.scalar("c", c)),
    );
    Ok(WitnessReport { witness, evidence })
}

/// A basis ball about `z` inside `b1 ∩ b2`: refine into each, then take the
/// smaller level and the smaller scale.
pub fn basis_intersection(
    space: &PmSpace,
    c: f64,
    b1: &Ball,
    b2: &Ball,
    z: &Vector,
    budget: &SampleBudget,
) -> Result<WitnessReport<IntersectionWitness>> {
    let first = construct_refinement(space, c, b1, z)?;
    let second = construct_refinement(space, c, b2, z)?;
    let ball = Ball::new(
        z.clone(),
        first.inner.level.min(second.inner.level),
        first.inner.scale.min(second.inner.scale),
    )?;
    let sampler = BallSampler::calibrate(
        space,
        &ball,
        budget.rng_seed,
        streams::INTERSECT,
        budget.epsilon,
    );
    let evidence = verify_members(
        &sampler,
        budget.rng_seed,
        streams::INTERSECT,
        budget.witness_samples,
        |y, _, _| {
            escapes(space, b1, y, "basis_intersection")
                .or_else(|| escapes(space, b2, y, "basis_intersection"))
        },
    );
    Ok(WitnessReport {
        witness: IntersectionWitness {
            first,
            second,
            ball,
        },
        evidence,
    })
}

/// Least `n` with `1/n < m`.
pub fn least_reciprocal_below(m: f64) -> u64 {
    let mut n = ((1.0 / m).floor() as u64).saturating_add(1).max(1);
    while n > 1 && 1.0 / ((n - 1) as f64) < m {
        n -= 1;
    }
    while !(1.0 / (n as f64) < m) && n < u64::MAX {
        n += 1;
    }
    n
}

/// `B(x, 1/n, 1/n) ⊂ outer` for the least `n` with `1/n < min(t, α)`.
pub fn local_base_containment(
    space: &PmSpace,
    outer: &Ball,
    budget: &SampleBudget,
) -> Result<WitnessReport<LocalBaseWitness>> {
    check_ball(space, outer)?;
    let n = least_reciprocal_below(outer.scale.min(outer.level));
    let r = 1.0 / n as f64;
    let ball = Ball::new(outer.center.clone(), r, r)?;
    let sampler = BallSampler::calibrate(
        space,
        &ball,
        budget.rng_seed,
        streams::LOCAL_BASE,
        budget.epsilon,
    );
    let evidence = verify_members(
        &sampler,
        budget.rng_seed,
        streams::LOCAL_BASE,
        budget.witness_samples,
        |y, _, _| escapes(space, outer, y, "local_base"),
    );
    Ok(WitnessReport {
        witness: LocalBaseWitness { n, ball },
        evidence,
    })
}

fn check_disjoint(
    space: &PmSpace,
    w: &SeparationWitness,
    check: &str,
    stream: u64,
    budget: &SampleBudget,
) -> CheckReport {
    let n = budget.witness_samples;
    let (seed, eps) = (budget.rng_seed, budget.epsilon);
    let mut report = CheckReport::new(seed);
    for (mine, other, s) in [
        (&w.ball_x, &w.ball_y, stream),
        (&w.ball_y, &w.ball_x, stream ^ REVERSE),
    ] {
        let sampler = BallSampler::calibrate(space, mine, seed, s, eps);
        report.merge(verify_members(&sampler, seed, s, n, |y, _, _| {
            contains_raw(space, other, y).then(|| {
                Violation::new(check, margin_raw(space, other, y), 0.0).input("y", y.coords())
            })
        }));
    }
    report
}

/// Grid extended a few decades below its minimum.
fn extended_grid(budget: &SampleBudget) -> Vec<f64> {
    let t_min = budget.t_min();
    let steps = SEPARATION_EXTRA_DECADES * SEPARATION_STEPS_PER_DECADE;
    let mut out: Vec<f64> = (1..=steps)
        .rev()
        .map(|j| t_min * 10f64.powf(-(j as f64) / SEPARATION_STEPS_PER_DECADE as f64))
        .collect();
    out.extend_from_slice(&budget.t_grid);
    out
}

/// Two disjoint balls about `x` and `y` for a space with Delta2 constant `c`.
pub fn separation_witness(
    space: &PmSpace,
    c: f64,
    x: &Vector,
    y: &Vector,
    budget: &SampleBudget,
) -> Result<WitnessReport<SeparationWitness>> {
    check_c(c)?;
    check_dim(space.dim, x)?;
    check_dim(space.dim, y)?;
    let d = x.sub(y);
    if d.is_zero() {
        return Err(Error::precondition("separation needs two distinct points"));
    }
    let f = space.mu_raw(d.coords());
    let eps = budget.epsilon;
    let grid = extended_grid(budget);
    let t0 = grid
        .iter()
        .rev()
        .copied()
        .find(|&t| f.eval(t) <= 0.5)
        .or_else(|| grid.iter().copied().find(|&t| f.eval(t) < 1.0 - eps))
        .ok_or_else(|| {
            Error::infeasible(
                "mu_{x-y} >= 1 - eps on the whole grid: x - y behaves like the zero vector",
            )
        })?;
    let alpha_1 = 0.5 * (f.eval(t0) + 1.0);
    let level = 1.0 - alpha_1;
    let scale = t0 / (2.0 * c);
    let witness = SeparationWitness {
        ball_x: Ball::new(x.clone(), level, scale)?,
        ball_y: Ball::new(y.clone(), level, scale)?,
        t0,
        alpha_1,
    };
    let evidence = check_disjoint(space, &witness, "separation", streams::SEPARATE, budget);
    Ok(WitnessReport { witness, evidence })
}

/// Disjoint balls about `0` and `x` for a β-homogeneous space whose `mu_x`
/// is continuous and strictly increasing where it lies strictly in `(0, 1)`.
pub fn homogeneous_separation_witness(
    space: &PmSpace,
    beta: f64,
    x: &Vector,
    budget: &SampleBudget,
) -> Result<WitnessReport<SeparationWitness>> {
    validate_beta(beta)?;
    check_dim(space.dim, x)?;
    if x.is_zero() {
        return Err(Error::precondition("homogeneous separation needs x != 0"));
    }
    let f = space.mu_raw(x.coords());
    let upsilon = check_upsilon(&f, budget);
    if !upsilon.passed {
        return Err(Error::precondition(format!(
            "mu_x is not continuous and strictly increasing on its transition band ({} violations)",
            upsilon.violation_count
        )));
    }
    let eps = budget.epsilon;
    let inside = |t: f64| {
        let v = f.eval(t);
        v > eps && v < 1.0 - eps
    };
    let t0 = budget
        .t_grid
        .iter()
        .rev()
        .copied()
        .find(|&t| inside(t) && f.eval(t) <= 0.5)
        .or_else(|| budget.t_grid.iter().copied().find(|&t| inside(t)))
        .ok_or_else(|| Error::infeasible("no grid point with 0 < mu_x(t) < 1"))?;
    let alpha_0 = 0.5 * (1.0 - f.eval(t0));
    let scale = t0 / (2f64).powf(beta + 1.0);
    let witness = SeparationWitness {
        ball_x: Ball::new(Vector::zeros(space.dim), alpha_0, scale)?,
        ball_y: Ball::new(x.clone(), alpha_0, scale)?,
        t0,
        alpha_1: 1.0 - alpha_0,
    };
    let evidence = check_disjoint(
        space,
        &witness,
        "homogeneous_separation",
        streams::HOMOGENEOUS_SEPARATE,
        budget,
    );
    Ok(WitnessReport { witness, evidence })
}

/// `B1 = B2 = B(0, α/2, t/2^{β+2})` with `B1 + B2 ⊂ target`.
pub fn addition_continuity_witness(
    space: &PmSpace,
    beta: f64,
    target: &Ball,
    budget: &SampleBudget,
) -> Result<WitnessReport<ContinuityWitness>> {
    validate_beta(beta)?;
    require_origin(space, target)?;
    let b = Ball::at_origin(
        space.dim,
        0.5 * target.level,
        target.scale / (2f64).powf(beta + 2.0),
    )?;
    let sampler = BallSampler::calibrate(
        space,
        &b,
        budget.rng_seed,
        streams::ADDITION,
        budget.epsilon,
    );
    let evidence = verify_members(
        &sampler,
        budget.rng_seed,
        streams::ADDITION,
        budget.witness_samples,
        |x, rng, _| {
            let y = sampler.member(rng)?;
            let sum = x.add(&y);
            let m = margin_raw(space, target, &sum);
            (m <= EPSILON_STRICT).then(|| {
                Violation::new("addition_continuity", m, EPSILON_STRICT)
                    .input("x", x.coords())
                    .input("y", y.coords())
            })
        },
    );
    Ok(WitnessReport {
        witness: ContinuityWitness::Addition {
            b1: b.clone(),
            b2: b,
        },
        evidence,
    })
}

/// `B1 = B(0, α/2, t1)` and `r` with `ξ B1 ⊂ target` for `|ξ - λ| < r`.
pub fn scalar_continuity_witness(
    space: &PmSpace,
    beta: f64,
    target: &Ball,
    lambda: f64,
    budget: &SampleBudget,
) -> Result<WitnessReport<ContinuityWitness>> {
    validate_beta(beta)?;
    require_origin(space, target)?;
    if !lambda.is_finite() {
        return Err(Error::invalid(format!(
            "lambda must be finite, got {lambda}"
        )));
    }
    let t = target.scale;
    let t1 = t / (4.0 * lambda.abs().max(LAMBDA_FLOOR).powf(beta));
    let r = (t / (2.0 * t1)).powf(1.0 / beta);
    let b1 = Ball::at_origin(space.dim, 0.5 * target.level, t1)?;
    let sampler =
        BallSampler::calibrate(space, &b1, budget.rng_seed, streams::SCALAR, budget.epsilon);
    let evidence = verify_members(
        &sampler,
        budget.rng_seed,
        streams::SCALAR,
        budget.witness_samples,
        |x, rng, i| {
            let u: f64 = if i % 16 == 0 {
                0.0
            } else {
                rng.random_range(-1.0..1.0)
            };
            let xi = if u == -1.0 { lambda } else { lambda + r * u };
            let p = x.scale(xi);
            let m = margin_raw(space, target, &p);
            (m <= EPSILON_STRICT).then(|| {
                Violation::new("scalar_continuity", m, EPSILON_STRICT)
                    .input("x", x.coords())
                    .scalar("xi", xi)
            })
        },
    );
    Ok(WitnessReport {
        witness: ContinuityWitness::Scalar { b1, r, lambda },
        evidence,
    })
}
