//! μ-balls `B(x, α, t) = {y : mu_{x-y}(t) > 1 - α}` and sampled checks of
//! their algebra.
//!
//! Members are drawn by rejection from a Gaussian about the center whose
//! spread is calibrated so that between 10% and 90% of draws land inside.
//! Draws whose margin `mu - (1 - α)` lies within `ε` of zero are discarded.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::{
    gaussian_vector, run_sampled, stream_rng, streams, SampleBudget, EPSILON_STRICT,
};
use crate::error::{Error, Result};
use crate::pmspace::{check_beta_homogeneous, validate_beta, PmSpace};
use crate::report::{CheckReport, Violation};
use crate::vector::{check_dim, Vector};

const CALIBRATION_BATCH: usize = 64;
const CALIBRATION_ROUNDS: usize = 400;
const MIN_ACCEPT: f64 = 0.1;
const MAX_ACCEPT: f64 = 0.9;
const MAX_SIGMA: f64 = 1e6;
const MAX_TRIES: usize = 10_000;
const BISECTION_STEPS: usize = 60;
const BISECTION_RESOLUTION: f64 = 1e-12;
const CALIBRATION_CHUNK: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ball {
    pub center: Vector,
    pub level: f64,
    pub scale: f64,
}

impl Ball {
    pub fn new(center: Vector, level: f64, scale: f64) -> Result<Self> {
        let b = Ball {
            center,
            level,
            scale,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn at_origin(dim: usize, level: f64, scale: f64) -> Result<Self> {
        Self::new(Vector::zeros(dim), level, scale)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::invalid(format!(
                "ball level must lie in (0, 1), got {}",
                self.level
            )));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::invalid(format!(
                "ball scale must be positive, got {}",
                self.scale
            )));
        }
        Ok(())
    }

    fn check_in(&self, space: &PmSpace) -> Result<()> {
        self.validate()?;
        check_dim(space.dim, &self.center)
    }
}

/// `mu_{center-y}(scale) - (1 - level)`.
pub fn margin(space: &PmSpace, ball: &Ball, y: &Vector) -> Result<f64> {
    ball.check_in(space)?;
    check_dim(space.dim, y)?;
    Ok(margin_raw(space, ball, y))
}

pub fn contains(space: &PmSpace, ball: &Ball, y: &Vector) -> Result<bool> {
    Ok(margin(space, ball, y)? > EPSILON_STRICT)
}

pub(crate) fn margin_raw(space: &PmSpace, ball: &Ball, y: &Vector) -> f64 {
    space.mu_at(&ball.center.sub(y), ball.scale) - (1.0 - ball.level)
}

pub(crate) fn contains_raw(space: &PmSpace, ball: &Ball, y: &Vector) -> bool {
    margin_raw(space, ball, y) > EPSILON_STRICT
}

/// Gaussian proposal about a ball center with a calibrated spread.
pub(crate) struct BallSampler<'a> {
    space: &'a PmSpace,
    ball: &'a Ball,
    sigma: f64,
    eps: f64,
}

impl<'a> BallSampler<'a> {
    pub(crate) fn calibrate(
        space: &'a PmSpace,
        ball: &'a Ball,
        seed: u64,
        stream: u64,
        eps: f64,
    ) -> Self {
        let mut s = BallSampler {
            space,
            ball,
            sigma: 1.0,
            eps,
        };
        let mut rng = stream_rng(seed, stream, CALIBRATION_CHUNK);
        for _ in 0..CALIBRATION_ROUNDS {
            let hits = (0..CALIBRATION_BATCH)
                .filter(|_| s.is_member(&s.propose(&mut rng)))
                .count();
            let rate = hits as f64 / CALIBRATION_BATCH as f64;
            if rate < MIN_ACCEPT {
                s.sigma *= 0.5;
            } else if rate > MAX_ACCEPT && s.sigma < MAX_SIGMA {
                s.sigma *= 2.0;
            } else {
                break;
            }
        }
        s
    }

    pub(crate) fn propose<R: Rng>(&self, rng: &mut R) -> Vector {
        self.ball
            .center
            .add(&gaussian_vector(rng, self.space.dim, self.sigma))
    }

    fn is_member(&self, y: &Vector) -> bool {
        margin_raw(self.space, self.ball, y) > self.eps
    }

    /// A member off the boundary band, or `None` after `MAX_TRIES` proposals.
    pub(crate) fn member<R: Rng>(&self, rng: &mut R) -> Option<Vector> {
        (0..MAX_TRIES)
            .map(|_| self.propose(rng))
            .find(|y| self.is_member(y))
    }
}

pub(crate) const EXHAUSTED: &str = "ball sampler exhausted its proposal budget";

/// Least-feasible-point search for `g(s) > bound` on `(0, scale]`; returns the
/// midpoint between the discovered infimum and `scale`.
pub(crate) fn feasible_midpoint<G: Fn(f64) -> f64>(g: G, bound: f64, scale: f64) -> Result<f64> {
    if !(g(scale) > bound) {
        return Err(Error::precondition(format!(
            "value {} at the scale {scale} does not exceed {bound}",
            g(scale)
        )));
    }
    let (mut lo, mut hi) = (0.0, scale);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if g(mid) > bound {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if scale - hi <= BISECTION_RESOLUTION * scale {
        return Err(Error::infeasible(format!(
            "no feasible argument below the scale {scale} above resolution {BISECTION_RESOLUTION}: \
             the distribution function is not left-continuous there"
        )));
    }
    let t = 0.5 * (hi + scale);
    if !(t > 0.0 && t < scale && g(t) > bound) {
        return Err(Error::infeasible(format!(
            "midpoint {t} failed verification"
        )));
    }
    Ok(t)
}

/// `t* in (0, scale)` with `mu_{center-y}(t*) > 1 - level`.
pub fn lemma1_witness(space: &PmSpace, ball: &Ball, y: &Vector) -> Result<f64> {
    ball.check_in(space)?;
    check_dim(space.dim, y)?;
    let f = space.mu_raw(ball.center.sub(y).coords());
    feasible_midpoint(|s| f.eval(s), 1.0 - ball.level, ball.scale)
}

/// `contains(B(x, α, t), y) == contains(B(0, α, t), y - x)` on sampled `y`.
pub fn translate_identity(
    space: &PmSpace,
    x: &Vector,
    level: f64,
    scale: f64,
    budget: &SampleBudget,
) -> Result<CheckReport> {
    translate_identity_with(space, x, level, scale, budget, |s, c, y| {
        s.mu_at(&c.sub(y), scale)
    })
}

fn translate_identity_with<M>(
    space: &PmSpace,
    x: &Vector,
    level: f64,
    scale: f64,
    budget: &SampleBudget,
    mu_at_scale: M,
) -> Result<CheckReport>
where
    M: Fn(&PmSpace, &Vector, &Vector) -> f64 + Sync,
{
    let ball = Ball::new(x.clone(), level, scale)?;
    ball.check_in(space)?;
    let origin = Vector::zeros(space.dim);
    let eps = budget.epsilon;
    let sampler = BallSampler::calibrate(space, &ball, budget.rng_seed, streams::TRANSLATE, eps);
    Ok(run_sampled(
        budget.rng_seed,
        streams::TRANSLATE,
        budget.witness_samples,
        |rng, _, rep| {
            let y = sampler.propose(rng);
            let shifted = y.sub(x);
            let lhs = mu_at_scale(space, x, &y) - (1.0 - level);
            let rhs = mu_at_scale(space, &origin, &shifted) - (1.0 - level);
            if lhs.abs() <= eps || rhs.abs() <= eps {
                return;
            }
            if (lhs > EPSILON_STRICT) != (rhs > EPSILON_STRICT) {
                rep.record(
                    Violation::new("ball_translate", lhs, rhs)
                        .input("x", x.coords())
                        .input("y", y.coords())
                        .scalar("level", level)
                        .scalar("scale", scale),
                );
            }
        },
    ))
}

/// `y in B(0, α, t^β) <=> y / t in B(0, α, 1)`, after confirming
/// β-homogeneity of the space.
pub fn scaling_identity(
    space: &PmSpace,
    beta: f64,
    level: f64,
    t: f64,
    budget: &SampleBudget,
) -> Result<CheckReport> {
    let homogeneity = check_beta_homogeneous(space, beta, budget)?;
    if !homogeneity.passed {
        return Err(Error::precondition(format!(
            "space is not {beta}-homogeneous ({} violations)",
            homogeneity.violation_count
        )));
    }
    scaling_identity_unchecked(space, beta, level, t, budget)
}

/// [`scaling_identity`] without the homogeneity precondition.
pub fn scaling_identity_unchecked(
    space: &PmSpace,
    beta: f64,
    level: f64,
    t: f64,
    budget: &SampleBudget,
) -> Result<CheckReport> {
    validate_beta(beta)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!(
            "scaling factor must be positive, got {t}"
        )));
    }
    let big = Ball::at_origin(space.dim, level, t.powf(beta))?;
    let unit = Ball::at_origin(space.dim, level, 1.0)?;
    let eps = budget.epsilon;
    let sampler = BallSampler::calibrate(space, &big, budget.rng_seed, streams::SCALING, eps);
    Ok(run_sampled(
        budget.rng_seed,
        streams::SCALING,
        budget.witness_samples,
        |rng, _, rep| {
            let y = sampler.propose(rng);
            let lhs = margin_raw(space, &big, &y);
            let rhs = margin_raw(space, &unit, &y.scale(1.0 / t));
            if lhs.abs() <= eps || rhs.abs() <= eps {
                return;
            }
            if (lhs > EPSILON_STRICT) != (rhs > EPSILON_STRICT) {
                rep.record(
                    Violation::new("ball_scaling", lhs, rhs)
                        .input("y", y.coords())
                        .scalar("beta", beta)
                        .scalar("level", level)
                        .scalar("t", t),
                );
            }
        },
    ))
}

/// Sampled members of `inner` all lie in `outer`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn check_subset(
    space: &PmSpace,
    inner: &Ball,
    outer: &Ball,
    check: &str,
    seed: u64,
    stream: u64,
    n: usize,
    eps: f64,
) -> CheckReport {
    let sampler = BallSampler::calibrate(space, inner, seed, stream, eps);
    run_sampled(seed, stream, n, |rng, _, rep| match sampler.member(rng) {
        Some(y) => {
            let m = margin_raw(space, outer, &y);
            if m <= EPSILON_STRICT {
                rep.record(
                    Violation::new(check, m, EPSILON_STRICT)
                        .input("y", y.coords())
                        .input("outer_center", outer.center.coords())
                        .scalar("outer_level", outer.level)
                        .scalar("outer_scale", outer.scale),
                );
            }
        }
        None => rep.note(EXHAUSTED),
    })
}

/// `B(0, α, t1) ⊂ B(0, α, t2)` for `t1 <= t2`.
pub fn monotone_in_scale(
    space: &PmSpace,
    level: f64,
    t1: f64,
    t2: f64,
    budget: &SampleBudget,
) -> Result<CheckReport> {
    if t1 > t2 {
        return Err(Error::precondition(format!(
            "scales out of order: {t1} > {t2}"
        )));
    }
    let small = Ball::at_origin(space.dim, level, t1)?;
    let large = Ball::at_origin(space.dim, level, t2)?;
    Ok(check_subset(
        space,
        &small,
        &large,
        "ball_monotone_scale",
        budget.rng_seed,
        streams::MONO_SCALE,
        budget.witness_samples,
        budget.epsilon,
    ))
}

/// `B(0, α1, t) ⊂ B(0, α2, t)` for `α1 <= α2`.
pub fn monotone_in_level(
    space: &PmSpace,
    level1: f64,
    level2: f64,
    t: f64,
    budget: &SampleBudget,
) -> Result<CheckReport> {
    if level1 > level2 {
        return Err(Error::precondition(format!(
            "levels out of order: {level1} > {level2}"
        )));
    }
    let small = Ball::at_origin(space.dim, level1, t)?;
    let large = Ball::at_origin(space.dim, level2, t)?;
    Ok(check_subset(
        space,
        &small,
        &large,
        "ball_monotone_level",
        budget.rng_seed,
        streams::MONO_LEVEL,
        budget.witness_samples,
        budget.epsilon,
    ))
}

fn require_origin(space: &PmSpace, ball: &Ball) -> Result<()> {
    ball.check_in(space)?;
    if !ball.center.is_zero() {
        return Err(Error::precondition("ball must be centered at the origin"));
    }
    Ok(())
}

/// `λ y` stays in the ball for sampled members `y` and `|λ| <= 1`.
pub fn is_balanced_sampled(
    space: &PmSpace,
    ball: &Ball,
    budget: &SampleBudget,
) -> Result<CheckReport> {
    require_origin(space, ball)?;
    let sampler = BallSampler::calibrate(
        space,
        ball,
        budget.rng_seed,
        streams::BALANCED,
        budget.epsilon,
    );
    Ok(run_sampled(
        budget.rng_seed,
        streams::BALANCED,
        budget.witness_samples,
        |rng, i, rep| {
            let Some(y) = sampler.member(rng) else {
                rep.note(EXHAUSTED);
                return;
            };
            let lambda = match i % 16 {
                0 => 0.0,
                1 => 1.0,
                2 => -1.0,
                _ => rng.random_range(-1.0..=1.0),
            };
            let m = margin_raw(space, ball, &y.scale(lambda));
            if m <= EPSILON_STRICT {
                rep.record(
                    Violation::new("ball_balanced", m, EPSILON_STRICT)
                        .input("y", y.coords())
                        .scalar("lambda", lambda),
                );
            }
        },
    ))
}

/// `λ x + (1 - λ) y` stays in the ball for sampled members `x, y`.
pub fn is_convex_sampled(
    space: &PmSpace,
    ball: &Ball,
    budget: &SampleBudget,
) -> Result<CheckReport> {
    require_origin(space, ball)?;
    let sampler = BallSampler::calibrate(
        space,
        ball,
        budget.rng_seed,
        streams::CONVEX,
        budget.epsilon,
    );
    Ok(check_convex_set(
        budget.rng_seed,
        budget.witness_samples,
        |rng| sampler.member(rng),
        |p| margin_raw(space, ball, p),
    ))
}

/// Convexity of a set given a member sampler and a signed membership margin.
pub(crate) fn check_convex_set<D, M>(seed: u64, n: usize, draw: D, margin: M) -> CheckReport
where
    D: Fn(&mut ChaCha8Rng) -> Option<Vector> + Sync,
    M: Fn(&Vector) -> f64 + Sync,
{
    run_sampled(seed, streams::CONVEX, n, |rng, _, rep| {
        let (Some(x), Some(y)) = (draw(rng), draw(rng)) else {
            rep.note(EXHAUSTED);
            return;
        };
        let lambda: f64 = rng.random_range(0.0..1.0);
        let p = x.combine(lambda, &y, 1.0 - lambda);
        let m = margin(&p);
        if m <= EPSILON_STRICT {
            rep.record(
                Violation::new("ball_convex", m, EPSILON_STRICT)
                    .input("x", x.coords())
                    .input("y", y.coords())
                    .scalar("lambda", lambda),
            );
        }
    })
}
