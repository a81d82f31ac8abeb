//! Instance generation and the predicate registry.
//!
//! [`run_registry`] executes every check of the crate against one instance.
//! Each predicate ends in `pass`, `fail` (a sampled violation or a witness
//! that broke where it must not) or `infeasible` (a hypothesis the
//! predicate needs is absent or was not verified).

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::balls::{
    contains_raw, is_balanced_sampled, is_convex_sampled, lemma1_witness, monotone_in_level,
    monotone_in_scale, scaling_identity_unchecked, translate_identity, Ball, BallSampler,
};
use crate::budget::{gaussian_vector, signed_log_uniform, stream_rng, streams, SampleBudget};
use crate::convergence::{
    check_mu_convergence, check_topological_convergence, local_base, SequenceKind, SequenceSpec,
    DEFAULT_LOCAL_BASE_K, DEFAULT_N_MAX, EPSILON_CONV,
};
use crate::distfn::{check_delta_membership, check_left_continuity};
use crate::error::{Error, Result};
pub use crate::pmspace::MutationKind;
use crate::pmspace::{
    check_axioms, check_beta_homogeneous, check_delta2, check_upsilon_space, ClassicalModular,
    Family, PmSpace,
};
use crate::report::{CheckReport, Verdict, Violation};
use crate::topology::{
    addition_continuity_witness, basis_intersection, homogeneous_separation_witness,
    local_base_containment, refine_ball, scalar_continuity_witness, separation_witness,
    WitnessReport,
};
use crate::vector::Vector;

/// Random inputs drawn per witness or identity predicate.
pub const WITNESS_DRAWS: usize = 8;
const LEVEL_RANGE: (f64, f64) = (0.05, 0.95);
const MAX_DIM: usize = 4;
const WEIGHT_RANGE: (f64, f64) = (0.5, 2.0);
const GEOMETRIC_RATIO_RANGE: (f64, f64) = (0.2, 0.8);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredicateResult {
    pub verdict: Verdict,
    pub report: CheckReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FalsifierRun {
    pub seed: u64,
    pub budget: SampleBudget,
    pub instance: PmSpace,
    pub results: BTreeMap<String, PredicateResult>,
}

impl FalsifierRun {
    pub fn verdict(&self) -> Verdict {
        self.results
            .values()
            .fold(Verdict::Pass, |acc, r| acc.worst(r.verdict))
    }

    pub fn failures(&self) -> Vec<&str> {
        self.names_with(Verdict::Fail)
    }

    pub fn names_with(&self, v: Verdict) -> Vec<&str> {
        self.results
            .iter()
            .filter(|(_, r)| r.verdict == v)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

/// Deterministic instance from `seed`: dimension 1 to 4 and a modular drawn
/// from `p_power(1)`, `p_power(2)` and `weighted_abs`. The declared Delta2
/// constant is the true one and `beta = 1` is declared when it holds.
pub fn generate_instance(seed: u64, family: Family, mutation: Option<MutationKind>) -> PmSpace {
    let mut rng = stream_rng(seed, streams::GENERATE, 0);
    let dim = rng.random_range(1..=MAX_DIM);
    let modular = match rng.random_range(0..3u8) {
        0 => ClassicalModular::PPower { p: 1.0 },
        1 => ClassicalModular::PPower { p: 2.0 },
        _ => ClassicalModular::WeightedAbs {
            weights: (0..dim)
                .map(|_| rng.random_range(WEIGHT_RANGE.0..=WEIGHT_RANGE.1))
                .collect(),
        },
    };
    let family = if mutation == Some(MutationKind::BreakLeftContinuity) {
        Family::StepFrom
    } else {
        family
    };
    let true_c = modular.delta2_constant();
    let declared_c = if mutation == Some(MutationKind::BreakDelta2Declaration) {
        let k = rng.random_range(1..=4u8);
        true_c / (k as f64 / 4.0).exp2()
    } else {
        true_c
    };
    let declared_beta = (modular.scaling_degree() == 1.0).then_some(1.0);
    PmSpace {
        dim,
        family,
        modular,
        mutation,
        declared_c: Some(declared_c),
        declared_beta,
    }
}

/// Accumulates sub-checks of one predicate.
struct Acc {
    report: CheckReport,
    detail: Option<String>,
    infeasible: bool,
    broken: bool,
}

impl Acc {
    fn new(seed: u64) -> Self {
        Acc {
            report: CheckReport::new(seed),
            detail: None,
            infeasible: false,
            broken: false,
        }
    }

    fn set_detail(&mut self, msg: String) {
        if self.detail.is_none() {
            self.detail = Some(msg);
        }
    }

    fn error(&mut self, e: Error) {
        match e {
            Error::Precondition(_) | Error::Infeasible(_) => self.infeasible = true,
            _ => self.broken = true,
        }
        self.set_detail(e.to_string());
    }

    fn report(&mut self, r: Result<CheckReport>) {
        match r {
            Ok(r) => self.report.merge(r),
            Err(e) => self.error(e),
        }
    }

    fn witness<W>(&mut self, r: Result<WitnessReport<W>>) {
        self.report(r.map(|w| w.evidence));
    }

    fn finish(self) -> PredicateResult {
        let verdict = if !self.report.passed || self.broken {
            Verdict::Fail
        } else if self.infeasible {
            Verdict::Infeasible
        } else {
            Verdict::Pass
        };
        PredicateResult {
            verdict,
            report: self.report,
            detail: self.detail,
        }
    }
}

fn from_report(report: CheckReport) -> PredicateResult {
    PredicateResult {
        verdict: if report.passed {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        report,
        detail: None,
    }
}

fn infeasible(seed: u64, detail: impl Into<String>) -> PredicateResult {
    PredicateResult {
        verdict: Verdict::Infeasible,
        report: CheckReport::new(seed),
        detail: Some(detail.into()),
    }
}

/// Inputs shared by the sampled predicates.
struct Ctx<'a> {
    space: &'a PmSpace,
    budget: &'a SampleBudget,
}

impl Ctx<'_> {
    fn rng(&self, predicate: u64) -> ChaCha8Rng {
        stream_rng(self.budget.rng_seed, streams::REGISTRY, predicate)
    }

    fn sub_budget(&self, k: usize) -> SampleBudget {
        self.budget
            .clone()
            .with_seed(self.budget.rng_seed.wrapping_add(k as u64))
    }

    fn vector(&self, rng: &mut ChaCha8Rng) -> Vector {
        gaussian_vector(rng, self.space.dim, self.budget.vector_scale)
    }

    fn nonzero(&self, rng: &mut ChaCha8Rng) -> Vector {
        loop {
            let v = self.vector(rng);
            if !v.is_zero() {
                return v;
            }
        }
    }

    fn level(&self, rng: &mut ChaCha8Rng) -> f64 {
        rng.random_range(LEVEL_RANGE.0..=LEVEL_RANGE.1)
    }

    fn grid_t(&self, rng: &mut ChaCha8Rng) -> f64 {
        let g = &self.budget.t_grid;
        g[rng.random_range(0..g.len())]
    }

    fn origin_ball(&self, rng: &mut ChaCha8Rng) -> Result<Ball> {
        let level = self.level(rng);
        let t = self.grid_t(rng);
        Ball::at_origin(self.space.dim, level, t)
    }
}

/// Runs every predicate against `space`.
pub fn run_registry(space: &PmSpace, budget: &SampleBudget) -> FalsifierRun {
    let seed = budget.rng_seed;
    let ctx = Ctx { space, budget };
    let mut results: BTreeMap<String, PredicateResult> = BTreeMap::new();
    let mut put = |name: &str, r: PredicateResult| {
        results.insert(name.to_string(), r);
    };

    put("delta_membership", delta_membership(&ctx));
    let axioms = check_axioms(space, budget);
    for (name, r) in axioms.named() {
        put(name, from_report(r.clone()));
    }

    let delta2 = match space.declared_c {
        Some(c) => match check_delta2(space, c, budget) {
            Ok(r) => from_report(r),
            Err(e) => infeasible(seed, e.to_string()),
        },
        None => infeasible(seed, "no Delta2 constant declared"),
    };
    let c_verified = space.declared_c.filter(|_| delta2.verdict == Verdict::Pass);
    put("delta2", delta2);

    let beta_result = match space.declared_beta {
        Some(beta) => match check_beta_homogeneous(space, beta, budget) {
            Ok(r) => from_report(r),
            Err(e) => infeasible(seed, e.to_string()),
        },
        None => infeasible(seed, "no homogeneity exponent declared"),
    };
    let beta_verified = space
        .declared_beta
        .filter(|_| beta_result.verdict == Verdict::Pass);
    put("beta_homogeneous", beta_result);

    let upsilon_report = check_upsilon_space(space, budget);
    let upsilon_ok = upsilon_report.passed;
    put(
        "upsilon",
        if upsilon_ok {
            from_report(upsilon_report)
        } else {
            PredicateResult {
                verdict: Verdict::Infeasible,
                detail: Some(
                    "mu_x is not continuous and strictly increasing on its transition band".into(),
                ),
                report: upsilon_report,
            }
        },
    );

    put("left_continuity", left_continuity(&ctx));
    put("lemma1", lemma1(&ctx));
    put("ball_translate", ball_translate(&ctx));
    put("ball_monotone_scale", ball_monotone_scale(&ctx));
    put("ball_monotone_level", ball_monotone_level(&ctx));
    put("local_base", local_base_predicate(&ctx));
    put("convergence_equivalence", convergence_equivalence(&ctx));

    let need_c = "requires a verified Delta2 constant";
    match c_verified {
        Some(c) => {
            put("refine_ball", refine_predicate(&ctx, c));
            put("basis_intersection", intersection_predicate(&ctx, c));
            put("separation", separation_predicate(&ctx, c));
        }
        None => {
            for name in ["refine_ball", "basis_intersection", "separation"] {
                put(name, infeasible(seed, need_c));
            }
        }
    }

    let need_beta = "requires a verified homogeneity exponent";
    match beta_verified {
        Some(beta) => {
            put("ball_scaling", ball_scaling(&ctx, beta));
            put("ball_balanced", ball_shape(&ctx, true));
            put("ball_convex", ball_shape(&ctx, false));
            put("addition_continuity", addition_predicate(&ctx, beta));
            put("scalar_continuity", scalar_predicate(&ctx, beta));
            put(
                "homogeneous_separation",
                if upsilon_ok {
                    homogeneous_separation_predicate(&ctx, beta)
                } else {
                    infeasible(seed, "requires continuity and strict monotonicity of mu_x")
                },
            );
        }
        None => {
            for name in [
                "ball_scaling",
                "ball_balanced",
                "ball_convex",
                "addition_continuity",
                "scalar_continuity",
                "homogeneous_separation",
            ] {
                put(name, infeasible(seed, need_beta));
            }
        }
    }

    FalsifierRun {
        seed,
        budget: budget.clone(),
        instance: space.clone(),
        results,
    }
}

/// Names of every predicate [`run_registry`] reports.
pub const PREDICATES: [&str; 24] = [
    "addition_continuity",
    "ball_balanced",
    "ball_convex",
    "ball_monotone_level",
    "ball_monotone_scale",
    "ball_scaling",
    "ball_translate",
    "basis_intersection",
    "beta_homogeneous",
    "convergence_equivalence",
    "delta2",
    "delta_membership",
    "homogeneous_separation",
    "left_continuity",
    "lemma1",
    "local_base",
    "pm1",
    "pm2",
    "pm3",
    "pm4",
    "refine_ball",
    "scalar_continuity",
    "separation",
    "upsilon",
];

fn delta_membership(ctx: &Ctx) -> PredicateResult {
    let mut rng = ctx.rng(1);
    let mut report = CheckReport::new(ctx.budget.rng_seed);
    for i in 0..ctx.budget.n_functions {
        let x = if i == 0 {
            Vector::zeros(ctx.space.dim)
        } else {
            ctx.vector(&mut rng)
        };
        let sub = check_delta_membership(&ctx.space.mu_raw(x.coords()), ctx.budget);
        report.merge(tag_input(sub, &x));
    }
    from_report(report)
}

fn tag_input(mut r: CheckReport, x: &Vector) -> CheckReport {
    for v in &mut r.violations {
        v.inputs.insert("x".into(), x.coords().to_vec());
    }
    r
}

fn left_continuity(ctx: &Ctx) -> PredicateResult {
    let mut rng = ctx.rng(2);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for _ in 0..ctx.budget.n_functions {
        let x = ctx.nonzero(&mut rng);
        let f = ctx.space.mu_raw(x.coords());
        let mut ts: Vec<f64> = f
            .critical_points()
            .into_iter()
            .filter(|&t| t > 0.0)
            .collect();
        ts.push(ctx.grid_t(&mut rng));
        for t in ts {
            acc.report(check_left_continuity(&f, t, ctx.budget).map(|r| tag_input(r, &x)));
        }
    }
    acc.finish()
}

fn lemma1(ctx: &Ctx) -> PredicateResult {
    let mut rng = ctx.rng(3);
    let mut report = CheckReport::new(ctx.budget.rng_seed);
    let mut detail = None;
    let mut attempted = 0usize;
    for _ in 0..ctx.budget.n_functions {
        let x = ctx.vector(&mut rng);
        let y = ctx.vector(&mut rng);
        let level = ctx.level(&mut rng);
        let f = ctx.space.mu_raw(x.sub(&y).coords());
        let mut ts: Vec<f64> = f
            .critical_points()
            .into_iter()
            .filter(|&t| t > 0.0)
            .collect();
        ts.push(ctx.grid_t(&mut rng));
        for t in ts {
            let Ok(ball) = Ball::new(x.clone(), level, t) else {
                continue;
            };
            if !contains_raw(ctx.space, &ball, &y) {
                continue;
            }
            attempted += 1;
            report.samples_run += 1;
            let violation = |lhs: f64| {
                Violation::new("lemma1", lhs, 1.0 - level)
                    .input("x", x.coords())
                    .input("y", y.coords())
                    .scalar("level", level)
                    .scalar("scale", t)
            };
            match lemma1_witness(ctx.space, &ball, &y) {
                Ok(ts) if ts > 0.0 && ts < t && f.eval(ts) > 1.0 - level => {}
                Ok(ts) => report.record(violation(f.eval(ts)).scalar("t_star", ts)),
                Err(e) => {
                    if detail.is_none() {
                        detail = Some(e.to_string());
                    }
                    report.record(violation(f.eval(t)));
                }
            }
        }
    }
    if attempted == 0 {
        report.note("vacuous: no sampled point lay in its ball");
    }
    let mut r = from_report(report);
    r.detail = detail;
    r
}

fn ball_translate(ctx: &Ctx) -> PredicateResult {
    let mut rng = ctx.rng(4);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let x = ctx.vector(&mut rng);
        let level = ctx.level(&mut rng);
        let t = ctx.grid_t(&mut rng);
        acc.report(translate_identity(
            ctx.space,
            &x,
            level,
            t,
            &ctx.sub_budget(k),
        ));
    }
    acc.finish()
}

fn ordered_pair(rng: &mut ChaCha8Rng, draw: impl Fn(&mut ChaCha8Rng) -> f64) -> (f64, f64) {
    let (a, b) = (draw(rng), draw(rng));
    (a.min(b), a.max(b))
}

fn ball_monotone_scale(ctx: &Ctx) -> PredicateResult {
    let mut rng = ctx.rng(5);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let level = ctx.level(&mut rng);
        let (t1, t2) = ordered_pair(&mut rng, |r| ctx.grid_t(r));
        acc.report(monotone_in_scale(
            ctx.space,
            level,
            t1,
            t2,
            &ctx.sub_budget(k),
        ));
    }
    acc.finish()
}

fn ball_monotone_level(ctx: &Ctx) -> PredicateResult {
    let mut rng = ctx.rng(6);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let (a1, a2) = ordered_pair(&mut rng, |r| ctx.level(r));
        let t = ctx.grid_t(&mut rng);
        acc.report(monotone_in_level(ctx.space, a1, a2, t, &ctx.sub_budget(k)));
    }
    acc.finish()
}

fn ball_scaling(ctx: &Ctx, beta: f64) -> PredicateResult {
    let mut rng = ctx.rng(7);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let level = ctx.level(&mut rng);
        let t = 10f64.powf(rng.random_range(-2.0..=2.0));
        acc.report(scaling_identity_unchecked(
            ctx.space,
            beta,
            level,
            t,
            &ctx.sub_budget(k),
        ));
    }
    acc.finish()
}

fn ball_shape(ctx: &Ctx, balanced: bool) -> PredicateResult {
    let mut rng = ctx.rng(if balanced { 8 } else { 9 });
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let ball = match ctx.origin_ball(&mut rng) {
            Ok(b) => b,
            Err(e) => {
                acc.error(e);
                continue;
            }
        };
        let b = ctx.sub_budget(k);
        acc.report(if balanced {
            is_balanced_sampled(ctx.space, &ball, &b)
        } else {
            is_convex_sampled(ctx.space, &ball, &b)
        });
    }
    acc.finish()
}

fn local_base_predicate(ctx: &Ctx) -> PredicateResult {
    let mut rng = ctx.rng(10);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let x = ctx.vector(&mut rng);
        let level = ctx.level(&mut rng);
        let t = ctx.grid_t(&mut rng);
        match Ball::new(x, level, t) {
            Ok(outer) => acc.witness(local_base_containment(
                ctx.space,
                &outer,
                &ctx.sub_budget(k),
            )),
            Err(e) => acc.error(e),
        }
    }
    acc.finish()
}

/// A point `x` with `z` in the core `B(x, α, t/c)`, found by sampling that
/// ball about `z` (membership is symmetric).
fn ball_with_core_point(
    ctx: &Ctx,
    rng: &mut ChaCha8Rng,
    c: f64,
    z: &Vector,
    k: usize,
) -> Result<Ball> {
    let level = ctx.level(rng);
    let t = ctx.grid_t(rng);
    let core = Ball::new(z.clone(), level, t / c)?;
    let sampler = BallSampler::calibrate(
        ctx.space,
        &core,
        ctx.budget.rng_seed,
        streams::REFINE + k as u64,
        ctx.budget.epsilon,
    );
    let x = sampler
        .member(rng)
        .ok_or_else(|| Error::infeasible("could not sample a ball around the point"))?;
    Ball::new(x, level, t)
}

fn refine_predicate(ctx: &Ctx, c: f64) -> PredicateResult {
    let mut rng = ctx.rng(11);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let z = ctx.vector(&mut rng);
        match ball_with_core_point(ctx, &mut rng, c, &z, k) {
            Ok(outer) => acc.witness(refine_ball(ctx.space, c, &outer, &z, &ctx.sub_budget(k))),
            Err(e) => acc.error(e),
        }
    }
    acc.finish()
}

fn intersection_predicate(ctx: &Ctx, c: f64) -> PredicateResult {
    let mut rng = ctx.rng(12);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let z = ctx.vector(&mut rng);
        let balls = ball_with_core_point(ctx, &mut rng, c, &z, 2 * k)
            .and_then(|b1| Ok((b1, ball_with_core_point(ctx, &mut rng, c, &z, 2 * k + 1)?)));
        match balls {
            Ok((b1, b2)) => acc.witness(basis_intersection(
                ctx.space,
                c,
                &b1,
                &b2,
                &z,
                &ctx.sub_budget(k),
            )),
            Err(e) => acc.error(e),
        }
    }
    acc.finish()
}

fn separation_predicate(ctx: &Ctx, c: f64) -> PredicateResult {
    let mut rng = ctx.rng(13);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let x = ctx.vector(&mut rng);
        let y = x.add(&ctx.nonzero(&mut rng));
        acc.witness(separation_witness(ctx.space, c, &x, &y, &ctx.sub_budget(k)));
    }
    acc.finish()
}

fn homogeneous_separation_predicate(ctx: &Ctx, beta: f64) -> PredicateResult {
    let mut rng = ctx.rng(14);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let x = ctx.nonzero(&mut rng);
        acc.witness(homogeneous_separation_witness(
            ctx.space,
            beta,
            &x,
            &ctx.sub_budget(k),
        ));
    }
    acc.finish()
}

fn addition_predicate(ctx: &Ctx, beta: f64) -> PredicateResult {
    let mut rng = ctx.rng(15);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        match ctx.origin_ball(&mut rng) {
            Ok(target) => acc.witness(addition_continuity_witness(
                ctx.space,
                beta,
                &target,
                &ctx.sub_budget(k),
            )),
            Err(e) => acc.error(e),
        }
    }
    acc.finish()
}

fn scalar_predicate(ctx: &Ctx, beta: f64) -> PredicateResult {
    let mut rng = ctx.rng(16);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for k in 0..WITNESS_DRAWS {
        let lambda = if k == 0 {
            0.0
        } else {
            signed_log_uniform(&mut rng)
        };
        match ctx.origin_ball(&mut rng) {
            Ok(target) => acc.witness(scalar_continuity_witness(
                ctx.space,
                beta,
                &target,
                lambda,
                &ctx.sub_budget(k),
            )),
            Err(e) => acc.error(e),
        }
    }
    acc.finish()
}

/// Sequences of every kind with `max |v_i| = 1`.
fn sample_sequences(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<SequenceSpec> {
    let x = ctx.vector(rng);
    let v = ctx.nonzero(rng);
    let v = v.scale(1.0 / v.max_abs());
    let q = rng.random_range(GEOMETRIC_RATIO_RANGE.0..=GEOMETRIC_RATIO_RANGE.1);
    [
        SequenceKind::Harmonic,
        SequenceKind::ConstantOffset,
        SequenceKind::Alternating,
        SequenceKind::Geometric { q },
    ]
    .into_iter()
    .map(|kind| SequenceSpec {
        kind,
        base: x.clone(),
        direction: v.clone(),
        candidate_limit: x.clone(),
    })
    .collect()
}

/// Whether the gap criterion and the local-base criterion agree.
pub fn convergence_agreement(
    space: &PmSpace,
    seq: &SequenceSpec,
    t_grid: &[f64],
) -> Result<(bool, bool)> {
    let mu = check_mu_convergence(space, seq, t_grid, EPSILON_CONV, DEFAULT_N_MAX)?;
    let balls = local_base(&seq.candidate_limit, DEFAULT_LOCAL_BASE_K);
    let topo = check_topological_convergence(space, seq, &balls, DEFAULT_N_MAX)?;
    Ok((mu.converges, topo.converges))
}

fn convergence_equivalence(ctx: &Ctx) -> PredicateResult {
    let mut rng = ctx.rng(17);
    let mut acc = Acc::new(ctx.budget.rng_seed);
    for _ in 0..WITNESS_DRAWS / 2 {
        for seq in sample_sequences(ctx, &mut rng) {
            acc.report.samples_run += 1;
            match convergence_agreement(ctx.space, &seq, &ctx.budget.t_grid) {
                Ok((mu, topo)) if mu != topo => acc.report.record(
                    Violation::new(
                        "convergence_equivalence",
                        mu as u8 as f64,
                        topo as u8 as f64,
                    )
                    .input("base", seq.base.coords())
                    .input("direction", seq.direction.coords()),
                ),
                Ok(_) => {}
                Err(e) => acc.error(e),
            }
        }
    }
    acc.finish()
}
