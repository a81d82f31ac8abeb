use pmtopo_core::balls::{
    is_balanced_sampled, is_convex_sampled, monotone_in_level, monotone_in_scale, scaling_identity,
    translate_identity,
};
use pmtopo_core::convergence::{
    check_mu_convergence, check_topological_convergence, local_base, SequenceKind, SequenceSpec,
    DEFAULT_LOCAL_BASE_K, DEFAULT_N_MAX, EPSILON_CONV,
};
use pmtopo_core::falsifier::{generate_instance, run_registry};
use pmtopo_core::pmspace::{
    check_axioms, check_beta_homogeneous, check_delta2, check_upsilon_at, check_upsilon_space,
    default_delta2_candidates, find_delta2_constant,
};
use pmtopo_core::topology::{
    addition_continuity_witness, basis_intersection, homogeneous_separation_witness,
    local_base_containment, refine_ball, scalar_continuity_witness, separation_witness,
};
use pmtopo_core::{
    Ball, CheckReport, Error, Family, PmSpace, ReportRecord, SampleBudget, Vector, Verdict,
    WitnessReport,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Config, Params};

/// Collects records for one operation. Precondition and infeasibility
/// errors become `infeasible` records; other errors abort as config errors.
pub struct Records<'a> {
    operation: &'a str,
    budget: &'a SampleBudget,
    instance: Option<&'a PmSpace>,
    pub out: Vec<ReportRecord>,
}

type OpResult = Result<(), String>;

impl<'a> Records<'a> {
    pub fn new(
        operation: &'a str,
        budget: &'a SampleBudget,
        instance: Option<&'a PmSpace>,
    ) -> Self {
        Records {
            operation,
            budget,
            instance,
            out: Vec::new(),
        }
    }

    fn base(&self, check: &str, verdict: Verdict) -> ReportRecord {
        ReportRecord {
            operation: self.operation.to_string(),
            check: check.to_string(),
            seed: self.budget.rng_seed,
            verdict,
            budget: self.budget.clone(),
            instance: self.instance.cloned(),
            evidence: None,
            witness: None,
            predicates: None,
            detail: None,
        }
    }

    fn error(&mut self, check: &str, e: Error) -> OpResult {
        match e {
            Error::Precondition(_) | Error::Infeasible(_) => {
                self.infeasible(check, e.to_string());
                Ok(())
            }
            other => Err(format!("{check}: {other}")),
        }
    }

    fn infeasible(&mut self, check: &str, detail: String) {
        let mut r = self.base(check, Verdict::Infeasible);
        r.detail = Some(detail);
        self.out.push(r);
    }

    fn report(
        &mut self,
        check: &str,
        res: Result<CheckReport, Error>,
        witness: Option<Value>,
    ) -> OpResult {
        match res {
            Ok(rep) => {
                let mut r = self.base(check, rep.verdict());
                r.evidence = Some(rep);
                r.witness = witness;
                self.out.push(r);
                Ok(())
            }
            Err(e) => self.error(check, e),
        }
    }

    fn witness<W: Serialize>(
        &mut self,
        check: &str,
        res: Result<WitnessReport<W>, Error>,
    ) -> OpResult {
        match res {
            Ok(w) => {
                let value = to_value(&w.witness)?;
                self.report(check, Ok(w.evidence), Some(value))
            }
            Err(e) => self.error(check, e),
        }
    }

    fn value(&mut self, check: &str, verdict: Verdict, witness: Value) {
        let mut r = self.base(check, verdict);
        r.witness = Some(witness);
        self.out.push(r);
    }
}

fn declared_c(space: &PmSpace, p: &Params) -> Option<f64> {
    p.c.or(space.declared_c)
}

fn declared_beta(space: &PmSpace, p: &Params) -> Option<f64> {
    p.beta.or(space.declared_beta)
}

fn origin(space: &PmSpace) -> Vector {
    Vector::zeros(space.dim)
}

fn first_axis(space: &PmSpace) -> Vector {
    Vector::axis(space.dim, 0, 1.0)
}

fn default_ball(space: &PmSpace) -> Ball {
    Ball {
        center: origin(space),
        level: 0.5,
        scale: 1.0,
    }
}

pub fn check_axioms_op(rec: &mut Records, space: &PmSpace, b: &SampleBudget) -> OpResult {
    let report = check_axioms(space, b);
    for (name, r) in report.named() {
        rec.report(name, Ok(r.clone()), None)?;
    }
    Ok(())
}

pub fn check_delta2_op(
    rec: &mut Records,
    space: &PmSpace,
    p: &Params,
    b: &SampleBudget,
) -> OpResult {
    match declared_c(space, p) {
        Some(c) if p.candidates.is_none() => {
            rec.report("delta2", check_delta2(space, c, b), Some(json!({ "c": c })))
        }
        _ => {
            let candidates = p
                .candidates
                .clone()
                .unwrap_or_else(default_delta2_candidates);
            match find_delta2_constant(space, b, &candidates) {
                Ok(Some(c)) => {
                    rec.value("find_delta2_constant", Verdict::Pass, json!({ "c": c }));
                    Ok(())
                }
                Ok(None) => {
                    rec.value("find_delta2_constant", Verdict::Fail, json!({ "c": null }));
                    Ok(())
                }
                Err(e) => rec.error("find_delta2_constant", e),
            }
        }
    }
}

pub fn check_homogeneous_op(
    rec: &mut Records,
    space: &PmSpace,
    p: &Params,
    b: &SampleBudget,
) -> OpResult {
    let beta = declared_beta(space, p).unwrap_or(1.0);
    rec.report(
        "beta_homogeneous",
        check_beta_homogeneous(space, beta, b),
        Some(json!({ "beta": beta })),
    )
}

pub fn check_upsilon_op(
    rec: &mut Records,
    space: &PmSpace,
    p: &Params,
    b: &SampleBudget,
) -> OpResult {
    let report = match &p.points {
        Some(points) => check_upsilon_at(space, points, b),
        None => Ok(check_upsilon_space(space, b)),
    };
    rec.report("upsilon", report, None)
}

pub fn ball_identities_op(
    rec: &mut Records,
    space: &PmSpace,
    p: &Params,
    b: &SampleBudget,
) -> OpResult {
    let x = p.x.clone().unwrap_or_else(|| origin(space));
    let level = p.level.unwrap_or(0.5);
    let level2 = p.level2.unwrap_or(0.5 * (level + 1.0));
    let scale = p.scale.unwrap_or(1.0);
    let scale2 = p.scale2.unwrap_or(2.0 * scale);
    let params =
        json!({ "x": x, "level": level, "level2": level2, "scale": scale, "scale2": scale2 });
    rec.report(
        "ball_translate",
        translate_identity(space, &x, level, scale, b),
        Some(params.clone()),
    )?;
    rec.report(
        "ball_monotone_scale",
        monotone_in_scale(space, level, scale, scale2, b),
        Some(params.clone()),
    )?;
    rec.report(
        "ball_monotone_level",
        monotone_in_level(space, level, level2, scale, b),
        Some(params.clone()),
    )?;
    let ball = Ball::at_origin(space.dim, level, scale).map_err(|e| e.to_string())?;
    match declared_beta(space, p) {
        Some(beta) => {
            let with_beta = json!({ "beta": beta, "level": level, "scale": scale });
            rec.report(
                "ball_scaling",
                scaling_identity(space, beta, level, scale, b),
                Some(with_beta.clone()),
            )?;
            rec.report(
                "ball_balanced",
                is_balanced_sampled(space, &ball, b),
                Some(with_beta.clone()),
            )?;
            rec.report(
                "ball_convex",
                is_convex_sampled(space, &ball, b),
                Some(with_beta),
            )?;
        }
        None => {
            for check in ["ball_scaling", "ball_balanced", "ball_convex"] {
                rec.infeasible(check, "no homogeneity exponent declared".into());
            }
        }
    }
    Ok(())
}

pub fn witness_refine_op(
    rec: &mut Records,
    space: &PmSpace,
    p: &Params,
    b: &SampleBudget,
) -> OpResult {
    let outer = p.outer.clone().unwrap_or_else(|| default_ball(space));
    let z = p.point.clone().unwrap_or_else(|| outer.center.clone());
    match declared_c(space, p) {
        Some(c) => {
            rec.witness("refine_ball", refine_ball(space, c, &outer, &z, b))?;
            if let Some(second) = &p.second {
                rec.witness(
                    "basis_intersection",
                    basis_intersection(space, c, &outer, second, &z, b),
                )?;
            }
        }
        None => rec.infeasible("refine_ball", "no Delta2 constant declared".into()),
    }
    rec.witness("local_base", local_base_containment(space, &outer, b))
}

pub fn witness_separate_op(
    rec: &mut Records,
    space: &PmSpace,
    p: &Params,
    b: &SampleBudget,
) -> OpResult {
    let x = p.x.clone().unwrap_or_else(|| origin(space));
    let y = p.y.clone().unwrap_or_else(|| first_axis(space));
    match declared_c(space, p) {
        Some(c) => rec.witness("separation", separation_witness(space, c, &x, &y, b))?,
        None => rec.infeasible("separation", "no Delta2 constant declared".into()),
    }
    let point = p.point.clone().unwrap_or_else(|| y.clone());
    match declared_beta(space, p) {
        Some(beta) => rec.witness(
            "homogeneous_separation",
            homogeneous_separation_witness(space, beta, &point, b),
        ),
        None => {
            rec.infeasible(
                "homogeneous_separation",
                "no homogeneity exponent declared".into(),
            );
            Ok(())
        }
    }
}

pub fn witness_continuity_op(
    rec: &mut Records,
    space: &PmSpace,
    p: &Params,
    b: &SampleBudget,
) -> OpResult {
    let target = p.target.clone().unwrap_or_else(|| default_ball(space));
    let lambda = p.lambda.unwrap_or(2.0);
    match declared_beta(space, p) {
        Some(beta) => {
            rec.witness(
                "addition_continuity",
                addition_continuity_witness(space, beta, &target, b),
            )?;
            rec.witness(
                "scalar_continuity",
                scalar_continuity_witness(space, beta, &target, lambda, b),
            )
        }
        None => {
            for check in ["addition_continuity", "scalar_continuity"] {
                rec.infeasible(check, "no homogeneity exponent declared".into());
            }
            Ok(())
        }
    }
}

pub fn check_convergence_op(
    rec: &mut Records,
    space: &PmSpace,
    p: &Params,
    b: &SampleBudget,
) -> OpResult {
    let seq = p.sequence.clone().unwrap_or_else(|| SequenceSpec {
        kind: SequenceKind::Harmonic,
        base: origin(space),
        direction: first_axis(space),
        candidate_limit: origin(space),
    });
    let n_max = p.n_max.unwrap_or(DEFAULT_N_MAX);
    let k_max = p.k_max.unwrap_or(DEFAULT_LOCAL_BASE_K);
    let eps = p.eps_conv.unwrap_or(EPSILON_CONV);
    let mu = match check_mu_convergence(space, &seq, &b.t_grid, eps, n_max) {
        Ok(v) => v,
        Err(e) => return rec.error("mu_convergence", e),
    };
    let balls = local_base(&seq.candidate_limit, k_max);
    let topo = match check_topological_convergence(space, &seq, &balls, n_max) {
        Ok(v) => v,
        Err(e) => return rec.error("topological_convergence", e),
    };
    let expected = |converges: bool| match p.expect_converges {
        Some(want) if want != converges => Verdict::Fail,
        _ => Verdict::Pass,
    };
    rec.value("mu_convergence", expected(mu.converges), to_value(&mu)?);
    rec.value(
        "topological_convergence",
        expected(topo.converges),
        to_value(&topo)?,
    );
    let agree = if mu.converges == topo.converges {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    rec.value(
        "convergence_equivalence",
        agree,
        json!({ "mu": mu.converges, "topological": topo.converges }),
    );
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, String> {
    serde_json::to_value(v).map_err(|e| e.to_string())
}

/// Registry runs over explicit or generated instances. Without an instance,
/// `runs` seeds starting at the budget seed are generated for each family.
pub fn falsify_op(rec: &mut Records, config: &Config, b: &SampleBudget) -> OpResult {
    let p = &config.params;
    let runs = p.runs.unwrap_or(1);
    let mut jobs: Vec<(PmSpace, SampleBudget)> = Vec::new();
    for k in 0..runs {
        let seed = b.rng_seed.wrapping_add(k);
        let budget = b.clone().with_seed(seed);
        match &config.instance {
            Some(space) => jobs.push((space.clone(), budget)),
            None => {
                let families = match p.family {
                    Some(f) => vec![f],
                    None => vec![Family::RationalFrom, Family::StepFrom],
                };
                for family in families {
                    jobs.push((generate_instance(seed, family, p.mutation), budget.clone()));
                }
            }
        }
    }
    let runs: Vec<_> = jobs.par_iter().map(|(s, bb)| run_registry(s, bb)).collect();
    for run in runs {
        let mut r = rec.base("registry", run.verdict());
        r.seed = run.seed;
        r.budget = run.budget;
        r.instance = Some(run.instance);
        r.predicates = Some(run.results);
        rec.out.push(r);
    }
    Ok(())
}
