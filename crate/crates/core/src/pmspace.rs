//! Concrete probabilistic modular spaces over `R^n` and sampled checks of
//! their defining axioms and auxiliary conditions.
//!
//! Two reference families are built from a classical modular `rho`:
//! `rational_from(rho)` with `mu_x = rational(rho(x))` and `step_from(rho)`
//! with `mu_x = step(rho(x))`. A [`MutationKind`] replaces the formula by a
//! deliberately broken one so the falsifier can measure detection power.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::budget::{
    convex_weights, gaussian_vector, run_sampled, signed_log_uniform, streams, SampleBudget,
};
use crate::distfn::{check_upsilon, DistributionFunction};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Violation};
use crate::vector::{check_dim, Vector};

pub const MAX_DIM: usize = 8;

/// Scales used for the axis probes of the PM2 check.
const AXIS_PROBE_SCALES: [f64; 3] = [1e-2, 1.0, 1e2];
/// Smallest argument tried when searching for `mu_x(t) < 1`.
const PM2_SEARCH_FLOOR: f64 = 1e-300;
/// Share of PM4 draws that use `y = 0`.
const PM4_ZERO_Y_EVERY: usize = 4;
const PM4_ZERO_T_PROB: f64 = 1.0 / 16.0;

/// A classical modular `rho` on `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassicalModular {
    /// `sum |x_i|^p`, `p >= 1`.
    PPower { p: f64 },
    /// `sum w_i |x_i|`, `w_i > 0`.
    WeightedAbs { weights: Vec<f64> },
}

impl ClassicalModular {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            ClassicalModular::PPower { p } => {
                if !(*p >= 1.0 && p.is_finite()) {
                    return Err(Error::invalid(format!("p_power needs p >= 1, got {p}")));
                }
            }
            ClassicalModular::WeightedAbs { weights } => {
                if weights.len() != dim {
                    return Err(Error::invalid(format!(
                        "weighted_abs needs {dim} weights, got {}",
                        weights.len()
                    )));
                }
                if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
                    return Err(Error::invalid("weighted_abs weights must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Contribution of coordinate `i` with value `xi`.
    pub fn term(&self, i: usize, xi: f64) -> f64 {
        match self {
            ClassicalModular::PPower { p } => abs_pow(xi, *p),
            ClassicalModular::WeightedAbs { weights } => weights[i] * xi.abs(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter().enumerate().map(|(i, &xi)| self.term(i, xi)).sum()
    }

    /// Smallest `c` with `rho(2x) <= c rho(x)`, which is the Delta2 constant of
    /// both reference families.
    pub fn delta2_constant(&self) -> f64 {
        match self {
            ClassicalModular::PPower { p } => p.exp2(),
            ClassicalModular::WeightedAbs { .. } => 2.0,
        }
    }

    /// Exponent `d` with `rho(a x) = |a|^d rho(x)`.
    pub fn scaling_degree(&self) -> f64 {
        match self {
            ClassicalModular::PPower { p } => *p,
            ClassicalModular::WeightedAbs { .. } => 1.0,
        }
    }
}

fn abs_pow(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RationalFrom,
    StepFrom,
}

/// Structural breakages of the modular map, each aimed at one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    /// `mu_x(0) = 0.1` for `x != 0`.
    BreakPm1,
    /// The first coordinate is ignored, so nonzero multiples of `e_1` get
    /// `mu = 1` on `t > 0`.
    BreakPm2,
    /// The first coordinate's contribution doubles on the half-space `x_1 < 0`.
    BreakPm3,
    /// `mu_x` is built from `rho e^{-rho}`, which decreases along rays.
    BreakPm4,
    /// Right-continuous step `1_{t >= rho(x)}`.
    BreakLeftContinuity,
    /// The declared Delta2 constant sits strictly below the true one.
    BreakDelta2Declaration,
}

impl MutationKind {
    pub const ALL: [MutationKind; 6] = [
        MutationKind::BreakPm1,
        MutationKind::BreakPm2,
        MutationKind::BreakPm3,
        MutationKind::BreakPm4,
        MutationKind::BreakLeftContinuity,
        MutationKind::BreakDelta2Declaration,
    ];

    /// Registry predicate that must fail on an instance carrying this mutation.
    pub fn target_predicate(self) -> &'static str {
        match self {
            MutationKind::BreakPm1 => "pm1",
            MutationKind::BreakPm2 => "pm2",
            MutationKind::BreakPm3 => "pm3",
            MutationKind::BreakPm4 => "pm4",
            MutationKind::BreakLeftContinuity => "lemma1",
            MutationKind::BreakDelta2Declaration => "delta2",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MutationKind::BreakPm1 => "break_pm1",
            MutationKind::BreakPm2 => "break_pm2",
            MutationKind::BreakPm3 => "break_pm3",
            MutationKind::BreakPm4 => "break_pm4",
            MutationKind::BreakLeftContinuity => "break_left_continuity",
            MutationKind::BreakDelta2Declaration => "break_delta2_declaration",
        }
    }
}

/// A probabilistic modular space on `R^dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmSpace {
    pub dim: usize,
    pub family: Family,
    pub modular: ClassicalModular,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation: Option<MutationKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_beta: Option<f64>,
}

impl PmSpace {
    pub fn new(dim: usize, family: Family, modular: ClassicalModular) -> Result<Self> {
        let space = PmSpace {
            dim,
            family,
            modular,
            mutation: None,
            declared_c: None,
            declared_beta: None,
        };
        space.validate()?;
        Ok(space)
    }

    pub fn rational_from(dim: usize, modular: ClassicalModular) -> Result<Self> {
        Self::new(dim, Family::RationalFrom, modular)
    }

    pub fn step_from(dim: usize, modular: ClassicalModular) -> Result<Self> {
        Self::new(dim, Family::StepFrom, modular)
    }

    pub fn with_declared_c(mut self, c: f64) -> Result<Self> {
        self.declared_c = Some(c);
        self.validate()?;
        Ok(self)
    }

    pub fn with_declared_beta(mut self, beta: f64) -> Result<Self> {
        self.declared_beta = Some(beta);
        self.validate()?;
        Ok(self)
    }

    pub fn with_mutation(mut self, mutation: MutationKind) -> Self {
        self.mutation = Some(mutation);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(Error::invalid(format!(
                "dimension must be in 1..={MAX_DIM}, got {}",
                self.dim
            )));
        }
        self.modular.validate(self.dim)?;
        if let Some(c) = self.declared_c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::invalid(format!(
                    "declared c must be positive, got {c}"
                )));
            }
        }
        if let Some(beta) = self.declared_beta {
            validate_beta(beta)?;
        }
        Ok(())
    }

    /// The value fed to the family's distribution kind.
    fn gauge(&self, x: &[f64]) -> f64 {
        let rho = self.modular.eval(x);
        match self.mutation {
            Some(MutationKind::BreakPm2) => rho - self.modular.term(0, x[0]),
            Some(MutationKind::BreakPm3) if x[0] < 0.0 => rho + self.modular.term(0, x[0]),
            Some(MutationKind::BreakPm4) => rho * (-rho).exp(),
            _ => rho,
        }
    }

    pub(crate) fn mu_raw(&self, x: &[f64]) -> DistributionFunction {
        if x.iter().all(|&c| c == 0.0) {
            return match self.family {
                Family::RationalFrom => DistributionFunction::Rational { r: 0.0 },
                Family::StepFrom => DistributionFunction::Step { threshold: 0.0 },
            };
        }
        let g = self.gauge(x).max(0.0);
        match (self.mutation, self.family) {
            (Some(MutationKind::BreakPm1), Family::RationalFrom) => {
                DistributionFunction::PiecewiseLinear {
                    breakpoints: vec![(0.0, 0.1), (2.0 * g, 1.0)],
                }
            }
            (Some(MutationKind::BreakPm1), Family::StepFrom) => {
                DistributionFunction::PiecewiseLinear {
                    breakpoints: vec![(0.0, 0.1), (g, 0.1), (2.0 * g, 1.0)],
                }
            }
            (Some(MutationKind::BreakLeftContinuity), _) => {
                DistributionFunction::StepClosed { threshold: g }
            }
            (_, Family::RationalFrom) => DistributionFunction::Rational { r: g },
            (_, Family::StepFrom) => DistributionFunction::Step { threshold: g },
        }
    }

    /// `mu_x`.
    pub fn mu(&self, x: &Vector) -> Result<DistributionFunction> {
        check_dim(self.dim, x)?;
        Ok(self.mu_raw(x.coords()))
    }

    /// `mu_x(t)` without the dimension check.
    pub(crate) fn mu_at(&self, x: &Vector, t: f64) -> f64 {
        self.mu_raw(x.coords()).eval(t)
    }

    pub(crate) fn sample_vector<R: Rng>(&self, rng: &mut R, budget: &SampleBudget) -> Vector {
        gaussian_vector(rng, self.dim, budget.vector_scale)
    }

    fn axis_probes(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for s in AXIS_PROBE_SCALES {
                out.push(Vector::axis(self.dim, i, s));
                out.push(Vector::axis(self.dim, i, -s));
            }
        }
        out
    }
}

pub(crate) fn validate_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::invalid(format!(
            "beta must lie in (0, 1], got {beta}"
        )));
    }
    Ok(())
}

/// Per-axiom breakdown of [`check_axioms`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomReport {
    pub pm1: CheckReport,
    pub pm2: CheckReport,
    pub pm3: CheckReport,
    pub pm4: CheckReport,
}

impl AxiomReport {
    pub fn overall(&self) -> CheckReport {
        let mut r = self.pm1.clone();
        r.merge(self.pm2.clone());
        r.merge(self.pm3.clone());
        r.merge(self.pm4.clone());
        r
    }

    pub fn passed(&self) -> bool {
        self.pm1.passed && self.pm2.passed && self.pm3.passed && self.pm4.passed
    }

    pub fn named(&self) -> [(&'static str, &CheckReport); 4] {
        [
            ("pm1", &self.pm1),
            ("pm2", &self.pm2),
            ("pm3", &self.pm3),
            ("pm4", &self.pm4),
        ]
    }
}

pub fn check_axioms(space: &PmSpace, budget: &SampleBudget) -> AxiomReport {
    AxiomReport {
        pm1: check_pm1(space, budget),
        pm2: check_pm2(space, budget),
        pm3: check_pm3(space, budget),
        pm4: check_pm4(space, budget),
    }
}

fn sample_or_zero<R: Rng>(space: &PmSpace, rng: &mut R, i: usize, budget: &SampleBudget) -> Vector {
    if i == 0 {
        Vector::zeros(space.dim)
    } else {
        space.sample_vector(rng, budget)
    }
}

/// `mu_x(0) = 0`.
fn check_pm1(space: &PmSpace, budget: &SampleBudget) -> CheckReport {
    let eps = budget.epsilon;
    run_sampled(
        budget.rng_seed,
        streams::PM1,
        budget.n_vectors,
        |rng, i, rep| {
            let x = sample_or_zero(space, rng, i, budget);
            let v = space.mu_at(&x, 0.0);
            if v.abs() > eps {
                rep.record(Violation::new("pm1", v, 0.0).input("x", x.coords()));
            }
        },
    )
}

/// `mu_x(t) = 1` for all `t > 0` iff `x = 0`.
fn check_pm2(space: &PmSpace, budget: &SampleBudget) -> CheckReport {
    let eps = budget.epsilon;
    let nonzero_reaches_below_one = |x: &Vector, rep: &mut CheckReport| {
        let f = space.mu_raw(x.coords());
        if budget.t_grid.iter().any(|&t| f.eval(t) < 1.0 - eps) {
            return;
        }
        let mut t = budget.t_min();
        while t >= PM2_SEARCH_FLOOR {
            if f.eval(t) < 1.0 - eps {
                return;
            }
            t /= 10.0;
        }
        rep.record(
            Violation::new("pm2_nonzero_is_one", f.eval(budget.t_min()), 1.0 - eps)
                .input("x", x.coords()),
        );
    };

    let mut report = run_sampled(
        budget.rng_seed,
        streams::PM2,
        budget.n_vectors,
        |rng, i, rep| {
            if i == 0 {
                let zero = Vector::zeros(space.dim);
                let f = space.mu_raw(zero.coords());
                for &t in &budget.t_grid {
                    let v = f.eval(t);
                    if v != 1.0 {
                        rep.record(Violation::new("pm2_zero", v, 1.0).scalar("t", t));
                        break;
                    }
                }
                return;
            }
            let x = space.sample_vector(rng, budget);
            if !x.is_zero() {
                nonzero_reaches_below_one(&x, rep);
            }
        },
    );
    for x in space.axis_probes() {
        report.samples_run += 1;
        nonzero_reaches_below_one(&x, &mut report);
    }
    report
}

/// `mu_{-x} = mu_x`.
fn check_pm3(space: &PmSpace, budget: &SampleBudget) -> CheckReport {
    let eps = budget.epsilon;
    run_sampled(
        budget.rng_seed,
        streams::PM3,
        budget.n_vectors,
        |rng, _, rep| {
            let x = space.sample_vector(rng, budget);
            let f = space.mu_raw(x.coords());
            let g = space.mu_raw(x.neg().coords());
            for &t in &budget.t_grid {
                let (a, b) = (g.eval(t), f.eval(t));
                if (a - b).abs() > eps {
                    rep.record(
                        Violation::new("pm3", a, b)
                            .input("x", x.coords())
                            .scalar("t", t),
                    );
                    break;
                }
            }
        },
    )
}

/// `mu_{ax+by}(s+t) >= mu_x(s) ^ mu_y(t)` for convex weights `a, b`.
fn check_pm4(space: &PmSpace, budget: &SampleBudget) -> CheckReport {
    let eps = budget.epsilon;
    run_sampled(
        budget.rng_seed,
        streams::PM4,
        budget.n_vectors,
        |rng, i, rep| {
            let x = space.sample_vector(rng, budget);
            let y = if i % PM4_ZERO_Y_EVERY == PM4_ZERO_Y_EVERY - 1 {
                Vector::zeros(space.dim)
            } else {
                space.sample_vector(rng, budget)
            };
            let fx = space.mu_raw(x.coords());
            let fy = space.mu_raw(y.coords());
            for _ in 0..budget.n_scalar_pairs {
                let (a, b) = convex_weights(rng);
                let s = budget.grid_or_zero(rng, PM4_ZERO_T_PROB);
                let t = budget.grid_or_zero(rng, PM4_ZERO_T_PROB);
                let combo = x.combine(a, &y, b);
                let lhs = space.mu_at(&combo, s + t);
                let rhs = fx.eval(s).min(fy.eval(t));
                if lhs < rhs - eps {
                    rep.record(
                        Violation::new("pm4", lhs, rhs)
                            .input("x", x.coords())
                            .input("y", y.coords())
                            .scalar("a", a)
                            .scalar("b", b)
                            .scalar("s", s)
                            .scalar("t", t),
                    );
                    break;
                }
            }
        },
    )
}

/// `mu_{2x}(t) >= mu_x(t / c)` on sampled `x` and every grid `t`.
pub fn check_delta2(space: &PmSpace, c: f64, budget: &SampleBudget) -> Result<CheckReport> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!(
            "Delta2 constant must be positive, got {c}"
        )));
    }
    let eps = budget.epsilon;
    Ok(run_sampled(
        budget.rng_seed,
        streams::DELTA2,
        budget.n_vectors,
        |rng, i, rep| {
            let x = sample_or_zero(space, rng, i, budget);
            let f = space.mu_raw(x.coords());
            let f2 = space.mu_raw(x.scale(2.0).coords());
            for &t in &budget.t_grid {
                let (lhs, rhs) = (f2.eval(t), f.eval(t / c));
                if lhs < rhs - eps {
                    rep.record(
                        Violation::new("delta2", lhs, rhs)
                            .input("x", x.coords())
                            .scalar("t", t)
                            .scalar("c", c),
                    );
                    break;
                }
            }
        },
    ))
}

/// Candidates `2^(k/4)`, `k = 0..=16`.
pub fn default_delta2_candidates() -> Vec<f64> {
    (0..=16).map(|k| (k as f64 / 4.0).exp2()).collect()
}

/// Smallest candidate passing [`check_delta2`], if any.
pub fn find_delta2_constant(
    space: &PmSpace,
    budget: &SampleBudget,
    candidates: &[f64],
) -> Result<Option<f64>> {
    if candidates.is_empty() {
        return Err(Error::invalid("Delta2 candidate list is empty"));
    }
    let mut sorted = candidates.to_vec();
    sorted.sort_by(f64::total_cmp);
    for c in sorted {
        if check_delta2(space, c, budget)?.passed {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// `mu_{ax}(t) = mu_x(t / |a|^beta)` for sampled `x`, nonzero `a` and grid `t`.
pub fn check_beta_homogeneous(
    space: &PmSpace,
    beta: f64,
    budget: &SampleBudget,
) -> Result<CheckReport> {
    validate_beta(beta)?;
    let eps = budget.epsilon;
    Ok(run_sampled(
        budget.rng_seed,
        streams::HOMOGENEOUS,
        budget.n_vectors,
        |rng, _, rep| {
            let x = space.sample_vector(rng, budget);
            let f = space.mu_raw(x.coords());
            for _ in 0..budget.n_scalar_pairs {
                let a = signed_log_uniform(rng);
                let fa = space.mu_raw(x.scale(a).coords());
                let k = a.abs().powf(beta);
                for &t in &budget.t_grid {
                    let (lhs, rhs) = (fa.eval(t), f.eval(t / k));
                    if (lhs - rhs).abs() > eps {
                        rep.record(
                            Violation::new("beta_homogeneous", lhs, rhs)
                                .input("x", x.coords())
                                .scalar("a", a)
                                .scalar("t", t)
                                .scalar("beta", beta),
                        );
                        return;
                    }
                }
            }
        },
    ))
}

/// Applies [`check_upsilon`] to `mu_x` for `budget.n_functions` sampled
/// nonzero `x`.
pub fn check_upsilon_space(space: &PmSpace, budget: &SampleBudget) -> CheckReport {
    run_sampled(
        budget.rng_seed,
        streams::UPSILON,
        budget.n_functions,
        |rng, _, rep| {
            let x = space.sample_vector(rng, budget);
            upsilon_one(space, &x, budget, rep);
        },
    )
}

/// [`check_upsilon`] over explicit vectors; zero vectors are skipped and a
/// vacuous pass is flagged.
pub fn check_upsilon_at(
    space: &PmSpace,
    xs: &[Vector],
    budget: &SampleBudget,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(budget.rng_seed);
    let mut nonzero = 0usize;
    for x in xs {
        check_dim(space.dim, x)?;
        report.samples_run += 1;
        if x.is_zero() {
            continue;
        }
        nonzero += 1;
        upsilon_one(space, x, budget, &mut report);
    }
    if nonzero == 0 {
        report.note("vacuous: no nonzero samples");
    }
    Ok(report)
}

fn upsilon_one(space: &PmSpace, x: &Vector, budget: &SampleBudget, rep: &mut CheckReport) {
    let sub = check_upsilon(&space.mu_raw(x.coords()), budget);
    for mut v in sub.violations {
        v.inputs.insert("x".into(), x.coords().to_vec());
        rep.record(v);
    }
    if sub.violation_count > 0 && rep.violation_count == 0 {
        rep.passed = false;
    }
    for n in sub.notes {
        rep.note(n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(p: f64) -> ClassicalModular {
        ClassicalModular::PPower { p }
    }

    fn small() -> SampleBudget {
        SampleBudget::default().with_vectors(2000)
    }

    #[test]
    fn mu_examples() {
        let s = PmSpace::rational_from(1, p(1.0)).unwrap();
        let f = s.mu(&Vector::new(vec![1.0]).unwrap()).unwrap();
        assert_eq!(f, DistributionFunction::Rational { r: 1.0 });
        assert_eq!(f.eval(1.0), 0.5);
        let zero = s.mu(&Vector::zeros(1)).unwrap();
        assert!(s.clone().mu(&Vector::zeros(1)).is_ok());
        for t in [1e-9, 1.0, 1e9] {
            assert_eq!(zero.eval(t), 1.0);
        }
        let st = PmSpace::step_from(1, p(1.0)).unwrap();
        assert_eq!(
            st.mu(&Vector::new(vec![2.0]).unwrap()).unwrap().eval(3.0),
            1.0
        );
        assert!(matches!(
            s.mu(&Vector::zeros(2)),
            Err(Error::DimensionMismatch {
                expected: 1,
                got: 2
            })
        ));
    }

    #[test]
    fn construction_validates() {
        assert!(PmSpace::rational_from(0, p(1.0)).is_err());
        assert!(PmSpace::rational_from(9, p(1.0)).is_err());
        assert!(PmSpace::rational_from(2, p(0.5)).is_err());
        assert!(
            PmSpace::rational_from(2, ClassicalModular::WeightedAbs { weights: vec![1.0] })
                .is_err()
        );
        let s = PmSpace::rational_from(1, p(1.0)).unwrap();
        assert!(s.clone().with_declared_beta(1.5).is_err());
        assert!(s.with_declared_c(-1.0).is_err());
    }

    #[test]
    fn reference_families_pass_axioms() {
        let b = small();
        let r = PmSpace::rational_from(2, p(2.0)).unwrap();
        assert!(check_axioms(&r, &b).passed());
        let s =
            PmSpace::step_from(1, ClassicalModular::WeightedAbs { weights: vec![1.0] }).unwrap();
        assert!(check_axioms(&s, &b).passed());
    }

    #[test]
    fn mutated_symmetry_fails_only_pm3() {
        let s = PmSpace::rational_from(2, p(1.0))
            .unwrap()
            .with_mutation(MutationKind::BreakPm3);
        let r = check_axioms(&s, &small());
        assert!(r.pm1.passed && r.pm2.passed && r.pm4.passed);
        assert!(!r.pm3.passed);
    }

    #[test]
    fn delta2_examples() {
        let b = small();
        let r1 = PmSpace::rational_from(1, p(1.0)).unwrap();
        assert_eq!(
            find_delta2_constant(&r1, &b, &[1.0, 1.5, 2.0, 4.0]).unwrap(),
            Some(2.0)
        );
        let s1 = PmSpace::step_from(1, p(1.0)).unwrap();
        assert_eq!(
            find_delta2_constant(&s1, &b, &[1.0, 2.0, 4.0]).unwrap(),
            Some(2.0)
        );
        let r2 = PmSpace::rational_from(1, p(2.0)).unwrap();
        assert_eq!(
            find_delta2_constant(&r2, &b, &[2.0, 4.0, 8.0]).unwrap(),
            Some(4.0)
        );
        assert_eq!(find_delta2_constant(&r2, &b, &[1.0, 2.0]).unwrap(), None);
        assert!(find_delta2_constant(&r2, &b, &[]).is_err());
    }

    #[test]
    fn homogeneity_examples() {
        let b = small();
        let w = PmSpace::rational_from(1, ClassicalModular::WeightedAbs { weights: vec![1.0] })
            .unwrap();
        assert!(check_beta_homogeneous(&w, 1.0, &b).unwrap().passed);
        let sq = PmSpace::rational_from(1, p(2.0)).unwrap();
        assert!(!check_beta_homogeneous(&sq, 1.0, &b).unwrap().passed);
        assert!(check_beta_homogeneous(&sq, 0.0, &b).is_err());
    }

    #[test]
    fn upsilon_space_examples() {
        let b = SampleBudget::default();
        let r = PmSpace::rational_from(1, p(1.0)).unwrap();
        assert!(check_upsilon_space(&r, &b).passed);
        let s = PmSpace::step_from(1, p(1.0)).unwrap();
        assert!(!check_upsilon_space(&s, &b).passed);
        let zeros = vec![Vector::zeros(1); 3];
        let v = check_upsilon_at(&s, &zeros, &b).unwrap();
        assert!(v.passed);
        assert!(v.notes.iter().any(|n| n.contains("vacuous")));
    }

    #[test]
    fn default_candidates_bracket_reference_constants() {
        let c = default_delta2_candidates();
        assert_eq!(c.len(), 17);
        assert_eq!(c[0], 1.0);
        assert!(c.contains(&2.0));
        assert!(c.contains(&4.0));
        assert_eq!(c[16], 16.0);
    }
}
