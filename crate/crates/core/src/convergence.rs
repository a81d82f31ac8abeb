//! Sequence convergence in `tau_mu`, decided two ways: through the gap
//! `1 - mu_{x_n - x}(t)` at every grid `t`, and through membership in the
//! local base `B(x, 1/k, 1/k)`.
//!
//! Both deciders probe `n` on the schedule `1, 2, 4, ...` up to `n_max`
//! (with `n_max` itself always probed) and require the property to hold on
//! every probe from some `n0` on.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::balls::{contains_raw, Ball};
use crate::error::{Error, Result};
use crate::pmspace::PmSpace;
use crate::vector::{check_dim, Vector};

pub const DEFAULT_N_MAX: u64 = 1 << 40;
pub const EPSILON_CONV: f64 = 1e-6;
pub const DEFAULT_LOCAL_BASE_K: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceKind {
    /// `x + v / n`
    Harmonic,
    /// `x + v`
    ConstantOffset,
    /// `x + (-1)^n v`
    Alternating,
    /// `x + v q^n`, `0 < q < 1`
    Geometric { q: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub kind: SequenceKind,
    pub base: Vector,
    pub direction: Vector,
    pub candidate_limit: Vector,
}

impl SequenceSpec {
    pub fn new(
        kind: SequenceKind,
        base: Vector,
        direction: Vector,
        candidate_limit: Vector,
    ) -> Result<Self> {
        let s = SequenceSpec {
            kind,
            base,
            direction,
            candidate_limit,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.base.dim();
        check_dim(d, &self.direction)?;
        check_dim(d, &self.candidate_limit)?;
        if let SequenceKind::Geometric { q } = self.kind {
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::invalid(format!(
                    "geometric ratio must lie in (0, 1), got {q}"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Coefficient of `v` in `x_n`.
    fn coefficient(&self, n: u64) -> f64 {
        match self.kind {
            SequenceKind::Harmonic => 1.0 / n as f64,
            SequenceKind::ConstantOffset => 1.0,
            SequenceKind::Alternating => {
                if n.is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }
            SequenceKind::Geometric { q } => q.powf(n as f64),
        }
    }

    pub fn term(&self, n: u64) -> Vector {
        self.base.combine(1.0, &self.direction, self.coefficient(n))
    }
}

/// `1, 2, 4, ... <= n_max`, then `n_max`.
pub fn probe_schedule(n_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = 1u64;
    while n < n_max {
        out.push(n);
        n = n.saturating_mul(2);
    }
    out.push(n_max);
    out
}

/// Least probe from which `ok` holds on every later probe.
fn settled_from(probes: &[u64], ok: impl Fn(u64) -> bool) -> Option<u64> {
    let mut n0 = None;
    for &n in probes.iter().rev() {
        if ok(n) {
            n0 = Some(n);
        } else {
            break;
        }
    }
    n0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TEvidence {
    pub t: f64,
    pub n0: Option<u64>,
    pub final_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceVerdict {
    pub converges: bool,
    pub per_t_evidence: Vec<TEvidence>,
    pub n_used: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologicalVerdict {
    pub converges: bool,
    pub vacuous: bool,
    pub per_ball_n0: Vec<Option<u64>>,
}

fn check_inputs(space: &PmSpace, seq: &SequenceSpec, n_max: u64) -> Result<()> {
    seq.validate()?;
    check_dim(space.dim, &seq.base)?;
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    Ok(())
}

/// `mu_{x_n - x}(t) -> 1` at every grid `t`, with tolerance `eps_conv`.
pub fn check_mu_convergence(
    space: &PmSpace,
    seq: &SequenceSpec,
    t_grid: &[f64],
    eps_conv: f64,
    n_max: u64,
) -> Result<ConvergenceVerdict> {
    check_inputs(space, seq, n_max)?;
    if t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::invalid("t grid must be positive"));
    }
    let probes = probe_schedule(n_max);
    let fs: Vec<_> = probes
        .iter()
        .map(|&n| space.mu_raw(seq.term(n).sub(&seq.candidate_limit).coords()))
        .collect();
    let per_t_evidence: Vec<TEvidence> = t_grid
        .par_iter()
        .map(|&t| {
            let gap = |k: usize| 1.0 - fs[k].eval(t);
            let idx = |n: u64| probes.binary_search(&n).unwrap_or(0);
            TEvidence {
                t,
                n0: settled_from(&probes, |n| gap(idx(n)) < eps_conv),
                final_gap: gap(probes.len() - 1),
            }
        })
        .collect();
    Ok(ConvergenceVerdict {
        converges: per_t_evidence.iter().all(|e| e.n0.is_some()),
        per_t_evidence,
        n_used: n_max,
    })
}

/// `B(x, 1/k, 1/k)` for `k = 2..=k_max`.
pub fn local_base(center: &Vector, k_max: u64) -> Vec<Ball> {
    (2..=k_max)
        .map(|k| {
            let r = 1.0 / k as f64;
            Ball {
                center: center.clone(),
                level: r,
                scale: r,
            }
        })
        .collect()
}

/// `x_n` eventually in every listed ball about the candidate limit.
pub fn check_topological_convergence(
    space: &PmSpace,
    seq: &SequenceSpec,
    balls: &[Ball],
    n_max: u64,
) -> Result<TopologicalVerdict> {
    check_inputs(space, seq, n_max)?;
    for b in balls {
        b.validate()?;
        if b.center != seq.candidate_limit {
            return Err(Error::precondition(
                "balls must be centered at the candidate limit",
            ));
        }
    }
    let probes = probe_schedule(n_max);
    let terms: Vec<Vector> = probes.iter().map(|&n| seq.term(n)).collect();
    let per_ball_n0: Vec<Option<u64>> = balls
        .iter()
        .map(|b| {
            let idx = |n: u64| probes.binary_search(&n).unwrap_or(0);
            settled_from(&probes, |n| contains_raw(space, b, &terms[idx(n)]))
        })
        .collect();
    Ok(TopologicalVerdict {
        converges: per_ball_n0.iter().all(Option::is_some),
        vacuous: balls.is_empty(),
        per_ball_n0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::SampleBudget;
    use crate::pmspace::ClassicalModular;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn r1() -> PmSpace {
        PmSpace::rational_from(1, ClassicalModular::PPower { p: 1.0 }).unwrap()
    }

    fn seq(kind: SequenceKind, dir: f64) -> SequenceSpec {
        SequenceSpec::new(kind, v(&[0.0]), v(&[dir]), v(&[0.0])).unwrap()
    }

    #[test]
    fn schedule_shape() {
        assert_eq!(probe_schedule(1), vec![1]);
        assert_eq!(probe_schedule(5), vec![1, 2, 4, 5]);
        assert_eq!(probe_schedule(8), vec![1, 2, 4, 8]);
        assert_eq!(probe_schedule(DEFAULT_N_MAX).len(), 41);
    }

    #[test]
    fn mu_criterion_examples() {
        let s = r1();
        let grid = SampleBudget::default().t_grid;
        let h = check_mu_convergence(
            &s,
            &seq(SequenceKind::Harmonic, 1.0),
            &grid,
            EPSILON_CONV,
            DEFAULT_N_MAX,
        )
        .unwrap();
        assert!(h.converges);
        let c = check_mu_convergence(
            &s,
            &seq(SequenceKind::ConstantOffset, 1.0),
            &grid,
            EPSILON_CONV,
            DEFAULT_N_MAX,
        )
        .unwrap();
        assert!(!c.converges);
        assert!(c.per_t_evidence.iter().all(|e| e.final_gap > 1e-4));
        let z = check_mu_convergence(
            &s,
            &seq(SequenceKind::Alternating, 0.0),
            &grid,
            EPSILON_CONV,
            1000,
        )
        .unwrap();
        assert!(z.converges);
        assert!(z.per_t_evidence.iter().all(|e| e.n0 == Some(1)));
    }

    #[test]
    fn harmonic_needs_a_large_horizon_at_small_t() {
        let s = r1();
        let grid = SampleBudget::default().t_grid;
        let short = check_mu_convergence(
            &s,
            &seq(SequenceKind::Harmonic, 1.0),
            &grid,
            EPSILON_CONV,
            1_000_000,
        )
        .unwrap();
        assert!(!short.converges);
    }

    #[test]
    fn topological_examples() {
        let s = r1();
        let base = local_base(&v(&[0.0]), DEFAULT_LOCAL_BASE_K);
        assert_eq!(base.len(), 9);
        let h =
            check_topological_convergence(&s, &seq(SequenceKind::Harmonic, 1.0), &base, 100_000)
                .unwrap();
        assert!(h.converges && !h.vacuous);
        let a =
            check_topological_convergence(&s, &seq(SequenceKind::Alternating, 1.0), &base, 100_000)
                .unwrap();
        assert!(!a.converges);
        let e = check_topological_convergence(&s, &seq(SequenceKind::Alternating, 1.0), &[], 100)
            .unwrap();
        assert!(e.converges && e.vacuous);
        let off = local_base(&v(&[1.0]), 3);
        assert!(
            check_topological_convergence(&s, &seq(SequenceKind::Harmonic, 1.0), &off, 10).is_err()
        );
    }

    #[test]
    fn geometric_ratio_is_validated() {
        assert!(SequenceSpec::new(
            SequenceKind::Geometric { q: 1.0 },
            v(&[0.0]),
            v(&[1.0]),
            v(&[0.0])
        )
        .is_err());
        assert!(
            SequenceSpec::new(SequenceKind::Harmonic, v(&[0.0]), v(&[1.0, 2.0]), v(&[0.0]))
                .is_err()
        );
    }

    #[test]
    fn sequence_kind_serde() {
        let s = serde_json::to_string(&SequenceKind::Geometric { q: 0.5 }).unwrap();
        assert_eq!(s, r#"{"geometric":{"q":0.5}}"#);
        assert_eq!(
            serde_json::to_string(&SequenceKind::Harmonic).unwrap(),
            r#""harmonic""#
        );
    }
}
