//! Probabilistic modular spaces at desk scale.
//!
//! A probabilistic modular space pairs a real vector space with a map
//! `x -> mu_x` into non-decreasing distribution functions. This crate provides
//! concrete instances over `R^n`, sampled checkers for the axioms and the
//! auxiliary conditions (Delta2, beta-homogeneity, strict monotonicity with
//! continuity), executable witness constructions for the neighborhood-basis,
//! separation and continuity results, a sequence-convergence decider, and a
//! falsifier that runs every check against valid and mutated instances.

// `!(a > b)` is used on purpose so that NaN lands on the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balls;
pub mod budget;
pub mod convergence;
pub mod distfn;
pub mod error;
pub mod falsifier;
pub mod pmspace;
pub mod report;
pub mod topology;
pub mod vector;

pub use balls::Ball;
pub use budget::{SampleBudget, EPSILON, EPSILON_STRICT};
pub use convergence::{ConvergenceVerdict, SequenceKind, SequenceSpec, TopologicalVerdict};
pub use distfn::DistributionFunction;
pub use error::{Error, Result};
pub use falsifier::{FalsifierRun, PredicateResult};
pub use pmspace::{AxiomReport, ClassicalModular, Family, MutationKind, PmSpace};
pub use report::{exit_code, CheckReport, ReportRecord, Verdict, Violation};
pub use topology::{
    ContinuityWitness, IntersectionWitness, LocalBaseWitness, RefinementWitness, SeparationWitness,
    WitnessReport,
};
pub use vector::Vector;
