//! Check outcomes shared by every module.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::budget::SampleBudget;
use crate::falsifier::PredicateResult;
use crate::pmspace::PmSpace;

/// At most this many violations are stored verbatim; the rest are counted.
pub const MAX_RECORDED_VIOLATIONS: usize = 16;

/// One falsified instance of a sampled statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Violation {
    pub check: String,
    pub inputs: BTreeMap<String, Vec<f64>>,
    pub lhs: f64,
    pub rhs: f64,
}

impl Violation {
    pub fn new(check: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Violation {
            check: check.into(),
            inputs: BTreeMap::new(),
            lhs,
            rhs,
        }
    }

    pub fn input(mut self, name: &str, values: &[f64]) -> Self {
        self.inputs.insert(name.to_string(), values.to_vec());
        self
    }

    pub fn scalar(self, name: &str, value: f64) -> Self {
        self.input(name, &[value])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub passed: bool,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub samples_run: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(seed: u64) -> Self {
        CheckReport {
            passed: true,
            violation_count: 0,
            violations: Vec::new(),
            samples_run: 0,
            seed,
            notes: Vec::new(),
        }
    }

    pub fn record(&mut self, v: Violation) {
        self.violation_count += 1;
        self.passed = false;
        if self.violations.len() < MAX_RECORDED_VIOLATIONS {
            self.violations.push(v);
        }
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        if !self.notes.contains(&msg) {
            self.notes.push(msg);
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.samples_run += other.samples_run;
        self.violation_count += other.violation_count;
        self.passed &= other.passed;
        for v in other.violations {
            if self.violations.len() < MAX_RECORDED_VIOLATIONS {
                self.violations.push(v);
            }
        }
        for n in other.notes {
            self.note(n);
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.passed {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// A sampled statement was violated.
    Fail,
    /// A hypothesis or construction precondition does not hold, so the
    /// statement was not exercised.
    Infeasible,
}

impl Verdict {
    /// Fail dominates Infeasible, which dominates Pass.
    pub fn worst(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Infeasible, _) | (_, Infeasible) => Infeasible,
            _ => Pass,
        }
    }
}

/// One line of a newline-delimited report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRecord {
    pub operation: String,
    pub check: String,
    pub seed: u64,
    pub verdict: Verdict,
    pub budget: SampleBudget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<PmSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<CheckReport>,
    /// Chosen witness parameters or decided values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicates: Option<BTreeMap<String, PredicateResult>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ReportRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("report records serialize")
    }

    pub fn from_line(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }
}

/// Process exit status for a set of records: 0 all pass, 1 any fail,
/// 2 any infeasible and none failing.
pub fn exit_code(records: &[ReportRecord]) -> i32 {
    match records
        .iter()
        .fold(Verdict::Pass, |acc, r| acc.worst(r.verdict))
    {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Infeasible => 2,
    }
}
