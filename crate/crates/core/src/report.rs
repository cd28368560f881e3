//! Structured verification reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::numerics::{fmt_rational, Rational};
use crate::racah::ParamTriple;

/// At most this many failures are stored verbatim; the rest are only counted.
const MAX_STORED_FAILURES: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    ReportOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub sample: Vec<String>,
    pub indices: BTreeMap<String, i64>,
    pub lhs: String,
    pub rhs: String,
}

/// Exact instance and failure counts for one group of a report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: String,
    pub parameter_samples: Vec<Vec<String>>,
    pub instances_checked: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Uncapped counts keyed by a group label, e.g. one entry per reading.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub breakdown: BTreeMap<String, Tally>,
}

pub fn sample_strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(fmt_rational).collect()
}

pub fn triple_strings(params: &ParamTriple) -> Vec<String> {
    sample_strings(&params.to_vec())
}

/// Builds an index map from `("n", 3), ("k", 1)`-style pairs.
pub fn indices(pairs: &[(&str, usize)]) -> BTreeMap<String, i64> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), *v as i64))
        .collect()
}

impl VerificationReport {
    pub fn new(identity_id: impl Into<String>) -> Self {
        VerificationReport {
            identity_id: identity_id.into(),
            parameter_samples: Vec::new(),
            instances_checked: 0,
            failure_count: 0,
            failures: Vec::new(),
            status: Status::Fail,
            notes: Vec::new(),
            breakdown: BTreeMap::new(),
        }
        .finalized()
    }

    /// A report whose outcome never counts as a failure.
    pub fn report_only(identity_id: impl Into<String>) -> Self {
        let mut r = VerificationReport::new(identity_id);
        r.status = Status::ReportOnly;
        r
    }

    pub fn is_report_only(&self) -> bool {
        self.status == Status::ReportOnly
    }

    pub fn add_sample(&mut self, sample: Vec<String>) {
        if !self.parameter_samples.contains(&sample) {
            self.parameter_samples.push(sample);
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        let text = text.into();
        if !self.notes.contains(&text) {
            self.notes.push(text);
        }
    }

    /// Records one instance, comparing exact values through their displays.
    pub fn check<T: PartialEq + std::fmt::Display>(
        &mut self,
        sample: &[String],
        idx: BTreeMap<String, i64>,
        lhs: &T,
        rhs: &T,
    ) -> bool {
        self.instances_checked += 1;
        let ok = lhs == rhs;
        if !ok {
            self.push_failure(Failure {
                sample: sample.to_vec(),
                indices: idx,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        self.refresh();
        ok
    }

    /// [`check`](Self::check), also counted under `group` in the breakdown.
    pub fn check_grouped<T: PartialEq + std::fmt::Display>(
        &mut self,
        group: &str,
        sample: &[String],
        idx: BTreeMap<String, i64>,
        lhs: &T,
        rhs: &T,
    ) -> bool {
        let ok = self.check(sample, idx, lhs, rhs);
        let t = self.breakdown.entry(group.to_string()).or_default();
        t.checked += 1;
        t.failed += u64::from(!ok);
        ok
    }

    pub fn check_rational_grouped(
        &mut self,
        group: &str,
        sample: &[String],
        idx: BTreeMap<String, i64>,
        lhs: &Rational,
        rhs: &Rational,
    ) -> bool {
        self.check_grouped(group, sample, idx, &Displayed(lhs), &Displayed(rhs))
    }

    pub fn check_rational(
        &mut self,
        sample: &[String],
        idx: BTreeMap<String, i64>,
        lhs: &Rational,
        rhs: &Rational,
    ) -> bool {
        self.check(sample, idx, &Displayed(lhs), &Displayed(rhs))
    }

    fn push_failure(&mut self, f: Failure) {
        self.failure_count += 1;
        if self.failures.len() < MAX_STORED_FAILURES {
            self.failures.push(f);
        }
    }

    fn refresh(&mut self) {
        if self.status != Status::ReportOnly {
            self.status = if self.failure_count == 0 && self.instances_checked > 0 {
                Status::Pass
            } else {
                Status::Fail
            };
        }
    }

    fn finalized(mut self) -> Self {
        self.refresh();
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Folds `other` into `self`; samples and notes are deduplicated in order.
    pub fn merge(&mut self, other: VerificationReport) {
        for s in other.parameter_samples {
            self.add_sample(s);
        }
        for n in other.notes {
            self.note(n);
        }
        for (g, t) in other.breakdown {
            let e = self.breakdown.entry(g).or_default();
            e.checked += t.checked;
            e.failed += t.failed;
        }
        self.instances_checked += other.instances_checked;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_STORED_FAILURES {
                self.failures.push(f);
            }
        }
        self.refresh();
    }

    /// Merges an ordered collection of reports sharing one id.
    pub fn merge_all(
        identity_id: &str,
        report_only: bool,
        parts: impl IntoIterator<Item = VerificationReport>,
    ) -> Self {
        let mut out = if report_only {
            VerificationReport::report_only(identity_id)
        } else {
            VerificationReport::new(identity_id)
        };
        for p in parts {
            out.merge(p);
        }
        out
    }
}

/// Wraps a rational so that it displays as `p/q`.
#[derive(PartialEq)]
struct Displayed<'a>(&'a Rational);

impl std::fmt::Display for Displayed<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&fmt_rational(self.0))
    }
}
