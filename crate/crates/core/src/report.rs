use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;

use crate::category::Smc;
use crate::error::{Error, Result};

/// Violations kept per report; the count keeps going past it.
pub const MAX_STORED_VIOLATIONS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Partial,
    BoundExceeded,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
}

/// A positive finding worth replaying, such as a comb membership trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub trace: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub suite: String,
    pub model: String,
    pub bounds: BTreeMap<String, String>,
    pub cases_total: u64,
    pub cases_failed: u64,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub bound_exceeded: bool,
    #[serde(skip)]
    pub partial: bool,
}

impl LawReport {
    pub fn new(suite: impl Into<String>, model: impl Into<String>) -> Self {
        LawReport {
            suite: suite.into(),
            model: model.into(),
            bounds: BTreeMap::new(),
            cases_total: 0,
            cases_failed: 0,
            violations: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            bound_exceeded: false,
            partial: false,
        }
    }

    pub fn bound(mut self, key: &str, value: impl ToString) -> Self {
        self.bounds.insert(key.into(), value.to_string());
        self
    }

    pub fn status(&self) -> Status {
        if self.cases_failed > 0 {
            Status::Fail
        } else if self.bound_exceeded {
            Status::BoundExceeded
        } else if self.partial {
            Status::Partial
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn failures_for(&self, law: &str) -> usize {
        self.violations.iter().filter(|v| v.law == law).count()
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn pass_case(&mut self) {
        self.cases_total += 1;
    }

    pub fn fail(&mut self, v: Violation) {
        self.cases_total += 1;
        self.cases_failed += 1;
        if self.violations.len() < MAX_STORED_VIOLATIONS {
            self.violations.push(v);
        }
    }

    /// Records one case; `detail` yields `(instance, lhs, rhs)` only on failure.
    pub fn record(&mut self, law: &str, ok: bool, detail: impl FnOnce() -> (String, String, String)) {
        if ok {
            self.pass_case();
        } else {
            let (instance, lhs, rhs) = detail();
            self.fail(Violation { law: law.into(), instance, lhs, rhs, trace: None });
        }
    }

    /// Compares two computed morphisms; a construction error on either side is a violation.
    pub fn expect_eq<S: Smc>(
        &mut self,
        cat: &S,
        law: &str,
        instance: impl FnOnce() -> String,
        lhs: Result<S::Mor>,
        rhs: Result<S::Mor>,
    ) {
        let ok = matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b);
        self.record(law, ok, || {
            let show = |r: &Result<S::Mor>| match r {
                Ok(m) => cat.render(m),
                Err(e) => alloc::format!("error: {}", e),
            };
            (instance(), show(&lhs), show(&rhs))
        });
    }

    /// Absorbs an error from instance generation: bound errors mark the
    /// report, anything else is a violation of `law`.
    pub fn absorb(&mut self, law: &str, instance: impl FnOnce() -> String, e: Error) {
        match e {
            Error::BoundExceeded(msg) => {
                self.bound_exceeded = true;
                let note = alloc::format!("bound exceeded at {}: {}", instance(), msg);
                if !self.notes.contains(&note) && self.notes.len() < MAX_STORED_VIOLATIONS {
                    self.notes.push(note);
                }
            }
            other => self.fail(Violation {
                law: law.into(),
                instance: instance(),
                lhs: alloc::format!("error: {}", other),
                rhs: "-".into(),
                trace: None,
            }),
        }
    }

    pub fn merge(&mut self, other: LawReport) {
        self.cases_total += other.cases_total;
        self.cases_failed += other.cases_failed;
        let room = MAX_STORED_VIOLATIONS.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        self.witnesses.extend(other.witnesses);
        self.notes.extend(other.notes);
        self.bound_exceeded |= other.bound_exceeded;
        self.partial |= other.partial;
    }
}
