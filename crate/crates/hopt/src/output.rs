//! JSON and text reports, and exit codes.

use std::fmt::Write as _;

use hopt_core::causlite::{CausType, Shape};
use hopt_core::{LawReport, Status};
use serde::{Deserialize, Serialize};

use crate::program::{Env, Suite};
use crate::suites::Outcome;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BOUNDS: i32 = 3;

/// Everything needed to rerun a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    pub max_size: usize,
    pub depth: usize,
    pub samples: usize,
    pub seed: u64,
    pub idempotent_cap: usize,
    pub member_cap: usize,
    pub strict_bounds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeOut {
    pub name: String,
    pub shape: String,
    pub dim: usize,
    pub nonneg: bool,
    /// Rows of `[M | c]` in reduced row-echelon form.
    pub constraints: Vec<Vec<String>>,
    pub generators: usize,
}

impl TypeOut {
    pub fn new(name: &str, t: &CausType) -> Self {
        let shape = match &t.shape {
            Shape::First(n) => format!("first({})", n),
            Shape::Hom(n, m) => format!("hom({},{})", n, m),
            Shape::Ns { a, b } => format!("ns(hom({},{}),hom({},{}))", a.0, a.1, b.0, b.1),
        };
        TypeOut {
            name: name.into(),
            shape,
            dim: t.dim,
            nonneg: t.nonneg,
            constraints: t.constraint_strings(),
            generators: t.generators.len(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOut {
    pub check: usize,
    pub statement: String,
    pub status: Status,
    #[serde(flatten)]
    pub report: LawReport,
    pub elapsed_ms: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub types: Vec<TypeOut>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub version: String,
    pub seed: u64,
    pub config: Config,
    pub suites: Vec<SuiteOut>,
}

impl RunReport {
    pub fn new(config: Config, env: &Env, outcomes: Vec<Outcome>, timings: bool) -> Self {
        let mut seen = Vec::new();
        let suites = outcomes
            .into_iter()
            .map(|o| {
                let check = &env.checks[o.check];
                let first = !seen.contains(&o.check);
                seen.push(o.check);
                let types = if first && check.suite == Suite::Causlite {
                    env.types.iter().map(|(n, t)| TypeOut::new(n, t)).collect()
                } else {
                    Vec::new()
                };
                SuiteOut {
                    check: o.check,
                    statement: check.text.clone(),
                    status: o.report.status(),
                    report: o.report,
                    elapsed_ms: timings.then_some(o.elapsed.as_millis() as u64),
                    types,
                }
            })
            .collect();
        RunReport { version: env!("CARGO_PKG_VERSION").into(), seed: config.seed, config, suites }
    }

    pub fn exit_code(&self, strict_bounds: bool) -> i32 {
        if self.suites.iter().any(|s| s.status == Status::Fail) {
            EXIT_VIOLATION
        } else if strict_bounds && self.suites.iter().any(|s| s.status == Status::BoundExceeded) {
            EXIT_BOUNDS
        } else {
            EXIT_PASS
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(s, "hopt {} seed {}", self.version, self.seed);
        let _ = writeln!(
            s,
            "bounds: max_size {} depth {} samples {} idempotent_cap {} member_cap {}",
            c.max_size, c.depth, c.samples, c.idempotent_cap, c.member_cap
        );
        let mut failed = 0;
        for (i, su) in self.suites.iter().enumerate() {
            let r = &su.report;
            let status = serde_json::to_value(su.status).expect("status serializes");
            let _ = write!(
                s,
                "[{}] #{} {} ({}) cases {} failed {}",
                status.as_str().unwrap_or("?"),
                i,
                r.suite,
                r.model,
                r.cases_total,
                r.cases_failed
            );
            if let Some(ms) = su.elapsed_ms {
                let _ = write!(s, " in {} ms", ms);
            }
            let _ = writeln!(s, "  <- {}", su.statement);
            for (j, v) in r.violations.iter().enumerate() {
                let _ = writeln!(s, "  {}.{} {} at {}\n      lhs {}\n      rhs {}", i, j, v.law, v.instance, v.lhs, v.rhs);
            }
            for n in &r.notes {
                let _ = writeln!(s, "  note: {}", n);
            }
            for w in r.witnesses.iter().take(5) {
                let _ = writeln!(s, "  witness {}: {}", w.label, w.trace);
            }
            if r.witnesses.len() > 5 {
                let _ = writeln!(s, "  ... {} more witnesses in the JSON report", r.witnesses.len() - 5);
            }
            for t in &su.types {
                let _ = writeln!(s, "  type {} = {} (dim {}, {} constraints)", t.name, t.shape, t.dim, t.constraints.len());
            }
            if su.status == Status::Fail {
                failed += 1;
            }
        }
        let _ = writeln!(s, "{} suites, {} failed", self.suites.len(), failed);
        s
    }
}

/// The parts of a saved JSON report that replay needs.
#[derive(Clone, Debug, Deserialize)]
pub struct SavedReport {
    pub config: Config,
    pub suites: Vec<SavedSuite>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SavedSuite {
    pub check: usize,
    pub suite: String,
    pub violations: Vec<SavedViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct SavedViolation {
    pub law: String,
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
}

impl SavedReport {
    /// `S.V` addresses violation `V` of suite `S`; a bare `N` counts
    /// violations across all suites.
    pub fn locate(&self, case: &str) -> Option<(usize, usize)> {
        if let Some((s, v)) = case.split_once('.') {
            let (s, v): (usize, usize) = (s.parse().ok()?, v.parse().ok()?);
            return (self.suites.get(s)?.violations.len() > v).then_some((s, v));
        }
        let mut n: usize = case.parse().ok()?;
        for (i, su) in self.suites.iter().enumerate() {
            if n < su.violations.len() {
                return Some((i, n));
            }
            n -= su.violations.len();
        }
        None
    }
}
