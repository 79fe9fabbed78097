//! Exhaustive equivalence suites comparing the constructions with the
//! oracles in [`oracles`], reported as [`SuiteReport`]s.

pub mod oracles;
mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::par::Execution;

pub use oracles::{oracle_a, oracle_immerman, oracle_plus, oracle_points, oracle_successor};
pub use suites::{random_semilinear_sets, COMPLEMENT_GOLDEN, PROP3_SENTENCES};

/// Failures kept in a report; the rest only count towards `total_failures`.
pub const MAX_REPORTED_FAILURES: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("suite {suite} has no parameter {param:?}")]
    UnknownParam { suite: String, param: String },
    #[error("parameter {param} = {value} outside {min}..={max}")]
    OutOfRange { param: String, value: u64, min: u64, max: u64 },
    #[error("lengths differ: {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("malformed input {0:?}")]
    BadInput(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

impl Failure {
    pub fn new(input: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        Failure { input: input.into(), expected: expected.to_string(), actual: actual.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: BTreeMap<String, u64>,
    pub cases: u64,
    pub failures: Vec<Failure>,
    pub total_failures: u64,
    pub pass: bool,
    pub millis: u64,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// JSON with `millis` zeroed, for comparing runs.
    pub fn canonical_json(&self) -> String {
        SuiteReport { millis: 0, ..self.clone() }.to_json()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: u64,
    pub min: u64,
    pub max: u64,
}

const fn p(name: &'static str, default: u64, min: u64, max: u64) -> ParamSpec {
    ParamSpec { name, default, min, max }
}

pub(crate) type Params = BTreeMap<String, u64>;

pub(crate) struct Outcome {
    pub cases: u64,
    pub failures: Vec<Failure>,
}

pub struct SuiteSpec {
    pub name: &'static str,
    pub params: &'static [ParamSpec],
    run: fn(&Params, Execution) -> Outcome,
}

pub const SUITES: &[SuiteSpec] = &[
    SuiteSpec { name: "successor-windows", params: &[p("max_n", 10, 1, 16)], run: suites::run_successor_windows },
    SuiteSpec { name: "addition-dpda", params: &[p("max_len", 12, 1, 16)], run: suites::run_addition_dpda },
    SuiteSpec { name: "immerman-complement", params: &[p("max_len", 14, 0, 16)], run: suites::run_immerman_complement },
    SuiteSpec { name: "npda-A", params: &[p("max_len", 12, 0, 14)], run: suites::run_npda_a },
    SuiteSpec { name: "neutral-immerman", params: &[p("max_len", 12, 0, 13)], run: suites::run_neutral_immerman },
    SuiteSpec {
        name: "lindstrom-plus",
        params: &[p("max_c", 8, 1, 12), p("window", 4, 0, 8)],
        run: suites::run_lindstrom_plus,
    },
    SuiteSpec {
        name: "semilinear-folin",
        params: &[p("sets", 20, 1, 200), p("bound", 12, 1, 16), p("seed", 1, 0, u64::MAX)],
        run: suites::run_semilinear_folin,
    },
    SuiteSpec { name: "sort-diff", params: &[p("max_arity", 4, 1, 6), p("bound", 10, 1, 16)], run: suites::run_sort_diff },
    SuiteSpec {
        name: "prop3-rewrite",
        params: &[p("max_c", 6, 1, 10), p("window", 4, 0, 8)],
        run: suites::run_prop3_rewrite,
    },
];

pub fn suite(name: &str) -> Result<&'static SuiteSpec, VerifyError> {
    SUITES.iter().find(|s| s.name == name).ok_or_else(|| VerifyError::UnknownSuite(name.to_string()))
}

impl SuiteSpec {
    /// Defaults overridden by `given`, range-checked.
    pub fn resolve(&self, given: &BTreeMap<String, u64>) -> Result<BTreeMap<String, u64>, VerifyError> {
        if let Some(k) = given.keys().find(|k| !self.params.iter().any(|p| p.name == k.as_str())) {
            return Err(VerifyError::UnknownParam { suite: self.name.to_string(), param: k.clone() });
        }
        self.params
            .iter()
            .map(|p| {
                let value = given.get(p.name).copied().unwrap_or(p.default);
                if value < p.min || value > p.max {
                    return Err(VerifyError::OutOfRange { param: p.name.to_string(), value, min: p.min, max: p.max });
                }
                Ok((p.name.to_string(), value))
            })
            .collect()
    }
}

/// Runs a suite with the parallelism given by `DUALITY_THREADS`.
pub fn run_suite(name: &str, params: &BTreeMap<String, u64>) -> Result<SuiteReport, VerifyError> {
    run_suite_with(name, params, Execution::from_env())
}

pub fn run_suite_with(
    name: &str,
    params: &BTreeMap<String, u64>,
    exec: Execution,
) -> Result<SuiteReport, VerifyError> {
    let spec = suite(name)?;
    let params = spec.resolve(params)?;
    let start = Instant::now();
    let Outcome { cases, mut failures } = (spec.run)(&params, exec);
    let millis = start.elapsed().as_millis() as u64;
    failures.sort();
    let total_failures = failures.len() as u64;
    failures.truncate(MAX_REPORTED_FAILURES);
    Ok(SuiteReport {
        suite: name.to_string(),
        params,
        cases,
        pass: total_failures == 0,
        failures,
        total_failures,
        millis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(name: &str) -> BTreeMap<String, u64> {
        let mut m = BTreeMap::new();
        match name {
            "successor-windows" => m.insert("max_n".into(), 4),
            "addition-dpda" => m.insert("max_len".into(), 5),
            "immerman-complement" | "npda-A" => m.insert("max_len".into(), 6),
            "neutral-immerman" => m.insert("max_len".into(), 5),
            "lindstrom-plus" | "prop3-rewrite" => m.insert("max_c".into(), 3),
            "semilinear-folin" => m.insert("sets".into(), 3),
            _ => m.insert("bound".into(), 5),
        };
        m
    }

    #[test]
    fn every_suite_passes_small() {
        for s in SUITES {
            let r = run_suite_with(s.name, &small(s.name), Execution::Sequential).unwrap();
            assert!(r.pass, "{}: {:?}", s.name, r.failures);
            assert!(r.cases > 0, "{}", s.name);
        }
    }

    #[test]
    fn successor_case_count() {
        let r = run_suite_with("successor-windows", &small("successor-windows"), Execution::Sequential).unwrap();
        // sum over n of 2^(2n-1)
        assert_eq!(r.cases, 2 + 8 + 32 + 128);
    }

    #[test]
    fn bad_requests() {
        assert!(matches!(run_suite("nope", &BTreeMap::new()), Err(VerifyError::UnknownSuite(_))));
        let huge: BTreeMap<String, u64> = [("max_n".to_string(), 99)].into();
        assert!(matches!(run_suite("successor-windows", &huge), Err(VerifyError::OutOfRange { .. })));
        let wrong: BTreeMap<String, u64> = [("max_len".to_string(), 3)].into();
        assert!(matches!(run_suite("successor-windows", &wrong), Err(VerifyError::UnknownParam { .. })));
    }

    #[test]
    fn json_shape() {
        let r = run_suite_with("sort-diff", &small("sort-diff"), Execution::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["suite", "params", "cases", "failures", "total_failures", "pass", "millis"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let again = run_suite_with("sort-diff", &small("sort-diff"), Execution::Sequential).unwrap();
        assert_eq!(r.canonical_json(), again.canonical_json());
    }
}
