//! Property suites that cross-check every engine against an independent
//! oracle. Each suite is deterministic given the master seed.

pub mod gen;
mod suites;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use suites::permutation_contraction;

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// The first few failing cases.
    pub failures: Vec<String>,
    pub internal_error: bool,
    pub note: String,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} cases)", self.name, self.cases)?;
        if !self.note.is_empty() {
            write!(f, " {}", self.note)?;
        }
        for msg in &self.failures {
            write!(f, "\n    {msg}")?;
        }
        Ok(())
    }
}

const MAX_REPORTED: usize = 5;

/// Collects case results for a suite.
pub(crate) struct Tally {
    cases: usize,
    failed: usize,
    failures: Vec<String>,
    internal_error: bool,
    note: String,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failed: 0,
            failures: Vec::new(),
            internal_error: false,
            note: String::new(),
        }
    }

    pub(crate) fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.record(describe());
        }
    }

    /// Runs one case; an `Err` counts as a failure.
    pub(crate) fn case(
        &mut self,
        label: impl FnOnce() -> String,
        body: impl FnOnce() -> Result<bool>,
    ) {
        self.cases += 1;
        match body() {
            Ok(true) => {}
            Ok(false) => self.record(label()),
            Err(e) => {
                self.internal_error |= e.is_internal();
                self.record(format!("{}: {e}", label()));
            }
        }
    }

    pub(crate) fn note(&mut self, text: String) {
        self.note = text;
    }

    fn record(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < MAX_REPORTED {
            self.failures.push(msg);
        }
    }

    fn finish(mut self, name: &'static str) -> SuiteReport {
        if self.failed > self.failures.len() {
            self.failures
                .push(format!("... {} failures in total", self.failed));
        }
        SuiteReport {
            name,
            passed: self.failed == 0,
            cases: self.cases,
            failures: self.failures,
            internal_error: self.internal_error,
            note: self.note,
        }
    }
}

type SuiteFn = fn(u64, &mut Tally);

const SUITES: &[(&str, SuiteFn)] = &[
    ("rho-bruteforce", suites::rho_bruteforce_equivalence),
    ("rigidity-laman", suites::rigidity_ground_truth),
    ("named-instances", suites::named_instances),
    ("pit-r2", suites::pit_r2),
    ("pit-rk", suites::pit_rk),
    ("intersection-identities", suites::intersection_identities),
    ("w-basis", suites::w_basis),
    ("submodularity", suites::submodularity_and_lattice),
    ("structure", suites::structure),
    ("genericity", suites::genericity),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// The seed a suite derives from the master seed.
pub fn suite_seed(master: u64, name: &str) -> u64 {
    // FNV-1a of the name, mixed into the master seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    master ^ h
}

pub fn run_suite(name: &str, master_seed: u64) -> Result<SuiteReport> {
    let &(name, f) = SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownField(format!("suite {name}")))?;
    let mut tally = Tally::new();
    f(master_seed, &mut tally);
    Ok(tally.finish(name))
}

/// Every suite, or just `name` unless it is `"all"`.
pub fn run(name: &str, master_seed: u64) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        suite_names()
            .into_iter()
            .map(|n| run_suite(n, master_seed))
            .collect()
    } else {
        Ok(vec![run_suite(name, master_seed)?])
    }
}
