//! Exhaustive replay of the structural results over every instance up to a
//! size bound, producing structured reports.

mod suites;

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Size bounds for a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyParams {
    /// Largest atom count of enumerated algebras.
    pub atoms: usize,
    /// Largest world count of enumerated frames.
    pub worlds: usize,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams { atoms: 4, worlds: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub citation: String,
    pub params: VerifyParams,
    pub checked: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
    /// Observations that are not pass/fail checks, such as separating examples.
    pub notes: Vec<String>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "{:<24} {status}  checked={:<8} failures={:<4} {}ms  (atoms≤{}, worlds≤{})",
            self.suite,
            self.checked,
            self.failures.len(),
            self.elapsed_ms,
            self.params.atoms,
            self.params.worlds
        )?;
        for note in &self.notes {
            writeln!(f, "    note: {note}")?;
        }
        for fail in self.failures.iter().take(10) {
            writeln!(
                f,
                "    {}: expected {}, got {}",
                fail.instance, fail.expected, fail.got
            )?;
        }
        if self.failures.len() > 10 {
            writeln!(f, "    … {} more", self.failures.len() - 10)?;
        }
        Ok(())
    }
}

/// Running totals of one suite.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    checked: u64,
    failures: Vec<Failure>,
    notes: Vec<String>,
}

impl Tally {
    /// Records one check; the description closures only run on failure.
    pub(crate) fn check(
        &mut self,
        ok: bool,
        instance: impl FnOnce() -> String,
        expected: impl fmt::Display,
        got: impl FnOnce() -> String,
    ) {
        self.checked += 1;
        if !ok {
            self.failures.push(Failure {
                instance: instance(),
                expected: expected.to_string(),
                got: got(),
            });
        }
    }

    /// Shorthand for checks whose expectation is a plain equality.
    pub(crate) fn expect_eq<T: PartialEq + fmt::Debug>(
        &mut self,
        got: T,
        expected: T,
        instance: impl FnOnce() -> String,
    ) {
        let ok = got == expected;
        self.check(ok, instance, format!("{expected:?}"), || format!("{got:?}"));
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    fn absorb(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }

    /// Runs `body` on every item in parallel and merges in item order.
    pub(crate) fn each<T: Sync>(
        &mut self,
        items: &[T],
        body: impl Fn(&T, &mut Tally) -> Result<()> + Sync,
    ) -> Result<()> {
        let parts: Vec<Tally> = items
            .par_iter()
            .map(|item| {
                let mut t = Tally::default();
                body(item, &mut t)?;
                Ok(t)
            })
            .collect::<Result<_>>()?;
        for part in parts {
            self.absorb(part);
        }
        Ok(())
    }
}

/// A named check over a generated instance space.
#[derive(Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    pub citation: &'static str,
    run: fn(&VerifyParams, &mut Tally) -> Result<()>,
}

impl fmt::Debug for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Suite").field("name", &self.name).finish()
    }
}

pub fn suites() -> &'static [Suite] {
    &suites::SUITES
}

pub fn suite_names() -> Vec<&'static str> {
    suites().iter().map(|s| s.name).collect()
}

pub fn find_suite(name: &str) -> Result<&'static Suite> {
    suites()
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Lookup {
            kind: "suite",
            name: name.to_string(),
        })
}

pub fn run_suite(name: &str, params: VerifyParams) -> Result<VerificationReport> {
    let suite = find_suite(name)?;
    let start = Instant::now();
    let mut tally = Tally::default();
    (suite.run)(&params, &mut tally)?;
    let passed = tally.failures.is_empty();
    Ok(VerificationReport {
        suite: suite.name.to_string(),
        citation: suite.citation.to_string(),
        params,
        checked: tally.checked,
        failures: tally.failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
        notes: tally.notes,
        passed,
    })
}

pub fn run_all(params: VerifyParams) -> Result<Vec<VerificationReport>> {
    suites().iter().map(|s| run_suite(s.name, params)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyParams {
        VerifyParams { atoms: 3, worlds: 3 }
    }

    #[test]
    fn twelve_distinct_suites() {
        let names = suite_names();
        assert_eq!(names.len(), 12);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 12);
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", small()), Err(Error::Lookup { .. })));
    }

    #[test]
    fn every_suite_passes_small_and_is_not_vacuous() {
        for name in suite_names() {
            let report = run_suite(name, small()).unwrap();
            assert!(report.passed(), "{report}");
            assert!(report.checked > 0, "{name} checked nothing");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("table1", small()).unwrap();
        let b = run_suite("table1", small()).unwrap();
        assert_eq!((a.checked, a.failures, a.notes), (b.checked, b.failures, b.notes));
    }

    #[test]
    fn bounds_propagate() {
        let big = VerifyParams { atoms: 9, worlds: 3 };
        assert!(matches!(run_suite("duality_roundtrip", big), Err(Error::Size { .. })));
        let wide = VerifyParams { atoms: 2, worlds: 9 };
        assert!(matches!(run_suite("table1", wide), Err(Error::Size { .. })));
    }

    #[test]
    fn report_serializes() {
        let report = run_suite("sum_and_union", small()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        for key in ["suite", "params", "checked", "failures", "elapsed_ms"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}
