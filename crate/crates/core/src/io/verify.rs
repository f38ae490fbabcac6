//! Membership and count checks of a graph6 census against its spec.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rustc_hash::FxHashSet;

use crate::canon::canonical_form;
use crate::error::Result;
use crate::graph::{has_clique, has_independent_set};
use crate::io::graph6::decode_line;
use crate::spec::CensusSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub total: usize,
    pub counts: BTreeMap<(usize, usize), usize>,
    /// Lines isomorphic to an earlier line; reported, not a violation.
    pub duplicates: usize,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "line {}: {}", v.line, v.reason)?;
        }
        for ((n, e), c) in &self.counts {
            writeln!(f, "n={n} e={e}: {c}")?;
        }
        writeln!(f, "total: {}", self.total)?;
        if self.duplicates > 0 {
            writeln!(f, "duplicates: {}", self.duplicates)?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

pub fn verify_file<P: AsRef<Path>>(path: P, spec: &CensusSpec) -> Result<VerifyReport> {
    verify_reader(BufReader::new(File::open(path)?), spec)
}

/// Checks every non-blank line; decode errors are violations, not failures.
pub fn verify_reader<R: BufRead>(reader: R, spec: &CensusSpec) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let mut seen = FxHashSet::default();
    for (i, line) in reader.split(b'\n').enumerate() {
        let line_no = i + 1;
        let bytes = line?;
        if bytes.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let g = match decode_line(&bytes, line_no) {
            Ok(g) => g,
            Err(e) => {
                report.violations.push(Violation { line: line_no, reason: e.to_string() });
                continue;
            }
        };
        report.total += 1;
        let (n, e) = (g.order(), g.edge_count());
        *report.counts.entry((n, e)).or_insert(0) += 1;
        let mut fail = |reason: String| report.violations.push(Violation { line: line_no, reason });
        if n != spec.n {
            fail(format!("order {n}, expected {}", spec.n));
        }
        if !spec.edges_ok(e) {
            fail(format!("{e} edges outside the range of {spec}"));
        }
        if has_clique(&g, spec.s) {
            fail(format!("contains a clique of size {}", spec.s));
        }
        if has_independent_set(&g, g.vertices(), spec.t) {
            fail(format!("contains an independent set of size {}", spec.t));
        }
        if !seen.insert(canonical_form(&g)) {
            report.duplicates += 1;
        }
    }
    Ok(report)
}
