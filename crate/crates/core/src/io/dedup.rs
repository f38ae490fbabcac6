//! Canonical deduplication of graph streams.
//!
//! Graphs are canonicalized in parallel batches and collected in memory.
//! When a memory cap is set and exceeded, the collected forms are sorted and
//! spilled to a temporary run file; the runs are merged at the end. Output
//! is always sorted by `(order, edges, canonical bytes)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Lines, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::Graph;

const BATCH: usize = 4096;
/// Rough per-entry overhead of the in-memory set, added to the form length.
const ENTRY_OVERHEAD: usize = 48;

#[derive(Clone, Debug, Default)]
pub struct DedupConfig {
    /// Approximate bytes of canonical forms held before spilling a run.
    pub memory_cap: Option<usize>,
    /// Directory for run files; the system temp dir when unset.
    pub temp_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DedupReport {
    pub input: usize,
    pub unique: usize,
    pub runs: usize,
    pub counts: BTreeMap<(usize, usize), usize>,
}

/// Sort key of a canonical form: order, edge count, bytes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Keyed {
    pub n: usize,
    pub e: usize,
    pub form: CanonicalForm,
}

impl Keyed {
    pub fn new(form: CanonicalForm) -> Self {
        let g = form.to_graph();
        Keyed { n: g.order(), e: g.edge_count(), form }
    }
}

/// Sorts forms by `(n, e, bytes)`.
pub fn sorted_forms<I: IntoIterator<Item = CanonicalForm>>(forms: I) -> Vec<CanonicalForm> {
    let mut keyed: Vec<Keyed> = forms.into_iter().map(Keyed::new).collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|k| k.form).collect()
}

/// Writes one line per unique canonical form of `graphs` to `out`.
pub fn dedup_stream<I, W>(graphs: I, out: W, config: &DedupConfig) -> Result<DedupReport>
where
    I: IntoIterator<Item = Result<Graph>>,
    W: Write,
{
    let mut report = DedupReport::default();
    let mut seen: FxHashSet<CanonicalForm> = FxHashSet::default();
    let mut held = 0usize;
    let mut runs: Vec<tempfile::NamedTempFile> = Vec::new();
    let mut batch: Vec<Graph> = Vec::with_capacity(BATCH);
    let mut iter = graphs.into_iter();
    loop {
        batch.clear();
        for g in iter.by_ref().take(BATCH) {
            batch.push(g?);
        }
        if batch.is_empty() {
            break;
        }
        report.input += batch.len();
        let forms: Vec<CanonicalForm> = batch.par_iter().map(canonical_form).collect();
        for f in forms {
            let size = f.as_bytes().len() + ENTRY_OVERHEAD;
            if seen.insert(f) {
                held += size;
            }
        }
        if config.memory_cap.is_some_and(|cap| held > cap) {
            runs.push(spill(&mut seen, config)?);
            held = 0;
        }
    }

    let mut w = BufWriter::new(out);
    let mut emit = |k: &Keyed, report: &mut DedupReport| -> Result<()> {
        w.write_all(k.form.as_bytes())?;
        w.write_all(b"\n")?;
        report.unique += 1;
        *report.counts.entry((k.n, k.e)).or_insert(0) += 1;
        Ok(())
    };
    if runs.is_empty() {
        let mut keyed: Vec<Keyed> = seen.into_iter().map(Keyed::new).collect();
        keyed.sort_unstable();
        for k in &keyed {
            emit(k, &mut report)?;
        }
    } else {
        if !seen.is_empty() {
            runs.push(spill(&mut seen, config)?);
        }
        report.runs = runs.len();
        let mut readers: Vec<Lines<BufReader<File>>> = Vec::with_capacity(runs.len());
        for r in &runs {
            readers.push(BufReader::new(r.reopen()?).lines());
        }
        let mut heap = BinaryHeap::new();
        for (i, r) in readers.iter_mut().enumerate() {
            if let Some(k) = next_entry(r)? {
                heap.push(Head(k, i));
            }
        }
        let mut last: Option<Keyed> = None;
        while let Some(Head(k, i)) = heap.pop() {
            if let Some(next) = next_entry(&mut readers[i])? {
                heap.push(Head(next, i));
            }
            if last.as_ref() != Some(&k) {
                emit(&k, &mut report)?;
                last = Some(k);
            }
        }
    }
    w.flush()?;
    Ok(report)
}

/// Min-heap entry for the run merge.
struct Head(Keyed, usize);

impl PartialEq for Head {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Head {}
impl PartialOrd for Head {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Head {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

fn spill(seen: &mut FxHashSet<CanonicalForm>, config: &DedupConfig) -> Result<tempfile::NamedTempFile> {
    let mut keyed: Vec<Keyed> = seen.drain().map(Keyed::new).collect();
    keyed.par_sort_unstable();
    let file = match &config.temp_dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir)?,
        None => tempfile::NamedTempFile::new()?,
    };
    let mut w = BufWriter::new(file.reopen()?);
    for k in &keyed {
        writeln!(w, "{} {} {}", k.n, k.e, k.form)?;
    }
    w.flush()?;
    Ok(file)
}

fn next_entry(lines: &mut Lines<BufReader<File>>) -> Result<Option<Keyed>> {
    let Some(line) = lines.next().transpose()? else {
        return Ok(None);
    };
    let bad = || Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, "corrupt dedup run"));
    let mut parts = line.splitn(3, ' ');
    let n = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let e = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let form = parts.next().ok_or_else(bad)?;
    Ok(Some(Keyed { n, e, form: CanonicalForm::from_canonical_graph6(form.as_bytes().to_vec()) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::graph6::read_graphs;

    fn run(graphs: Vec<Graph>, config: &DedupConfig) -> (String, DedupReport) {
        let mut out = Vec::new();
        let report = dedup_stream(graphs.into_iter().map(Ok), &mut out, config).unwrap();
        (String::from_utf8(out).unwrap(), report)
    }

    #[test]
    fn relabellings_collapse() {
        let c5 = Graph::cycle(5);
        let (text, report) = run(vec![c5.clone(), c5.relabel(&[2, 0, 4, 1, 3])], &DedupConfig::default());
        assert_eq!(text.lines().count(), 1);
        assert_eq!(report.input, 2);
        assert_eq!(report.counts, BTreeMap::from([((5, 5), 1)]));
        let (text, _) = run(vec![c5, Graph::path(5)], &DedupConfig::default());
        assert_eq!(text.lines().count(), 2);
        // P5 has fewer edges, so it sorts first.
        let first = read_graphs(text.as_bytes()).next().unwrap().unwrap();
        assert_eq!(first.edge_count(), 4);
    }

    #[test]
    fn spilled_runs_match_in_memory() {
        let mut graphs = Vec::new();
        for n in 3..8 {
            for k in 1..n {
                graphs.push(Graph::circulant(n, &[k]));
                graphs.push(Graph::cycle(n).relabel(&(0..n).rev().collect::<Vec<_>>()));
                graphs.push(Graph::path(n));
            }
        }
        let (plain, a) = run(graphs.clone(), &DedupConfig::default());
        let tiny = DedupConfig { memory_cap: Some(1), temp_dir: None };
        let (spilled, b) = run(graphs, &tiny);
        assert_eq!(plain, spilled);
        assert_eq!(a.counts, b.counts);
        assert!(b.runs > 0);
        assert_eq!(a.runs, 0);
    }

    #[test]
    fn errors_propagate() {
        let input = vec![Ok(Graph::cycle(5)), Err(Error::BadSpec("x".into()))];
        assert!(dedup_stream(input, Vec::new(), &DedupConfig::default()).is_err());
    }
}
