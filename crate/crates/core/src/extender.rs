//! One-point extension and the census driver built on it.
//!
//! A new vertex may be attached to an independent set `S` of `g` exactly
//! when `S` meets every independent `(t-1)`-set of `g`; otherwise that set
//! plus the new vertex is an independent `t`-set. Attachment sets are
//! enumerated directly by branching on the first witness `S` misses.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::gluer::GraphSet;
use crate::graph::{bit, is_ramsey, Graph, VertexSet, MAX_ORDER};
use crate::indset::independent_sets_of_size;
use crate::spec::CensusSpec;

/// Every independent set `S` of `g` with `|S| <= max_size` that meets all
/// independent `(tbound-1)`-sets, in no particular order.
///
/// Does not check that `g` itself is Ramsey.
pub fn attachment_sets(g: &Graph, tbound: usize, max_size: usize) -> Vec<VertexSet> {
    let witnesses: Vec<u64> = if tbound == 0 {
        Vec::new()
    } else {
        independent_sets_of_size(g, tbound - 1).into_iter().map(VertexSet::bits).collect()
    };
    let mut out = Vec::new();
    // With tbound = 1 the empty witness can never be hit.
    if witnesses.contains(&0) {
        return out;
    }
    let mut walk = Walk { adj: g.rows(), witnesses: &witnesses, max_size, out: &mut out };
    walk.branch(0, 0, g.vertices().bits(), 0);
    out
}

struct Walk<'a> {
    adj: &'a [u64],
    witnesses: &'a [u64],
    max_size: usize,
    out: &'a mut Vec<VertexSet>,
}

impl Walk<'_> {
    /// `cand`: vertices that may still join `set` (non-adjacent to it, not
    /// excluded). Witnesses before `from` are already hit.
    fn branch(&mut self, set: u64, size: usize, cand: u64, from: usize) {
        let mut i = from;
        while i < self.witnesses.len() && self.witnesses[i] & set != 0 {
            i += 1;
        }
        if i == self.witnesses.len() {
            self.supersets(set, size, cand);
            return;
        }
        if size == self.max_size {
            return;
        }
        let mut choices = self.witnesses[i] & cand;
        let mut cand = cand;
        while choices != 0 {
            let v = choices.trailing_zeros() as usize;
            choices &= choices - 1;
            cand &= !bit(v);
            self.branch(set | bit(v), size + 1, cand & !self.adj[v], i + 1);
        }
    }

    fn supersets(&mut self, set: u64, size: usize, cand: u64) {
        self.out.push(VertexSet(set));
        if size == self.max_size {
            return;
        }
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.supersets(set | bit(v), size + 1, rest & !self.adj[v]);
        }
    }
}

/// Whether `g` has any one-point extension within `max_edges`.
pub fn has_one_point_extension(g: &Graph, tbound: usize, max_edges: Option<usize>) -> bool {
    let Some(max_size) = size_room(g, max_edges) else {
        return false;
    };
    !attachment_sets(g, tbound, max_size).is_empty()
}

fn size_room(g: &Graph, max_edges: Option<usize>) -> Option<usize> {
    match max_edges {
        Some(m) => m.checked_sub(g.edge_count()),
        None => Some(g.order()),
    }
}

fn extension_graph(g: &Graph, set: VertexSet) -> Graph {
    let mut h = g.clone();
    h.add_vertex(set);
    h
}

/// All graphs on `n + 1` vertices in `R(3, tbound)` obtained by adding one
/// vertex to `g`, with at most `max_edges` edges, canonically deduplicated.
pub fn one_point_extensions(g: &Graph, tbound: usize, max_edges: Option<usize>) -> Result<GraphSet> {
    Ok(extension_forms(g, tbound, max_edges, Deletion::Any)?.into_iter().collect())
}

fn extension_forms(
    g: &Graph,
    tbound: usize,
    max_edges: Option<usize>,
    rule: Deletion,
) -> Result<FxHashSet<CanonicalForm>> {
    if !is_ramsey(g, 3, tbound) {
        return Err(Error::NotRamsey { t: tbound });
    }
    if g.order() + 1 > MAX_ORDER {
        return Err(Error::OrderTooLarge(g.order() + 1));
    }
    let mut out = FxHashSet::default();
    let Some(max_size) = size_room(g, max_edges) else {
        return Ok(out);
    };
    for set in attachment_sets(g, tbound, max_size) {
        let h = extension_graph(g, set);
        if rule.accepts(&h) {
            out.insert(canonical_form(&h));
        }
    }
    Ok(out)
}

/// Which vertex deletion the seeds of a census are closed under.
///
/// `Any`: seeds hold every one-vertex deletion in range, so every
/// extension is kept. `MaxDegree`: seeds only need to hold deletions of a
/// maximum-degree vertex, and extensions whose new vertex is not of maximum
/// degree are dropped before deduplication (they are found from another
/// seed).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Deletion {
    Any,
    MaxDegree,
}

impl Deletion {
    fn accepts(self, h: &Graph) -> bool {
        match self {
            Deletion::Any => true,
            Deletion::MaxDegree => h.degree(h.order() - 1) == h.max_degree(),
        }
    }

    /// The seed class that makes a census of `spec` complete under this rule.
    pub fn seed_spec(self, spec: &CensusSpec) -> CensusSpec {
        let mut seed = CensusSpec::new(spec.s, spec.t, spec.n.saturating_sub(1));
        let e0 = spec.effective_max_edges();
        seed.max_edges = Some(match self {
            Deletion::Any => e0,
            Deletion::MaxDegree if spec.n == 0 => 0,
            Deletion::MaxDegree => e0 - (2 * e0).div_ceil(spec.n),
        });
        seed
    }

    /// Why seeds from [`Deletion::seed_spec`] suffice for `spec`.
    pub fn argument(self, spec: &CensusSpec) -> String {
        let seed = self.seed_spec(spec);
        let e0 = spec.effective_max_edges();
        let n = spec.n;
        match self {
            Deletion::Any => format!(
                "every graph in {spec} has a vertex of degree at most floor(2*{e0}/{n}) = {}; \
                 deleting it leaves a graph in {seed}, which the seeds contain",
                (2 * e0).checked_div(n).unwrap_or(0)
            ),
            Deletion::MaxDegree => format!(
                "every graph in {spec} with e edges has a vertex of degree at least ceil(2e/{n}); \
                 deleting a maximum-degree vertex leaves at most e - ceil(2e/{n}) <= {} edges, \
                 so the graph is an extension of a seed in {seed} at a maximum-degree vertex",
                seed.max_edges.unwrap_or(0)
            ),
        }
    }
}

/// A finished census: canonical forms with per-`(n, e)` counts.
#[derive(Clone, Debug)]
pub struct Census {
    pub spec: CensusSpec,
    pub graphs: GraphSet,
    pub completeness: String,
}

impl Census {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn counts(&self) -> BTreeMap<(usize, usize), usize> {
        count_by_order_and_size(self.graphs.iter())
    }

    pub fn to_graphs(&self) -> Vec<Graph> {
        self.graphs.iter().map(CanonicalForm::to_graph).collect()
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {} graphs", self.spec, self.len())?;
        for ((n, e), c) in self.counts() {
            writeln!(f, "  n={n} e={e}: {c}")?;
        }
        Ok(())
    }
}

/// Per-`(n, e)` counts of a collection of canonical forms.
pub fn count_by_order_and_size<'a, I>(forms: I) -> BTreeMap<(usize, usize), usize>
where
    I: IntoIterator<Item = &'a CanonicalForm>,
{
    let mut counts = BTreeMap::new();
    for f in forms {
        let g = f.to_graph();
        *counts.entry((g.order(), g.edge_count())).or_insert(0) += 1;
    }
    counts
}

/// Census of `spec` from seeds of order `spec.n - 1`, keeping every extension.
pub fn census(spec: &CensusSpec, seeds: &[Graph]) -> Result<Census> {
    census_with(spec, seeds, Deletion::Any)
}

/// Census of `spec` from seeds closed under `rule`. Seeds outside the
/// required seed class are still extended; seeds of the wrong order are an
/// error.
pub fn census_with(spec: &CensusSpec, seeds: &[Graph], rule: Deletion) -> Result<Census> {
    if spec.s != 3 {
        return Err(Error::BadSpec(format!("{spec}: only s = 3 is supported")));
    }
    if spec.n == 0 {
        let graphs = if spec.contains(&Graph::empty(0)) {
            GraphSet::from([canonical_form(&Graph::empty(0))])
        } else {
            GraphSet::new()
        };
        return Ok(Census { spec: *spec, graphs, completeness: "the empty graph is checked directly".into() });
    }
    if let Some(g) = seeds.iter().find(|g| g.order() + 1 != spec.n) {
        return Err(Error::BadSpec(format!("seed of order {} cannot extend to {spec}", g.order())));
    }
    let max_edges = spec.max_edges;
    let found = seeds
        .par_iter()
        .map(|g| extension_forms(g, spec.t, max_edges, rule))
        .try_fold(FxHashSet::default, |mut acc, part| {
            acc.extend(part?);
            Ok::<_, Error>(acc)
        })
        .try_reduce(FxHashSet::default, |mut a, b| {
            if a.len() < b.len() {
                return Ok(b.into_iter().chain(a).collect());
            }
            a.extend(b);
            Ok(a)
        })?;
    let graphs: GraphSet =
        found.into_iter().filter(|f| spec.min_edges.is_none_or(|m| f.to_graph().edge_count() >= m)).collect();
    Ok(Census { spec: *spec, graphs, completeness: rule.argument(spec) })
}

/// Complete censuses of `R(3, t, n)` for `n = 0..=max_n` without edge
/// bounds, each level extended from the previous one.
pub fn bottom_up(t: usize, max_n: usize) -> Result<Vec<Census>> {
    let mut levels = vec![census(&CensusSpec::new(3, t, 0), &[])?];
    for n in 1..=max_n {
        let seeds = levels[n - 1].to_graphs();
        let next = census(&CensusSpec::new(3, t, n), &seeds)?;
        levels.push(next);
    }
    Ok(levels)
}
