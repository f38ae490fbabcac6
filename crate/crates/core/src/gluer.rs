//! Neighbourhood gluing: rebuild every graph of `R(3, t+1)` that has a vertex
//! `v` of degree `d` whose dual neighbourhood is a given core `G' ∈ R(3,t)`.
//!
//! The neighbours `v_1..v_d` of `v` are attached to independent sets
//! `S_1..S_d` of the core. The assignment is valid iff for every non-empty
//! `K ⊆ {1..d}` the core minus `∪_{k∈K} S_k` has independence number at most
//! `t - |K|`. The search runs over multisets of *maximal* independent sets
//! (enlarging sets preserves validity), using witness rows for the pairwise
//! condition and checking larger `K` only once a pairwise-consistent tuple is
//! complete. Each maximal solution is then expanded into the allowed subsets
//! under the edge budget.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::alpha::AlphaMemo;
use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::extender::Census;
use crate::graph::{bit, is_ramsey, Graph, VertexSet, MAX_ORDER};
use crate::indset::{build_index, BitRow, MaximalISIndex};
use crate::spec::CensusSpec;

/// Canonically deduplicated graphs, ordered by canonical bytes.
pub type GraphSet = BTreeSet<CanonicalForm>;

#[derive(Clone, Debug)]
pub struct GluingProblem {
    pub core: Graph,
    pub apex_degree: usize,
    /// Independence bound of the core; outputs are in `R(3, tbound+1)`.
    pub tbound: usize,
    pub max_edges: usize,
    /// Degree floor for every vertex of the output.
    pub min_degree: Option<usize>,
}

impl GluingProblem {
    pub fn new(core: Graph, apex_degree: usize, tbound: usize, max_edges: usize) -> Self {
        GluingProblem { core, apex_degree, tbound, max_edges, min_degree: None }
    }

    pub fn with_min_degree(mut self, delta: usize) -> Self {
        self.min_degree = Some(delta);
        self
    }

    pub fn output_order(&self) -> usize {
        self.core.order() + 1 + self.apex_degree
    }

    pub fn validate(&self) -> Result<()> {
        if self.apex_degree > self.tbound {
            return Err(Error::InvalidProblem(format!(
                "apex degree {} exceeds the independence bound {}",
                self.apex_degree, self.tbound
            )));
        }
        if self.output_order() > MAX_ORDER {
            return Err(Error::OrderTooLarge(self.output_order()));
        }
        if !is_ramsey(&self.core, 3, self.tbound) {
            return Err(Error::NotRamsey { t: self.tbound });
        }
        Ok(())
    }

    /// Smallest size allowed for any `S_i` under the degree floor.
    fn min_subset_size(&self) -> usize {
        self.min_degree.map_or(0, |m| m.saturating_sub(1))
    }

    /// Room left for `Σ|S_i|` under the edge budget, if any.
    fn subset_budget(&self) -> Option<usize> {
        self.max_edges.checked_sub(self.core.edge_count() + self.apex_degree)
    }
}

/// Counters from one gluing run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GlueStats {
    pub maximal_sets: usize,
    pub maximal_tuples: usize,
    pub expanded_tuples: usize,
    pub outputs: usize,
}

/// Graph on `n + 1 + d` vertices: core `0..n`, `v_i = n + i` adjacent to
/// `sets[i]` and the apex, apex `n + d` adjacent to exactly the `v_i`.
pub fn construct_glued_graph(core: &Graph, sets: &[VertexSet]) -> Result<Graph> {
    let n = core.order();
    let d = sets.len();
    if n + 1 + d > MAX_ORDER {
        return Err(Error::OrderTooLarge(n + 1 + d));
    }
    for s in sets {
        if !s.is_subset(core.vertices()) || !core.is_independent(*s) {
            return Err(Error::NotIndependent(s.bits()));
        }
    }
    Ok(glued_unchecked(core, sets))
}

pub(crate) fn glued_unchecked(core: &Graph, sets: &[VertexSet]) -> Graph {
    let n = core.order();
    let d = sets.len();
    let apex = n + d;
    let mut adj = Vec::with_capacity(n + d + 1);
    adj.extend_from_slice(core.rows());
    adj.resize(n + d + 1, 0);
    for (i, s) in sets.iter().enumerate() {
        let vi = n + i;
        adj[vi] = s.bits() | bit(apex);
        for x in *s {
            adj[x] |= bit(vi);
        }
        adj[apex] |= bit(vi);
    }
    Graph::from_rows_unchecked(adj)
}

/// Level subsets `K` with `|K| >= min_size`, ascending by size and
/// lexicographic within a size. Each entry is `(mask over levels, |K|, max K)`.
fn level_subsets(d: usize, min_size: usize) -> Vec<(u64, usize, usize)> {
    fn combos(d: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<(u64, usize, usize)>) {
        if cur.len() == k {
            let mask = cur.iter().fold(0u64, |m, &i| m | bit(i));
            out.push((mask, k, *cur.last().unwrap()));
            return;
        }
        for i in start..d {
            cur.push(i);
            combos(d, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in min_size.max(1)..=d {
        combos(d, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Depth-first search over compatible multisets of maximal sets.
struct TupleSearch<'a, F> {
    index: &'a MaximalISIndex,
    memo: &'a mut AlphaMemo,
    d: usize,
    all: u64,
    /// `|K| >= 3` subsets in check order.
    big_subsets: Vec<(u64, usize, usize)>,
    /// Exclusive upper index bound per level from the tail blocks.
    limits: Vec<usize>,
    chosen: Vec<usize>,
    visitor: F,
    tuples: usize,
}

impl<F: FnMut(&[usize])> TupleSearch<'_, F> {
    fn run(&mut self, usable: BitRow) {
        if self.d == 0 {
            self.tuples += 1;
            (self.visitor)(&[]);
            return;
        }
        self.level(0, 0, &usable);
    }

    /// Returns the level to resume at when a failing `K` forces a backjump
    /// past the current level.
    fn level(&mut self, lvl: usize, start: usize, acc: &BitRow) -> Option<usize> {
        let limit = self.limits[lvl];
        let words = acc.words();
        let first_word = start / 64;
        for (wi, &w) in words.iter().enumerate().skip(first_word) {
            let mut word = w;
            if wi == first_word {
                word &= !((1u64 << (start % 64)) - 1);
            }
            while word != 0 {
                let j = wi * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                if j >= limit {
                    return None;
                }
                self.chosen.push(j);
                let jump = if lvl + 1 == self.d {
                    match self.failing_level() {
                        None => {
                            self.tuples += 1;
                            (self.visitor)(&self.chosen);
                            None
                        }
                        Some(m) => Some(m),
                    }
                } else {
                    let mut next = acc.clone();
                    next.and_assign(&self.index.pair_bv[j]);
                    self.level(lvl + 1, j, &next)
                };
                self.chosen.pop();
                if let Some(m) = jump {
                    if m < lvl {
                        return Some(m);
                    }
                }
            }
        }
        None
    }

    /// Level `max(K)` of the first violated `K` with `|K| >= 3`.
    fn failing_level(&mut self) -> Option<usize> {
        let sets = &self.index.maximal_sets;
        for &(mask, size, max) in &self.big_subsets {
            let mut union = 0u64;
            for lvl in VertexSet(mask) {
                union |= sets[self.chosen[lvl]].bits();
            }
            if self.memo.alpha(self.all & !union) as usize > self.index.tbound - size {
                return Some(max);
            }
        }
        None
    }
}

/// Per-level exclusive index limits implied by the tail blocks: with `r`
/// picks still to come after this one, the last `r` blocks are off limits.
fn block_limits(index: &MaximalISIndex, d: usize) -> Vec<usize> {
    let k = index.block_boundaries.len();
    (0..d)
        .map(|lvl| {
            let after = d - 1 - lvl;
            if after == 0 {
                index.len()
            } else if after >= k {
                index.tail_start()
            } else {
                index.block_boundaries[k - after]
            }
        })
        .collect()
}

/// Visits every multiset of `d` maximal sets (as non-decreasing index
/// tuples) satisfying the full compatibility condition, exactly once.
/// Returns the number of tuples visited.
pub fn search_compatible_maximal_tuples<F: FnMut(&[usize])>(
    index: &MaximalISIndex,
    d: usize,
    memo: &mut AlphaMemo,
    visitor: F,
) -> usize {
    let usable = BitRow::ones(index.len());
    search_with_usable(index, d, memo, usable, visitor)
}

fn search_with_usable<F: FnMut(&[usize])>(
    index: &MaximalISIndex,
    d: usize,
    memo: &mut AlphaMemo,
    usable: BitRow,
    visitor: F,
) -> usize {
    let mut search = TupleSearch {
        index,
        all: index.core.vertices().bits(),
        memo,
        d,
        big_subsets: level_subsets(d, 3),
        limits: block_limits(index, d),
        chosen: Vec::with_capacity(d),
        visitor,
        tuples: 0,
    };
    search.run(usable);
    search.tuples
}

/// Expands a compatible maximal tuple into tuples of allowed subsets with
/// `Σ|S_i| <= budget`, each rechecked for full compatibility. Positions that
/// share a maximal set take non-decreasing subset positions, so every
/// multiset is produced once. Returns the number of tuples visited.
pub fn expand_maximal_solution<F: FnMut(&[VertexSet])>(
    index: &MaximalISIndex,
    tuple: &[usize],
    budget: usize,
    memo: &mut AlphaMemo,
    mut visitor: F,
) -> usize {
    let d = tuple.len();
    let lists: Vec<&[VertexSet]> = tuple.iter().map(|&i| index.allowed_subsets[i].as_slice()).collect();
    if lists.iter().any(|l| l.is_empty()) {
        return 0;
    }
    // suffix_min[p] = least possible Σ|S_q| over q >= p
    let mut suffix_min = vec![0usize; d + 1];
    for p in (0..d).rev() {
        suffix_min[p] = suffix_min[p + 1] + lists[p][0].len();
    }
    if suffix_min[0] > budget {
        return 0;
    }
    // Subsets K whose largest member is p, grouped by p; |K| >= 2.
    let mut by_max: Vec<Vec<(u64, usize)>> = vec![Vec::new(); d];
    for (mask, size, max) in level_subsets(d, 2) {
        by_max[max].push((mask, size));
    }
    let mut ex = Expansion {
        tuple,
        lists,
        suffix_min,
        by_max,
        all: index.core.vertices().bits(),
        tbound: index.tbound,
        budget,
        memo,
        chosen: Vec::with_capacity(d),
        chosen_pos: Vec::with_capacity(d),
        count: 0,
    };
    ex.rec(0, 0, &mut visitor);
    ex.count
}

struct Expansion<'a> {
    tuple: &'a [usize],
    lists: Vec<&'a [VertexSet]>,
    suffix_min: Vec<usize>,
    by_max: Vec<Vec<(u64, usize)>>,
    all: u64,
    tbound: usize,
    budget: usize,
    memo: &'a mut AlphaMemo,
    chosen: Vec<VertexSet>,
    chosen_pos: Vec<usize>,
    count: usize,
}

impl Expansion<'_> {
    fn rec<F: FnMut(&[VertexSet])>(&mut self, p: usize, used: usize, visitor: &mut F) {
        if p == self.tuple.len() {
            self.count += 1;
            visitor(&self.chosen);
            return;
        }
        let from = if p > 0 && self.tuple[p] == self.tuple[p - 1] { self.chosen_pos[p - 1] } else { 0 };
        let list = self.lists[p];
        for (k, &s) in list.iter().enumerate().skip(from) {
            // Lists are sorted by size, so the budget cut is final.
            if used + s.len() + self.suffix_min[p + 1] > self.budget {
                break;
            }
            self.chosen.push(s);
            self.chosen_pos.push(k);
            if self.consistent_at(p) {
                self.rec(p + 1, used + s.len(), visitor);
            }
            self.chosen.pop();
            self.chosen_pos.pop();
        }
    }

    /// All `K` with `max K = p` satisfy the independence bound.
    fn consistent_at(&mut self, p: usize) -> bool {
        for i in 0..self.by_max[p].len() {
            let (mask, size) = self.by_max[p][i];
            let mut union = 0u64;
            for lvl in VertexSet(mask) {
                union |= self.chosen[lvl].bits();
            }
            if self.memo.alpha(self.all & !union) as usize > self.tbound - size {
                return false;
            }
        }
        true
    }
}

/// Runs the full gluing search, passing each valid tuple `(S_1..S_d)` to
/// `visitor` in the raw layout of [`construct_glued_graph`]. Edge budget and
/// degree floor are already enforced.
pub fn glue_tuples<F: FnMut(&[VertexSet])>(problem: &GluingProblem, mut visitor: F) -> Result<GlueStats> {
    problem.validate()?;
    let mut stats = GlueStats::default();
    let d = problem.apex_degree;
    let core = &problem.core;
    let Some(budget) = problem.subset_budget() else {
        return Ok(stats);
    };
    if problem.min_degree.is_some_and(|m| d < m) {
        return Ok(stats);
    }
    if d == 0 {
        // Core plus an isolated apex; valid because alpha(core) < tbound.
        if core.min_degree() >= problem.min_degree.unwrap_or(0) || core.order() == 0 {
            stats.maximal_tuples = 1;
            stats.expanded_tuples = 1;
            stats.outputs = 1;
            visitor(&[]);
        }
        return Ok(stats);
    }

    let index = build_index(core, problem.tbound, problem.min_subset_size())?;
    stats.maximal_sets = index.len();
    let mut usable = BitRow::new(index.len());
    for (i, l) in index.allowed_subsets.iter().enumerate() {
        if !l.is_empty() {
            usable.set(i);
        }
    }
    let floor = problem.min_degree.unwrap_or(0);
    let core_deg: Vec<usize> = core.degrees();
    let needs_degree_check = core_deg.iter().any(|&x| x < floor);

    let mut memo = AlphaMemo::new(core);
    let mut tuples = Vec::new();
    stats.maximal_tuples = search_with_usable(&index, d, &mut memo, usable, |t| tuples.push(t.to_vec()));
    for t in &tuples {
        stats.expanded_tuples += expand_maximal_solution(&index, t, budget, &mut memo, |sets| {
            if needs_degree_check {
                let mut cover = [0u8; MAX_ORDER];
                for s in sets {
                    for x in *s {
                        cover[x] += 1;
                    }
                }
                if core_deg.iter().enumerate().any(|(x, &dx)| dx + (cover[x] as usize) < floor) {
                    return;
                }
            }
            stats.outputs += 1;
            visitor(sets);
        });
    }
    Ok(stats)
}

/// All graphs of `R(3, tbound+1, n+1+d, e <= max_edges)` with a degree-`d`
/// vertex whose dual neighbourhood is the core, canonically deduplicated.
pub fn glue(problem: &GluingProblem) -> Result<GraphSet> {
    glue_with_stats(problem).map(|(set, _)| set)
}

pub fn glue_with_stats(problem: &GluingProblem) -> Result<(GraphSet, GlueStats)> {
    let mut seen: FxHashSet<CanonicalForm> = FxHashSet::default();
    let core = &problem.core;
    let stats = glue_tuples(problem, |sets| {
        seen.insert(canonical_form(&glued_unchecked(core, sets)));
    })?;
    let target_t = problem.tbound + 1;
    let out: GraphSet = seen.into_iter().collect();
    for f in &out {
        assert!(is_ramsey(&f.to_graph(), 3, target_t), "gluer produced a non-Ramsey graph {f}");
    }
    Ok((out, stats))
}

/// One degree class of a gluing census: cores of `core_spec` glued with
/// apex degree and degree floor `apex_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueStep {
    pub apex_degree: usize,
    pub core_spec: CensusSpec,
}

/// Steps that reach every graph of `target` through a minimum-degree vertex.
///
/// A graph with at most `e0` edges has minimum degree `δ <= 2*e0/n` and
/// `δ <= t-1`. Its neighbours of the minimum-degree vertex have degree at
/// least `δ`, so the dual neighbourhood has at most `e0 - δ^2` edges.
pub fn min_degree_steps(target: &CensusSpec) -> Vec<GlueStep> {
    let n = target.n;
    if n == 0 || target.t < 2 {
        return Vec::new();
    }
    let e0 = target.effective_max_edges();
    let top = (2 * e0 / n).min(target.t - 1).min(n - 1);
    (0..=top)
        .filter(|&d| d * d <= e0)
        .map(|d| GlueStep {
            apex_degree: d,
            core_spec: CensusSpec::new(3, target.t - 1, n - 1 - d).with_max_edges(e0 - d * d),
        })
        .collect()
}

/// Census of `target` by gluing at a minimum-degree vertex. `cores` maps an
/// order to the complete class `R(3, t-1, order)` (or a superset of the
/// edge-bounded class each step needs); orders missing from the map are
/// taken to be empty classes and named in the completeness text.
pub fn glue_census(target: &CensusSpec, cores: &BTreeMap<usize, Vec<Graph>>) -> Result<Census> {
    if target.s != 3 || target.t < 2 {
        return Err(Error::BadSpec(format!("{target}: gluing needs s = 3 and t >= 2")));
    }
    let e0 = target.effective_max_edges();
    let steps = min_degree_steps(target);
    let mut missing = Vec::new();
    let mut found: FxHashSet<CanonicalForm> = FxHashSet::default();
    for step in &steps {
        let Some(list) = cores.get(&step.core_spec.n) else {
            missing.push(step.core_spec.to_string());
            continue;
        };
        let bound = step.core_spec.max_edges.unwrap_or(usize::MAX);
        let part = list
            .par_iter()
            .filter(|c| c.edge_count() <= bound)
            .map(|c| {
                let problem = GluingProblem::new(c.clone(), step.apex_degree, target.t - 1, e0)
                    .with_min_degree(step.apex_degree);
                glue(&problem)
            })
            .try_reduce(GraphSet::new, |mut a, b| {
                a.extend(b);
                Ok(a)
            })?;
        found.extend(part);
    }
    let graphs: GraphSet = found.into_iter().filter(|f| target.edges_ok(f.to_graph().edge_count())).collect();
    let classes: Vec<String> = steps.iter().map(|s| format!("d={} over {}", s.apex_degree, s.core_spec)).collect();
    let mut completeness = format!(
        "a minimum-degree vertex of a graph in {target} has degree d <= {}; gluing {} with degree floor d",
        (2 * e0 / target.n.max(1)).min(target.t - 1),
        classes.join(", ")
    );
    if !missing.is_empty() {
        completeness.push_str(&format!("; classes taken as empty: {}", missing.join(", ")));
    }
    Ok(Census { spec: *target, graphs, completeness })
}
