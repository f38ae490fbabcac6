//! Pair gluing for regular targets.
//!
//! A `d`-regular target graph with nonadjacent vertices `v`, `w` whose
//! neighbourhoods are disjoint splits into two one-apex extensions of the
//! common core `G' = Γ - v - w - N(v) - N(w)`. Both extensions are produced
//! by the gluer, matched through the degrees they give the core vertices,
//! merged, completed with every triangle-safe cross edge and closed under
//! edge removals.
//!
//! Merged layout: core `0..m`, `N(v)` at `m..m+d`, `N(w)` at
//! `m+d..m+2d`, `v = m+2d`, `w = m+2d+1`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::gluer::{glue_tuples, GluingProblem, GraphSet};
use crate::graph::{bit, dual_neighbourhood, is_ramsey, Graph, VertexSet, MAX_ORDER};
use crate::spec::CensusSpec;

/// Degrees of the core vertices inside one extension graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairKey(pub Vec<u8>);

impl PairKey {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Key of `ext` where `embedding[x]` is the vertex of `ext` playing core
/// vertex `x`.
pub fn pair_key(core: &Graph, ext: &Graph, embedding: &[usize]) -> Result<PairKey> {
    let m = core.order();
    if embedding.len() != m {
        return Err(Error::BadEmbedding(format!("{} images for {m} core vertices", embedding.len())));
    }
    let mut image = VertexSet::EMPTY;
    for &y in embedding {
        if y >= ext.order() || image.contains(y) {
            return Err(Error::BadEmbedding(format!("image {y} repeated or out of range")));
        }
        image.insert(y);
    }
    for x in 0..m {
        for z in x + 1..m {
            if core.has_edge(x, z) != ext.has_edge(embedding[x], embedding[z]) {
                return Err(Error::BadEmbedding(format!("pair ({x},{z}) is not preserved")));
            }
        }
    }
    Ok(PairKey(embedding.iter().map(|&y| ext.degree(y) as u8).collect()))
}

/// Key of the raw gluer layout: `deg_core(x) + #{i : x ∈ S_i}`.
pub fn tuple_key(core: &Graph, sets: &[VertexSet]) -> PairKey {
    let mut key: Vec<u8> = core.degrees().into_iter().map(|d| d as u8).collect();
    for s in sets {
        for x in *s {
            key[x] += 1;
        }
    }
    PairKey(key)
}

/// The key a partner extension must have for every core vertex to reach
/// degree `d_reg`: `d_reg + deg_core(x) - key[x]`.
pub fn complement_key(key: &PairKey, core: &Graph, d_reg: usize) -> Result<PairKey> {
    let mut out = Vec::with_capacity(key.len());
    for (x, &k) in key.0.iter().enumerate() {
        let limit = d_reg + core.degree(x);
        if k as usize > limit {
            return Err(Error::NoPartnerKey { vertex: x, value: k as usize, limit });
        }
        out.push((limit - k as usize) as u8);
    }
    Ok(PairKey(out))
}

#[derive(Clone, Debug)]
pub struct PairGlueProblem {
    pub core: Graph,
    pub target_t: usize,
    pub target_n: usize,
    pub target_degree: usize,
    pub extension_spec: CensusSpec,
}

impl PairGlueProblem {
    /// Fills in `target_n = m + 2 + 2d` and the default extension class
    /// `R(3, t-1, m+1+d)`.
    pub fn new(core: Graph, target_t: usize, target_degree: usize) -> Self {
        let m = core.order();
        let extension_spec = CensusSpec::new(3, target_t.saturating_sub(1), m + 1 + target_degree);
        PairGlueProblem { core, target_t, target_n: m + 2 + 2 * target_degree, target_degree, extension_spec }
    }

    pub fn with_extension_spec(mut self, spec: CensusSpec) -> Self {
        self.extension_spec = spec;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.core.order();
        let d = self.target_degree;
        if self.target_n != m + 2 + 2 * d {
            return Err(Error::InvalidProblem(format!(
                "target order {} differs from {m} + 2 + 2*{d}",
                self.target_n
            )));
        }
        if self.target_n > MAX_ORDER {
            return Err(Error::OrderTooLarge(self.target_n));
        }
        if self.target_t < 3 {
            return Err(Error::InvalidProblem(format!("target independence bound {} is below 3", self.target_t)));
        }
        let ext = &self.extension_spec;
        if ext.s != 3 || ext.t + 1 != self.target_t || ext.n != m + 1 + d {
            return Err(Error::InvalidProblem(format!("extension class {ext} does not fit the core")));
        }
        if !is_ramsey(&self.core, 3, self.target_t - 2) {
            return Err(Error::NotRamsey { t: self.target_t - 2 });
        }
        Ok(())
    }
}

/// Counters from one pair-gluing run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairStats {
    pub extensions: usize,
    pub excluded: usize,
    pub buckets: usize,
    pub merges: usize,
    pub degree_rejects: usize,
    pub ramsey_merges: usize,
    pub outputs: usize,
}

/// Regular target graphs decomposable over the core; see the module docs.
pub fn pair_glue(problem: &PairGlueProblem) -> Result<GraphSet> {
    pair_glue_excluding(problem, &[]).map(|(set, _)| set)
}

/// [`pair_glue`] with extension graphs dropped when some dual neighbourhood
/// lies in an already processed core class.
pub fn pair_glue_excluding(problem: &PairGlueProblem, processed: &[CensusSpec]) -> Result<(GraphSet, PairStats)> {
    problem.validate()?;
    let core = &problem.core;
    let d = problem.target_degree;
    let ext = &problem.extension_spec;
    let mut stats = PairStats::default();
    // N(apex) is independent in the extension, so no extension exists.
    if d > problem.target_t - 2 {
        return Ok((GraphSet::new(), stats));
    }

    let gluing = GluingProblem::new(core.clone(), d, problem.target_t - 2, ext.effective_max_edges());
    let mut sides: Vec<Vec<VertexSet>> = Vec::new();
    glue_tuples(&gluing, |sets| {
        let e = core.edge_count() + d + sets.iter().map(|s| s.len()).sum::<usize>();
        if ext.edges_ok(e) && tuple_key(core, sets).0.iter().all(|&k| k as usize <= d) {
            sides.push(sets.to_vec());
        }
    })?;
    stats.extensions = sides.len();
    if !processed.is_empty() {
        sides.retain(|sets| !has_dual_in(&extension_graph(core, sets), processed));
        stats.excluded = stats.extensions - sides.len();
    }

    let mut buckets: FxHashMap<PairKey, Vec<usize>> = FxHashMap::default();
    for (i, sets) in sides.iter().enumerate() {
        buckets.entry(tuple_key(core, sets)).or_default().push(i);
    }
    stats.buckets = buckets.len();

    let partials: Vec<(FxHashSet<CanonicalForm>, PairStats)> = sides
        .par_iter()
        .map(|first| {
            let mut local = PairStats::default();
            let mut found = FxHashSet::default();
            let partner = complement_key(&tuple_key(core, first), core, d).expect("keys are bounded by d_reg");
            for &j in buckets.get(&partner).map_or(&[][..], Vec::as_slice) {
                local.merges += 1;
                let g = merge(core, first, &sides[j]);
                if g.min_degree() < d {
                    local.degree_rejects += 1;
                    continue;
                }
                if !is_ramsey(&g, 3, problem.target_t) {
                    continue;
                }
                local.ramsey_merges += 1;
                for f in edge_removal_closure(&g, d, problem.target_t) {
                    if f.to_graph().is_regular(d) {
                        found.insert(f);
                    }
                }
            }
            (found, local)
        })
        .collect();

    let mut out = GraphSet::new();
    for (found, local) in partials {
        stats.merges += local.merges;
        stats.degree_rejects += local.degree_rejects;
        stats.ramsey_merges += local.ramsey_merges;
        out.extend(found);
    }
    stats.outputs = out.len();
    Ok((out, stats))
}

/// One extension in the gluer layout: core, `v_i = m + i`, apex `m + d`.
fn extension_graph(core: &Graph, sets: &[VertexSet]) -> Graph {
    crate::gluer::construct_glued_graph(core, sets).expect("gluer tuples are independent")
}

/// Merged graph with every triangle-safe cross edge added in lexicographic
/// order of `(i, j)`.
fn merge(core: &Graph, left: &[VertexSet], right: &[VertexSet]) -> Graph {
    let m = core.order();
    let d = left.len();
    let (v, w) = (m + 2 * d, m + 2 * d + 1);
    let mut adj = vec![0u64; m + 2 * d + 2];
    adj[..m].copy_from_slice(core.rows());
    for (offset, apex, sets) in [(m, v, left), (m + d, w, right)] {
        for (i, s) in sets.iter().enumerate() {
            let a = offset + i;
            adj[a] |= s.bits() | bit(apex);
            adj[apex] |= bit(a);
            for x in *s {
                adj[x] |= bit(a);
            }
        }
    }
    debug_assert!(adj[v] & adj[w] == 0 && adj[v] & bit(w) == 0);
    for i in m..m + d {
        for j in m + d..m + 2 * d {
            if adj[i] & adj[j] == 0 {
                adj[i] |= bit(j);
                adj[j] |= bit(i);
            }
        }
    }
    let g = Graph::from_adjacency(adj).expect("merged rows are symmetric");
    debug_assert!((0..m).all(|x| {
        let deg1 = core.degree(x) + left.iter().filter(|s| s.contains(x)).count();
        let deg2 = core.degree(x) + right.iter().filter(|s| s.contains(x)).count();
        g.degree(x) == deg1 + deg2 - core.degree(x)
    }));
    g
}

/// Every graph reachable from `g` by deleting edges whose endpoints both
/// have degree above `floor`, staying in `R(3, target_t)`. Includes `g`.
pub fn edge_removal_closure(g: &Graph, floor: usize, target_t: usize) -> GraphSet {
    let mut seen = FxHashSet::default();
    let mut stack = vec![g.clone()];
    seen.insert(canonical_form(g));
    while let Some(h) = stack.pop() {
        let degs = h.degrees();
        for (a, b) in h.edges().collect::<Vec<_>>() {
            if degs[a] <= floor || degs[b] <= floor {
                continue;
            }
            let mut next = h.clone();
            next.remove_edge(a, b);
            if !is_ramsey(&next, 3, target_t) {
                continue;
            }
            if seen.insert(canonical_form(&next)) {
                stack.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// Whether some dual neighbourhood of `g` lies in one of `classes`.
fn has_dual_in(g: &Graph, classes: &[CensusSpec]) -> bool {
    (0..g.order()).any(|u| {
        let (dual, _) = dual_neighbourhood(g, u);
        classes.iter().any(|c| c.contains(&dual))
    })
}

/// Drops every graph having some dual neighbourhood in a processed class.
pub fn exclusion_filter(outputs: &GraphSet, processed: &[CensusSpec]) -> GraphSet {
    outputs.iter().filter(|f| !has_dual_in(&f.to_graph(), processed)).cloned().collect()
}

/// One `core` line of a plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStep {
    pub core: CensusSpec,
    pub extension: Option<CensusSpec>,
    pub exclude: Vec<CensusSpec>,
}

/// A staged pair-gluing schedule.
///
/// ```text
/// target R(3,5,12) degree 3
/// core R(3,3,4)
/// core R(3,3,4) ext R(3,4,8,e=10) exclude R(3,3,3),R(3,3,4,e=2)
/// ```
///
/// Blank lines and `#` comments are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub target: CensusSpec,
    pub degree: usize,
    pub steps: Vec<PlanStep>,
}

impl Plan {
    pub fn parse(text: &str) -> Result<Plan> {
        let mut target = None;
        let mut steps = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| Error::Plan { line, msg };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let words: Vec<&str> = body.split_whitespace().collect();
            match words[0] {
                "target" => {
                    let [_, spec, "degree", d] = words[..] else {
                        return Err(err("expected `target <spec> degree <d>`".into()));
                    };
                    let spec: CensusSpec = spec.parse().map_err(|e| err(format!("{e}")))?;
                    let d: usize = d.parse().map_err(|_| err(format!("bad degree `{d}`")))?;
                    if target.replace((spec, d)).is_some() {
                        return Err(err("duplicate target".into()));
                    }
                }
                "core" => {
                    let mut step = PlanStep {
                        core: words.get(1).ok_or_else(|| err("missing core class".into()))?.parse().map_err(
                            |e| err(format!("{e}")),
                        )?,
                        extension: None,
                        exclude: Vec::new(),
                    };
                    let mut rest = &words[2..];
                    while let [key, value, tail @ ..] = rest {
                        match *key {
                            "ext" => step.extension = Some(value.parse().map_err(|e| err(format!("{e}")))?),
                            "exclude" => {
                                for part in split_specs(value) {
                                    step.exclude.push(part.parse().map_err(|e| err(format!("{e}")))?);
                                }
                            }
                            other => return Err(err(format!("unknown clause `{other}`"))),
                        }
                        rest = tail;
                    }
                    if !rest.is_empty() {
                        return Err(err(format!("dangling `{}`", rest[0])));
                    }
                    steps.push(step);
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let (target, degree) = target.ok_or(Error::Plan { line: 0, msg: "missing target line".into() })?;
        Ok(Plan { target, degree, steps })
    }
}

impl FromStr for Plan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Plan::parse(s)
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target {} degree {}", self.target, self.degree)?;
        for step in &self.steps {
            write!(f, "core {}", step.core)?;
            if let Some(e) = &step.extension {
                write!(f, " ext {e}")?;
            }
            if !step.exclude.is_empty() {
                let list: Vec<String> = step.exclude.iter().map(ToString::to_string).collect();
                write!(f, " exclude {}", list.join(","))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Splits `R(3,3,3),R(3,3,4,e=2)` at commas outside parentheses.
fn split_specs(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts.into_iter().filter(|p| !p.is_empty()).collect()
}

/// Runs every plan step over the cores of its class taken from `cores`.
pub fn run_plan(plan: &Plan, cores: &[Graph]) -> Result<(GraphSet, Vec<PairStats>)> {
    let mut out = BTreeSet::new();
    let mut all_stats = Vec::new();
    for step in &plan.steps {
        let mut step_stats = PairStats::default();
        for core in cores.iter().filter(|c| step.core.contains(c)) {
            let mut problem = PairGlueProblem::new(core.clone(), plan.target.t, plan.degree);
            if let Some(e) = step.extension {
                problem = problem.with_extension_spec(e);
            }
            if problem.target_n != plan.target.n {
                return Err(Error::InvalidProblem(format!(
                    "core class {} gives order {}, not {}",
                    step.core, problem.target_n, plan.target.n
                )));
            }
            let (found, s) = pair_glue_excluding(&problem, &step.exclude)?;
            step_stats.extensions += s.extensions;
            step_stats.excluded += s.excluded;
            step_stats.buckets += s.buckets;
            step_stats.merges += s.merges;
            step_stats.degree_rejects += s.degree_rejects;
            step_stats.ramsey_merges += s.ramsey_merges;
            out.extend(found.into_iter().filter(|f| plan.target.contains(&f.to_graph())));
        }
        step_stats.outputs = out.len();
        all_stats.push(step_stats);
    }
    Ok((out, all_stats))
}
