//! Independent brute-force oracles shared by the integration tests. Nothing
//! here calls into the search code it is used to check.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use ramsey_glue::{canonical_form, CanonicalForm, Graph};

pub type Forms = BTreeSet<CanonicalForm>;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Random maximal-ish triangle-free graph: candidate edges in random order,
/// each kept unless it closes a triangle, stopping after `tries` candidates.
pub fn random_triangle_free(rng: &mut StdRng, n: usize, tries: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut adj = vec![0u64; n];
    for &(u, v) in pairs.iter().take(tries) {
        if adj[u] & adj[v] == 0 {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        edges.extend((u + 1..n).filter(|&v| adj[u] >> v & 1 == 1).map(|v| (u, v)));
    }
    Graph::from_edges(n, &edges)
}

pub fn random_permutation(rng: &mut StdRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn adjacent(g: &Graph, u: usize, v: usize) -> bool {
    g.rows()[u] >> v & 1 == 1
}

pub fn mask_is_independent(g: &Graph, mask: u64) -> bool {
    (0..g.order()).all(|v| mask >> v & 1 == 0 || g.rows()[v] & mask == 0)
}

/// Plain exponential recursion, no memo.
pub fn brute_alpha(g: &Graph, mask: u64) -> usize {
    if mask == 0 {
        return 0;
    }
    let v = mask.trailing_zeros() as usize;
    let without = mask & !(1 << v);
    brute_alpha(g, without).max(1 + brute_alpha(g, without & !g.rows()[v]))
}

/// Every independent subset of a graph with at most 20 vertices, as masks.
pub fn all_independent_masks(g: &Graph) -> Vec<u64> {
    let n = g.order();
    assert!(n <= 20);
    (0..1u64 << n).filter(|&m| mask_is_independent(g, m)).collect()
}

pub fn brute_is_ramsey(g: &Graph, s: usize, t: usize) -> bool {
    let all = if g.order() == 64 { u64::MAX } else { (1u64 << g.order()) - 1 };
    brute_alpha(&g.complement(), all) < s && brute_alpha(g, all) < t
}

/// All ways to add one vertex to `g` keeping it in R(3, t), by trying every
/// neighbourhood mask.
pub fn brute_extensions(g: &Graph, t: usize, max_edges: Option<usize>) -> Forms {
    let n = g.order();
    let mut out = Forms::new();
    for m in 0..1u64 << n {
        if max_edges.is_some_and(|e| g.edge_count() + m.count_ones() as usize > e) {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = g.edges().collect();
        edges.extend((0..n).filter(|&x| m >> x & 1 == 1).map(|x| (x, n)));
        let h = Graph::from_edges(n + 1, &edges);
        if brute_is_ramsey(&h, 3, t) {
            out.insert(canonical_form(&h));
        }
    }
    out
}

/// All graphs of R(3, t, n) up to isomorphism for small n, by canonical
/// closure of brute-force one-vertex extensions.
pub fn brute_census(t: usize, max_n: usize) -> Vec<Vec<Graph>> {
    let mut levels = vec![vec![Graph::empty(0)]];
    for _ in 1..=max_n {
        let mut next = Forms::new();
        for g in levels.last().unwrap() {
            next.extend(brute_extensions(g, t, None));
        }
        levels.push(next.iter().map(|f| f.to_graph()).collect());
    }
    levels
}

/// Apex `core.order() + d` joined to `v_i = core.order() + i`, each `v_i`
/// joined to the core vertices of `sets[i]`.
pub fn glue_by_hand(core: &Graph, sets: &[u64]) -> Graph {
    let n = core.order();
    let d = sets.len();
    let mut edges: Vec<(usize, usize)> = core.edges().collect();
    for (i, &s) in sets.iter().enumerate() {
        edges.push((n + i, n + d));
        edges.extend((0..n).filter(|&x| s >> x & 1 == 1).map(|x| (x, n + i)));
    }
    Graph::from_edges(n + d + 1, &edges)
}

/// Every multiset of `d` independent sets of the core, glued and filtered
/// by membership in R(3, tbound + 1).
pub fn glue_oracle(core: &Graph, d: usize, tbound: usize) -> Forms {
    let sets = all_independent_masks(core);
    let mut out = Forms::new();
    let mut pick = vec![0usize; d];
    fn rec(core: &Graph, sets: &[u64], tbound: usize, pick: &mut Vec<usize>, at: usize, from: usize, out: &mut Forms) {
        if at == pick.len() {
            let chosen: Vec<u64> = pick.iter().map(|&i| sets[i]).collect();
            let g = glue_by_hand(core, &chosen);
            if brute_is_ramsey(&g, 3, tbound + 1) {
                out.insert(canonical_form(&g));
            }
            return;
        }
        for i in from..sets.len() {
            pick[at] = i;
            rec(core, sets, tbound, pick, at + 1, i, out);
        }
    }
    rec(core, &sets, tbound, &mut pick, 0, 0, &mut out);
    out
}

/// Brute-force isomorphism test for tiny graphs.
pub fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    if a.order() != b.order() || a.edge_count() != b.edge_count() {
        return false;
    }
    let n = a.order();
    permutations(n).iter().any(|p| a.edges().all(|(u, v)| adjacent(b, p[u], p[v])))
}
