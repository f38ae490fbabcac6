//! Small undirected graphs (at most 64 vertices) stored as one adjacency
//! bitmask per vertex, together with the Ramsey-specific primitives the rest
//! of the crate is built on.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use crate::error::{Error, Result};

/// Largest supported order; a vertex set is a single `u64`.
pub const MAX_ORDER: usize = 64;

#[inline(always)]
pub(crate) const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask with the lowest `n` bits set.
#[inline(always)]
pub const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A set of vertices of some graph, as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// All vertices `0..n`.
    pub const fn full(n: usize) -> Self {
        VertexSet(low_mask(n))
    }

    pub const fn singleton(v: usize) -> Self {
        VertexSet(bit(v))
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        VertexSet(vs.into_iter().fold(0, |m, v| m | bit(v)))
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn contains(self, v: usize) -> bool {
        self.0 & bit(v) != 0
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= bit(v);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !bit(v);
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Lowest vertex in the set.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Vertices {
        Vertices(self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: Self) -> Self {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: Self) -> Self {
        VertexSet(self.0 | rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: Self) -> Self {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    /// Complement in the full 64-bit universe; mask with [`VertexSet::full`].
    fn not(self) -> Self {
        VertexSet(!self.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_vertices(iter)
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Vertices;
    fn into_iter(self) -> Vertices {
        Vertices(self.0)
    }
}

/// Iterator over the members of a bitmask, in increasing order.
#[derive(Clone, Debug)]
pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Vertices {}

/// Simple undirected graph on vertices `0..order`.
///
/// `adj[v]` holds the neighbours of `v`; the representation is kept
/// symmetric and loop-free by every constructor.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.order())?;
        let mut first = true;
        for (u, v) in self.edges() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    ///
    /// Panics if `n > 64`.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_ORDER, "graph order {n} exceeds {MAX_ORDER}");
        Graph { adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Builds a graph from raw adjacency rows, validating symmetry,
    /// irreflexivity and the absence of out-of-range bits.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self> {
        let n = adj.len();
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge(n));
        }
        let mask = low_mask(n);
        for (v, &row) in adj.iter().enumerate() {
            if row & !mask != 0 {
                return Err(Error::InvalidAdjacency(format!("row {v} has bits beyond order {n}")));
            }
            if row & bit(v) != 0 {
                return Err(Error::InvalidAdjacency(format!("loop at vertex {v}")));
            }
            for w in VertexSet(row) {
                if adj[w] & bit(v) == 0 {
                    return Err(Error::InvalidAdjacency(format!("edge {v}-{w} is not symmetric")));
                }
            }
        }
        Ok(Graph { adj })
    }

    /// Wraps rows already known to be valid.
    pub(crate) fn from_rows_unchecked(adj: Vec<u64>) -> Self {
        debug_assert!(Graph::from_adjacency(adj.clone()).is_ok());
        Graph { adj }
    }

    /// Cycle `C_n` on `0..n` (requires `n >= 3`).
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Path `P_n` on `n` vertices.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 0..n {
            g.adj[v] = low_mask(n) & !bit(v);
        }
        g
    }

    /// Circulant graph on `Z_n` joining `i` and `i ± d` for each distance `d`.
    pub fn circulant(n: usize, distances: &[usize]) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for &d in distances {
                let j = (i + d) % n;
                if j != i {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// All vertices of the graph.
    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.order())
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & bit(v) != 0
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "loops are not allowed");
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
    }

    /// Appends a vertex adjacent to `nbrs`, returning its index.
    pub fn add_vertex(&mut self, nbrs: VertexSet) -> usize {
        let n = self.order();
        assert!(n < MAX_ORDER, "graph order would exceed {MAX_ORDER}");
        debug_assert!(nbrs.bits() & !low_mask(n) == 0);
        for u in nbrs {
            self.adj[u] |= bit(n);
        }
        self.adj.push(nbrs.bits());
        n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, &row)| VertexSet(row & !low_mask(u + 1)).iter().map(move |v| (u, v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).min().unwrap_or(0)
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|r| r.count_ones() as usize == d)
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let mask = low_mask(n);
        Graph { adj: (0..n).map(|v| !self.adj[v] & mask & !bit(v)).collect() }
    }

    /// Induced subgraph on `keep`, plus the map from new index to old vertex.
    pub fn induced_subgraph(&self, keep: VertexSet) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = keep.iter().collect();
        let mut inv = [usize::MAX; MAX_ORDER];
        for (i, &v) in map.iter().enumerate() {
            inv[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| VertexSet(self.adj[v] & keep.bits()).iter().fold(0u64, |m, w| m | bit(inv[w])))
            .collect();
        (Graph { adj }, map)
    }

    /// Graph with vertex `v` deleted (higher indices shift down by one).
    pub fn delete_vertex(&self, v: usize) -> Graph {
        self.induced_subgraph(self.vertices() - VertexSet::singleton(v)).0
    }

    /// Relabelled copy where old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let n = self.order();
        assert_eq!(perm.len(), n);
        let mut adj = vec![0u64; n];
        for v in 0..n {
            adj[perm[v]] = VertexSet(self.adj[v]).iter().fold(0u64, |m, w| m | bit(perm[w]));
        }
        Graph { adj }
    }

    /// Whether `set` contains no edge.
    #[inline]
    pub fn is_independent(&self, set: VertexSet) -> bool {
        set.iter().all(|v| self.adj[v] & set.bits() == 0)
    }
}

/// True iff `g` has no three mutually adjacent vertices.
pub fn is_triangle_free(g: &Graph) -> bool {
    let rows = g.rows();
    for u in 0..g.order() {
        // Only look at v > u so each edge is inspected once.
        let later = rows[u] & !low_mask(u + 1);
        for v in VertexSet(later) {
            if rows[u] & rows[v] != 0 {
                return false;
            }
        }
    }
    true
}

/// Whether `subset` contains an independent set of size `k`.
///
/// Branch and bound with early exit; never computes the full independence
/// number.
pub fn has_independent_set(g: &Graph, subset: VertexSet, k: usize) -> bool {
    has_indep_rec(g.rows(), subset.bits(), k)
}

fn has_indep_rec(adj: &[u64], mut cand: u64, mut k: usize) -> bool {
    loop {
        if k == 0 {
            return true;
        }
        if (cand.count_ones() as usize) < k {
            return false;
        }
        // Vertices with no neighbour inside the candidate set can always be
        // taken; otherwise branch on a vertex of minimum degree.
        let mut best = usize::MAX;
        let mut best_deg = u32::MAX;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (adj[v] & cand).count_ones();
            if d < best_deg {
                best_deg = d;
                best = v;
                if d == 0 {
                    break;
                }
            }
        }
        if best_deg == 0 {
            cand &= !bit(best);
            k -= 1;
            continue;
        }
        if has_indep_rec(adj, cand & !adj[best] & !bit(best), k - 1) {
            return true;
        }
        cand &= !bit(best);
    }
}

/// Whether `g` contains a clique on `k` vertices.
pub fn has_clique(g: &Graph, k: usize) -> bool {
    if k <= 1 {
        return k == 0 || g.order() > 0;
    }
    if k == 2 {
        return g.edge_count() > 0;
    }
    if k == 3 {
        return !is_triangle_free(g);
    }
    let comp = g.complement();
    has_independent_set(&comp, comp.vertices(), k)
}

/// True iff `g` has no clique of size `s` and no independent set of size `t`.
pub fn is_ramsey(g: &Graph, s: usize, t: usize) -> bool {
    !has_clique(g, s) && !has_independent_set(g, g.vertices(), t)
}

/// Induced subgraph on the vertices that are neither `v` nor adjacent to it,
/// with the map from new indices to original vertices.
pub fn dual_neighbourhood(g: &Graph, v: usize) -> (Graph, Vec<usize>) {
    let keep = g.vertices() - g.neighbours(v) - VertexSet::singleton(v);
    g.induced_subgraph(keep)
}

fn check_refdeg(g: &Graph, refdeg: usize) -> Result<()> {
    let max = g.max_degree();
    if refdeg < max {
        return Err(Error::RefDegreeTooSmall { refdeg, max_degree: max });
    }
    Ok(())
}

/// Weighted deficiency of `v`'s neighbourhood: the sum over neighbours `w`
/// of `refdeg - deg(w)`.
pub fn epsilon(g: &Graph, v: usize, refdeg: usize) -> Result<usize> {
    check_refdeg(g, refdeg)?;
    Ok(g.neighbours(v).iter().map(|w| refdeg - g.degree(w)).sum())
}

/// Degree histogram and total deficiency relative to a reference degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub refdeg: usize,
    /// degree -> number of vertices with that degree
    pub counts: BTreeMap<usize, usize>,
    /// sum over vertices of `refdeg - deg(v)`
    pub deficiency: usize,
}

pub fn degree_profile(g: &Graph, refdeg: usize) -> Result<DegreeProfile> {
    check_refdeg(g, refdeg)?;
    let mut counts = BTreeMap::new();
    let mut deficiency = 0;
    for v in 0..g.order() {
        let d = g.degree(v);
        *counts.entry(d).or_insert(0) += 1;
        deficiency += refdeg - d;
    }
    Ok(DegreeProfile { refdeg, counts, deficiency })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    #[test]
    fn triangle_free_examples() {
        assert!(is_triangle_free(&Graph::cycle(5)));
        assert!(!is_triangle_free(&Graph::complete(3)));
        assert!(is_triangle_free(&Graph::petersen()));
    }

    #[test]
    fn petersen_is_cubic() {
        let p = Graph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert!(p.is_regular(3));
    }

    #[test]
    fn independent_set_queries() {
        let c5 = Graph::cycle(5);
        assert!(!has_independent_set(&c5, c5.vertices(), 3));
        assert!(has_independent_set(&c5, c5.vertices(), 2));
        let e7 = Graph::empty(7);
        assert!(has_independent_set(&e7, e7.vertices(), 7));
        assert!(has_independent_set(&c5, VertexSet::EMPTY, 0));
        assert!(!has_independent_set(&c5, VertexSet::EMPTY, 1));
    }

    #[test]
    fn ramsey_examples() {
        assert!(is_ramsey(&Graph::cycle(5), 3, 3));
        assert!(is_ramsey(&Graph::circulant(13, &[1, 5]), 3, 5));
        assert!(!is_ramsey(&Graph::complete(4), 4, 2));
        assert!(!is_ramsey(&Graph::complete(3), 3, 9));
    }

    #[test]
    fn clique_detection_general_s() {
        let k5 = Graph::complete(5);
        assert!(has_clique(&k5, 5));
        assert!(!has_clique(&k5, 6));
        // C5 complement is C5, so no 3-clique either way.
        assert!(!has_clique(&Graph::cycle(5).complement(), 3));
        assert!(has_clique(&Graph::empty(1), 1));
        assert!(!has_clique(&Graph::empty(0), 1));
    }

    #[test]
    fn dual_neighbourhood_examples() {
        let c5 = Graph::cycle(5);
        for v in 0..5 {
            let (d, map) = dual_neighbourhood(&c5, v);
            assert_eq!(d.order(), 2);
            assert_eq!(d.edge_count(), 1);
            let mut expected = vec![(v + 2) % 5, (v + 3) % 5];
            expected.sort();
            assert_eq!(map, expected);
        }
        let p = Graph::petersen();
        for v in 0..10 {
            let (d, _) = dual_neighbourhood(&p, v);
            assert_eq!(d.order(), 6);
            assert_eq!(d.edge_count(), 6);
            assert!(d.is_regular(2));
            assert!(is_triangle_free(&d));
        }
        let (d, map) = dual_neighbourhood(&Graph::empty(1), 0);
        assert_eq!(d.order(), 0);
        assert!(map.is_empty());
    }

    #[test]
    fn epsilon_examples() {
        let nine_regular = Graph::circulant(18, &[1, 3, 5, 7, 9]);
        assert!(nine_regular.is_regular(9));
        assert_eq!(epsilon(&nine_regular, 0, 9).unwrap(), 0);
        assert_eq!(epsilon(&Graph::cycle(5), 2, 2).unwrap(), 0);
        assert_eq!(epsilon(&star(3), 0, 3).unwrap(), 6);
        assert!(matches!(epsilon(&star(3), 0, 2), Err(Error::RefDegreeTooSmall { .. })));
    }

    #[test]
    fn degree_profile_examples() {
        let p = degree_profile(&Graph::cycle(5), 2).unwrap();
        assert_eq!(p.counts, BTreeMap::from([(2, 5)]));
        assert_eq!(p.deficiency, 0);
        let p = degree_profile(&Graph::path(3), 2).unwrap();
        assert_eq!(p.counts, BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(p.deficiency, 2);
        let p = degree_profile(&Graph::petersen(), 4).unwrap();
        assert_eq!(p.counts, BTreeMap::from([(3, 10)]));
        assert_eq!(p.deficiency, 10);
        assert!(degree_profile(&Graph::petersen(), 2).is_err());
    }

    #[test]
    fn from_adjacency_validation() {
        assert!(Graph::from_adjacency(vec![0b10, 0b01]).is_ok());
        assert!(Graph::from_adjacency(vec![0b10, 0b00]).is_err());
        assert!(Graph::from_adjacency(vec![0b01]).is_err());
        assert!(Graph::from_adjacency(vec![0b100, 0]).is_err());
    }

    #[test]
    fn induced_and_relabel() {
        let c5 = Graph::cycle(5);
        let (sub, map) = c5.induced_subgraph(VertexSet::from_vertices([0, 1, 2]));
        assert_eq!(sub, Graph::path(3));
        assert_eq!(map, vec![0, 1, 2]);
        let r = c5.relabel(&[2, 4, 1, 3, 0]);
        assert_eq!(r.edge_count(), 5);
        assert!(r.is_regular(2));
        assert!(r.has_edge(2, 4));
    }
}
