//! Canonical labelling by partition refinement and a search tree over
//! individualised vertices.
//!
//! The canonical graph is the relabelling whose upper-triangle adjacency
//! string (graph6 bit order: `x(0,1), x(0,2), x(1,2), x(0,3), ...`) is
//! lexicographically smallest among the leaves of the search tree. Subtrees
//! are cut when their fixed prefix already compares greater than the best
//! leaf, and sibling branches are skipped when a discovered automorphism
//! maps an explored branch onto them.

use std::cmp::Ordering;
use std::fmt;

use crate::graph::{bit, low_mask, Graph, MAX_ORDER};
use crate::io::graph6;

/// Canonical byte string: graphs are isomorphic iff their forms are equal.
///
/// The bytes are the graph6 encoding of the canonically relabelled graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    /// Wraps bytes that are already the graph6 line of a canonical graph.
    pub fn from_canonical_graph6(bytes: Vec<u8>) -> Self {
        CanonicalForm(bytes)
    }

    /// The canonical representative graph.
    pub fn to_graph(&self) -> Graph {
        graph6::decode(&self.0).expect("canonical forms are valid graph6")
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("graph6 is ASCII")
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.as_str())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    CanonicalForm(graph6::encode(&canonical_graph(g)))
}

/// The canonically relabelled copy of `g`.
pub fn canonical_graph(g: &Graph) -> Graph {
    g.relabel(&canonical_labeling(g))
}

/// Permutation `perm` such that `g.relabel(&perm)` is canonical.
pub fn canonical_labeling(g: &Graph) -> Vec<usize> {
    let n = g.order();
    if n <= 1 {
        return (0..n).collect();
    }
    let mut search = Search::new(g.rows());
    let mut root = Partition::unit(n);
    let mut queue = Vec::with_capacity(MAX_ORDER);
    queue.push(root.cells[0]);
    refine(g.rows(), &mut root, &mut queue);
    let mut fixed = Vec::with_capacity(n);
    search.descend(&root, &mut fixed);
    let lab = search.best_lab;
    let mut perm = vec![0usize; n];
    for (p, &v) in lab[..n].iter().enumerate() {
        perm[v as usize] = p;
    }
    perm
}

/// Ordered partition of the vertex set into cells.
#[derive(Clone)]
struct Partition {
    cells: [u64; MAX_ORDER],
    len: usize,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut cells = [0u64; MAX_ORDER];
        cells[0] = low_mask(n);
        Partition { cells, len: 1 }
    }

    #[inline]
    fn is_discrete(&self, n: usize) -> bool {
        self.len == n
    }

    /// Number of leading singleton cells.
    #[inline]
    fn singleton_prefix(&self) -> usize {
        self.cells[..self.len].iter().take_while(|c| c.count_ones() == 1).count()
    }

    /// Replaces cell `i` by `parts` (in order).
    fn splice(&mut self, i: usize, parts: &[u64]) {
        let extra = parts.len() - 1;
        self.cells.copy_within(i + 1..self.len, i + 1 + extra);
        self.cells[i..i + parts.len()].copy_from_slice(parts);
        self.len += extra;
    }
}

/// Refines `part` to the coarsest equitable partition reachable from the
/// splitters in `queue`, splitting cells by neighbour counts in ascending
/// order.
fn refine(adj: &[u64], part: &mut Partition, queue: &mut Vec<u64>) {
    let mut by_count = [0u64; MAX_ORDER + 1];
    let mut parts = [0u64; MAX_ORDER];
    while let Some(w) = queue.pop() {
        let mut i = 0;
        while i < part.len {
            let c = part.cells[i];
            if c & (c - 1) == 0 {
                i += 1;
                continue;
            }
            let mut used: u128 = 0;
            let mut rest = c;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let k = (adj[v] & w).count_ones() as usize;
                if used & (1u128 << k) == 0 {
                    used |= 1u128 << k;
                    by_count[k] = 0;
                }
                by_count[k] |= bit(v);
            }
            if used & (used - 1) == 0 {
                i += 1;
                continue;
            }
            let mut np = 0;
            while used != 0 {
                let k = used.trailing_zeros() as usize;
                used &= used - 1;
                parts[np] = by_count[k];
                np += 1;
            }
            part.splice(i, &parts[..np]);
            queue.extend_from_slice(&parts[..np]);
            i += np;
        }
    }
}

struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    best: Option<[u64; MAX_ORDER]>,
    best_lab: [u8; MAX_ORDER],
    best_path: Vec<usize>,
    autos: Vec<[u8; MAX_ORDER]>,
    /// Depth to unwind to after an automorphism maps an explored subtree
    /// onto the current one.
    jump: Option<usize>,
}

const MAX_STORED_AUTOS: usize = 128;

impl<'a> Search<'a> {
    fn new(adj: &'a [u64]) -> Self {
        Search {
            adj,
            n: adj.len(),
            best: None,
            best_lab: [0; MAX_ORDER],
            best_path: Vec::new(),
            autos: Vec::new(),
            jump: None,
        }
    }

    /// Columns of the relabelled upper triangle for labels `0..k`; column `j`
    /// holds bit `i` iff labels `i < j` are adjacent.
    fn columns(&self, lab: &[u8], k: usize, pos: &[u8; MAX_ORDER], cols: &mut [u64; MAX_ORDER]) {
        for j in 0..k {
            let row = self.adj[lab[j] as usize];
            let mut c = 0u64;
            let mut rest = row;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let p = pos[w] as usize;
                if p < j {
                    c |= bit(p);
                }
            }
            cols[j] = c;
        }
    }

    fn descend(&mut self, part: &Partition, fixed: &mut Vec<usize>) {
        let n = self.n;
        let k = part.singleton_prefix();

        // Prune when the fixed prefix already exceeds the best leaf.
        if k >= 2 {
            if let Some(best) = &self.best {
                let mut lab = [0u8; MAX_ORDER];
                let mut pos = [u8::MAX; MAX_ORDER];
                for p in 0..k {
                    let v = part.cells[p].trailing_zeros() as u8;
                    lab[p] = v;
                    pos[v as usize] = p as u8;
                }
                let mut cols = [0u64; MAX_ORDER];
                self.columns(&lab, k, &pos, &mut cols);
                if compare_columns(&cols[..k], &best[..k]) == Ordering::Greater {
                    return;
                }
            }
        }

        if part.is_discrete(n) {
            self.leaf(part, fixed);
            return;
        }

        let target = (0..part.len).find(|&i| part.cells[i].count_ones() > 1).unwrap();
        let cell = part.cells[target];
        let mut tried = 0u64;
        let mut rest = cell;
        let mut queue = Vec::with_capacity(MAX_ORDER);
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if tried != 0 && self.equivalent_to_tried(fixed, v, tried) {
                continue;
            }
            tried |= bit(v);
            let mut child = part.clone();
            child.splice(target, &[bit(v), cell & !bit(v)]);
            queue.clear();
            queue.push(bit(v));
            refine(self.adj, &mut child, &mut queue);
            fixed.push(v);
            self.descend(&child, fixed);
            fixed.pop();
            if let Some(level) = self.jump {
                if fixed.len() > level {
                    return;
                }
                self.jump = None;
            }
        }
    }

    /// Whether some stored automorphism fixing `fixed` pointwise puts `v` in
    /// the same orbit as an already explored sibling.
    fn equivalent_to_tried(&self, fixed: &[usize], v: usize, tried: u64) -> bool {
        if self.autos.is_empty() {
            return false;
        }
        let n = self.n;
        let mut parent: [u8; MAX_ORDER] = [0; MAX_ORDER];
        for (i, p) in parent.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        fn find(parent: &mut [u8; MAX_ORDER], mut x: usize) -> usize {
            while parent[x] as usize != x {
                let up = parent[parent[x] as usize];
                parent[x] = up;
                x = up as usize;
            }
            x
        }
        let mut any = false;
        for gamma in &self.autos {
            if fixed.iter().any(|&f| gamma[f] as usize != f) {
                continue;
            }
            any = true;
            for x in 0..n {
                let a = find(&mut parent, x);
                let b = find(&mut parent, gamma[x] as usize);
                if a != b {
                    parent[a.max(b)] = a.min(b) as u8;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, v);
        let mut t = tried;
        while t != 0 {
            let u = t.trailing_zeros() as usize;
            t &= t - 1;
            if find(&mut parent, u) == root {
                return true;
            }
        }
        false
    }

    fn leaf(&mut self, part: &Partition, fixed: &[usize]) {
        let n = self.n;
        let mut lab = [0u8; MAX_ORDER];
        let mut pos = [0u8; MAX_ORDER];
        for p in 0..n {
            let v = part.cells[p].trailing_zeros() as u8;
            lab[p] = v;
            pos[v as usize] = p as u8;
        }
        let mut cols = [0u64; MAX_ORDER];
        self.columns(&lab, n, &pos, &mut cols);
        match &self.best {
            None => {
                self.best = Some(cols);
                self.best_lab = lab;
                self.best_path = fixed.to_vec();
            }
            Some(best) => match compare_columns(&cols[..n], &best[..n]) {
                Ordering::Less => {
                    self.best = Some(cols);
                    self.best_lab = lab;
                    self.best_path = fixed.to_vec();
                }
                Ordering::Equal => {
                    let common = fixed.iter().zip(&self.best_path).take_while(|(a, b)| a == b).count();
                    self.jump = Some(common);
                    if self.autos.len() < MAX_STORED_AUTOS {
                        let mut gamma = [0u8; MAX_ORDER];
                        for p in 0..n {
                            gamma[self.best_lab[p] as usize] = lab[p];
                        }
                        self.autos.push(gamma);
                    }
                }
                Ordering::Greater => {}
            },
        }
    }
}

/// Lexicographic order of the graph6 bit strings described by two column
/// arrays of the same length.
#[inline]
fn compare_columns(a: &[u64], b: &[u64]) -> Ordering {
    for (&x, &y) in a.iter().zip(b) {
        if x != y {
            let i = (x ^ y).trailing_zeros();
            // The string with a 0 at the first differing position is smaller.
            return if (x >> i) & 1 == 0 { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_cycles_share_a_form() {
        let c5 = Graph::cycle(5);
        let r = c5.relabel(&[3, 0, 4, 1, 2]);
        assert_eq!(canonical_form(&c5), canonical_form(&r));
        assert_ne!(canonical_form(&c5), canonical_form(&Graph::path(5)));
    }

    #[test]
    fn canonical_graph_is_isomorphic_copy() {
        let g = Graph::petersen();
        let c = canonical_graph(&g);
        assert_eq!(c.edge_count(), 15);
        assert!(c.is_regular(3));
        assert_eq!(canonical_form(&c), canonical_form(&g));
    }

    #[test]
    fn trivial_orders() {
        assert_eq!(canonical_form(&Graph::empty(0)).as_str(), "?");
        assert_eq!(canonical_form(&Graph::empty(1)).as_str(), "@");
        assert_eq!(canonical_form(&Graph::complete(2)).as_str(), "A_");
    }

    #[test]
    fn symmetric_graphs_finish() {
        for g in [Graph::empty(30), Graph::complete(20), Graph::circulant(24, &[1, 5, 7])] {
            let f = canonical_form(&g);
            let mut perm: Vec<usize> = (0..g.order()).collect();
            perm.reverse();
            assert_eq!(f, canonical_form(&g.relabel(&perm)));
        }
    }

    #[test]
    fn column_order_matches_graph6_order() {
        // x(0,1)=1 vs x(0,1)=0: the graph with the edge is larger.
        assert_eq!(compare_columns(&[0, 1], &[0, 0]), Ordering::Greater);
        assert_eq!(compare_columns(&[0, 0, 0b01], &[0, 0, 0b10]), Ordering::Greater);
    }
}
