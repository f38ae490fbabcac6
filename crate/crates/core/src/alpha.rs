//! Lazily memoized independence numbers of vertex subsets of one graph.

use rustc_hash::FxHashMap;

use crate::graph::{bit, Graph, VertexSet};

/// Orders up to this size use a flat table with one byte per subset.
pub const DEFAULT_FLAT_THRESHOLD: usize = 27;

enum Table {
    /// `alpha + 1` per subset mask, `0` meaning not yet computed.
    Flat(Vec<u8>),
    Map(FxHashMap<u64, u8>),
}

/// Memo table of `alpha(G[X])` for subsets `X` of a fixed graph.
///
/// Owned by a single worker; never shared.
pub struct AlphaMemo {
    adj: Vec<u64>,
    table: Table,
}

impl AlphaMemo {
    pub fn new(g: &Graph) -> Self {
        Self::with_threshold(g, DEFAULT_FLAT_THRESHOLD)
    }

    /// Uses a flat table when `g.order() <= flat_threshold`, a hash map otherwise.
    pub fn with_threshold(g: &Graph, flat_threshold: usize) -> Self {
        let n = g.order();
        let table = if n <= flat_threshold {
            Table::Flat(vec![0u8; 1usize << n])
        } else {
            Table::Map(FxHashMap::default())
        };
        AlphaMemo { adj: g.rows().to_vec(), table }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// Size of the largest independent set inside `subset`.
    #[inline]
    pub fn independence_number(&mut self, subset: VertexSet) -> usize {
        self.alpha(subset.bits()) as usize
    }

    /// Memoized `alpha`; the raw-mask form used in the hot search loops.
    #[inline]
    pub fn alpha(&mut self, x: u64) -> u8 {
        if x == 0 {
            return 0;
        }
        if let Some(a) = self.lookup(x) {
            return a;
        }
        let a = self.compute(x);
        self.store(x, a);
        a
    }

    /// Number of subsets currently memoized.
    pub fn cached(&self) -> usize {
        match &self.table {
            Table::Flat(t) => t.iter().filter(|&&b| b != 0).count(),
            Table::Map(m) => m.len(),
        }
    }

    #[inline]
    fn lookup(&self, x: u64) -> Option<u8> {
        match &self.table {
            Table::Flat(t) => {
                let v = t[x as usize];
                (v != 0).then(|| v - 1)
            }
            Table::Map(m) => m.get(&x).copied(),
        }
    }

    #[inline]
    fn store(&mut self, x: u64, a: u8) {
        match &mut self.table {
            Table::Flat(t) => t[x as usize] = a + 1,
            Table::Map(m) => {
                m.insert(x, a);
            }
        }
    }

    fn compute(&mut self, x: u64) -> u8 {
        // Branch on the lowest-index vertex of maximum degree inside x.
        let mut branch = 0usize;
        let mut best = -1i32;
        let mut rest = x;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.adj[v] & x).count_ones() as i32;
            if d > best {
                best = d;
                branch = v;
            }
        }
        if best == 0 {
            return x.count_ones() as u8;
        }
        let without = self.alpha(x & !bit(branch));
        let with = 1 + self.alpha(x & !self.adj[branch] & !bit(branch));
        without.max(with)
    }
}

/// Independence number of the subgraph induced by `subset`, using a fresh
/// memo for `g`.
pub fn independence_number(g: &Graph, subset: VertexSet) -> usize {
    AlphaMemo::new(g).independence_number(subset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let c5 = Graph::cycle(5);
        assert_eq!(independence_number(&c5, c5.vertices()), 2);
        assert_eq!(independence_number(&c5, VertexSet::EMPTY), 0);
        let c13 = Graph::circulant(13, &[1, 5]);
        assert_eq!(independence_number(&c13, c13.vertices()), 4);
        assert_eq!(independence_number(&Graph::petersen(), VertexSet::full(10)), 4);
    }

    #[test]
    fn flat_and_hashed_tables_agree() {
        let g = Graph::circulant(13, &[1, 5]);
        let mut flat = AlphaMemo::with_threshold(&g, 27);
        let mut map = AlphaMemo::with_threshold(&g, 0);
        for x in (0u64..1 << 13).step_by(7) {
            assert_eq!(flat.alpha(x), map.alpha(x), "subset {x:#b}");
        }
        assert!(map.cached() > 0);
    }
}
