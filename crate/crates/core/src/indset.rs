//! Independent-set enumeration and the compatibility index used by the
//! gluing search.
//!
//! For a core graph `G'` and bound `t`, a *witness* is an independent
//! `(t-1)`-set of `G'`. Two candidate neighbourhoods `S`, `T` are pairwise
//! compatible iff no witness avoids both, i.e. `alpha(V \ (S ∪ T)) <= t-2`.
//! Each maximal set carries a bit row over the witnesses it avoids, so the
//! pairwise test is one AND over the rows.

use crate::error::{Error, Result};
use crate::graph::{bit, is_ramsey, low_mask, Graph, VertexSet};

/// Fixed-length bit vector over `u64` words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn new(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64)], len }
    }

    /// Row with bits `0..len` all set.
    pub fn ones(len: usize) -> Self {
        let mut r = BitRow::new(len);
        for (i, w) in r.words.iter_mut().enumerate() {
            *w = low_mask(len.saturating_sub(i * 64));
        }
        r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= bit(i % 64);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] & bit(i % 64) != 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// True iff no bit is set in both rows.
    #[inline]
    pub fn disjoint(&self, other: &BitRow) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    #[inline]
    pub fn and_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| VertexSet(w).iter().map(move |b| i * 64 + b))
    }
}

/// All maximal independent sets of `g`, sorted by bitmask value.
///
/// Bron–Kerbosch with pivoting, run on the complement's adjacency masks.
pub fn enumerate_maximal_independent_sets(g: &Graph) -> Vec<VertexSet> {
    let n = g.order();
    let all = low_mask(n);
    let comp: Vec<u64> = (0..n).map(|v| !g.rows()[v] & all & !bit(v)).collect();
    let mut out = Vec::new();
    bron_kerbosch(&comp, 0, all, 0, &mut out);
    out.sort_unstable();
    out.into_iter().map(VertexSet).collect()
}

fn bron_kerbosch(comp: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let mut pivot = 0;
    let mut best = -1i32;
    for u in VertexSet(p | x) {
        let c = (p & comp[u]).count_ones() as i32;
        if c > best {
            best = c;
            pivot = u;
        }
    }
    for v in VertexSet(p & !comp[pivot]) {
        bron_kerbosch(comp, r | bit(v), p & comp[v], x & comp[v], out);
        p &= !bit(v);
        x |= bit(v);
    }
}

/// All independent sets of size at least `min_size` (including the empty
/// set when `min_size == 0`), in depth-first lexicographic order.
pub fn enumerate_independent_sets(g: &Graph, min_size: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    indep_rec(g.rows(), 0, g.vertices().bits(), min_size, usize::MAX, &mut out);
    out
}

/// Independent sets of size exactly `k`.
pub fn independent_sets_of_size(g: &Graph, k: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    indep_rec(g.rows(), 0, g.vertices().bits(), k, k, &mut out);
    out
}

fn indep_rec(adj: &[u64], cur: u64, cand: u64, min: usize, max: usize, out: &mut Vec<VertexSet>) {
    let size = cur.count_ones() as usize;
    if size + (cand.count_ones() as usize) < min {
        return;
    }
    if size >= min {
        out.push(VertexSet(cur));
    }
    if size == max {
        return;
    }
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        // Only later vertices, so each set is produced once.
        indep_rec(adj, cur | bit(v), rest & !adj[v], min, max, out);
    }
}

/// Maximal independent sets of a core with their witness and pairwise
/// compatibility rows, allowed-subset lists and tail blocks.
#[derive(Clone, Debug)]
pub struct MaximalISIndex {
    pub core: Graph,
    pub tbound: usize,
    pub maximal_sets: Vec<VertexSet>,
    /// Independent `(tbound-1)`-sets of the core.
    pub witness_sets: Vec<VertexSet>,
    /// Per maximal set: bit `j` set iff `witness_sets[j]` avoids it.
    pub witness_bv: Vec<BitRow>,
    /// Per maximal set: bit `j` set iff pairwise compatible with set `j`.
    pub pair_bv: Vec<BitRow>,
    pub allowed_subsets: Vec<Vec<VertexSet>>,
    /// Start indices of the tail blocks, ascending. Block `b` spans
    /// `block_boundaries[b]..block_boundaries[b+1]` (the last one runs to
    /// the end). Members of one block are pairwise incompatible.
    pub block_boundaries: Vec<usize>,
}

impl MaximalISIndex {
    /// Index over the core's maximal sets, sorted by bitmask, with witness
    /// rows and pair rows but no block ordering or subset assignment.
    pub fn unordered(core: &Graph, tbound: usize) -> Result<Self> {
        if !is_ramsey(core, 3, tbound) {
            return Err(Error::NotRamsey { t: tbound });
        }
        let maximal_sets = enumerate_maximal_independent_sets(core);
        let witness_sets = if tbound == 0 { Vec::new() } else { independent_sets_of_size(core, tbound - 1) };
        let mut index = MaximalISIndex {
            core: core.clone(),
            tbound,
            maximal_sets,
            witness_sets,
            witness_bv: Vec::new(),
            pair_bv: Vec::new(),
            allowed_subsets: Vec::new(),
            block_boundaries: Vec::new(),
        };
        index.witness_bv = index.maximal_sets.iter().map(|&s| index.witness_row(s)).collect();
        index.compute_pair_bv();
        Ok(index)
    }

    /// Witness row for an arbitrary vertex set.
    pub fn witness_row(&self, set: VertexSet) -> BitRow {
        let mut row = BitRow::new(self.witness_sets.len());
        for (j, w) in self.witness_sets.iter().enumerate() {
            if w.is_disjoint(set) {
                row.set(j);
            }
        }
        row
    }

    fn compute_pair_bv(&mut self) {
        let m = self.maximal_sets.len();
        let mut pair = vec![BitRow::new(m); m];
        for i in 0..m {
            for j in i..m {
                if self.witness_bv[i].disjoint(&self.witness_bv[j]) {
                    pair[i].set(j);
                    pair[j].set(i);
                }
            }
        }
        self.pair_bv = pair;
    }

    pub fn len(&self) -> usize {
        self.maximal_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maximal_sets.is_empty()
    }

    #[inline]
    pub fn pairwise_compatible(&self, i: usize, j: usize) -> bool {
        self.pair_bv[i].get(j)
    }

    /// Index of the first tail block, or `len()` when there are none.
    pub fn tail_start(&self) -> usize {
        self.block_boundaries.first().copied().unwrap_or(self.len())
    }

    /// Range of block `b`.
    pub fn block(&self, b: usize) -> std::ops::Range<usize> {
        let start = self.block_boundaries[b];
        let end = self.block_boundaries.get(b + 1).copied().unwrap_or(self.len());
        start..end
    }
}

/// Builds the full index: maximal sets, witness and pair rows, block ordering,
/// then assignment of every independent set of size `>= min_subset_size`.
pub fn build_index(core: &Graph, tbound: usize, min_subset_size: usize) -> Result<MaximalISIndex> {
    let mut index = MaximalISIndex::unordered(core, tbound)?;
    order_blocks(&mut index);
    let all = enumerate_independent_sets(core, min_subset_size);
    assign_subset_representatives(&mut index, &all);
    Ok(index)
}

/// Assigns each set to the lowest-index maximal set containing it. Lists are
/// ordered by size, then by the order of `all_sets`.
pub fn assign_subset_representatives(index: &mut MaximalISIndex, all_sets: &[VertexSet]) {
    let mut lists = vec![Vec::new(); index.len()];
    for &s in all_sets {
        debug_assert!(index.core.is_independent(s));
        let owner = index
            .maximal_sets
            .iter()
            .position(|&m| s.is_subset(m))
            .expect("every independent set lies in a maximal one");
        lists[owner].push(s);
    }
    for l in &mut lists {
        l.sort_by_key(|s| s.len());
    }
    index.allowed_subsets = lists;
}

/// Moves families of mutually incompatible maximal sets to the end.
///
/// Repeatedly picks the witness avoided by the most remaining maximal sets
/// (lowest witness index on ties) and moves those sets into a new block
/// placed before the previously moved blocks. Stops once no witness is
/// avoided by two or more remaining sets.
pub fn order_blocks(index: &mut MaximalISIndex) {
    let m = index.len();
    let w = index.witness_sets.len();
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    loop {
        let mut counts = vec![0usize; w];
        for &i in &remaining {
            for j in index.witness_bv[i].iter_ones() {
                counts[j] += 1;
            }
        }
        let Some((best, &count)) = counts.iter().enumerate().rev().max_by_key(|&(_, c)| c) else {
            break;
        };
        if count < 2 {
            break;
        }
        let (block, rest): (Vec<usize>, Vec<usize>) =
            remaining.iter().partition(|&&i| index.witness_bv[i].get(best));
        blocks.push(block);
        remaining = rest;
    }
    if blocks.is_empty() {
        index.block_boundaries.clear();
        return;
    }
    let mut order = remaining;
    let mut boundaries = Vec::with_capacity(blocks.len());
    for block in blocks.into_iter().rev() {
        boundaries.push(order.len());
        order.extend(block);
    }
    index.maximal_sets = order.iter().map(|&i| index.maximal_sets[i]).collect();
    index.witness_bv = order.iter().map(|&i| index.witness_bv[i].clone()).collect();
    if !index.allowed_subsets.is_empty() {
        index.allowed_subsets = order.iter().map(|&i| index.allowed_subsets[i].clone()).collect();
    }
    index.block_boundaries = boundaries;
    index.compute_pair_bv();
}
