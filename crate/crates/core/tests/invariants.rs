mod common;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use ramsey_glue::alpha::AlphaMemo;
use ramsey_glue::indset::{enumerate_independent_sets, enumerate_maximal_independent_sets, MaximalISIndex};
use ramsey_glue::io::graph6;
use ramsey_glue::{
    canonical_form, dual_neighbourhood, epsilon, independence_number, is_ramsey, is_triangle_free, Graph, VertexSet,
};

fn cases() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

fn triangle_free(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n, any::<u64>(), 0usize..200).prop_map(|(n, seed, tries)| random_triangle_free(&mut rng(seed), n, tries))
}

fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n, any::<u64>(), 0.0f64..1.0).prop_map(|(n, seed, p)| random_graph(&mut rng(seed), n, p))
}

fn deficiency(g: &Graph, d: usize) -> usize {
    g.degrees().iter().map(|&x| d - x).sum()
}

/// Triangle-free graph whose deficiency against its maximum degree is odd.
/// `N = nD - 2e`, so the order and the maximum degree are both odd.
fn odd_deficiency() -> impl Strategy<Value = Graph> {
    (1usize..=8, any::<u64>()).prop_map(|(half, seed)| {
        let n = 2 * half + 1;
        let mut r = rng(seed);
        loop {
            let tries = r.gen_range(1..=n * (n - 1) / 2);
            let g = random_triangle_free(&mut r, n, tries);
            if deficiency(&g, g.max_degree()) % 2 == 1 {
                return g;
            }
        }
    })
}

/// Random independent set of `g` grown from a random start.
fn grow(g: &Graph, start: VertexSet, seed: u64) -> VertexSet {
    let mut r = rng(seed);
    let mut s = start;
    for v in random_permutation(&mut r, g.order()) {
        if r.gen_bool(0.5) && (g.neighbours(v) & s).is_empty() && !s.contains(v) {
            s.insert(v);
        }
    }
    s
}

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn dual_edge_identity(g in triangle_free(20), pick in any::<usize>()) {
        prop_assume!(g.order() > 0);
        let v = pick % g.order();
        let (dual, map) = dual_neighbourhood(&g, v);
        let lost: usize = g.neighbours(v).iter().map(|w| g.degree(w)).sum();
        prop_assert_eq!(dual.edge_count(), g.edge_count() - lost);
        prop_assert_eq!(map.len(), g.order() - 1 - g.degree(v));
    }

    #[test]
    fn dual_ramsey_closure(g in triangle_free(14), pick in any::<usize>()) {
        prop_assume!(g.order() > 0);
        let t = independence_number(&g, g.vertices()) + 1;
        prop_assert!(is_ramsey(&g, 3, t));
        let (dual, _) = dual_neighbourhood(&g, pick % g.order());
        prop_assert!(is_ramsey(&dual, 3, t - 1));
    }

    #[test]
    fn epsilon_minimum_bound(g in odd_deficiency()) {
        let d = g.max_degree();
        let n_def = deficiency(&g, d);
        let best = (0..g.order()).filter(|&v| g.degree(v) < d).map(|v| epsilon(&g, v, d).unwrap()).min().unwrap();
        prop_assert!(2 * best < n_def, "min eps {} with N = {}", best, n_def);
    }

    #[test]
    fn superset_compatibility(g in triangle_free(12), s0 in any::<u64>(), t0 in any::<u64>(), seeds in any::<(u64, u64, u64, u64)>()) {
        let tbound = independence_number(&g, g.vertices()) + 1;
        let index = MaximalISIndex::unordered(&g, tbound).unwrap();
        let s = grow(&g, VertexSet::EMPTY, s0);
        let t = grow(&g, VertexSet::EMPTY, t0);
        let s2 = grow(&g, s, seeds.0);
        let t2 = grow(&g, t, seeds.1);
        prop_assert!(s.is_subset(s2) && t.is_subset(t2));
        if index.witness_row(s).disjoint(&index.witness_row(t)) {
            prop_assert!(index.witness_row(s2).disjoint(&index.witness_row(t2)));
        }
    }

    #[test]
    fn pairwise_compatibility_soundness(g in triangle_free(12)) {
        let tbound = independence_number(&g, g.vertices()) + 1;
        prop_assume!(tbound >= 2);
        let index = MaximalISIndex::unordered(&g, tbound).unwrap();
        let all = g.vertices().bits();
        for i in 0..index.len() {
            for j in 0..index.len() {
                let rest = all & !(index.maximal_sets[i] | index.maximal_sets[j]).bits();
                prop_assert_eq!(index.pairwise_compatible(i, j), brute_alpha(&g, rest) + 2 <= tbound);
            }
        }
    }

    #[test]
    fn maximal_sets_are_maximal_and_distinct(g in any_graph(14)) {
        let sets = enumerate_maximal_independent_sets(&g);
        for (i, &a) in sets.iter().enumerate() {
            prop_assert!(g.is_independent(a));
            for &b in &sets[i + 1..] {
                prop_assert!(!a.is_subset(b) && !b.is_subset(a));
            }
        }
    }

    #[test]
    fn independent_set_counting(g in any_graph(14)) {
        prop_assert_eq!(enumerate_independent_sets(&g, 0).len(), all_independent_masks(&g).len());
    }

    #[test]
    fn canonical_orbit_constancy(g in any_graph(12), seed in any::<u64>()) {
        let form = canonical_form(&g);
        let mut r = rng(seed);
        for _ in 0..10 {
            let p = random_permutation(&mut r, g.order());
            prop_assert_eq!(&canonical_form(&g.relabel(&p)), &form);
        }
        prop_assert_eq!(form.to_graph().edge_count(), g.edge_count());
    }

    #[test]
    fn graph6_round_trip(g in any_graph(64)) {
        let bytes = graph6::encode(&g);
        prop_assert_eq!(graph6::decode(&bytes).unwrap(), g);
    }

    #[test]
    fn memo_alpha_matches_direct(g in any_graph(16), masks in prop::collection::vec(any::<u64>(), 8)) {
        let mut flat = AlphaMemo::new(&g);
        let mut hashed = AlphaMemo::with_threshold(&g, 0);
        for m in masks {
            let m = m & g.vertices().bits();
            let direct = brute_alpha(&g, m);
            prop_assert_eq!(flat.independence_number(VertexSet(m)), direct);
            prop_assert_eq!(hashed.independence_number(VertexSet(m)), direct);
        }
    }

    #[test]
    fn triangle_check_matches_brute(g in any_graph(12)) {
        prop_assert_eq!(is_triangle_free(&g), brute_alpha(&g.complement(), g.vertices().bits()) < 3);
    }
}
