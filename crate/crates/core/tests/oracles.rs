mod common;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use common::*;
use ramsey_glue::extender::{bottom_up, census, census_with, one_point_extensions, Deletion};
use ramsey_glue::gluer::{glue, glue_census, GluingProblem, GraphSet};
use ramsey_glue::indset::enumerate_maximal_independent_sets;
use ramsey_glue::pair::{pair_glue, PairGlueProblem};
use ramsey_glue::{canonical_form, dual_neighbourhood, is_ramsey, CensusSpec, Graph, VertexSet};

#[test]
fn extensions_match_brute_force_up_to_seven_vertices() {
    for t in 3..=5 {
        let levels = brute_census(t, 6);
        for level in &levels {
            for g in level {
                let ours = one_point_extensions(g, t, None).unwrap();
                assert_eq!(ours, brute_extensions(g, t, None), "t={t} g={g:?}");
                let bounded = one_point_extensions(g, t, Some(g.edge_count() + 1)).unwrap();
                assert_eq!(bounded, brute_extensions(g, t, Some(g.edge_count() + 1)));
            }
        }
    }
}

#[test]
fn bottom_up_matches_brute_census() {
    for t in 3..=4 {
        let ours = bottom_up(t, 8).unwrap();
        let brute = brute_census(t, 8);
        for n in 0..=8 {
            let a: Forms = ours[n].graphs.clone();
            let b: Forms = brute[n].iter().map(canonical_form).collect();
            assert_eq!(a, b, "R(3,{t},{n})");
        }
    }
}

#[test]
fn small_census_counts() {
    let counts = |t, max| bottom_up(t, max).unwrap().iter().map(|c| c.len()).collect::<Vec<_>>();
    assert_eq!(counts(3, 6), vec![1, 1, 2, 2, 3, 1, 0]);
    assert_eq!(counts(4, 9), vec![1, 1, 2, 3, 6, 9, 15, 9, 3, 0]);
}

#[test]
fn census_is_idempotent() {
    let seeds = bottom_up(5, 9).unwrap().pop().unwrap().to_graphs();
    let spec = CensusSpec::new(3, 5, 10);
    let a = census(&spec, &seeds).unwrap();
    let b = census(&spec, &seeds).unwrap();
    assert_eq!(a.graphs, b.graphs);
    let mut shuffled = seeds.clone();
    shuffled.shuffle(&mut rng(7));
    assert_eq!(census(&spec, &shuffled).unwrap().graphs, a.graphs);
}

#[test]
fn max_degree_rule_matches_any_rule() {
    let levels = bottom_up(5, 12).unwrap();
    let spec = CensusSpec::new(3, 5, 12).with_max_edges(22);
    let any = census_with(&spec, &levels[11].to_graphs(), Deletion::Any).unwrap();
    let seed = Deletion::MaxDegree.seed_spec(&spec);
    let seeds: Vec<Graph> = levels[11].to_graphs().into_iter().filter(|g| seed.contains(g)).collect();
    let maxdeg = census_with(&spec, &seeds, Deletion::MaxDegree).unwrap();
    assert_eq!(any.graphs, maxdeg.graphs);
    let all12: Forms = levels[12].graphs.iter().filter(|f| f.to_graph().edge_count() <= 22).cloned().collect();
    assert_eq!(any.graphs, all12);
}

#[test]
fn gluer_matches_oracle_on_small_cores() {
    let mut pool = Vec::new();
    for t in 2..=4 {
        for level in brute_census(t, 6) {
            pool.extend(level.into_iter().map(|g| (t, g)));
        }
    }
    for (tbound, core) in &pool {
        for d in 0..=(*tbound).min(3) {
            let ours = glue(&GluingProblem::new(core.clone(), d, *tbound, usize::MAX)).unwrap();
            assert_eq!(ours, glue_oracle(core, d, *tbound), "core {core:?} d={d} t={tbound}");
        }
    }
}

#[test]
fn glued_graphs_are_sound() {
    let petersen_dual = dual_neighbourhood(&Graph::petersen(), 0).0;
    for d in 0..=3 {
        let core = petersen_dual.clone();
        let out = glue(&GluingProblem::new(core.clone(), d, 4, usize::MAX)).unwrap();
        for f in &out {
            let g = f.to_graph();
            assert!(is_ramsey(&g, 3, 5));
            let found = (0..g.order())
                .filter(|&v| g.degree(v) == d)
                .any(|v| canonical_form(&dual_neighbourhood(&g, v).0) == canonical_form(&core));
            assert!(found, "{g:?}");
        }
    }
}

#[test]
fn degree_floor_and_edge_budget_filter_the_plain_output() {
    let core = Graph::cycle(5);
    let all = glue(&GluingProblem::new(core.clone(), 3, 3, usize::MAX)).unwrap();
    let floored = glue(&GluingProblem::new(core.clone(), 3, 3, usize::MAX).with_min_degree(3)).unwrap();
    let expect: GraphSet = all.iter().filter(|f| f.to_graph().min_degree() >= 3).cloned().collect();
    assert_eq!(floored, expect);
    let budget = glue(&GluingProblem::new(core, 3, 3, 12)).unwrap();
    let expect: GraphSet = all.iter().filter(|f| f.to_graph().edge_count() <= 12).cloned().collect();
    assert_eq!(budget, expect);
}

#[test]
fn gluing_census_matches_bottom_up() {
    let r4 = bottom_up(4, 8).unwrap();
    let r5 = bottom_up(5, 12).unwrap();
    let cores: BTreeMap<usize, Vec<Graph>> = r4.iter().enumerate().map(|(n, c)| (n, c.to_graphs())).collect();
    for n in 9..=12 {
        let glued = glue_census(&CensusSpec::new(3, 5, n), &cores).unwrap();
        assert_eq!(glued.graphs, r5[n].graphs, "R(3,5,{n})");
    }
}

/// Regular graphs with a nonadjacent pair of vertices whose neighbourhoods
/// are disjoint.
fn pair_decomposable(forms: &Forms, d: usize) -> Forms {
    forms
        .iter()
        .filter(|f| {
            let g = f.to_graph();
            g.is_regular(d)
                && (0..g.order()).any(|v| {
                    (v + 1..g.order())
                        .any(|w| !g.has_edge(v, w) && g.neighbours(v).is_disjoint(g.neighbours(w)))
                })
        })
        .cloned()
        .collect()
}

#[test]
fn pair_gluing_matches_census_oracle() {
    let r5 = bottom_up(5, 12).unwrap();
    let r6 = bottom_up(6, 14).unwrap();
    let small = |t: usize, n: usize| bottom_up(t, n).unwrap().pop().unwrap().to_graphs();
    let cases: Vec<(usize, usize, Vec<Graph>, &Forms)> = vec![
        (5, 3, small(3, 2), &r5[10].graphs),
        (5, 3, small(3, 4), &r5[12].graphs),
        (6, 3, small(4, 4), &r6[12].graphs),
        (6, 4, small(4, 4), &r6[14].graphs),
        (6, 3, small(4, 6), &r6[14].graphs),
    ];
    for (t, d, cores, census) in cases {
        let mut out = Forms::new();
        for core in cores {
            out.extend(pair_glue(&PairGlueProblem::new(core, t, d)).unwrap());
        }
        let n = census.iter().next().map_or(0, |f| f.to_graph().order());
        assert_eq!(out, pair_decomposable(census, d), "R(3,{t},{n}) degree {d}");
    }
}

#[test]
fn petersen_maximal_sets() {
    let sets = enumerate_maximal_independent_sets(&Graph::petersen());
    let mut sizes = BTreeMap::new();
    for s in &sets {
        *sizes.entry(s.len()).or_insert(0) += 1;
    }
    assert_eq!(sizes, BTreeMap::from([(3, 10), (4, 5)]));
}

#[test]
fn four_vertex_graphs_have_eleven_forms() {
    let mut forms = Forms::new();
    let mut reps: Vec<Graph> = Vec::new();
    for mask in 0u32..64 {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let edges: Vec<(usize, usize)> = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let g = Graph::from_edges(4, &edges);
        if !reps.iter().any(|r| brute_isomorphic(r, &g)) {
            reps.push(g.clone());
        }
        forms.insert(canonical_form(&g));
    }
    assert_eq!(reps.len(), 11);
    assert_eq!(forms.len(), 11);
}

#[test]
fn attachment_sets_are_independent_cover_sets() {
    let g = Graph::cycle(5);
    let sets = ramsey_glue::extender::attachment_sets(&g, 3, 5);
    for s in &sets {
        assert!(g.is_independent(*s));
        for u in 0..5 {
            for v in u + 1..5 {
                if !g.has_edge(u, v) {
                    assert!(s.contains(u) || s.contains(v));
                }
            }
        }
    }
    assert!(sets.iter().all(|s| *s != VertexSet::EMPTY));
}
