use std::collections::{BTreeMap, BTreeSet, VecDeque};

use proptest::prelude::*;

use twoec::combo::{average, ratio, ConvexCombination, Rational, Subgraph, Term};
use twoec::cubic::decompose_cubic;
use twoec::graph::{
    bridges, find_cuts, is_connected, is_two_edge_connected, reduce_edge, suppress_vertex, CutKind, EdgeId,
    MultiGraph, VertexId,
};
use twoec::instances::random_cubic;
use twoec::oracle::enumerate_2ecss;
use twoec::Limits;

fn build(n: u32, edges: &[(u32, u32, u32)]) -> MultiGraph {
    let mut g = MultiGraph::new();
    for v in 0..n {
        g.add_vertex(VertexId(v));
    }
    for (i, &(a, b, k)) in edges.iter().filter(|(a, b, _)| a != b).enumerate() {
        g.add_edge(EdgeId(i as u32), VertexId(a), VertexId(b), k).unwrap();
    }
    g
}

fn multigraph(max_copies: u32, max_edges: usize) -> impl Strategy<Value = MultiGraph> {
    (2u32..=6).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1..=max_copies), 0..=max_edges)
            .prop_map(move |es| build(n, &es))
    })
}

/// Reachable vertices from the least one, with `skip` losing one copy.
fn reach(g: &MultiGraph, skip: Option<EdgeId>) -> usize {
    let start = match g.vertices().next() {
        Some(v) => v,
        None => return 0,
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for (e, r) in g.edges() {
            let k = if Some(e) == skip { r.copies - 1 } else { r.copies };
            if k > 0 && r.touches(v) && seen.insert(r.other(v)) {
                queue.push_back(r.other(v));
            }
        }
    }
    seen.len()
}

fn brute_2ec(g: &MultiGraph) -> bool {
    let n = g.vertex_count();
    reach(g, None) == n && g.edge_ids().all(|e| reach(g, Some(e)) == n)
}

/// Bipartitions with both sides connected and exactly two crossing edges.
fn brute_two_cuts(g: &MultiGraph) -> BTreeSet<Vec<EdgeId>> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << (n - 1)) {
        let side: BTreeSet<VertexId> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
        let rest: BTreeSet<VertexId> = verts.iter().copied().filter(|v| !side.contains(v)).collect();
        let crossing: Vec<EdgeId> = g
            .edges()
            .filter(|(_, r)| side.contains(&r.u) != side.contains(&r.v))
            .map(|(e, _)| e)
            .collect();
        if crossing.len() == 2 && is_connected(&g.induced(&side)) && is_connected(&g.induced(&rest)) {
            out.insert(crossing);
        }
    }
    out
}

fn universe(m: u32) -> MultiGraph {
    let edges: Vec<(u32, u32)> = (0..m).map(|i| (i % 4, (i + 1) % 4 + 4 * ((i / 4) % 2))).collect();
    let n = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0) + 1;
    MultiGraph::from_edges(n, &edges).unwrap()
}

fn combination(m: u32) -> impl Strategy<Value = ConvexCombination> {
    prop::collection::vec((1i64..=9, prop::collection::vec(0u32..=2, m as usize)), 1..=5).prop_map(move |raw| {
        let total: i64 = raw.iter().map(|(w, _)| w).sum();
        let u = universe(m);
        let ids: Vec<EdgeId> = u.edge_ids().collect();
        let terms = raw
            .into_iter()
            .map(|(w, copies)| {
                let mut s = Subgraph::new();
                for (e, k) in ids.iter().zip(copies) {
                    s.set(*e, k);
                }
                Term::new(ratio(w, total), s)
            })
            .collect();
        let target = ids.iter().map(|e| (*e, Rational::from_integer(0.into()))).collect();
        ConvexCombination::new(u, target, terms)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn two_edge_connectivity_matches_brute_force(g in multigraph(2, 12)) {
        prop_assert_eq!(is_two_edge_connected(&g), brute_2ec(&g));
        if is_connected(&g) {
            let want: Vec<EdgeId> = g.edge_ids().filter(|&e| reach(&g, Some(e)) < g.vertex_count()).collect();
            prop_assert_eq!(bridges(&g), want);
        }
    }

    #[test]
    fn two_edge_cuts_match_bipartitions(g in multigraph(1, 10)) {
        prop_assume!(is_connected(&g));
        let found: BTreeSet<Vec<EdgeId>> = find_cuts(&g, CutKind::TwoEdge, &Limits::default())
            .unwrap()
            .into_iter()
            .map(|c| c.edges)
            .collect();
        prop_assert_eq!(found, brute_two_cuts(&g));
    }

    #[test]
    fn pool_matches_definition(g in multigraph(1, 7)) {
        let pool: BTreeSet<Subgraph> = enumerate_2ecss(&g, 2, &Limits::default()).unwrap().into_iter().collect();
        let ids: Vec<EdgeId> = g.edge_ids().collect();
        let mut want = BTreeSet::new();
        for mut code in 0..3usize.pow(ids.len() as u32) {
            let mut s = Subgraph::new();
            let mut h = MultiGraph::new();
            for v in g.vertices() {
                h.add_vertex(v);
            }
            for &e in &ids {
                let k = (code % 3) as u32;
                code /= 3;
                s.set(e, k);
                if k > 0 {
                    let r = g.edge(e).unwrap();
                    h.add_edge(e, r.u, r.v, k).unwrap();
                }
            }
            if g.vertex_count() > 1 && brute_2ec(&h) {
                want.insert(s);
            }
        }
        prop_assert_eq!(pool, want);
    }

    #[test]
    fn suppression_provenance(g in multigraph(1, 8), a in 0u32..6, b in 0u32..6) {
        let mut g = g;
        let (a, b) = (VertexId(a % g.vertex_count() as u32), VertexId(b % g.vertex_count() as u32));
        prop_assume!(a != b);
        let w = g.next_vertex_id();
        let (e1, e2) = (g.next_edge_id(), EdgeId(g.next_edge_id().0 + 1));
        g.add_vertex(w);
        g.add_edge(e1, a, w, 1).unwrap();
        g.add_edge(e2, w, b, 1).unwrap();
        let (h, fresh, prov) = suppress_vertex(&g, w).unwrap();
        prop_assert_eq!(prov.original_ids(), g.edge_ids().collect::<BTreeSet<_>>());
        prop_assert_eq!(prov.result_ids(), h.edge_ids().collect::<BTreeSet<_>>());
        prop_assert_eq!(prov.created.get(&fresh), Some(&vec![e1, e2]));
        prop_assert!(prov.kept.is_disjoint(&prov.removed));
    }

    #[test]
    fn occurrence_is_linear(c1 in combination(6), c2 in combination(6), w in 0i64..=10) {
        let (w1, w2) = (ratio(w, 10), ratio(10 - w, 10));
        let mixed = average(vec![c1.clone(), c2.clone()], &[w1.clone(), w2.clone()]).unwrap();
        for e in c1.universe.edge_ids() {
            let want = c1.occurrence(e).unwrap() * &w1 + c2.occurrence(e).unwrap() * &w2;
            prop_assert_eq!(mixed.occurrence(e).unwrap(), want);
        }
        prop_assert_eq!(mixed.multiplier_sum(), ratio(1, 1));
    }

    #[test]
    fn dedupe_and_pad_preserve_occurrences(c in combination(6), extra in 0i64..=4, pick in 0u32..6) {
        let before = c.occurrences();
        let merged = c.clone().dedupe();
        prop_assert_eq!(merged.occurrences(), before.clone());
        prop_assert_eq!(merged.multiplier_sum(), c.multiplier_sum());
        let e = EdgeId(pick);
        let room: Rational = c.terms.iter().filter(|t| t.subgraph.copies(e) < 3).map(|t| t.multiplier.clone()).sum();
        let target = &before[&e] + room * ratio(extra, 4);
        let padded = c.pad_edge(e, &target, 3).unwrap();
        prop_assert_eq!(padded.occurrence(e).unwrap(), target);
        prop_assert_eq!(padded.multiplier_sum(), ratio(1, 1));
        for (f, v) in &before {
            if *f != e {
                prop_assert_eq!(&padded.occurrence(*f).unwrap(), v);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reduction_provenance_on_random_cubic(seed in 0u64..1000, half in 3usize..=5, pick in 0usize..15) {
        let g = random_cubic(seed, 2 * half).unwrap();
        let ids: Vec<EdgeId> = g.edge_ids().collect();
        let uv = ids[pick % ids.len()];
        prop_assume!(find_cuts(&g, CutKind::ProperThreeEdge, &Limits::default()).unwrap().is_empty());
        let reduced = reduce_edge(&g, uv, &Limits::default());
        prop_assume!(reduced.is_ok());
        let (h, ctx) = reduced.unwrap();
        prop_assert_eq!(ctx.provenance.original_ids(), g.edge_ids().collect::<BTreeSet<_>>());
        prop_assert_eq!(ctx.provenance.result_ids(), h.edge_ids().collect::<BTreeSet<_>>());
        prop_assert!(h.is_cubic());
        prop_assert_eq!(h.vertex_count() + 2, g.vertex_count());
    }

    #[test]
    fn random_cubic_averages_to_four_fifths(seed in 0u64..1000) {
        let g = random_cubic(seed, 8).unwrap();
        let c = decompose_cubic(&g, &Limits::default()).unwrap();
        let occ: BTreeMap<EdgeId, Rational> = c.occurrences();
        prop_assert!(occ.values().all(|v| *v == ratio(4, 5)));
        prop_assert!(c.first_non_2ec_term().is_none());
    }
}
