//! Uniform `4/5` decomposition for cubic 3-edge-connected graphs.
//!
//! Every edge of a simple cubic 3-edge-connected graph occurs exactly `4/5`
//! in a convex combination of simple 2-edge-connected spanning subgraphs.
//! The construction recurses on the vertex count:
//!
//! * four vertices: the whole `K4` at `2/5` plus its three Hamiltonian
//!   cycles at `1/5` each;
//! * a proper 3-edge cut: contract each shore, recurse on both sides, and
//!   glue terms whose boundary patterns agree;
//! * otherwise, for every edge `uv`: delete `u`, `v`, join their other
//!   neighbours `ab` and `cd`, recurse, lift each term back, pad `uv` to
//!   `2/5`, and average the `m` resulting combinations with weight `1/m`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::combo::{average, ratio, refine_match, ConvexCombination, PatternKey, Presence, Rational, Subgraph, Term};
use crate::error::{Error, Result};
use crate::graph::{
    contract_shore, find_cuts, is_three_edge_connected, is_two_edge_connected, reduce_edge, CutKind,
    CutReport, EdgeId, MultiGraph, ReductionContext,
};
use crate::Limits;

/// Every edge at `4/5`.
pub fn p_target(g: &MultiGraph) -> BTreeMap<EdgeId, Rational> {
    g.edge_ids().map(|e| (e, ratio(4, 5))).collect()
}

/// Presence of the two edges created by a reduction in a term of the
/// reduced graph's combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LiftPattern {
    Both,
    AbOnly,
    CdOnly,
    Neither,
}

impl LiftPattern {
    pub fn of(sub: &Subgraph, ctx: &ReductionContext) -> Self {
        match (sub.copies(ctx.ab) > 0, sub.copies(ctx.cd) > 0) {
            (true, true) => LiftPattern::Both,
            (true, false) => LiftPattern::AbOnly,
            (false, true) => LiftPattern::CdOnly,
            (false, false) => LiftPattern::Neither,
        }
    }

    /// Edges around `u` and `v` added to a lifted term, each with the share
    /// of the source multiplier it receives.
    pub fn lifts(self, ctx: &ReductionContext) -> Vec<(Rational, Vec<EdgeId>)> {
        let half = ratio(1, 2);
        match self {
            LiftPattern::Both => vec![(ratio(1, 1), vec![ctx.au, ctx.bu, ctx.vc, ctx.vd])],
            LiftPattern::AbOnly => vec![
                (half.clone(), vec![ctx.au, ctx.bu, ctx.uv, ctx.vc]),
                (half, vec![ctx.au, ctx.bu, ctx.uv, ctx.vd]),
            ],
            LiftPattern::CdOnly => vec![
                (half.clone(), vec![ctx.au, ctx.uv, ctx.vc, ctx.vd]),
                (half, vec![ctx.bu, ctx.uv, ctx.vc, ctx.vd]),
            ],
            LiftPattern::Neither => vec![
                (half.clone(), vec![ctx.au, ctx.uv, ctx.vc]),
                (half, vec![ctx.bu, ctx.uv, ctx.vd]),
            ],
        }
    }
}

/// Total multiplier of each lift pattern in a reduced graph's combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMasses {
    pub both: Rational,
    pub ab_only: Rational,
    pub cd_only: Rational,
    pub neither: Rational,
}

/// One per-edge combination of the averaging step, with its bookkeeping.
#[derive(Clone, Debug)]
pub struct EdgeReduction {
    pub edge: EdgeId,
    pub context: ReductionContext,
    pub masses: PatternMasses,
    /// Occurrence of the reduced edge after lifting, before padding.
    pub uv_before_padding: Rational,
    /// Padded combination: `uv` at `2/5`, its four neighbours at `9/10`,
    /// every other edge at `4/5`.
    pub combination: ConvexCombination,
}

fn check_input(g: &MultiGraph, limits: &Limits) -> Result<()> {
    if g.vertex_count() < 4 {
        return Err(Error::Precondition(format!(
            "cubic decomposition needs at least 4 vertices, got {}",
            g.vertex_count()
        )));
    }
    if g.vertex_count() > limits.cubic_max_vertices {
        return Err(Error::SizeCap {
            what: "cubic graph vertices",
            limit: limits.cubic_max_vertices,
            actual: g.vertex_count(),
        });
    }
    if !g.is_simple() || !g.is_cubic() {
        return Err(Error::Precondition("graph must be simple and cubic".into()));
    }
    if !is_three_edge_connected(g) {
        return Err(Error::Precondition("graph must be 3-edge-connected".into()));
    }
    Ok(())
}

/// Convex combination of simple 2-edge-connected spanning subgraphs of `g`
/// with every edge at exactly `4/5`.
pub fn decompose_cubic(g: &MultiGraph, limits: &Limits) -> Result<ConvexCombination> {
    check_input(g, limits)?;
    recurse(g, limits)
}

fn recurse(g: &MultiGraph, limits: &Limits) -> Result<ConvexCombination> {
    if g.vertex_count() == 4 {
        return base_k4(g);
    }
    let cuts = find_cuts(g, CutKind::ProperThreeEdge, limits)?;
    match cuts.first() {
        Some(cut) => split_glue(g, cut, limits),
        None => reduce_average(g, limits),
    }
}

/// The whole graph at `2/5` and the three Hamiltonian cycles at `1/5`.
pub fn base_k4(g: &MultiGraph) -> Result<ConvexCombination> {
    if g.vertex_count() != 4 || g.edge_count() != 6 || !g.is_simple() {
        return Err(Error::Precondition("base case expects K4".into()));
    }
    let w: Vec<_> = g.vertices().collect();
    let edge = |a: usize, b: usize| g.edges_between(w[a], w[b])[0];
    let all: Subgraph = g.edge_ids().map(|e| (e, 1)).collect();
    let mut terms = vec![Term::new(ratio(2, 5), all.clone())];
    for matching in [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]] {
        let mut cycle = all.clone();
        for (a, b) in matching {
            cycle.set(edge(a, b), 0);
        }
        terms.push(Term::new(ratio(1, 5), cycle));
    }
    Ok(ConvexCombination::new(g.clone(), p_target(g), terms))
}

/// Lifts a combination of the reduced graph back to `g`. Returns the lifted
/// (unpadded) combination and the pattern masses it was built from.
pub fn lift_reduction(
    reduced: &ConvexCombination,
    g: &MultiGraph,
    ctx: &ReductionContext,
) -> Result<(ConvexCombination, PatternMasses)> {
    let mut masses = PatternMasses {
        both: Rational::zero(),
        ab_only: Rational::zero(),
        cd_only: Rational::zero(),
        neither: Rational::zero(),
    };
    let mut terms = Vec::with_capacity(reduced.terms.len() * 2);
    for t in &reduced.terms {
        let pattern = LiftPattern::of(&t.subgraph, ctx);
        *match pattern {
            LiftPattern::Both => &mut masses.both,
            LiftPattern::AbOnly => &mut masses.ab_only,
            LiftPattern::CdOnly => &mut masses.cd_only,
            LiftPattern::Neither => &mut masses.neither,
        } += &t.multiplier;
        let base: Subgraph = t
            .subgraph
            .iter()
            .filter(|(e, _)| *e != ctx.ab && *e != ctx.cd)
            .collect();
        for (share, extra) in pattern.lifts(ctx) {
            let mut sub = base.clone();
            for e in extra {
                sub.set(e, 1);
            }
            let h = g.spanning(&sub)?;
            if !is_two_edge_connected(&h) {
                return Err(Error::InternalInvariant(format!(
                    "lift {pattern:?} at {} is not 2-edge-connected",
                    ctx.uv
                )));
            }
            terms.push(Term::new(&t.multiplier * share, sub));
        }
    }
    let mut target = p_target(g);
    for e in [ctx.au, ctx.bu, ctx.vc, ctx.vd] {
        target.insert(e, ratio(9, 10));
    }
    target.insert(ctx.uv, ratio(2, 5));
    Ok((ConvexCombination::new(g.clone(), target, terms), masses))
}

/// Builds the padded per-edge combination for `uv`.
pub fn edge_reduction(g: &MultiGraph, uv: EdgeId, limits: &Limits) -> Result<EdgeReduction> {
    let (reduced_graph, ctx) = reduce_edge(g, uv, limits)?;
    let reduced = recurse(&reduced_graph, limits)?;
    let (lifted, masses) = lift_reduction(&reduced, g, &ctx)?;
    let uv_before_padding = lifted.occurrence(uv)?;
    let combination = lifted.pad_edge(uv, &ratio(2, 5), 1)?.dedupe();
    combination.check_finalized().map_err(|e| {
        Error::InternalInvariant(format!("per-edge combination for {uv}: {e}"))
    })?;
    Ok(EdgeReduction {
        edge: uv,
        context: ctx,
        masses,
        uv_before_padding,
        combination,
    })
}

/// Every per-edge combination of the averaging step, in edge-id order.
pub fn per_edge_combinations(g: &MultiGraph, limits: &Limits) -> Result<Vec<EdgeReduction>> {
    let ids: Vec<EdgeId> = g.edge_ids().collect();
    ids.par_iter()
        .map(|&e| edge_reduction(g, e, limits))
        .collect()
}

/// Case without a proper 3-edge cut: average the per-edge combinations.
pub fn reduce_average(g: &MultiGraph, limits: &Limits) -> Result<ConvexCombination> {
    let parts: Vec<ConvexCombination> = per_edge_combinations(g, limits)?
        .into_iter()
        .map(|r| r.combination)
        .collect();
    let m = parts.len() as i64;
    let weights = vec![ratio(1, m); parts.len()];
    let out = average(parts, &weights)?.dedupe();
    out.check_finalized()?;
    Ok(out)
}

/// The boundary mass distribution every side of a proper 3-edge cut must
/// show: all three present at `2/5`, each single omission at `1/5`.
pub(crate) fn expected_boundary_masses() -> BTreeMap<PatternKey, Rational> {
    use Presence::{Absent, Single};
    [
        (vec![Single, Single, Single], ratio(2, 5)),
        (vec![Absent, Single, Single], ratio(1, 5)),
        (vec![Single, Absent, Single], ratio(1, 5)),
        (vec![Single, Single, Absent], ratio(1, 5)),
    ]
    .into_iter()
    .map(|(k, m)| (PatternKey(k), m))
    .collect()
}

/// Case with a proper 3-edge cut: contract, recurse on both sides and glue.
pub fn split_glue(g: &MultiGraph, cut: &CutReport, limits: &Limits) -> Result<ConvexCombination> {
    if cut.kind != CutKind::ProperThreeEdge || cut.edges.len() != 3 {
        return Err(Error::Precondition("split needs a proper 3-edge cut".into()));
    }
    let mut ends = std::collections::BTreeSet::new();
    for &e in &cut.edges {
        let r = g.edge(e)?;
        ends.insert(r.u);
        ends.insert(r.v);
    }
    if ends.len() != 6 {
        return Err(Error::Precondition("cut edges must have six distinct ends".into()));
    }
    let (g1, _, _) = contract_shore(g, &cut.shores.1)?;
    let (g2, _, _) = contract_shore(g, &cut.shores.0)?;
    let (c1, c2) = rayon::join(|| recurse(&g1, limits), || recurse(&g2, limits));
    let (c1, c2) = (c1?, c2?);
    let boundary = &cut.edges;
    let expected = expected_boundary_masses();
    for (side, c) in [("first", &c1), ("second", &c2)] {
        let got = c.pattern_masses(boundary);
        if got != expected {
            return Err(Error::PatternMassMismatch(format!(
                "{side} side of cut {:?} has boundary masses {:?}",
                boundary,
                got.iter().map(|(k, m)| format!("{:?}={m}", k.0)).collect::<Vec<_>>()
            )));
        }
    }
    let keyed = |c: &ConvexCombination| -> Vec<(Rational, PatternKey, Subgraph)> {
        c.terms
            .iter()
            .map(|t| {
                (
                    t.multiplier.clone(),
                    PatternKey::of(&t.subgraph, boundary),
                    t.subgraph.clone(),
                )
            })
            .collect()
    };
    let pairs = refine_match(&keyed(&c1), &keyed(&c2))?;
    let terms = pairs
        .into_iter()
        .map(|(m, s1, s2)| {
            let glued: Subgraph = s1.iter().chain(s2.iter()).collect();
            debug_assert!(is_two_edge_connected(&g.spanning(&glued).unwrap()));
            Term::new(m, glued)
        })
        .collect();
    let out = ConvexCombination::new(g.clone(), p_target(g), terms).dedupe();
    out.check_finalized()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::named_cubic;

    fn assert_p(c: &ConvexCombination) {
        c.check_finalized().unwrap();
        assert!(c.first_non_2ec_term().is_none());
        assert!(c
            .terms
            .iter()
            .all(|t| t.subgraph.iter().all(|(_, k)| k == 1)));
        assert!(c.occurrences().values().all(|o| *o == ratio(4, 5)));
    }

    #[test]
    fn k4_base_terms() {
        let g = named_cubic("K4").unwrap();
        let c = decompose_cubic(&g, &Limits::default()).unwrap();
        assert_eq!(c.terms.len(), 4);
        assert_eq!(c.terms[0].multiplier, ratio(2, 5));
        assert_eq!(c.terms[0].subgraph.len(), 6);
        for t in &c.terms[1..] {
            assert_eq!(t.multiplier, ratio(1, 5));
            assert_eq!(t.subgraph.len(), 4);
        }
        assert_p(&c);
    }

    #[test]
    fn prism_uses_the_cut_branch() {
        let g = named_cubic("prism").unwrap();
        let cuts = find_cuts(&g, CutKind::ProperThreeEdge, &Limits::default()).unwrap();
        assert_eq!(cuts.len(), 1);
        let c = split_glue(&g, &cuts[0], &Limits::default()).unwrap();
        assert_p(&c);
        assert_eq!(c, decompose_cubic(&g, &Limits::default()).unwrap());
    }

    #[test]
    fn k33_reduction_identities() {
        let g = named_cubic("K3_3").unwrap();
        let parts = per_edge_combinations(&g, &Limits::default()).unwrap();
        assert_eq!(parts.len(), 9);
        for r in &parts {
            let m = &r.masses;
            assert_eq!(&m.both + &m.cd_only, ratio(4, 5));
            assert_eq!(&m.both + &m.ab_only, ratio(4, 5));
            assert_eq!(&m.ab_only + &m.neither, ratio(1, 5));
            assert_eq!(&m.cd_only + &m.neither, ratio(1, 5));
            assert_eq!(r.uv_before_padding, ratio(2, 5) - &m.neither);
            assert_eq!(r.combination.occurrence(r.edge).unwrap(), ratio(2, 5));
        }
        assert_p(&reduce_average(&g, &Limits::default()).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let lim = Limits::default();
        let c6 = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert!(matches!(decompose_cubic(&c6, &lim), Err(Error::Precondition(_))));
        let small = Limits {
            cubic_max_vertices: 8,
            ..Limits::default()
        };
        assert!(matches!(
            decompose_cubic(&named_cubic("Petersen").unwrap(), &small),
            Err(Error::SizeCap { .. })
        ));
    }
}
