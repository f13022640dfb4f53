//! Decomposition of half-triangle solutions.
//!
//! For a simple half-triangle graph `G` and a 1-edge `p` lying in no 2-edge
//! cut, [`decompose_ht`] builds a convex combination of 2-edge-connected
//! spanning multi-subgraphs with half-edges at `3/5`, `p` at `4/5` and every
//! other 1-edge at `6/5`. Half-edges and `p` take at most one copy, other
//! 1-edges one or two. [`decompose_sixfifth`] lifts this to `6/5 x` for a
//! general half-triangle solution `x`.

use std::collections::{BTreeMap, BTreeSet};

use crate::combo::{ratio, ConvexCombination, PatternKey, Presence, Rational, Subgraph, Term};
use crate::cubic::{decompose_cubic, expected_boundary_masses};
use crate::error::{Error, Result};
use crate::graph::{
    find_cuts, is_two_edge_connected, validate_half_triangle, CutKind, CutReport, EdgeId,
    FractionalSolution, HalfTriangleStructure, MultiGraph, VertexId,
};
use crate::Limits;

/// Two-triangle base, over the edge order
/// `[p, x, y, a0a1, a0a2, a1a2, b0b1, b0b2, b1b2]` where the 1-edges are
/// `p = a0b0`, `x = a1b1`, `y = a2b2` and `x` has the smaller id of the two
/// non-`p` 1-edges. Found by [`discover_two_triangle_base`].
pub const TWO_TRIANGLE_BASE: &[(&str, [u8; 9])] = &[
    ("1/5", [0, 1, 1, 1, 1, 0, 1, 1, 0]),
    ("1/5", [1, 2, 1, 1, 0, 1, 0, 1, 0]),
    ("2/5", [1, 1, 1, 0, 1, 1, 1, 0, 1]),
    ("1/5", [1, 1, 2, 1, 0, 0, 0, 1, 1]),
];

/// Half-edges at `3/5`, `p` at `4/5`, other 1-edges at `6/5`.
pub fn q_target(simple: &FractionalSolution, p: EdgeId) -> BTreeMap<EdgeId, Rational> {
    simple
        .value
        .iter()
        .map(|(&e, v)| {
            let t = if *v == ratio(1, 2) {
                ratio(3, 5)
            } else if e == p {
                ratio(4, 5)
            } else {
                ratio(6, 5)
            };
            (e, t)
        })
        .collect()
}

/// `6/5` times every value.
pub fn sixfifth_target(x: &FractionalSolution) -> BTreeMap<EdgeId, Rational> {
    x.value.iter().map(|(&e, v)| (e, v * ratio(6, 5))).collect()
}

fn two_edge_cuts(h: &HalfTriangleStructure, limits: &Limits) -> Result<Vec<CutReport>> {
    find_cuts(&h.shrunken, CutKind::TwoEdge, limits)
}

fn check_shrunken(h: &HalfTriangleStructure) -> Result<()> {
    if !is_two_edge_connected(&h.shrunken) {
        return Err(Error::Precondition(
            "shrunken graph of the half-triangle solution is not 2-edge-connected".into(),
        ));
    }
    Ok(())
}

/// The least simple-form 1-edge lying in no 2-edge cut.
pub fn choose_p(h: &HalfTriangleStructure, limits: &Limits) -> Result<EdgeId> {
    check_shrunken(h)?;
    let in_cut: BTreeSet<EdgeId> = two_edge_cuts(h, limits)?
        .into_iter()
        .flat_map(|c| c.edges)
        .collect();
    h.one_edges()
        .into_iter()
        .find(|e| !in_cut.contains(e))
        .ok_or(Error::NoValidP)
}

fn check_p(h: &HalfTriangleStructure, p: EdgeId, limits: &Limits) -> Result<()> {
    if h.path_of(p).is_none() {
        return Err(Error::Precondition(format!("{p} is not a simple-form 1-edge")));
    }
    check_shrunken(h)?;
    if two_edge_cuts(h, limits)?.iter().any(|c| c.edges.contains(&p)) {
        return Err(Error::Precondition(format!("{p} lies in a 2-edge cut")));
    }
    Ok(())
}

/// `Q(G, p)` on the simple form of `h`.
pub fn decompose_ht(h: &HalfTriangleStructure, p: EdgeId, limits: &Limits) -> Result<ConvexCombination> {
    Ok(decompose_ht_traced(h, p, limits)?.0)
}

/// As [`decompose_ht`], with one trace line per recursion step.
pub fn decompose_ht_traced(
    h: &HalfTriangleStructure,
    p: EdgeId,
    limits: &Limits,
) -> Result<(ConvexCombination, Vec<String>)> {
    check_p(h, p, limits)?;
    if h.is_simple() {
        q_rec(h, p, limits, 0)
    } else {
        q_rec(&validate_half_triangle(&h.simple)?, p, limits, 0)
    }
}

fn q_rec(
    h: &HalfTriangleStructure,
    p: EdgeId,
    limits: &Limits,
    depth: usize,
) -> Result<(ConvexCombination, Vec<String>)> {
    let pad = "  ".repeat(depth);
    if h.triangles.len() == 2 {
        let c = base_two_triangles(h, p)?;
        return Ok((c, vec![format!("{pad}base two-triangle p={p}")]));
    }
    let cuts = two_edge_cuts(h, limits)?;
    if cuts.is_empty() {
        let c = expand_case(h, p, limits)?;
        let line = format!(
            "{pad}expand {} triangles p={p} terms={}",
            h.triangles.len(),
            c.terms.len()
        );
        return Ok((c, vec![line]));
    }
    cut2_glue(h, p, &cuts, limits, depth)
}

/// Maps the frozen base onto a two-triangle graph.
pub fn base_two_triangles(h: &HalfTriangleStructure, p: EdgeId) -> Result<ConvexCombination> {
    if h.triangles.len() != 2 || !h.is_simple() {
        return Err(Error::Precondition("base case expects two triangles joined by three 1-edges".into()));
    }
    let g = &h.simple.graph;
    let rp = *g.edge(p)?;
    let others: Vec<EdgeId> = h.one_edges().into_iter().filter(|&e| e != p).collect();
    if others.len() != 2 {
        return Err(Error::Precondition(format!("{p} is not a 1-edge of the base graph")));
    }
    let (a0, b0) = (rp.u, rp.v);
    let side_a = h.triangle_of[&a0];
    let ends = |e: EdgeId| -> Result<(VertexId, VertexId)> {
        let r = g.edge(e)?;
        Ok(if h.triangle_of[&r.u] == side_a { (r.u, r.v) } else { (r.v, r.u) })
    };
    let (a1, b1) = ends(others[0])?;
    let (a2, b2) = ends(others[1])?;
    let order = [
        p,
        others[0],
        others[1],
        h.half_edge_between(a0, a1),
        h.half_edge_between(a0, a2),
        h.half_edge_between(a1, a2),
        h.half_edge_between(b0, b1),
        h.half_edge_between(b0, b2),
        h.half_edge_between(b1, b2),
    ];
    let terms = TWO_TRIANGLE_BASE
        .iter()
        .map(|(m, copies)| {
            let multiplier = crate::combo::parse_rational(m).map_err(Error::InternalInvariant)?;
            let sub = order.iter().zip(copies).map(|(&e, &k)| (e, k as u32)).collect();
            Ok(Term::new(multiplier, sub))
        })
        .collect::<Result<Vec<_>>>()?;
    let c = ConvexCombination::new(g.clone(), q_target(&h.simple, p), terms);
    c.check_finalized()?;
    Ok(c)
}

/// Copy bounds for `Q(G, p)` terms: half-edges and `p` at most one copy,
/// other 1-edges one or two.
pub fn q_copies_ok(h: &HalfTriangleStructure, p: EdgeId, sub: &Subgraph) -> bool {
    h.simple.graph.edge_ids().all(|e| {
        let k = sub.copies(e);
        if h.is_half_edge(e) || e == p {
            k <= 1
        } else {
            (1..=2).contains(&k)
        }
    })
}

/// Solves the two-triangle base from scratch with the oracle: every
/// spanning 2-edge-connected multi-subgraph within the copy bounds, then an
/// exact phase-one simplex against the `Q` target. The result is laid out
/// in the edge order of [`TWO_TRIANGLE_BASE`].
pub fn discover_two_triangle_base(limits: &Limits) -> Result<Vec<(Rational, [u8; 9])>> {
    let x = crate::instances::prism_solution(&[1, 1, 1])?;
    let h = validate_half_triangle(&x)?;
    let g = &h.simple.graph;
    let p = h.one_edges()[0];
    let pool: Vec<Subgraph> = crate::oracle::enumerate_2ecss(g, 2, limits)?
        .into_iter()
        .filter(|s| q_copies_ok(&h, p, s))
        .collect();
    let target = q_target(&h.simple, p);
    let c = match crate::oracle::find_convex_combination(g, &pool, &target, limits)? {
        crate::oracle::Feasibility::Feasible(c) => c,
        crate::oracle::Feasibility::Infeasible { .. } => {
            return Err(Error::InternalInvariant("two-triangle base is infeasible".into()))
        }
    };
    // canonical labelling of the two-triangle instance: a_i = i, b_i = 3 + i
    let v = |i: u32| VertexId(i);
    let ones = h.one_edges();
    let order = [
        ones[0],
        ones[1],
        ones[2],
        h.half_edge_between(v(0), v(1)),
        h.half_edge_between(v(0), v(2)),
        h.half_edge_between(v(1), v(2)),
        h.half_edge_between(v(3), v(4)),
        h.half_edge_between(v(3), v(5)),
        h.half_edge_between(v(4), v(5)),
    ];
    Ok(c.terms
        .iter()
        .map(|t| {
            let mut row = [0u8; 9];
            for (i, e) in order.iter().enumerate() {
                row[i] = t.subgraph.copies(*e) as u8;
            }
            (t.multiplier.clone(), row)
        })
        .collect())
}

/// Per-triangle bookkeeping used by the expansion.
struct Tri {
    verts: [VertexId; 3],
    /// Simple 1-edge at each vertex.
    ones: [EdgeId; 3],
}

impl Tri {
    fn new(h: &HalfTriangleStructure, t: usize) -> Self {
        let verts = h.triangles[t];
        Tri {
            verts,
            ones: verts.map(|v| h.one_edge_at(v)),
        }
    }

    /// Position of the vertex carrying the 1-edge `e`.
    fn at(&self, e: EdgeId) -> Option<usize> {
        self.ones.iter().position(|&o| o == e)
    }

    fn half(&self, h: &HalfTriangleStructure, i: usize, j: usize) -> EdgeId {
        h.half_edge_between(self.verts[i], self.verts[j])
    }

    /// The two half-edges at vertex `i`.
    fn alpha(&self, h: &HalfTriangleStructure, i: usize) -> [EdgeId; 2] {
        [self.half(h, i, (i + 1) % 3), self.half(h, i, (i + 2) % 3)]
    }

    /// The half-edge opposite vertex `i`.
    fn beta(&self, h: &HalfTriangleStructure, i: usize) -> EdgeId {
        self.half(h, (i + 1) % 3, (i + 2) % 3)
    }
}

/// Case without 2-edge cuts: shrink triangles, decompose the cubic graph,
/// and expand every term into six copies.
pub fn expand_case(h: &HalfTriangleStructure, p: EdgeId, limits: &Limits) -> Result<ConvexCombination> {
    Ok(expand_case_report(h, p, limits)?.padded)
}

/// Intermediate quantities of [`expand_case`].
#[derive(Clone, Debug)]
pub struct ExpansionReport {
    /// Combination for the shrunken cubic graph.
    pub shrunken: ConvexCombination,
    /// Expanded combination before half-edge padding.
    pub unpadded: ConvexCombination,
    pub padded: ConvexCombination,
}

pub fn expand_case_report(
    h: &HalfTriangleStructure,
    p: EdgeId,
    limits: &Limits,
) -> Result<ExpansionReport> {
    if h.triangles.len() < 4 || !h.is_simple() {
        return Err(Error::Precondition("expansion needs a simple graph with at least 4 triangles".into()));
    }
    let pc = decompose_cubic(&h.shrunken, limits)?;
    let expected = expected_boundary_masses();
    let tris: Vec<Tri> = (0..h.triangles.len()).map(|t| Tri::new(h, t)).collect();
    for (t, tri) in tris.iter().enumerate() {
        let got = pc.pattern_masses(&tri.ones);
        if got != expected {
            return Err(Error::InternalInvariant(format!(
                "triangle {t} pattern masses differ from 2/5 and 1/5"
            )));
        }
    }
    let p_tris: BTreeSet<usize> = tris
        .iter()
        .enumerate()
        .filter(|(_, tri)| tri.at(p).is_some())
        .map(|(t, _)| t)
        .collect();
    // for each 1-edge, the lower triangle index at its ends
    let mut low: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for &e in &tri.ones {
            low.entry(e).or_insert(t);
        }
    }
    let one_edges = h.one_edges();
    let sixth = ratio(1, 6);
    let mut terms = Vec::with_capacity(pc.terms.len() * 6);
    for term in &pc.terms {
        let present = |e: EdgeId| term.subgraph.copies(e) > 0;
        for k in 0..6usize {
            let mut sub = Subgraph::new();
            for &e in &one_edges {
                let copies = if present(e) {
                    1
                } else if e == p {
                    0
                } else {
                    2
                };
                sub.set(e, copies);
            }
            for (t, tri) in tris.iter().enumerate() {
                let missing = (0..3).find(|&i| !present(tri.ones[i]));
                let chosen: Vec<EdgeId> = match missing {
                    None if p_tris.contains(&t) => {
                        let tp = tri.at(p).unwrap();
                        let other = if k % 2 == 0 { (tp + 1) % 3 } else { (tp + 2) % 3 };
                        vec![tri.beta(h, tp), tri.half(h, tp, other)]
                    }
                    None => {
                        let skip = k % 3;
                        (0..3).filter(|&i| i != skip).map(|i| tri.beta(h, i)).collect()
                    }
                    Some(i) if tri.ones[i] == p => tri.alpha(h, i).to_vec(),
                    Some(i) => {
                        let is_low = low[&tri.ones[i]] == t;
                        if (k % 2 == 0) == is_low {
                            tri.alpha(h, i).to_vec()
                        } else {
                            vec![tri.beta(h, i)]
                        }
                    }
                };
                for e in chosen {
                    sub.set(e, 1);
                }
            }
            terms.push(Term::new(&term.multiplier * &sixth, sub));
        }
    }
    let g = &h.simple.graph;
    let target = q_target(&h.simple, p);
    let unpadded = ConvexCombination::new(g.clone(), target.clone(), terms).dedupe();
    if let Some(i) = unpadded.first_non_2ec_term() {
        return Err(Error::InternalInvariant(format!(
            "expanded term {i} is not spanning and 2-edge-connected"
        )));
    }
    let mut padded = unpadded.clone();
    for (t, tri) in tris.iter().enumerate() {
        if p_tris.contains(&t) {
            continue;
        }
        for i in 0..3 {
            padded = padded.pad_edge(tri.beta(h, i), &ratio(3, 5), 1)?;
        }
    }
    let padded = padded.dedupe();
    padded.check_finalized()?;
    Ok(ExpansionReport {
        shrunken: pc,
        unpadded,
        padded,
    })
}

/// Simple-form solution on the triangles of `shore`, plus a closing 1-edge
/// `fresh` between the side's ends of the two cut edges.
fn side_solution(
    h: &HalfTriangleStructure,
    shore: &BTreeSet<VertexId>,
    cut: &[EdgeId],
    fresh: EdgeId,
) -> Result<FractionalSolution> {
    let verts: BTreeSet<VertexId> = shore
        .iter()
        .flat_map(|t| h.triangles[t.0 as usize])
        .collect();
    let g = &h.simple.graph;
    let mut sg = g.induced(&verts);
    let end_in = |e: EdgeId| -> Result<VertexId> {
        let r = g.edge(e)?;
        Ok(if verts.contains(&r.u) { r.u } else { r.v })
    };
    sg.add_edge(fresh, end_in(cut[0])?, end_in(cut[1])?, 1)?;
    let mut value: BTreeMap<EdgeId, Rational> = sg
        .edge_ids()
        .filter(|&e| e != fresh)
        .map(|e| (e, h.simple.value[&e].clone()))
        .collect();
    value.insert(fresh, ratio(1, 1));
    FractionalSolution::new(sg, value)
}

fn admissible(side: &FractionalSolution, limits: &Limits) -> Result<Option<HalfTriangleStructure>> {
    let Ok(hs) = validate_half_triangle(side) else {
        return Ok(None);
    };
    if !is_two_edge_connected(&hs.shrunken) || !two_edge_cuts(&hs, limits)?.is_empty() {
        return Ok(None);
    }
    Ok(Some(hs))
}

/// Case with a 2-edge cut `{hi, jk}`: pick the smallest `p`-free side `X`
/// for which `G_X + hj` has no 2-edge cut, solve `Q(G_X + hj, hj)` and
/// `Q(G_Y + ik, p)`, and glue omitted `hj` with doubled `ik` and single
/// `hj` with single `ik`.
pub fn cut2_glue(
    h: &HalfTriangleStructure,
    p: EdgeId,
    cuts: &[CutReport],
    limits: &Limits,
    depth: usize,
) -> Result<(ConvexCombination, Vec<String>)> {
    let g = &h.simple.graph;
    let rp = *g.edge(p)?;
    let p_tri = VertexId(h.triangle_of[&rp.u] as u32);
    let hj = g.next_edge_id();
    let ik = EdgeId(hj.0 + 1);
    let mut best: Option<(usize, &CutReport, HalfTriangleStructure)> = None;
    for cut in cuts {
        if cut.edges.contains(&p) {
            return Err(Error::Precondition(format!("{p} lies in a 2-edge cut")));
        }
        let x_shore = if cut.shores.0.contains(&p_tri) {
            &cut.shores.1
        } else {
            &cut.shores.0
        };
        if best.as_ref().is_some_and(|(n, _, _)| *n <= x_shore.len()) {
            continue;
        }
        let side = side_solution(h, x_shore, &cut.edges, hj)?;
        if let Some(hs) = admissible(&side, limits)? {
            best = Some((x_shore.len(), cut, hs));
        }
    }
    let Some((_, cut, hx)) = best else {
        return Err(Error::NoAdmissibleCut(format!(
            "none of {} 2-edge cuts has a p-free side without 2-edge cuts",
            cuts.len()
        )));
    };
    let y_shore = cut.shore_of(p_tri);
    let hy = validate_half_triangle(&side_solution(h, y_shore, &cut.edges, ik)?)?;
    let (rx, ry) = rayon::join(
        || q_rec(&hx, hj, limits, depth + 1),
        || q_rec(&hy, p, limits, depth + 1),
    );
    let ((cx, tx), (cy, ty)) = (rx?, ry?);

    use Presence::{Absent, Doubled, Single};
    let mass = |c: &ConvexCombination, e: EdgeId| c.pattern_masses(&[e]);
    let want_x: BTreeMap<PatternKey, Rational> = [
        (PatternKey(vec![Absent]), ratio(1, 5)),
        (PatternKey(vec![Single]), ratio(4, 5)),
    ]
    .into_iter()
    .collect();
    let want_y: BTreeMap<PatternKey, Rational> = [
        (PatternKey(vec![Single]), ratio(4, 5)),
        (PatternKey(vec![Doubled]), ratio(1, 5)),
    ]
    .into_iter()
    .collect();
    if mass(&cx, hj) != want_x || mass(&cy, ik) != want_y {
        return Err(Error::PatternMassMismatch(format!(
            "closing edges of cut {:?} do not split 4/5 and 1/5",
            cut.edges
        )));
    }
    // omitted hj pairs with doubled ik; both glue classes keyed by copies of the cut edges
    let key_x = |s: &Subgraph| PatternKey(vec![if s.copies(hj) == 0 { Doubled } else { Single }]);
    let key_y = |s: &Subgraph| PatternKey(vec![Presence::of(s.copies(ik))]);
    let ax: Vec<_> = cx
        .terms
        .iter()
        .map(|t| (t.multiplier.clone(), key_x(&t.subgraph), t.subgraph.clone()))
        .collect();
    let ay: Vec<_> = cy
        .terms
        .iter()
        .map(|t| (t.multiplier.clone(), key_y(&t.subgraph), t.subgraph.clone()))
        .collect();
    let pairs = crate::combo::refine_match(&ax, &ay)?;
    let terms = pairs
        .into_iter()
        .map(|(m, sx, sy)| {
            let copies = if sx.copies(hj) == 0 { 2 } else { 1 };
            let mut glued: Subgraph = sx
                .iter()
                .filter(|(e, _)| *e != hj)
                .chain(sy.iter().filter(|(e, _)| *e != ik))
                .collect();
            for &e in &cut.edges {
                glued.set(e, copies);
            }
            Term::new(m, glued)
        })
        .collect();
    let c = ConvexCombination::new(g.clone(), q_target(&h.simple, p), terms).dedupe();
    c.check_finalized()?;
    let pad = "  ".repeat(depth);
    let mut trace = vec![format!(
        "{pad}cut2 {{{}, {}}} side={} triangles closing={} p={p}",
        cut.edges[0],
        cut.edges[1],
        hx.triangles.len(),
        hj
    )];
    trace.extend(tx);
    trace.extend(ty);
    Ok((c, trace))
}

/// Result of the end-to-end driver.
#[derive(Clone, Debug)]
pub struct SixFifthRun {
    pub structure: HalfTriangleStructure,
    /// Designated 1-edge, as a simple-form id.
    pub p: EdgeId,
    pub q: ConvexCombination,
    pub sixfifth: ConvexCombination,
    pub trace: Vec<String>,
}

/// Replaces every simple 1-edge by its 1-path with the same copy count, and
/// inserts the path of `p` doubled wherever `p` was omitted.
pub fn lift_to_sixfifth(
    q: &ConvexCombination,
    h: &HalfTriangleStructure,
    p: EdgeId,
) -> Result<ConvexCombination> {
    let x = &h.solution;
    let terms = q
        .terms
        .iter()
        .map(|t| {
            let mut sub = Subgraph::new();
            for (e, k) in t.subgraph.iter() {
                if h.is_half_edge(e) {
                    sub.set(e, k);
                }
            }
            for path in &h.one_paths {
                let mut k = t.subgraph.copies(path.simple_edge);
                if path.simple_edge == p && k == 0 {
                    k = 2;
                }
                for &e in &path.edges {
                    sub.set(e, k);
                }
            }
            Term::new(t.multiplier.clone(), sub)
        })
        .collect();
    Ok(ConvexCombination::new(x.graph.clone(), sixfifth_target(x), terms))
}

/// Maps a user-supplied edge to the simple 1-edge whose path contains it.
pub fn resolve_p(h: &HalfTriangleStructure, e: EdgeId) -> Result<EdgeId> {
    if h.path_of(e).is_some_and(|path| path.edges == [e]) {
        return Ok(e);
    }
    h.simple_edge_containing(e)
        .ok_or_else(|| Error::Precondition(format!("{e} is not on a 1-path")))
}

/// Validate, choose `p` (unless given, as any edge of its 1-path), solve
/// `Q(G, p)` on the simple form and lift to `6/5 x`.
pub fn decompose_sixfifth(
    x: &FractionalSolution,
    p: Option<EdgeId>,
    limits: &Limits,
) -> Result<SixFifthRun> {
    let h = validate_half_triangle(x)?;
    let p = match p {
        Some(e) => resolve_p(&h, e)?,
        None => choose_p(&h, limits)?,
    };
    let (q, mut trace) = decompose_ht_traced(&h, p, limits)?;
    let sixfifth = lift_to_sixfifth(&q, &h, p)?.dedupe();
    sixfifth.check_finalized()?;
    trace.push(format!("lift {} 1-paths to 6/5 x", h.one_paths.len()));
    Ok(SixFifthRun {
        structure: h,
        p,
        q,
        sixfifth,
        trace,
    })
}

/// Simple-form universe check shared by the `Q` entry points.
pub fn require_simple(h: &HalfTriangleStructure) -> Result<&MultiGraph> {
    if !h.is_simple() {
        return Err(Error::Precondition("Q decomposition needs every 1-path of length 1".into()));
    }
    Ok(&h.simple.graph)
}
