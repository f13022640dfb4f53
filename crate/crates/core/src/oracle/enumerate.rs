use std::collections::BTreeMap;

use num_traits::Zero;

use crate::combo::{Rational, Subgraph};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::Limits;

/// Bitmask view of a small graph: edge `i` joins `ends[i]`.
struct Masked {
    n: usize,
    ids: Vec<EdgeId>,
    ends: Vec<(usize, usize)>,
}

impl Masked {
    fn new(g: &MultiGraph, limits: &Limits) -> Result<Self> {
        let m = g.edge_count();
        if m > limits.oracle_max_edges {
            return Err(Error::SizeCap {
                what: "oracle edges",
                limit: limits.oracle_max_edges,
                actual: m,
            });
        }
        let index: BTreeMap<VertexId, usize> = g.vertices().zip(0..).collect();
        Ok(Masked {
            n: index.len(),
            ids: g.edge_ids().collect(),
            ends: g.edges().map(|(_, r)| (index[&r.u], index[&r.v])).collect(),
        })
    }

    fn m(&self) -> usize {
        self.ids.len()
    }

    /// Does the edge set `mask` connect every vertex?
    fn spans(&self, mask: u32) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = self.n;
        for i in 0..self.m() {
            if mask >> i & 1 == 1 {
                let (a, b) = self.ends[i];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    comps -= 1;
                }
            }
        }
        comps == 1
    }

    /// Edges of a spanning connected `mask` whose removal disconnects it.
    fn bridges(&self, mask: u32) -> u32 {
        (0..self.m())
            .filter(|&i| mask >> i & 1 == 1 && !self.spans(mask & !(1 << i)))
            .fold(0, |acc, i| acc | 1 << i)
    }

    fn subgraph(&self, mask: u32, doubled: u32) -> Subgraph {
        (0..self.m())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| (self.ids[i], if doubled >> i & 1 == 1 { 2 } else { 1 }))
            .collect()
    }
}

/// Iterates the submasks of `mask` in increasing numeric order.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let bits: Vec<u32> = (0..32).filter(|i| mask >> i & 1 == 1).collect();
    (0u64..1 << bits.len()).map(move |k| {
        bits.iter()
            .enumerate()
            .filter(|(j, _)| k >> j & 1 == 1)
            .fold(0, |acc, (_, b)| acc | 1 << b)
    })
}

/// Every spanning 2-edge-connected multi-subgraph of `g` with at most
/// `max_copies` (1 or 2) copies per edge record.
///
/// Order: by support bitmask (bit `i` is the `i`-th edge id), then by the
/// bitmask of doubled non-bridge edges. Bridges of the support are doubled.
pub fn enumerate_2ecss(g: &MultiGraph, max_copies: u32, limits: &Limits) -> Result<Vec<Subgraph>> {
    if !(1..=2).contains(&max_copies) {
        return Err(Error::Precondition(format!(
            "copy cap must be 1 or 2, got {max_copies}"
        )));
    }
    let mg = Masked::new(g, limits)?;
    let mut pool = Vec::new();
    for mask in 1u32..(1u32 << mg.m()) {
        if !mg.spans(mask) {
            continue;
        }
        let br = mg.bridges(mask);
        if br != 0 && max_copies < 2 {
            continue;
        }
        let free = if max_copies >= 2 { mask & !br } else { 0 };
        for extra in submasks(free) {
            pool.push(mg.subgraph(mask, br | extra));
            if pool.len() > limits.pool_max {
                return Err(Error::SizeCap {
                    what: "subgraph pool",
                    limit: limits.pool_max,
                    actual: pool.len(),
                });
            }
        }
    }
    Ok(pool)
}

fn check_costs(g: &MultiGraph, c: &BTreeMap<EdgeId, Rational>) -> Result<()> {
    for e in g.edge_ids() {
        let ce = c.get(&e).ok_or(Error::UnknownEdge(e))?;
        if ce < &Rational::zero() {
            return Err(Error::NegativeCost {
                edge: e,
                cost: ce.to_string(),
            });
        }
    }
    Ok(())
}

/// Exact minimum cost of a spanning 2-edge-connected multi-subgraph of `g`,
/// with a cheapest witness.
///
/// With nonnegative costs some optimum uses every edge of its support once
/// except the support's bridges, which are doubled, so the search runs over
/// connected spanning supports only.
pub fn opt_2ec(
    g: &MultiGraph,
    c: &BTreeMap<EdgeId, Rational>,
    limits: &Limits,
) -> Result<(Rational, Subgraph)> {
    check_costs(g, c)?;
    let mg = Masked::new(g, limits)?;
    let cost: Vec<Rational> = mg.ids.iter().map(|e| c[e].clone()).collect();
    let mut best: Option<(Rational, u32, u32)> = None;
    for mask in 1u32..(1u32 << mg.m()) {
        if !mg.spans(mask) {
            continue;
        }
        let br = mg.bridges(mask);
        let total: Rational = (0..mg.m())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| {
                if br >> i & 1 == 1 {
                    &cost[i] + &cost[i]
                } else {
                    cost[i].clone()
                }
            })
            .sum();
        if best.as_ref().map_or(true, |(b, _, _)| &total < b) {
            best = Some((total, mask, br));
        }
    }
    let (total, mask, br) = best.ok_or_else(|| Error::Precondition("graph is not connected".into()))?;
    Ok((total, mg.subgraph(mask, br)))
}
