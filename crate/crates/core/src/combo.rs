//! Exact convex combinations of multi-subgraphs.
//!
//! A [`ConvexCombination`] is a list of `(multiplier, subgraph)` terms over a
//! shared universe graph together with the vector the combination is meant
//! to equal. All arithmetic is over arbitrary-precision rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{is_two_edge_connected, EdgeId, MultiGraph};

pub type Rational = BigRational;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `p/q` or `-p/q`. The denominator must be positive.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad rational `{s}`"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad rational `{s}`"))?;
    if d <= BigInt::zero() {
        return Err(format!("non-positive denominator in `{s}`"));
    }
    Ok(Rational::new(n, d))
}

/// Copy counts of the edges a term uses; absent edges are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgraph(BTreeMap<EdgeId, u32>);

impl Subgraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn copies(&self, e: EdgeId) -> u32 {
        self.0.get(&e).copied().unwrap_or(0)
    }

    /// Sets the copy count; zero removes the edge.
    pub fn set(&mut self, e: EdgeId, copies: u32) {
        if copies == 0 {
            self.0.remove(&e);
        } else {
            self.0.insert(e, copies);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, u32)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum_e c_e * copies_e`.
    pub fn cost(&self, c: &BTreeMap<EdgeId, Rational>) -> Rational {
        self.iter()
            .map(|(e, k)| c.get(&e).cloned().unwrap_or_else(Rational::zero) * BigInt::from(k))
            .sum()
    }
}

impl FromIterator<(EdgeId, u32)> for Subgraph {
    fn from_iter<I: IntoIterator<Item = (EdgeId, u32)>>(iter: I) -> Self {
        let mut s = Subgraph::new();
        for (e, c) in iter {
            s.set(e, c);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub multiplier: Rational,
    pub subgraph: Subgraph,
}

impl Term {
    pub fn new(multiplier: Rational, subgraph: Subgraph) -> Self {
        Term {
            multiplier,
            subgraph,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexCombination {
    pub universe: MultiGraph,
    pub target: BTreeMap<EdgeId, Rational>,
    pub terms: Vec<Term>,
}

/// Presence of one boundary edge in a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Presence {
    Absent,
    Single,
    Doubled,
}

impl Presence {
    pub fn of(copies: u32) -> Self {
        match copies {
            0 => Presence::Absent,
            1 => Presence::Single,
            _ => Presence::Doubled,
        }
    }
}

/// Presence marks of a term on a designated, ordered boundary edge list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternKey(pub Vec<Presence>);

impl PatternKey {
    pub fn of(sub: &Subgraph, boundary: &[EdgeId]) -> Self {
        PatternKey(boundary.iter().map(|&e| Presence::of(sub.copies(e))).collect())
    }
}

impl ConvexCombination {
    pub fn new(universe: MultiGraph, target: BTreeMap<EdgeId, Rational>, terms: Vec<Term>) -> Self {
        ConvexCombination {
            universe,
            target,
            terms,
        }
    }

    pub fn multiplier_sum(&self) -> Rational {
        self.terms.iter().map(|t| t.multiplier.clone()).sum()
    }

    /// `sum_i lambda_i * copies_i(e)`.
    pub fn occurrence(&self, e: EdgeId) -> Result<Rational> {
        if !self.universe.has_edge(e) {
            return Err(Error::UnknownEdge(e));
        }
        Ok(self
            .terms
            .iter()
            .filter_map(|t| match t.subgraph.copies(e) {
                0 => None,
                c => Some(&t.multiplier * BigInt::from(c)),
            })
            .sum())
    }

    /// Occurrence of every universe edge in one pass.
    pub fn occurrences(&self) -> BTreeMap<EdgeId, Rational> {
        let mut out: BTreeMap<EdgeId, Rational> =
            self.universe.edge_ids().map(|e| (e, Rational::zero())).collect();
        for t in &self.terms {
            for (e, c) in t.subgraph.iter() {
                if let Some(slot) = out.get_mut(&e) {
                    *slot += &t.multiplier * BigInt::from(c);
                }
            }
        }
        out
    }

    /// Total multiplier of terms carrying each pattern on `boundary`.
    pub fn pattern_masses(&self, boundary: &[EdgeId]) -> BTreeMap<PatternKey, Rational> {
        let mut out: BTreeMap<PatternKey, Rational> = BTreeMap::new();
        for t in &self.terms {
            *out.entry(PatternKey::of(&t.subgraph, boundary))
                .or_insert_with(Rational::zero) += &t.multiplier;
        }
        out
    }

    /// Edges whose occurrence differs from the target, with both values.
    pub fn mismatches(&self) -> Vec<(EdgeId, Rational, Rational)> {
        let occ = self.occurrences();
        self.universe
            .edge_ids()
            .filter_map(|e| {
                let want = self.target.get(&e).cloned().unwrap_or_else(Rational::zero);
                let got = occ[&e].clone();
                (got != want).then_some((e, got, want))
            })
            .collect()
    }

    /// Positive multipliers summing to one, every term inside the universe
    /// and every occurrence equal to its target.
    pub fn check_finalized(&self) -> Result<()> {
        if self.multiplier_sum() != Rational::one() {
            return Err(Error::InternalInvariant(format!(
                "multipliers sum to {}",
                self.multiplier_sum()
            )));
        }
        for (i, t) in self.terms.iter().enumerate() {
            if t.multiplier <= Rational::zero() {
                return Err(Error::InternalInvariant(format!("term {i} has multiplier {}", t.multiplier)));
            }
            if let Some(e) = t.subgraph.edge_ids().find(|e| !self.universe.has_edge(*e)) {
                return Err(Error::InternalInvariant(format!("term {i} uses unknown {e}")));
            }
        }
        if let Some((e, got, want)) = self.mismatches().into_iter().next() {
            return Err(Error::InternalInvariant(format!(
                "{e} occurs {got}, target {want}"
            )));
        }
        Ok(())
    }

    /// Index of the first term that is not spanning and 2-edge-connected.
    pub fn first_non_2ec_term(&self) -> Option<usize> {
        self.terms.iter().position(|t| {
            self.universe
                .spanning(&t.subgraph)
                .map(|h| !is_two_edge_connected(&h))
                .unwrap_or(true)
        })
    }

    /// Raises occurrence of `e` to `target` by adding copies of `e` to terms
    /// below `max_copies`, in term order, splitting the last term used.
    pub fn pad_edge(mut self, e: EdgeId, target: &Rational, max_copies: u32) -> Result<Self> {
        let occ = self.occurrence(e)?;
        if &occ > target {
            return Err(Error::DeficitNotCoverable {
                edge: e,
                details: format!("occurrence {occ} already exceeds {target}"),
            });
        }
        let mut deficit = target - occ;
        while deficit > Rational::zero() {
            let mut progressed = false;
            let mut out = Vec::with_capacity(self.terms.len() + 1);
            for t in self.terms.drain(..) {
                let c = t.subgraph.copies(e);
                if deficit.is_zero() || c >= max_copies {
                    out.push(t);
                    continue;
                }
                progressed = true;
                let mut bumped = t.subgraph.clone();
                bumped.set(e, c + 1);
                if t.multiplier <= deficit {
                    deficit -= &t.multiplier;
                    out.push(Term::new(t.multiplier, bumped));
                } else {
                    let rest = &t.multiplier - &deficit;
                    out.push(Term::new(std::mem::take(&mut deficit), bumped));
                    out.push(Term::new(rest, t.subgraph));
                }
            }
            self.terms = out;
            if !progressed {
                return Err(Error::DeficitNotCoverable {
                    edge: e,
                    details: format!("{deficit} short with every term at {max_copies} copies"),
                });
            }
        }
        self.target.insert(e, target.clone());
        Ok(self)
    }

    /// Merges terms with equal subgraphs and sorts terms canonically.
    pub fn dedupe(self) -> Self {
        let mut merged: BTreeMap<Subgraph, Rational> = BTreeMap::new();
        for t in self.terms {
            *merged.entry(t.subgraph).or_insert_with(Rational::zero) += t.multiplier;
        }
        ConvexCombination {
            universe: self.universe,
            target: self.target,
            terms: merged
                .into_iter()
                .filter(|(_, m)| !m.is_zero())
                .map(|(s, m)| Term::new(m, s))
                .collect(),
        }
    }
}

/// Mixes combinations over one universe with nonnegative weights summing to 1.
pub fn average(cs: Vec<ConvexCombination>, weights: &[Rational]) -> Result<ConvexCombination> {
    if cs.is_empty() || cs.len() != weights.len() {
        return Err(Error::Precondition("need one weight per combination".into()));
    }
    if weights.iter().any(|w| w < &Rational::zero()) {
        return Err(Error::Precondition("negative weight".into()));
    }
    let total: Rational = weights.iter().cloned().sum();
    if !total.is_one() {
        return Err(Error::WeightSum(total.to_string()));
    }
    let universe = cs[0].universe.clone();
    if cs
        .iter()
        .any(|c| !c.universe.edge_ids().eq(universe.edge_ids()))
    {
        return Err(Error::Precondition("combinations have different universes".into()));
    }
    let mut target: BTreeMap<EdgeId, Rational> = BTreeMap::new();
    let mut terms = Vec::new();
    for (c, w) in cs.into_iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for (e, t) in c.target {
            *target.entry(e).or_insert_with(Rational::zero) += t * w;
        }
        terms.extend(
            c.terms
                .into_iter()
                .map(|t| Term::new(t.multiplier * w, t.subgraph)),
        );
    }
    Ok(ConvexCombination::new(universe, target, terms))
}

/// Common refinement of two weighted lists that carry equal mass per
/// pattern. Within a pattern group, entries are consumed in list order and
/// split so that each emitted pair has one mass on both sides.
pub fn refine_match<A: Clone, B: Clone>(
    a: &[(Rational, PatternKey, A)],
    b: &[(Rational, PatternKey, B)],
) -> Result<Vec<(Rational, A, B)>> {
    let mut groups_a: BTreeMap<&PatternKey, Vec<usize>> = BTreeMap::new();
    let mut groups_b: BTreeMap<&PatternKey, Vec<usize>> = BTreeMap::new();
    for (i, (_, k, _)) in a.iter().enumerate() {
        groups_a.entry(k).or_default().push(i);
    }
    for (i, (_, k, _)) in b.iter().enumerate() {
        groups_b.entry(k).or_default().push(i);
    }
    let mass = |idx: &[usize], get: &dyn Fn(usize) -> Rational| -> Rational {
        idx.iter().map(|&i| get(i)).sum()
    };
    for key in groups_a.keys().chain(groups_b.keys()) {
        let ma = groups_a
            .get(key)
            .map_or_else(Rational::zero, |v| mass(v, &|i| a[i].0.clone()));
        let mb = groups_b
            .get(key)
            .map_or_else(Rational::zero, |v| mass(v, &|i| b[i].0.clone()));
        if ma != mb {
            return Err(Error::PatternMassMismatch(format!(
                "pattern {:?}: {ma} vs {mb}",
                key.0
            )));
        }
    }
    let mut out = Vec::new();
    for (key, ia) in &groups_a {
        let ib = &groups_b[key];
        let (mut p, mut q) = (0, 0);
        let mut left_a = a[ia[0]].0.clone();
        let mut left_b = b[ib[0]].0.clone();
        while p < ia.len() && q < ib.len() {
            let take = if left_a < left_b { left_a.clone() } else { left_b.clone() };
            if take > Rational::zero() {
                out.push((take.clone(), a[ia[p]].2.clone(), b[ib[q]].2.clone()));
            }
            left_a -= &take;
            left_b -= &take;
            if left_a.is_zero() {
                p += 1;
                if p < ia.len() {
                    left_a = a[ia[p]].0.clone();
                }
            }
            if left_b.is_zero() {
                q += 1;
                if q < ib.len() {
                    left_b = b[ib[q]].0.clone();
                }
            }
        }
    }
    Ok(out)
}
