use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combo::{ConvexCombination, Rational, Subgraph, Term};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph};
use crate::Limits;

/// Outcome of the exact feasibility search.
#[derive(Clone, Debug)]
pub enum Feasibility {
    Feasible(ConvexCombination),
    /// `y` has one entry per edge row (universe order) and a last entry for
    /// the multiplier-sum row, with `y·A_j ≤ 0` for every pool column and
    /// `y·b > 0`.
    Infeasible { farkas: Vec<Rational> },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Constraint matrix of the feasibility system: one row per universe edge
/// (copies of that edge in each column) and a final row of ones.
pub fn constraint_rows(universe: &MultiGraph, pool: &[Subgraph]) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = universe
        .edge_ids()
        .map(|e| pool.iter().map(|s| Rational::from_integer(BigInt::from(s.copies(e)))).collect())
        .collect();
    rows.push(vec![Rational::one(); pool.len()]);
    rows
}

/// Finds `λ ≥ 0` with `Σ λ_j = 1` and `Σ λ_j · pool_j = target`, by phase-one
/// simplex over exact rationals with Bland's pivot rule.
pub fn find_convex_combination(
    universe: &MultiGraph,
    pool: &[Subgraph],
    target: &BTreeMap<EdgeId, Rational>,
    limits: &Limits,
) -> Result<Feasibility> {
    if pool.is_empty() {
        return Err(Error::Precondition("subgraph pool is empty".into()));
    }
    if pool.len() > limits.simplex_max_columns {
        return Err(Error::SizeCap {
            what: "simplex columns",
            limit: limits.simplex_max_columns,
            actual: pool.len(),
        });
    }
    for s in pool {
        if let Some(e) = s.edge_ids().find(|e| !universe.has_edge(*e)) {
            return Err(Error::UnknownEdge(e));
        }
    }
    let mut rhs: Vec<Rational> = universe
        .edge_ids()
        .map(|e| target.get(&e).cloned().ok_or(Error::UnknownEdge(e)))
        .collect::<Result<_>>()?;
    if let Some(e) = target.keys().find(|e| !universe.has_edge(**e)) {
        return Err(Error::UnknownEdge(*e));
    }
    rhs.push(Rational::one());
    if rhs.iter().any(|b| b < &Rational::zero()) {
        return Err(Error::Precondition("target has a negative entry".into()));
    }

    let a = constraint_rows(universe, pool);
    let r = a.len();
    let n = pool.len();
    let width = n + r + 1;
    let mut tab: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..r).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + r).collect();
    // reduced costs of phase one (artificial costs 1), last entry = -objective
    let mut obj: Vec<Rational> = vec![Rational::zero(); width];
    for row in &tab {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }

    loop {
        let Some(enter) = (0..n + r).find(|&j| obj[j] < Rational::zero()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..r {
            if tab[i][enter] > Rational::zero() {
                let q = &tab[i][width - 1] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lq)) => q < *lq || (q == *lq && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, q));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return Err(Error::InternalInvariant("phase-one objective unbounded".into()));
        };
        let piv = tab[pr][enter].clone();
        for v in tab[pr].iter_mut() {
            *v /= &piv;
        }
        let prow = tab[pr].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (v, p) in obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        basis[pr] = enter;
    }

    if !obj[width - 1].is_zero() {
        let farkas = (0..r).map(|i| Rational::one() - &obj[n + i]).collect();
        return Ok(Feasibility::Infeasible { farkas });
    }
    let mut lambda: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, &b) in basis.iter().enumerate() {
        if b < n && !tab[i][width - 1].is_zero() {
            lambda.insert(b, tab[i][width - 1].clone());
        }
    }
    let terms = lambda
        .into_iter()
        .map(|(j, l)| Term::new(l, pool[j].clone()))
        .collect();
    Ok(Feasibility::Feasible(ConvexCombination::new(
        universe.clone(),
        target.clone(),
        terms,
    )))
}
