//! Brute-force ground truth at desk scale: exhaustive pools of spanning
//! 2-edge-connected multi-subgraphs, exact `OPT`, and an exact phase-one
//! simplex for convex-combination feasibility.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::combo::{ratio, Rational, Subgraph};
use crate::error::{Error, Result};
use crate::graph::{cut_feasibility, EdgeId, FractionalSolution};
use crate::Limits;

mod enumerate;
mod simplex;

pub use enumerate::{enumerate_2ecss, opt_2ec};
pub use simplex::{constraint_rows, find_convex_combination, Feasibility};

/// `OPT` against `c·x` on one instance. `OPT` is taken over the support
/// graph only, without completing costs to a metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport {
    pub cx: Rational,
    pub opt: Rational,
    pub witness: Subgraph,
    /// `OPT / c·x`, undefined when `c·x = 0`.
    pub ratio: Option<Rational>,
    /// Set when a `6/5` certificate was built for `x`; then `OPT ≤ 6/5 c·x`
    /// has been checked.
    pub certified: bool,
}

/// Computes the report and, when `x` is a half-triangle solution with a
/// certificate, checks `OPT ≤ 6/5 c·x`.
pub fn ratio_experiment(
    x: &FractionalSolution,
    c: &BTreeMap<EdgeId, Rational>,
    limits: &Limits,
) -> Result<RatioReport> {
    if !cut_feasibility(x, limits)? {
        return Err(Error::Precondition("x violates a cut constraint".into()));
    }
    let (opt, witness) = opt_2ec(&x.graph, c, limits)?;
    let cx = x.cost(c)?;
    let ratio_value = (!cx.is_zero()).then(|| &opt / &cx);
    let certified = crate::ht::decompose_sixfifth(x, None, limits).is_ok();
    if certified && opt > &cx * ratio(6, 5) {
        return Err(Error::InternalInvariant(format!(
            "OPT {opt} exceeds 6/5 of c·x = {cx} despite a certificate"
        )));
    }
    Ok(RatioReport {
        cx,
        opt,
        witness,
        ratio: ratio_value,
        certified,
    })
}
