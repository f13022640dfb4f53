//! Exact convex-combination certificates for the 2-edge-connected spanning
//! multi-subgraph problem.
//!
//! For a half-triangle solution `x` of the cut LP, [`ht::decompose_sixfifth`]
//! writes `6/5 x` as a convex combination of integral 2-edge-connected
//! spanning multi-subgraphs. The building blocks are:
//!
//! * [`graph`]: multigraphs with stable edge ids, cut enumeration, contraction
//!   and half-triangle recognition.
//! * [`combo`]: exact rational arithmetic on convex combinations.
//! * [`cubic`]: the uniform `4/5` decomposition for cubic 3-edge-connected graphs.
//! * [`ht`]: the half-triangle decomposition and its lift back to `x`.
//! * [`verifier`]: an independent certificate checker.
//! * [`oracle`]: brute-force enumeration, exact OPT and an exact simplex.
//! * [`instances`]: generators and the text formats.

pub mod certificate;
pub mod cli;
pub mod combo;
pub mod cubic;
pub mod error;
pub mod graph;
pub mod ht;
pub mod instances;
pub mod oracle;
pub mod verifier;

pub use combo::Rational;
pub use error::{Error, HalfTriangleClause, Result};
pub use graph::{EdgeId, MultiGraph, VertexId};

/// Size limits shared by the decomposers and oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest cubic graph handed to the cubic decomposer.
    pub cubic_max_vertices: usize,
    /// Largest number of edge subsets examined by one cut enumeration.
    pub cut_enumeration: usize,
    /// Largest vertex count for subset enumeration in cut feasibility.
    pub feasibility_max_vertices: usize,
    /// Largest edge count for oracle enumeration.
    pub oracle_max_edges: usize,
    /// Largest subgraph pool materialized by the oracle.
    pub pool_max: usize,
    /// Largest number of simplex columns.
    pub simplex_max_columns: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            cubic_max_vertices: 12,
            cut_enumeration: 2_000_000,
            feasibility_max_vertices: 20,
            oracle_max_edges: 16,
            pool_max: 200_000,
            simplex_max_columns: 5000,
        }
    }
}
