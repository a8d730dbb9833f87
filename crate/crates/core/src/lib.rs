//! Triangle-based cohesion of vertex sets: exact counting, maximum-cohesion
//! search, and the Clique reduction that makes the search NP-hard.
//!
//! Counting code is generic over [`Count`]; the aliases below fix it to
//! arbitrary-precision integers, which is what the solvers and the reduction
//! use.

pub mod cohesion;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod reduction;
pub mod scalar;
pub mod solvers;
pub mod triangles;
pub mod verify;

use num_bigint::BigUint;

pub use cohesion::{cohesion, cohesion_from_census, cohesion_of_set, lambda_threshold, CohesionValue};
pub use error::{Error, Result};
pub use graph::{induced_subgraph, is_connected, parse_edge_list, read_edge_list, Graph, VertexSet};
pub use reduction::{reduce, ReduceOptions, ReductionInstance};
pub use scalar::Count;
pub use solvers::{solve_exact, solve_heuristic, SearchConfig, SolverResult};
pub use triangles::{census, CensusDelta, TriangleCensus};

/// Exact cohesion value.
pub type Cohesion = CohesionValue<BigUint>;
/// Triangle census with unbounded counts.
pub type Census = TriangleCensus<BigUint>;
