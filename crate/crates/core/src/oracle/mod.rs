//! Ground truth independent of the formulations: brute-force optima over
//! disjunction branches, layout checks, feasible-point sampling and vertex
//! enumeration.

mod brute;
mod check;
mod sample;
mod vertices;

use thiserror::Error;

use crate::instance::InstanceError;
use crate::milp::ModelError;

pub use brute::{brute_force_optimum, brute_force_optimum_d8, layout_from_point, BruteForce, MAX_BOXES, MAX_BOXES_D8};
pub use check::{check_layout, check_layout_tangent, FeasibilityReport, PairVerdict, Verdict};
pub use sample::{code_groups, sample_feasible_points, Sample};
pub use vertices::{enumerate_vertices, enumerate_vertices_by_bases, Polytope, MAX_DIM};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{n} boxes exceed the enumeration guard of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("every branch assignment is infeasible")]
    Infeasible,
    #[error("layout has {got} boxes, instance has {want}")]
    Dimension { got: usize, want: usize },
    #[error("dimension {0} exceeds the vertex enumeration guard")]
    VertexDimension(usize),
    #[error("polytope has {0} rows, more than the enumeration supports")]
    TooManyRows(usize),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("basis enumeration would visit {0} bases")]
    TooManyBases(u128),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
