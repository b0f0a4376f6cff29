//! Floor layout problem (FLP) toolkit.
//!
//! Builds mixed-integer formulations of the FLP from disjunctive descriptions,
//! strengthens them with valid inequalities, and solves them with a small
//! bounded-variable simplex plus best-bound branch-and-bound. The [`oracle`]
//! module supplies independent ground truth: brute-force optima over all
//! disjunction branches, layout checking, feasible-point sampling and polytope
//! vertex enumeration.

pub mod cuts;
pub mod embedding;
pub mod formulations;
pub mod instance;
pub mod milp;
pub mod names;
pub mod oracle;

pub use instance::{
    derive_bounds, parse_instance, perturb_instance, write_instance, Axis, BoxBounds, BoxSpec, FlpInstance, InstanceError, Layout,
};
pub use milp::{MilpModel, Sense, SolveResult, SolveStatus, VarKind};

/// Feasibility tolerance used when checking layouts and constraint rows.
pub const FEAS_TOL: f64 = 1e-6;
