//! Model representation, LP relaxation solver, branch-and-bound and LP-file I/O.

pub mod bnb;
pub mod lp_format;
pub mod model;
pub mod simplex;

pub use bnb::{relative_gap, solve_milp, write_node_log, Limits, NodeLogEntry, SolveResult, SolveStatus};
pub use lp_format::{export_lp, import_lp, LpFormatError};
pub use model::{Constraint, LinExpr, MilpModel, ModelError, NamedRow, Sense, VarKind, Variable};
pub use simplex::{solve_lp, LpProblem, LpSolution, LpStatus};
