//! Multi-agent path finding with searched priority orderings.
//!
//! The crate bundles the environment model, two single-agent planners, the
//! high-level solvers (CBS, CBS with priorities, PBS and fixed-order
//! prioritized planning), instance I/O, brute-force oracles and the
//! experiment harness used by the `mapf` command-line tool.

pub mod cbs;
pub mod collision;
pub mod constraint;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod instance;
pub mod io;
pub mod lowlevel;
pub mod oracle;
pub mod ordering;
pub mod par;
pub mod pbs;
pub mod rng;
pub mod stats;

#[cfg(test)]
pub(crate) mod testutil;

pub use cbs::{solve_cbs, CbsMode};
pub use collision::{detect_collisions, first_collision, validate_solution, Collision, CollisionKind, Violation};
pub use constraint::{Constraint, ConstraintKind};
pub use error::{CycleError, MapfError};
pub use graph::{build_graph_from_grid, Graph, GridMap, VertexId};
pub use instance::{flowtime, makespan, Agent, Instance, Path, Plan, Semantics};
pub use ordering::PriorityOrdering;
pub use par::Execution;
pub use pbs::{build_total_ordering, solve_pbs, solve_prioritized, solve_rnd, OrderingStrategy};
pub use stats::{Limits, SearchBudget, SearchMeter, SolveOutcome, SolveResult, SolverStats};
