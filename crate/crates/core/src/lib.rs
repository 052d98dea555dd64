//! Exact-arithmetic iterative rounding for the degree-bounded survivable
//! network design problem.
//!
//! Given an undirected multigraph with edge costs, pairwise connectivity
//! requirements `rho(u, v)` and degree bounds `b(v)` on a subset `W0` of the
//! vertices, [`rounding::solve`] returns an edge set that
//!
//! * meets every connectivity requirement,
//! * costs at most twice the optimum of the cut LP relaxation, and
//! * gives every `v` in `W0` a degree of at most `2 b(v) + 2`.
//!
//! Every LP value in the crate is an exact rational, so the branching
//! predicates of the rounding loop (`x_e = 0`, `x_e = 1`, `x_e >= 1/2`) are
//! decided without tolerance. The crate is `no_std` and only needs `alloc`;
//! file formats and the command-line front end live in the `degsnd` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cuts;
pub mod flow;
pub mod generate;
pub mod instance;
pub mod lp;
pub mod rational;
pub mod rounding;
pub mod verify;

pub use cuts::{find_violated_cut, is_feasible, lp_feasible, residual_requirement, Violation};
pub use flow::{max_flow, CapGraph, FlowResult};
pub use instance::{cut_requirement, Cut, Edge, EdgeId, Instance, InstanceBuilder, InstanceError, VertexId};
pub use rational::Rational;
pub use rounding::{
    classify, solve, solve_cut_lp, Action, FracSolution, IterationRecord, LemmaCase, RoundingState, Solution,
    SolveError, SolveRun,
};
