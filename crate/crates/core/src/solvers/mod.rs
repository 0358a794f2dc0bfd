//! Exact rational arithmetic and the optimization kernels shared by the
//! rest of the crate: simplex LP, min-cost flow and exact least squares.

pub mod flow;
pub mod lsq;
pub mod rational;
pub mod simplex;

pub use flow::{min_cost_flow, Arc, FlowNetwork, FlowSolution};
pub use lsq::least_squares_exact;
pub use rational::{int, parse_rational, ratio, Rational};
pub use simplex::{simplex_solve, Bounds, Constraint, LinearProgram, LpSolution, Relation};
