//! Exact transportation cost norms on finite metric spaces.
//!
//! The crate computes Wasserstein-1 (transportation cost) norms with optimal
//! plans, minimum-weight perfect matchings and the nested-matching check,
//! quotient norms of the weighted edge space modulo the cycle space, and
//! Lipschitz dual certificates. All arithmetic is exact over big rationals.

pub mod duality;
pub mod error;
pub mod l1embed;
pub mod matching;
pub mod metric;
pub mod quotient;
pub mod solvers;
pub mod sweep;
pub mod transport;

pub use duality::{dual_optimal, gradient_field, lip_constant, pairing, LipFunction};
pub use error::{Axiom, Error, Result};
pub use l1embed::{
    quadruple_inequality_check, refute_pair_sequence, sign_pattern_isometry_check,
    QuadrupleReport, Refutation, Sign, SignPatternReport,
};
pub use matching::{
    matching_brute_force, min_weight_perfect_matching, nested_matching_check, Matching,
    NestedReport, PairSequence,
};
pub use metric::{
    extremes, family_metric, induced_subspace, parse_metric, FiniteMetricSpace, MetricFamily,
};
pub use quotient::{
    boundary, cut_decomposition, cycle_basis, l1d_norm, lift_plan, quotient_norm, CycleBasis,
    EdgeVector,
};
pub use solvers::{int, parse_rational, ratio, Rational};
pub use transport::{
    l1_norm, parse_problem, point_embedding, tc_brute_force, tc_norm, Move, TransportPlan,
    TransportationProblem,
};
