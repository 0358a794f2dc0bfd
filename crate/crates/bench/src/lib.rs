//! Fixed random workloads shared by the benchmarks.

use tcspace::sweep::{random_metric, random_problem, seeded_rng};
use tcspace::{lift_plan, tc_norm, EdgeVector, FiniteMetricSpace, TransportationProblem};

pub struct Instance {
    pub space: FiniteMetricSpace,
    pub problem: TransportationProblem,
    /// Lift of an optimal plan; input for the quotient benchmarks.
    pub lift: EdgeVector,
}

/// A random `n`-point space with a problem supported on every point.
pub fn instance(n: usize, seed: u64) -> Instance {
    let mut rng = seeded_rng(seed);
    let space = random_metric(&mut rng, n);
    let problem = random_problem(&mut rng, n, n);
    let (_, plan) = tc_norm(&space, &problem).expect("generated problems are valid");
    let lift = lift_plan(&plan, n).expect("plan indices are in range");
    Instance {
        space,
        problem,
        lift,
    }
}

pub fn random_space(n: usize, seed: u64) -> FiniteMetricSpace {
    random_metric(&mut seeded_rng(seed), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible() {
        let a = instance(6, 3);
        let b = instance(6, 3);
        assert_eq!(a.space, b.space);
        assert_eq!(a.problem, b.problem);
        assert_eq!(a.lift, b.lift);
        assert_eq!(tcspace::boundary(&a.lift), a.problem);
    }
}
