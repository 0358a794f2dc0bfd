//! Seeded random instances and the cross-norm consistency sweep.
//!
//! The sweep computes the transportation cost norm of random problems four
//! independent ways (min-cost flow, the dense transportation LP, the quotient
//! LP over the cycle space, and the Lipschitz dual LP) and reports any
//! disagreement.

use num_traits::Signed;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::duality::dual_optimal;
use crate::error::Result;
use crate::metric::FiniteMetricSpace;
use crate::quotient::{boundary, l1d_norm, lift_plan, quotient_norm};
use crate::solvers::Rational;
use crate::transport::{tc_brute_force, tc_norm, TransportationProblem};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random rational `p/q` with `q` in `1..=max_denom` and `p/q` in
/// `[lo, hi]` (integers `lo < hi`).
pub fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_denom: i64) -> Rational {
    let q = rng.gen_range(1..=max_denom);
    let p = rng.gen_range(lo * q..=hi * q);
    Rational::new(p.into(), q.into())
}

/// Shortest-path closure of a complete graph with random positive rational
/// edge weights. Covers general (non-line, non-tree) metrics.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    let mut d = vec![vec![Rational::from_integer(0.into()); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = random_rational(rng, 1, 10, 4);
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::new(d).expect("shortest-path closure of positive weights is a metric")
}

/// Distinct random rational points on the real line.
pub fn random_line_metric<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    let mut pts: Vec<Rational> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = random_rational(rng, 0, 4 * n as i64, 3);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    line_metric(&pts)
}

pub fn line_metric(points: &[Rational]) -> FiniteMetricSpace {
    let d = points
        .iter()
        .map(|a| points.iter().map(|b| (a - b).abs()).collect())
        .collect();
    FiniteMetricSpace::new(d).expect("distinct points on a line form a metric")
}

/// A random nonzero zero-sum problem supported on `2..=max_support` points
/// of an `n`-point space.
pub fn random_problem<R: Rng>(rng: &mut R, n: usize, max_support: usize) -> TransportationProblem {
    let max_support = max_support.min(n).max(2);
    loop {
        let size = rng.gen_range(2..=max_support);
        let points = sample(rng, n, size).into_vec();
        let mut entries: Vec<(usize, Rational)> = points[..size - 1]
            .iter()
            .map(|&p| (p, random_rational(rng, -5, 5, 3)))
            .collect();
        let total: Rational = entries.iter().map(|(_, v)| v.clone()).sum();
        entries.push((points[size - 1], -total));
        let f = TransportationProblem::from_entries(entries).expect("balanced by construction");
        if !f.is_zero() {
            return f;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub instances: usize,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `count` random instances with `3 <= n <= 6` points.
pub fn cross_norm_sweep(seed: u64, count: usize) -> Result<SweepReport> {
    let mut rng = seeded_rng(seed);
    let mut failures = Vec::new();
    for instance in 0..count {
        let n = rng.gen_range(3..=6);
        let space = random_metric(&mut rng, n);
        let f = random_problem(&mut rng, n, n);
        let (tc, plan) = tc_norm(&space, &f)?;
        let lift = lift_plan(&plan, n)?;
        let mut check = |label: &str, value: Rational| {
            if value != tc {
                failures.push(format!(
                    "instance {instance}: {label} = {value}, tc_norm = {tc}"
                ));
            }
        };
        check("plan cost", plan.cost().clone());
        check("lift l1d norm", l1d_norm(&space, &lift)?);
        check("brute force", tc_brute_force(&space, &f)?);
        check("quotient norm", quotient_norm(&space, &lift)?.0);
        check("dual value", dual_optimal(&space, &f, 0)?.1);
        if boundary(&lift) != f {
            failures.push(format!("instance {instance}: boundary of lift differs from f"));
        }
    }
    Ok(SweepReport {
        instances: count,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_metric(&mut seeded_rng(7), 5);
        let b = random_metric(&mut seeded_rng(7), 5);
        assert_eq!(a, b);
        let mut rng = seeded_rng(3);
        for _ in 0..50 {
            let f = random_problem(&mut rng, 6, 4);
            assert!(f.support_len() >= 2 && f.support_len() <= 4);
        }
    }

    #[test]
    fn small_sweep_is_clean() {
        let report = cross_norm_sweep(11, 20).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
    }
}
