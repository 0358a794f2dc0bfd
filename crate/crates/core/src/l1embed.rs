//! Finite checks for isometric copies of ℓ1 spanned by normalized pair
//! differences.
//!
//! For disjoint pairs `(x_i, y_i)` set `f_i = (1_{x_i} - 1_{y_i}) / d(x_i, y_i)`.
//! The `f_i` span an isometric copy of ℓ1^n exactly when
//! `‖Σ ε_i a_i f_i‖ = Σ a_i` for every sign pattern `ε` and positive `a`; a
//! nested family of minimum-weight matchings guarantees this. For the five
//! example families the quadruple inequality shows that a later pair can
//! always be rematched more cheaply, so no sequence of pairs is nested.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matching::{nested_matching_check, Matching, NestedReport, PairSequence};
use crate::metric::{family_metric, FiniteMetricSpace, MetricFamily};
use crate::solvers::Rational;
use crate::transport::{tc_norm, TransportationProblem};

/// Largest pair count accepted by [`sign_pattern_isometry_check`].
pub const SIGN_PATTERN_PAIR_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignPatternReport {
    Pass {
        patterns: usize,
    },
    /// `achieved < expected`, strictly.
    Fail {
        signs: Vec<Sign>,
        coeffs: Vec<Rational>,
        achieved: Rational,
        expected: Rational,
    },
}

impl SignPatternReport {
    pub fn passed(&self) -> bool {
        matches!(self, SignPatternReport::Pass { .. })
    }
}

pub fn unit_coefficients(n: usize) -> Vec<Rational> {
    vec![Rational::from_integer(1.into()); n]
}

/// `Σ ε_i a_i (1_{x_i} - 1_{y_i}) / d(x_i, y_i)`
pub fn signed_combination(
    space: &FiniteMetricSpace,
    pairs: &PairSequence,
    signs: &[Sign],
    coeffs: &[Rational],
) -> TransportationProblem {
    let entries = pairs
        .pairs()
        .iter()
        .zip(signs)
        .zip(coeffs)
        .flat_map(|((&(x, y), s), a)| {
            let mut w = a / space.distance(x, y);
            if *s == Sign::Minus {
                w = -w;
            }
            [(x, w.clone()), (y, -w)]
        });
    TransportationProblem::from_entries(entries).expect("pair differences are balanced")
}

/// Checks every sign pattern in lexicographic order (`+` before `-`, first
/// pair most significant) and reports the first one whose norm falls short
/// of `Σ a_i`.
pub fn sign_pattern_isometry_check(
    space: &FiniteMetricSpace,
    pairs: &PairSequence,
    coeffs: &[Rational],
) -> Result<SignPatternReport> {
    pairs.check_in(space)?;
    let n = pairs.len();
    if coeffs.len() != n {
        return Err(Error::CoeffLengthMismatch {
            expected: n,
            found: coeffs.len(),
        });
    }
    if let Some(i) = coeffs.iter().position(|a| !a.is_positive()) {
        return Err(Error::NonPositiveCoeff(i));
    }
    if n > SIGN_PATTERN_PAIR_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: SIGN_PATTERN_PAIR_LIMIT,
        });
    }
    let expected: Rational = coeffs.iter().sum();
    let patterns = 1usize << n;
    for code in 0..patterns {
        let signs: Vec<Sign> = (0..n)
            .map(|i| {
                if code >> (n - 1 - i) & 1 == 1 {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            })
            .collect();
        let g = signed_combination(space, pairs, &signs, coeffs);
        let (achieved, _) = tc_norm(space, &g)?;
        if achieved < expected {
            return Ok(SignPatternReport::Fail {
                signs,
                coeffs: coeffs.to_vec(),
                achieved,
                expected,
            });
        }
    }
    Ok(SignPatternReport::Pass { patterns })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrupleReport {
    pub checked: usize,
    /// 1-based index quadruples `q1 < q2 < q3 < q4` where the inequality fails.
    pub violations: Vec<[usize; 4]>,
}

impl QuadrupleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies `ρ(q1,q3) + ρ(q2,q4) < ρ(q1,q2) + ρ(q3,q4)` for every
/// `q1 < q2 < q3 < q4 <= max_index`.
pub fn quadruple_inequality_check(fam: MetricFamily, max_index: usize) -> Result<QuadrupleReport> {
    if max_index < 4 {
        return Err(Error::TooFewPoints(max_index));
    }
    let d: Vec<Vec<Rational>> = (0..=max_index)
        .map(|i| {
            (0..=max_index)
                .map(|j| {
                    if i == 0 || j == 0 {
                        Rational::zero()
                    } else {
                        fam.distance(i, j)
                    }
                })
                .collect()
        })
        .collect();
    let mut checked = 0;
    let mut violations = Vec::new();
    for q1 in 1..=max_index {
        for q2 in q1 + 1..=max_index {
            for q3 in q2 + 1..=max_index {
                for q4 in q3 + 1..=max_index {
                    checked += 1;
                    let crossed = &d[q1][q3] + &d[q2][q4];
                    let paired = &d[q1][q2] + &d[q3][q4];
                    if crossed >= paired {
                        violations.push([q1, q2, q3, q4]);
                    }
                }
            }
        }
    }
    Ok(QuadrupleReport {
        checked,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    /// The first `prefix` pairs are beaten by `witness` (1-based family
    /// indices).
    Fail {
        prefix: usize,
        prescribed_weight: Rational,
        witness: Matching,
    },
    /// Every prefix up to `depth` is a minimum matching. Failure may still
    /// occur further along the sequence.
    Undecided { depth: usize },
}

/// Runs the nested-matching check on the truncation of a family metric.
/// `pairs` use the family's 1-based indices.
pub fn refute_pair_sequence(fam: MetricFamily, pairs: &[(usize, usize)]) -> Result<Refutation> {
    if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x == 0 || y == 0) {
        return Err(Error::FamilyIndex(if x == 0 { x } else { y }));
    }
    let zero_based = PairSequence::new(pairs.iter().map(|&(x, y)| (x - 1, y - 1)).collect())?;
    let size = pairs
        .iter()
        .flat_map(|&(x, y)| [x, y])
        .max()
        .unwrap_or(0)
        .max(2);
    let space = family_metric(fam, size)?;
    Ok(match nested_matching_check(&space, &zero_based)? {
        NestedReport::Pass { depth } => Refutation::Undecided { depth },
        NestedReport::Fail {
            prefix,
            prescribed_weight,
            witness,
        } => Refutation::Fail {
            prefix,
            prescribed_weight,
            witness: Matching {
                edges: witness.edges.iter().map(|&(x, y)| (x + 1, y + 1)).collect(),
                weight: witness.weight,
            },
        },
    })
}
