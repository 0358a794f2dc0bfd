//! Minimum-weight perfect matchings on induced complete subgraphs, and the
//! nested-matching check on a sequence of disjoint pairs.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::solvers::Rational;

/// Vertex-set limit for the subset dynamic program.
pub const DP_VERTEX_LIMIT: usize = 20;
/// Vertex-set limit for exhaustive enumeration.
pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 10;

/// Disjoint pairs `(x_i, y_i)` of point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSequence {
    pairs: Vec<(usize, usize)>,
}

impl PairSequence {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (i, &(x, y)) in pairs.iter().enumerate() {
            if x == y {
                return Err(Error::DegeneratePair(i));
            }
            for v in [x, y] {
                if !seen.insert(v) {
                    return Err(Error::DuplicateVertex(v));
                }
            }
        }
        Ok(PairSequence { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `x_1, y_1, ..., x_n, y_n` for the first `n` pairs.
    pub fn prefix_vertices(&self, n: usize) -> Vec<usize> {
        self.pairs[..n].iter().flat_map(|&(x, y)| [x, y]).collect()
    }

    pub fn check_in(&self, space: &FiniteMetricSpace) -> Result<()> {
        self.pairs
            .iter()
            .try_for_each(|&(x, y)| space.check_index(x).and(space.check_index(y)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
    pub weight: Rational,
}

fn check_vertices(space: &FiniteMetricSpace, vertices: &[usize], limit: usize) -> Result<()> {
    let mut seen = vec![false; space.len()];
    for &v in vertices {
        space.check_index(v)?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::DuplicateVertex(v));
        }
    }
    if vertices.len() % 2 == 1 || vertices.is_empty() {
        return Err(Error::OddVertexCount(vertices.len()));
    }
    if vertices.len() > limit {
        return Err(Error::TooLarge {
            size: vertices.len(),
            limit,
        });
    }
    Ok(())
}

/// Exact minimum-weight perfect matching by subset dynamic programming.
///
/// The first uncovered vertex (in the order of `vertices`) is matched against
/// each remaining candidate in order; only strictly lighter options replace
/// the incumbent, so ties resolve to the lexicographically first edge list.
pub fn min_weight_perfect_matching(
    space: &FiniteMetricSpace,
    vertices: &[usize],
) -> Result<Matching> {
    check_vertices(space, vertices, DP_VERTEX_LIMIT)?;
    let k = vertices.len();
    let full: u32 = (1u32 << k) - 1;
    let mut memo: HashMap<u32, (Rational, usize)> = HashMap::new();
    best_cover(space, vertices, full, &mut memo);

    let mut edges = Vec::with_capacity(k / 2);
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = memo[&mask].1;
        edges.push((vertices[i], vertices[j]));
        mask &= !(1 << i) & !(1 << j);
    }
    Ok(Matching {
        weight: memo[&full].0.clone(),
        edges,
    })
}

fn best_cover(
    space: &FiniteMetricSpace,
    vertices: &[usize],
    mask: u32,
    memo: &mut HashMap<u32, (Rational, usize)>,
) -> Rational {
    if mask == 0 {
        return Rational::zero();
    }
    if let Some((w, _)) = memo.get(&mask) {
        return w.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << i);
    let mut best: Option<(Rational, usize)> = None;
    let mut candidates = rest;
    while candidates != 0 {
        let j = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        let w = best_cover(space, vertices, rest & !(1 << j), memo)
            + space.distance(vertices[i], vertices[j]);
        if best.as_ref().is_none_or(|(b, _)| w < *b) {
            best = Some((w, j));
        }
    }
    let best = best.expect("even nonempty mask has a partner");
    let w = best.0.clone();
    memo.insert(mask, best);
    w
}

/// Exhaustive enumeration of all `(k-1)!!` perfect matchings. Same
/// tie-breaking as [`min_weight_perfect_matching`].
pub fn matching_brute_force(space: &FiniteMetricSpace, vertices: &[usize]) -> Result<Matching> {
    check_vertices(space, vertices, BRUTE_FORCE_VERTEX_LIMIT)?;
    let mut best: Option<Matching> = None;
    let mut current = Vec::new();
    enumerate(space, vertices.to_vec(), &mut current, &mut best);
    Ok(best.expect("an even vertex set has a perfect matching"))
}

fn enumerate(
    space: &FiniteMetricSpace,
    remaining: Vec<usize>,
    current: &mut Vec<(usize, usize)>,
    best: &mut Option<Matching>,
) {
    if remaining.is_empty() {
        let weight: Rational = current
            .iter()
            .map(|&(x, y)| space.distance(x, y))
            .sum();
        if best.as_ref().is_none_or(|b| weight < b.weight) {
            *best = Some(Matching {
                edges: current.clone(),
                weight,
            });
        }
        return;
    }
    let first = remaining[0];
    for idx in 1..remaining.len() {
        let partner = remaining[idx];
        let rest: Vec<usize> = remaining[1..]
            .iter()
            .copied()
            .filter(|&v| v != partner)
            .collect();
        current.push((first, partner));
        enumerate(space, rest, current, best);
        current.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NestedReport {
    /// Every prefix up to `depth` pairs is a minimum-weight matching.
    Pass { depth: usize },
    /// Prefix `prefix` (1-based count of pairs) is beaten by `witness`.
    Fail {
        prefix: usize,
        prescribed_weight: Rational,
        witness: Matching,
    },
}

impl NestedReport {
    pub fn passed(&self) -> bool {
        matches!(self, NestedReport::Pass { .. })
    }
}

/// Checks that every prefix `{x_i y_i}_{i<=n}` is a minimum-weight perfect
/// matching of the points it covers. Ties count as minimal.
pub fn nested_matching_check(
    space: &FiniteMetricSpace,
    pairs: &PairSequence,
) -> Result<NestedReport> {
    pairs.check_in(space)?;
    if 2 * pairs.len() > DP_VERTEX_LIMIT {
        return Err(Error::TooLarge {
            size: 2 * pairs.len(),
            limit: DP_VERTEX_LIMIT,
        });
    }
    let mut prescribed = Rational::zero();
    for n in 1..=pairs.len() {
        let (x, y) = pairs.pairs()[n - 1];
        prescribed += space.distance(x, y);
        let best = min_weight_perfect_matching(space, &pairs.prefix_vertices(n))?;
        if best.weight < prescribed {
            return Ok(NestedReport::Fail {
                prefix: n,
                prescribed_weight: prescribed,
                witness: best,
            });
        }
    }
    Ok(NestedReport::Pass { depth: pairs.len() })
}
