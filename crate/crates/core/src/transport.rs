//! Transportation problems and the transportation cost norm.
//!
//! A transportation problem is a finitely supported zero-sum function on the
//! points of a metric space: positive values are supply, negative values are
//! demand. Its norm is the cheapest way to ship the supply to the demand,
//! paying `amount × distance` per move.
//!
//! Problem file format: one `index value` pair per line, `value` a rational.
//! Blank lines and `#` comments are ignored, values for a repeated index are
//! summed, and the total must be zero.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::solvers::{
    min_cost_flow, parse_rational, simplex_solve, FlowNetwork, LinearProgram, Rational, Relation,
};

/// Largest support accepted by [`tc_brute_force`].
pub const BRUTE_FORCE_SUPPORT_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransportationProblem {
    values: BTreeMap<usize, Rational>,
}

impl TransportationProblem {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Sums repeated indices, drops zeros and rejects a nonzero total.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut values: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, v) in entries {
            *values.entry(i).or_insert_with(Rational::zero) += v;
        }
        values.retain(|_, v| !v.is_zero());
        let total: Rational = values.values().sum();
        if !total.is_zero() {
            return Err(Error::NotZeroSum(total.to_string()));
        }
        Ok(TransportationProblem { values })
    }

    /// `1_u - 1_v`; the zero problem when `u == v`.
    pub fn dipole(u: usize, v: usize) -> Self {
        let mut values = BTreeMap::new();
        if u != v {
            values.insert(u, Rational::from_integer(1.into()));
            values.insert(v, Rational::from_integer((-1).into()));
        }
        TransportationProblem { values }
    }

    pub fn get(&self, v: usize) -> Rational {
        self.values.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.values.iter().map(|(&k, v)| (k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, a: &Rational) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        TransportationProblem {
            values: self.values.iter().map(|(&k, v)| (k, v * a)).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        self.values
            .iter()
            .map(|(k, v)| format!("{k} {v}\n"))
            .collect()
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        let mut values = self.values.clone();
        for (&k, v) in &other.values {
            let slot = values.entry(k).or_insert_with(Rational::zero);
            if sign {
                *slot += v;
            } else {
                *slot -= v;
            }
        }
        values.retain(|_, v| !v.is_zero());
        TransportationProblem { values }
    }
}

impl Add for &TransportationProblem {
    type Output = TransportationProblem;
    fn add(self, rhs: Self) -> TransportationProblem {
        self.combine(rhs, true)
    }
}

impl Sub for &TransportationProblem {
    type Output = TransportationProblem;
    fn sub(self, rhs: Self) -> TransportationProblem {
        self.combine(rhs, false)
    }
}

impl Neg for &TransportationProblem {
    type Output = TransportationProblem;
    fn neg(self) -> TransportationProblem {
        TransportationProblem {
            values: self.values.iter().map(|(&k, v)| (k, -v.clone())).collect(),
        }
    }
}

pub fn parse_problem(text: &str) -> Result<TransportationProblem> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse {
            line: lineno + 1,
            msg,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [index, value] = fields[..] else {
            return Err(parse_err(format!("expected `index value`, found {line:?}")));
        };
        let index: usize = index
            .parse()
            .map_err(|_| parse_err(format!("invalid point index {index:?}")))?;
        let value =
            parse_rational(value).ok_or_else(|| parse_err(format!("malformed rational {value:?}")))?;
        entries.push((index, value));
    }
    TransportationProblem::from_entries(entries)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub source: usize,
    pub sink: usize,
    pub amount: Rational,
}

/// Moves `amount · (1_source - 1_sink)` together with their total cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportPlan {
    moves: Vec<Move>,
    cost: Rational,
}

impl TransportPlan {
    pub fn empty() -> Self {
        TransportPlan {
            moves: Vec::new(),
            cost: Rational::zero(),
        }
    }

    /// Checks indices and positivity and computes the cost in `space`.
    pub fn new(space: &FiniteMetricSpace, moves: Vec<Move>) -> Result<Self> {
        let mut cost = Rational::zero();
        for (i, m) in moves.iter().enumerate() {
            space.check_index(m.source)?;
            space.check_index(m.sink)?;
            if !m.amount.is_positive() {
                return Err(Error::NonPositiveCoeff(i));
            }
            cost += &m.amount * space.distance(m.source, m.sink);
        }
        Ok(TransportPlan { moves, cost })
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn cost(&self) -> &Rational {
        &self.cost
    }

    /// The problem this plan solves.
    pub fn problem(&self) -> TransportationProblem {
        TransportationProblem::from_entries(self.moves.iter().flat_map(|m| {
            [(m.source, m.amount.clone()), (m.sink, -m.amount.clone())]
        }))
        .expect("every move is balanced")
    }
}

pub fn check_support(space: &FiniteMetricSpace, f: &TransportationProblem) -> Result<()> {
    match f.support().find(|&i| i >= space.len()) {
        Some(index) => Err(Error::SupportOutOfRange {
            index,
            n: space.len(),
        }),
        None => Ok(()),
    }
}

type Masses = Vec<(usize, Rational)>;

/// Splits a problem into its sources and sinks (with positive amounts).
fn split(f: &TransportationProblem) -> (Masses, Masses) {
    let sources = f
        .iter()
        .filter(|(_, v)| v.is_positive())
        .map(|(i, v)| (i, v.clone()))
        .collect();
    let sinks = f
        .iter()
        .filter(|(_, v)| v.is_negative())
        .map(|(i, v)| (i, -v.clone()))
        .collect();
    (sources, sinks)
}

/// Transportation cost norm and an optimal plan.
///
/// The plan is computed as a min-cost flow on the bipartite network from the
/// positive support to the negative support, so every move goes from a point
/// with `f > 0` to a point with `f < 0`. Among several optimal plans the
/// solver's lowest-index tie-breaking picks the witness.
pub fn tc_norm(
    space: &FiniteMetricSpace,
    f: &TransportationProblem,
) -> Result<(Rational, TransportPlan)> {
    check_support(space, f)?;
    let (sources, sinks) = split(f);
    if sources.is_empty() {
        return Ok((Rational::zero(), TransportPlan::empty()));
    }
    let supplies = sources
        .iter()
        .map(|(_, a)| a.clone())
        .chain(sinks.iter().map(|(_, a)| -a.clone()))
        .collect();
    let mut net = FlowNetwork::new(supplies)?;
    let mut arc_ends = Vec::with_capacity(sources.len() * sinks.len());
    for (si, (x, _)) in sources.iter().enumerate() {
        for (ti, (y, _)) in sinks.iter().enumerate() {
            net.add_arc(si, sources.len() + ti, space.distance(*x, *y).clone(), None)?;
            arc_ends.push((*x, *y));
        }
    }
    let sol = min_cost_flow(&net)?;
    let moves = arc_ends
        .into_iter()
        .zip(sol.flows)
        .filter(|(_, flow)| flow.is_positive())
        .map(|((source, sink), amount)| Move {
            source,
            sink,
            amount,
        })
        .collect();
    let plan = TransportPlan {
        moves,
        cost: sol.cost.clone(),
    };
    Ok((sol.cost, plan))
}

/// Transportation cost norm from the dense transportation LP, solved by
/// simplex. Independent of [`tc_norm`]; limited to small supports.
pub fn tc_brute_force(space: &FiniteMetricSpace, f: &TransportationProblem) -> Result<Rational> {
    check_support(space, f)?;
    if f.support_len() > BRUTE_FORCE_SUPPORT_LIMIT {
        return Err(Error::TooLarge {
            size: f.support_len(),
            limit: BRUTE_FORCE_SUPPORT_LIMIT,
        });
    }
    let (sources, sinks) = split(f);
    if sources.is_empty() {
        return Ok(Rational::zero());
    }
    let (p, q) = (sources.len(), sinks.len());
    let costs = sources
        .iter()
        .flat_map(|(x, _)| sinks.iter().map(move |(y, _)| space.distance(*x, *y).clone()))
        .collect();
    let mut lp = LinearProgram::minimize(costs);
    let one = Rational::from_integer(1.into());
    for (i, (_, supply)) in sources.iter().enumerate() {
        let mut row = vec![Rational::zero(); p * q];
        for cell in &mut row[i * q..(i + 1) * q] {
            *cell = one.clone();
        }
        lp.add_constraint(row, Relation::Eq, supply.clone())?;
    }
    for (j, (_, demand)) in sinks.iter().enumerate() {
        let mut row = vec![Rational::zero(); p * q];
        for i in 0..p {
            row[i * q + j] = one.clone();
        }
        lp.add_constraint(row, Relation::Eq, demand.clone())?;
    }
    Ok(simplex_solve(&lp)?.value)
}

/// `Σ |f(v)|`
pub fn l1_norm(f: &TransportationProblem) -> Rational {
    f.iter().map(|(_, v)| v.abs()).sum()
}

/// `1_v - 1_base`, the image of `v` under the canonical isometric embedding.
pub fn point_embedding(
    space: &FiniteMetricSpace,
    v: usize,
    base: usize,
) -> Result<TransportationProblem> {
    space.check_index(v)?;
    space.check_index(base)?;
    Ok(TransportationProblem::dipole(v, base))
}

/// Largest distance between two support points (zero for an empty support).
pub fn support_diameter(space: &FiniteMetricSpace, f: &TransportationProblem) -> Result<Rational> {
    check_support(space, f)?;
    let support: Vec<usize> = f.support().collect();
    let mut diam = Rational::zero();
    for (i, &u) in support.iter().enumerate() {
        for &v in &support[i + 1..] {
            if *space.distance(u, v) > diam {
                diam = space.distance(u, v).clone();
            }
        }
    }
    Ok(diam)
}
