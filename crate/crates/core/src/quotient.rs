//! The weighted edge space of the complete graph `K_n`, its cycle space and
//! cut space, and the quotient norm modulo cycles.
//!
//! Edges are stored as `(i, j)` with `i < j`. Under the reference orientation
//! the tail is `i` and the head is `j`. The incidence matrix `D` has `+1` at
//! the head of an edge and `-1` at its tail, so the boundary of a unit on
//! `(i, j)` is `1_j - 1_i`.
//!
//! Edge vector file format: lines `i j value` with `i < j`; `#` comments and
//! blank lines are ignored and repeated edges are summed.

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::solvers::{least_squares_exact, parse_rational, simplex_solve, LinearProgram, Rational, Relation};
use crate::transport::{TransportPlan, TransportationProblem};

/// Edges of `K_n` in canonical order `(0,1), (0,2), .., (0,n-1), (1,2), ..`.
pub fn edges(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// A rational-valued function on the edges of `K_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeVector {
    n: usize,
    values: BTreeMap<(usize, usize), Rational>,
}

impl EdgeVector {
    pub fn zero(n: usize) -> Self {
        EdgeVector {
            n,
            values: BTreeMap::new(),
        }
    }

    /// Sums repeated edges and drops zeros.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Rational)>,
    {
        let mut values = BTreeMap::new();
        for ((i, j), v) in entries {
            if i >= j {
                return Err(Error::InvalidEdge(i, j));
            }
            if j >= n {
                return Err(Error::IndexOutOfRange { index: j, n });
            }
            *values.entry((i, j)).or_insert_with(Rational::zero) += v;
        }
        values.retain(|_, v: &mut Rational| !v.is_zero());
        Ok(EdgeVector { n, values })
    }

    pub fn unit(n: usize, i: usize, j: usize) -> Result<Self> {
        Self::from_entries(n, [((i, j), Rational::from_integer(1.into()))])
    }

    /// Values listed in [`edges`] order.
    pub fn from_dense(n: usize, dense: &[Rational]) -> Self {
        let es = edges(n);
        assert_eq!(es.len(), dense.len(), "dense edge vector has wrong length");
        let values = es
            .into_iter()
            .zip(dense.iter().cloned())
            .filter(|(_, v)| !v.is_zero())
            .collect();
        EdgeVector { n, values }
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        edges(self.n).into_iter().map(|e| self.get(e.0, e.1)).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.values.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        self.values.iter().map(|(&e, v)| (e, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, a: &Rational) -> Self {
        EdgeVector::from_entries(self.n, self.values.iter().map(|(&e, v)| (e, v * a)))
            .expect("edges already validated")
    }

    /// Euclidean inner product on edges, without distance weights.
    pub fn dot(&self, other: &EdgeVector) -> Rational {
        self.values
            .iter()
            .filter_map(|(e, v)| other.values.get(e).map(|w| v * w))
            .sum()
    }

    pub fn to_text(&self) -> String {
        self.values
            .iter()
            .map(|((i, j), v)| format!("{i} {j} {v}\n"))
            .collect()
    }

    fn combine(&self, other: &Self, add: bool) -> Self {
        assert_eq!(self.n, other.n, "edge vectors over different K_n");
        let mut values = self.values.clone();
        for (&e, v) in &other.values {
            let slot = values.entry(e).or_insert_with(Rational::zero);
            if add {
                *slot += v;
            } else {
                *slot -= v;
            }
        }
        values.retain(|_, v| !v.is_zero());
        EdgeVector { n: self.n, values }
    }
}

impl Add for &EdgeVector {
    type Output = EdgeVector;
    fn add(self, rhs: Self) -> EdgeVector {
        self.combine(rhs, true)
    }
}

impl Sub for &EdgeVector {
    type Output = EdgeVector;
    fn sub(self, rhs: Self) -> EdgeVector {
        self.combine(rhs, false)
    }
}

pub fn parse_edge_vector(text: &str, n: usize) -> Result<EdgeVector> {
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
        let [i, j, value] = fields[..] else {
            return Err(parse_err(format!("expected `i j value`, found {line:?}")));
        };
        let i: usize = i.parse().map_err(|_| parse_err(format!("invalid index {i:?}")))?;
        let j: usize = j.parse().map_err(|_| parse_err(format!("invalid index {j:?}")))?;
        let value =
            parse_rational(value).ok_or_else(|| parse_err(format!("malformed rational {value:?}")))?;
        entries.push(((i, j), value));
    }
    EdgeVector::from_entries(n, entries)
}

/// An orientation of `K_n`: edge `(i, j)` points `i -> j` unless flagged as
/// reversed. Flags are indexed in [`edges`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    n: usize,
    reversed: Vec<bool>,
}

impl Orientation {
    pub fn reference(n: usize) -> Self {
        Orientation {
            n,
            reversed: vec![false; n * n.saturating_sub(1) / 2],
        }
    }

    pub fn from_flags(n: usize, reversed: Vec<bool>) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if reversed.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: reversed.len(),
            });
        }
        Ok(Orientation { n, reversed })
    }

    fn flipped(&self, i: usize, j: usize) -> bool {
        // (i, j) with i < j
        self.reversed[edge_index(self.n, i, j)]
    }

    /// `+1` if traversing `a -> b` follows the orientation, `-1` otherwise,
    /// together with the stored edge key.
    fn traverse(&self, a: usize, b: usize) -> ((usize, usize), Rational) {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        let forward = (a < b) != self.flipped(i, j);
        let sign = if forward { 1 } else { -1 };
        ((i, j), Rational::from_integer(sign.into()))
    }

    /// Re-expresses a reference-oriented vector in this orientation.
    pub fn apply(&self, f: &EdgeVector) -> EdgeVector {
        EdgeVector::from_entries(
            f.n,
            f.iter().map(|((i, j), v)| {
                let v = if self.flipped(i, j) { -v.clone() } else { v.clone() };
                ((i, j), v)
            }),
        )
        .expect("edges already validated")
    }
}

fn edge_index(n: usize, i: usize, j: usize) -> usize {
    // edges before row i: (n-1) + (n-2) + ... + (n-i)
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Signed indicators of a basis of the cycle space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub n: usize,
    pub cycles: Vec<EdgeVector>,
}

/// Fundamental cycles of the star spanning tree at point 0 under the
/// reference orientation: for `1 <= i < j` the triangle `0 -> i -> j -> 0`.
pub fn cycle_basis(n: usize) -> CycleBasis {
    cycle_basis_oriented(&Orientation::reference(n))
}

pub fn cycle_basis_oriented(orientation: &Orientation) -> CycleBasis {
    let n = orientation.n;
    let cycles = (1..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let legs = [(0, i), (i, j), (j, 0)].map(|(a, b)| orientation.traverse(a, b));
            EdgeVector::from_entries(n, legs).expect("triangle edges are valid")
        })
        .collect();
    CycleBasis { n, cycles }
}

/// `D f`: each edge adds its value at its head and subtracts it at its tail.
pub fn boundary(f: &EdgeVector) -> TransportationProblem {
    TransportationProblem::from_entries(
        f.iter()
            .flat_map(|((i, j), v)| [(j, v.clone()), (i, -v.clone())]),
    )
    .expect("boundaries are balanced")
}

/// `Dᵀ h`: edge `(i, j)` gets `h(j) - h(i)`.
pub fn coboundary(h: &[Rational]) -> EdgeVector {
    let n = h.len();
    let dense: Vec<Rational> = edges(n).into_iter().map(|(i, j)| &h[j] - &h[i]).collect();
    EdgeVector::from_dense(n, &dense)
}

/// An edge vector whose boundary is the plan's problem and whose weighted
/// norm is the plan's cost: move `(x, y, a)` contributes `-a` to edge
/// `(x, y)` when `x < y` and `+a` to `(y, x)` otherwise.
pub fn lift_plan(plan: &TransportPlan, n: usize) -> Result<EdgeVector> {
    let mut entries = Vec::with_capacity(plan.moves().len());
    for m in plan.moves() {
        for index in [m.source, m.sink] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        if m.source < m.sink {
            entries.push(((m.source, m.sink), -m.amount.clone()));
        } else {
            entries.push(((m.sink, m.source), m.amount.clone()));
        }
    }
    EdgeVector::from_entries(n, entries)
}

fn check_size(space: &FiniteMetricSpace, f: &EdgeVector) -> Result<()> {
    if space.len() != f.n {
        return Err(Error::SizeMismatch {
            expected: space.len(),
            found: f.n,
        });
    }
    Ok(())
}

/// `Σ |f_uv| d(u,v)`
pub fn l1d_norm(space: &FiniteMetricSpace, f: &EdgeVector) -> Result<Rational> {
    check_size(space, f)?;
    Ok(f.iter().map(|((i, j), v)| v.abs() * space.distance(i, j)).sum())
}

/// `max |f_uv| / d(u,v)`
pub fn linf_d_norm(space: &FiniteMetricSpace, f: &EdgeVector) -> Result<Rational> {
    check_size(space, f)?;
    Ok(f.iter()
        .map(|((i, j), v)| v.abs() / space.distance(i, j))
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Distance from `f` to the cycle space in the weighted ℓ1 norm, with a
/// minimizing representative `f + Σ c_k χ_k`.
pub fn quotient_norm(space: &FiniteMetricSpace, f: &EdgeVector) -> Result<(Rational, EdgeVector)> {
    quotient_norm_oriented(space, f, &Orientation::reference(space.len()))
}

/// As [`quotient_norm`], with `f` and the cycle basis expressed in
/// `orientation`.
pub fn quotient_norm_oriented(
    space: &FiniteMetricSpace,
    f: &EdgeVector,
    orientation: &Orientation,
) -> Result<(Rational, EdgeVector)> {
    check_size(space, f)?;
    if orientation.n != space.len() {
        return Err(Error::SizeMismatch {
            expected: space.len(),
            found: orientation.n,
        });
    }
    let n = space.len();
    let basis = cycle_basis_oriented(orientation);
    if basis.cycles.is_empty() {
        return Ok((l1d_norm(space, f)?, f.clone()));
    }
    let es = edges(n);
    let k = basis.cycles.len();
    let nvars = k + es.len();

    // variables: c_0..c_{k-1} (free), then t_e >= |f_e + Σ c χ(e)|
    let objective = std::iter::repeat_n(Rational::zero(), k)
        .chain(es.iter().map(|&(i, j)| space.distance(i, j).clone()))
        .collect();
    let mut lp = LinearProgram::minimize(objective);
    for c in 0..k {
        lp.set_free(c)?;
    }
    let one = Rational::from_integer(1.into());
    for (e, &(i, j)) in es.iter().enumerate() {
        let chi: Vec<Rational> = basis.cycles.iter().map(|z| z.get(i, j)).collect();
        let fe = f.get(i, j);
        let mut upper = vec![Rational::zero(); nvars];
        let mut lower = vec![Rational::zero(); nvars];
        for (c, x) in chi.iter().enumerate() {
            upper[c] = -x.clone();
            lower[c] = x.clone();
        }
        upper[k + e] = one.clone();
        lower[k + e] = one.clone();
        lp.add_constraint(upper, Relation::Ge, fe.clone())?;
        lp.add_constraint(lower, Relation::Ge, -fe)?;
    }
    let sol = simplex_solve(&lp)?;
    let mut rep = f.clone();
    for (c, z) in sol.x[..k].iter().zip(&basis.cycles) {
        if !c.is_zero() {
            rep = &rep + &z.scale(c);
        }
    }
    Ok((sol.value, rep))
}

/// Orthogonal splitting of an edge vector into cycle and cut parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutDecomposition {
    /// Component in the cycle space `Z`.
    pub cycle: EdgeVector,
    /// Component in the cut space `B = Dᵀ ℓ_2(M)`.
    pub cut: EdgeVector,
    /// A point function `h` with `cut = Dᵀ h`.
    pub potential: Vec<Rational>,
}

/// Projects `f` onto the cut space by exact least squares over the columns of
/// `Dᵀ`; the remainder lies in the cycle space. Orthogonality is in the
/// unweighted edge inner product.
pub fn cut_decomposition(f: &EdgeVector) -> CutDecomposition {
    let n = f.n;
    let rows: Vec<Vec<Rational>> = edges(n)
        .into_iter()
        .map(|(i, j)| {
            let mut row = vec![Rational::zero(); n];
            row[i] = Rational::from_integer((-1).into());
            row[j] = Rational::from_integer(1.into());
            row
        })
        .collect();
    let potential =
        least_squares_exact(&rows, &f.to_dense()).expect("incidence rows match edge count");
    let cut = coboundary(&potential);
    let cycle = f - &cut;
    CutDecomposition {
        cycle,
        cut,
        potential,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::rational::{int, ratio};
    use crate::transport::{tc_norm, Move};

    fn line(points: &[i64]) -> FiniteMetricSpace {
        let matrix = points
            .iter()
            .map(|a| points.iter().map(|b| int((a - b).abs())).collect())
            .collect();
        FiniteMetricSpace::new(matrix).unwrap()
    }

    #[test]
    fn edge_indexing() {
        for n in 0..7 {
            for (k, (i, j)) in edges(n).into_iter().enumerate() {
                assert_eq!(edge_index(n, i, j), k);
            }
        }
    }

    #[test]
    fn triangle_cycle() {
        let b = cycle_basis(3);
        assert_eq!(b.cycles.len(), 1);
        let chi = &b.cycles[0];
        assert_eq!(chi.get(0, 1), int(1));
        assert_eq!(chi.get(1, 2), int(1));
        assert_eq!(chi.get(0, 2), int(-1));
    }

    #[test]
    fn basis_sizes_and_boundaries() {
        assert!(cycle_basis(2).cycles.is_empty());
        assert!(cycle_basis(1).cycles.is_empty());
        let b = cycle_basis(5);
        assert_eq!(b.cycles.len(), 6);
        assert!(b.cycles.iter().all(|z| boundary(z).is_zero()));
    }

    #[test]
    fn boundary_examples() {
        let e02 = EdgeVector::unit(3, 0, 2).unwrap();
        assert_eq!(boundary(&e02), TransportationProblem::dipole(2, 0));
        let path = EdgeVector::from_entries(3, [((0, 1), int(1)), ((1, 2), int(1))]).unwrap();
        assert_eq!(boundary(&path), TransportationProblem::dipole(2, 0));
    }

    #[test]
    fn lift_sign_convention() {
        let m = line(&[0, 1, 3]);
        let plan = TransportPlan::new(
            &m,
            vec![Move {
                source: 0,
                sink: 2,
                amount: int(1),
            }],
        )
        .unwrap();
        let lift = lift_plan(&plan, 3).unwrap();
        assert_eq!(lift.get(0, 2), int(-1));
        assert_eq!(boundary(&lift), TransportationProblem::dipole(0, 2));
        assert!(lift_plan(&TransportPlan::empty(), 3).unwrap().is_zero());
        assert_eq!(lift_plan(&plan, 2), Err(Error::IndexOutOfRange { index: 2, n: 2 }));
    }

    #[test]
    fn lift_norm_equals_plan_cost() {
        let m = line(&[0, 1, 3]);
        let f = TransportationProblem::from_entries([(0, int(2)), (1, int(-1)), (2, int(-1))]).unwrap();
        let (norm, plan) = tc_norm(&m, &f).unwrap();
        let lift = lift_plan(&plan, 3).unwrap();
        assert_eq!(l1d_norm(&m, &lift).unwrap(), int(4));
        assert_eq!(boundary(&lift), f);
        assert_eq!(quotient_norm(&m, &lift).unwrap().0, norm);
    }

    #[test]
    fn l1d_norm_examples() {
        let m = line(&[0, 1, 3]);
        assert_eq!(l1d_norm(&m, &EdgeVector::zero(3)).unwrap(), int(0));
        assert_eq!(l1d_norm(&m, &EdgeVector::unit(3, 1, 2).unwrap()).unwrap(), int(2));
        assert_eq!(
            l1d_norm(&m, &EdgeVector::zero(4)),
            Err(Error::SizeMismatch { expected: 3, found: 4 })
        );
    }

    #[test]
    fn quotient_of_cycle_is_zero() {
        let m = line(&[0, 1, 3, 7]);
        for z in cycle_basis(4).cycles {
            let (value, rep) = quotient_norm(&m, &z.scale(&ratio(5, 3))).unwrap();
            assert!(value.is_zero());
            assert!(rep.is_zero());
        }
    }

    #[test]
    fn quotient_on_k3_relay() {
        // d01 = d12 = 1, d02 = 2: direct and relay both cost 2
        let m = FiniteMetricSpace::from_upper_triangle(3, &[int(1), int(2), int(1)]).unwrap();
        let (value, rep) = quotient_norm(&m, &EdgeVector::unit(3, 0, 2).unwrap()).unwrap();
        assert_eq!(value, int(2));
        assert_eq!(l1d_norm(&m, &rep).unwrap(), int(2));
        assert_eq!(boundary(&rep), TransportationProblem::dipole(2, 0));
    }

    #[test]
    fn orientation_does_not_change_quotient() {
        let m = line(&[0, 2, 3, 7]);
        let f = EdgeVector::from_entries(4, [((0, 1), int(1)), ((2, 3), ratio(-1, 2)), ((1, 3), int(3))])
            .unwrap();
        let base = quotient_norm(&m, &f).unwrap().0;
        let o = Orientation::from_flags(4, vec![true, false, true, true, false, true]).unwrap();
        for z in cycle_basis_oriented(&o).cycles {
            assert!(boundary(&o.apply(&z)).is_zero());
        }
        assert_eq!(quotient_norm_oriented(&m, &o.apply(&f), &o).unwrap().0, base);
    }

    #[test]
    fn cut_decomposition_examples() {
        let chi = cycle_basis(3).cycles[0].clone();
        let d = cut_decomposition(&chi);
        assert_eq!(d.cycle, chi);
        assert!(d.cut.is_zero());

        let grad = coboundary(&[int(0), int(1), int(0), int(0)]);
        let d = cut_decomposition(&grad);
        assert!(d.cycle.is_zero());
        assert_eq!(d.cut, grad);

        // unit on (0,1): cycle part is <f,χ>/3 χ = (1/3, -1/3, 1/3)
        let f = EdgeVector::unit(3, 0, 1).unwrap();
        let d = cut_decomposition(&f);
        assert_eq!(d.cycle, chi.scale(&ratio(1, 3)));
        assert_eq!(d.cut.to_dense(), vec![ratio(2, 3), ratio(1, 3), ratio(-1, 3)]);
        assert!(d.cycle.dot(&d.cut).is_zero());
        assert_eq!(&d.cycle + &d.cut, f);
    }

    #[test]
    fn parse_edge_file() {
        let f = parse_edge_vector("# edges\n0 2 1/2\n1 2 -3\n0 2 1/2\n", 3).unwrap();
        assert_eq!(f.get(0, 2), int(1));
        assert_eq!(parse_edge_vector(&f.to_text(), 3).unwrap(), f);
        assert_eq!(parse_edge_vector("2 1 1", 3), Err(Error::InvalidEdge(2, 1)));
        assert_eq!(
            parse_edge_vector("0 3 1", 3),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        );
        assert!(matches!(parse_edge_vector("0 1", 3), Err(Error::Parse { line: 1, .. })));
    }
}
