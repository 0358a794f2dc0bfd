//! Lipschitz functions vanishing at a base point, the dual LP for the
//! transportation cost norm, and gradient fields in the cut space.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::quotient::{coboundary, EdgeVector};
use crate::solvers::{parse_rational, simplex_solve, LinearProgram, Rational, Relation};
use crate::transport::{check_support, TransportationProblem};

/// A function on the points of a space with `h(base) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipFunction {
    values: Vec<Rational>,
    base: usize,
}

impl LipFunction {
    pub fn new(values: Vec<Rational>, base: usize) -> Result<Self> {
        match values.get(base) {
            None => Err(Error::IndexOutOfRange {
                index: base,
                n: values.len(),
            }),
            Some(v) if !v.is_zero() => Err(Error::NonZeroAtBase(base)),
            Some(_) => Ok(LipFunction { values, base }),
        }
    }

    /// Shifts `values` by a constant so that the base value becomes zero.
    pub fn normalized(values: Vec<Rational>, base: usize) -> Result<Self> {
        let shift = values
            .get(base)
            .cloned()
            .ok_or(Error::IndexOutOfRange {
                index: base,
                n: values.len(),
            })?;
        Self::new(values.into_iter().map(|v| v - &shift).collect(), base)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, a: &Rational) -> Self {
        LipFunction {
            values: self.values.iter().map(|v| v * a).collect(),
            base: self.base,
        }
    }

    pub fn to_text(&self) -> String {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{i} {v}\n"))
            .collect()
    }
}

/// Lipschitz function file: lines `index value`; unlisted points are zero.
pub fn parse_lip_function(text: &str, n: usize, base: usize) -> Result<LipFunction> {
    let mut values = vec![Rational::zero(); n];
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
        let slot = values
            .get_mut(index)
            .ok_or(Error::IndexOutOfRange { index, n })?;
        *slot = value;
    }
    LipFunction::new(values, base)
}

fn check_len(space: &FiniteMetricSpace, h: &LipFunction) -> Result<()> {
    if h.len() != space.len() {
        return Err(Error::SizeMismatch {
            expected: space.len(),
            found: h.len(),
        });
    }
    Ok(())
}

/// `max |h(u) - h(v)| / d(u,v)` over all pairs.
pub fn lip_constant(space: &FiniteMetricSpace, h: &LipFunction) -> Result<Rational> {
    check_len(space, h)?;
    let v = h.values();
    let mut best = Rational::zero();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let r = (&v[i] - &v[j]).abs() / space.distance(i, j);
            if r > best {
                best = r;
            }
        }
    }
    Ok(best)
}

/// `Σ_v h(v) f(v)`
pub fn pairing(h: &LipFunction, f: &TransportationProblem) -> Result<Rational> {
    if let Some(index) = f.support().find(|&i| i >= h.len()) {
        return Err(Error::SizeMismatch {
            expected: h.len(),
            found: index + 1,
        });
    }
    Ok(f.iter().map(|(i, v)| &h.values()[i] * v).sum())
}

/// Maximizes `pairing(h, f)` over 1-Lipschitz `h` with `h(base) = 0`.
///
/// The constraint `|h(u) - h(v)| <= d(u,v)` is imposed on every pair. The
/// returned value is the LP optimum; it equals the transportation cost norm
/// by strong duality, which callers can check independently.
pub fn dual_optimal(
    space: &FiniteMetricSpace,
    f: &TransportationProblem,
    base: usize,
) -> Result<(LipFunction, Rational)> {
    check_support(space, f)?;
    space.check_index(base)?;
    let n = space.len();
    // variable k stands for h(point) with point = k, skipping base
    let points: Vec<usize> = (0..n).filter(|&v| v != base).collect();
    let column = |v: usize| -> Option<usize> { points.iter().position(|&p| p == v) };

    let objective = points.iter().map(|&v| -f.get(v)).collect();
    let mut lp = LinearProgram::minimize(objective);
    for c in 0..points.len() {
        lp.set_free(c)?;
    }
    let one = Rational::from_integer(1.into());
    for u in 0..n {
        for v in u + 1..n {
            for sign in [false, true] {
                // h(u) - h(v) <= d  (or its negation)
                let mut row = vec![Rational::zero(); points.len()];
                if let Some(c) = column(u) {
                    row[c] = if sign { -one.clone() } else { one.clone() };
                }
                if let Some(c) = column(v) {
                    row[c] = if sign { one.clone() } else { -one.clone() };
                }
                lp.add_constraint(row, Relation::Le, space.distance(u, v).clone())?;
            }
        }
    }
    let sol = simplex_solve(&lp)?;
    let mut values = vec![Rational::zero(); n];
    for (c, &v) in points.iter().enumerate() {
        values[v] = sol.x[c].clone();
    }
    let h = LipFunction::new(values, base)?;
    let value = pairing(&h, f)?;
    debug_assert_eq!(value, -sol.value);
    Ok((h, value))
}

/// `Dᵀ h`: edge `(i, j)` gets `h(j) - h(i)`. Its weighted sup norm is the
/// Lipschitz constant of `h`.
pub fn gradient_field(space: &FiniteMetricSpace, h: &LipFunction) -> Result<EdgeVector> {
    check_len(space, h)?;
    Ok(coboundary(h.values()))
}
