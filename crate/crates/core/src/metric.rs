//! Finite metric spaces with exact rational distances.
//!
//! A [`FiniteMetricSpace`] can only be built through validating
//! constructors, so every space in circulation satisfies the metric axioms.
//!
//! Text format: the point count `n`, then the strict upper triangle of the
//! distance matrix row by row (`n-1` tokens, then `n-2`, ... then 1). Tokens
//! are whitespace separated rationals `p/q` or integers `p`. `#` starts a
//! comment; a comment of the form `# labels a b c` names the points.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Axiom, Error, Result};
use crate::solvers::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    n: usize,
    d: Vec<Rational>,
    labels: Option<Vec<String>>,
}

impl FiniteMetricSpace {
    /// Validates a full `n × n` matrix.
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        let space = FiniteMetricSpace {
            n,
            d: matrix.into_iter().flatten().collect(),
            labels: None,
        };
        space.validate()?;
        Ok(space)
    }

    /// Builds a space from its strict upper triangle, row-major.
    pub fn from_upper_triangle(n: usize, entries: &[Rational]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: entries.len(),
            });
        }
        let mut d = vec![Rational::zero(); n * n];
        let mut it = entries.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().expect("length checked").clone();
                d[i * n + j] = v.clone();
                d[j * n + i] = v;
            }
        }
        let space = FiniteMetricSpace { n, d, labels: None };
        space.validate()?;
        Ok(space)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        let not_a_metric = |axiom, indices: Vec<usize>| Err(Error::NotAMetric { axiom, indices });
        for u in 0..n {
            if !self.distance(u, u).is_zero() {
                return not_a_metric(Axiom::ZeroDiagonal, vec![u]);
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                if self.distance(u, v) != self.distance(v, u) {
                    return not_a_metric(Axiom::Symmetry, vec![u, v]);
                }
                if !self.distance(u, v).is_positive() {
                    return not_a_metric(Axiom::Positivity, vec![u, v]);
                }
            }
        }
        for u in 0..n {
            for w in u + 1..n {
                let direct = self.distance(u, w);
                for v in (0..n).filter(|&v| v != u && v != w) {
                    if *direct > self.distance(u, v) + self.distance(v, w) {
                        return not_a_metric(Axiom::Triangle, vec![u, v, w]);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Panics if either index is out of range.
    pub fn distance(&self, u: usize, v: usize) -> &Rational {
        assert!(u < self.n && v < self.n, "point index out of range");
        &self.d[u * self.n + v]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, n: self.n })
        }
    }

    /// Serializes in the text format read by [`parse_metric`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(labels) = &self.labels {
            out.push_str("# labels ");
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        out.push_str(&self.n.to_string());
        out.push('\n');
        for i in 0..self.n {
            if i + 1 >= self.n {
                break;
            }
            let row: Vec<String> = (i + 1..self.n)
                .map(|j| self.distance(i, j).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn parse_metric(text: &str) -> Result<FiniteMetricSpace> {
    let mut labels = None;
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let (content, comment) = match line.split_once('#') {
            Some((c, rest)) => (c, Some(rest)),
            None => (line, None),
        };
        if let Some(rest) = comment.and_then(|c| c.trim().strip_prefix("labels")) {
            labels = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
        }
        tokens.extend(content.split_whitespace().map(|t| (lineno + 1, t)));
    }
    let mut it = tokens.into_iter();
    let (line, first) = it.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing point count".into(),
    })?;
    let n: usize = first
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse {
            line,
            msg: format!("invalid point count {first:?}"),
        })?;
    let expected = n * (n - 1) / 2;
    let mut entries = Vec::with_capacity(expected);
    let mut last_line = line;
    for (line, tok) in it {
        last_line = line;
        if entries.len() == expected {
            return Err(Error::Parse {
                line,
                msg: format!("extra token {tok:?} after {expected} distances"),
            });
        }
        let value = parse_rational(tok).ok_or_else(|| Error::Parse {
            line,
            msg: format!("malformed rational {tok:?}"),
        })?;
        entries.push(value);
    }
    if entries.len() != expected {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("expected {expected} distances, found {}", entries.len()),
        });
    }
    let space = FiniteMetricSpace::from_upper_triangle(n, &entries)?;
    match labels {
        Some(l) => space.with_labels(l),
        None => Ok(space),
    }
}

/// The five infinite example metrics on `{v_1, v_2, ...}`, each given by a
/// formula for `ρ(v_k, v_n)` with `k < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricFamily {
    /// `k + n - 1/k`
    A,
    /// `2 - 1/k + 1/n`
    B,
    /// `2 - 1/k - 1/(2n)`
    C,
    /// `1 + 1/n`
    D,
    /// `1 + 1/(2k) + 1/n`
    E,
}

impl MetricFamily {
    pub const ALL: [MetricFamily; 5] = [
        MetricFamily::A,
        MetricFamily::B,
        MetricFamily::C,
        MetricFamily::D,
        MetricFamily::E,
    ];

    /// `ρ(v_i, v_j)` for 1-based indices. Zero when `i == j`.
    pub fn distance(self, i: usize, j: usize) -> Rational {
        assert!(i >= 1 && j >= 1, "family indices are 1-based");
        if i == j {
            return Rational::zero();
        }
        let (k, n) = if i < j { (i, j) } else { (j, i) };
        let k = Rational::from_integer((k as i64).into());
        let n = Rational::from_integer((n as i64).into());
        let one = Rational::from_integer(1.into());
        let two = Rational::from_integer(2.into());
        match self {
            MetricFamily::A => &k + &n - one / &k,
            MetricFamily::B => two - one.clone() / &k + one / &n,
            MetricFamily::C => two.clone() - one.clone() / &k - one / (two * &n),
            MetricFamily::D => one.clone() + one / &n,
            MetricFamily::E => one.clone() + one.clone() / (two * &k) + one / &n,
        }
    }
}

impl fmt::Display for MetricFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            MetricFamily::A => "a",
            MetricFamily::B => "b",
            MetricFamily::C => "c",
            MetricFamily::D => "d",
            MetricFamily::E => "e",
        };
        f.write_str(tag)
    }
}

impl FromStr for MetricFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(MetricFamily::A),
            "b" => Ok(MetricFamily::B),
            "c" => Ok(MetricFamily::C),
            "d" => Ok(MetricFamily::D),
            "e" => Ok(MetricFamily::E),
            _ => Err(Error::Parse {
                line: 0,
                msg: format!("unknown metric family {s:?}"),
            }),
        }
    }
}

/// The first `n` points `v_1 .. v_n` of a family, as points `0 .. n-1`
/// labelled `v1 .. vn`.
pub fn family_metric(fam: MetricFamily, n: usize) -> Result<FiniteMetricSpace> {
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let matrix = (1..=n)
        .map(|i| (1..=n).map(|j| fam.distance(i, j)).collect())
        .collect();
    FiniteMetricSpace::new(matrix)?.with_labels((1..=n).map(|i| format!("v{i}")).collect())
}

/// Restriction of `space` to `indices`, in the given order.
pub fn induced_subspace(space: &FiniteMetricSpace, indices: &[usize]) -> Result<FiniteMetricSpace> {
    let mut seen = vec![false; space.len()];
    for &i in indices {
        space.check_index(i)?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    let k = indices.len();
    let mut d = Vec::with_capacity(k * k);
    for &i in indices {
        for &j in indices {
            d.push(space.distance(i, j).clone());
        }
    }
    let labels = space
        .labels()
        .map(|l| indices.iter().map(|&i| l[i].clone()).collect());
    Ok(FiniteMetricSpace { n: k, d, labels })
}

/// Minimum and maximum distance between distinct points.
pub fn extremes(space: &FiniteMetricSpace) -> Result<(Rational, Rational)> {
    let n = space.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let mut min = space.distance(0, 1);
    let mut max = min;
    for u in 0..n {
        for v in u + 1..n {
            let d = space.distance(u, v);
            if d < min {
                min = d;
            }
            if d > max {
                max = d;
            }
        }
    }
    Ok((min.clone(), max.clone()))
}
