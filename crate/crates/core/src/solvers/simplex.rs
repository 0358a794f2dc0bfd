//! Two-phase dense tableau simplex over exact rationals.
//!
//! Pivoting follows Bland's rule: the entering column is the lowest-index
//! column with a negative reduced cost, and ratio-test ties go to the row
//! whose basic variable has the lowest index. With exact arithmetic this
//! terminates on every input and the returned vertex is deterministic.

use num_traits::{Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Bounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

/// `minimize objective · x` subject to linear constraints and per-variable
/// bounds. Variables start out nonnegative; use [`LinearProgram::set_free`]
/// or [`LinearProgram::set_bounds`] to change that.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    bounds: Vec<Bounds>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
}

impl LinearProgram {
    pub fn minimize(objective: Vec<Rational>) -> Self {
        let bounds = (0..objective.len())
            .map(|_| Bounds {
                lower: Some(Rational::zero()),
                upper: None,
            })
            .collect();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            bounds,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                found: coeffs.len(),
            });
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    pub fn set_bounds(
        &mut self,
        var: usize,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> Result<()> {
        let n = self.num_vars();
        let slot = self
            .bounds
            .get_mut(var)
            .ok_or(Error::IndexOutOfRange { index: var, n })?;
        *slot = Bounds { lower, upper };
        Ok(())
    }

    pub fn set_free(&mut self, var: usize) -> Result<()> {
        self.set_bounds(var, None, None)
    }
}

/// How an original variable is expressed through nonnegative columns.
struct Substitution {
    offset: Rational,
    columns: Vec<(usize, bool)>, // (column, negated)
}

pub fn simplex_solve(lp: &LinearProgram) -> Result<LpSolution> {
    let mut subs = Vec::with_capacity(lp.num_vars());
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new(); // y_col <= value
    for b in &lp.bounds {
        let sub = match (&b.lower, &b.upper) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    if u < l {
                        return Err(Error::Infeasible);
                    }
                    bound_rows.push((ncols, u - l));
                }
                Substitution {
                    offset: l.clone(),
                    columns: vec![(ncols, false)],
                }
            }
            (None, Some(u)) => Substitution {
                offset: u.clone(),
                columns: vec![(ncols, true)],
            },
            (None, None) => {
                ncols += 1;
                Substitution {
                    offset: Rational::zero(),
                    columns: vec![(ncols - 1, false), (ncols, true)],
                }
            }
        };
        ncols += 1;
        subs.push(sub);
    }

    // Rows over the substituted columns.
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![Rational::zero(); ncols];
        let mut rhs = c.rhs.clone();
        for (a, sub) in c.coeffs.iter().zip(&subs) {
            if a.is_zero() {
                continue;
            }
            rhs -= a * &sub.offset;
            for &(col, neg) in &sub.columns {
                if neg {
                    row[col] -= a;
                } else {
                    row[col] += a;
                }
            }
        }
        rows.push((row, c.relation, rhs));
    }
    for (col, cap) in bound_rows {
        let mut row = vec![Rational::zero(); ncols];
        row[col] = Rational::from_integer(1.into());
        rows.push((row, Relation::Le, cap));
    }

    let mut cost = vec![Rational::zero(); ncols];
    for (c, sub) in lp.objective.iter().zip(&subs) {
        for &(col, neg) in &sub.columns {
            if neg {
                cost[col] -= c;
            } else {
                cost[col] += c;
            }
        }
    }

    let y = solve_standard(ncols, rows, &cost)?;

    let x: Vec<Rational> = subs
        .iter()
        .map(|sub| {
            let mut v = sub.offset.clone();
            for &(col, neg) in &sub.columns {
                if neg {
                    v -= &y[col];
                } else {
                    v += &y[col];
                }
            }
            v
        })
        .collect();
    let value = lp
        .objective
        .iter()
        .zip(&x)
        .fold(Rational::zero(), |acc, (c, v)| acc + c * v);
    Ok(LpSolution { value, x })
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    obj: Vec<Rational>,
    obj_value: Rational, // negated objective value, as carried by the tableau
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        if p != Rational::from_integer(1.into()) {
            for v in self.a[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.b[r] /= &p;
        }
        let prow = self.a[r].clone();
        let pb = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (v, pv) in self.a[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.b[i] -= &f * &pb;
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.obj_value -= &f * &pb;
        }
        self.basis[r] = c;
    }

    fn load_objective(&mut self, cost: &[Rational]) {
        self.obj = cost.to_vec();
        self.obj_value = Rational::zero();
        for (i, &bc) in self.basis.iter().enumerate() {
            let f = self.obj[bc].clone();
            if f.is_zero() {
                continue;
            }
            for (v, av) in self.obj.iter_mut().zip(&self.a[i]) {
                if !av.is_zero() {
                    *v -= &f * av;
                }
            }
            self.obj_value -= &f * &self.b[i];
        }
    }

    /// Bland's-rule iterations over columns `< allowed`.
    fn optimize(&mut self, allowed: usize) -> Result<()> {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                let aij = &self.a[i][enter];
                if !aij.is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / aij;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Err(Error::Unbounded),
            }
        }
    }
}

/// Minimizes `cost · y` over `y >= 0` satisfying `rows`.
fn solve_standard(
    ncols: usize,
    rows: Vec<(Vec<Rational>, Relation, Rational)>,
    cost: &[Rational],
) -> Result<Vec<Rational>> {
    let one = Rational::from_integer(1.into());
    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let mut normalized = Vec::with_capacity(m);
    for (mut row, mut rel, mut rhs) in rows {
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        normalized.push((row, rel, rhs));
    }
    let n_art = normalized.iter().filter(|r| r.1 != Relation::Le).count();
    let total = ncols + n_slack + n_art;
    let art_start = ncols + n_slack;

    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = ncols;
    let mut art = art_start;
    for (row, rel, rhs) in normalized {
        let mut full = row;
        full.resize(total, Rational::zero());
        match rel {
            Relation::Le => {
                full[slack] = one.clone();
                basis.push(slack);
                slack += 1;
            }
            Relation::Ge => {
                full[slack] = -one.clone();
                slack += 1;
                full[art] = one.clone();
                basis.push(art);
                art += 1;
            }
            Relation::Eq => {
                full[art] = one.clone();
                basis.push(art);
                art += 1;
            }
        }
        a.push(full);
        b.push(rhs);
    }

    let mut t = Tableau {
        a,
        b,
        basis,
        obj: Vec::new(),
        obj_value: Rational::zero(),
    };

    if n_art > 0 {
        let mut phase1 = vec![Rational::zero(); total];
        for v in &mut phase1[art_start..] {
            *v = one.clone();
        }
        t.load_objective(&phase1);
        t.optimize(total)?;
        if !t.obj_value.is_zero() {
            return Err(Error::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.a.len() {
            if t.basis[i] >= art_start {
                match (0..art_start).find(|&k| !t.a[i][k].is_zero()) {
                    Some(k) => t.pivot(i, k),
                    None => {
                        t.a.remove(i);
                        t.b.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut phase2 = cost.to_vec();
    phase2.resize(total, Rational::zero());
    t.load_objective(&phase2);
    t.optimize(art_start)?;

    let mut y = vec![Rational::zero(); ncols];
    for (i, &bc) in t.basis.iter().enumerate() {
        if bc < ncols {
            y[bc] = t.b[i].clone();
        }
    }
    Ok(y)
}
