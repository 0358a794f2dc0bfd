use num_traits::Zero;

use super::rational::Rational;
use crate::error::{Error, Result};

/// Exact minimizer of `|A x - target|` via the normal equations
/// `AᵀA x = Aᵀ target`, solved by Gauss-Jordan elimination.
///
/// `rows` are the rows of `A`. When `A` is rank-deficient the free
/// variables are set to zero, which still yields a minimizer.
pub fn least_squares_exact(rows: &[Vec<Rational>], target: &[Rational]) -> Result<Vec<Rational>> {
    if rows.len() != target.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            found: target.len(),
        });
    }
    let k = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: bad.len(),
        });
    }

    // Augmented normal system [AᵀA | Aᵀt].
    let mut m = vec![vec![Rational::zero(); k + 1]; k];
    for (row, t) in rows.iter().zip(target) {
        for i in 0..k {
            if row[i].is_zero() {
                continue;
            }
            for j in 0..k {
                if !row[j].is_zero() {
                    m[i][j] += &row[i] * &row[j];
                }
            }
            m[i][k] += &row[i] * t;
        }
    }

    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..k).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let lead = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v /= &lead;
        }
        for i in 0..k {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=k {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }

    let mut x = vec![Rational::zero(); k];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][k].clone();
    }
    Ok(x)
}
