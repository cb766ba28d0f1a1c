//! Exact rational simplex for packing programs
//! `max c.y  s.t.  A y <= b, y >= 0` with `b >= 0`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub value: Rational,
    /// Optimal primal point.
    pub primal: Vec<Rational>,
    /// Optimal multipliers of the constraints, read off the slack columns.
    pub dual: Vec<Rational>,
}

/// Bland's rule keeps the method finite under degeneracy.
pub(crate) fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<LpSolution> {
    let rows = a.len();
    let vars = c.len();
    if b.len() != rows || a.iter().any(|r| r.len() != vars) {
        return Err(Error::Precondition("inconsistent LP dimensions".into()));
    }
    if b.iter().any(|x| x.is_negative()) {
        return Err(Error::Precondition("LP right-hand side must be nonnegative".into()));
    }
    let cols = vars + rows;
    let mut tab: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row = Vec::with_capacity(cols + 1);
            row.extend(a[i].iter().cloned());
            row.extend((0..rows).map(|k| {
                if k == i {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            }));
            row.push(b[i].clone());
            row
        })
        .collect();
    // reduced costs, last entry is minus the objective value
    let mut z: Vec<Rational> = c.iter().cloned().chain((0..=rows).map(|_| Rational::zero())).collect();
    let mut basis: Vec<usize> = (vars..cols).collect();

    while let Some(enter) = (0..cols).find(|&j| z[j].is_positive()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][cols] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return Err(Error::Precondition("LP is unbounded".into()));
        };
        let piv = tab[pr][enter].clone();
        for x in tab[pr].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = tab[pr].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        let f = z[enter].clone();
        for (x, p) in z.iter_mut().zip(&pivot_row) {
            *x -= &f * p;
        }
        basis[pr] = enter;
    }

    let mut primal = vec![Rational::zero(); vars];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < vars {
            primal[bj] = tab[i][cols].clone();
        }
    }
    let dual = (0..rows).map(|i| -z[vars + i].clone()).collect();
    Ok(LpSolution {
        value: -z[cols].clone(),
        primal,
        dual,
    })
}
