//! Dense tableau simplex over exact rationals.
//!
//! Solves `max c·x` subject to `A x <= b`, `x >= 0` with `b >= 0`, so the
//! origin is a feasible starting vertex. Bland's rule picks both the
//! entering and leaving variable, which rules out cycling without any
//! tolerance.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub value: Rational,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// True if `x` satisfies every constraint exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().zip(&self.rhs).all(|(row, b)| {
                let lhs: Rational = row.iter().zip(x).map(|(a, v)| a * v).sum();
                &lhs <= b
            })
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

pub fn maximize(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.num_vars();
    let m = lp.rows.len();
    if lp.rhs.len() != m || lp.rows.iter().any(|r| r.len() != n) {
        return Err(Error::param("constraint matrix dimensions do not match"));
    }
    if lp.rhs.iter().any(|b| b.is_negative()) {
        return Err(Error::param("right-hand sides must be non-negative"));
    }

    // Columns 0..n are structural, n..n+m slacks.
    let width = n + m;
    let mut table: Vec<Vec<Rational>> = lp
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut full = row.clone();
            full.resize(width, Rational::zero());
            full[n + i] = Rational::from_integer(1.into());
            full
        })
        .collect();
    let mut rhs = lp.rhs.clone();
    let mut basis: Vec<usize> = (n..width).collect();
    // Reduced costs c_j - c_B B^-1 A_j.
    let mut reduced: Vec<Rational> = lp.objective.clone();
    reduced.resize(width, Rational::zero());
    let mut value = Rational::zero();

    while let Some(enter) = reduced.iter().position(|r| r.is_positive()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            let a = &table[i][enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &rhs[i] / a;
            let better = match &leave {
                None => true,
                Some((row, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*row]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::Contract("linear program is unbounded".into()));
        };

        let pivot = table[row][enter].clone();
        for v in table[row].iter_mut() {
            *v /= &pivot;
        }
        rhs[row] /= &pivot;
        let pivot_row = table[row].clone();
        let pivot_rhs = rhs[row].clone();
        for i in 0..m {
            if i == row || table[i][enter].is_zero() {
                continue;
            }
            let factor = table[i][enter].clone();
            for (v, p) in table[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            rhs[i] -= &factor * &pivot_rhs;
        }
        let factor = reduced[enter].clone();
        for (v, p) in reduced.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
        value += &factor * &pivot_rhs;
        basis[row] = enter;
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = rhs[i].clone();
        }
    }
    Ok(LpSolution { x, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn lp(c: &[i64], a: &[&[i64]], b: &[i64]) -> LinearProgram {
        LinearProgram {
            objective: c.iter().map(|&v| int(v)).collect(),
            rows: a.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect(),
            rhs: b.iter().map(|&v| int(v)).collect(),
        }
    }

    #[test]
    fn textbook_example() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let p = lp(&[3, 5], &[&[1, 0], &[0, 2], &[3, 2]], &[4, 12, 18]);
        let sol = maximize(&p).unwrap();
        assert_eq!(sol.x, vec![int(2), int(6)]);
        assert_eq!(sol.value, int(36));
        assert!(p.is_feasible(&sol.x));
    }

    #[test]
    fn fractional_vertex() {
        // max x + y, 2x + y <= 2, x + 2y <= 2 -> (2/3, 2/3)
        let p = lp(&[1, 1], &[&[2, 1], &[1, 2]], &[2, 2]);
        let sol = maximize(&p).unwrap();
        assert_eq!(sol.x, vec![ratio(2, 3), ratio(2, 3)]);
        assert_eq!(sol.value, ratio(4, 3));
    }

    #[test]
    fn degenerate_start_terminates() {
        let p = lp(&[1, 1, 1], &[&[1, -1, 0], &[0, 1, -1], &[1, 1, 1]], &[0, 0, 3]);
        let sol = maximize(&p).unwrap();
        assert_eq!(sol.value, int(3));
        assert!(p.is_feasible(&sol.x));
    }

    #[test]
    fn unbounded_and_bad_rhs() {
        assert!(maximize(&lp(&[1], &[&[-1]], &[1])).is_err());
        assert!(maximize(&lp(&[1], &[&[1]], &[-1])).is_err());
    }
}
