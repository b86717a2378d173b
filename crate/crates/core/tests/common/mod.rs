//! Independent brute-force oracles and random instance generators shared by
//! the integration tests and the acceptance suite.

#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ropack::instance::{GapInstance, GapOption, KnapsackInstance, KnapsackItem};
use ropack::oracles::simplex::LinearProgram;
use ropack::rational::int;
use ropack::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Best profit over all `2^n` subsets that fit.
pub fn subset_enumeration(instance: &KnapsackInstance) -> Rational {
    let items = instance.items();
    let mut best = Rational::zero();
    for mask in 0u64..(1 << items.len()) {
        let mut size = Rational::zero();
        let mut profit = Rational::zero();
        for (k, item) in items.iter().enumerate() {
            if mask >> k & 1 == 1 {
                size += &item.size;
                profit += &item.profit;
            }
        }
        if &size <= instance.capacity() && profit > best {
            best = profit;
        }
    }
    best
}

/// Best total weight over all partial injections rows -> columns.
pub fn injection_enumeration(weights: &[Vec<Rational>]) -> Rational {
    fn go(row: usize, used: &mut Vec<bool>, weights: &[Vec<Rational>]) -> Rational {
        if row == weights.len() {
            return Rational::zero();
        }
        let mut best = go(row + 1, used, weights);
        for col in 0..used.len() {
            if !used[col] {
                used[col] = true;
                let v = &weights[row][col] + go(row + 1, used, weights);
                used[col] = false;
                if v > best {
                    best = v;
                }
            }
        }
        best
    }
    let cols = weights.first().map_or(0, Vec::len);
    go(0, &mut vec![false; cols], weights)
}

/// Best profit over all `(m+1)^n` assignments that respect capacities.
pub fn assignment_enumeration(instance: &GapInstance) -> Rational {
    let (n, m) = (instance.n(), instance.m());
    let mut choice = vec![0usize; n];
    let mut best = Rational::zero();
    loop {
        let mut load = vec![Rational::zero(); m];
        let mut profit = Rational::zero();
        for (i, &c) in choice.iter().enumerate() {
            if c > 0 {
                let opt = instance.option(i, c - 1);
                load[c - 1] += &opt.size;
                profit += &opt.profit;
            }
        }
        if load.iter().zip(instance.capacities()).all(|(l, w)| l <= w) && profit > best {
            best = profit;
        }
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            choice[k] += 1;
            if choice[k] <= m {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Solves the square system `a x = b` by Gauss-Jordan elimination, `None`
/// if singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = b.len();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for j in 0..k {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..k {
                    let delta = &f * &a[col][j];
                    a[r][j] -= delta;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

/// Optimum of `max c x, A x <= b, x >= 0` (with `b >= 0`) by enumerating
/// every basic solution of the slack form and keeping the best feasible
/// one.
pub fn vertex_enumeration(lp: &LinearProgram) -> Rational {
    let n = lp.num_vars();
    let m = lp.rows.len();
    // Columns 0..n structural, n..n+m slacks.
    let column = |j: usize, r: usize| -> Rational {
        if j < n {
            lp.rows[r][j].clone()
        } else if j - n == r {
            Rational::one()
        } else {
            Rational::zero()
        }
    };
    let mut best = Rational::zero();
    let mut basis: Vec<usize> = (0..m).collect();
    let total = n + m;
    loop {
        let a: Vec<Vec<Rational>> = (0..m)
            .map(|r| basis.iter().map(|&j| column(j, r)).collect())
            .collect();
        if let Some(xb) = solve_square(a, lp.rhs.clone()) {
            if xb.iter().all(|v| !v.is_negative()) {
                let mut x = vec![Rational::zero(); n];
                for (&j, v) in basis.iter().zip(&xb) {
                    if j < n {
                        x[j] = v.clone();
                    }
                }
                let value = lp.evaluate(&x);
                if value > best {
                    best = value;
                }
            }
        }
        // Next m-combination of 0..total in lexicographic order.
        let mut k = m;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if basis[k] < total - (m - k) {
                basis[k] += 1;
                for t in k + 1..m {
                    basis[t] = basis[t - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn random_knapsack(rng: &mut ChaCha8Rng, n: usize) -> KnapsackInstance {
    let cap: i64 = rng.random_range(5..=60);
    let items = (0..n)
        .map(|k| {
            let size = rng.random_range(1..=cap);
            let profit = rng.random_range(0..=40);
            KnapsackItem::new(k as u32, int(size), int(profit))
        })
        .collect();
    KnapsackInstance::new(int(cap), items).unwrap()
}

pub fn random_gap(rng: &mut ChaCha8Rng, n: usize, m: usize) -> GapInstance {
    let caps: Vec<i64> = (0..m).map(|_| rng.random_range(4..=30)).collect();
    let items = (0..n)
        .map(|_| {
            caps.iter()
                .map(|&w| GapOption::new(int(rng.random_range(0..=25)), int(rng.random_range(1..=w))))
                .collect()
        })
        .collect();
    GapInstance::new(caps.into_iter().map(int).collect(), items).unwrap()
}

/// Random LP with non-negative right-hand sides; coefficients in
/// `[-3, 6]`, one all-positive row so the feasible region is bounded.
pub fn random_lp(rng: &mut ChaCha8Rng, vars: usize, rows: usize) -> LinearProgram {
    let mut matrix: Vec<Vec<Rational>> = (0..rows)
        .map(|_| (0..vars).map(|_| int(rng.random_range(-3..=6))).collect())
        .collect();
    matrix.push((0..vars).map(|_| int(rng.random_range(1..=5))).collect());
    let rhs = (0..=rows).map(|_| int(rng.random_range(0..=20))).collect();
    let objective = (0..vars).map(|_| int(rng.random_range(-2..=9))).collect();
    LinearProgram {
        objective,
        rows: matrix,
        rhs,
    }
}

pub fn random_weights(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| int(rng.random_range(0..=30))).collect())
        .collect()
}
