//! Probability that the two-item secretary rule packs a given item first,
//! or a given pair in a given order.
//!
//! Items are identified by profit rank (1 = most profitable). With `cn`
//! observation rounds and the selection window ending at `dn`:
//!
//! ```text
//! p_i  = c/(n-1) · Σ_{k=cn+1}^{dn} C(n-i, k-1) / C(n-2, k-2)
//! p_ij = c/((n-1)(n-2)) · Σ_{l=cn+2}^{dn} (l-cn-1) · C(n-j, l-2) / C(n-3, l-3)
//! ```
//!
//! where `c = cn/n` and `p_ij` (first `i`, then `j`) depends only on the
//! worse-ranked item `j`; the second sum is the double sum over the two
//! acceptance rounds `k < l` with the inner count collapsed. Exact values
//! use big-integer binomials; above [`EXACT_MAX_N`] the float evaluators
//! switch to log-gamma.

use num_bigint::BigInt;
use num_traits::Zero;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

/// Largest `n` evaluated with exact rationals.
pub const EXACT_MAX_N: usize = 500;

fn check(n: usize, cn: usize, dn: usize) -> Result<()> {
    if cn < 1 || cn > dn || dn > n {
        return Err(Error::param(format!(
            "need 1 <= cn <= dn <= n, got n = {n}, cn = {cn}, dn = {dn}"
        )));
    }
    Ok(())
}

fn check_rank(n: usize, rank: usize, min: usize) -> Result<()> {
    if rank < min || rank > n {
        return Err(Error::param(format!("rank {rank} outside {min}..={n}")));
    }
    Ok(())
}

/// `C(top, 0..=top)`.
fn binomial_row(top: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(top + 1);
    let mut v = BigInt::from(1);
    row.push(v.clone());
    for b in 0..top {
        v = v * (top - b) / (b + 1);
        row.push(v.clone());
    }
    row
}

fn binom(row: &[BigInt], b: usize) -> BigInt {
    row.get(b).cloned().unwrap_or_else(BigInt::zero)
}

fn exact_cap(n: usize) -> Result<()> {
    if n > EXACT_MAX_N {
        return Err(Error::capability(format!(
            "exact evaluation is limited to n <= {EXACT_MAX_N}; use the float evaluator"
        )));
    }
    Ok(())
}

/// Exact probability that the item of rank `i` is packed first.
pub fn p_first_exact(n: usize, cn: usize, dn: usize, i: usize) -> Result<Rational> {
    check(n, cn, dn)?;
    check_rank(n, i, 1)?;
    exact_cap(n)?;
    if dn == cn {
        return Ok(Rational::zero());
    }
    let top = binomial_row(n - i);
    let bottom = binomial_row(n - 2);
    let mut sum = Rational::zero();
    for k in cn + 1..=dn {
        let num = binom(&top, k - 1);
        if !num.is_zero() {
            sum += Rational::new(num, binom(&bottom, k - 2));
        }
    }
    Ok(sum * Rational::new(cn.into(), (n * (n - 1)).into()))
}

/// Exact probability that some better item is packed first and the item of
/// rank `j` second (the same for every first item of better rank).
pub fn p_pair_exact(n: usize, cn: usize, dn: usize, j: usize) -> Result<Rational> {
    check(n, cn, dn)?;
    check_rank(n, j, 2)?;
    exact_cap(n)?;
    if dn < cn + 2 {
        return Ok(Rational::zero());
    }
    let top = binomial_row(n - j);
    let bottom = binomial_row(n - 3);
    let mut sum = Rational::zero();
    for l in cn + 2..=dn {
        let num = binom(&top, l - 2);
        if !num.is_zero() {
            sum += Rational::new(num * (l - cn - 1), binom(&bottom, l - 3));
        }
    }
    Ok(sum * Rational::new(cn.into(), (n * (n - 1) * (n - 2)).into()))
}

/// Exact probability that rank `i` is packed first and rank `j` second,
/// for any `i != j`. Swapping the two in every arrival order shows the
/// probability is symmetric, so it equals [`p_pair_exact`] at `max(i, j)`.
pub fn p_ordered_pair_exact(n: usize, cn: usize, dn: usize, i: usize, j: usize) -> Result<Rational> {
    if i == j {
        return Err(Error::param("a pair needs two distinct ranks"));
    }
    check_rank(n, i.min(j), 1)?;
    p_pair_exact(n, cn, dn, i.max(j))
}

fn ln_binom(a: usize, b: usize) -> Option<f64> {
    (b <= a).then(|| {
        ln_gamma(a as f64 + 1.0) - ln_gamma(b as f64 + 1.0) - ln_gamma((a - b) as f64 + 1.0)
    })
}

/// [`p_first_exact`] as a float; log-gamma evaluation above
/// [`EXACT_MAX_N`] (relative error around 1e-12).
pub fn p_first(n: usize, cn: usize, dn: usize, i: usize) -> Result<f64> {
    if n <= EXACT_MAX_N {
        return p_first_exact(n, cn, dn, i).map(|v| to_f64(&v));
    }
    check(n, cn, dn)?;
    check_rank(n, i, 1)?;
    let sum: f64 = (cn + 1..=dn)
        .filter_map(|k| Some((ln_binom(n - i, k - 1)? - ln_binom(n - 2, k - 2)?).exp()))
        .sum();
    Ok(sum * cn as f64 / (n as f64 * (n - 1) as f64))
}

/// [`p_pair_exact`] as a float; log-gamma evaluation above [`EXACT_MAX_N`].
pub fn p_pair(n: usize, cn: usize, dn: usize, j: usize) -> Result<f64> {
    if n <= EXACT_MAX_N {
        return p_pair_exact(n, cn, dn, j).map(|v| to_f64(&v));
    }
    check(n, cn, dn)?;
    check_rank(n, j, 2)?;
    let sum: f64 = (cn + 2..=dn)
        .filter_map(|l| {
            let t = (ln_binom(n - j, l - 2)? - ln_binom(n - 3, l - 3)?).exp();
            Some(t * (l - cn - 1) as f64)
        })
        .sum();
    Ok(sum * cn as f64 / (n as f64 * (n - 1) as f64 * (n - 2) as f64))
}
