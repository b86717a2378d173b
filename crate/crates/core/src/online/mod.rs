//! The online algorithms.
//!
//! A run walks one arrival order round by round. Rounds are 1-based; round
//! `l` sees the item `perm.order[l - 1]`. Phase boundaries are
//! `cn = ⌊c·n⌋` and `dn = ⌊d·n⌋`: the first `cn` rounds are observation
//! only, rounds `cn+1..=dn` belong to the large-item rule and rounds after
//! `dn` to the small-item rule.

mod fenwick;
mod gap;
mod knapsack;
mod trace;

pub use gap::{run_lp_as, run_matching_al, run_sequential_gap, GapRunner};
pub use knapsack::{run_al, run_as, run_sequential, KnapsackRunner};
pub use trace::{AssignmentTrace, Decision, GapDecision, RunTrace};

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{serde_ratio, Rational};
use crate::split::check_delta;

fn floor_times(x: &Rational, n: usize) -> usize {
    (x * Rational::from_integer(n.into()))
        .floor()
        .to_integer()
        .to_usize()
        .expect("fraction of n fits usize")
}

/// Parameters of the sequential algorithm for a fixed `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeqParams {
    #[serde(with = "serde_ratio")]
    c: Rational,
    #[serde(with = "serde_ratio")]
    d: Rational,
    #[serde(with = "serde_ratio")]
    delta: Rational,
    n: usize,
    cn: usize,
    dn: usize,
}

impl SeqParams {
    /// Requires `0 < c < d <= 1`, `0 < delta < 1` and
    /// `1 <= ⌊c·n⌋ < ⌊d·n⌋`.
    pub fn new(c: Rational, d: Rational, delta: Rational, n: usize) -> Result<Self> {
        if c <= Rational::zero() || c >= Rational::one() {
            return Err(Error::param(format!("c must lie in (0,1), got {c}")));
        }
        if d <= c || d > Rational::one() {
            return Err(Error::param(format!("d must lie in (c,1], got c = {c}, d = {d}")));
        }
        check_delta(&delta)?;
        let cn = floor_times(&c, n);
        let dn = floor_times(&d, n);
        if cn == 0 {
            return Err(Error::param(format!(
                "c·n = {c}·{n} leaves no sampling round; increase n or c"
            )));
        }
        if cn >= dn {
            return Err(Error::param(format!(
                "⌊c·n⌋ = {cn} must be below ⌊d·n⌋ = {dn}"
            )));
        }
        Ok(SeqParams {
            c,
            d,
            delta,
            n,
            cn,
            dn,
        })
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cn(&self) -> usize {
        self.cn
    }

    pub fn dn(&self) -> usize {
        self.dn
    }

    pub fn small_phase(&self) -> SmallPhase {
        SmallPhase {
            dn: self.dn,
            delta: self.delta.clone(),
        }
    }
}

/// What the small-item rule needs: where its observation phase ends and
/// the residual threshold `δ`. Unlike [`SeqParams`] it allows the rule to
/// run on its own (for instance with `c = d`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallPhase {
    pub dn: usize,
    #[serde(with = "serde_ratio")]
    pub delta: Rational,
}

impl SmallPhase {
    pub fn new(d: &Rational, delta: Rational, n: usize) -> Result<Self> {
        if d <= &Rational::zero() || d > &Rational::one() {
            return Err(Error::param(format!("d must lie in (0,1], got {d}")));
        }
        check_delta(&delta)?;
        Ok(SmallPhase {
            dn: floor_times(d, n),
            delta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn floors_phase_boundaries() {
        let p = SeqParams::new(ratio(42291, 100000), ratio(6457, 10000), ratio(1, 3), 200).unwrap();
        assert_eq!((p.cn(), p.dn()), (84, 129));
    }

    #[test]
    fn rejects_bad_params() {
        let third = ratio(1, 3);
        assert!(SeqParams::new(ratio(1, 2), ratio(1, 2), third.clone(), 10).is_err());
        assert!(SeqParams::new(ratio(1, 2), ratio(3, 2), third.clone(), 10).is_err());
        assert!(SeqParams::new(ratio(1, 20), ratio(1, 2), third.clone(), 10).is_err());
        assert!(SeqParams::new(ratio(1, 2), ratio(11, 20), third.clone(), 10).is_err());
        assert!(SeqParams::new(ratio(1, 2), int(1), int(1), 10).is_err());
        assert!(SeqParams::new(ratio(1, 2), int(1), third, 10).is_ok());
    }
}
