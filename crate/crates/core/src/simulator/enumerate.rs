//! Exhaustive enumeration of arrival orders for the large-item rule.
//!
//! The rule only compares profits and counts rounds, so its acceptance
//! events depend on the relative ranks of the items and their positions,
//! not on the actual values. Running it on one instance per `n` over all
//! `n!` orders therefore yields the exact acceptance probabilities.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::instance::{KnapsackInstance, KnapsackItem};
use crate::online::{KnapsackRunner, SeqParams};
use crate::perm::Permutation;
use crate::rational::{format_rational, int, ratio, Rational};

/// Largest `n` accepted by [`enumerate_exact`] (5040 orders).
pub const ENUMERATION_MAX_N: usize = 7;

/// `n` items of size `2W/5` (large for `δ = 1/3`, two fit together) with
/// distinct profits; item id `k` has rank `k + 1`.
pub fn rank_instance(n: usize) -> KnapsackInstance {
    let items = (0..n)
        .map(|k| KnapsackItem::new(k as u32, int(2), int((n - k) as i64)))
        .collect();
    KnapsackInstance::new(int(5), items).expect("rank instance is valid")
}

/// Counts over all `n!` arrival orders. Ranks are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedStats {
    pub n: usize,
    pub cn: usize,
    pub dn: usize,
    /// `n!`.
    pub total: u64,
    /// Orders in which rank `i` is the first packed item, index `i - 1`.
    pub first_counts: Vec<u64>,
    /// Orders in which rank `i` is packed first and rank `j` second.
    pub pair_counts: BTreeMap<(usize, usize), u64>,
}

impl EnumeratedStats {
    pub fn p_first(&self, i: usize) -> Rational {
        let count = self.first_counts.get(i.wrapping_sub(1)).copied().unwrap_or(0);
        Rational::new(BigInt::from(count), BigInt::from(self.total))
    }

    pub fn p_pair(&self, i: usize, j: usize) -> Rational {
        let count = self.pair_counts.get(&(i, j)).copied().unwrap_or(0);
        Rational::new(BigInt::from(count), BigInt::from(self.total))
    }
}

impl Serialize for EnumeratedStats {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let first: BTreeMap<usize, String> = (1..=self.n)
            .map(|i| (i, format_rational(&self.p_first(i))))
            .collect();
        let pair: BTreeMap<String, String> = self
            .pair_counts
            .keys()
            .map(|&(i, j)| (format!("{i},{j}"), format_rational(&self.p_pair(i, j))))
            .collect();
        let mut st = s.serialize_struct("EnumeratedStats", 6)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("cn", &self.cn)?;
        st.serialize_field("dn", &self.dn)?;
        st.serialize_field("total", &self.total)?;
        st.serialize_field("p_first", &first)?;
        st.serialize_field("p_pair", &pair)?;
        st.end()
    }
}

/// Runs the large-item rule with sampling phase `1..=cn` and packing phase
/// `cn+1..=dn` on every arrival order of [`rank_instance`]`(n)`.
/// `cn = dn` is allowed and packs nothing.
pub fn enumerate_exact(n: usize, cn: usize, dn: usize) -> Result<EnumeratedStats> {
    if n > ENUMERATION_MAX_N {
        return Err(Error::capability(format!(
            "enumeration covers n <= {ENUMERATION_MAX_N}, got {n}"
        )));
    }
    if cn == 0 || cn > dn || dn > n {
        return Err(Error::param(format!(
            "need 1 <= cn <= dn <= n, got n = {n}, cn = {cn}, dn = {dn}"
        )));
    }
    let mut stats = EnumeratedStats {
        n,
        cn,
        dn,
        total: (1..=n as u64).product(),
        first_counts: vec![0; n],
        pair_counts: BTreeMap::new(),
    };
    if cn == dn {
        return Ok(stats);
    }
    let instance = rank_instance(n);
    let runner = KnapsackRunner::new(&instance, &ratio(1, 3))?;
    let params = SeqParams::new(ratio(cn as i64, n as i64), ratio(dn as i64, n as i64), ratio(1, 3), n)?;
    debug_assert_eq!((params.cn(), params.dn()), (cn, dn));
    for order in (0..n as u32).permutations(n) {
        let trace = runner.run_large(&Permutation::from_order(order)?, &params)?;
        let ranks: Vec<usize> = trace.packed_ids.iter().map(|&id| id as usize + 1).collect();
        if let Some(&first) = ranks.first() {
            stats.first_counts[first - 1] += 1;
        }
        if let [first, second] = ranks[..] {
            *stats.pair_counts.entry((first, second)).or_insert(0) += 1;
        }
    }
    Ok(stats)
}
