//! Online knapsack: the two-item secretary rule for large items, the
//! fractional-greedy rounding rule for small items, and their sequential
//! combination over one shared capacity.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::RngCore;

use super::fenwick::Fenwick;
use super::trace::{Decision, RunTrace};
use super::{SeqParams, SmallPhase};
use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::oracles::density_order;
use crate::perm::Permutation;
use crate::rational::{common_denominator, scale_to_u64, Rational};
use crate::split::classify_knapsack;

/// One instance prepared for repeated runs: both δ-views scaled to
/// integers and the density order of the small view.
///
/// The small-item rule needs, in every round, the greedy fractional
/// coefficient of the arriving item among the items seen so far. That
/// coefficient only depends on the total size of strictly denser visible
/// items, which a prefix-sum tree over the global density order answers in
/// `O(log n)`.
#[derive(Debug, Clone)]
pub struct KnapsackRunner {
    ids: Vec<u32>,
    delta: Rational,
    capacity: u64,
    delta_capacity: u64,
    large_size: Vec<u64>,
    large_profit: Vec<u64>,
    small_size: Vec<u64>,
    small_profit: Vec<u64>,
    /// Position of each item in the small view's density order.
    small_rank: Vec<usize>,
    size_scale: BigInt,
    profit_scale: BigInt,
}

#[derive(Clone, Copy)]
struct Phases {
    large: Option<(usize, usize)>,
    small_dn: Option<usize>,
}

struct RunState {
    decisions: Vec<Decision>,
    packed_ids: Vec<u32>,
    profit: u128,
    residual: u64,
    residual_log: Vec<u64>,
    coin_rounds: Vec<usize>,
    empty_after: Option<usize>,
}

impl KnapsackRunner {
    pub fn new(instance: &KnapsackInstance, delta: &Rational) -> Result<Self> {
        let split = classify_knapsack(instance, delta)?;
        let w = instance.capacity();
        let delta_w = delta * w;
        let sizes = || {
            [w, &delta_w]
                .into_iter()
                .chain(instance.items().iter().map(|i| &i.size))
        };
        let size_scale = common_denominator(sizes());
        let profit_scale = common_denominator(instance.items().iter().map(|i| &i.profit));
        let too_big = || Error::capability("instance numbers too large for the online runner");
        let scaled = scale_to_u64(sizes(), &size_scale).ok_or_else(too_big)?;
        let (capacity, delta_capacity) = (scaled[0], scaled[1]);
        let scale = |items: &KnapsackInstance| -> Result<(Vec<u64>, Vec<u64>)> {
            let s = scale_to_u64(items.items().iter().map(|i| &i.size), &size_scale).ok_or_else(too_big)?;
            let p = scale_to_u64(items.items().iter().map(|i| &i.profit), &profit_scale)
                .ok_or_else(too_big)?;
            Ok((s, p))
        };
        let (large_size, large_profit) = scale(&split.large)?;
        let (small_size, small_profit) = scale(&split.small)?;
        let mut small_rank = vec![0; instance.n()];
        for (pos, idx) in density_order(split.small.items()).into_iter().enumerate() {
            small_rank[idx] = pos;
        }
        Ok(KnapsackRunner {
            ids: instance.items().iter().map(|i| i.id).collect(),
            delta: delta.clone(),
            capacity,
            delta_capacity,
            large_size,
            large_profit,
            small_size,
            small_profit,
            small_rank,
            size_scale,
            profit_scale,
        })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    fn check(&self, perm: &Permutation, delta: &Rational) -> Result<()> {
        if perm.n() != self.n() {
            return Err(Error::param(format!(
                "permutation has {} entries, instance has {} items",
                perm.n(),
                self.n()
            )));
        }
        if delta != &self.delta {
            return Err(Error::param("parameter delta differs from the runner's split"));
        }
        Ok(())
    }

    fn check_params(&self, perm: &Permutation, params: &SeqParams) -> Result<()> {
        self.check(perm, params.delta())?;
        if params.n() != self.n() {
            return Err(Error::param(format!(
                "parameters are for n = {}, instance has {} items",
                params.n(),
                self.n()
            )));
        }
        Ok(())
    }

    /// The large-item rule alone on the large view; rounds after `dn` are
    /// rejected.
    pub fn run_large(&self, perm: &Permutation, params: &SeqParams) -> Result<RunTrace> {
        self.check_params(perm, params)?;
        let phases = Phases {
            large: Some((params.cn(), params.dn())),
            small_dn: None,
        };
        Ok(self.run(perm, phases, self.capacity, &mut NoCoins))
    }

    /// The small-item rule alone on the small view, starting from
    /// `residual` free capacity.
    pub fn run_small(
        &self,
        perm: &Permutation,
        phase: &SmallPhase,
        residual: &Rational,
        rng: &mut impl RngCore,
    ) -> Result<RunTrace> {
        self.check(perm, &phase.delta)?;
        let start = scale_to_u64([residual], &self.size_scale)
            .map(|v| v[0])
            .filter(|&v| v <= self.capacity)
            .ok_or_else(|| {
                Error::param("starting residual must lie in [0, W] on the instance's size grid")
            })?;
        let phases = Phases {
            large: None,
            small_dn: Some(phase.dn),
        };
        Ok(self.run(perm, phases, start, rng))
    }

    /// Large-item rule in rounds `cn+1..=dn`, small-item rule afterwards,
    /// one shared capacity.
    pub fn run_sequential(
        &self,
        perm: &Permutation,
        params: &SeqParams,
        rng: &mut impl RngCore,
    ) -> Result<RunTrace> {
        self.check_params(perm, params)?;
        let phases = Phases {
            large: Some((params.cn(), params.dn())),
            small_dn: Some(params.dn()),
        };
        Ok(self.run(perm, phases, self.capacity, rng))
    }

    fn run(
        &self,
        perm: &Permutation,
        phases: Phases,
        residual: u64,
        rng: &mut impl RngCore,
    ) -> RunTrace {
        let n = self.n();
        let mut st = RunState {
            decisions: Vec::with_capacity(n),
            packed_ids: Vec::new(),
            profit: 0,
            residual,
            residual_log: Vec::with_capacity(n),
            coin_rounds: Vec::new(),
            empty_after: None,
        };
        let mut visible = phases.small_dn.map(|_| Fenwick::new(n));
        let mut threshold = 0u64;
        let mut large_packed = 0usize;

        for (idx, &k) in perm.order.iter().enumerate() {
            let round = idx + 1;
            let k = k as usize;
            if let Some(tree) = visible.as_mut() {
                tree.add(self.small_rank[k], u128::from(self.small_size[k]));
            }
            let decision = match (phases.large, phases.small_dn) {
                (Some((cn, _)), _) if round <= cn => {
                    threshold = threshold.max(self.large_profit[k]);
                    Decision::Sampled
                }
                (Some((_, dn)), _) if round <= dn => {
                    self.large_step(&mut st, round, k, threshold, &mut large_packed)
                }
                (_, Some(dn)) if round <= dn => Decision::Sampled,
                (_, Some(_)) => {
                    let tree = visible.as_ref().expect("small phase keeps a visible set");
                    self.small_step(&mut st, round, k, tree, rng)
                }
                (_, None) => Decision::Rejected,
            };
            st.decisions.push(decision);
            st.residual_log.push(st.residual);
        }

        RunTrace {
            decisions: st.decisions,
            packed_ids: st.packed_ids,
            profit: Rational::new(BigInt::from(st.profit), self.profit_scale.clone()),
            coin_rounds: st.coin_rounds,
            empty_after: st.empty_after,
            residual_scaled: st.residual_log,
            size_scale: self.size_scale.clone(),
        }
    }

    fn pack(&self, st: &mut RunState, round: usize, k: usize, size: u64, profit: u64) -> Decision {
        st.residual -= size;
        st.profit += u128::from(profit);
        st.packed_ids.push(self.ids[k]);
        st.empty_after.get_or_insert(round);
        Decision::Packed
    }

    fn large_step(
        &self,
        st: &mut RunState,
        round: usize,
        k: usize,
        threshold: u64,
        packed: &mut usize,
    ) -> Decision {
        let profit = self.large_profit[k];
        if profit == 0 || profit <= threshold || *packed >= 2 {
            return Decision::Rejected;
        }
        let size = self.large_size[k];
        if size > st.residual {
            return Decision::BlockedCapacity;
        }
        *packed += 1;
        self.pack(st, round, k, size, profit)
    }

    fn small_step(
        &self,
        st: &mut RunState,
        round: usize,
        k: usize,
        visible: &Fenwick,
        rng: &mut impl RngCore,
    ) -> Decision {
        let profit = self.small_profit[k];
        if profit == 0 {
            return Decision::Rejected;
        }
        let size = u128::from(self.small_size[k]);
        let cap = u128::from(self.capacity);
        let before = visible.prefix(self.small_rank[k]);
        if before >= cap {
            return Decision::Rejected;
        }
        let room = cap - before;
        let accept = if room >= size {
            true
        } else {
            // Pack with probability room / size.
            st.coin_rounds.push(round);
            u128::from(rng.next_u64()) * size < room << 64
        };
        if !accept {
            return Decision::Rejected;
        }
        if st.residual < self.delta_capacity {
            return Decision::BlockedCapacity;
        }
        self.pack(st, round, k, self.small_size[k], profit)
    }
}

/// Stand-in generator for runs that never flip a coin.
struct NoCoins;

impl RngCore for NoCoins {
    fn next_u32(&mut self) -> u32 {
        unreachable!("the large-item rule is deterministic")
    }

    fn next_u64(&mut self) -> u64 {
        unreachable!("the large-item rule is deterministic")
    }

    fn fill_bytes(&mut self, _dst: &mut [u8]) {
        unreachable!("the large-item rule is deterministic")
    }
}

/// The large-item rule on `instance` (normally a large view).
pub fn run_al(instance: &KnapsackInstance, perm: &Permutation, params: &SeqParams) -> Result<RunTrace> {
    KnapsackRunner::new(instance, params.delta())?.run_large(perm, params)
}

/// The small-item rule on `instance` (normally a small view).
pub fn run_as(
    instance: &KnapsackInstance,
    perm: &Permutation,
    phase: &SmallPhase,
    residual: &Rational,
    rng: &mut impl RngCore,
) -> Result<RunTrace> {
    KnapsackRunner::new(instance, &phase.delta)?.run_small(perm, phase, residual, rng)
}

pub fn run_sequential(
    instance: &KnapsackInstance,
    perm: &Permutation,
    params: &SeqParams,
    rng: &mut impl RngCore,
) -> Result<RunTrace> {
    KnapsackRunner::new(instance, params.delta())?.run_sequential(perm, params, rng)
}

impl RunTrace {
    /// Total size of the packed items of `instance`.
    pub fn packed_size(&self, instance: &KnapsackInstance) -> Rational {
        instance
            .items()
            .iter()
            .filter(|i| self.packed_ids.contains(&i.id))
            .map(|i| &i.size)
            .fold(Rational::zero(), |acc, s| acc + s)
    }
}
