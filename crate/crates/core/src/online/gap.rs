//! Online GAP: matching-based assignment of large options, LP rounding of
//! small options, and their sequential combination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::RngCore;

use super::trace::{AssignmentTrace, GapDecision};
use super::{SeqParams, SmallPhase};
use crate::error::{Error, Result};
use crate::instance::GapInstance;
use crate::oracles::gap_lp::GapLp;
use crate::oracles::{gap_opt_fractional_dense, max_weight_matching};
use crate::perm::Permutation;
use crate::rational::{common_denominator, scale_to_u64, Rational};
use crate::split::classify_gap;

/// One GAP instance prepared for repeated runs: both δ-views scaled to
/// integers, one size scale per resource.
///
/// The small-option rule re-optimizes the LP relaxation over all revealed
/// items every round. Consecutive LPs differ by one item, so the solver is
/// warm-started from the previous optimal basis.
#[derive(Debug, Clone)]
pub struct GapRunner {
    n: usize,
    m: usize,
    delta: Rational,
    capacity: Vec<u64>,
    delta_capacity: Vec<u64>,
    /// `n x m`, row-major.
    large_size: Vec<u64>,
    large_profit: Vec<u64>,
    small_size: Vec<u64>,
    small_profit: Vec<u64>,
    size_scales: Vec<BigInt>,
    profit_scale: BigInt,
    small_view: GapInstance,
}

#[derive(Clone, Copy)]
struct Phases {
    large: Option<(usize, usize)>,
    small_dn: Option<usize>,
}

struct RunState {
    decisions: Vec<GapDecision>,
    assignment: BTreeMap<u32, usize>,
    profit: u128,
    residual: Vec<u64>,
    residual_log: Vec<u64>,
    coin_rounds: Vec<usize>,
    first_assigned: Vec<Option<usize>>,
}

/// Incremental state of the small-option rule within one run.
struct SmallState {
    lp: GapLp,
    /// Instance index of each LP item.
    members: Vec<usize>,
    /// LP item of each instance index, if it has a positive option.
    slot: Vec<Option<usize>>,
}

/// Resource picked by `u ~ U[0, 2^64)` when resource `r` has probability
/// `nums[r] / denom`.
fn pick(nums: &[BigInt], denom: &BigInt, u: u64) -> Option<usize> {
    let lhs = BigInt::from(u) * denom;
    let mut cum = BigInt::zero();
    for (r, v) in nums.iter().enumerate() {
        cum += v;
        if lhs < (&cum << 64) {
            return Some(r);
        }
    }
    None
}

impl GapRunner {
    pub fn new(instance: &GapInstance, delta: &Rational) -> Result<Self> {
        let split = classify_gap(instance, delta)?;
        let (n, m) = (instance.n(), instance.m());
        let too_big = || Error::capability("instance numbers too large for the online runner");
        let mut capacity = Vec::with_capacity(m);
        let mut delta_capacity = Vec::with_capacity(m);
        let mut size_scales = Vec::with_capacity(m);
        let mut large_size = vec![0u64; n * m];
        let mut small_size = vec![0u64; n * m];
        for r in 0..m {
            let w = &instance.capacities()[r];
            let dw = delta * w;
            let column = || {
                [w, &dw]
                    .into_iter()
                    .chain((0..n).map(move |i| &instance.option(i, r).size))
            };
            let scale = common_denominator(column());
            let scaled = scale_to_u64(column(), &scale).ok_or_else(too_big)?;
            capacity.push(scaled[0]);
            delta_capacity.push(scaled[1]);
            let view = |g: &GapInstance| {
                scale_to_u64((0..n).map(|i| &g.option(i, r).size), &scale).ok_or_else(too_big)
            };
            for (i, v) in view(&split.large)?.into_iter().enumerate() {
                large_size[i * m + r] = v;
            }
            for (i, v) in view(&split.small)?.into_iter().enumerate() {
                small_size[i * m + r] = v;
            }
            size_scales.push(scale);
        }
        let profit_scale = common_denominator(instance.items().iter().flatten().map(|o| &o.profit));
        let profits = |g: &GapInstance| {
            scale_to_u64(g.items().iter().flatten().map(|o| &o.profit), &profit_scale)
                .ok_or_else(too_big)
        };
        Ok(GapRunner {
            n,
            m,
            delta: delta.clone(),
            capacity,
            delta_capacity,
            large_size,
            large_profit: profits(&split.large)?,
            small_size,
            small_profit: profits(&split.small)?,
            size_scales,
            profit_scale,
            small_view: split.small,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn check(&self, perm: &Permutation, delta: &Rational) -> Result<()> {
        if perm.n() != self.n {
            return Err(Error::param(format!(
                "permutation has {} entries, instance has {} items",
                perm.n(),
                self.n
            )));
        }
        if delta != &self.delta {
            return Err(Error::param("parameter delta differs from the runner's split"));
        }
        Ok(())
    }

    fn check_params(&self, perm: &Permutation, params: &SeqParams) -> Result<()> {
        self.check(perm, params.delta())?;
        if params.n() != self.n {
            return Err(Error::param(format!(
                "parameters are for n = {}, instance has {} items",
                params.n(),
                self.n
            )));
        }
        Ok(())
    }

    /// Matching rule alone on the large view; rounds after `dn` rejected.
    pub fn run_large(&self, perm: &Permutation, params: &SeqParams) -> Result<AssignmentTrace> {
        self.check_params(perm, params)?;
        let phases = Phases {
            large: Some((params.cn(), params.dn())),
            small_dn: None,
        };
        Ok(self.run(perm, phases, self.capacity.clone(), &mut NoCoins))
    }

    /// LP rounding alone on the small view, starting from the given
    /// per-resource residuals.
    pub fn run_small(
        &self,
        perm: &Permutation,
        phase: &SmallPhase,
        residuals: &[Rational],
        rng: &mut impl RngCore,
    ) -> Result<AssignmentTrace> {
        self.check(perm, &phase.delta)?;
        if residuals.len() != self.m {
            return Err(Error::param("need one starting residual per resource"));
        }
        let start = residuals
            .iter()
            .enumerate()
            .map(|(r, v)| {
                scale_to_u64([v], &self.size_scales[r])
                    .map(|s| s[0])
                    .filter(|&s| s <= self.capacity[r])
                    .ok_or_else(|| {
                        Error::param(format!(
                            "starting residual of resource {r} must lie in [0, W_r] on the size grid"
                        ))
                    })
            })
            .collect::<Result<Vec<u64>>>()?;
        let phases = Phases {
            large: None,
            small_dn: Some(phase.dn),
        };
        Ok(self.run(perm, phases, start, rng))
    }

    pub fn run_sequential(
        &self,
        perm: &Permutation,
        params: &SeqParams,
        rng: &mut impl RngCore,
    ) -> Result<AssignmentTrace> {
        self.check_params(perm, params)?;
        let phases = Phases {
            large: Some((params.cn(), params.dn())),
            small_dn: Some(params.dn()),
        };
        Ok(self.run(perm, phases, self.capacity.clone(), rng))
    }

    fn run(
        &self,
        perm: &Permutation,
        phases: Phases,
        residual: Vec<u64>,
        rng: &mut impl RngCore,
    ) -> AssignmentTrace {
        let (n, m) = (self.n, self.m);
        let mut st = RunState {
            decisions: Vec::with_capacity(n),
            assignment: BTreeMap::new(),
            profit: 0,
            residual,
            residual_log: Vec::with_capacity(n * m),
            coin_rounds: Vec::new(),
            first_assigned: vec![None; m],
        };
        // Revealed large options with at least one positive weight.
        let mut revealed: Vec<Vec<i128>> = Vec::new();
        let mut matched = vec![false; m];
        let mut small = phases.small_dn.map(|_| SmallState {
            lp: GapLp::new(self.capacity.iter().map(|&w| i128::from(w)).collect()),
            members: Vec::new(),
            slot: vec![None; n],
        });

        for (idx, &k) in perm.order.iter().enumerate() {
            let round = idx + 1;
            let k = k as usize;
            let row = k * m..(k + 1) * m;
            let mut arriving_row = None;
            if phases.large.is_some() && self.large_profit[row.clone()].iter().any(|&v| v > 0) {
                revealed.push(self.large_profit[row.clone()].iter().map(|&v| i128::from(v)).collect());
                arriving_row = Some(revealed.len() - 1);
            }
            if let Some(s) = small.as_mut() {
                if self.small_profit[row.clone()].iter().any(|&v| v > 0) {
                    let options = (0..m).map(|r| {
                        (
                            r,
                            i128::from(self.small_profit[k * m + r]),
                            i128::from(self.small_size[k * m + r]),
                        )
                    });
                    s.slot[k] = Some(s.lp.push_item(options));
                    s.members.push(k);
                }
            }

            let decision = match (phases.large, phases.small_dn) {
                (Some((cn, _)), _) if round <= cn => GapDecision::Sampled,
                (Some((_, dn)), _) if round <= dn => match arriving_row {
                    None => GapDecision::Rejected,
                    Some(row) => self.large_step(&mut st, round, k, &revealed, row, &mut matched),
                },
                (_, Some(dn)) if round <= dn => GapDecision::Sampled,
                (_, Some(_)) => {
                    let s = small.as_mut().expect("small phase keeps an LP");
                    self.small_step(&mut st, round, k, s, rng)
                }
                (_, None) => GapDecision::Rejected,
            };
            st.decisions.push(decision);
            st.residual_log.extend_from_slice(&st.residual);
        }

        AssignmentTrace {
            decisions: st.decisions,
            assignment: st.assignment,
            profit: Rational::new(BigInt::from(st.profit), self.profit_scale.clone()),
            coin_rounds: st.coin_rounds,
            first_assigned: st.first_assigned,
            residual_scaled: st.residual_log,
            size_scales: self.size_scales.clone(),
        }
    }

    fn assign(
        &self,
        st: &mut RunState,
        round: usize,
        k: usize,
        r: usize,
        size: u64,
        profit: u64,
    ) -> GapDecision {
        st.residual[r] -= size;
        st.profit += u128::from(profit);
        st.assignment.insert(k as u32, r);
        st.first_assigned[r].get_or_insert(round);
        GapDecision::Assigned(r)
    }

    fn large_step(
        &self,
        st: &mut RunState,
        round: usize,
        k: usize,
        revealed: &[Vec<i128>],
        row: usize,
        matched: &mut [bool],
    ) -> GapDecision {
        let Some(r) = max_weight_matching(revealed)[row] else {
            return GapDecision::Rejected;
        };
        if matched[r] {
            return GapDecision::Rejected;
        }
        let size = self.large_size[k * self.m + r];
        if size > st.residual[r] {
            return GapDecision::BlockedCapacity;
        }
        matched[r] = true;
        self.assign(st, round, k, r, size, self.large_profit[k * self.m + r])
    }

    /// The arriving item's LP coefficients as numerators over a common
    /// denominator.
    fn coefficients(&self, s: &mut SmallState, k: usize) -> (Vec<BigInt>, BigInt) {
        let item = s.slot[k].expect("arriving item is in the LP");
        if s.lp.solve().is_ok() {
            if let Some((nums, denom)) = s.lp.item_values(item) {
                return (nums.into_iter().map(BigInt::from).collect(), BigInt::from(denom));
            }
        }
        // Integer overflow in the structured solver: solve this round with
        // the rational tableau and restart the structured basis.
        s.lp.reset_basis();
        let rows = s.members.iter().map(|&i| self.small_view.items()[i].clone()).collect();
        let revealed = GapInstance::new(self.small_view.capacities().to_vec(), rows)
            .expect("sub-instance of a valid instance");
        let sol = gap_opt_fractional_dense(&revealed);
        let x: Vec<Rational> = (0..self.m).map(|r| sol.coefficient(item as u32, r)).collect();
        let denom = common_denominator(&x);
        let nums = x
            .iter()
            .map(|v| (v * Rational::from_integer(denom.clone())).to_integer())
            .collect();
        (nums, denom)
    }

    fn small_step(
        &self,
        st: &mut RunState,
        round: usize,
        k: usize,
        s: &mut SmallState,
        rng: &mut impl RngCore,
    ) -> GapDecision {
        if s.slot[k].is_none() {
            return GapDecision::Rejected;
        }
        let (nums, denom) = self.coefficients(s, k);
        let certain = nums.iter().position(|v| v == &denom);
        let chosen = if let Some(r) = certain {
            Some(r)
        } else if nums.iter().all(Zero::is_zero) {
            None
        } else {
            st.coin_rounds.push(round);
            pick(&nums, &denom, rng.next_u64())
        };
        let Some(r) = chosen else {
            return GapDecision::Rejected;
        };
        if st.residual[r] < self.delta_capacity[r] {
            return GapDecision::BlockedCapacity;
        }
        let idx = k * self.m + r;
        self.assign(st, round, k, r, self.small_size[idx], self.small_profit[idx])
    }
}

struct NoCoins;

impl RngCore for NoCoins {
    fn next_u32(&mut self) -> u32 {
        unreachable!("the matching rule is deterministic")
    }

    fn next_u64(&mut self) -> u64 {
        unreachable!("the matching rule is deterministic")
    }

    fn fill_bytes(&mut self, _dst: &mut [u8]) {
        unreachable!("the matching rule is deterministic")
    }
}

/// The matching rule on `instance` (normally a large view).
pub fn run_matching_al(
    instance: &GapInstance,
    perm: &Permutation,
    params: &SeqParams,
) -> Result<AssignmentTrace> {
    GapRunner::new(instance, params.delta())?.run_large(perm, params)
}

/// LP rounding on `instance` (normally a small view).
pub fn run_lp_as(
    instance: &GapInstance,
    perm: &Permutation,
    phase: &SmallPhase,
    residuals: &[Rational],
    rng: &mut impl RngCore,
) -> Result<AssignmentTrace> {
    GapRunner::new(instance, &phase.delta)?.run_small(perm, phase, residuals, rng)
}

pub fn run_sequential_gap(
    instance: &GapInstance,
    perm: &Permutation,
    params: &SeqParams,
    rng: &mut impl RngCore,
) -> Result<AssignmentTrace> {
    GapRunner::new(instance, params.delta())?.run_sequential(perm, params, rng)
}

impl AssignmentTrace {
    /// Total size assigned to each resource.
    pub fn loads(&self, instance: &GapInstance) -> Vec<Rational> {
        let mut loads = vec![Rational::zero(); instance.m()];
        for (&i, &r) in &self.assignment {
            loads[r] += &instance.option(i as usize, r).size;
        }
        loads
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::GapOption;
    use crate::perm::coin_rng;
    use crate::rational::{int, ratio};

    fn gap(caps: &[i64], rows: &[&[(i64, i64)]]) -> GapInstance {
        GapInstance::new(
            caps.iter().map(|&w| int(w)).collect(),
            rows.iter()
                .map(|r| r.iter().map(|&(v, s)| GapOption::new(int(v), int(s))).collect())
                .collect(),
        )
        .unwrap()
    }

    fn identity(n: u32) -> Permutation {
        Permutation::from_order((0..n).collect()).unwrap()
    }

    #[test]
    fn valuable_second_item_is_matched() {
        let inst = gap(&[10], &[&[(1, 6)], &[(5, 6)]]);
        let params = SeqParams::new(ratio(1, 2), int(1), ratio(1, 2), 2).unwrap();
        let trace = run_matching_al(&inst, &identity(2), &params).unwrap();
        assert_eq!(trace.decisions, vec![GapDecision::Sampled, GapDecision::Assigned(0)]);
        assert_eq!(trace.profit, int(5));
        assert_eq!(trace.first_assigned, vec![Some(2)]);
    }

    #[test]
    fn matched_resource_stays_closed() {
        // Both later items want resource 0; the second cannot have it.
        let inst = gap(&[10, 10], &[&[(1, 6), (1, 6)], &[(5, 6), (0, 6)], &[(9, 6), (0, 6)]]);
        let params = SeqParams::new(ratio(1, 3), int(1), ratio(1, 2), 3).unwrap();
        let trace = run_matching_al(&inst, &identity(3), &params).unwrap();
        assert_eq!(trace.decisions[1], GapDecision::Assigned(0));
        assert_eq!(trace.decisions[2], GapDecision::Rejected);
        assert_eq!(trace.assignment.len(), 1);
    }

    #[test]
    fn lp_rule_with_full_observation_assigns_nothing() {
        let inst = gap(&[10, 10], &[&[(3, 2), (2, 2)], &[(4, 1), (1, 1)]]);
        let phase = SmallPhase::new(&int(1), ratio(1, 2), 2).unwrap();
        let mut rng = coin_rng(1, 0);
        let trace = run_lp_as(&inst, &identity(2), &phase, &[int(10), int(10)], &mut rng).unwrap();
        assert!(trace.assignment.is_empty());
    }

    #[test]
    fn lp_rule_assigns_certain_items() {
        let inst = gap(&[10, 10], &[&[(3, 2), (2, 2)], &[(4, 1), (1, 1)], &[(1, 1), (6, 2)]]);
        let phase = SmallPhase::new(&ratio(1, 3), ratio(1, 2), 3).unwrap();
        let mut rng = coin_rng(1, 0);
        let trace = run_lp_as(&inst, &identity(3), &phase, &[int(10), int(10)], &mut rng).unwrap();
        assert_eq!(trace.assignment, BTreeMap::from([(1, 0), (2, 1)]));
        assert!(trace.coin_rounds.is_empty());
        assert_eq!(trace.residual_after(3, 1), int(8));
    }

    #[test]
    fn pick_follows_cumulative_probabilities() {
        let nums = [BigInt::from(1), BigInt::from(1)];
        let denom = BigInt::from(4);
        assert_eq!(pick(&nums, &denom, 0), Some(0));
        assert_eq!(pick(&nums, &denom, u64::MAX / 4 + 1), Some(1));
        assert_eq!(pick(&nums, &denom, u64::MAX), None);
    }
}
