//! Monte Carlo estimates of event frequencies and competitive ratios.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{rank_order, GapInstance, Instance, KnapsackInstance};
use crate::online::{AssignmentTrace, GapRunner, KnapsackRunner, RunTrace, SeqParams};
use crate::oracles::{
    gap_opt_fractional, gap_opt_integral, knapsack_opt_fractional, knapsack_opt_integral,
    matching_opt, SolverCaps,
};
use crate::perm::{coin_rng, random_permutation};
use crate::rational::{format_rational, ratio, serde_ratio, to_f64, Rational};
use crate::split::{classify_gap, classify_knapsack};

use super::stats::Estimate;

/// Per-trial events whose frequency [`estimate_probability`] measures.
/// Ranks and rounds are 1-based, resources 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    /// The large-item rule packs the item of profit rank `i` first.
    AcceptFirst(usize),
    /// The large-item rule packs rank `i` first and rank `j` second.
    AcceptPair(usize, usize),
    /// The large-item rule leaves the knapsack (every GAP resource) empty
    /// through round `dn`.
    EmptyAfterDn,
    /// The matching rule assigns nothing to `resource` in rounds
    /// `1..=round`.
    ResourceUnmatched { resource: usize, round: usize },
    /// Number of rounds in which the small-item rule, run alone from an
    /// empty knapsack, packs with probability strictly between 0 and 1.
    /// Its "frequency" is the mean count.
    FractionalRoundCount,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::AcceptFirst(i) => write!(f, "accept-first:{i}"),
            Event::AcceptPair(i, j) => write!(f, "accept-pair:{i},{j}"),
            Event::EmptyAfterDn => f.write_str("empty-after-dn"),
            Event::ResourceUnmatched { resource, round } => {
                write!(f, "resource-unmatched:{resource},{round}")
            }
            Event::FractionalRoundCount => f.write_str("fractional-round-count"),
        }
    }
}

impl FromStr for Event {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::param(format!(
                "unknown event '{s}' (expected accept-first:I, accept-pair:I,J, empty-after-dn, \
                 resource-unmatched:R,L or fractional-round-count)"
            ))
        };
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| a.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        match (name, &nums[..]) {
            ("accept-first", &[i]) if i >= 1 => Ok(Event::AcceptFirst(i)),
            ("accept-pair", &[i, j]) if i >= 1 && j >= 1 && i != j => Ok(Event::AcceptPair(i, j)),
            ("empty-after-dn", []) => Ok(Event::EmptyAfterDn),
            ("resource-unmatched", &[resource, round]) if round >= 1 => {
                Ok(Event::ResourceUnmatched { resource, round })
            }
            ("fractional-round-count", []) => Ok(Event::FractionalRoundCount),
            _ => Err(bad()),
        }
    }
}

/// Runs `trials` independent trials in parallel and aggregates them in
/// trial order.
fn run_trials(trials: u64, seed: u64, f: impl Fn(u64) -> Result<f64> + Sync + Send) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::param("need at least one trial"));
    }
    let samples = (0..trials)
        .into_par_iter()
        .map(f)
        .collect::<Result<Vec<f64>>>()?;
    Ok(Estimate::from_samples(&samples, seed))
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Item id of each profit rank in the large view, rank 1 first.
fn large_ranks(instance: &KnapsackInstance, delta: &Rational) -> Result<Vec<u32>> {
    Ok(rank_order(classify_knapsack(instance, delta)?.large.items()))
}

fn rank_id(ranks: &[u32], rank: usize) -> Result<u32> {
    ranks
        .get(rank.wrapping_sub(1))
        .copied()
        .ok_or_else(|| Error::param(format!("rank {rank} out of range for n = {}", ranks.len())))
}

fn knapsack_event(
    event: Event,
    instance: &KnapsackInstance,
    params: &SeqParams,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    let runner = KnapsackRunner::new(instance, params.delta())?;
    let n = instance.n();
    let large = |t: u64| -> Result<RunTrace> {
        runner.run_large(&random_permutation(n, seed, t)?, params)
    };
    match event {
        Event::AcceptFirst(i) => {
            let id = rank_id(&large_ranks(instance, params.delta())?, i)?;
            run_trials(trials, seed, |t| {
                Ok(indicator(large(t)?.packed_ids.first() == Some(&id)))
            })
        }
        Event::AcceptPair(i, j) => {
            let ranks = large_ranks(instance, params.delta())?;
            let pair = [rank_id(&ranks, i)?, rank_id(&ranks, j)?];
            run_trials(trials, seed, |t| Ok(indicator(large(t)?.packed_ids[..] == pair)))
        }
        Event::EmptyAfterDn => {
            run_trials(trials, seed, |t| Ok(indicator(large(t)?.empty_through(params.dn()))))
        }
        Event::FractionalRoundCount => {
            let phase = params.small_phase();
            run_trials(trials, seed, |t| {
                let perm = random_permutation(n, seed, t)?;
                let trace = runner.run_small(&perm, &phase, instance.capacity(), &mut coin_rng(seed, t))?;
                Ok(trace.coin_rounds.len() as f64)
            })
        }
        Event::ResourceUnmatched { .. } => {
            Err(Error::param("resource-unmatched needs a GAP instance"))
        }
    }
}

fn gap_event(
    event: Event,
    instance: &GapInstance,
    params: &SeqParams,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    let runner = GapRunner::new(instance, params.delta())?;
    let (n, m) = (instance.n(), instance.m());
    let large = |t: u64| -> Result<AssignmentTrace> {
        runner.run_large(&random_permutation(n, seed, t)?, params)
    };
    match event {
        Event::EmptyAfterDn => run_trials(trials, seed, |t| {
            let trace = large(t)?;
            Ok(indicator((0..m).all(|r| trace.unassigned_through(r, params.dn()))))
        }),
        Event::ResourceUnmatched { resource, round } => {
            if resource >= m || round > n {
                return Err(Error::param(format!(
                    "resource {resource} / round {round} out of range for m = {m}, n = {n}"
                )));
            }
            run_trials(trials, seed, |t| {
                Ok(indicator(large(t)?.unassigned_through(resource, round)))
            })
        }
        Event::FractionalRoundCount => {
            let phase = params.small_phase();
            run_trials(trials, seed, |t| {
                let perm = random_permutation(n, seed, t)?;
                let trace =
                    runner.run_small(&perm, &phase, instance.capacities(), &mut coin_rng(seed, t))?;
                Ok(trace.coin_rounds.len() as f64)
            })
        }
        Event::AcceptFirst(_) | Event::AcceptPair(..) => {
            Err(Error::param("accept-first and accept-pair need a knapsack instance"))
        }
    }
}

/// Frequency of `event` over `trials` random arrival orders.
pub fn estimate_probability(
    event: Event,
    instance: &Instance,
    params: &SeqParams,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    if instance.n() != params.n() {
        return Err(Error::param(format!(
            "parameters are for n = {}, instance has {} items",
            params.n(),
            instance.n()
        )));
    }
    match instance {
        Instance::Knapsack(k) => knapsack_event(event, k, params, trials, seed),
        Instance::Gap(g) => gap_event(event, g, params, trials, seed),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Large-item rule then small-item rule on one knapsack.
    KnapsackSeq,
    /// Large-item rule alone, measured against the large view.
    KnapsackLarge,
    /// Small-item rule alone, measured against the small view.
    KnapsackSmall,
    /// Matching rule then LP rounding on shared resources.
    GapSeq,
    /// Matching rule alone, measured against the large view.
    GapMatching,
    /// LP rounding alone, measured against the small view.
    GapLp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::KnapsackSeq,
        Algorithm::KnapsackLarge,
        Algorithm::KnapsackSmall,
        Algorithm::GapSeq,
        Algorithm::GapMatching,
        Algorithm::GapLp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::KnapsackSeq => "knapsack-seq",
            Algorithm::KnapsackLarge => "knapsack-large",
            Algorithm::KnapsackSmall => "knapsack-small",
            Algorithm::GapSeq => "gap-seq",
            Algorithm::GapMatching => "gap-matching",
            Algorithm::GapLp => "gap-lp",
        }
    }

    pub fn is_gap(self) -> bool {
        matches!(self, Algorithm::GapSeq | Algorithm::GapMatching | Algorithm::GapLp)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
            Error::param(format!("unknown algorithm '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptKind {
    /// Exact integral optimum.
    Integral,
    /// Fractional upper bound; the reported ratio is then conservative.
    Fractional,
}

/// The optimum a ratio was measured against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptRef {
    pub kind: OptKind,
    #[serde(with = "serde_ratio")]
    pub value: Rational,
}

impl fmt::Display for OptRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            OptKind::Integral => "integral",
            OptKind::Fractional => "fractional",
        };
        write!(f, "{kind}:{}", format_rational(&self.value))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub estimate: Estimate,
    pub opt_ref: OptRef,
}

fn knapsack_reference(instance: &KnapsackInstance, caps: &SolverCaps) -> Result<OptRef> {
    if instance.n() <= caps.knapsack_max_items {
        if let Ok(opt) = knapsack_opt_integral(instance, caps) {
            return Ok(OptRef {
                kind: OptKind::Integral,
                value: opt.value,
            });
        }
    }
    Ok(OptRef {
        kind: OptKind::Fractional,
        value: knapsack_opt_fractional(instance).value,
    })
}

fn gap_reference(instance: &GapInstance, caps: &SolverCaps) -> Result<OptRef> {
    match gap_opt_integral(instance, caps) {
        Ok(opt) => Ok(OptRef {
            kind: OptKind::Integral,
            value: opt.value,
        }),
        Err(Error::Capability(_)) => Ok(OptRef {
            kind: OptKind::Fractional,
            value: gap_opt_fractional(instance).value,
        }),
        Err(e) => Err(e),
    }
}

/// For `δ >= 1/2` no resource fits two large options, so the large view's
/// optimum is a maximum-weight matching.
fn gap_large_reference(large: &GapInstance, delta: &Rational, caps: &SolverCaps) -> Result<OptRef> {
    if delta * ratio(2, 1) >= Rational::one() {
        let weights: Vec<Vec<Rational>> = large
            .items()
            .iter()
            .map(|row| row.iter().map(|o| o.profit.clone()).collect())
            .collect();
        return Ok(OptRef {
            kind: OptKind::Integral,
            value: matching_opt(&weights)?.weight,
        });
    }
    gap_reference(large, caps)
}

/// Mean of `profit / OPT_ref` over `trials` random arrival orders. The
/// reference depends on the algorithm: the large view for the large-item
/// rules, the small view for the small-item rules, the whole instance for
/// the sequential algorithms.
pub fn estimate_ratio(
    instance: &Instance,
    algorithm: Algorithm,
    params: &SeqParams,
    trials: u64,
    seed: u64,
    caps: &SolverCaps,
) -> Result<RatioEstimate> {
    let n = instance.n();
    if n != params.n() {
        return Err(Error::param(format!(
            "parameters are for n = {}, instance has {n} items",
            params.n()
        )));
    }
    let delta = params.delta();
    let wrong_kind = || {
        Error::param(format!(
            "algorithm {algorithm} does not apply to a {} instance",
            if algorithm.is_gap() { "knapsack" } else { "GAP" }
        ))
    };
    let (opt_ref, estimate) = match instance {
        Instance::Knapsack(k) => {
            if algorithm.is_gap() {
                return Err(wrong_kind());
            }
            let split = classify_knapsack(k, delta)?;
            let opt_ref = match algorithm {
                Algorithm::KnapsackLarge => knapsack_reference(&split.large, caps)?,
                Algorithm::KnapsackSmall => knapsack_reference(&split.small, caps)?,
                _ => knapsack_reference(k, caps)?,
            };
            if opt_ref.value.is_zero() {
                return Err(Error::param("reference optimum is zero; the ratio is undefined"));
            }
            let runner = KnapsackRunner::new(k, delta)?;
            let phase = params.small_phase();
            let estimate = run_trials(trials, seed, |t| {
                let perm = random_permutation(n, seed, t)?;
                let mut rng = coin_rng(seed, t);
                let trace = match algorithm {
                    Algorithm::KnapsackLarge => runner.run_large(&perm, params)?,
                    Algorithm::KnapsackSmall => {
                        runner.run_small(&perm, &phase, k.capacity(), &mut rng)?
                    }
                    _ => runner.run_sequential(&perm, params, &mut rng)?,
                };
                Ok(to_f64(&(trace.profit / &opt_ref.value)))
            })?;
            (opt_ref, estimate)
        }
        Instance::Gap(g) => {
            if !algorithm.is_gap() {
                return Err(wrong_kind());
            }
            let split = classify_gap(g, delta)?;
            let opt_ref = match algorithm {
                Algorithm::GapMatching => gap_large_reference(&split.large, delta, caps)?,
                Algorithm::GapLp => gap_reference(&split.small, caps)?,
                _ => gap_reference(g, caps)?,
            };
            if opt_ref.value.is_zero() {
                return Err(Error::param("reference optimum is zero; the ratio is undefined"));
            }
            let runner = GapRunner::new(g, delta)?;
            let phase = params.small_phase();
            let estimate = run_trials(trials, seed, |t| {
                let perm = random_permutation(n, seed, t)?;
                let mut rng = coin_rng(seed, t);
                let trace = match algorithm {
                    Algorithm::GapMatching => runner.run_large(&perm, params)?,
                    Algorithm::GapLp => runner.run_small(&perm, &phase, g.capacities(), &mut rng)?,
                    _ => runner.run_sequential(&perm, params, &mut rng)?,
                };
                Ok(to_f64(&(trace.profit / &opt_ref.value)))
            })?;
            (opt_ref, estimate)
        }
    };
    Ok(RatioEstimate { estimate, opt_ref })
}
