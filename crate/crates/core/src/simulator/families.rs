//! Built-in instance families. All numbers are integers so runs stay on
//! the fast scaled-integer path.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{GapInstance, GapOption, Instance, KnapsackInstance, KnapsackItem};
use crate::rational::int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Sizes in `(W/3, W]`, heavy-tailed profits.
    FewLarge,
    /// Sizes at most `W/100`, heavy-tailed profits.
    ManySmall,
    /// Half few-large items, half many-small items.
    Mixed,
    /// Sizes uniform in `[1, W]`, profit within 10% of size.
    Correlated,
    /// Equal capacities, option sizes uniform in `[1, W_r]`.
    GapUniform,
    /// Capacities `W, 2W, 3W, …`, heavy-tailed profits, about a third of
    /// the options are zero-profit dummies.
    GapSkewed,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 6] = [
        FamilyKind::FewLarge,
        FamilyKind::ManySmall,
        FamilyKind::Mixed,
        FamilyKind::Correlated,
        FamilyKind::GapUniform,
        FamilyKind::GapSkewed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::FewLarge => "few-large",
            FamilyKind::ManySmall => "many-small",
            FamilyKind::Mixed => "mixed",
            FamilyKind::Correlated => "correlated",
            FamilyKind::GapUniform => "gap-uniform",
            FamilyKind::GapSkewed => "gap-skewed",
        }
    }

    pub fn is_gap(self) -> bool {
        matches!(self, FamilyKind::GapUniform | FamilyKind::GapSkewed)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = FamilyKind::ALL.iter().map(|k| k.name()).collect();
                Error::param(format!("unknown family '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFamily {
    pub kind: FamilyKind,
    pub n: usize,
    /// Resources, GAP families only.
    pub m: usize,
    /// Base capacity `W`.
    pub capacity: u64,
}

impl InstanceFamily {
    pub fn new(kind: FamilyKind, n: usize) -> Self {
        InstanceFamily {
            kind,
            n,
            m: 3,
            capacity: 10_000,
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }
}

/// Generator stream, disjoint from every trial's streams.
fn family_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    rng
}

/// Pareto-like profit with tail index 3/2, between 100 and 10^6.
fn heavy_tail(rng: &mut ChaCha8Rng) -> i64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    (100.0 * u.powf(-1.0 / 1.5)).min(1e6).ceil() as i64
}

fn large_size(rng: &mut ChaCha8Rng, w: i64) -> i64 {
    rng.random_range(w / 3 + 1..=w)
}

fn small_size(rng: &mut ChaCha8Rng, w: i64) -> i64 {
    rng.random_range(1..=(w / 100).max(1))
}

pub fn generate(family: &InstanceFamily, seed: u64) -> Result<Instance> {
    if family.n == 0 {
        return Err(Error::param("a family instance needs at least one item"));
    }
    if family.capacity < 100 || family.capacity > 1 << 40 {
        return Err(Error::param("family capacity must lie in [100, 2^40]"));
    }
    let mut rng = family_rng(seed);
    let w = family.capacity as i64;
    let n = family.n;
    let knapsack = |pairs: Vec<(i64, i64)>| -> Result<Instance> {
        let items = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (s, p))| KnapsackItem::new(i as u32, int(s), int(p)))
            .collect();
        Ok(Instance::Knapsack(KnapsackInstance::new(int(w), items)?))
    };
    match family.kind {
        FamilyKind::FewLarge => knapsack(
            (0..n)
                .map(|_| (large_size(&mut rng, w), heavy_tail(&mut rng)))
                .collect(),
        ),
        FamilyKind::ManySmall => knapsack(
            (0..n)
                .map(|_| (small_size(&mut rng, w), heavy_tail(&mut rng)))
                .collect(),
        ),
        FamilyKind::Mixed => knapsack(
            (0..n)
                .map(|i| {
                    let s = if i < n / 2 {
                        large_size(&mut rng, w)
                    } else {
                        small_size(&mut rng, w)
                    };
                    (s, heavy_tail(&mut rng))
                })
                .collect(),
        ),
        FamilyKind::Correlated => knapsack(
            (0..n)
                .map(|_| {
                    let s = rng.random_range(1..=w);
                    let noise = rng.random_range(-0.1..=0.1);
                    (s, ((s as f64) * (1.0 + noise)).round().max(1.0) as i64)
                })
                .collect(),
        ),
        FamilyKind::GapUniform | FamilyKind::GapSkewed => {
            if family.m == 0 {
                return Err(Error::param("a GAP family needs at least one resource"));
            }
            let skewed = family.kind == FamilyKind::GapSkewed;
            let caps: Vec<i64> = (0..family.m)
                .map(|r| if skewed { w * (r as i64 + 1) } else { w })
                .collect();
            let items = (0..n)
                .map(|_| {
                    caps.iter()
                        .map(|&wr| {
                            let size = rng.random_range(1..=wr);
                            let profit = if !skewed {
                                rng.random_range(1..=1000)
                            } else if rng.random_bool(1.0 / 3.0) {
                                0
                            } else {
                                heavy_tail(&mut rng)
                            };
                            GapOption::new(int(profit), int(size))
                        })
                        .collect()
                })
                .collect();
            let caps = caps.into_iter().map(int).collect();
            Ok(Instance::Gap(GapInstance::new(caps, items)?))
        }
    }
}

/// A GAP instance whose options are all large for `δ = 1/2` (size
/// `3W/5`), so every resource takes at most one item and the problem is
/// edge-weighted bipartite matching. Weights are uniform in `[1, 1000]`.
pub fn matching_table(n: usize, m: usize, seed: u64) -> Result<GapInstance> {
    if n == 0 || m == 0 {
        return Err(Error::param("matching table needs n >= 1 and m >= 1"));
    }
    let mut rng = family_rng(seed);
    let items = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| GapOption::new(int(rng.random_range(1..=1000)), int(6)))
                .collect()
        })
        .collect();
    GapInstance::new(vec![int(10); m], items)
}
