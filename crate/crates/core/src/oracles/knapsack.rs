use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::SolverCaps;
use crate::error::{Error, Result};
use crate::instance::{KnapsackInstance, KnapsackItem};
use crate::rational::{common_denominator, scale_to_u64, serde_ratio, Rational};

/// Indices of `items` by non-increasing density `profit / size`, equal
/// densities by ascending id.
pub fn density_order(items: &[KnapsackItem]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let (ia, ib) = (&items[a], &items[b]);
        (&ib.profit * &ia.size)
            .cmp(&(&ia.profit * &ib.size))
            .then(ia.id.cmp(&ib.id))
    });
    order
}

/// Greedy fractional packing: coefficients by item id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalSolution {
    pub coefficients: BTreeMap<u32, Rational>,
    pub value: Rational,
}

impl FractionalSolution {
    pub fn coefficient(&self, id: u32) -> Rational {
        self.coefficients.get(&id).cloned().unwrap_or_else(Rational::zero)
    }
}

/// The optimal fractional packing: the densest items are taken whole until
/// the next one no longer fits, which is then taken fractionally.
pub fn knapsack_opt_fractional(instance: &KnapsackInstance) -> FractionalSolution {
    let items = instance.items();
    let mut remaining = instance.capacity().clone();
    let mut coefficients = BTreeMap::new();
    let mut value = Rational::zero();
    for idx in density_order(items) {
        let item = &items[idx];
        let alpha = if remaining.is_zero() {
            Rational::zero()
        } else if item.size <= remaining {
            Rational::one()
        } else {
            &remaining / &item.size
        };
        remaining -= &alpha * &item.size;
        value += &alpha * &item.profit;
        coefficients.insert(item.id, alpha);
    }
    FractionalSolution {
        coefficients,
        value,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnapsackOptimum {
    #[serde(with = "serde_ratio")]
    pub value: Rational,
    pub chosen: BTreeSet<u32>,
}

/// Exact 0/1 knapsack by depth-first branch and bound over the density
/// order, pruning with the fractional greedy bound.
pub fn knapsack_opt_integral(
    instance: &KnapsackInstance,
    caps: &SolverCaps,
) -> Result<KnapsackOptimum> {
    if instance.n() > caps.knapsack_max_items {
        return Err(Error::capability(format!(
            "{} items exceed the exact knapsack cap of {}; use the fractional bound instead",
            instance.n(),
            caps.knapsack_max_items
        )));
    }
    let items = instance.items();
    let useful: Vec<usize> = density_order(items)
        .into_iter()
        .filter(|&i| !items[i].profit.is_zero())
        .collect();

    let size_scale = common_denominator(
        std::iter::once(instance.capacity()).chain(items.iter().map(|i| &i.size)),
    );
    let profit_scale = common_denominator(items.iter().map(|i| &i.profit));
    let too_big = || Error::capability("instance numbers too large for the exact knapsack solver");
    let sizes = scale_to_u64(useful.iter().map(|&i| &items[i].size), &size_scale).ok_or_else(too_big)?;
    let profits =
        scale_to_u64(useful.iter().map(|&i| &items[i].profit), &profit_scale).ok_or_else(too_big)?;
    let capacity = scale_to_u64([instance.capacity()], &size_scale).ok_or_else(too_big)?[0];

    let mut search = BranchAndBound {
        sizes: sizes.into_iter().map(i128::from).collect(),
        profits: profits.into_iter().map(i128::from).collect(),
        best: 0,
        best_set: Vec::new(),
        current: Vec::new(),
    };
    search.descend(0, i128::from(capacity), 0);

    let chosen = search.best_set.iter().map(|&k| items[useful[k]].id).collect();
    let value = Rational::new(BigInt::from(search.best), profit_scale);
    Ok(KnapsackOptimum { value, chosen })
}

struct BranchAndBound {
    sizes: Vec<i128>,
    profits: Vec<i128>,
    best: i128,
    best_set: Vec<usize>,
    current: Vec<usize>,
}

impl BranchAndBound {
    /// True if the fractional relaxation over items `k..` can beat `best`.
    fn promising(&self, k: usize, room: i128, value: i128) -> bool {
        let mut room = room;
        let mut acc = value;
        for j in k..self.sizes.len() {
            if self.sizes[j] <= room {
                room -= self.sizes[j];
                acc += self.profits[j];
            } else {
                // acc + profit_j * room / size_j > best
                return (acc - self.best) * self.sizes[j] + self.profits[j] * room > 0;
            }
        }
        acc > self.best
    }

    fn descend(&mut self, k: usize, room: i128, value: i128) {
        if value > self.best {
            self.best = value;
            self.best_set = self.current.clone();
        }
        if k == self.sizes.len() || !self.promising(k, room, value) {
            return;
        }
        if self.sizes[k] <= room {
            self.current.push(k);
            self.descend(k + 1, room - self.sizes[k], value + self.profits[k]);
            self.current.pop();
        }
        self.descend(k + 1, room, value);
    }
}
