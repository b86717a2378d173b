//! Knapsack and GAP instances, their JSON form, and the profit rank order.

use std::collections::HashSet;
use std::path::Path;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{serde_ratio, serde_ratio_vec, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackItem {
    pub id: u32,
    #[serde(with = "serde_ratio")]
    pub size: Rational,
    #[serde(with = "serde_ratio")]
    pub profit: Rational,
}

impl KnapsackItem {
    pub fn new(id: u32, size: Rational, profit: Rational) -> Self {
        KnapsackItem { id, size, profit }
    }
}

/// A validated knapsack instance. Items keep their input order; a
/// [`Permutation`](crate::perm::Permutation) indexes into that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    capacity: Rational,
    items: Vec<KnapsackItem>,
}

impl KnapsackInstance {
    pub fn new(capacity: Rational, items: Vec<KnapsackItem>) -> Result<Self> {
        if !capacity.is_positive() {
            return Err(Error::param("knapsack capacity must be positive"));
        }
        let mut seen = HashSet::with_capacity(items.len());
        for item in &items {
            if !seen.insert(item.id) {
                return Err(Error::param(format!("duplicate item id {}", item.id)));
            }
            if !item.size.is_positive() {
                return Err(Error::param(format!("item {} has non-positive size", item.id)));
            }
            if item.profit.is_negative() {
                return Err(Error::param(format!("item {} has negative profit", item.id)));
            }
            if item.size > capacity {
                return Err(Error::param(format!(
                    "item {} is larger than the knapsack",
                    item.id
                )));
            }
        }
        Ok(KnapsackInstance { capacity, items })
    }

    pub fn capacity(&self) -> &Rational {
        &self.capacity
    }

    pub fn items(&self) -> &[KnapsackItem] {
        &self.items
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn total_size(&self) -> Rational {
        self.items.iter().map(|i| &i.size).sum()
    }
}

/// One `(profit, size)` choice of a GAP item for a single resource.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapOption {
    #[serde(with = "serde_ratio")]
    pub profit: Rational,
    #[serde(with = "serde_ratio")]
    pub size: Rational,
}

impl GapOption {
    pub fn new(profit: Rational, size: Rational) -> Self {
        GapOption { profit, size }
    }
}

/// A validated GAP instance. Item `i` has id `i` and exactly one option
/// per resource; missing options are expressed as zero-profit dummies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapInstance {
    capacities: Vec<Rational>,
    items: Vec<Vec<GapOption>>,
}

impl GapInstance {
    pub fn new(capacities: Vec<Rational>, items: Vec<Vec<GapOption>>) -> Result<Self> {
        if capacities.is_empty() {
            return Err(Error::param("GAP instance needs at least one resource"));
        }
        if let Some(r) = capacities.iter().position(|w| !w.is_positive()) {
            return Err(Error::param(format!("resource {r} has non-positive capacity")));
        }
        let m = capacities.len();
        for (i, options) in items.iter().enumerate() {
            if options.len() != m {
                return Err(Error::param(format!(
                    "item {i} has {} options, expected one per resource ({m})",
                    options.len()
                )));
            }
            for (r, opt) in options.iter().enumerate() {
                if !opt.size.is_positive() {
                    return Err(Error::param(format!("option ({i},{r}) has non-positive size")));
                }
                if opt.profit.is_negative() {
                    return Err(Error::param(format!("option ({i},{r}) has negative profit")));
                }
                if opt.size > capacities[r] {
                    return Err(Error::param(format!(
                        "option ({i},{r}) is larger than resource {r}"
                    )));
                }
            }
        }
        Ok(GapInstance { capacities, items })
    }

    pub fn capacities(&self) -> &[Rational] {
        &self.capacities
    }

    pub fn items(&self) -> &[Vec<GapOption>] {
        &self.items
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn m(&self) -> usize {
        self.capacities.len()
    }

    pub fn option(&self, item: usize, resource: usize) -> &GapOption {
        &self.items[item][resource]
    }
}

/// Item ids ordered by decreasing profit, equal profits by ascending id.
/// The position of an id in this list is its rank (0-based).
pub fn rank_order(items: &[KnapsackItem]) -> Vec<u32> {
    let mut order: Vec<&KnapsackItem> = items.iter().collect();
    order.sort_by(|a, b| b.profit.cmp(&a.profit).then(a.id.cmp(&b.id)));
    order.into_iter().map(|item| item.id).collect()
}

/// On-disk instance schema, tagged by `"type"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum InstanceFile {
    Knapsack {
        #[serde(with = "serde_ratio")]
        capacity: Rational,
        items: Vec<KnapsackItem>,
    },
    Gap {
        #[serde(with = "serde_ratio_vec")]
        capacities: Vec<Rational>,
        items: Vec<Vec<GapOption>>,
    },
}

/// Either kind of instance, as read from or written to JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Knapsack(KnapsackInstance),
    Gap(GapInstance),
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self> {
        match serde_json::from_str::<InstanceFile>(text)? {
            InstanceFile::Knapsack { capacity, items } => {
                KnapsackInstance::new(capacity, items).map(Instance::Knapsack)
            }
            InstanceFile::Gap { capacities, items } => {
                GapInstance::new(capacities, items).map(Instance::Gap)
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let file = match self {
            Instance::Knapsack(k) => InstanceFile::Knapsack {
                capacity: k.capacity.clone(),
                items: k.items.clone(),
            },
            Instance::Gap(g) => InstanceFile::Gap {
                capacities: g.capacities.clone(),
                items: g.items.clone(),
            },
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::Knapsack(k) => k.n(),
            Instance::Gap(g) => g.n(),
        }
    }

    pub fn as_knapsack(&self) -> Option<&KnapsackInstance> {
        match self {
            Instance::Knapsack(k) => Some(k),
            Instance::Gap(_) => None,
        }
    }

    pub fn as_gap(&self) -> Option<&GapInstance> {
        match self {
            Instance::Gap(g) => Some(g),
            Instance::Knapsack(_) => None,
        }
    }
}

/// True if every item has zero profit (nothing can be gained).
pub fn all_zero_profit(items: &[KnapsackItem]) -> bool {
    items.iter().all(|i| i.profit.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn item(id: u32, size: i64, profit: i64) -> KnapsackItem {
        KnapsackItem::new(id, int(size), int(profit))
    }

    #[test]
    fn rank_order_breaks_ties_by_id() {
        let items = vec![item(0, 1, 5), item(1, 1, 3), item(2, 1, 5)];
        assert_eq!(rank_order(&items), vec![0, 2, 1]);
        let decreasing = vec![item(0, 1, 9), item(1, 1, 4), item(2, 1, 1)];
        assert_eq!(rank_order(&decreasing), vec![0, 1, 2]);
        let equal = vec![item(3, 1, 2), item(1, 1, 2), item(2, 1, 2)];
        assert_eq!(rank_order(&equal), vec![1, 2, 3]);
    }

    #[test]
    fn rejects_invalid_knapsacks() {
        assert!(KnapsackInstance::new(int(0), vec![]).is_err());
        assert!(KnapsackInstance::new(int(5), vec![item(0, 6, 1)]).is_err());
        assert!(KnapsackInstance::new(int(5), vec![item(0, 0, 1)]).is_err());
        assert!(KnapsackInstance::new(int(5), vec![item(0, 1, -1)]).is_err());
        assert!(KnapsackInstance::new(int(5), vec![item(0, 1, 1), item(0, 2, 1)]).is_err());
    }

    #[test]
    fn rejects_ragged_gap() {
        let caps = vec![int(10), int(10)];
        let items = vec![vec![GapOption::new(int(1), int(1))]];
        assert!(matches!(GapInstance::new(caps, items), Err(Error::Parameter(_))));
    }

    #[test]
    fn json_schema_matches_documented_form() {
        let text = r#"{"type":"knapsack","capacity":"9/1","items":[{"id":0,"size":"3/1","profit":"1/1"},{"id":1,"size":"4/1","profit":"2/1"}]}"#;
        let inst = Instance::from_json(text).unwrap();
        let k = inst.as_knapsack().unwrap();
        assert_eq!(k.capacity(), &int(9));
        assert_eq!(k.items()[1].profit, int(2));
        assert_eq!(inst.to_json().unwrap(), text);

        let gap = r#"{"type":"gap","capacities":["10/1","7/2"],"items":[[{"profit":"5/1","size":"4/1"},{"profit":"0/1","size":"7/2"}]]}"#;
        let inst = Instance::from_json(gap).unwrap();
        assert_eq!(inst.as_gap().unwrap().capacities()[1], ratio(7, 2));
        assert_eq!(inst.to_json().unwrap(), gap);
    }

    #[test]
    fn json_validation_runs() {
        let text = r#"{"type":"knapsack","capacity":"2/1","items":[{"id":0,"size":"3/1","profit":"1/1"}]}"#;
        assert!(matches!(Instance::from_json(text), Err(Error::Parameter(_))));
        let text = r#"{"type":"knapsack","capacity":"x","items":[]}"#;
        assert!(Instance::from_json(text).is_err());
    }
}
