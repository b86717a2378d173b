//! Seeded arrival orders.
//!
//! Every trial owns two ChaCha8 streams keyed by the experiment seed: stream
//! `2t` shuffles the arrival order of trial `t` and stream `2t + 1` feeds the
//! algorithms' coin flips. Trials therefore share no generator state and can
//! run in any order or in parallel.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type TrialRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    /// `order[l]` is the index (into the instance's item list) of the item
    /// arriving in round `l + 1`.
    pub order: Vec<u32>,
    pub seed: u64,
    pub trial_index: u64,
}

impl Permutation {
    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Fixed arrival order, for tests and replaying a recorded sequence.
    pub fn from_order(order: Vec<u32>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| Error::param(format!("index {i} out of range for n = {n}")))?;
            if *slot {
                return Err(Error::param(format!("index {i} appears twice")));
            }
            *slot = true;
        }
        Ok(Permutation {
            order,
            seed: 0,
            trial_index: 0,
        })
    }
}

fn stream(seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform random order of `0..n`, determined by `(seed, trial_index)`.
pub fn random_permutation(n: usize, seed: u64, trial_index: u64) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::param("permutation length must be at least 1"));
    }
    let n32 = u32::try_from(n).map_err(|_| Error::param("too many items"))?;
    let mut order: Vec<u32> = (0..n32).collect();
    order.shuffle(&mut stream(seed, trial_index.wrapping_mul(2)));
    Ok(Permutation {
        order,
        seed,
        trial_index,
    })
}

/// The coin-flip stream of trial `trial_index`.
pub fn coin_rng(seed: u64, trial_index: u64) -> TrialRng {
    stream(seed, trial_index.wrapping_mul(2).wrapping_add(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_item() {
        for t in 0..5 {
            assert_eq!(random_permutation(1, 7, t).unwrap().order, vec![0]);
        }
    }

    #[test]
    fn deterministic_in_seed_and_trial() {
        let a = random_permutation(50, 11, 3).unwrap();
        let b = random_permutation(50, 11, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.order, random_permutation(50, 11, 4).unwrap().order);
        assert_ne!(a.order, random_permutation(50, 12, 3).unwrap().order);
    }

    #[test]
    fn zero_length_rejected() {
        assert!(matches!(random_permutation(0, 1, 1), Err(Error::Parameter(_))));
    }

    #[test]
    fn from_order_validates() {
        assert!(Permutation::from_order(vec![1, 0, 2]).is_ok());
        assert!(Permutation::from_order(vec![1, 1]).is_err());
        assert!(Permutation::from_order(vec![0, 2]).is_err());
    }
}
