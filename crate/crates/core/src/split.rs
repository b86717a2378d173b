//! Splitting an instance into its δ-large and δ-small views.
//!
//! Both views keep every item at its original position so that one arrival
//! order drives both. Items that do not belong to a view stay in it as
//! zero-profit placeholders: in the large view a small item becomes
//! `(size W, profit 0)`, in the small view a large item becomes
//! `(size δW, profit 0)`. GAP options are replaced the same way, per resource.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::{GapInstance, GapOption, KnapsackInstance, KnapsackItem};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPair<T> {
    pub large: T,
    pub small: T,
    pub delta: Rational,
}

pub(crate) fn check_delta(delta: &Rational) -> Result<()> {
    if delta <= &Rational::zero() || delta >= &Rational::one() {
        return Err(Error::param(format!("delta must lie in (0,1), got {delta}")));
    }
    Ok(())
}

/// `size > δ·capacity`. The boundary `size = δ·capacity` is small.
pub fn is_large(size: &Rational, capacity: &Rational, delta: &Rational) -> bool {
    size > &(delta * capacity)
}

pub fn classify_knapsack(
    instance: &KnapsackInstance,
    delta: &Rational,
) -> Result<SplitPair<KnapsackInstance>> {
    check_delta(delta)?;
    let w = instance.capacity();
    let small_placeholder = delta * w;
    let mut large = Vec::with_capacity(instance.n());
    let mut small = Vec::with_capacity(instance.n());
    for item in instance.items() {
        if is_large(&item.size, w, delta) {
            large.push(item.clone());
            small.push(KnapsackItem::new(item.id, small_placeholder.clone(), Rational::zero()));
        } else {
            large.push(KnapsackItem::new(item.id, w.clone(), Rational::zero()));
            small.push(item.clone());
        }
    }
    Ok(SplitPair {
        large: KnapsackInstance::new(w.clone(), large)?,
        small: KnapsackInstance::new(w.clone(), small)?,
        delta: delta.clone(),
    })
}

pub fn classify_gap(instance: &GapInstance, delta: &Rational) -> Result<SplitPair<GapInstance>> {
    check_delta(delta)?;
    let caps = instance.capacities();
    let mut large = Vec::with_capacity(instance.n());
    let mut small = Vec::with_capacity(instance.n());
    for options in instance.items() {
        let mut l = Vec::with_capacity(options.len());
        let mut s = Vec::with_capacity(options.len());
        for (opt, w) in options.iter().zip(caps) {
            if is_large(&opt.size, w, delta) {
                l.push(opt.clone());
                s.push(GapOption::new(Rational::zero(), delta * w));
            } else {
                l.push(GapOption::new(Rational::zero(), w.clone()));
                s.push(opt.clone());
            }
        }
        large.push(l);
        small.push(s);
    }
    Ok(SplitPair {
        large: GapInstance::new(caps.to_vec(), large)?,
        small: GapInstance::new(caps.to_vec(), small)?,
        delta: delta.clone(),
    })
}
