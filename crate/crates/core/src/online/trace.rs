//! Round-by-round records of a run.
//!
//! Residual capacities are kept as integers in the run's scaled units and
//! converted back to rationals on demand (and in the JSON form).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Sampled,
    Rejected,
    Packed,
    BlockedCapacity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    /// Decision of each round, round `l` at index `l - 1`.
    pub decisions: Vec<Decision>,
    /// Ids of packed items, in packing order.
    pub packed_ids: Vec<u32>,
    pub profit: Rational,
    /// Rounds (1-based) whose packing probability lay strictly in (0,1).
    pub coin_rounds: Vec<usize>,
    /// Round in which the first item was packed, `None` if never.
    pub empty_after: Option<usize>,
    pub(crate) residual_scaled: Vec<u64>,
    pub(crate) size_scale: BigInt,
}

impl RunTrace {
    pub fn n(&self) -> usize {
        self.decisions.len()
    }

    /// Residual capacity after round `round` (1-based).
    pub fn residual_after(&self, round: usize) -> Rational {
        Rational::new(self.residual_scaled[round - 1].into(), self.size_scale.clone())
    }

    pub fn residuals(&self) -> Vec<Rational> {
        (1..=self.n()).map(|l| self.residual_after(l)).collect()
    }

    /// True if no item was packed in rounds `1..=round`.
    pub fn empty_through(&self, round: usize) -> bool {
        self.empty_after.is_none_or(|first| first > round)
    }
}

impl Serialize for RunTrace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let residual: Vec<String> = self.residuals().iter().map(format_rational).collect();
        let mut st = s.serialize_struct("RunTrace", 6)?;
        st.serialize_field("decisions", &self.decisions)?;
        st.serialize_field("packed_ids", &self.packed_ids)?;
        st.serialize_field("profit", &format_rational(&self.profit))?;
        st.serialize_field("residual", &residual)?;
        st.serialize_field("coin_rounds", &self.coin_rounds)?;
        st.serialize_field("empty_after", &self.empty_after)?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapDecision {
    Sampled,
    Rejected,
    Assigned(usize),
    BlockedCapacity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentTrace {
    pub decisions: Vec<GapDecision>,
    /// Resource of each assigned item id.
    pub assignment: BTreeMap<u32, usize>,
    pub profit: Rational,
    /// Rounds (1-based) whose resource draw was strictly randomized.
    pub coin_rounds: Vec<usize>,
    /// First round in which each resource received an item, `None` if never.
    pub first_assigned: Vec<Option<usize>>,
    /// `m` residuals per round, row-major.
    pub(crate) residual_scaled: Vec<u64>,
    pub(crate) size_scales: Vec<BigInt>,
}

impl AssignmentTrace {
    pub fn n(&self) -> usize {
        self.decisions.len()
    }

    pub fn m(&self) -> usize {
        self.size_scales.len()
    }

    /// Residual of `resource` after round `round` (1-based).
    pub fn residual_after(&self, round: usize, resource: usize) -> Rational {
        let v = self.residual_scaled[(round - 1) * self.m() + resource];
        Rational::new(v.into(), self.size_scales[resource].clone())
    }

    /// True if `resource` received nothing in rounds `1..=round`.
    pub fn unassigned_through(&self, resource: usize, round: usize) -> bool {
        self.first_assigned[resource].is_none_or(|first| first > round)
    }
}

impl Serialize for AssignmentTrace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let residuals: Vec<Vec<String>> = (1..=self.n())
            .map(|l| {
                (0..self.m())
                    .map(|r| format_rational(&self.residual_after(l, r)))
                    .collect()
            })
            .collect();
        let mut st = s.serialize_struct("AssignmentTrace", 6)?;
        st.serialize_field("decisions", &self.decisions)?;
        st.serialize_field("assignment", &self.assignment)?;
        st.serialize_field("profit", &format_rational(&self.profit))?;
        st.serialize_field("residuals", &residuals)?;
        st.serialize_field("coin_rounds", &self.coin_rounds)?;
        st.serialize_field("first_assigned", &self.first_assigned)?;
        st.end()
    }
}
