//! Exact revised simplex specialised to the GAP relaxation
//! `max Σ v·x` s.t. `Σ_i s_{i,r} x_{i,r} <= W_r` per resource and
//! `Σ_r x_{i,r} <= 1` per item.
//!
//! The per-item rows are handled as generalized upper bounds: every item
//! owns one *key* basic variable (an option or its slack) and the remaining
//! `m` basic variables form an `m x m` working matrix. Arithmetic is
//! fraction-free over `i128`: values are numerators over `D = |det|` of the
//! working matrix, obtained through its adjugate. Any overflow is reported so
//! the caller can fall back to the dense rational solver.
//!
//! Items may be appended after a solve. The previous optimal basis stays
//! feasible (the new item starts at its slack), so re-solving usually takes
//! a handful of pivots. Pivoting follows Bland's rule.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::Rational;

/// Arithmetic left the `i128` range, or the factorisation became
/// inconsistent. The basis should be reset before the next solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

type Res<T> = std::result::Result<T, Overflow>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Opt(u32),
    Slack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Cap(usize),
    Item(usize, Slot),
}

#[derive(Debug, Clone, Copy)]
struct Choice {
    resource: usize,
    profit: i128,
    size: i128,
}

#[derive(Debug, Clone)]
struct Item {
    choices: Vec<Choice>,
    /// Basic variables of this item; `basics[0]` is the key.
    basics: Vec<Slot>,
    /// Global index of the first choice, for Bland's ordering.
    base: usize,
}

#[derive(Debug, Clone)]
struct Factor {
    denom: i128,
    nonkeys: Vec<Var>,
    values: Vec<i128>,
}

#[derive(Debug, Clone)]
pub struct GapLp {
    capacity: Vec<i128>,
    items: Vec<Item>,
    next_index: usize,
    cap_basic: Vec<bool>,
    factor: Option<Factor>,
    pivots: u64,
}

fn add(a: i128, b: i128) -> Res<i128> {
    a.checked_add(b).ok_or(Overflow)
}

fn sub(a: i128, b: i128) -> Res<i128> {
    a.checked_sub(b).ok_or(Overflow)
}

fn mul(a: i128, b: i128) -> Res<i128> {
    a.checked_mul(b).ok_or(Overflow)
}

/// Determinant by Bareiss elimination.
fn determinant(mut a: Vec<Vec<i128>>) -> Res<i128> {
    let n = a.len();
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = sub(mul(a[i][j], a[k][k])?, mul(a[i][k], a[k][j])?)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Returns `(det, adj)` with `adj · a = det · I`.
fn adjugate(a: &[Vec<i128>]) -> Res<(i128, Vec<Vec<i128>>)> {
    let n = a.len();
    let det = determinant(a.to_vec())?;
    let mut adj = vec![vec![0i128; n]; n];
    if n == 1 {
        adj[0][0] = 1;
        return Ok((det, adj));
    }
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c]).collect())
                .collect();
            let d = determinant(minor)?;
            adj[i][j] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    Ok((det, adj))
}

/// `a/b < c/d` for positive `b`, `d`.
fn ratio_cmp(a: i128, b: i128, c: i128, d: i128) -> Ordering {
    match (a.checked_mul(d), c.checked_mul(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => (BigInt::from(a) * BigInt::from(d)).cmp(&(BigInt::from(c) * BigInt::from(b))),
    }
}

impl GapLp {
    /// Empty relaxation over resources with the given (positive, scaled)
    /// capacities.
    pub fn new(capacity: Vec<i128>) -> Self {
        let m = capacity.len();
        GapLp {
            capacity,
            items: Vec::new(),
            next_index: m,
            cap_basic: vec![true; m],
            factor: None,
            pivots: 0,
        }
    }

    pub fn m(&self) -> usize {
        self.capacity.len()
    }

    pub fn num_items(&self) -> usize {
        self.items.len()
    }

    /// Total pivots performed so far.
    pub fn pivots(&self) -> u64 {
        self.pivots
    }

    /// Appends an item given as `(resource, profit, size)` triples.
    /// Options with non-positive profit are dropped. Returns the item's index.
    pub fn push_item(&mut self, options: impl IntoIterator<Item = (usize, i128, i128)>) -> usize {
        let choices: Vec<Choice> = options
            .into_iter()
            .filter(|&(_, profit, _)| profit > 0)
            .map(|(resource, profit, size)| Choice {
                resource,
                profit,
                size,
            })
            .collect();
        let base = self.next_index;
        self.next_index += choices.len() + 1;
        self.items.push(Item {
            choices,
            basics: vec![Slot::Slack],
            base,
        });
        self.items.len() - 1
    }

    /// Returns every item to its slack and every capacity slack to the basis.
    pub fn reset_basis(&mut self) {
        for item in &mut self.items {
            item.basics = vec![Slot::Slack];
        }
        self.cap_basic.iter_mut().for_each(|b| *b = true);
        self.factor = None;
    }

    fn index(&self, var: Var) -> usize {
        match var {
            Var::Cap(r) => r,
            Var::Item(i, Slot::Opt(j)) => self.items[i].base + j as usize,
            Var::Item(i, Slot::Slack) => self.items[i].base + self.items[i].choices.len(),
        }
    }

    fn key_choice(&self, i: usize) -> Option<Choice> {
        match self.items[i].basics[0] {
            Slot::Opt(k) => Some(self.items[i].choices[k as usize]),
            Slot::Slack => None,
        }
    }

    /// Capacity-row column of `var` after eliminating its item's key.
    fn reduced_column(&self, var: Var) -> Vec<i128> {
        let mut col = vec![0i128; self.m()];
        match var {
            Var::Cap(r) => col[r] = 1,
            Var::Item(i, slot) => {
                if let Slot::Opt(j) = slot {
                    let ch = self.items[i].choices[j as usize];
                    col[ch.resource] += ch.size;
                }
                if let Some(k) = self.key_choice(i) {
                    col[k.resource] -= k.size;
                }
            }
        }
        col
    }

    fn reduced_cost(&self, var: Var) -> i128 {
        match var {
            Var::Cap(_) => 0,
            Var::Item(i, slot) => {
                let own = match slot {
                    Slot::Opt(j) => self.items[i].choices[j as usize].profit,
                    Slot::Slack => 0,
                };
                own - self.key_choice(i).map_or(0, |k| k.profit)
            }
        }
    }

    fn nonkeys(&self) -> Vec<Var> {
        let mut out: Vec<Var> = (0..self.m())
            .filter(|&r| self.cap_basic[r])
            .map(Var::Cap)
            .collect();
        for (i, item) in self.items.iter().enumerate() {
            out.extend(item.basics[1..].iter().map(|&s| Var::Item(i, s)));
        }
        out
    }

    fn factorise(&self) -> Res<(Factor, Vec<Vec<i128>>)> {
        let m = self.m();
        let nonkeys = self.nonkeys();
        if nonkeys.len() != m {
            return Err(Overflow);
        }
        let mut matrix = vec![vec![0i128; m]; m];
        for (c, &var) in nonkeys.iter().enumerate() {
            for (r, v) in self.reduced_column(var).into_iter().enumerate() {
                matrix[r][c] = v;
            }
        }
        let mut rhs = self.capacity.clone();
        for i in 0..self.items.len() {
            if let Some(k) = self.key_choice(i) {
                rhs[k.resource] = sub(rhs[k.resource], k.size)?;
            }
        }
        let (mut det, mut adj) = adjugate(&matrix)?;
        if det == 0 {
            return Err(Overflow);
        }
        if det < 0 {
            det = -det;
            for row in &mut adj {
                for v in row.iter_mut() {
                    *v = -*v;
                }
            }
        }
        let mut values = vec![0i128; m];
        for (c, value) in values.iter_mut().enumerate() {
            for r in 0..m {
                *value = add(*value, mul(adj[c][r], rhs[r])?)?;
            }
        }
        Ok((
            Factor {
                denom: det,
                nonkeys,
                values,
            },
            adj,
        ))
    }

    /// Solves to optimality from the current basis.
    pub fn solve(&mut self) -> Res<()> {
        let limit = 1_000_000 + 100 * self.next_index as u64;
        for _ in 0..limit {
            if self.pivot_once()? {
                return Ok(());
            }
        }
        Err(Overflow)
    }

    /// One Bland pivot; `Ok(true)` when the basis is already optimal.
    fn pivot_once(&mut self) -> Res<bool> {
        let m = self.m();
        let (factor, adj) = self.factorise()?;
        let d = factor.denom;

        // Duals scaled by D: Π = adjᵀ c_N.
        let mut duals = vec![0i128; m];
        for (c, &var) in factor.nonkeys.iter().enumerate() {
            let cost = self.reduced_cost(var);
            if cost == 0 {
                continue;
            }
            for (r, dual) in duals.iter_mut().enumerate() {
                *dual = add(*dual, mul(adj[c][r], cost)?)?;
            }
        }

        let entering = self.price(&duals, d)?;
        let Some(entering) = entering else {
            self.factor = Some(factor);
            return Ok(true);
        };

        // Direction of the non-key basics (scaled by D): -adj · ĝ.
        let g = self.reduced_column(entering);
        let mut dz = vec![0i128; m];
        for (c, v) in dz.iter_mut().enumerate() {
            for (r, &gr) in g.iter().enumerate() {
                if gr != 0 {
                    *v = sub(*v, mul(adj[c][r], gr)?)?;
                }
            }
        }

        // Key values and their directions, for items holding non-keys.
        let entering_item = match entering {
            Var::Item(p, _) => Some(p),
            Var::Cap(_) => None,
        };
        let mut keys: Vec<(usize, i128, i128)> = Vec::new();
        let touch = |keys: &mut Vec<(usize, i128, i128)>, i: usize, z: i128, dzv: i128| -> Res<()> {
            match keys.iter_mut().find(|k| k.0 == i) {
                Some(k) => {
                    k.1 = sub(k.1, z)?;
                    k.2 = sub(k.2, dzv)?;
                }
                None => keys.push((i, sub(d, z)?, sub(0, dzv)?)),
            }
            Ok(())
        };
        for (c, &var) in factor.nonkeys.iter().enumerate() {
            if let Var::Item(i, _) = var {
                touch(&mut keys, i, factor.values[c], dz[c])?;
            }
        }
        if let Some(p) = entering_item {
            touch(&mut keys, p, 0, d)?;
        }

        // Ratio test, ties to the smallest variable index.
        let mut best: Option<(i128, i128, Var)> = None;
        let consider = |best: &mut Option<(i128, i128, Var)>, value: i128, step: i128, var: Var| {
            if step >= 0 {
                return;
            }
            let step = -step;
            let replace = match best {
                None => true,
                Some((bv, bs, bvar)) => match ratio_cmp(value, step, *bv, *bs) {
                    Ordering::Less => true,
                    Ordering::Equal => self.index(var) < self.index(*bvar),
                    Ordering::Greater => false,
                },
            };
            if replace {
                *best = Some((value, step, var));
            }
        };
        for (c, &var) in factor.nonkeys.iter().enumerate() {
            consider(&mut best, factor.values[c], dz[c], var);
        }
        for &(i, value, step) in &keys {
            consider(&mut best, value, step, Var::Item(i, self.items[i].basics[0]));
        }
        let Some((_, _, leaving)) = best else {
            return Err(Overflow);
        };

        match entering {
            Var::Cap(r) => self.cap_basic[r] = true,
            Var::Item(p, slot) => self.items[p].basics.push(slot),
        }
        match leaving {
            Var::Cap(r) => self.cap_basic[r] = false,
            Var::Item(q, slot) => {
                let basics = &mut self.items[q].basics;
                let pos = basics.iter().position(|&s| s == slot).ok_or(Overflow)?;
                basics.remove(pos);
            }
        }
        self.factor = None;
        self.pivots += 1;
        Ok(false)
    }

    /// First variable (by index) with positive reduced cost.
    fn price(&self, duals: &[i128], d: i128) -> Res<Option<Var>> {
        for (r, &dual) in duals.iter().enumerate() {
            if !self.cap_basic[r] && dual < 0 {
                return Ok(Some(Var::Cap(r)));
            }
        }
        for (i, item) in self.items.iter().enumerate() {
            let mu = match self.key_choice(i) {
                Some(k) => sub(mul(d, k.profit)?, mul(duals[k.resource], k.size)?)?,
                None => 0,
            };
            for (j, ch) in item.choices.iter().enumerate() {
                let slot = Slot::Opt(j as u32);
                if item.basics.contains(&slot) {
                    continue;
                }
                let dd = sub(sub(mul(d, ch.profit)?, mul(duals[ch.resource], ch.size)?)?, mu)?;
                if dd > 0 {
                    return Ok(Some(Var::Item(i, slot)));
                }
            }
            if !item.basics.contains(&Slot::Slack) && mu < 0 {
                return Ok(Some(Var::Item(i, Slot::Slack)));
            }
        }
        Ok(None)
    }

    /// Values of item `i`'s variables at the last optimum, as numerators
    /// per resource over the returned denominator. `None` before a solve.
    pub fn item_values(&self, i: usize) -> Option<(Vec<i128>, i128)> {
        let factor = self.factor.as_ref()?;
        let item = &self.items[i];
        let mut out = vec![0i128; self.m()];
        let mut key_value = factor.denom;
        for (c, &var) in factor.nonkeys.iter().enumerate() {
            if let Var::Item(q, Slot::Opt(j)) = var {
                if q == i {
                    out[item.choices[j as usize].resource] += factor.values[c];
                }
            }
            if let Var::Item(q, _) = var {
                if q == i {
                    key_value -= factor.values[c];
                }
            }
        }
        if let Slot::Opt(k) = item.basics[0] {
            out[item.choices[k as usize].resource] += key_value;
        }
        Some((out, factor.denom))
    }

    /// Objective value at the last optimum, in the scaled profit units.
    pub fn objective(&self) -> Option<Rational> {
        let factor = self.factor.as_ref()?;
        let mut total = BigInt::zero();
        for i in 0..self.items.len() {
            let (values, _) = self.item_values(i)?;
            for ch in &self.items[i].choices {
                let v = values[ch.resource];
                if v != 0 {
                    total += BigInt::from(v) * BigInt::from(ch.profit);
                }
            }
        }
        Some(Rational::new(total, BigInt::from(factor.denom)))
    }
}
