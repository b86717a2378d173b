use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::gap_lp::GapLp;
use super::simplex::{maximize, LinearProgram};
use super::SolverCaps;
use crate::error::{Error, Result};
use crate::instance::GapInstance;
use crate::rational::{common_denominator, scale_to_u64, serde_ratio, Rational};

/// Optimal solution of the GAP relaxation; `x[(i, r)]` is the fraction of
/// item `i` placed on resource `r` (absent entries are zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapFractionalSolution {
    pub x: BTreeMap<(u32, usize), Rational>,
    pub value: Rational,
}

impl GapFractionalSolution {
    pub fn coefficient(&self, item: u32, resource: usize) -> Rational {
        self.x
            .get(&(item, resource))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

/// The relaxation as a dense LP; variable `i * m + r` is `x_{i,r}`.
pub fn gap_lp1(instance: &GapInstance) -> LinearProgram {
    let (n, m) = (instance.n(), instance.m());
    let vars = n * m;
    let mut objective = vec![Rational::zero(); vars];
    let mut rows = Vec::with_capacity(m + n);
    let mut rhs = Vec::with_capacity(m + n);
    for (r, w) in instance.capacities().iter().enumerate() {
        let mut row = vec![Rational::zero(); vars];
        for i in 0..n {
            row[i * m + r] = instance.option(i, r).size.clone();
        }
        rows.push(row);
        rhs.push(w.clone());
    }
    for i in 0..n {
        let mut row = vec![Rational::zero(); vars];
        for r in 0..m {
            objective[i * m + r] = instance.option(i, r).profit.clone();
            row[i * m + r] = Rational::from_integer(1.into());
        }
        rows.push(row);
        rhs.push(Rational::from_integer(1.into()));
    }
    LinearProgram {
        objective,
        rows,
        rhs,
    }
}

/// Integer views of an instance for [`GapLp`]: each capacity row is scaled
/// by its own common denominator, profits by theirs.
pub(crate) struct ScaledGap {
    pub capacity: Vec<i128>,
    pub sizes: Vec<Vec<i128>>,
    pub profits: Vec<Vec<i128>>,
    pub profit_scale: BigInt,
}

pub(crate) fn scale_gap(instance: &GapInstance) -> Option<ScaledGap> {
    let (n, m) = (instance.n(), instance.m());
    let mut capacity = Vec::with_capacity(m);
    let mut sizes = vec![vec![0i128; m]; n];
    for r in 0..m {
        let column = || {
            std::iter::once(&instance.capacities()[r])
                .chain((0..n).map(move |i| &instance.option(i, r).size))
        };
        let scale = common_denominator(column());
        let scaled = scale_to_u64(column(), &scale)?;
        capacity.push(i128::from(scaled[0]));
        for i in 0..n {
            sizes[i][r] = i128::from(scaled[i + 1]);
        }
    }
    let profit_scale = common_denominator(instance.items().iter().flatten().map(|o| &o.profit));
    let flat = scale_to_u64(instance.items().iter().flatten().map(|o| &o.profit), &profit_scale)?;
    let profits = flat
        .chunks(m.max(1))
        .map(|c| c.iter().map(|&v| i128::from(v)).collect())
        .collect();
    Some(ScaledGap {
        capacity,
        sizes,
        profits,
        profit_scale,
    })
}

fn solve_structured(instance: &GapInstance) -> Option<GapFractionalSolution> {
    let scaled = scale_gap(instance)?;
    let m = instance.m();
    let mut lp = GapLp::new(scaled.capacity.clone());
    for i in 0..instance.n() {
        lp.push_item((0..m).map(|r| (r, scaled.profits[i][r], scaled.sizes[i][r])));
    }
    lp.solve().ok()?;
    let mut x = BTreeMap::new();
    for i in 0..instance.n() {
        let (values, denom) = lp.item_values(i)?;
        for (r, v) in values.into_iter().enumerate() {
            if v != 0 {
                x.insert((i as u32, r), Rational::new(v.into(), denom.into()));
            }
        }
    }
    let value = lp.objective()? / Rational::from_integer(scaled.profit_scale);
    Some(GapFractionalSolution { x, value })
}

fn solve_dense(instance: &GapInstance) -> GapFractionalSolution {
    let m = instance.m();
    let sol = maximize(&gap_lp1(instance)).expect("the GAP relaxation is feasible and bounded");
    let x = sol
        .x
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (((k / m) as u32, k % m), v))
        .collect();
    GapFractionalSolution {
        x,
        value: sol.value,
    }
}

/// Optimal fractional assignment by exact simplex. Uses the structured
/// integer solver when the data scale to machine integers, otherwise the
/// dense rational tableau.
pub fn gap_opt_fractional(instance: &GapInstance) -> GapFractionalSolution {
    solve_structured(instance).unwrap_or_else(|| solve_dense(instance))
}

/// Dense-tableau route, kept public for cross-checking.
pub fn gap_opt_fractional_dense(instance: &GapInstance) -> GapFractionalSolution {
    solve_dense(instance)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapIntegralSolution {
    #[serde(with = "serde_ratio")]
    pub value: Rational,
    /// Resource of each item, `None` if unassigned.
    pub assignment: Vec<Option<usize>>,
}

/// Exact optimum by exhaustive enumeration of all `(m + 1)^n` assignments,
/// pruning branches that already exceed a capacity.
pub fn gap_opt_integral(instance: &GapInstance, caps: &SolverCaps) -> Result<GapIntegralSolution> {
    let (n, m) = (instance.n(), instance.m());
    let count = BigInt::from(m + 1).pow(n as u32);
    if count.to_u64().is_none_or(|c| c > caps.gap_max_assignments) {
        return Err(Error::capability(format!(
            "({m} + 1)^{n} assignments exceed the enumeration cap of {}",
            caps.gap_max_assignments
        )));
    }
    let mut search = Enumeration {
        instance,
        loads: vec![Rational::zero(); m],
        current: vec![None; n],
        best: GapIntegralSolution {
            value: Rational::zero(),
            assignment: vec![None; n],
        },
    };
    search.descend(0, Rational::zero());
    Ok(search.best)
}

struct Enumeration<'a> {
    instance: &'a GapInstance,
    loads: Vec<Rational>,
    current: Vec<Option<usize>>,
    best: GapIntegralSolution,
}

impl Enumeration<'_> {
    fn descend(&mut self, i: usize, value: Rational) {
        if i == self.instance.n() {
            if value > self.best.value {
                self.best.value = value;
                self.best.assignment = self.current.clone();
            }
            return;
        }
        self.current[i] = None;
        self.descend(i + 1, value.clone());
        for r in 0..self.instance.m() {
            let opt = self.instance.option(i, r);
            let load = &self.loads[r] + &opt.size;
            if load > self.instance.capacities()[r] {
                continue;
            }
            let previous = std::mem::replace(&mut self.loads[r], load);
            self.current[i] = Some(r);
            self.descend(i + 1, &value + &opt.profit);
            self.loads[r] = previous;
        }
        self.current[i] = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::GapOption;
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

    #[test]
    fn single_item_single_resource() {
        let inst = gap(&[10], &[&[(7, 4)]]);
        let sol = gap_opt_fractional(&inst);
        assert_eq!(sol.coefficient(0, 0), int(1));
        assert_eq!(sol.value, int(7));
        let opt = gap_opt_integral(&inst, &SolverCaps::default()).unwrap();
        assert_eq!(opt.assignment, vec![Some(0)]);
    }

    #[test]
    fn one_resource_is_fractional_knapsack() {
        let inst = gap(&[10], &[&[(12, 6)], &[(6, 6)]]);
        let sol = gap_opt_fractional(&inst);
        assert_eq!(sol.value, int(16));
        assert_eq!(sol.coefficient(1, 0), ratio(2, 3));
    }

    #[test]
    fn structured_and_dense_agree() {
        let inst = gap(
            &[7, 9],
            &[&[(5, 4), (3, 2)], &[(6, 5), (2, 6)], &[(4, 3), (7, 7)], &[(3, 1), (0, 1)]],
        );
        let a = gap_opt_fractional(&inst);
        let b = gap_opt_fractional_dense(&inst);
        assert_eq!(a.value, b.value);
        assert!(gap_lp1(&inst).is_feasible(
            &(0..8).map(|k| a.coefficient((k / 2) as u32, k % 2)).collect::<Vec<_>>()
        ));
    }

    #[test]
    fn integral_below_fractional() {
        let inst = gap(&[5, 5], &[&[(4, 3), (4, 3)], &[(4, 3), (4, 3)], &[(4, 3), (4, 3)]]);
        let opt = gap_opt_integral(&inst, &SolverCaps::default()).unwrap();
        assert_eq!(opt.value, int(8));
        assert!(gap_opt_fractional(&inst).value >= opt.value);
    }

    #[test]
    fn enumeration_cap() {
        let rows: Vec<&[(i64, i64)]> = vec![&[(1, 1), (1, 1)]; 14];
        let inst = gap(&[5, 5], &rows);
        assert!(matches!(
            gap_opt_integral(&inst, &SolverCaps::default()),
            Err(Error::Capability(_))
        ));
    }
}
