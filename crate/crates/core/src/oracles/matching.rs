use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{common_denominator, scale_to_u64, serde_ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    /// `(row, column)` pairs: online item index and resource index.
    pub edges: BTreeSet<(usize, usize)>,
    #[serde(with = "serde_ratio")]
    pub weight: Rational,
}

/// Minimum-cost assignment of every row to a distinct column
/// (`rows <= cols`), by the Hungarian method with potentials.
/// Returns the column of each row.
fn hungarian_min(cost: &[Vec<i128>], cols: usize) -> Vec<usize> {
    let rows = cost.len();
    const INF: i128 = i128::MAX / 4;
    let mut u = vec![0i128; rows + 1];
    let mut v = vec![0i128; cols + 1];
    // owner[j]: row (1-based) assigned to column j, 0 if none.
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for i in 1..=rows {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; rows];
    for j in 1..=cols {
        if owner[j] != 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Maximum-weight matching on a table of non-negative integer weights.
/// Returns the matched column of each row; zero-weight edges are never
/// reported as matched.
pub fn max_weight_matching(weights: &[Vec<i128>]) -> Vec<Option<usize>> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    let mut out = vec![None; rows];
    if rows == 0 || cols == 0 {
        return out;
    }
    if rows <= cols {
        let cost: Vec<Vec<i128>> = weights
            .iter()
            .map(|r| r.iter().map(|&w| -w).collect())
            .collect();
        for (i, j) in hungarian_min(&cost, cols).into_iter().enumerate() {
            if weights[i][j] > 0 {
                out[i] = Some(j);
            }
        }
    } else {
        let cost: Vec<Vec<i128>> = (0..cols)
            .map(|j| (0..rows).map(|i| -weights[i][j]).collect())
            .collect();
        for (j, i) in hungarian_min(&cost, rows).into_iter().enumerate() {
            if weights[i][j] > 0 {
                out[i] = Some(j);
            }
        }
    }
    out
}

/// Maximum-weight matching of a rectangular table of non-negative rational
/// weights.
pub fn matching_opt(weights: &[Vec<Rational>]) -> Result<Matching> {
    let cols = weights.first().map_or(0, Vec::len);
    if weights.iter().any(|r| r.len() != cols) {
        return Err(Error::param("weight table must be rectangular"));
    }
    let scale = common_denominator(weights.iter().flatten());
    let flat = scale_to_u64(weights.iter().flatten(), &scale).ok_or_else(|| {
        Error::param("weights must be non-negative and fit machine integers after scaling")
    })?;
    let table: Vec<Vec<i128>> = flat
        .chunks(cols.max(1))
        .take(weights.len())
        .map(|c| c.iter().map(|&w| i128::from(w)).collect())
        .collect();
    let mut edges = BTreeSet::new();
    let mut total = BigInt::zero();
    for (i, j) in max_weight_matching(&table).into_iter().enumerate() {
        if let Some(j) = j {
            edges.insert((i, j));
            total += BigInt::from(table[i][j]);
        }
    }
    Ok(Matching {
        edges,
        weight: Rational::new(total, scale),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn table(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&w| int(w)).collect()).collect()
    }

    #[test]
    fn diagonal_dominant() {
        let m = matching_opt(&table(&[&[3, 1], &[1, 3]])).unwrap();
        assert_eq!(m.weight, int(6));
        assert_eq!(m.edges, BTreeSet::from([(0, 0), (1, 1)]));
    }

    #[test]
    fn all_zero_is_empty() {
        let m = matching_opt(&table(&[&[0, 0], &[0, 0], &[0, 0]])).unwrap();
        assert!(m.edges.is_empty());
        assert_eq!(m.weight, int(0));
    }

    #[test]
    fn more_rows_than_columns() {
        let m = matching_opt(&table(&[&[1], &[5], &[3]])).unwrap();
        assert_eq!(m.edges, BTreeSet::from([(1, 0)]));
        assert_eq!(m.weight, int(5));
    }

    #[test]
    fn rejects_ragged() {
        assert!(matching_opt(&table(&[&[1, 2], &[1]])).is_err());
    }

    #[test]
    fn empty_table() {
        assert_eq!(matching_opt(&[]).unwrap().weight, int(0));
    }
}
