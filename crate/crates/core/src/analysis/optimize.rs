//! Parameter search for the phase parameters `(c, d)`.
//!
//! The guarantee is the minimum of two bounds, so its maximum sits on the
//! ridge where they cross and is very flat along it. A plain lattice
//! search stalls there (off-ridge lattice points lose more than moving
//! along the ridge gains), so the search profiles instead: for each `c` the
//! best `d` is found by a grid scan followed by golden-section refinement,
//! and the profile `c -> max_d` is maximized the same way.

use rayon::prelude::*;
use serde::Serialize;

use super::bounds::{case_bounds, ratio_as_bound, ratio_matching_bound, Problem};
use crate::error::{Error, Result};

/// Finest accepted scan step.
pub const FINAL_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub problem: Problem,
    pub c: f64,
    pub d: f64,
    pub value: f64,
}

/// The quantity maximized for `problem`, or `None` outside its domain.
pub fn objective(problem: Problem, c: f64, d: f64) -> Option<f64> {
    match problem {
        Problem::Knapsack => {
            if !(0.0 < c && c < d && d < 1.0) {
                return None;
            }
            let cases = case_bounds(c, d).ok()?;
            let al = cases.into_iter().fold(f64::INFINITY, f64::min);
            Some(al.min(ratio_as_bound(c, d, 1.5).ok()?))
        }
        Problem::Gap => {
            if !(0.0 < c && c < d && d < 1.0) {
                return None;
            }
            let m = ratio_matching_bound(c, d).ok()?;
            Some(m.min(ratio_as_bound(c, d, 2.0).ok()?))
        }
        Problem::SinglePhaseLarge => {
            if !(0.0 < c && c < 1.0) {
                return None;
            }
            let cases = case_bounds(c, 1.0).ok()?;
            Some(cases.into_iter().fold(f64::INFINITY, f64::min))
        }
    }
}

/// Golden-section refinement stops once the bracket is this narrow.
const TOLERANCE: f64 = 1e-9;

fn value_or_floor(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NEG_INFINITY)
}

/// Maximizes `g` on `[lo, hi]`, assuming it is unimodal there. Returns the
/// best point seen (an endpoint included).
fn golden_max(g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    while b - a > TOLERANCE {
        if g1 >= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - ratio * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + ratio * (b - a);
            g2 = g(x2);
        }
    }
    [(lo, g(lo)), (hi, g(hi)), (x1, g1), (x2, g2)]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best })
}

/// Grid scan of `g` at `step` over `(lo, hi)`, then golden-section
/// refinement on the two cells around the best grid point.
fn scan_then_refine(g: &(impl Fn(f64) -> f64 + Sync), lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let cells = ((hi - lo) / step).floor() as i64;
    let (k, v) = (1..=cells)
        .into_par_iter()
        .map(|k| (k, g(lo + k as f64 * step)))
        .reduce(|| (0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
    if v == f64::NEG_INFINITY {
        return (lo, v);
    }
    let center = lo + k as f64 * step;
    let refined = golden_max(g, (center - step).max(lo), (center + step).min(hi));
    if refined.1 >= v {
        refined
    } else {
        (center, v)
    }
}

/// Best `d` for a fixed `c`, with its value.
fn best_d(problem: Problem, c: f64, step: f64) -> (f64, f64) {
    if problem == Problem::SinglePhaseLarge {
        return (1.0, value_or_floor(objective(problem, c, 1.0)));
    }
    let g = |d: f64| value_or_floor(objective(problem, c, d));
    let mut best = (0.0, f64::NEG_INFINITY);
    let cells = ((1.0 - c) / step).floor() as i64;
    for k in 1..=cells {
        let d = c + k as f64 * step;
        let v = g(d);
        if v > best.1 {
            best = (d, v);
        }
    }
    if best.1 == f64::NEG_INFINITY {
        return best;
    }
    let refined = golden_max(g, (best.0 - step).max(c), (best.0 + step).min(1.0));
    if refined.1 >= best.1 {
        refined
    } else {
        best
    }
}

/// Maximizes the guarantee of `problem` over `(c, d)`: the two-item rule
/// against the small-item rule (`Δ = 3/2`) for knapsack, the matching rule
/// against LP rounding (`Δ = 2`) for GAP, or the two-item rule alone with
/// `d = 1`. `grid_step` is the resolution of the initial scans; the
/// refinement then converges well below [`FINAL_STEP`].
pub fn optimize_params(problem: Problem, grid_step: f64) -> Result<Optimum> {
    if !(grid_step > 0.0 && grid_step <= 1e-3) {
        return Err(Error::param(format!("grid step must lie in (0, 1e-3], got {grid_step}")));
    }
    if grid_step < FINAL_STEP {
        return Err(Error::capability(format!(
            "grid step below {FINAL_STEP} makes the scan too large"
        )));
    }
    let profile = |c: f64| best_d(problem, c, grid_step).1;
    let (c, value) = scan_then_refine(&profile, 0.0, 1.0, grid_step);
    if value == f64::NEG_INFINITY {
        return Err(Error::Contract("no feasible (c, d) found".into()));
    }
    let (d, value) = best_d(problem, c, grid_step);
    Ok(Optimum {
        problem,
        c,
        d,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_phase_optimum() {
        let opt = optimize_params(Problem::SinglePhaseLarge, 1e-3).unwrap();
        assert!((opt.c - 0.23053).abs() < 1e-3, "{opt:?}");
        assert!(opt.value >= 0.3247);
        assert_eq!(opt.d, 1.0);
    }

    #[test]
    fn ridge_optimum_beats_every_lattice_point_nearby() {
        let opt = optimize_params(Problem::Knapsack, 1e-3).unwrap();
        let mut lattice_best = f64::NEG_INFINITY;
        for i in -50..=50 {
            for j in -50..=50 {
                let c = opt.c + i as f64 * 1e-5;
                let d = opt.d + j as f64 * 1e-5;
                if let Some(v) = objective(Problem::Knapsack, c, d) {
                    lattice_best = lattice_best.max(v);
                }
            }
        }
        assert!(opt.value >= lattice_best - 1e-12, "{opt:?} vs {lattice_best}");
        assert!(opt.value >= objective(Problem::Knapsack, 0.42291, 0.64570).unwrap());
    }

    #[test]
    fn rejects_coarse_step() {
        assert!(optimize_params(Problem::Gap, 0.01).is_err());
    }
}
