//! Asymptotic (`n → ∞`, `o(1)` terms dropped) bounds.
//!
//! With `L = ln(d/c)` the limits of the first/pair acceptance
//! probabilities are
//!
//! ```text
//! p1  = c·L
//! p2  = c·(L − (d−c))
//! p3  = c·(L − 2(d−c) + (d²−c²)/2)
//! p4  = c·(L − 3(d−c) + 3(d²−c²)/2 − (d³−c³)/3)
//! p12 = c·(d − c·L − c)
//! p13 = p23 = c·(d − c·L − c − d²/2 + c·d − c²/2)
//! ```

use std::ops::{Add, Div, Sub};

use num_traits::{FromPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

fn check_cd(c: f64, d: f64) -> Result<()> {
    if !(c > 0.0 && c <= d && d <= 1.0) {
        return Err(Error::param(format!("need 0 < c <= d <= 1, got c = {c}, d = {d}")));
    }
    Ok(())
}

pub fn p_first_asymptotic(c: f64, d: f64, i: usize) -> Result<f64> {
    check_cd(c, d)?;
    let l = (d / c).ln();
    let (d1, d2, d3) = (d - c, d * d - c * c, d.powi(3) - c.powi(3));
    let inner = match i {
        1 => l,
        2 => l - d1,
        3 => l - 2.0 * d1 + d2 / 2.0,
        4 => l - 3.0 * d1 + 1.5 * d2 - d3 / 3.0,
        _ => return Err(Error::param(format!("rank {i} outside 1..=4"))),
    };
    Ok(c * inner)
}

/// Which ranked pair a pair probability refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairIndex {
    P12,
    P13,
    P23,
}

pub fn p_pair_asymptotic(c: f64, d: f64, pair: PairIndex) -> Result<f64> {
    check_cd(c, d)?;
    let l = (d / c).ln();
    let p12 = c * (d - c * l - c);
    Ok(match pair {
        PairIndex::P12 => p12,
        PairIndex::P13 | PairIndex::P23 => p12 - c * (d * d / 2.0 - c * d + c * c / 2.0),
    })
}

/// Numeric types the packing-type algebra runs on (`f64` and exact
/// rationals).
pub trait Prob:
    Clone
    + PartialOrd
    + Zero
    + FromPrimitive
    + Add<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Prob for T where
    T: Clone
        + PartialOrd
        + Zero
        + FromPrimitive
        + Add<Output = T>
        + Sub<Output = T>
        + Div<Output = T>
{
}

/// Probabilities of the packing types A–M: which of the top-ranked items
/// end up packed first and second.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeProbabilities<T> {
    /// {1,2} in either order.
    pub a: T,
    /// {1,3} in either order.
    pub b: T,
    /// {2,3} in either order.
    pub c: T,
    /// 1 first.
    pub d: T,
    /// 2 first.
    pub e: T,
    /// 3 first.
    pub f: T,
    /// 4 first.
    pub g: T,
    /// 1 first, second not 2.
    pub h: T,
    /// 1 first, second not 3.
    pub i: T,
    /// 2 first, second not 1.
    pub j: T,
    /// 2 first, second not 3.
    pub k: T,
    /// 3 first, second not 1.
    pub l: T,
    /// 3 first, second not 2.
    pub m: T,
}

impl<T: Prob> TypeProbabilities<T> {
    /// From `first[r-1]` = probability rank `r` is packed first and
    /// `pair(i, j)` = probability `i` is packed first and `j` second.
    pub fn new(first: [T; 4], pair: impl Fn(usize, usize) -> T) -> Self {
        let [p1, p2, p3, p4] = first;
        TypeProbabilities {
            a: pair(1, 2) + pair(2, 1),
            b: pair(1, 3) + pair(3, 1),
            c: pair(2, 3) + pair(3, 2),
            d: p1.clone(),
            e: p2.clone(),
            f: p3.clone(),
            g: p4,
            h: p1.clone() - pair(1, 2),
            i: p1 - pair(1, 3),
            j: p2.clone() - pair(2, 1),
            k: p2 - pair(2, 3),
            l: p3.clone() - pair(3, 1),
            m: p3 - pair(3, 2),
        }
    }

    /// Per-case weights: `alpha` (optimal packing), `beta` (an item at
    /// least as good as the better optimal item packed first), `gamma`
    /// (an item between the two optimal items packed first).
    pub fn case_terms(&self) -> CaseTerms<T> {
        let zero = T::zero();
        CaseTerms {
            alpha: [
                self.d.clone(),
                self.a.clone(),
                self.b.clone(),
                self.c.clone(),
                zero.clone(),
            ],
            beta: [
                zero.clone(),
                self.h.clone(),
                self.i.clone(),
                self.d.clone() + self.k.clone(),
                self.d.clone(),
            ],
            gamma: [
                zero,
                self.j.clone(),
                self.e.clone() + self.l.clone(),
                self.m.clone(),
                self.e.clone() + self.f.clone() + self.g.clone(),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseTerms<T> {
    pub alpha: [T; 5],
    pub beta: [T; 5],
    pub gamma: [T; 5],
}

impl<T: Prob> CaseTerms<T> {
    /// `alpha + min((beta + gamma)/2, beta)` per case.
    pub fn values(&self) -> [T; 5] {
        let two = T::from_u8(2).expect("2 is representable");
        std::array::from_fn(|w| {
            let half = (self.beta[w].clone() + self.gamma[w].clone()) / two.clone();
            let worst = if half < self.beta[w] {
                half
            } else {
                self.beta[w].clone()
            };
            self.alpha[w].clone() + worst
        })
    }
}

/// Asymptotic type probabilities, using `p_ij = p_ji`.
pub fn type_probabilities(c: f64, d: f64) -> Result<TypeProbabilities<f64>> {
    let first = [
        p_first_asymptotic(c, d, 1)?,
        p_first_asymptotic(c, d, 2)?,
        p_first_asymptotic(c, d, 3)?,
        p_first_asymptotic(c, d, 4)?,
    ];
    let p12 = p_pair_asymptotic(c, d, PairIndex::P12)?;
    let p13 = p_pair_asymptotic(c, d, PairIndex::P13)?;
    Ok(TypeProbabilities::new(first, |i, j| {
        if i.max(j) == 2 {
            p12
        } else {
            p13
        }
    }))
}

/// Case values `alpha + min((beta + gamma)/2, beta)` from the asymptotic
/// type probabilities; defined for every `0 < c <= d <= 1`.
pub fn case_values_general(c: f64, d: f64) -> Result<[f64; 5]> {
    Ok(type_probabilities(c, d)?.case_terms().values())
}

/// `f(x) = 2 ln x − 6x + 2x² − x³/3`.
pub fn feasibility_f(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::param(format!("f is defined for x > 0, got {x}")));
    }
    Ok(2.0 * x.ln() - 6.0 * x + 2.0 * x * x - x.powi(3) / 3.0)
}

/// The polynomial part `−6x + 2x² − x³/3` of `f`, exactly; at `x = 1` it
/// is `f(1)` itself.
pub fn feasibility_f_polynomial(x: &Rational) -> Rational {
    let x2 = x * x;
    let x3 = &x2 * x;
    Rational::from_integer((-6).into()) * x + Rational::from_integer(2.into()) * x2
        - x3 / Rational::from_integer(3.into())
}

/// `f(c) >= f(d)`: under this condition `beta >= gamma` in every two-item
/// case, and the case values take their closed forms.
pub fn is_feasible(c: f64, d: f64) -> bool {
    match (feasibility_f(c), feasibility_f(d)) {
        (Ok(fc), Ok(fd)) => fc >= fd,
        _ => false,
    }
}

/// The five case bounds of the two-item secretary rule:
/// `p1`, `p12 + (p1+p2)/2`, `p13 + (p1+p2+p3)/2`, `p23 + (p1+p2+p3)/2`,
/// `(p1+p2+p3+p4)/2`. Requires `f(c) >= f(d)`.
pub fn case_bounds(c: f64, d: f64) -> Result<[f64; 5]> {
    check_cd(c, d)?;
    let (fc, fd) = (feasibility_f(c)?, feasibility_f(d)?);
    if fc < fd {
        return Err(Error::Contract(format!(
            "f(c) >= f(d) fails: f({c}) = {fc:.6} < f({d}) = {fd:.6}"
        )));
    }
    let p1 = p_first_asymptotic(c, d, 1)?;
    let p2 = p_first_asymptotic(c, d, 2)?;
    let p3 = p_first_asymptotic(c, d, 3)?;
    let p4 = p_first_asymptotic(c, d, 4)?;
    let p12 = p_pair_asymptotic(c, d, PairIndex::P12)?;
    let p13 = p_pair_asymptotic(c, d, PairIndex::P13)?;
    let p23 = p_pair_asymptotic(c, d, PairIndex::P23)?;
    Ok([
        p1,
        p12 + (p1 + p2) / 2.0,
        p13 + (p1 + p2 + p3) / 2.0,
        p23 + (p1 + p2 + p3) / 2.0,
        (p1 + p2 + p3 + p4) / 2.0,
    ])
}

/// `(c/d)·((1−d)(1+Δ) − Δ·ln(1/d))`, the small-item rule's ratio against
/// the small-item optimum, with `Δ = 1/(1−δ)`.
pub fn ratio_as_bound(c: f64, d: f64, big_delta: f64) -> Result<f64> {
    check_cd(c, d)?;
    if !(big_delta >= 1.0) {
        return Err(Error::param(format!("Δ must be at least 1, got {big_delta}")));
    }
    Ok((c / d) * ((1.0 - d) * (1.0 + big_delta) - big_delta * (1.0 / d).ln()))
}

/// `c·ln(d/c)`, the matching rule's ratio against the large-option optimum.
pub fn ratio_matching_bound(c: f64, d: f64) -> Result<f64> {
    check_cd(c, d)?;
    Ok(c * (d / c).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    /// Sequential knapsack: two-item rule then greedy rounding.
    Knapsack,
    /// Sequential GAP: matching then LP rounding.
    Gap,
    /// The two-item rule alone with `d = 1`.
    SinglePhaseLarge,
}

/// All ratio functions at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioBundle {
    pub problem: Problem,
    pub c: f64,
    pub d: f64,
    pub delta: f64,
    /// `Δ = 1/(1−δ)`.
    pub big_delta: f64,
    /// Minimum case bound of the two-item rule; `None` if `f(c) < f(d)`.
    pub ratio_al: Option<f64>,
    pub ratio_as: f64,
    pub ratio_matching: f64,
    /// The guarantee of `problem`: the smaller of its two phase ratios.
    pub combined: Option<f64>,
    pub note: &'static str,
}

pub fn ratio_bundle(problem: Problem, c: f64, d: f64, delta: f64) -> Result<RatioBundle> {
    check_cd(c, d)?;
    if c >= d {
        return Err(Error::param(format!("need c < d, got c = {c}, d = {d}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta must lie in (0,1), got {delta}")));
    }
    let big_delta = 1.0 / (1.0 - delta);
    let ratio_al = case_bounds(c, d)
        .ok()
        .map(|v| v.into_iter().fold(f64::INFINITY, f64::min));
    let ratio_as = ratio_as_bound(c, d, big_delta)?;
    let ratio_matching = ratio_matching_bound(c, d)?;
    let combined = match problem {
        Problem::Knapsack => ratio_al.map(|al| al.min(ratio_as)),
        Problem::Gap => Some(ratio_matching.min(ratio_as)),
        Problem::SinglePhaseLarge => ratio_al,
    };
    Ok(RatioBundle {
        problem,
        c,
        d,
        delta,
        big_delta,
        ratio_al,
        ratio_as,
        ratio_matching,
        combined,
        note: "asymptotic values; o(1) terms dropped",
    })
}
