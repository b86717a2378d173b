use std::collections::BTreeMap;

use serde::Serialize;

use super::bounds::TypeProbabilities;
use super::probs::{p_first_exact, p_ordered_pair_exact};
use crate::error::Result;
use crate::rational::{format_rational, Rational};

/// Exact acceptance probabilities for one `(n, cn, dn)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityReport {
    pub n: usize,
    pub cn: usize,
    pub dn: usize,
    /// Rank `i` (1..=4, at most `n`) packed first.
    pub p_first: BTreeMap<usize, Rational>,
    /// Rank `i` packed first and rank `j` second, `i != j` in 1..=3.
    pub p_pair: BTreeMap<(usize, usize), Rational>,
    pub types: Option<TypeProbabilities<Rational>>,
    /// `alpha + min((beta + gamma)/2, beta)` for the five cases.
    pub case_values: Option<[Rational; 5]>,
}

impl ProbabilityReport {
    pub fn exact(n: usize, cn: usize, dn: usize) -> Result<Self> {
        let mut p_first = BTreeMap::new();
        for i in 1..=n.min(4) {
            p_first.insert(i, p_first_exact(n, cn, dn, i)?);
        }
        let mut p_pair = BTreeMap::new();
        for i in 1..=n.min(3) {
            for j in 1..=n.min(3) {
                if i != j {
                    p_pair.insert((i, j), p_ordered_pair_exact(n, cn, dn, i, j)?);
                }
            }
        }
        let (types, case_values) = if n >= 4 {
            let first = std::array::from_fn(|k| p_first[&(k + 1)].clone());
            let types = TypeProbabilities::new(first, |i, j| p_pair[&(i, j)].clone());
            let values = types.case_terms().values();
            (Some(types), Some(values))
        } else {
            (None, None)
        };
        Ok(ProbabilityReport {
            n,
            cn,
            dn,
            p_first,
            p_pair,
            types,
            case_values,
        })
    }
}

impl Serialize for ProbabilityReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let first: BTreeMap<String, String> = self
            .p_first
            .iter()
            .map(|(i, v)| (i.to_string(), format_rational(v)))
            .collect();
        let pair: BTreeMap<String, String> = self
            .p_pair
            .iter()
            .map(|((i, j), v)| (format!("{i}{j}"), format_rational(v)))
            .collect();
        let cases: Option<Vec<String>> = self
            .case_values
            .as_ref()
            .map(|v| v.iter().map(format_rational).collect());
        let mut st = s.serialize_struct("ProbabilityReport", 6)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("cn", &self.cn)?;
        st.serialize_field("dn", &self.dn)?;
        st.serialize_field("p_first", &first)?;
        st.serialize_field("p_pair", &pair)?;
        st.serialize_field("case_values", &cases)?;
        st.end()
    }
}
