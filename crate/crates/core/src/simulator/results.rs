//! Results CSV: one row per experiment.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    /// Family name, or the instance file for ad-hoc runs.
    pub family: String,
    pub algorithm: String,
    pub n: usize,
    pub c: String,
    pub d: String,
    pub delta: String,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
    /// `integral:p/q` or `fractional:p/q`.
    pub opt_ref: String,
}

pub fn write_rows(out: impl Write, rows: &[ExperimentRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows(input: impl Read) -> Result<Vec<ExperimentRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Into::into))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_header() {
        let row = ExperimentRow {
            family: "mixed".into(),
            algorithm: "knapsack-seq".into(),
            n: 12,
            c: "42291/100000".into(),
            d: "6457/10000".into(),
            delta: "1/3".into(),
            trials: 100,
            seed: 7,
            mean: 0.25,
            stderr: 0.01,
            opt_ref: "integral:31/1".into(),
        };
        let mut buf = Vec::new();
        write_rows(&mut buf, std::slice::from_ref(&row)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("family,algorithm,n,c,d,delta,trials,seed,mean,stderr,opt_ref\n"));
        assert_eq!(read_rows(&buf[..]).unwrap(), vec![row]);
    }
}
