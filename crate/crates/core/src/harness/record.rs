//! Trial records, CSV output and the JSON summary.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 11] = ["codec", "k", "n", "delta", "kappa", "trial", "L", "R", "queries", "success", "seed"];

/// One decode in one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub codec: String,
    pub k: usize,
    pub n: usize,
    pub delta: f64,
    pub kappa: usize,
    pub trial: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "R")]
    pub r: usize,
    pub queries: usize,
    pub success: bool,
    pub seed: u64,
}

impl ExperimentRecord {
    pub fn amortized_locality(&self) -> f64 {
        self.queries as f64 / (self.r - self.l + 1) as f64
    }
}

pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.codec.clone(),
            r.k.to_string(),
            r.n.to_string(),
            r.delta.to_string(),
            r.kappa.to_string(),
            r.trial.to_string(),
            r.l.to_string(),
            r.r.to_string(),
            r.queries.to_string(),
            u8::from(r.success).to_string(),
            r.seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[ExperimentRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::format(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::format(format!("{other:?}")),
    }
}

/// Aggregate over the records of one configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub codec: String,
    pub channel: String,
    pub k: usize,
    pub n: usize,
    pub delta: f64,
    pub kappa: usize,
    pub trials: usize,
    pub decodes: usize,
    pub failures: usize,
    pub failure_rate: f64,
    pub mean_amortized_locality: f64,
    pub max_amortized_locality: f64,
    pub locality_bound: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<(String, f64)>,
}

impl ConfigSummary {
    pub fn from_records(
        codec: &str,
        channel: &str,
        trials: usize,
        locality_bound: f64,
        records: &[ExperimentRecord],
    ) -> ConfigSummary {
        let decodes = records.len();
        let failures = records.iter().filter(|r| !r.success).count();
        let locs: Vec<f64> = records.iter().map(ExperimentRecord::amortized_locality).collect();
        let first = records.first();
        ConfigSummary {
            codec: codec.to_string(),
            channel: channel.to_string(),
            k: first.map_or(0, |r| r.k),
            n: first.map_or(0, |r| r.n),
            delta: first.map_or(0.0, |r| r.delta),
            kappa: first.map_or(0, |r| r.kappa),
            trials,
            decodes,
            failures,
            failure_rate: if decodes == 0 { 0.0 } else { failures as f64 / decodes as f64 },
            mean_amortized_locality: if decodes == 0 { 0.0 } else { locs.iter().sum::<f64>() / decodes as f64 },
            max_amortized_locality: locs.iter().copied().fold(0.0, f64::max),
            locality_bound,
            bounds: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_row_shape() {
        let rec = ExperimentRecord {
            codec: "onetime".into(),
            k: 512,
            n: 1024,
            delta: 0.02,
            kappa: 256,
            trial: 3,
            l: 1,
            r: 256,
            queries: 512,
            success: true,
            seed: 7,
        };
        let s = csv_string(std::slice::from_ref(&rec)).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), "codec,k,n,delta,kappa,trial,L,R,queries,success,seed");
        assert_eq!(lines.next().unwrap(), "onetime,512,1024,0.02,256,3,1,256,512,1,7");
        assert_eq!(rec.amortized_locality(), 2.0);
        let sum = ConfigSummary::from_records("onetime", "uniform_random@0.02", 1, 4.0, &[rec]);
        assert_eq!(sum.failures, 0);
        assert_eq!(sum.max_amortized_locality, 2.0);
    }
}
