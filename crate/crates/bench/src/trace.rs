//! Per-run trace files.
//!
//! CSV layout: a `# rng=ChaCha8Rng seed=<n>` comment line, a header row, then
//! one row per recorded iteration. JSON holds the same data as an object with
//! `rng`, `seed` and `rows`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use hessfree::driver::RunReport;
use hessfree::oracle::CallCounts;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Format;

pub const RNG_NAME: &str = "ChaCha8Rng";

pub const COLUMNS: [&str; 11] = [
    "run_id",
    "solver",
    "problem",
    "eps",
    "seed",
    "phase",
    "iteration",
    "f",
    "grad_norm",
    "grad_calls",
    "hvp_calls",
];

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed trace: {0}")]
    Malformed(String),
}

/// One trace row; call counters are cumulative within the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub run_id: String,
    pub solver: String,
    pub problem: String,
    pub eps: f64,
    pub seed: u64,
    pub phase: String,
    pub iteration: usize,
    pub f: f64,
    pub grad_norm: f64,
    pub grad_calls: u64,
    pub hvp_calls: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub rng: String,
    pub seed: u64,
    pub rows: Vec<TraceRow>,
}

/// Identifying fields shared by every row of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunKey {
    pub run_id: String,
    pub solver: String,
    pub problem: String,
    pub eps: f64,
    pub seed: u64,
}

impl Trace {
    pub fn from_report(key: &RunKey, report: &RunReport) -> Trace {
        let mut total = CallCounts::default();
        let rows = report
            .phase_trace
            .iter()
            .map(|p| {
                total = total + p.calls;
                TraceRow {
                    run_id: key.run_id.clone(),
                    solver: key.solver.clone(),
                    problem: key.problem.clone(),
                    eps: key.eps,
                    seed: key.seed,
                    phase: p.phase.as_str().to_string(),
                    iteration: p.iteration,
                    f: p.f,
                    grad_norm: p.grad_norm,
                    grad_calls: total.grad,
                    hvp_calls: total.hvp,
                }
            })
            .collect();
        Trace {
            rng: RNG_NAME.to_string(),
            seed: key.seed,
            rows,
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<(), TraceError> {
        let mut w = BufWriter::new(File::create(path)?);
        match format {
            Format::Csv => self.write_csv(&mut w)?,
            Format::Json => serde_json::to_writer_pretty(&mut w, self)?,
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), TraceError> {
        writeln!(w, "# rng={} seed={}", self.rng, self.seed)?;
        let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        csv.write_record(COLUMNS)?;
        for row in &self.rows {
            csv.serialize(row)?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Trace, TraceError> {
        let file = File::open(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            return Ok(serde_json::from_reader(BufReader::new(file))?);
        }
        Self::read_csv(BufReader::new(file))
    }

    pub fn read_csv<R: BufRead>(mut r: R) -> Result<Trace, TraceError> {
        let mut first = String::new();
        r.read_line(&mut first)?;
        let (rng, seed) = parse_comment(first.trim_end())
            .ok_or_else(|| TraceError::Malformed(format!("bad header comment `{}`", first.trim_end())))?;
        let mut csv = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let header: Vec<String> = csv.headers()?.iter().map(str::to_string).collect();
        if header != COLUMNS {
            return Err(TraceError::Malformed(format!("unexpected columns {header:?}")));
        }
        let rows = csv.deserialize().collect::<Result<Vec<TraceRow>, _>>()?;
        Ok(Trace { rng, seed, rows })
    }
}

fn parse_comment(line: &str) -> Option<(String, u64)> {
    let rest = line.strip_prefix('#')?.trim();
    let mut rng = None;
    let mut seed = None;
    for part in rest.split_whitespace() {
        match part.split_once('=')? {
            ("rng", v) => rng = Some(v.to_string()),
            ("seed", v) => seed = v.parse().ok(),
            _ => {}
        }
    }
    Some((rng?, seed?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Trace {
        Trace {
            rng: RNG_NAME.into(),
            seed: 7,
            rows: vec![
                TraceRow {
                    run_id: "r".into(),
                    solver: "accnc".into(),
                    problem: "quadratic:d=5".into(),
                    eps: 1e-3,
                    seed: 7,
                    phase: "ncd".into(),
                    iteration: 1,
                    f: 0.1 + 0.2,
                    grad_norm: 1.234e-17,
                    grad_calls: 3,
                    hvp_calls: 9,
                },
                TraceRow {
                    phase: "acagd".into(),
                    f: -1.0 / 3.0,
                    grad_calls: 50,
                    ..sample_row()
                },
            ],
        }
    }

    fn sample_row() -> TraceRow {
        TraceRow {
            run_id: "r".into(),
            solver: "accnc".into(),
            problem: "quadratic:d=5".into(),
            eps: 1e-3,
            seed: 7,
            phase: "ncd".into(),
            iteration: 2,
            f: 0.0,
            grad_norm: 5e-4,
            grad_calls: 0,
            hvp_calls: 9,
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let t = sample();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# rng=ChaCha8Rng seed=7\nrun_id,solver,problem,eps,seed,phase"));
        let back = Trace::read_csv(&buf[..]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_wrong_columns() {
        let text = "# rng=ChaCha8Rng seed=1\na,b\n1,2\n";
        assert!(Trace::read_csv(text.as_bytes()).is_err());
        assert!(Trace::read_csv("run_id\n".as_bytes()).is_err());
    }
}
