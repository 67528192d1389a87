//! Summary table: one row per problem x solver x eps.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::fit::{fit_scaling, median, LinearFit};
use crate::runner::RunOutcome;
use crate::trace::TraceError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub solver: String,
    pub eps: f64,
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Gradient plus Hessian-vector calls over successful runs.
    pub mean_calls: Option<f64>,
    pub median_calls: Option<f64>,
    /// Fraction of runs whose returned point passed the dense curvature check.
    pub second_order_rate: Option<f64>,
    /// Fitted exponent of calls in `1/eps` for this problem and solver.
    pub slope: Option<f64>,
    pub mean_wallclock_s: f64,
}

impl SummaryRow {
    /// The row without timing, for determinism comparisons.
    pub fn without_wallclock(&self) -> SummaryRow {
        SummaryRow {
            mean_wallclock_s: 0.0,
            ..self.clone()
        }
    }
}

/// Group outcomes, preserving first-appearance order of problems and solvers.
pub fn summarize(outcomes: &[RunOutcome]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut groups: BTreeMap<(String, String), BTreeMap<u64, Vec<&RunOutcome>>> = BTreeMap::new();
    for o in outcomes {
        let key = (o.spec.problem.clone(), o.spec.solver.to_string());
        if !order.contains(&key) {
            order.push(key.clone());
        }
        groups
            .entry(key)
            .or_default()
            .entry(o.spec.eps.to_bits())
            .or_default()
            .push(o);
    }
    let mut rows = Vec::new();
    for key in order {
        let by_eps = &groups[&key];
        let mut eps_order: Vec<u64> = by_eps.keys().copied().collect();
        eps_order.sort_by(|a, b| f64::from_bits(*b).total_cmp(&f64::from_bits(*a)));
        let mut block: Vec<SummaryRow> = eps_order
            .iter()
            .map(|bits| summarize_group(&key.0, &key.1, f64::from_bits(*bits), &by_eps[bits]))
            .collect();
        let slope = slope_of(&block).map(|f| f.slope);
        for r in &mut block {
            r.slope = slope;
        }
        rows.extend(block);
    }
    rows
}

fn summarize_group(problem: &str, solver: &str, eps: f64, runs: &[&RunOutcome]) -> SummaryRow {
    let mut calls: Vec<f64> = runs
        .iter()
        .filter(|o| o.succeeded())
        .filter_map(|o| o.report.as_ref().ok())
        .map(|r| r.totals.oracle_calls() as f64)
        .collect();
    let successes = calls.len();
    let mean_calls = (successes > 0).then(|| calls.iter().sum::<f64>() / successes as f64);
    let median_calls = median(&mut calls);
    let checks: Vec<bool> = runs.iter().filter_map(|o| o.second_order_ok()).collect();
    let second_order_rate = (!checks.is_empty())
        .then(|| checks.iter().filter(|&&b| b).count() as f64 / runs.len() as f64);
    let mean_wallclock_s =
        runs.iter().map(|o| o.wallclock().as_secs_f64()).sum::<f64>() / runs.len() as f64;
    SummaryRow {
        problem: problem.to_string(),
        solver: solver.to_string(),
        eps,
        runs: runs.len(),
        successes,
        success_rate: successes as f64 / runs.len() as f64,
        mean_calls,
        median_calls,
        second_order_rate,
        slope: None,
        mean_wallclock_s,
    }
}

fn slope_of(rows: &[SummaryRow]) -> Option<LinearFit> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.median_calls.map(|c| (r.eps, c)))
        .collect();
    fit_scaling(&points).ok()
}

/// Per problem and solver scaling fits over summary rows.
pub fn fit_rows(rows: &[SummaryRow]) -> Vec<(String, String, Result<LinearFit, crate::fit::FitError>)> {
    let mut order: Vec<(String, String)> = Vec::new();
    for r in rows {
        let key = (r.problem.clone(), r.solver.clone());
        if !order.contains(&key) {
            order.push(key);
        }
    }
    order
        .into_iter()
        .map(|(p, s)| {
            let points: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.problem == p && r.solver == s)
                .filter_map(|r| r.median_calls.map(|c| (r.eps, c)))
                .collect();
            let fit = fit_scaling(&points);
            (p, s, fit)
        })
        .collect()
}

pub fn write_summary(rows: &[SummaryRow], path: &Path, format: Format) -> Result<(), TraceError> {
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            for r in rows {
                csv.serialize(r)?;
            }
            csv.flush()?;
        }
        Format::Json => serde_json::to_writer_pretty(&mut w, rows)?,
    }
    w.flush()?;
    Ok(())
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>, TraceError> {
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        return Ok(serde_json::from_reader(BufReader::new(file))?);
    }
    let mut csv = csv::Reader::from_reader(BufReader::new(file));
    Ok(csv.deserialize().collect::<Result<Vec<_>, _>>()?)
}
