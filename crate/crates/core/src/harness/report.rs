//! CSV and JSON report writers.

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::sweep::{Summary, TrialRecord};
use crate::error::{Error, Result};

#[derive(Serialize)]
struct TrialRow<'a> {
    trial: usize,
    seed: u64,
    family: &'static str,
    dim: usize,
    norm_target: f64,
    series: &'a str,
    bound: &'a str,
    quantity: &'static str,
    status: &'static str,
    value: Option<f64>,
    oracle: Option<f64>,
    oracle_error: Option<f64>,
    ratio: Option<f64>,
    violation: bool,
    reason: &'a str,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    bound: &'a str,
    quantity: &'static str,
    trials: usize,
    available: usize,
    availability_rate: f64,
    compared: usize,
    mean_ratio: Option<f64>,
    median_ratio: Option<f64>,
    min_ratio: Option<f64>,
    max_ratio: Option<f64>,
    wins: usize,
    win_rate: f64,
    violations: usize,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// One row per trial per bound.
pub fn trials_csv(records: &[TrialRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for rec in records {
        for c in &rec.checks {
            w.serialize(TrialRow {
                trial: rec.index,
                seed: rec.spec.seed,
                family: rec.spec.family.name(),
                dim: rec.spec.dim,
                norm_target: rec.spec.norm_target,
                series: &rec.series,
                bound: &c.name,
                quantity: c.quantity.label(),
                status: if c.value.is_some() { "available" } else { "unavailable" },
                value: c.value,
                oracle: c.oracle,
                oracle_error: c.oracle_error,
                ratio: c.ratio,
                violation: c.violation,
                reason: c.reason.as_deref().unwrap_or(""),
            })
            .map_err(csv_err)?;
        }
    }
    finish(w)
}

/// Per-bound tightness statistics and win rates, one row per bound.
pub fn summary_csv(summary: &Summary) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for b in &summary.bounds {
        w.serialize(SummaryRow {
            bound: &b.name,
            quantity: b.quantity.label(),
            trials: b.trials,
            available: b.available,
            availability_rate: b.availability_rate,
            compared: b.compared,
            mean_ratio: b.mean_ratio,
            median_ratio: b.median_ratio,
            min_ratio: b.min_ratio,
            max_ratio: b.max_ratio,
            wins: b.wins,
            win_rate: b.win_rate,
            violations: b.violations,
        })
        .map_err(csv_err)?;
    }
    finish(w)
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
