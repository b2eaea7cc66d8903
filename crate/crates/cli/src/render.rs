//! Output formatting for the subcommands.

use std::fmt::Write as _;

use serde::Serialize;
use specbound::bounds::Selected;
use specbound::harness::{compute_oracle, Oracle, Summary, VerifySummary};
use specbound::{BestBound, BoundResult, Operands, PowerSeries, Quantity};

use crate::Format;

#[derive(Serialize)]
pub struct BoundReport<'a> {
    series: &'a str,
    radius: String,
    mode: &'static str,
    dim: usize,
    commutator_norm: Option<f64>,
    commuting: Option<bool>,
    results: &'a [BoundResult],
    oracles: Vec<Oracle>,
    minimum: Option<&'a Selected>,
}

impl<'a> BoundReport<'a> {
    pub fn new(f: &'a PowerSeries, operands: Operands<'_>, best: &'a BestBound, tol: f64) -> Self {
        let mut quantities: Vec<Quantity> = best.results.iter().map(|r| r.quantity).collect();
        quantities.sort();
        quantities.dedup();
        let (mode, dim, single, pair) = match operands {
            Operands::Single(t) => ("single", t.dim(), Some(t), None),
            Operands::Pair(a, b) => ("pair", a.dim(), None, Some((a, b))),
        };
        let oracles = quantities
            .into_iter()
            .map(|q| compute_oracle(q, f, single, pair, tol))
            .collect();
        BoundReport {
            series: f.name(),
            radius: f.radius().to_string(),
            mode,
            dim,
            commutator_norm: best.commutator_norm,
            commuting: best.commuting,
            results: &best.results,
            oracles,
            minimum: best.minimum.as_ref(),
        }
    }

    fn oracle(&self, q: Quantity) -> Option<&Oracle> {
        self.oracles.iter().find(|o| o.quantity == q)
    }
}

#[derive(Serialize)]
struct BoundRow<'a> {
    bound: &'a str,
    quantity: &'static str,
    status: &'static str,
    value: Option<f64>,
    oracle: Option<f64>,
    oracle_error: Option<f64>,
    reason: &'a str,
}

fn bound_csv(report: &BoundReport<'_>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in report.results {
        let oracle = report.oracle(r.quantity);
        w.serialize(BoundRow {
            bound: &r.name,
            quantity: r.quantity.label(),
            status: if r.is_available() { "available" } else { "unavailable" },
            value: r.value(),
            oracle: oracle.and_then(|o| o.value),
            oracle_error: oracle.and_then(|o| o.value.map(|_| o.error)),
            reason: r.reason().unwrap_or(""),
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn bound_table(report: &BoundReport<'_>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "series: {} (R = {})", report.series, report.radius);
    let _ = writeln!(s, "mode: {}, n = {}", report.mode, report.dim);
    if let (Some(c), Some(ok)) = (report.commutator_norm, report.commuting) {
        let _ = writeln!(s, "commutator: ‖AB − BA‖ = {c:e} ({})", if ok { "commuting" } else { "not commuting" });
    }
    for r in report.results {
        let _ = writeln!(s);
        match r.value() {
            Some(v) => {
                let _ = writeln!(s, "{} [{}] = {v}", r.name, r.quantity);
            }
            None => {
                let _ = writeln!(s, "{} [{}] unavailable: {}", r.name, r.quantity, r.reason().unwrap_or(""));
            }
        }
        for p in &r.preconditions {
            let mark = if p.holds { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "  {mark} {} (measured {})", p.description, p.measured);
        }
        for i in &r.intermediates {
            let _ = writeln!(s, "  {} = {}", i.name, i.value);
        }
    }
    let _ = writeln!(s);
    for o in &report.oracles {
        match (o.value, &o.failure) {
            (Some(v), _) if o.error > 0.0 => {
                let _ = writeln!(s, "oracle {} = {v} (± {:e})", o.quantity, o.error);
            }
            (Some(v), _) => {
                let _ = writeln!(s, "oracle {} = {v}", o.quantity);
            }
            (None, failure) => {
                let _ = writeln!(s, "oracle {} not computable: {}", o.quantity, failure.as_deref().unwrap_or(""));
            }
        }
    }
    match report.minimum {
        Some(m) => {
            let _ = writeln!(s, "minimum: {} = {}", m.name, m.value);
        }
        None => {
            let _ = writeln!(s, "minimum: none available");
        }
    }
    s
}

pub fn bound(report: &BoundReport<'_>, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Table => bound_table(report),
        Format::Csv => bound_csv(report)?,
        Format::Structured => serde_json::to_string_pretty(report)? + "\n",
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6}"))
}

pub fn summary_table(summary: &Summary) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<34} {:>9} {:>7} {:>10} {:>10} {:>10} {:>7} {:>5}",
        "bound", "quantity", "avail", "mean", "median", "max", "wins", "viol"
    );
    for b in &summary.bounds {
        let _ = writeln!(
            s,
            "{:<34} {:>9} {:>6.1}% {:>10} {:>10} {:>10} {:>6.1}% {:>5}",
            b.name,
            b.quantity.label(),
            100.0 * b.availability_rate,
            opt(b.mean_ratio),
            opt(b.median_ratio),
            opt(b.max_ratio),
            100.0 * b.win_rate,
            b.violations
        );
    }
    let _ = writeln!(
        s,
        "trials: {}, violations: {}, chain-order failures: {}, oracle failures: {}",
        summary.trials, summary.violations, summary.chain_failures, summary.oracle_failures
    );
    s
}

pub fn verify_table(summary: &VerifySummary) -> String {
    let mut s = summary_table(&summary.sweep);
    let _ = writeln!(s);
    for p in &summary.properties {
        let tag = if p.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{tag} {} ({} cases, {} failed)", p.name, p.cases, p.failures);
        if let Some(f) = &p.first_failure {
            let _ = writeln!(s, "     first failure: {f}");
        }
    }
    let _ = writeln!(s, "verify: {}", if summary.passed { "PASS" } else { "FAIL" });
    s
}
