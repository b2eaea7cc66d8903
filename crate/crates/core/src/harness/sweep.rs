//! Oracle comparison sweeps.

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::generate::{gen_matrix, gen_pair, Family, InstanceSpec};
use crate::bounds::{best_bound, BoundResult, Operands, Quantity, Selected, DEFAULT_P_GRID};
use crate::error::{Error, Result};
use crate::matrix::{function_radius, spectral_radius, ComplexMatrix};
use crate::series::{PowerSeries, Radius};

/// Relative slack on every soundness comparison.
pub const SOUNDNESS_REL_SLACK: f64 = 1e-8;
/// Relative slack on chain orderings between bound lines.
pub const CHAIN_REL_SLACK: f64 = 1e-10;
/// Relative tolerance for the `holder-sq` / `holder-l1[p=2]` agreement.
pub const HOLDER_CONSISTENCY_REL: f64 = 1e-12;

/// Environment variable capping the worker count (`0` runs sequentially).
pub const THREADS_ENV: &str = "SPECBOUND_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Series cycled through the trials of each family.
    pub series: Vec<PowerSeries>,
    pub families: Vec<Family>,
    pub dims: Vec<usize>,
    /// Trials per family.
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub p_grid: Vec<f64>,
    /// Worker cap; `None` defers to `SPECBOUND_THREADS`, then to rayon.
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn new(series: Vec<PowerSeries>, families: Vec<Family>) -> Self {
        SweepConfig {
            series,
            families,
            dims: vec![2, 4, 8],
            trials: 500,
            seed: 0,
            tol: crate::DEFAULT_TOL,
            p_grid: DEFAULT_P_GRID.to_vec(),
            threads: None,
        }
    }
}

/// Norm scale for an instance: single operators get `‖T‖ ≤ 0.9·min(R, 10)`;
/// pairs get `‖A‖, ‖B‖ ≤ 0.8·√R` (or `2` when `R = ∞`) so that the squared
/// disk conditions hold.
pub fn norm_ceiling(radius: Radius, pair: bool) -> f64 {
    match (pair, radius) {
        (false, r) => 0.9 * r.as_f64().min(10.0),
        (true, Radius::Finite(r)) => 0.8 * r.sqrt(),
        (true, Radius::Infinite) => 2.0,
    }
}

/// The reference value for one quantity of a trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Oracle {
    pub quantity: Quantity,
    pub value: Option<f64>,
    /// Error bar from the truncation remainder (zero for plain eigenvalue
    /// oracles).
    pub error: f64,
    pub failure: Option<String>,
}

/// One bound compared against its oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub quantity: Quantity,
    pub value: Option<f64>,
    pub reason: Option<String>,
    pub oracle: Option<f64>,
    pub oracle_error: Option<f64>,
    pub slack: Option<f64>,
    pub ratio: Option<f64>,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    pub spec: InstanceSpec,
    pub series: String,
    pub commutator_norm: Option<f64>,
    pub oracles: Vec<Oracle>,
    pub results: Vec<BoundResult>,
    pub checks: Vec<BoundCheck>,
    pub minimum: Option<Selected>,
    /// Chain orderings that failed, as human-readable descriptions.
    pub chain_failures: Vec<String>,
    pub violation: bool,
}

#[derive(Debug, Clone)]
struct Plan {
    index: usize,
    spec: InstanceSpec,
    series: usize,
}

fn plan(config: &SweepConfig) -> Result<Vec<Plan>> {
    if config.trials > 0 && (config.series.is_empty() || config.dims.is_empty() || config.families.is_empty()) {
        return Err(Error::InvalidArgument("a sweep needs at least one series, dim and family".into()));
    }
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let mut plans = Vec::new();
    for &family in &config.families {
        for i in 0..config.trials {
            let dim = config.dims[i % config.dims.len()];
            let series = (i / config.dims.len()) % config.series.len();
            let seed = master.next_u64();
            let fraction: f64 = master.random_range(0.25..=1.0);
            let ceiling = norm_ceiling(config.series[series].radius(), family.is_pair());
            plans.push(Plan {
                index: plans.len(),
                spec: InstanceSpec::new(seed, dim, family, fraction * ceiling),
                series,
            });
        }
    }
    Ok(plans)
}

/// Oracle for one quantity: `r(S_m(·))` of the certified truncation for the
/// function quantities, eigenvalues of the explicit product or sum otherwise.
/// Failures are recorded rather than returned.
pub fn compute_oracle(
    quantity: Quantity,
    f: &PowerSeries,
    single: Option<&ComplexMatrix>,
    pair: Option<(&ComplexMatrix, &ComplexMatrix)>,
    tol: f64,
) -> Oracle {
    let computed: Result<(f64, f64)> = match (quantity, single, pair) {
        (Quantity::FunctionOfOperator, Some(t), _) => function_radius(f, t, tol).map(|r| (r.value, r.error)),
        (Quantity::FunctionOfProduct, _, Some((a, b))) => function_radius(f, &(a * b), tol).map(|r| (r.value, r.error)),
        (Quantity::Product, _, Some((a, b))) => spectral_radius(&(a * b)).map(|r| (r, 0.0)),
        (Quantity::Anticommutator, _, Some((a, b))) => spectral_radius(&(&(a * b) + &(b * a))).map(|r| (r, 0.0)),
        (Quantity::Commutator, _, Some((a, b))) => spectral_radius(&(&(a * b) - &(b * a))).map(|r| (r, 0.0)),
        _ => Err(Error::InvalidArgument(format!("no operands for {quantity}"))),
    };
    match computed {
        Ok((value, error)) => Oracle {
            quantity,
            value: Some(value),
            error,
            failure: None,
        },
        Err(e) => Oracle {
            quantity,
            value: None,
            error: 0.0,
            failure: Some(e.to_string()),
        },
    }
}

/// `line ≤ relaxed + 1e−10·max(1, relaxed)`.
fn chain_ok(line: f64, relaxed: f64) -> bool {
    line <= relaxed + CHAIN_REL_SLACK * relaxed.abs().max(1.0)
}

/// Orderings between the lines of each bound family, checked whenever both
/// sides are available.
pub fn chain_failures(results: &[BoundResult]) -> Vec<String> {
    let find = |name: &str| results.iter().find(|r| r.name == name);
    let mut failures = Vec::new();
    let mut cmp = |label: String, line: Option<f64>, relaxed: Option<f64>| {
        if let (Some(l), Some(r)) = (line, relaxed) {
            if !chain_ok(l, r) {
                failures.push(format!("{label}: {l:e} > {r:e}"));
            }
        }
    };
    for (first, second) in [
        ("norm-square-mean", "norm-square-mean-cs"),
        ("mixed-norm", "mixed-norm-cs"),
        ("root-square", "root-square-cs"),
    ] {
        let (a, b) = (find(first), find(second));
        cmp(
            format!("{first} ≤ {second}"),
            a.and_then(BoundResult::value),
            b.and_then(BoundResult::value),
        );
        if first == "root-square" {
            for branch in ["via_root", "via_square"] {
                cmp(
                    format!("{first}.{branch} ≤ {second}.{branch}"),
                    a.and_then(|r| r.value().and(r.intermediate(branch))),
                    b.and_then(|r| r.value().and(r.intermediate(branch))),
                );
            }
        }
    }
    for r in results {
        let is_chain = r.name.starts_with("kittaneh-mixed") || r.name == "kittaneh-product-chain";
        if is_chain {
            for branch in ["relaxed_via_root", "relaxed_via_square"] {
                cmp(format!("{} ≤ {branch}", r.name), r.value(), r.intermediate(branch));
            }
        }
    }
    if let (Some(sq), Some(l1)) = (
        find("holder-sq").and_then(BoundResult::value),
        find("holder-l1[p=2]").and_then(BoundResult::value),
    ) {
        if (sq - l1).abs() > HOLDER_CONSISTENCY_REL * sq.abs().max(l1.abs()) {
            failures.push(format!("holder-sq = holder-l1[p=2]: {sq:e} vs {l1:e}"));
        }
    }
    failures
}

fn check(result: &BoundResult, oracle: Option<&Oracle>) -> BoundCheck {
    let value = result.value();
    let (oracle_value, oracle_error) = match oracle {
        Some(o) => (o.value, o.value.map(|_| o.error)),
        None => (None, None),
    };
    let (slack, ratio, violation) = match (value, oracle_value, oracle_error) {
        (Some(v), Some(o), Some(e)) => {
            let slack = SOUNDNESS_REL_SLACK * o.max(1.0) + e;
            let ratio = if o > 0.0 { Some(v / o) } else { None };
            (Some(slack), ratio, v < o - slack)
        }
        _ => (None, None, false),
    };
    BoundCheck {
        name: result.name.clone(),
        quantity: result.quantity,
        value,
        reason: result.reason().map(str::to_string),
        oracle: oracle_value,
        oracle_error,
        slack,
        ratio,
        violation,
    }
}

fn run_trial(plan: &Plan, config: &SweepConfig) -> Result<TrialRecord> {
    let f = &config.series[plan.series];
    let spec = plan.spec;
    let (single, pair) = if spec.family.is_pair() {
        (None, Some(gen_pair(&spec)?))
    } else {
        (Some(gen_matrix(&spec)?), None)
    };
    let operands = match (&single, &pair) {
        (Some(t), _) => Operands::Single(t),
        (_, Some((a, b))) => Operands::Pair(a, b),
        _ => unreachable!("one of the operand kinds is always generated"),
    };
    let best = best_bound(f, operands, config.tol, &config.p_grid)?;

    let mut quantities: Vec<Quantity> = best.results.iter().filter(|r| r.is_available()).map(|r| r.quantity).collect();
    quantities.sort();
    quantities.dedup();
    let pair_refs = pair.as_ref().map(|(a, b)| (a, b));
    let oracles: Vec<Oracle> = quantities
        .into_iter()
        .map(|q| compute_oracle(q, f, single.as_ref(), pair_refs, config.tol))
        .collect();

    let checks: Vec<BoundCheck> = best
        .results
        .iter()
        .map(|r| check(r, oracles.iter().find(|o| o.quantity == r.quantity)))
        .collect();
    let chain_failures = chain_failures(&best.results);
    let violation = checks.iter().any(|c| c.violation);
    Ok(TrialRecord {
        index: plan.index,
        spec,
        series: f.name().to_string(),
        commutator_norm: best.commutator_norm,
        oracles,
        results: best.results,
        checks,
        minimum: best.minimum,
        chain_failures,
        violation,
    })
}

fn worker_cap(config: &SweepConfig) -> Option<usize> {
    config
        .threads
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
}

/// Runs every planned trial. Records come back in plan order regardless of
/// the worker count, so reports are reproducible.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<TrialRecord>> {
    let plans = plan(config)?;
    let run = |p: &Plan| run_trial(p, config);
    match worker_cap(config) {
        Some(0) => plans.iter().map(run).collect(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start {n} workers: {e}")))?;
            pool.install(|| plans.par_iter().map(run).collect())
        }
        None => plans.par_iter().map(run).collect(),
    }
}

/// Aggregate statistics for one bound across a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSummary {
    pub name: String,
    pub quantity: Quantity,
    pub trials: usize,
    pub available: usize,
    pub availability_rate: f64,
    /// Available values compared against an oracle.
    pub compared: usize,
    pub mean_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub wins: usize,
    pub win_rate: f64,
    pub violations: usize,
    /// Unavailability reasons with their counts; measured numbers in
    /// parentheses are dropped so equal causes group together.
    pub unavailable_reasons: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub violations: usize,
    pub violating_trials: usize,
    pub chain_failures: usize,
    pub oracle_failures: usize,
    pub bounds: Vec<BoundSummary>,
}

impl Summary {
    pub fn is_clean(&self) -> bool {
        self.violations == 0 && self.chain_failures == 0
    }

    pub fn bound(&self, name: &str) -> Option<&BoundSummary> {
        self.bounds.iter().find(|b| b.name == name)
    }
}

fn reason_key(reason: &str) -> String {
    reason.split(" (").next().unwrap_or(reason).trim().to_string()
}

fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some(0.5 * (sorted[n / 2 - 1] + sorted[n / 2])),
    }
}

pub fn summarize(records: &[TrialRecord]) -> Summary {
    struct Acc {
        quantity: Quantity,
        trials: usize,
        available: usize,
        compared: usize,
        ratios: Vec<f64>,
        wins: usize,
        violations: usize,
        reasons: BTreeMap<String, usize>,
    }
    let mut order: Vec<String> = Vec::new();
    let mut acc: BTreeMap<String, Acc> = BTreeMap::new();
    for rec in records {
        let winner = rec.minimum.as_ref().map(|m| m.name.as_str());
        for c in &rec.checks {
            let a = acc.entry(c.name.clone()).or_insert_with(|| {
                order.push(c.name.clone());
                Acc {
                    quantity: c.quantity,
                    trials: 0,
                    available: 0,
                    compared: 0,
                    ratios: Vec::new(),
                    wins: 0,
                    violations: 0,
                    reasons: BTreeMap::new(),
                }
            });
            a.trials += 1;
            if c.value.is_some() {
                a.available += 1;
            }
            if c.slack.is_some() {
                a.compared += 1;
            }
            if let Some(r) = c.ratio {
                a.ratios.push(r);
            }
            if let Some(reason) = &c.reason {
                *a.reasons.entry(reason_key(reason)).or_default() += 1;
            }
            if winner == Some(c.name.as_str()) {
                a.wins += 1;
            }
            if c.violation {
                a.violations += 1;
            }
        }
    }
    let bounds = order
        .into_iter()
        .map(|name| {
            let mut a = acc.remove(&name).expect("every ordered name was accumulated");
            a.ratios.sort_by(f64::total_cmp);
            let n = a.ratios.len();
            BoundSummary {
                name,
                quantity: a.quantity,
                trials: a.trials,
                available: a.available,
                availability_rate: a.available as f64 / a.trials as f64,
                compared: a.compared,
                mean_ratio: (n > 0).then(|| a.ratios.iter().sum::<f64>() / n as f64),
                median_ratio: median(&a.ratios),
                min_ratio: a.ratios.first().copied(),
                max_ratio: a.ratios.last().copied(),
                wins: a.wins,
                win_rate: a.wins as f64 / a.trials as f64,
                violations: a.violations,
                unavailable_reasons: a.reasons,
            }
        })
        .collect::<Vec<_>>();
    Summary {
        trials: records.len(),
        violations: bounds.iter().map(|b| b.violations).sum(),
        violating_trials: records.iter().filter(|r| r.violation).count(),
        chain_failures: records.iter().map(|r| r.chain_failures.len()).sum(),
        oracle_failures: records
            .iter()
            .flat_map(|r| &r.oracles)
            .filter(|o| o.failure.is_some())
            .count(),
        bounds,
    }
}
