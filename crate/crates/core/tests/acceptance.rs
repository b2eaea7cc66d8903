//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use specbound::bounds::{kittaneh_base, Sign};
use specbound::harness::{
    run_properties, run_sweep, summarize, trials_csv, Family, PropertyOutcome, PropertyScale, Summary, SweepConfig,
    TrialRecord,
};
use specbound::{catalog, ComplexMatrix, PowerSeries};

const SEED: u64 = 20_240_601;
const DIMS: [usize; 7] = [2, 3, 4, 6, 8, 12, 16];

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Verdict {
            ok,
            detail: detail.into(),
        }
    }
}

fn config(series: Vec<PowerSeries>, families: Vec<Family>, trials: usize, seed: u64) -> SweepConfig {
    SweepConfig {
        dims: DIMS.to_vec(),
        trials,
        seed,
        ..SweepConfig::new(series, families)
    }
}

fn catalog_series() -> Vec<PowerSeries> {
    catalog().into_iter().map(|e| e.series).collect()
}

fn violations_for(summary: &Summary, pred: impl Fn(&str) -> bool) -> (usize, usize) {
    summary
        .bounds
        .iter()
        .filter(|b| pred(&b.name))
        .fold((0, 0), |(v, n), b| (v + b.violations, n + b.compared))
}

fn property<'a>(props: &'a [PropertyOutcome], name: &str) -> &'a PropertyOutcome {
    props
        .iter()
        .find(|p| p.name == name)
        .unwrap_or_else(|| panic!("property {name} missing"))
}

fn props_verdict(props: &[PropertyOutcome], names: &[&str], min_cases: usize) -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        let p = property(props, name);
        ok &= p.passed() && p.cases >= min_cases;
        parts.push(format!("{}: {}/{} failed", p.name, p.failures, p.cases));
        if let Some(f) = &p.first_failure {
            parts.push(format!("first failure: {f}"));
        }
    }
    Verdict::new(ok, parts.join("; "))
}

fn criterion_single(single: &[(PowerSeries, Summary)]) -> Verdict {
    let mut ok = true;
    let mut total = 0;
    let mut worst = Vec::new();
    for (f, s) in single {
        let companion = s.bound("companion").expect("companion bound present");
        total += companion.compared;
        let series_ok = companion.violations == 0 && companion.compared >= 1000 && s.oracle_failures == 0;
        if !series_ok {
            worst.push(format!(
                "{}: {} violations over {} compared, {} oracle failures",
                f.name(),
                companion.violations,
                companion.compared,
                s.oracle_failures
            ));
        }
        ok &= series_ok;
    }
    let detail = if worst.is_empty() {
        format!("{} series, {total} compared instances, 0 violations", single.len())
    } else {
        worst.join("; ")
    };
    Verdict::new(ok, detail)
}

fn all_commuting(records: &[TrialRecord]) -> bool {
    records.iter().all(|r| r.results.iter().all(|b| b.reason().is_none_or(|x| !x.starts_with("commutator"))))
}

fn criterion_holder(summary: &Summary, records: &[TrialRecord], per_family: usize) -> Verdict {
    let is_holder = |n: &str| n.starts_with("holder-");
    let (violations, compared) = violations_for(summary, is_holder);
    let mut reasons = Vec::new();
    for b in summary.bounds.iter().filter(|b| b.name.starts_with("holder-l2")) {
        for (reason, count) in &b.unavailable_reasons {
            reasons.push(format!("{} unavailable {count}× ({reason})", b.name));
        }
    }
    let enough = Family::COMMUTING_PAIRS
        .iter()
        .all(|f| records.iter().filter(|r| r.spec.family == *f).count() >= per_family);
    let ok = violations == 0 && compared > 0 && enough && all_commuting(records);
    let mut detail = format!("{compared} comparisons over {} pairs, {violations} violations", records.len());
    if !reasons.is_empty() {
        detail.push_str(&format!("; {}", reasons.join(", ")));
    }
    Verdict::new(ok, detail)
}

fn criterion_norm_chains(summary: &Summary, records: &[TrialRecord]) -> Verdict {
    let lines = ["norm-square-mean", "mixed-norm", "root-square"];
    let is_line = |n: &str| lines.iter().any(|l| n == *l || n == format!("{l}-cs"));
    let (violations, compared) = violations_for(summary, is_line);
    let chain: Vec<&String> = records.iter().flat_map(|r| &r.chain_failures).collect();
    let ok = violations == 0 && chain.is_empty() && compared > 0;
    let mut detail = format!(
        "{compared} comparisons, {violations} violations, {} chain-order failures",
        chain.len()
    );
    if let Some(first) = chain.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    Verdict::new(ok, detail)
}

fn criterion_non_commuting(summary: &Summary, records: &[TrialRecord]) -> Verdict {
    let is_kittaneh = |n: &str| {
        n.starts_with("kittaneh-anticommutator") || n.starts_with("kittaneh-commutator") || n.starts_with("kittaneh-mixed")
    };
    let (violations, compared) = violations_for(summary, is_kittaneh);
    let non_commuting = records.iter().filter(|r| !all_commuting(std::slice::from_ref(r))).count();
    let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    let b = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
    let bound = kittaneh_base(&a, &b, Sign::Plus).unwrap().value().unwrap();
    let oracle = specbound::matrix::spectral_radius(&(&(&a * &b) + &(&b * &a))).unwrap();
    let equality = (bound - oracle).abs() <= 1e-10;
    let ok = violations == 0 && non_commuting >= 500 && equality;
    Verdict::new(
        ok,
        format!(
            "{non_commuting} non-commuting pairs, {compared} comparisons, {violations} violations; shift pair bound {bound} vs oracle {oracle}"
        ),
    )
}

fn criterion_equality(props: &[PropertyOutcome], single: &[(PowerSeries, Vec<TrialRecord>)]) -> Verdict {
    let p = property(props, "equality cases of the single-operator bound");
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut n = 0;
    for (_, records) in single.iter().filter(|(f, _)| f.has_nonnegative_coefficients()) {
        for r in records.iter().filter(|r| r.spec.family == Family::DiagonalPositive) {
            for c in r.checks.iter().filter(|c| c.name == "companion") {
                if let Some(ratio) = c.ratio {
                    lo = lo.min(ratio);
                    hi = hi.max(ratio);
                    n += 1;
                }
            }
        }
    }
    let sweep_ok = n > 0 && lo >= 1.0 - 1e-12 && hi <= 1.0 + 1e-8;
    Verdict::new(
        p.passed() && sweep_ok,
        format!(
            "{}: {}/{} failed; sweep diagonal-positive ratios over {n} trials in [{lo}, {hi}]",
            p.name, p.failures, p.cases
        ),
    )
}

fn criterion_determinism() -> Verdict {
    let make = |threads| SweepConfig {
        dims: vec![2, 4, 8],
        trials: 40,
        seed: SEED,
        threads: Some(threads),
        ..SweepConfig::new(catalog_series(), Family::ALL.to_vec())
    };
    let first = trials_csv(&run_sweep(&make(0)).unwrap()).unwrap();
    let second = trials_csv(&run_sweep(&make(4)).unwrap()).unwrap();
    let third = trials_csv(&run_sweep(&make(0)).unwrap()).unwrap();
    let ok = first == second && first == third && !first.is_empty();
    Verdict::new(
        ok,
        format!(
            "{} CSV bytes; sequential vs 4 workers identical: {}; repeated run identical: {}",
            first.len(),
            first == second,
            first == third
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut verdicts: Vec<(u32, &str, Verdict)> = Vec::new();

    // single-operator sweeps, one per catalog series
    let mut single_records = Vec::new();
    let mut single_summaries = Vec::new();
    for (i, f) in catalog_series().into_iter().enumerate() {
        let records = run_sweep(&config(vec![f.clone()], Family::SINGLE.to_vec(), 200, SEED + i as u64)).unwrap();
        single_summaries.push((f.clone(), summarize(&records)));
        single_records.push((f, records));
    }
    verdicts.push((1, "single-operator bound is sound", criterion_single(&single_summaries)));

    let pair_series = catalog_series();
    let commuting = run_sweep(&config(pair_series.clone(), Family::COMMUTING_PAIRS.to_vec(), 500, SEED + 100)).unwrap();
    let commuting_summary = summarize(&commuting);
    verdicts.push((
        2,
        "Hölder pair bounds are sound",
        criterion_holder(&commuting_summary, &commuting, 500),
    ));
    verdicts.push((
        3,
        "norm-based pair bounds are sound and ordered",
        criterion_norm_chains(&commuting_summary, &commuting),
    ));

    let independent = run_sweep(&config(pair_series, vec![Family::IndependentPair], 500, SEED + 200)).unwrap();
    let independent_summary = summarize(&independent);
    verdicts.push((
        4,
        "non-commuting anticommutator/commutator bounds are sound",
        criterion_non_commuting(&independent_summary, &independent),
    ));

    let props = run_properties(SEED, &PropertyScale::default()).unwrap();
    verdicts.push((
        5,
        "background identities",
        props_verdict(
            &props,
            &[
                "spectral mapping for powers",
                "r(AB) = r(BA)",
                "normal matrices attain r = ‖T‖",
                "Gelfand sequence envelope",
                "spectral radius below operator norm",
            ],
            300,
        ),
    ));
    verdicts.push((
        6,
        "commuting-family lemmas",
        props_verdict(
            &props,
            &[
                "subadditivity on commuting families",
                "continuity on commuting pairs",
                "truncated series radii form a Cauchy sequence",
            ],
            300,
        ),
    ));
    verdicts.push((7, "equality cases", criterion_equality(&props, &single_records)));
    let mut scalar = props_verdict(
        &props,
        &[
            "weighted-sum inequality behind the ratio bound",
            "companion evaluation matches closed forms",
            "tail certificates dominate measured remainders",
            "companion idempotence and monotonicity",
            "matrix truncation certificate",
        ],
        1,
    );
    let ws = property(&props, "weighted-sum inequality behind the ratio bound");
    scalar.ok &= ws.cases >= 10_000;
    verdicts.push((8, "scalar primitives and certificates", scalar));
    verdicts.push((9, "deterministic reports", criterion_determinism()));

    let mut failed = 0;
    for (n, title, v) in &verdicts {
        let tag = if v.ok { "PASS" } else { "FAIL" };
        println!("criterion {n}: {tag} - {title} ({})", v.detail);
        failed += usize::from(!v.ok);
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        verdicts.len() - failed,
        verdicts.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
