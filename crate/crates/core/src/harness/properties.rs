//! Property checks on random instances: background spectral-radius
//! identities, the commuting-family lemmas behind the single-operator bound,
//! scalar primitives and series certificates.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::generate::{gen_commuting_pair, gen_matrix, gen_pair, gen_scaled_unitary, Family, InstanceSpec};
use super::sweep::norm_ceiling;
use crate::bounds::scalar::weighted_sums;
use crate::bounds::bound_single;
use crate::error::Result;
use crate::matrix::{
    eval_matrix_series, function_radius, gelfand_sequence, operator_norm, partial_sum, spectral_radius, ComplexMatrix,
};
use crate::series::{abs_companion, catalog, certify_truncation, eval_companion, lookup, PowerSeries, SeriesCatalogEntry};

/// Outcome of one property over all its cases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest amount by which a case exceeded its allowance (negative when
    /// every case passed with room to spare).
    pub worst_excess: f64,
    pub first_failure: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    worst: f64,
    first: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
            worst: f64::NEG_INFINITY,
            first: None,
        }
    }

    /// Records `lhs ≤ rhs + allowance`.
    fn le(&mut self, lhs: f64, rhs: f64, allowance: f64, detail: impl FnOnce() -> String) {
        self.cases += 1;
        let excess = lhs - rhs - allowance;
        // NaN counts as a failure
        let ok = excess <= 0.0;
        self.worst = self.worst.max(if excess.is_nan() { f64::INFINITY } else { excess });
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(format!("{}: {lhs:e} > {rhs:e} + {allowance:e}", detail()));
            }
        }
    }

    fn fail(&mut self, detail: String) {
        self.cases += 1;
        self.failures += 1;
        self.worst = f64::INFINITY;
        self.first.get_or_insert(detail);
    }

    fn done(self) -> PropertyOutcome {
        PropertyOutcome {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            worst_excess: if self.cases == 0 { 0.0 } else { self.worst },
            first_failure: self.first,
        }
    }
}

/// Case counts for [`run_properties`].
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyScale {
    /// Random matrix instances per matrix property.
    pub instances: usize,
    /// Random cases for the weighted-sum inequality.
    pub scalar_cases: usize,
    /// Grid points per series for closed-form and certificate checks.
    pub grid_points: usize,
    pub dims: Vec<usize>,
    pub tol: f64,
}

impl Default for PropertyScale {
    fn default() -> Self {
        PropertyScale {
            instances: 300,
            scalar_cases: 10_000,
            grid_points: 100,
            dims: vec![2, 3, 4, 6, 8, 12, 16],
            tol: crate::DEFAULT_TOL,
        }
    }
}

const REL: f64 = 1e-8;

fn slack(scale: f64) -> f64 {
    REL * scale.abs().max(1.0)
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Single-family instances cycling through families and dims, each with
/// `‖T‖ = ceiling·u`, `u ∈ [0.25, 1]`.
fn single_instances(
    seed: u64,
    stream: u64,
    count: usize,
    dims: &[usize],
    ceiling: impl Fn(usize) -> f64,
) -> Result<Vec<(InstanceSpec, ComplexMatrix)>> {
    let mut r = rng(seed, stream);
    (0..count)
        .map(|i| {
            let family = Family::SINGLE[i % Family::SINGLE.len()];
            let dim = dims[(i / Family::SINGLE.len()) % dims.len()];
            let target = ceiling(i) * r.random_range(0.25..=1.0);
            let spec = InstanceSpec::new(r.next_u64(), dim, family, target);
            gen_matrix(&spec).map(|m| (spec, m))
        })
        .collect()
}

fn describe(spec: &InstanceSpec) -> String {
    format!("{} n={} seed={} ‖T‖={}", spec.family, spec.dim, spec.seed, spec.norm_target)
}

/// `|r(Tᵐ) − r(T)ᵐ| ≤ 1e−8·max(1, r(T)ᵐ)` for `m = 2..=5`.
pub fn spectral_mapping(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("spectral mapping for powers");
    for (spec, m) in single_instances(seed, 1, scale.instances, &scale.dims, |_| 1.5)? {
        let r = spectral_radius(&m)?;
        for k in 2..=5u32 {
            let rk = spectral_radius(&m.pow(k))?;
            let expected = r.powi(k as i32);
            t.le((rk - expected).abs(), 0.0, slack(expected), || format!("{} m={k}", describe(&spec)));
        }
    }
    Ok(t.done())
}

/// `r(T) ≤ ‖T‖ + 1e−10`.
pub fn norm_dominates(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("spectral radius below operator norm");
    for (spec, m) in single_instances(seed, 2, scale.instances, &scale.dims, |_| 5.0)? {
        t.le(spectral_radius(&m)?, operator_norm(&m)?, 1e-10, || describe(&spec));
    }
    Ok(t.done())
}

/// `|r(AB) − r(BA)| ≤ 1e−8·max(1, r(AB))` for arbitrary pairs.
pub fn product_swap(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("r(AB) = r(BA)");
    let mut r = rng(seed, 3);
    let families = [Family::IndependentPair, Family::CommutingPolynomialPair, Family::CommutingTriangularPair];
    for i in 0..scale.instances {
        let family = families[i % families.len()];
        let dim = scale.dims[(i / families.len()) % scale.dims.len()];
        let spec = InstanceSpec::new(r.next_u64(), dim, family, r.random_range(0.2..=2.0));
        let (a, b) = gen_pair(&spec)?;
        let rab = spectral_radius(&(&a * &b))?;
        let rba = spectral_radius(&(&b * &a))?;
        t.le((rab - rba).abs(), 0.0, slack(rab), || describe(&spec));
    }
    Ok(t.done())
}

/// `|r(T) − ‖T‖| ≤ 1e−10` for Hermitian, unitary and positive diagonal `T`.
pub fn normal_equality(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("normal matrices attain r = ‖T‖");
    let mut r = rng(seed, 4);
    for i in 0..scale.instances {
        let dim = scale.dims[i % scale.dims.len()];
        let target = r.random_range(0.1..=5.0);
        let s = r.next_u64();
        let (label, m) = match i % 3 {
            0 => ("hermitian", gen_matrix(&InstanceSpec::new(s, dim, Family::Hermitian, target))?),
            1 => ("diagonal-positive", gen_matrix(&InstanceSpec::new(s, dim, Family::DiagonalPositive, target))?),
            _ => ("scaled unitary", gen_scaled_unitary(s, dim, target)?),
        };
        let gap = (spectral_radius(&m)? - operator_norm(&m)?).abs();
        t.le(gap, 0.0, 1e-10, || format!("{label} n={dim} seed={s}"));
    }
    Ok(t.done())
}

/// Gelfand power-of-two sequence: non-increasing within `1e−10` and never
/// below `r(T) − 1e−8`.
pub fn gelfand_envelope(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("Gelfand sequence envelope");
    for (spec, m) in single_instances(seed, 5, scale.instances, &scale.dims, |_| 1.0)? {
        let r = spectral_radius(&m)?;
        let g = gelfand_sequence(&m, 5)?;
        for k in 0..g.len() {
            t.le(r, g[k], 1e-8, || format!("{} g_{k} below r", describe(&spec)));
            if k + 1 < g.len() {
                t.le(g[k + 1], g[k], 1e-10, || format!("{} g_{} > g_{k}", describe(&spec), k + 1));
            }
        }
    }
    Ok(t.done())
}

/// `r(Σ aⱼMʲ) ≤ Σ r(aⱼMʲ)` for up to six terms.
pub fn subadditivity(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("subadditivity on commuting families");
    let mut r = rng(seed, 6);
    for (spec, m) in single_instances(seed, 7, scale.instances, &scale.dims, |_| 1.2)? {
        let terms = r.random_range(2..=6);
        let mut total = ComplexMatrix::zeros(m.dim());
        let mut rhs = 0.0;
        for j in 0..terms {
            let v = m.pow(j as u32).scale_complex(gaussian(&mut r));
            rhs += spectral_radius(&v)?;
            total = &total + &v;
        }
        let lhs = spectral_radius(&total)?;
        t.le(lhs, rhs, slack(rhs), || format!("{} terms={terms}", describe(&spec)));
    }
    Ok(t.done())
}

/// `|r(V) − r(S)| ≤ r(V − S)` for commuting `V`, `S`.
pub fn continuity(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("continuity on commuting pairs");
    let mut r = rng(seed, 8);
    for i in 0..scale.instances {
        let family = Family::COMMUTING_PAIRS[i % 2];
        let dim = scale.dims[(i / 2) % scale.dims.len()];
        let spec = InstanceSpec::new(r.next_u64(), dim, family, r.random_range(0.2..=2.0));
        let (v, w) = gen_commuting_pair(&spec)?;
        // S = V + δW stays in the commutant of V
        let delta = 10f64.powf(r.random_range(-3.0..=0.0));
        let s = &v + &w.scale(delta);
        let rv = spectral_radius(&v)?;
        let rs = spectral_radius(&s)?;
        let rd = spectral_radius(&(&v - &s))?;
        t.le((rv - rs).abs(), rd, slack(rv.max(rs)), || format!("{} δ={delta:e}", describe(&spec)));
    }
    Ok(t.done())
}

fn catalog_series() -> Vec<PowerSeries> {
    catalog().into_iter().map(|e| e.series).collect()
}

/// `|r(S_m(T)) − r(S_{m'}(T))| ≤ Σ_{m<j≤m'} |a_j|‖T‖ʲ` for `m < m'`, where
/// `m'` is the certified order.
pub fn cauchy_truncation(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("truncated series radii form a Cauchy sequence");
    let series = catalog_series();
    let instances = single_instances(seed, 9, scale.instances, &scale.dims, |i| {
        norm_ceiling(series[i % series.len()].radius(), false)
    })?;
    for (i, (spec, m)) in instances.iter().enumerate() {
        let f = &series[i % series.len()];
        let norm = operator_norm(m)?;
        let top = certify_truncation(f, norm, scale.tol, crate::series::DEFAULT_MAX_TERMS)?.order;
        let r_top = spectral_radius(&partial_sum(f, m, top))?;
        let coeffs = f.coeffs(top + 1);
        for order in [0usize, 1, 2, 4, 8, 16, 32, 64].into_iter().filter(|&o| o < top) {
            let r_m = spectral_radius(&partial_sum(f, m, order))?;
            let bridge: f64 = (order + 1..=top).map(|j| coeffs[j].norm() * norm.powi(j as i32)).sum();
            t.le((r_m - r_top).abs(), bridge, slack(r_top.max(r_m)), || {
                format!("{} {} m={order} m'={top}", describe(spec), f.name())
            });
        }
    }
    Ok(t.done())
}

/// `‖eval(T, tol/10) − eval(T, tol)‖ ≤ 1.1·(tol + tol/10)`.
pub fn truncation_certificate(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("matrix truncation certificate");
    let series = catalog_series();
    let tol = scale.tol;
    let instances = single_instances(seed, 10, scale.instances, &scale.dims, |i| {
        norm_ceiling(series[i % series.len()].radius(), false)
    })?;
    for (i, (spec, m)) in instances.iter().enumerate() {
        let f = &series[i % series.len()];
        let coarse = eval_matrix_series(f, m, tol)?;
        let fine = eval_matrix_series(f, m, tol / 10.0)?;
        if coarse.remainder_bound > tol || fine.remainder_bound > tol / 10.0 {
            t.fail(format!("{} {}: remainder bound above tolerance", describe(spec), f.name()));
            continue;
        }
        let diff = operator_norm(&(&fine.value - &coarse.value))?;
        t.le(diff, 1.1 * (tol + tol / 10.0), 0.0, || format!("{} {}", describe(spec), f.name()));
    }
    Ok(t.done())
}

/// Weighted-sum inequality on random nonnegative weights and complex data.
pub fn weighted_sum_inequality(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("weighted-sum inequality behind the ratio bound");
    let mut r = rng(seed, 11);
    for case in 0..scale.scalar_cases {
        let len = r.random_range(1..=8);
        let weights: Vec<f64> = (0..len).map(|_| r.random_range(0.0..=1.0)).collect();
        let x: Vec<Complex64> = (0..len).map(|_| gaussian(&mut r)).collect();
        let y: Vec<Complex64> = (0..len).map(|_| gaussian(&mut r)).collect();
        let p = r.random_range(1.05..=5.0);
        let s = weighted_sums(&weights, &x, &y, p)?;
        t.le(s.rhs, s.lhs, slack(s.lhs), || format!("case {case} p={p}"));
    }
    Ok(t.done())
}

/// Catalog entries plus a few parameterised `2F1` entries with closed forms.
pub fn closed_form_entries() -> Result<Vec<SeriesCatalogEntry>> {
    let mut entries = catalog();
    for (a, b, c) in [(0.5, 1.5, 1.5), (2.0, 0.7, 2.0), (1.0, 1.0, 1.0)] {
        let params = [("alpha".to_string(), a), ("beta".to_string(), b), ("gamma".to_string(), c)];
        entries.push(lookup("2F1", &params)?);
    }
    entries.retain(|e| e.closed_form.is_some());
    Ok(entries)
}

fn grid(entry: &SeriesCatalogEntry, points: usize) -> Vec<f64> {
    let top = 0.95 * entry.series.radius().as_f64().min(10.0);
    let steps = points.max(2) - 1;
    (0..points).map(|k| top * k as f64 / steps as f64).collect()
}

/// `|closed_form(x) − f_a(x)| ≤ 10·tol` on a grid over `[0, 0.95·min(R, 10)]`.
pub fn closed_form_agreement(scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("companion evaluation matches closed forms");
    for entry in closed_form_entries()? {
        for x in grid(&entry, scale.grid_points) {
            let exact = entry.closed_form_eval(x).expect("retained entries have closed forms");
            let v = eval_companion(&entry.series, x, scale.tol)?;
            t.le((v - exact).abs(), 10.0 * scale.tol, 0.0, || format!("{} x={x}", entry.name()));
        }
    }
    Ok(t.done())
}

/// The certified tail never underestimates the measured remainder
/// `closed_form(x) − S_m(x)`, and `|S_m(x) − closed_form(x)| ≤ tol`. Both
/// comparisons allow `(m + 2)·ε·f_a(x)` for floating-point summation.
pub fn tail_certificates(scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("tail certificates dominate measured remainders");
    for entry in closed_form_entries()? {
        for x in grid(&entry, scale.grid_points) {
            let exact = entry.closed_form_eval(x).expect("retained entries have closed forms");
            let cert = certify_truncation(&entry.series, x, scale.tol, crate::series::DEFAULT_MAX_TERMS)?;
            let rounding = (cert.order as f64 + 2.0) * f64::EPSILON * exact.abs().max(1.0);
            let measured = exact - cert.partial_sum;
            t.le(measured, cert.tail_bound, rounding, || {
                format!("{} x={x} m={} remainder", entry.name(), cert.order)
            });
            t.le(measured.abs(), scale.tol, rounding, || format!("{} x={x} m={} sum", entry.name(), cert.order));
        }
    }
    Ok(t.done())
}

/// Companion idempotence, equal radii and monotone growth of `f_a`.
pub fn companion_invariants(scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("companion idempotence and monotonicity");
    for entry in catalog() {
        let f = &entry.series;
        let once = abs_companion(f);
        let twice = abs_companion(&once);
        if once.radius() != f.radius() {
            t.fail(format!("{}: companion radius differs", f.name()));
        }
        for n in 0..64 {
            t.le((once.coeff(n) - twice.coeff(n)).norm(), 0.0, 0.0, || format!("{} coeff {n}", f.name()));
        }
        let mut prev = None;
        for x in grid(&entry, scale.grid_points) {
            let v = eval_companion(f, x, scale.tol)?;
            if let Some(p) = prev {
                t.le(p, v, 2.0 * scale.tol, || format!("{} x={x}", f.name()));
            }
            prev = Some(v);
        }
    }
    Ok(t.done())
}

/// Equality cases of the single-operator bound: positive diagonal `T` with
/// nonnegative-coefficient series gives ratio in `[1 − 1e−12, 1 + 1e−8]`,
/// and the nilpotent resolvent reproduces `1` to `1e−12`.
pub fn equality_cases(seed: u64, scale: &PropertyScale) -> Result<PropertyOutcome> {
    let mut t = Tally::new("equality cases of the single-operator bound");
    let series: Vec<PowerSeries> = catalog_series()
        .into_iter()
        .filter(PowerSeries::has_nonnegative_coefficients)
        .collect();
    let mut r = rng(seed, 12);
    for i in 0..scale.instances {
        let f = &series[i % series.len()];
        let dim = scale.dims[(i / series.len()) % scale.dims.len()];
        let target = norm_ceiling(f.radius(), false) * r.random_range(0.05..=1.0);
        let spec = InstanceSpec::new(r.next_u64(), dim, Family::DiagonalPositive, target);
        let m = gen_matrix(&spec)?;
        let bound = bound_single(f, &m, scale.tol)?.value();
        let oracle = function_radius(f, &m, scale.tol)?.value;
        match bound {
            Some(b) if oracle > 0.0 => {
                let ratio = b / oracle;
                let label = || format!("{} {} ratio={ratio}", describe(&spec), f.name());
                t.le(ratio, 1.0 + 1e-8, 0.0, label);
                t.le(1.0 - 1e-12, ratio, 0.0, label);
            }
            _ => t.fail(format!("{} {}: bound unavailable", describe(&spec), f.name())),
        }
    }
    let nil = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.0, 0.0]])?;
    let g = PowerSeries::geometric();
    let bound = bound_single(&g, &nil, scale.tol)?.value().unwrap_or(f64::NAN);
    let oracle = function_radius(&g, &nil, scale.tol)?.value;
    t.le((bound - 1.0).abs(), 1e-12, 0.0, || "nilpotent resolvent bound".into());
    t.le((oracle - 1.0).abs(), 1e-12, 0.0, || "nilpotent resolvent oracle".into());
    Ok(t.done())
}

/// Runs every property. Outcomes are returned in a fixed order.
pub fn run_properties(seed: u64, scale: &PropertyScale) -> Result<Vec<PropertyOutcome>> {
    type Check = fn(u64, &PropertyScale) -> Result<PropertyOutcome>;
    let checks: [Check; 14] = [
        spectral_mapping,
        norm_dominates,
        product_swap,
        normal_equality,
        gelfand_envelope,
        subadditivity,
        continuity,
        cauchy_truncation,
        truncation_certificate,
        weighted_sum_inequality,
        |_, s| closed_form_agreement(s),
        |_, s| tail_certificates(s),
        |_, s| companion_invariants(s),
        equality_cases,
    ];
    checks.par_iter().map(|c| c(seed, scale)).collect()
}
