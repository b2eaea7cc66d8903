//! Spectral-radius upper bounds as pure functions, plus a dispatcher that
//! evaluates everything applicable and picks the smallest.
//!
//! A bound whose hypotheses fail is reported as [`BoundValue::Unavailable`]
//! with the failed conditions listed; only structural problems (mismatched
//! dimensions, a non-commuting pair where commutativity is required, a bad
//! Hölder exponent) are errors.

mod kittaneh;
mod pair;
pub mod scalar;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{operator_norm, spectral_radius, ComplexMatrix};
use crate::series::{eval_companion, PowerSeries};

pub use kittaneh::{kittaneh_base, kittaneh_mixed, kittaneh_product, kittaneh_product_chain, Sign};
pub use pair::{
    bound_pair_holder, bound_pair_mixed, bound_pair_norm, bound_pair_root_square, bound_pair_sq,
    PairNorms,
};

/// Default Hölder exponents tried by [`best_bound`].
pub const DEFAULT_P_GRID: [f64; 3] = [1.5, 2.0, 3.0];

/// Denominators below this are treated as vanishing.
const DENOMINATOR_FLOOR: f64 = 1e-300;

/// The spectral radius a bound is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Quantity {
    #[serde(rename = "r[f(T)]")]
    FunctionOfOperator,
    #[serde(rename = "r[f(AB)]")]
    FunctionOfProduct,
    #[serde(rename = "r(AB)")]
    Product,
    #[serde(rename = "r(AB+BA)")]
    Anticommutator,
    #[serde(rename = "r(AB-BA)")]
    Commutator,
}

impl Quantity {
    pub fn label(self) -> &'static str {
        match self {
            Quantity::FunctionOfOperator => "r[f(T)]",
            Quantity::FunctionOfProduct => "r[f(AB)]",
            Quantity::Product => "r(AB)",
            Quantity::Anticommutator => "r(AB+BA)",
            Quantity::Commutator => "r(AB-BA)",
        }
    }

    /// `true` for the quantities involving the power series.
    pub fn is_function(self) -> bool {
        matches!(self, Quantity::FunctionOfOperator | Quantity::FunctionOfProduct)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum BoundValue {
    Available { value: f64 },
    Unavailable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Precondition {
    pub description: String,
    pub holds: bool,
    pub measured: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Intermediate {
    pub name: String,
    pub value: f64,
}

/// One bound's outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub name: String,
    pub quantity: Quantity,
    #[serde(flatten)]
    pub value: BoundValue,
    pub preconditions: Vec<Precondition>,
    pub intermediates: Vec<Intermediate>,
}

impl BoundResult {
    pub fn value(&self) -> Option<f64> {
        match self.value {
            BoundValue::Available { value } => Some(value),
            BoundValue::Unavailable { .. } => None,
        }
    }

    pub fn is_available(&self) -> bool {
        self.value().is_some()
    }

    pub fn reason(&self) -> Option<&str> {
        match &self.value {
            BoundValue::Available { .. } => None,
            BoundValue::Unavailable { reason } => Some(reason),
        }
    }

    pub fn intermediate(&self, name: &str) -> Option<f64> {
        self.intermediates.iter().find(|i| i.name == name).map(|i| i.value)
    }

    /// An unavailable result carrying no measurements.
    pub fn unavailable(name: impl Into<String>, quantity: Quantity, reason: impl Into<String>) -> Self {
        BoundResult {
            name: name.into(),
            quantity,
            value: BoundValue::Unavailable { reason: reason.into() },
            preconditions: Vec::new(),
            intermediates: Vec::new(),
        }
    }
}

/// Accumulates preconditions and intermediates, then evaluates the bound
/// only if every precondition holds.
pub(crate) struct Builder<'a> {
    name: String,
    quantity: Quantity,
    series: Option<(&'a PowerSeries, f64)>,
    preconditions: Vec<Precondition>,
    intermediates: Vec<Intermediate>,
}

impl<'a> Builder<'a> {
    pub(crate) fn new(name: impl Into<String>, quantity: Quantity) -> Self {
        Builder {
            name: name.into(),
            quantity,
            series: None,
            preconditions: Vec::new(),
            intermediates: Vec::new(),
        }
    }

    pub(crate) fn with_series(mut self, f: &'a PowerSeries, tol: f64) -> Self {
        self.series = Some((f, tol));
        self
    }

    pub(crate) fn check(&mut self, description: impl Into<String>, holds: bool, measured: f64) {
        self.preconditions.push(Precondition {
            description: description.into(),
            holds,
            measured,
        });
    }

    /// Records `arg < R` for the attached series.
    pub(crate) fn check_disk(&mut self, label: &str, arg: f64) {
        let (f, _) = self.series.expect("check_disk needs a series");
        self.check(format!("{label} < R"), f.radius().contains(arg), arg);
    }

    pub(crate) fn note(&mut self, name: impl Into<String>, value: f64) {
        self.intermediates.push(Intermediate {
            name: name.into(),
            value,
        });
    }

    /// `f_a(arg)`, recorded as an intermediate.
    pub(crate) fn fa(&mut self, label: &str, arg: f64) -> Result<f64> {
        let (f, tol) = self.series.expect("fa needs a series");
        let v = eval_companion(f, arg, tol)?;
        self.note(format!("f_a({label})"), v);
        Ok(v)
    }

    pub(crate) fn all_hold(&self) -> bool {
        self.preconditions.iter().all(|p| p.holds)
    }

    fn failed_reason(&self) -> String {
        let failed: Vec<&str> = self
            .preconditions
            .iter()
            .filter(|p| !p.holds)
            .map(|p| p.description.as_str())
            .collect();
        format!("precondition failed: {}", failed.join(", "))
    }

    /// Evaluates `compute` when all preconditions hold. Evaluation failures of
    /// `f_a` (too close to the boundary, overflow) become unavailability.
    pub(crate) fn finish(mut self, compute: impl FnOnce(&mut Self) -> Result<f64>) -> BoundResult {
        let value = if !self.all_hold() {
            BoundValue::Unavailable {
                reason: self.failed_reason(),
            }
        } else {
            match compute(&mut self) {
                Ok(v) if v.is_finite() => BoundValue::Available { value: v },
                Ok(v) => BoundValue::Unavailable {
                    reason: format!("non-finite value {v}"),
                },
                Err(Error::DenominatorVanishes) => BoundValue::Unavailable {
                    reason: "denominator vanishes".into(),
                },
                Err(e) => BoundValue::Unavailable {
                    reason: format!("evaluation failed: {e}"),
                },
            }
        };
        BoundResult {
            name: self.name,
            quantity: self.quantity,
            value,
            preconditions: self.preconditions,
            intermediates: self.intermediates,
        }
    }
}

/// `r[f(T)] ≤ f_a(r(T))`, valid when `‖T‖ < R`.
pub fn bound_single(f: &PowerSeries, t: &ComplexMatrix, tol: f64) -> Result<BoundResult> {
    let norm = operator_norm(t)?;
    let r = spectral_radius(t)?;
    let mut b = Builder::new("companion", Quantity::FunctionOfOperator).with_series(f, tol);
    b.check_disk("‖T‖", norm);
    b.note("r(T)", r);
    b.note("‖T‖", norm);
    b.note("eval_uncertainty", tol);
    Ok(b.finish(|b| b.fa("r(T)", r)))
}

/// Input to [`best_bound`].
#[derive(Debug, Clone, Copy)]
pub enum Operands<'a> {
    Single(&'a ComplexMatrix),
    Pair(&'a ComplexMatrix, &'a ComplexMatrix),
}

/// The smallest available bound on the function quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selected {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestBound {
    pub results: Vec<BoundResult>,
    pub minimum: Option<Selected>,
    /// Commutator test outcome in pair mode.
    pub commutator_norm: Option<f64>,
    pub commuting: Option<bool>,
}

/// Formats a Hölder exponent for bound names: `2` rather than `2.0`.
pub(crate) fn fmt_p(p: f64) -> String {
    format!("{p}")
}

/// Names of the pair bounds that need a commuting pair, in report order.
pub fn commuting_bound_names(p_grid: &[f64]) -> Vec<(String, Quantity)> {
    let mut names = Vec::new();
    for &p in p_grid {
        names.push((format!("holder-l1[p={}]", fmt_p(p)), Quantity::FunctionOfProduct));
        names.push((format!("holder-l2[p={}]", fmt_p(p)), Quantity::FunctionOfProduct));
    }
    for n in [
        "holder-sq",
        "norm-square-mean",
        "norm-square-mean-cs",
        "mixed-norm",
        "mixed-norm-cs",
        "root-square",
        "root-square-cs",
    ] {
        names.push((n.to_string(), Quantity::FunctionOfProduct));
    }
    names.push(("kittaneh-product".into(), Quantity::Product));
    names.push(("kittaneh-product-chain".into(), Quantity::Product));
    names
}

/// Evaluates every applicable bound and selects the smallest available bound
/// on `r[f(T)]` or `r[f(AB)]`. Non-commuting pairs only get the bounds that
/// hold for arbitrary pairs; the rest are reported unavailable.
pub fn best_bound(f: &PowerSeries, operands: Operands<'_>, tol: f64, p_grid: &[f64]) -> Result<BestBound> {
    if let Some(&p) = p_grid.iter().find(|&&p| !(p > 1.0 && p.is_finite())) {
        return Err(Error::BadExponent(p));
    }
    let (results, commutator_norm, commuting) = match operands {
        Operands::Single(t) => (vec![bound_single(f, t, tol)?], None, None),
        Operands::Pair(a, b) => {
            let norms = PairNorms::new(a, b)?;
            let check = crate::matrix::commute_check(a, b, crate::matrix::COMMUTE_REL_TOL)?;
            let mut results = Vec::new();
            if check.commuting {
                for &p in p_grid {
                    let (l1, l2) = pair::holder_from(f, &norms, p, tol);
                    results.push(l1);
                    results.push(l2);
                }
                results.push(pair::sq_from(f, &norms, tol));
                let (a1, a2) = pair::norm_from(f, &norms, tol);
                let (b1, b2) = pair::mixed_from(f, &norms, tol);
                let (c1, c2) = pair::root_square_from(f, &norms, tol);
                results.extend([a1, a2, b1, b2, c1, c2]);
                results.push(kittaneh::product_from(&norms));
                results.push(kittaneh::product_chain_from(&norms));
            } else {
                let reason = format!(
                    "commutator test failed (‖AB−BA‖ = {:e} > {:e})",
                    check.commutator_norm, check.threshold
                );
                for (name, q) in commuting_bound_names(p_grid) {
                    results.push(BoundResult::unavailable(name, q, reason.clone()));
                }
            }
            for sign in [Sign::Plus, Sign::Minus] {
                results.push(kittaneh::base_from(&norms, sign));
            }
            for sign in [Sign::Plus, Sign::Minus] {
                results.push(kittaneh::mixed_from(&norms, sign));
            }
            (results, Some(check.commutator_norm), Some(check.commuting))
        }
    };
    let minimum = results
        .iter()
        .filter(|r| r.quantity.is_function())
        .filter_map(|r| r.value().map(|v| (r, v)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(r, v)| Selected {
            name: r.name.clone(),
            value: v,
        });
    Ok(BestBound {
        results,
        minimum,
        commutator_norm,
        commuting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn single_exp_zero() {
        let r = bound_single(&PowerSeries::exp(), &ComplexMatrix::zeros(2), 1e-10).unwrap();
        assert_eq!(r.name, "companion");
        assert_eq!(r.value(), Some(1.0));
    }

    #[test]
    fn single_nilpotent_resolvent() {
        let t = m(&[&[0.0, 0.5], &[0.0, 0.0]]);
        let r = bound_single(&PowerSeries::geometric(), &t, 1e-10).unwrap();
        assert_eq!(r.value(), Some(1.0));
        assert_eq!(r.preconditions.len(), 1);
        assert!(r.preconditions[0].holds);
        assert_abs_diff_eq!(r.preconditions[0].measured, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn single_out_of_disk_is_unavailable() {
        let t = ComplexMatrix::from_real_diagonal(&[0.5, 1.2]);
        let r = bound_single(&PowerSeries::geometric(), &t, 1e-10).unwrap();
        assert!(!r.is_available());
        assert!(r.reason().unwrap().contains("‖T‖ < R"));
        // a false precondition forces unavailability
        assert!(r.preconditions.iter().any(|p| !p.holds));
    }

    #[test]
    fn best_bound_single_zero() {
        let bb = best_bound(&PowerSeries::exp(), Operands::Single(&ComplexMatrix::zeros(3)), 1e-10, &DEFAULT_P_GRID).unwrap();
        let sel = bb.minimum.unwrap();
        assert_eq!(sel.name, "companion");
        assert_eq!(sel.value, 1.0);
    }

    #[test]
    fn best_bound_pair_diagonal() {
        let a = ComplexMatrix::from_real_diagonal(&[0.6]);
        let b = ComplexMatrix::from_real_diagonal(&[0.5]);
        let bb = best_bound(&PowerSeries::geometric(), Operands::Pair(&a, &b), 1e-10, &DEFAULT_P_GRID).unwrap();
        let l1 = bb.results.iter().find(|r| r.name == "holder-l1[p=2]").unwrap();
        let expected = (1.0_f64 / (1.0 - 0.36) / (1.0 - 0.25)).sqrt();
        assert_abs_diff_eq!(l1.value().unwrap(), expected, epsilon = 1e-9);
        assert!(bb.minimum.unwrap().value >= 1.0 / 0.7 - 1e-9);
        assert_eq!(bb.commuting, Some(true));
    }

    #[test]
    fn best_bound_non_commuting_gates() {
        let a = m(&[&[0.0, 0.5], &[0.0, 0.0]]);
        let b = m(&[&[0.0, 0.0], &[0.5, 0.0]]);
        let bb = best_bound(&PowerSeries::exp(), Operands::Pair(&a, &b), 1e-10, &DEFAULT_P_GRID).unwrap();
        assert_eq!(bb.commuting, Some(false));
        assert!(bb.minimum.is_none());
        for r in &bb.results {
            if r.name.starts_with("kittaneh-anticommutator")
                || r.name.starts_with("kittaneh-commutator")
                || r.name.starts_with("kittaneh-mixed")
            {
                assert!(r.is_available(), "{}", r.name);
            } else {
                assert!(r.reason().unwrap().starts_with("commutator test failed"), "{}", r.name);
            }
        }
    }

    #[test]
    fn best_bound_rejects_bad_grid() {
        let a = ComplexMatrix::identity(2);
        assert!(matches!(
            best_bound(&PowerSeries::exp(), Operands::Pair(&a, &a), 1e-10, &[1.0]),
            Err(Error::BadExponent(_))
        ));
    }

    #[test]
    fn serializes_value_or_reason() {
        let ok = bound_single(&PowerSeries::exp(), &ComplexMatrix::zeros(1), 1e-10).unwrap();
        let v = serde_json::to_value(&ok).unwrap();
        assert_eq!(v["status"], "available");
        assert_eq!(v["value"], 1.0);
        assert_eq!(v["quantity"], "r[f(T)]");
        let bad = bound_single(&PowerSeries::geometric(), &ComplexMatrix::identity(1), 1e-10).unwrap();
        let v = serde_json::to_value(&bad).unwrap();
        assert_eq!(v["status"], "unavailable");
        assert!(v["reason"].as_str().unwrap().contains("precondition"));
    }
}
