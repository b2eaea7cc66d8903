//! Bounds on `r[f(AB)]` for commuting `A`, `B`.

use serde::Serialize;

use super::{fmt_p, BoundResult, Builder, Quantity, DENOMINATOR_FLOOR};
use crate::error::{Error, Result};
use crate::matrix::{operator_norm, require_commuting, spectral_radius, ComplexMatrix};
use crate::series::PowerSeries;

/// Norms and spectral radii of a pair, computed once and shared by all
/// bounds. Powers are formed explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairNorms {
    pub a: f64,
    pub b: f64,
    pub ab: f64,
    pub ba: f64,
    pub a2: f64,
    pub b2: f64,
    /// `‖AB²‖`
    pub ab2: f64,
    /// `‖A²B‖`
    pub a2b: f64,
    pub r_a: f64,
    pub r_b: f64,
}

impl PairNorms {
    pub fn new(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimMismatch {
                left: a.dim(),
                right: b.dim(),
            });
        }
        let ab = a * b;
        let ba = b * a;
        let a2 = a * a;
        let b2 = b * b;
        Ok(PairNorms {
            a: operator_norm(a)?,
            b: operator_norm(b)?,
            ab: operator_norm(&ab)?,
            ba: operator_norm(&ba)?,
            a2: operator_norm(&a2)?,
            b2: operator_norm(&b2)?,
            ab2: operator_norm(&(&ab * b))?,
            a2b: operator_norm(&(&a2 * b))?,
            r_a: spectral_radius(a)?,
            r_b: spectral_radius(b)?,
        })
    }
}

fn commuting_norms(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<PairNorms> {
    let norms = PairNorms::new(a, b)?;
    require_commuting(a, b)?;
    Ok(norms)
}

/// Hölder-type bounds `(L1, L2)` for exponent `p > 1`, `q = p/(p-1)`:
///
/// * `L1 = f_a(r(A)^p)^{1/p} · f_a(r(B)^q)^{1/q}`
/// * `L2 = f_a(r(A)^p) · f_a(r(B)^q) / f_a(r(A)^{p-1} r(B)^{q-1})`
pub fn bound_pair_holder(
    f: &PowerSeries,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    p: f64,
    tol: f64,
) -> Result<(BoundResult, BoundResult)> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::BadExponent(p));
    }
    let norms = commuting_norms(a, b)?;
    Ok(holder_from(f, &norms, p, tol))
}

fn holder_checks(b: &mut Builder<'_>, n: &PairNorms, p: f64, q: f64) -> (f64, f64) {
    let (xa, xb) = (n.r_a.powf(p), n.r_b.powf(q));
    b.note("p", p);
    b.note("q", q);
    b.note("r(A)", n.r_a);
    b.note("r(B)", n.r_b);
    b.check_disk("‖A‖^p", n.a.powf(p));
    b.check_disk("‖B‖^q", n.b.powf(q));
    b.check_disk("r(A)^p", xa);
    b.check_disk("r(B)^q", xb);
    (xa, xb)
}

pub(crate) fn holder_from(f: &PowerSeries, n: &PairNorms, p: f64, tol: f64) -> (BoundResult, BoundResult) {
    let q = p / (p - 1.0);
    let tag = fmt_p(p);

    let mut l1 = Builder::new(format!("holder-l1[p={tag}]"), Quantity::FunctionOfProduct).with_series(f, tol);
    let (xa, xb) = holder_checks(&mut l1, n, p, q);
    l1.note("eval_uncertainty", 2.0 * tol);
    let l1 = l1.finish(|b| Ok(b.fa("r(A)^p", xa)?.powf(1.0 / p) * b.fa("r(B)^q", xb)?.powf(1.0 / q)));

    let mut l2 = Builder::new(format!("holder-l2[p={tag}]"), Quantity::FunctionOfProduct).with_series(f, tol);
    let (xa, xb) = holder_checks(&mut l2, n, p, q);
    let mixed = n.r_a.powf(p - 1.0) * n.r_b.powf(q - 1.0);
    l2.check_disk("r(A)^(p-1)·r(B)^(q-1)", mixed);
    l2.note("eval_uncertainty", 3.0 * tol);
    let l2 = l2.finish(|b| {
        let num = b.fa("r(A)^p", xa)? * b.fa("r(B)^q", xb)?;
        let den = b.fa("r(A)^(p-1)·r(B)^(q-1)", mixed)?;
        if den < DENOMINATOR_FLOOR {
            return Err(Error::DenominatorVanishes);
        }
        Ok(num / den)
    });
    (l1, l2)
}

/// The `p = q = 2` case: `sqrt(f_a(r(A)²) · f_a(r(B)²))`.
pub fn bound_pair_sq(f: &PowerSeries, a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<BoundResult> {
    let norms = commuting_norms(a, b)?;
    Ok(sq_from(f, &norms, tol))
}

pub(crate) fn sq_from(f: &PowerSeries, n: &PairNorms, tol: f64) -> BoundResult {
    let mut b = Builder::new("holder-sq", Quantity::FunctionOfProduct).with_series(f, tol);
    let (xa, xb) = (n.r_a.powf(2.0), n.r_b.powf(2.0));
    b.note("r(A)", n.r_a);
    b.note("r(B)", n.r_b);
    b.check_disk("‖A‖²", n.a.powf(2.0));
    b.check_disk("‖B‖²", n.b.powf(2.0));
    b.check_disk("r(A)²", xa);
    b.check_disk("r(B)²", xb);
    b.note("eval_uncertainty", 2.0 * tol);
    b.finish(|b| Ok((b.fa("r(A)²", xa)? * b.fa("r(B)²", xb)?).sqrt()))
}

fn stated_square_hypotheses(b: &mut Builder<'_>, n: &PairNorms) {
    b.check_disk("‖A‖²", n.a * n.a);
    b.check_disk("‖B‖²", n.b * n.b);
}

fn note_norms(b: &mut Builder<'_>, n: &PairNorms) {
    b.note("‖A‖", n.a);
    b.note("‖B‖", n.b);
    b.note("‖AB‖", n.ab);
    b.note("‖A²‖", n.a2);
    b.note("‖B²‖", n.b2);
}

/// Norm-based bounds:
///
/// * first: `½[f_a(‖AB‖) + f_a(‖A²‖^{1/2}‖B²‖^{1/2})]`
/// * second: `½[f_a(‖AB‖) + f_a(‖A²‖)^{1/2} f_a(‖B²‖)^{1/2}]`
pub fn bound_pair_norm(
    f: &PowerSeries,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Result<(BoundResult, BoundResult)> {
    let norms = commuting_norms(a, b)?;
    Ok(norm_from(f, &norms, tol))
}

pub(crate) fn norm_from(f: &PowerSeries, n: &PairNorms, tol: f64) -> (BoundResult, BoundResult) {
    let geo = n.a2.sqrt() * n.b2.sqrt();

    let mut first = Builder::new("norm-square-mean", Quantity::FunctionOfProduct).with_series(f, tol);
    stated_square_hypotheses(&mut first, n);
    first.check_disk("‖AB‖", n.ab);
    first.check_disk("‖A²‖^½‖B²‖^½", geo);
    note_norms(&mut first, n);
    first.note("eval_uncertainty", tol);
    let first = first.finish(|b| Ok(0.5 * (b.fa("‖AB‖", n.ab)? + b.fa("‖A²‖^½‖B²‖^½", geo)?)));

    let mut second = Builder::new("norm-square-mean-cs", Quantity::FunctionOfProduct).with_series(f, tol);
    stated_square_hypotheses(&mut second, n);
    second.check_disk("‖AB‖", n.ab);
    second.check_disk("‖A²‖", n.a2);
    second.check_disk("‖B²‖", n.b2);
    note_norms(&mut second, n);
    second.note("eval_uncertainty", 1.5 * tol);
    let second = second.finish(|b| {
        Ok(0.5 * (b.fa("‖AB‖", n.ab)? + (b.fa("‖A²‖", n.a2)? * b.fa("‖B²‖", n.b2)?).sqrt()))
    });
    (first, second)
}

/// Mixed-power bounds:
///
/// * first: `½f_a(‖AB‖) + ½ min{f_a(‖A‖^{1/2}‖AB²‖^{1/2}), f_a(‖A²B‖^{1/2}‖B‖^{1/2})}`
/// * second: the same with each `f_a(√(xy))` replaced by `√(f_a(x) f_a(y))`.
pub fn bound_pair_mixed(
    f: &PowerSeries,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Result<(BoundResult, BoundResult)> {
    let norms = commuting_norms(a, b)?;
    Ok(mixed_from(f, &norms, tol))
}

pub(crate) fn mixed_from(f: &PowerSeries, n: &PairNorms, tol: f64) -> (BoundResult, BoundResult) {
    let left = n.a.sqrt() * n.ab2.sqrt();
    let right = n.a2b.sqrt() * n.b.sqrt();
    let stated = |b: &mut Builder<'_>| {
        stated_square_hypotheses(b, n);
        b.check_disk("‖A‖", n.a);
        b.check_disk("‖B‖", n.b);
        b.check_disk("‖AB‖", n.ab);
        note_norms(b, n);
        b.note("‖AB²‖", n.ab2);
        b.note("‖A²B‖", n.a2b);
    };

    let mut first = Builder::new("mixed-norm", Quantity::FunctionOfProduct).with_series(f, tol);
    stated(&mut first);
    first.check_disk("‖A‖^½‖AB²‖^½", left);
    first.check_disk("‖A²B‖^½‖B‖^½", right);
    first.note("eval_uncertainty", tol);
    let first = first.finish(|b| {
        let base = b.fa("‖AB‖", n.ab)?;
        let l = b.fa("‖A‖^½‖AB²‖^½", left)?;
        let r = b.fa("‖A²B‖^½‖B‖^½", right)?;
        Ok(0.5 * base + 0.5 * l.min(r))
    });

    let mut second = Builder::new("mixed-norm-cs", Quantity::FunctionOfProduct).with_series(f, tol);
    stated(&mut second);
    second.check_disk("‖AB²‖", n.ab2);
    second.check_disk("‖A²B‖", n.a2b);
    second.note("eval_uncertainty", 1.5 * tol);
    let second = second.finish(|b| {
        let base = b.fa("‖AB‖", n.ab)?;
        let l = (b.fa("‖A‖", n.a)? * b.fa("‖AB²‖", n.ab2)?).sqrt();
        let r = (b.fa("‖A²B‖", n.a2b)? * b.fa("‖B‖", n.b)?).sqrt();
        Ok(0.5 * base + 0.5 * l.min(r))
    });
    (first, second)
}

/// Bounds with two alternative branches, both reported:
///
/// * first: `½f_a(‖AB‖) + ½·{ f_a(‖A‖^{1/2}‖B‖^{1/2}‖AB‖^{1/2})` or
///   `min{f_a(‖A‖‖B²‖^{1/2}), f_a(‖A²‖^{1/2}‖B‖)} }`
/// * second: the Cauchy–Schwarz relaxation of each branch.
///
/// The value is the smaller branch; `via_root` and `via_square` hold the two.
pub fn bound_pair_root_square(
    f: &PowerSeries,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Result<(BoundResult, BoundResult)> {
    let norms = commuting_norms(a, b)?;
    Ok(root_square_from(f, &norms, tol))
}

pub(crate) fn root_square_from(f: &PowerSeries, n: &PairNorms, tol: f64) -> (BoundResult, BoundResult) {
    let root = n.a.sqrt() * n.b.sqrt() * n.ab.sqrt();
    let sq_left = n.a * n.b2.sqrt();
    let sq_right = n.a2.sqrt() * n.b;

    let mut first = Builder::new("root-square", Quantity::FunctionOfProduct).with_series(f, tol);
    stated_square_hypotheses(&mut first, n);
    first.check_disk("‖AB‖", n.ab);
    first.check_disk("‖A‖^½‖B‖^½‖AB‖^½", root);
    first.check_disk("‖A‖‖B²‖^½", sq_left);
    first.check_disk("‖A²‖^½‖B‖", sq_right);
    note_norms(&mut first, n);
    first.note("eval_uncertainty", tol);
    let first = first.finish(|b| {
        let base = 0.5 * b.fa("‖AB‖", n.ab)?;
        let via_root = base + 0.5 * b.fa("‖A‖^½‖B‖^½‖AB‖^½", root)?;
        let via_square = base + 0.5 * b.fa("‖A‖‖B²‖^½", sq_left)?.min(b.fa("‖A²‖^½‖B‖", sq_right)?);
        b.note("via_root", via_root);
        b.note("via_square", via_square);
        Ok(via_root.min(via_square))
    });

    let mut second = Builder::new("root-square-cs", Quantity::FunctionOfProduct).with_series(f, tol);
    stated_square_hypotheses(&mut second, n);
    second.check_disk("‖AB‖", n.ab);
    second.check_disk("‖A‖‖B‖", n.a * n.b);
    second.check_disk("‖A‖²", n.a * n.a);
    second.check_disk("‖B²‖", n.b2);
    second.check_disk("‖A²‖", n.a2);
    second.check_disk("‖B‖²", n.b * n.b);
    note_norms(&mut second, n);
    second.note("eval_uncertainty", 1.5 * tol);
    let second = second.finish(|b| {
        let fab = b.fa("‖AB‖", n.ab)?;
        let base = 0.5 * fab;
        let via_root = base + 0.5 * (b.fa("‖A‖‖B‖", n.a * n.b)? * fab).sqrt();
        let left = (b.fa("‖A‖²", n.a * n.a)? * b.fa("‖B²‖", n.b2)?).sqrt();
        let right = (b.fa("‖A²‖", n.a2)? * b.fa("‖B‖²", n.b * n.b)?).sqrt();
        let via_square = base + 0.5 * left.min(right);
        b.note("via_root", via_root);
        b.note("via_square", via_square);
        Ok(via_root.min(via_square))
    });
    (first, second)
}
