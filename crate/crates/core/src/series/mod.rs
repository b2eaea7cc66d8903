//! Power series `f(z) = Σ aₙ zⁿ`, their absolute-value companions
//! `f_a(z) = Σ |aₙ| zⁿ`, and evaluation of `f_a` at nonnegative reals with a
//! certified truncation error.

mod catalog;

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use catalog::{catalog, lookup, ClosedForm, HypergeometricParams, SeriesCatalogEntry};

/// Default cap on the number of terms a certified evaluation may use.
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// Radius of convergence, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Finite(f64),
    Infinite,
}

impl Radius {
    /// `true` when `x < R`.
    pub fn contains(self, x: f64) -> bool {
        match self {
            Radius::Finite(r) => x < r,
            Radius::Infinite => x.is_finite(),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Radius::Finite(r) => r,
            Radius::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Radius::Finite(_))
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{r}"),
            Radius::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Radius::Finite(r) => s.serialize_f64(*r),
            Radius::Infinite => s.serialize_str("inf"),
        }
    }
}

/// How coefficients are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoeffMode {
    ExactClosedForm,
    Recurrence,
}

/// The coefficient families the crate knows how to generate.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesKind {
    /// `1/n!`
    Exp,
    /// `(-1)^k/(2k)!` on even powers.
    Cos,
    /// `(-1)^k/(2k+1)!` on odd powers.
    Sin,
    Cosh,
    Sinh,
    /// `Σ zⁿ`
    Geometric,
    /// `Σ (-1)ⁿ zⁿ = 1/(1+z)`
    Resolvent,
    /// `Σ_{n≥1} (-1)ⁿ zⁿ / n = ln 1/(1+z)`
    LogResolvent,
    /// `Σ_{n≥1} z^{2n-1}/(2n-1)`, i.e. artanh.
    OddReciprocal,
    /// Taylor series of arcsin, via the central-binomial recurrence.
    Arcsin,
    /// Gauss hypergeometric `₂F₁(α, β; γ; z)`.
    Hypergeometric { alpha: f64, beta: f64, gamma: f64 },
    /// A finite coefficient list.
    Polynomial(Vec<Complex64>),
}

/// A power series with a name, a radius of convergence and a coefficient
/// generator. Values are immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    name: String,
    kind: SeriesKind,
    radius: Radius,
    absolute: bool,
}

impl PowerSeries {
    fn with_kind(name: &str, kind: SeriesKind, radius: Radius) -> Self {
        PowerSeries {
            name: name.to_string(),
            kind,
            radius,
            absolute: false,
        }
    }

    pub fn exp() -> Self {
        Self::with_kind("exp", SeriesKind::Exp, Radius::Infinite)
    }

    pub fn cos() -> Self {
        Self::with_kind("cos", SeriesKind::Cos, Radius::Infinite)
    }

    pub fn sin() -> Self {
        Self::with_kind("sin", SeriesKind::Sin, Radius::Infinite)
    }

    pub fn cosh() -> Self {
        Self::with_kind("cosh", SeriesKind::Cosh, Radius::Infinite)
    }

    pub fn sinh() -> Self {
        Self::with_kind("sinh", SeriesKind::Sinh, Radius::Infinite)
    }

    pub fn geometric() -> Self {
        Self::with_kind("geometric", SeriesKind::Geometric, Radius::Finite(1.0))
    }

    pub fn resolvent() -> Self {
        Self::with_kind("resolvent", SeriesKind::Resolvent, Radius::Finite(1.0))
    }

    pub fn log_resolvent() -> Self {
        Self::with_kind(
            "log-resolvent",
            SeriesKind::LogResolvent,
            Radius::Finite(1.0),
        )
    }

    /// `½ ln((1+z)/(1-z))`.
    pub fn half_log_ratio() -> Self {
        Self::with_kind(
            "half-log-ratio",
            SeriesKind::OddReciprocal,
            Radius::Finite(1.0),
        )
    }

    pub fn artanh() -> Self {
        Self::with_kind("artanh", SeriesKind::OddReciprocal, Radius::Finite(1.0))
    }

    pub fn arcsin() -> Self {
        Self::with_kind("arcsin", SeriesKind::Arcsin, Radius::Finite(1.0))
    }

    /// `₂F₁(α, β; γ; z)` with all parameters strictly positive.
    pub fn hypergeometric(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (label, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "2F1 parameter {label} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(Self::with_kind(
            &format!("2F1({alpha},{beta},{gamma})"),
            SeriesKind::Hypergeometric { alpha, beta, gamma },
            Radius::Finite(1.0),
        ))
    }

    /// A polynomial given by its coefficients, lowest degree first.
    pub fn polynomial(name: &str, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidArgument(
                "polynomial coefficients must be finite".into(),
            ));
        }
        Ok(Self::with_kind(
            name,
            SeriesKind::Polynomial(coeffs),
            Radius::Infinite,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radius(&self) -> Radius {
        self.radius
    }

    pub fn kind(&self) -> &SeriesKind {
        &self.kind
    }

    /// `true` for a companion series produced by [`abs_companion`].
    pub fn is_companion(&self) -> bool {
        self.absolute
    }

    pub fn coeff_mode(&self) -> CoeffMode {
        match self.kind {
            SeriesKind::Arcsin | SeriesKind::Hypergeometric { .. } => CoeffMode::Recurrence,
            _ => CoeffMode::ExactClosedForm,
        }
    }

    /// Coefficient `aₙ`.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coefficients()
            .nth(n)
            .expect("coefficient stream is infinite")
    }

    /// The first `count` coefficients.
    pub fn coeffs(&self, count: usize) -> Vec<Complex64> {
        self.coefficients().take(count).collect()
    }

    /// Infinite stream `a₀, a₁, …`.
    pub fn coefficients(&self) -> Coefficients<'_> {
        Coefficients {
            series: self,
            n: 0,
            state: 1.0,
        }
    }

    /// `true` when every coefficient is a nonnegative real, so `f_a = f`.
    pub fn has_nonnegative_coefficients(&self) -> bool {
        if self.absolute {
            return true;
        }
        match &self.kind {
            SeriesKind::Exp
            | SeriesKind::Cosh
            | SeriesKind::Sinh
            | SeriesKind::Geometric
            | SeriesKind::OddReciprocal
            | SeriesKind::Arcsin
            | SeriesKind::Hypergeometric { .. } => true,
            SeriesKind::Polynomial(c) => c.iter().all(|a| a.im == 0.0 && a.re >= 0.0),
            _ => false,
        }
    }

    fn majorant(&self) -> TailMajorant<'_> {
        match &self.kind {
            SeriesKind::Exp
            | SeriesKind::Cos
            | SeriesKind::Sin
            | SeriesKind::Cosh
            | SeriesKind::Sinh => TailMajorant::InverseFactorial,
            SeriesKind::Geometric | SeriesKind::Resolvent => TailMajorant::Constant(1.0),
            SeriesKind::LogResolvent | SeriesKind::OddReciprocal | SeriesKind::Arcsin => {
                TailMajorant::Harmonic
            }
            SeriesKind::Hypergeometric { alpha, beta, gamma } => TailMajorant::Hypergeometric {
                alpha: *alpha,
                beta: *beta,
                gamma: *gamma,
            },
            SeriesKind::Polynomial(c) => TailMajorant::Finite(c),
        }
    }
}

/// The absolute-value companion `f_a`: same radius, coefficients `|aₙ|`.
pub fn abs_companion(f: &PowerSeries) -> PowerSeries {
    PowerSeries {
        name: format!("{}_abs", f.name),
        kind: f.kind.clone(),
        radius: f.radius,
        absolute: true,
    }
}

/// Streaming coefficient generator. Recurrence-based families carry their
/// running term in `state`, so producing `n` coefficients costs `O(n)`.
#[derive(Debug, Clone)]
pub struct Coefficients<'a> {
    series: &'a PowerSeries,
    n: usize,
    state: f64,
}

impl Iterator for Coefficients<'_> {
    type Item = Complex64;

    fn next(&mut self) -> Option<Complex64> {
        let n = self.n;
        let nf = n as f64;
        let raw = match &self.series.kind {
            // state = 1/n!
            SeriesKind::Exp
            | SeriesKind::Cos
            | SeriesKind::Sin
            | SeriesKind::Cosh
            | SeriesKind::Sinh => {
                let inv_fact = self.state;
                self.state /= nf + 1.0;
                let even = n.is_multiple_of(2);
                let k = n / 2;
                let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
                match self.series.kind {
                    SeriesKind::Exp => inv_fact,
                    SeriesKind::Cos if even => sign * inv_fact,
                    SeriesKind::Sin if !even => sign * inv_fact,
                    SeriesKind::Cosh if even => inv_fact,
                    SeriesKind::Sinh if !even => inv_fact,
                    _ => 0.0,
                }
            }
            SeriesKind::Geometric => 1.0,
            SeriesKind::Resolvent => {
                if n.is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }
            SeriesKind::LogResolvent => match n {
                0 => 0.0,
                _ if n.is_multiple_of(2) => 1.0 / nf,
                _ => -1.0 / nf,
            },
            SeriesKind::OddReciprocal => {
                if n % 2 == 1 {
                    1.0 / nf
                } else {
                    0.0
                }
            }
            // state = Γ(k+½)/(√π k!) for the next odd index n = 2k+1.
            SeriesKind::Arcsin => {
                if n % 2 == 1 {
                    let k = (n / 2) as f64;
                    let c = self.state;
                    self.state = c * (k + 0.5) / (k + 1.0);
                    c / nf
                } else {
                    0.0
                }
            }
            // state = aₙ
            SeriesKind::Hypergeometric { alpha, beta, gamma } => {
                let a = self.state;
                self.state = a * (nf + alpha) * (nf + beta) / ((nf + 1.0) * (nf + gamma));
                a
            }
            SeriesKind::Polynomial(c) => {
                let v = c.get(n).copied().unwrap_or_default();
                self.n += 1;
                return Some(if self.series.absolute {
                    Complex64::new(v.norm(), 0.0)
                } else {
                    v
                });
            }
        };
        self.n += 1;
        Some(Complex64::new(
            if self.series.absolute { raw.abs() } else { raw },
            0.0,
        ))
    }
}

/// A majorant for `Σ_{j>m} |a_j| x^j` that is cheap to evaluate for every `m`.
#[derive(Debug, Clone, Copy)]
enum TailMajorant<'a> {
    /// `|a_j| ≤ 1/j!`
    InverseFactorial,
    /// `|a_j| ≤ c`
    Constant(f64),
    /// `|a_j| ≤ 1/j` for `j ≥ 1`
    Harmonic,
    /// positive coefficients with ratio `(j+α)(j+β)/((j+1)(j+γ))`
    Hypergeometric { alpha: f64, beta: f64, gamma: f64 },
    Finite(&'a [Complex64]),
}

/// Per-step quantities the truncation loop hands to the majorant.
struct TailInputs {
    m: usize,
    x: f64,
    /// `x^{m+1}`
    x_pow_next: f64,
    /// `x^{m+1}/(m+1)!`
    scaled_next: f64,
    /// `|a_{m+1}|`
    coeff_next: f64,
}

impl TailMajorant<'_> {
    fn tail(&self, t: &TailInputs) -> f64 {
        let m = t.m as f64;
        match *self {
            TailMajorant::InverseFactorial => {
                // Σ_{j>m} x^j/j! ≤ x^{m+1}/(m+1)! · Σ_k (x/(m+2))^k
                let rho = t.x / (m + 2.0);
                if rho < 1.0 {
                    t.scaled_next / (1.0 - rho)
                } else {
                    f64::INFINITY
                }
            }
            TailMajorant::Constant(c) => {
                if t.x < 1.0 {
                    c * t.x_pow_next / (1.0 - t.x)
                } else {
                    f64::INFINITY
                }
            }
            TailMajorant::Harmonic => {
                if t.x < 1.0 {
                    t.x_pow_next / ((m + 1.0) * (1.0 - t.x))
                } else {
                    f64::INFINITY
                }
            }
            TailMajorant::Hypergeometric { alpha, beta, gamma } => {
                if t.x == 0.0 {
                    return 0.0;
                }
                let rho = t.x * hypergeometric_ratio_sup(alpha, beta, gamma, m + 1.0);
                if rho < 1.0 {
                    t.coeff_next * t.x_pow_next / (1.0 - rho)
                } else {
                    f64::INFINITY
                }
            }
            TailMajorant::Finite(c) => {
                if t.x == 0.0 {
                    return 0.0;
                }
                let mut tail = 0.0;
                let mut xp = t.x_pow_next;
                for a in c.iter().skip(t.m + 1) {
                    tail += a.norm() * xp;
                    xp *= t.x;
                }
                tail
            }
        }
    }
}

/// Upper bound on `sup_{j ≥ from} (j+α)(j+β)/((j+1)(j+γ))`.
///
/// The ratio is `1 + (P j + Q)/(j² + (1+γ) j + γ)` with `P = α+β-1-γ`,
/// `Q = αβ-γ`; replacing `P`, `Q` by their positive parts gives two terms
/// that decrease in `j`.
fn hypergeometric_ratio_sup(alpha: f64, beta: f64, gamma: f64, from: f64) -> f64 {
    let p = (alpha + beta - 1.0 - gamma).max(0.0);
    let q = (alpha * beta - gamma).max(0.0);
    1.0 + p / (from + 1.0 + gamma) + q / (from * from + (1.0 + gamma) * from + gamma)
}

/// Outcome of a certified truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    /// Highest retained power `m`.
    pub order: usize,
    /// Certified bound on `Σ_{j>m} |a_j| x^j`.
    pub tail_bound: f64,
    /// `Σ_{j≤m} |a_j| x^j`.
    pub partial_sum: f64,
}

fn check_args(f: &PowerSeries, x: f64, tol: f64) -> Result<()> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tol must be > 0, got {tol}")));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "evaluation point must be a nonnegative real, got {x}"
        )));
    }
    if !f.radius.contains(x) {
        return Err(Error::OutOfDisk {
            x,
            radius: f.radius.as_f64(),
        });
    }
    Ok(())
}

/// Finds the smallest `m` whose certified tail is `≤ tol`, summing the
/// companion series along the way.
pub fn certify_truncation(f: &PowerSeries, x: f64, tol: f64, max_terms: usize) -> Result<Truncation> {
    check_args(f, x, tol)?;
    let majorant = f.majorant();
    let mut coeffs = f.coefficients();
    let mut a = coeffs.next().unwrap_or_default().norm();
    let mut sum = 0.0;
    let mut x_pow = 1.0;
    let mut scaled = 1.0;
    for m in 0..=max_terms {
        sum += a * x_pow;
        let a_next = coeffs.next().unwrap_or_default().norm();
        let inputs = TailInputs {
            m,
            x,
            x_pow_next: x_pow * x,
            scaled_next: scaled * x / (m as f64 + 1.0),
            coeff_next: a_next,
        };
        let tail = majorant.tail(&inputs);
        if !sum.is_finite() {
            return Err(Error::Overflow("summing the companion series"));
        }
        if tail <= tol {
            return Ok(Truncation {
                order: m,
                tail_bound: tail,
                partial_sum: sum,
            });
        }
        a = a_next;
        x_pow = inputs.x_pow_next;
        scaled = inputs.scaled_next;
    }
    Err(Error::NoConvergence {
        x,
        tol,
        cap: max_terms,
    })
}

/// Smallest certified truncation order at `x` for tolerance `tol`.
pub fn truncation_order(f: &PowerSeries, x: f64, tol: f64) -> Result<usize> {
    certify_truncation(f, x, tol, DEFAULT_MAX_TERMS).map(|t| t.order)
}

/// `f_a(x)` to within `tol`.
pub fn eval_companion(f: &PowerSeries, x: f64, tol: f64) -> Result<f64> {
    certify_truncation(f, x, tol, DEFAULT_MAX_TERMS).map(|t| t.partial_sum)
}

/// As [`eval_companion`] with an explicit term cap.
pub fn eval_companion_capped(f: &PowerSeries, x: f64, tol: f64, max_terms: usize) -> Result<f64> {
    certify_truncation(f, x, tol, max_terms).map(|t| t.partial_sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exp_at_one() {
        let v = eval_companion(&PowerSeries::exp(), 1.0, 1e-12).unwrap();
        assert!((v - std::f64::consts::E).abs() <= 1e-12);
    }

    #[test]
    fn geometric_at_half() {
        let v = eval_companion(&PowerSeries::geometric(), 0.5, 1e-12).unwrap();
        assert!((v - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn hypergeometric_unit_parameters_is_geometric() {
        let f = PowerSeries::hypergeometric(1.0, 1.0, 1.0).unwrap();
        let v = eval_companion(&f, 0.3, 1e-12).unwrap();
        assert!((v - 1.0 / 0.7).abs() <= 1e-12);
        for n in 0..50 {
            assert_eq!(f.coeff(n), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn truncation_orders() {
        // 1/15! ≈ 7.6e-13 is the first tail below 1e-12.
        assert_eq!(truncation_order(&PowerSeries::exp(), 1.0, 1e-12).unwrap(), 14);
        // tail after m is exactly 0.5^m.
        assert_eq!(truncation_order(&PowerSeries::geometric(), 0.5, 1e-9).unwrap(), 30);
        for f in [PowerSeries::exp(), PowerSeries::arcsin(), PowerSeries::log_resolvent()] {
            assert_eq!(truncation_order(&f, 0.0, 1e-10).unwrap(), 0);
        }
    }

    #[test]
    fn out_of_disk_and_bad_args() {
        let g = PowerSeries::geometric();
        assert!(matches!(eval_companion(&g, 1.0, 1e-10), Err(Error::OutOfDisk { .. })));
        assert!(matches!(eval_companion(&g, 1.5, 1e-10), Err(Error::OutOfDisk { .. })));
        assert!(matches!(eval_companion(&g, -0.1, 1e-10), Err(Error::InvalidArgument(_))));
        assert!(matches!(eval_companion(&g, 0.1, 0.0), Err(Error::InvalidArgument(_))));
        assert!(PowerSeries::hypergeometric(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn near_boundary_hits_the_cap() {
        let g = PowerSeries::geometric();
        let err = eval_companion(&g, 1.0 - 1e-7, 1e-10).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { cap: DEFAULT_MAX_TERMS, .. }));
        // still fine a bit further in
        let v = eval_companion(&g, 0.999, 1e-10).unwrap();
        assert_relative_eq!(v, 1000.0, max_relative = 1e-11);
    }

    #[test]
    fn companion_coefficients() {
        let log = PowerSeries::log_resolvent();
        let la = abs_companion(&log);
        assert_eq!(la.name(), "log-resolvent_abs");
        assert_eq!(la.radius(), log.radius());
        assert_eq!(la.coeff(0), Complex64::new(0.0, 0.0));
        for n in 1..20 {
            assert_relative_eq!(la.coeff(n).re, 1.0 / n as f64);
            assert_eq!(log.coeff(n).re, if n % 2 == 0 { 1.0 } else { -1.0 } / n as f64);
        }
        let cos_a = abs_companion(&PowerSeries::cos());
        let cosh = PowerSeries::cosh();
        for n in 0..30 {
            assert_eq!(cos_a.coeff(n), cosh.coeff(n));
        }
        let exp = PowerSeries::exp();
        let exp_a = abs_companion(&exp);
        for n in 0..30 {
            assert_eq!(exp.coeff(n), exp_a.coeff(n));
        }
        assert_eq!(
            eval_companion(&exp, 0.7, 1e-12).unwrap(),
            eval_companion(&exp_a, 0.7, 1e-12).unwrap()
        );
    }

    #[test]
    fn complex_polynomial_companion() {
        let p = PowerSeries::polynomial(
            "p",
            vec![Complex64::new(0.0, 1.0), Complex64::new(-3.0, 4.0)],
        )
        .unwrap();
        let pa = abs_companion(&p);
        assert_eq!(pa.coeff(1), Complex64::new(5.0, 0.0));
        assert_eq!(pa.coeff(7), Complex64::new(0.0, 0.0));
        assert_relative_eq!(eval_companion(&p, 2.0, 1e-12).unwrap(), 11.0);
        assert_eq!(truncation_order(&p, 2.0, 1e-12).unwrap(), 1);
    }

    #[test]
    fn arcsin_cubic_coefficient() {
        let a = PowerSeries::arcsin();
        assert_eq!(a.coeff(0).re, 0.0);
        assert_eq!(a.coeff(1).re, 1.0);
        assert_relative_eq!(a.coeff(3).re, 1.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(a.coeff(5).re, 3.0 / 40.0, max_relative = 1e-15);
        assert_eq!(a.coeff_mode(), CoeffMode::Recurrence);
    }

    #[test]
    fn hypergeometric_ratio_bound_dominates() {
        for &(a, b, c) in &[(0.5, 2.5, 0.3), (3.0, 4.0, 1.0), (0.2, 0.3, 5.0)] {
            let sup_from = |from: usize| {
                (from..from + 5000)
                    .map(|j| {
                        let j = j as f64;
                        (j + a) * (j + b) / ((j + 1.0) * (j + c))
                    })
                    .fold(0.0, f64::max)
            };
            for from in [1usize, 2, 5, 20, 100] {
                assert!(hypergeometric_ratio_sup(a, b, c, from as f64) >= sup_from(from) - 1e-15);
            }
        }
    }
}
