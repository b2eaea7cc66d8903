use serde::Serialize;

use super::{PowerSeries, SeriesKind};
use crate::error::{Error, Result};

/// `₂F₁` parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypergeometricParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for HypergeometricParams {
    fn default() -> Self {
        HypergeometricParams {
            alpha: 1.0,
            beta: 1.0,
            gamma: 2.0,
        }
    }
}

/// Closed form of a companion series `f_a(x)` on `0 ≤ x < R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    Exp,
    Cosh,
    Sinh,
    /// `1/(1-x)`
    InverseOneMinus,
    /// `ln 1/(1-x)`
    LogInverseOneMinus,
    Artanh,
    Arcsin,
    /// `(1-x)^{-a}`
    PowerOneMinus(f64),
    /// `-ln(1-x)/x`, i.e. `₂F₁(1,1;2;x)`
    LogOverX,
}

impl ClosedForm {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            ClosedForm::Exp => x.exp(),
            ClosedForm::Cosh => x.cosh(),
            ClosedForm::Sinh => x.sinh(),
            ClosedForm::InverseOneMinus => 1.0 / (1.0 - x),
            ClosedForm::LogInverseOneMinus => -(-x).ln_1p(),
            ClosedForm::Artanh => x.atanh(),
            ClosedForm::Arcsin => x.asin(),
            ClosedForm::PowerOneMinus(a) => (1.0 - x).powf(-a),
            ClosedForm::LogOverX => {
                if x == 0.0 {
                    1.0
                } else {
                    -(-x).ln_1p() / x
                }
            }
        }
    }
}

/// A named series together with an optional closed form for its companion.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCatalogEntry {
    pub series: PowerSeries,
    pub closed_form: Option<ClosedForm>,
    pub params: Option<HypergeometricParams>,
}

impl SeriesCatalogEntry {
    /// Closed-form value of `f_a(x)`, when one is known.
    pub fn closed_form_eval(&self, x: f64) -> Option<f64> {
        self.closed_form.map(|c| c.eval(x))
    }

    pub fn name(&self) -> &str {
        self.series.name()
    }
}

fn entry(series: PowerSeries, closed_form: ClosedForm) -> SeriesCatalogEntry {
    SeriesCatalogEntry {
        series,
        closed_form: Some(closed_form),
        params: None,
    }
}

fn hypergeometric_entry(p: HypergeometricParams) -> Result<SeriesCatalogEntry> {
    let series = PowerSeries::hypergeometric(p.alpha, p.beta, p.gamma)?;
    let closed_form = if p.gamma == p.beta {
        Some(ClosedForm::PowerOneMinus(p.alpha))
    } else if p.gamma == p.alpha {
        Some(ClosedForm::PowerOneMinus(p.beta))
    } else if p.alpha == 1.0 && p.beta == 1.0 && p.gamma == 2.0 {
        Some(ClosedForm::LogOverX)
    } else {
        None
    };
    Ok(SeriesCatalogEntry {
        series,
        closed_form,
        params: Some(p),
    })
}

/// Every built-in series. `2F1` appears with its default parameters
/// `(1, 1, 2)`; use [`lookup`] for other parameter choices.
pub fn catalog() -> Vec<SeriesCatalogEntry> {
    vec![
        entry(PowerSeries::exp(), ClosedForm::Exp),
        entry(PowerSeries::cos(), ClosedForm::Cosh),
        entry(PowerSeries::sin(), ClosedForm::Sinh),
        entry(PowerSeries::cosh(), ClosedForm::Cosh),
        entry(PowerSeries::sinh(), ClosedForm::Sinh),
        entry(PowerSeries::geometric(), ClosedForm::InverseOneMinus),
        entry(PowerSeries::resolvent(), ClosedForm::InverseOneMinus),
        entry(PowerSeries::log_resolvent(), ClosedForm::LogInverseOneMinus),
        entry(PowerSeries::half_log_ratio(), ClosedForm::Artanh),
        entry(PowerSeries::arcsin(), ClosedForm::Arcsin),
        entry(PowerSeries::artanh(), ClosedForm::Artanh),
        hypergeometric_entry(HypergeometricParams::default()).expect("default parameters are valid"),
    ]
}

/// Looks a series up by name. `params` supplies `alpha`, `beta`, `gamma`
/// for `2F1`; missing ones take the defaults `(1, 1, 2)`.
pub fn lookup(name: &str, params: &[(String, f64)]) -> Result<SeriesCatalogEntry> {
    let key = name.trim().to_ascii_lowercase();
    if matches!(key.as_str(), "2f1" | "hyp2f1" | "hypergeometric") {
        let mut p = HypergeometricParams::default();
        for (k, v) in params {
            match k.trim().to_ascii_lowercase().as_str() {
                "alpha" | "a" => p.alpha = *v,
                "beta" | "b" => p.beta = *v,
                "gamma" | "c" => p.gamma = *v,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown 2F1 parameter `{other}`"
                    )))
                }
            }
        }
        return hypergeometric_entry(p);
    }
    if let Some((k, _)) = params.first() {
        return Err(Error::InvalidArgument(format!(
            "series `{name}` takes no parameters (got `{k}`)"
        )));
    }
    catalog()
        .into_iter()
        .find(|e| e.series.name() == key && !matches!(e.series.kind, SeriesKind::Hypergeometric { .. }))
        .ok_or_else(|| Error::UnknownSeries(name.to_string()))
}
