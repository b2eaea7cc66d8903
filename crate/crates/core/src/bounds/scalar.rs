//! Weighted-sum inequality behind the ratio form of the Hölder pair bound:
//!
//! `(Σ m|x|^p)(Σ m|y|^q) ≥ (Σ m|xy|)(Σ m|x|^{p−1}|y|^{q−1})`
//!
//! for nonnegative weights `m` and conjugate exponents `p, q`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Both sides of the weighted-sum inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSides {
    pub lhs: f64,
    pub rhs: f64,
}

impl WeightedSides {
    /// `lhs ≥ rhs − slack` with `slack = rel·max(1, lhs)`.
    pub fn holds(&self, rel: f64) -> bool {
        self.lhs + rel * self.lhs.max(1.0) >= self.rhs
    }
}

/// Hölder conjugate `p/(p−1)`.
pub fn conjugate(p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::BadExponent(p));
    }
    Ok(p / (p - 1.0))
}

pub fn weighted_sums(weights: &[f64], x: &[Complex64], y: &[Complex64], p: f64) -> Result<WeightedSides> {
    let q = conjugate(p)?;
    if x.len() != weights.len() || y.len() != weights.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} weights, {} x, {} y",
            weights.len(),
            x.len(),
            y.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
        return Err(Error::InvalidArgument(format!("weight {w} is not a finite nonnegative number")));
    }
    let (mut xp, mut yq, mut xy, mut mixed) = (0.0, 0.0, 0.0, 0.0);
    for ((&m, u), v) in weights.iter().zip(x).zip(y) {
        let (a, b) = (u.norm(), v.norm());
        xp += m * a.powf(p);
        yq += m * b.powf(q);
        xy += m * a * b;
        mixed += m * a.powf(p - 1.0) * b.powf(q - 1.0);
    }
    Ok(WeightedSides {
        lhs: xp * yq,
        rhs: xy * mixed,
    })
}
