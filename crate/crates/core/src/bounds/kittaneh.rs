//! Norm bounds on `r(AB ± BA)` and `r(AB)` built from `‖AB‖`, `‖BA‖`,
//! `‖A²‖`, `‖B²‖`, `‖AB²‖`, `‖A²B‖`.

use super::pair::PairNorms;
use super::{BoundResult, Builder, Quantity};
use crate::error::Result;
use crate::matrix::{require_commuting, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `AB + BA`
    Plus,
    /// `AB − BA`
    Minus,
}

impl Sign {
    fn quantity(self) -> Quantity {
        match self {
            Sign::Plus => Quantity::Anticommutator,
            Sign::Minus => Quantity::Commutator,
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Sign::Plus => "anticommutator",
            Sign::Minus => "commutator",
        }
    }
}

/// `r(AB ± BA) ≤ ½(‖AB‖ + ‖BA‖ + sqrt((‖AB‖ − ‖BA‖)² + 4‖A²‖‖B²‖))` for any pair.
pub fn kittaneh_base(a: &ComplexMatrix, b: &ComplexMatrix, sign: Sign) -> Result<BoundResult> {
    Ok(base_from(&PairNorms::new(a, b)?, sign))
}

pub(crate) fn base_from(n: &PairNorms, sign: Sign) -> BoundResult {
    let mut b = Builder::new(format!("kittaneh-{}", sign.suffix()), sign.quantity());
    b.note("‖AB‖", n.ab);
    b.note("‖BA‖", n.ba);
    b.note("‖A²‖", n.a2);
    b.note("‖B²‖", n.b2);
    b.finish(|_| {
        let d = n.ab - n.ba;
        Ok(0.5 * (n.ab + n.ba + (d * d + 4.0 * n.a2 * n.b2).sqrt()))
    })
}

/// `r(AB) ≤ ½(‖AB‖ + ‖A²‖^{1/2}‖B²‖^{1/2})` for commuting pairs.
pub fn kittaneh_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<BoundResult> {
    let n = PairNorms::new(a, b)?;
    require_commuting(a, b)?;
    Ok(product_from(&n))
}

pub(crate) fn product_from(n: &PairNorms) -> BoundResult {
    let mut b = Builder::new("kittaneh-product", Quantity::Product);
    b.note("‖AB‖", n.ab);
    b.note("‖A²‖", n.a2);
    b.note("‖B²‖", n.b2);
    b.finish(|_| Ok(0.5 * (n.ab + n.a2.sqrt() * n.b2.sqrt())))
}

fn mixed_min(n: &PairNorms) -> f64 {
    (n.a.sqrt() * n.ab2.sqrt()).min(n.a2b.sqrt() * n.b.sqrt())
}

fn relaxed_root(n: &PairNorms) -> f64 {
    n.a.sqrt() * n.b.sqrt() * n.ab.sqrt()
}

fn relaxed_square(n: &PairNorms) -> f64 {
    (n.a * n.b2.sqrt()).min(n.a2.sqrt() * n.b)
}

fn note_mixed_norms(b: &mut Builder<'_>, n: &PairNorms) {
    b.note("‖A‖", n.a);
    b.note("‖B‖", n.b);
    b.note("‖AB‖", n.ab);
    b.note("‖A²‖", n.a2);
    b.note("‖B²‖", n.b2);
    b.note("‖AB²‖", n.ab2);
    b.note("‖A²B‖", n.a2b);
}

/// `r(AB ± BA) ≤ ‖AB‖ + min{‖A‖^{1/2}‖AB²‖^{1/2}, ‖A²B‖^{1/2}‖B‖^{1/2}}` for
/// any pair. The two weaker forms obtained from `‖AB²‖ ≤ ‖AB‖‖B‖`,
/// `‖AB²‖ ≤ ‖A‖‖B²‖` (and symmetrically) are recorded as `relaxed_via_root`
/// and `relaxed_via_square`.
pub fn kittaneh_mixed(a: &ComplexMatrix, b: &ComplexMatrix, sign: Sign) -> Result<BoundResult> {
    Ok(mixed_from(&PairNorms::new(a, b)?, sign))
}

pub(crate) fn mixed_from(n: &PairNorms, sign: Sign) -> BoundResult {
    let mut b = Builder::new(format!("kittaneh-mixed-{}", sign.suffix()), sign.quantity());
    note_mixed_norms(&mut b, n);
    b.note("relaxed_via_root", n.ab + relaxed_root(n));
    b.note("relaxed_via_square", n.ab + relaxed_square(n));
    b.finish(|_| Ok(n.ab + mixed_min(n)))
}

/// Halved form for commuting pairs:
/// `r(AB) ≤ ½[‖AB‖ + min{‖A‖^{1/2}‖AB²‖^{1/2}, ‖A²B‖^{1/2}‖B‖^{1/2}}]`, with
/// the relaxed branches recorded as intermediates.
pub fn kittaneh_product_chain(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<BoundResult> {
    let n = PairNorms::new(a, b)?;
    require_commuting(a, b)?;
    Ok(product_chain_from(&n))
}

pub(crate) fn product_chain_from(n: &PairNorms) -> BoundResult {
    let mut b = Builder::new("kittaneh-product-chain", Quantity::Product);
    note_mixed_norms(&mut b, n);
    b.note("relaxed_via_root", 0.5 * n.ab + 0.5 * relaxed_root(n));
    b.note("relaxed_via_square", 0.5 * n.ab + 0.5 * relaxed_square(n));
    b.finish(|_| Ok(0.5 * (n.ab + mixed_min(n))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::matrix::spectral_radius;
    use approx::assert_abs_diff_eq;

    fn shift_pair() -> (ComplexMatrix, ComplexMatrix) {
        (
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap(),
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap(),
        )
    }

    #[test]
    fn shift_pair_attains_base_bound() {
        let (a, b) = shift_pair();
        let bound = kittaneh_base(&a, &b, Sign::Plus).unwrap().value().unwrap();
        let oracle = spectral_radius(&(&(&a * &b) + &(&b * &a))).unwrap();
        assert_abs_diff_eq!(oracle, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(bound, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_pair() {
        let z = ComplexMatrix::zeros(3);
        assert_eq!(kittaneh_base(&z, &z, Sign::Minus).unwrap().value(), Some(0.0));
        assert_eq!(kittaneh_mixed(&z, &z, Sign::Plus).unwrap().value(), Some(0.0));
        assert_eq!(kittaneh_product_chain(&z, &z).unwrap().value(), Some(0.0));
    }

    #[test]
    fn product_examples() {
        let i = ComplexMatrix::identity(2);
        assert_abs_diff_eq!(kittaneh_product(&i, &i).unwrap().value().unwrap(), 1.0, epsilon = 1e-14);
        let d = ComplexMatrix::from_real_diagonal(&[0.5, -0.5]);
        assert_abs_diff_eq!(kittaneh_product(&d, &d).unwrap().value().unwrap(), 0.25, epsilon = 1e-14);
        let chain = kittaneh_product_chain(&i, &i).unwrap();
        assert_abs_diff_eq!(chain.value().unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn commuting_required() {
        let (a, b) = shift_pair();
        assert!(matches!(kittaneh_product(&a, &b), Err(Error::NonCommuting { .. })));
        assert!(matches!(kittaneh_product_chain(&a, &b), Err(Error::NonCommuting { .. })));
        assert!(kittaneh_mixed(&a, &b, Sign::Minus).unwrap().is_available());
        assert!(matches!(
            kittaneh_base(&a, &ComplexMatrix::zeros(3), Sign::Plus),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn relaxed_forms_dominate() {
        let a = ComplexMatrix::from_real_rows(&[&[0.3, 1.0, 0.0], &[0.0, -0.2, 0.4], &[0.5, 0.0, 0.1]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 0.2, 0.7], &[1.1, 0.0, 0.0], &[0.0, -0.3, 0.6]]).unwrap();
        let r = kittaneh_mixed(&a, &b, Sign::Plus).unwrap();
        let v = r.value().unwrap();
        assert!(v <= r.intermediate("relaxed_via_root").unwrap() + 1e-12);
        assert!(v <= r.intermediate("relaxed_via_square").unwrap() + 1e-12);
        for sign in [Sign::Plus, Sign::Minus] {
            let s = match sign {
                Sign::Plus => &(&a * &b) + &(&b * &a),
                Sign::Minus => &(&a * &b) - &(&b * &a),
            };
            let oracle = spectral_radius(&s).unwrap();
            assert!(kittaneh_base(&a, &b, sign).unwrap().value().unwrap() >= oracle - 1e-12);
            assert!(kittaneh_mixed(&a, &b, sign).unwrap().value().unwrap() >= oracle - 1e-12);
        }
    }
}
