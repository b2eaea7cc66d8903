//! Dense complex square matrices and the spectral quantities the bounds are
//! built from.

mod io;

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, Schur, SVD};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{certify_truncation, PowerSeries, DEFAULT_MAX_TERMS};

pub use io::{parse_matrix, read_matrix, to_json, write_matrix, MatrixFile};

/// Largest dimension accepted from files and generators.
pub const MAX_DIM: usize = 64;

/// Default relative tolerance of the commutativity test.
pub const COMMUTE_REL_TOL: f64 = 1e-10;
const COMMUTE_FLOOR: f64 = 1e-300;

const EIGEN_MAX_ITER: usize = 10_000;

/// An `n × n` complex matrix with finite entries, `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::from_nalgebra(DMatrix::from_row_slice(dim, dim, &entries))
    }

    pub fn from_nalgebra(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::InvalidMatrix(format!(
                "matrix must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidMatrix("entries must be finite".into()));
        }
        Ok(ComplexMatrix(m))
    }

    /// Row-major real entries, convenient in tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        ComplexMatrix(DMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { Complex64::default() }))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let d: Vec<Complex64> = d.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.0[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix(&self.0 * Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        ComplexMatrix(&self.0 * s)
    }

    /// `T^k`, with `T⁰ = I`.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `Σ cⱼ Tʲ` by Horner's rule.
    pub fn polynomial(&self, coeffs: &[Complex64]) -> Self {
        let n = self.dim();
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for &c in coeffs.iter().rev() {
            acc = &acc * &self.0;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        ComplexMatrix(acc)
    }

    pub fn is_upper_triangular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.0[(i, j)] == Complex64::default()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i + 1..n).all(|j| self.0[(i, j)] == Complex64::default()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Eigenvalues of `t`. Exactly triangular input is read off the diagonal.
pub fn eigenvalues(t: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !t.is_finite() {
        return Err(Error::InvalidMatrix("entries must be finite".into()));
    }
    if t.is_upper_triangular() || t.is_lower_triangular() {
        return Ok(t.0.diagonal().iter().copied().collect());
    }
    let schur = Schur::try_new(t.0.clone(), f64::EPSILON, EIGEN_MAX_ITER).ok_or(Error::EigenFailure)?;
    let ev = schur.eigenvalues().ok_or(Error::EigenFailure)?;
    Ok(ev.iter().copied().collect())
}

/// `max |λ|` over the spectrum.
pub fn spectral_radius(t: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(t)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Largest singular value.
pub fn operator_norm(t: &ComplexMatrix) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::InvalidMatrix("entries must be finite".into()));
    }
    if t.dim() == 1 {
        return Ok(t.0[(0, 0)].norm());
    }
    let svd = SVD::try_new(t.0.clone(), false, false, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::EigenFailure)?;
    Ok(svd.singular_values.iter().copied().fold(0.0, f64::max))
}

/// `‖T^(2^k)‖^(1/2^k)` for `k = 0..=k_max`, by repeated squaring.
pub fn gelfand_sequence(t: &ComplexMatrix, k_max: usize) -> Result<Vec<f64>> {
    if k_max < 1 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(k_max + 1);
    let mut power = t.clone();
    out.push(operator_norm(&power)?);
    for k in 1..=k_max {
        power = &power * &power;
        if !power.is_finite() {
            return Err(Error::Overflow("squaring in the Gelfand sequence"));
        }
        let norm = operator_norm(&power)?;
        if !norm.is_finite() {
            return Err(Error::Overflow("squaring in the Gelfand sequence"));
        }
        out.push(norm.powf(1.0 / (1u64 << k) as f64));
    }
    Ok(out)
}

/// `‖AB − BA‖`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.check_same_dim(b)?;
    operator_norm(&(&(a * b) - &(b * a)))
}

/// Result of the commutativity test, with the measured quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommuteCheck {
    pub commutator_norm: f64,
    pub threshold: f64,
    pub commuting: bool,
}

/// Commutativity test `‖AB − BA‖ ≤ rel_tol·(‖A‖‖B‖ + floor)`.
pub fn commute_check(a: &ComplexMatrix, b: &ComplexMatrix, rel_tol: f64) -> Result<CommuteCheck> {
    let c = commutator_norm(a, b)?;
    let threshold = rel_tol * (operator_norm(a)? * operator_norm(b)? + COMMUTE_FLOOR);
    Ok(CommuteCheck {
        commutator_norm: c,
        threshold,
        commuting: c <= threshold,
    })
}

pub fn is_commuting(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<bool> {
    commute_check(a, b, COMMUTE_REL_TOL).map(|c| c.commuting)
}

/// Errors with [`Error::NonCommuting`] unless the pair passes the default test.
pub fn require_commuting(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<CommuteCheck> {
    let c = commute_check(a, b, COMMUTE_REL_TOL)?;
    if c.commuting {
        Ok(c)
    } else {
        Err(Error::NonCommuting {
            commutator_norm: c.commutator_norm,
            threshold: c.threshold,
        })
    }
}

/// A truncated matrix power series `S_m(T) = Σ_{j≤m} a_j Tʲ` with a bound on
/// `‖f(T) − S_m(T)‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalCertificate {
    pub value: ComplexMatrix,
    pub order: usize,
    pub remainder_bound: f64,
}

/// Evaluates `S_m(T)` for a fixed order `m`.
pub fn partial_sum(f: &PowerSeries, t: &ComplexMatrix, order: usize) -> ComplexMatrix {
    t.polynomial(&f.coeffs(order + 1))
}

/// Evaluates `f(T)` with `‖f(T) − S_m(T)‖ ≤ Σ_{j>m}|a_j|‖T‖ʲ ≤ tol`.
pub fn eval_matrix_series(f: &PowerSeries, t: &ComplexMatrix, tol: f64) -> Result<EvalCertificate> {
    let norm = operator_norm(t)?;
    let trunc = certify_truncation(f, norm, tol, DEFAULT_MAX_TERMS)?;
    let value = partial_sum(f, t, trunc.order);
    if !value.is_finite() {
        return Err(Error::Overflow("evaluating the matrix series"));
    }
    Ok(EvalCertificate {
        value,
        order: trunc.order,
        remainder_bound: trunc.tail_bound,
    })
}

/// `r[f(T)]` together with its error bar.
///
/// The truncation remainder commutes with `S_m(T)`, so the true spectral
/// radius differs from `r(S_m(T))` by at most the remainder bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionRadius {
    pub value: f64,
    pub error: f64,
    pub order: usize,
}

pub fn function_radius(f: &PowerSeries, t: &ComplexMatrix, tol: f64) -> Result<FunctionRadius> {
    let cert = eval_matrix_series(f, t, tol)?;
    Ok(FunctionRadius {
        value: spectral_radius(&cert.value)?,
        error: cert.remainder_bound,
        order: cert.order,
    })
}

/// The oracle `r[f(T)]` (see [`function_radius`] for the error bar).
pub fn true_function_radius(f: &PowerSeries, t: &ComplexMatrix, tol: f64) -> Result<f64> {
    function_radius(f, t, tol).map(|r| r.value)
}
