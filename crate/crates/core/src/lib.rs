//! Upper bounds on the spectral radius of matrix functions `f(T)` and
//! `f(AB)` where `f` is given by a power series, together with a brute-force
//! verification harness.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`] holds power series, their absolute-value companions and
//!   certified scalar evaluation.
//! * [`matrix`] holds dense complex matrices, spectral radius / operator norm,
//!   and truncated matrix power series with a remainder certificate.
//! * [`bounds`] implements every upper bound as a pure function.
//! * [`harness`] generates random instances, compares bounds against the
//!   eigenvalue oracle and writes reports.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod series;

pub use bounds::{best_bound, BestBound, BoundResult, BoundValue, Operands, Quantity};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, EvalCertificate};
pub use series::{catalog, lookup, PowerSeries, Radius, SeriesCatalogEntry};

/// Default absolute tolerance for series evaluation.
pub const DEFAULT_TOL: f64 = 1e-10;
