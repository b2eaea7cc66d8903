//! Seeded random instances. Every generator draws from a `ChaCha8Rng`
//! seeded with `InstanceSpec::seed`, so a spec reproduces its matrices bit
//! for bit on any platform.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{is_commuting, operator_norm, ComplexMatrix};

/// Instance family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Real positive diagonal: normal, with a nonnegative real spectrum.
    DiagonalPositive,
    /// `(G + G*)/2` for a complex Gaussian `G`.
    Hermitian,
    /// `U J U*` where `J` is upper triangular with distinct, well separated
    /// eigenvalues and 2×2 Jordan-like couplings on the superdiagonal.
    UnitaryConjugatedJordan,
    /// Strictly upper triangular, so `r = 0` while `‖T‖` is arbitrary.
    Nilpotent,
    /// Complex Gaussian entries.
    DenseRandom,
    /// `(p(M), q(M))` for random `M` and random polynomials of degree ≤ 3.
    CommutingPolynomialPair,
    /// Simultaneously triangularizable pair sharing one unitary conjugation.
    CommutingTriangularPair,
    /// Two independent dense random matrices (almost surely non-commuting).
    IndependentPair,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::DiagonalPositive,
        Family::Hermitian,
        Family::UnitaryConjugatedJordan,
        Family::Nilpotent,
        Family::DenseRandom,
        Family::CommutingPolynomialPair,
        Family::CommutingTriangularPair,
        Family::IndependentPair,
    ];

    pub const SINGLE: [Family; 5] = [
        Family::DiagonalPositive,
        Family::Hermitian,
        Family::UnitaryConjugatedJordan,
        Family::Nilpotent,
        Family::DenseRandom,
    ];

    pub const COMMUTING_PAIRS: [Family; 2] = [Family::CommutingPolynomialPair, Family::CommutingTriangularPair];

    pub fn name(self) -> &'static str {
        match self {
            Family::DiagonalPositive => "diagonal-positive",
            Family::Hermitian => "hermitian",
            Family::UnitaryConjugatedJordan => "unitary-conjugated-jordan",
            Family::Nilpotent => "nilpotent",
            Family::DenseRandom => "dense-random",
            Family::CommutingPolynomialPair => "commuting-polynomial-pair",
            Family::CommutingTriangularPair => "commuting-triangular-pair",
            Family::IndependentPair => "independent-pair",
        }
    }

    pub fn is_pair(self) -> bool {
        matches!(
            self,
            Family::CommutingPolynomialPair | Family::CommutingTriangularPair | Family::IndependentPair
        )
    }

    pub fn is_commuting_pair(self) -> bool {
        matches!(self, Family::CommutingPolynomialPair | Family::CommutingTriangularPair)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Everything needed to reproduce one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub dim: usize,
    pub family: Family,
    /// Operator norm of the generated matrix (each matrix of a pair).
    pub norm_target: f64,
}

impl InstanceSpec {
    pub fn new(seed: u64, dim: usize, family: Family, norm_target: f64) -> Self {
        InstanceSpec {
            seed,
            dim,
            family,
            norm_target,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if !(self.norm_target > 0.0 && self.norm_target.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "norm target must be a positive finite number, got {}",
                self.norm_target
            )));
        }
        Ok(())
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// `diag(R)` folded back into `Q`.
pub(crate) fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let qr = gaussian_matrix(n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn conjugate_by(u: &DMatrix<Complex64>, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    u * m * u.adjoint()
}

/// Scales `m` so that its operator norm is `target`. The zero matrix is
/// returned unchanged.
fn rescale(m: DMatrix<Complex64>, target: f64) -> Result<ComplexMatrix> {
    let m = ComplexMatrix::from_nalgebra(m)?;
    let norm = operator_norm(&m)?;
    if norm == 0.0 {
        return Ok(m);
    }
    Ok(m.scale(target / norm))
}

fn random_polynomial(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let degree = rng.random_range(1..=3);
    (0..=degree).map(|_| gaussian(rng)).collect()
}

fn single(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    let n = spec.dim;
    let raw = match spec.family {
        Family::DiagonalPositive => {
            let d: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..=1.0)).collect();
            let max = d.iter().copied().fold(0.0, f64::max);
            let scaled: Vec<f64> = d.iter().map(|x| x / max * spec.norm_target).collect();
            return Ok(ComplexMatrix::from_real_diagonal(&scaled));
        }
        Family::Hermitian => {
            let g = gaussian_matrix(n, rng);
            (&g + g.adjoint()).map(|z| z * 0.5)
        }
        Family::UnitaryConjugatedJordan => {
            let mut j = DMatrix::zeros(n, n);
            for k in 0..n {
                let theta = TAU * (k as f64 + rng.random_range(-0.2..0.2)) / n as f64;
                let rho = rng.random_range(0.3..1.0);
                j[(k, k)] = Complex64::from_polar(rho, theta);
            }
            for k in (0..n.saturating_sub(1)).step_by(2) {
                j[(k, k + 1)] = Complex64::new(rng.random_range(0.2..1.0), 0.0);
            }
            conjugate_by(&random_unitary(n, rng), &j)
        }
        Family::Nilpotent => DMatrix::from_fn(n, n, |i, j| if j > i { gaussian(rng) } else { Complex64::new(0.0, 0.0) }),
        Family::DenseRandom => gaussian_matrix(n, rng),
        pair => {
            return Err(Error::WrongFamilyKind(format!(
                "{pair} generates pairs, not single matrices"
            )))
        }
    };
    rescale(raw, spec.norm_target)
}

/// Generates one matrix with `‖T‖ = norm_target` (the nilpotent family in
/// dimension 1 can only produce the zero matrix).
pub fn gen_matrix(spec: &InstanceSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    single(spec, &mut rng)
}

fn pair_once(spec: &InstanceSpec, seed: u64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.dim;
    let (a, b) = match spec.family {
        Family::CommutingPolynomialPair => {
            let m = ComplexMatrix::from_nalgebra(gaussian_matrix(n, &mut rng))?;
            let m = m.scale(1.0 / operator_norm(&m)?.max(f64::MIN_POSITIVE));
            let p = random_polynomial(&mut rng);
            let q = random_polynomial(&mut rng);
            (m.polynomial(&p).into_nalgebra(), m.polynomial(&q).into_nalgebra())
        }
        Family::CommutingTriangularPair => {
            let u = random_unitary(n, &mut rng);
            if rng.random_bool(0.5) {
                let d1 = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| gaussian(&mut rng)));
                let d2 = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| gaussian(&mut rng)));
                (conjugate_by(&u, &d1), conjugate_by(&u, &d2))
            } else {
                let t = DMatrix::from_fn(n, n, |i, j| {
                    if j >= i {
                        gaussian(&mut rng)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                let t = ComplexMatrix::from_nalgebra(t)?;
                let t = t.scale(1.0 / operator_norm(&t)?.max(f64::MIN_POSITIVE));
                let p = random_polynomial(&mut rng);
                let q = random_polynomial(&mut rng);
                let a = t.polynomial(&p).into_nalgebra();
                let b = t.polynomial(&q).into_nalgebra();
                (conjugate_by(&u, &a), conjugate_by(&u, &b))
            }
        }
        Family::IndependentPair => (gaussian_matrix(n, &mut rng), gaussian_matrix(n, &mut rng)),
        single => {
            return Err(Error::WrongFamilyKind(format!(
                "{single} generates single matrices, not pairs"
            )))
        }
    };
    // B gets a norm between half and all of the target so the two factors differ
    let b_target = spec.norm_target * rng.random_range(0.5..=1.0);
    Ok((rescale(a, spec.norm_target)?, rescale(b, b_target)?))
}

/// Number of regeneration attempts after the first for commuting pairs.
pub const PAIR_RETRIES: usize = 3;

/// Generates a commuting pair and certifies it with the commutator test,
/// regenerating with a perturbed seed up to [`PAIR_RETRIES`] times.
pub fn gen_commuting_pair(spec: &InstanceSpec) -> Result<(ComplexMatrix, ComplexMatrix)> {
    spec.validate()?;
    if !spec.family.is_commuting_pair() {
        return Err(Error::WrongFamilyKind(format!("{} is not a commuting-pair family", spec.family)));
    }
    for attempt in 0..=PAIR_RETRIES {
        let seed = spec.seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let (a, b) = pair_once(spec, seed)?;
        if is_commuting(&a, &b)? {
            return Ok((a, b));
        }
    }
    Err(Error::GenerationFailure { retries: PAIR_RETRIES })
}

/// Any pair family: commuting families go through [`gen_commuting_pair`].
pub fn gen_pair(spec: &InstanceSpec) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if spec.family.is_commuting_pair() {
        return gen_commuting_pair(spec);
    }
    spec.validate()?;
    pair_once(spec, spec.seed)
}

/// A random unitary matrix scaled by `scale`; used by the normal-equality
/// property checks.
pub fn gen_scaled_unitary(seed: u64, dim: usize, scale: f64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(ComplexMatrix::from_nalgebra(random_unitary(dim, &mut rng))?.scale(scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{commutator_norm, spectral_radius};

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!(matches!("banana".parse::<Family>(), Err(Error::UnknownFamily(_))));
        assert_eq!("Dense_Random".parse::<Family>().unwrap(), Family::DenseRandom);
    }

    #[test]
    fn diagonal_positive_example() {
        let m = gen_matrix(&InstanceSpec::new(1, 3, Family::DiagonalPositive, 0.9)).unwrap();
        let diag: Vec<f64> = (0..3).map(|i| m.get(i, i).re).collect();
        assert!((diag.iter().copied().fold(0.0, f64::max) - 0.9).abs() < 1e-15);
        assert!(diag.iter().all(|&d| d > 0.0));
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(m.get(i, j), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn nilpotent_example() {
        for seed in 0..5 {
            let m = gen_matrix(&InstanceSpec::new(seed, 2, Family::Nilpotent, 0.5)).unwrap();
            assert!(m.is_upper_triangular());
            assert_eq!(m.get(0, 0), Complex64::new(0.0, 0.0));
            assert_eq!(spectral_radius(&m).unwrap(), 0.0);
            assert!((operator_norm(&m).unwrap() - 0.5).abs() < 1e-12 * 0.5);
        }
        let one = gen_matrix(&InstanceSpec::new(3, 1, Family::Nilpotent, 0.5)).unwrap();
        assert_eq!(one, ComplexMatrix::zeros(1));
    }

    #[test]
    fn norm_target_and_determinism() {
        for family in Family::SINGLE {
            for dim in [1, 2, 5, 8] {
                if family == Family::Nilpotent && dim == 1 {
                    continue;
                }
                let spec = InstanceSpec::new(42 + dim as u64, dim, family, 0.7);
                let m = gen_matrix(&spec).unwrap();
                let norm = operator_norm(&m).unwrap();
                assert!((norm - 0.7).abs() <= 1e-12 * 0.7, "{family} {dim}: {norm}");
                assert_eq!(gen_matrix(&spec).unwrap(), m);
            }
        }
    }

    #[test]
    fn different_seeds_differ() {
        let a = gen_matrix(&InstanceSpec::new(1, 4, Family::DenseRandom, 1.0)).unwrap();
        let b = gen_matrix(&InstanceSpec::new(2, 4, Family::DenseRandom, 1.0)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = gen_scaled_unitary(9, 6, 1.0).unwrap();
        let prod = &u.adjoint() * &u;
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-13);
    }

    #[test]
    fn commuting_pairs_commute() {
        for family in Family::COMMUTING_PAIRS {
            for seed in 0..20 {
                let spec = InstanceSpec::new(seed, 5, family, 0.8);
                let (a, b) = gen_commuting_pair(&spec).unwrap();
                let c = commutator_norm(&a, &b).unwrap();
                assert!(c <= 1e-12 * operator_norm(&a).unwrap() * operator_norm(&b).unwrap() + 1e-300);
                assert!((operator_norm(&a).unwrap() - 0.8).abs() < 1e-12);
                assert!(operator_norm(&b).unwrap() <= 0.8 + 1e-12);
                assert_eq!(gen_commuting_pair(&spec).unwrap(), (a, b));
            }
        }
    }

    #[test]
    fn pair_family_gating() {
        let spec = InstanceSpec::new(0, 3, Family::IndependentPair, 1.0);
        assert!(matches!(gen_commuting_pair(&spec), Err(Error::WrongFamilyKind(_))));
        assert!(matches!(gen_matrix(&spec), Err(Error::WrongFamilyKind(_))));
        let (a, b) = gen_pair(&spec).unwrap();
        assert!(!is_commuting(&a, &b).unwrap());
        let single = InstanceSpec::new(0, 3, Family::Hermitian, 1.0);
        assert!(matches!(gen_pair(&single), Err(Error::WrongFamilyKind(_))));
        assert!(gen_matrix(&InstanceSpec::new(0, 0, Family::Hermitian, 1.0)).is_err());
        assert!(gen_matrix(&InstanceSpec::new(0, 2, Family::Hermitian, 0.0)).is_err());
    }
}
