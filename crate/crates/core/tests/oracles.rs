//! Frozen reference values, each checked against an oracle computed here
//! independently of the library's own machinery.

use approx::assert_relative_eq;
use num_complex::Complex64;
use specbound::bounds::{best_bound, bound_pair_sq, bound_single, Operands, DEFAULT_P_GRID};
use specbound::matrix::{eval_matrix_series, gelfand_sequence, spectral_radius, true_function_radius};
use specbound::series::{eval_companion, lookup, truncation_order, PowerSeries};
use specbound::ComplexMatrix;
use statrs::function::gamma::ln_gamma;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Smallest `m` with `Σ_{j>m} |a_j| xʲ ≤ tol`, summing the tail directly.
fn brute_force_order(coeff: impl Fn(u32) -> f64, x: f64, tol: f64, horizon: u32) -> u32 {
    (0..horizon)
        .find(|&m| (m + 1..horizon).map(|j| coeff(j) * x.powi(j as i32)).sum::<f64>() <= tol)
        .expect("horizon large enough")
}

#[test]
fn exp_truncation_order_matches_brute_force_tail() {
    let brute = brute_force_order(|j| 1.0 / factorial(j), 1.0, 1e-12, 40);
    assert_eq!(brute, 14);
    assert_eq!(truncation_order(&PowerSeries::exp(), 1.0, 1e-12).unwrap(), 14);
}

#[test]
fn geometric_truncation_order_matches_exact_tail() {
    // exact tail 0.5^{m+1}/(1 − 0.5) = 0.5^m
    let exact = (0..64).find(|&m| 0.5f64.powi(m) <= 1e-9).unwrap();
    assert_eq!(exact, 30);
    assert_eq!(truncation_order(&PowerSeries::geometric(), 0.5, 1e-9).unwrap(), 30);
}

#[test]
fn scalar_evaluations() {
    assert!((eval_companion(&PowerSeries::exp(), 1.0, 1e-12).unwrap() - std::f64::consts::E).abs() <= 1e-12);
    assert!((eval_companion(&PowerSeries::geometric(), 0.5, 1e-12).unwrap() - 2.0).abs() <= 1e-12);
    let f = lookup("2F1", &[("alpha".into(), 1.0), ("beta".into(), 1.0), ("gamma".into(), 1.0)]).unwrap();
    assert!((eval_companion(&f.series, 0.3, 1e-12).unwrap() - 1.0 / 0.7).abs() <= 1e-12);
}

/// `(α)_n (β)_n / ((γ)_n n!)` through log-Gamma.
fn hypergeometric_coeff(a: f64, b: f64, c: f64, n: u32) -> f64 {
    let n = f64::from(n);
    (ln_gamma(a + n) - ln_gamma(a) + ln_gamma(b + n) - ln_gamma(b) - ln_gamma(c + n) + ln_gamma(c) - ln_gamma(n + 1.0))
        .exp()
}

#[test]
fn hypergeometric_recurrence_matches_gamma_ratios() {
    for (a, b, c) in [(1.0, 1.0, 2.0), (0.5, 1.5, 2.5), (2.3, 0.7, 1.1), (3.0, 4.0, 0.5)] {
        let f = PowerSeries::hypergeometric(a, b, c).unwrap();
        for n in 0..80 {
            let expected = hypergeometric_coeff(a, b, c, n);
            let got = f.coeff(n as usize);
            assert_eq!(got.im, 0.0);
            assert_relative_eq!(got.re, expected, max_relative = 1e-11);
        }
    }
}

#[test]
fn arcsin_coefficients_match_gamma_form_and_taylor_series() {
    let f = PowerSeries::arcsin();
    for k in 0..60u32 {
        let kf = f64::from(k);
        let expected = (ln_gamma(kf + 0.5) - 0.5 * std::f64::consts::PI.ln() - ln_gamma(kf + 1.0)).exp() / (2.0 * kf + 1.0);
        assert_relative_eq!(f.coeff(2 * k as usize + 1).re, expected, max_relative = 1e-11);
        assert_eq!(f.coeff(2 * k as usize).norm(), 0.0);
    }
    let taylor = [1.0, 1.0 / 6.0, 3.0 / 40.0, 5.0 / 112.0, 35.0 / 1152.0];
    for (k, t) in taylor.iter().enumerate() {
        assert_relative_eq!(f.coeff(2 * k + 1).re, *t, max_relative = 1e-15);
    }
}

#[test]
fn matrix_series_examples() {
    let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    let e = eval_matrix_series(&PowerSeries::exp(), &t, 1e-10).unwrap();
    // exp of the shift is I + T exactly
    let expected = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
    assert!(e.value.max_abs_diff(&expected) <= 1e-10);

    let d = ComplexMatrix::from_real_diagonal(&[0.5, 0.2]);
    let r = true_function_radius(&PowerSeries::exp(), &d, 1e-10).unwrap();
    assert!((r - 0.5f64.exp()).abs() <= 1e-10);
}

#[test]
fn gelfand_decreases_to_the_spectral_radius() {
    // eigenvalues 0.7, 0.3, -0.2 placed on the diagonal of a non-normal triangular matrix
    let t = ComplexMatrix::from_real_rows(&[
        &[0.7, 2.0, -1.0, 0.5, 0.0, 1.0],
        &[0.0, 0.3, 1.5, 0.0, 0.2, 0.0],
        &[0.0, 0.0, -0.2, 1.0, 0.0, 0.3],
        &[0.0, 0.0, 0.0, 0.1, 0.8, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.5, 1.2],
        &[0.0, 0.0, 0.0, 0.0, 0.0, -0.4],
    ])
    .unwrap();
    assert_eq!(spectral_radius(&t).unwrap(), 0.7);
    let g = gelfand_sequence(&t, 8).unwrap();
    for w in g.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
    assert!(g.iter().all(|&x| x >= 0.7 - 1e-12));
    assert!(g[0] > 1.5 && g[8] - 0.7 < 0.05);
}

#[test]
fn pair_examples() {
    let a = ComplexMatrix::from_real_diagonal(&[0.6]);
    let b = ComplexMatrix::from_real_diagonal(&[0.5]);
    let g = PowerSeries::geometric();
    let sq = bound_pair_sq(&g, &a, &b, 1e-12).unwrap().value().unwrap();
    // sqrt((1/(1−0.36))·(1/(1−0.25))) by hand
    assert_relative_eq!(sq, (1.5625f64 * (4.0 / 3.0)).sqrt(), max_relative = 1e-11);
    assert_relative_eq!(sq, 1.4433756729740644, max_relative = 1e-11);
    let oracle = true_function_radius(&g, &(&a * &b), 1e-12).unwrap();
    assert_relative_eq!(oracle, 1.0 / 0.7, max_relative = 1e-11);
    let best = best_bound(&g, Operands::Pair(&a, &b), 1e-12, &DEFAULT_P_GRID).unwrap();
    assert!(best.minimum.unwrap().value >= oracle - 1e-10);
}

#[test]
fn non_normal_single_bound() {
    // upper triangular with r(T) = 0.9 and a large off-diagonal part
    let mut entries = vec![Complex64::new(0.0, 0.0); 16];
    for i in 0..4 {
        entries[i * 4 + i] = Complex64::new(0.9 - 0.3 * i as f64, 0.0);
        for j in i + 1..4 {
            entries[i * 4 + j] = Complex64::new(0.4, -0.2);
        }
    }
    let t = ComplexMatrix::new(4, entries).unwrap();
    let f = PowerSeries::exp();
    let bound = bound_single(&f, &t, 1e-10).unwrap().value().unwrap();
    // e^0.9 to within the evaluation tolerance
    assert!((bound - 2.45960311115695).abs() <= 1e-10);
    let oracle = true_function_radius(&f, &t, 1e-10).unwrap();
    assert!(oracle <= bound + 1e-8);
}
