//! The in-house 4×4 linear algebra checked against nalgebra.

use nalgebra::{Complex, Matrix4, SymmetricEigen};
use qrecover_core::harness::ensemble::{rng_from_seed, sample_mixed, sample_pure};
use qrecover_core::qmath::{hermitian_eig, hermitian_eigenvalues, psd_sqrt, uhlmann_fidelity};
use qrecover_core::Matrix4c;

type NaMat = Matrix4<Complex<f64>>;

fn to_na(m: &Matrix4c) -> NaMat {
    NaMat::from_fn(|i, j| Complex::new(m.0[i][j].re, m.0[i][j].im))
}

fn na_sorted_eigenvalues(m: &NaMat) -> Vec<f64> {
    let mut w: Vec<f64> = SymmetricEigen::new(*m).eigenvalues.iter().copied().collect();
    w.sort_by(f64::total_cmp);
    w
}

fn na_psd_sqrt(m: &NaMat) -> NaMat {
    let e = SymmetricEigen::new(*m);
    let d = NaMat::from_diagonal(&e.eigenvalues.map(|x| Complex::new(x.max(0.0).sqrt(), 0.0)));
    e.eigenvectors * d * e.eigenvectors.adjoint()
}

fn na_fidelity(rho: &NaMat, sigma: &NaMat) -> f64 {
    let s = na_psd_sqrt(rho);
    let inner = s * sigma * s;
    let inner = (inner + inner.adjoint()) * Complex::new(0.5, 0.0);
    let t: f64 = SymmetricEigen::new(inner).eigenvalues.iter().map(|x| x.max(0.0).sqrt()).sum();
    t * t
}

fn max_diff(a: &Matrix4c, b: &NaMat) -> f64 {
    (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| (a.0[i][j] - num_complex::Complex64::new(b[(i, j)].re, b[(i, j)].im)).norm())
        .fold(0.0, f64::max)
}

#[test]
fn eigenvalues_match_nalgebra() {
    let mut rng = rng_from_seed(100);
    for _ in 0..200 {
        let rho = sample_mixed(&mut rng);
        let ours = hermitian_eigenvalues(rho.matrix()).unwrap();
        let theirs = na_sorted_eigenvalues(&to_na(rho.matrix()));
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-12, "{ours:?} vs {theirs:?}");
        }
    }
}

#[test]
fn eigenvectors_diagonalize() {
    let mut rng = rng_from_seed(101);
    for _ in 0..200 {
        let m = sample_mixed(&mut rng).matrix().scale(3.0);
        let e = hermitian_eig(&m).unwrap();
        let d = &(&e.eigenvectors.adjoint() * &m) * &e.eigenvectors;
        let want = Matrix4c::diag_real(e.eigenvalues);
        assert!(d.max_abs_diff(&want) < 1e-12);
    }
}

#[test]
fn square_root_matches_nalgebra() {
    let mut rng = rng_from_seed(102);
    for _ in 0..200 {
        let rho = sample_mixed(&mut rng);
        let ours = psd_sqrt(rho.matrix()).unwrap();
        assert!(max_diff(&ours, &na_psd_sqrt(&to_na(rho.matrix()))) < 1e-10);
    }
}

#[test]
fn fidelity_matches_nalgebra() {
    let mut rng = rng_from_seed(103);
    for _ in 0..200 {
        let a = sample_mixed(&mut rng);
        let b = sample_mixed(&mut rng);
        let ours = uhlmann_fidelity(&a, &b).unwrap();
        let theirs = na_fidelity(&to_na(a.matrix()), &to_na(b.matrix()));
        assert!((ours - theirs).abs() < 1e-10, "{ours} vs {theirs}");
    }
}

#[test]
fn fidelity_symmetric_on_random_pairs() {
    let mut rng = rng_from_seed(104);
    for _ in 0..100 {
        let a = sample_mixed(&mut rng);
        let b = sample_mixed(&mut rng);
        let f = uhlmann_fidelity(&a, &b).unwrap();
        assert!((f - uhlmann_fidelity(&b, &a).unwrap()).abs() < 1e-10);
        assert!((0.0..=1.0).contains(&f));
    }
}

#[test]
fn fidelity_reduces_to_expectation_for_pure_reference() {
    let mut rng = rng_from_seed(105);
    for _ in 0..100 {
        let psi = sample_pure(&mut rng);
        let sigma = sample_mixed(&mut rng);
        let want = sigma.expectation(psi.amplitudes());
        assert!((uhlmann_fidelity(&psi.density(), &sigma).unwrap() - want).abs() < 1e-10);
        // Both arguments rank-deficient.
        let phi = sample_pure(&mut rng);
        let want = qrecover_core::qmath::inner(psi.amplitudes(), phi.amplitudes()).norm_sqr();
        assert!((uhlmann_fidelity(&psi.density(), &phi.density()).unwrap() - want).abs() < 1e-10);
    }
}

#[test]
fn square_root_commutes_with_input() {
    let mut rng = rng_from_seed(106);
    for _ in 0..100 {
        let rho = sample_mixed(&mut rng);
        let m = rho.matrix();
        let s = psd_sqrt(m).unwrap();
        assert!((&s * m).max_abs_diff(&(m * &s)) < 1e-10);
        assert!((&s * &s).max_abs_diff(m) < 1e-10);
    }
}
