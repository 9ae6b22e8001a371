//! Special functions and the matrix exponential against independent
//! reference computations.

use kcs::fock::{make_context, matrix_exp, OperatorMatrix, C64};
use kcs::quad::{integrate_scalar, QuadOptions};
use kcs::specfun::{bessel_i, bessel_k, log_gamma, rising_product};
use nalgebra::DMatrix;

fn opts() -> QuadOptions {
    QuadOptions {
        rel_tol: 1e-13,
        abs_tol: 0.0,
        max_intervals: 4000,
    }
}

// K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt
fn k_integral(nu: f64, x: f64) -> f64 {
    // integrand below e^{-745} beyond t with x cosh t > 745
    let t_max = (750.0 / x).acosh().max(1.0);
    integrate_scalar(|t| (-x * t.cosh()).exp() * (nu * t).cosh(), 0.0, t_max, opts())
        .unwrap()
        .0
}

#[test]
fn bessel_k_matches_integral_representation() {
    for nu in [0.0, 0.3, 1.0, 1.5, 3.0, 7.25] {
        for x in [0.05, 0.5, 1.9, 2.1, 6.0, 25.0] {
            let want = k_integral(nu, x);
            let got = bessel_k(nu, x).unwrap();
            assert!((got - want).abs() <= 1e-9 * want, "nu={nu} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn bessel_i_matches_integral_representation() {
    // I_n(x) = (1/π) ∫₀^π e^{x cos t} cos(nt) dt for integer n
    for n in [0, 1, 2, 5] {
        for x in [0.1, 1.0, 4.0, 12.0] {
            let want = integrate_scalar(
                |t| (x * t.cos()).exp() * (n as f64 * t).cos(),
                0.0,
                std::f64::consts::PI,
                opts(),
            )
            .unwrap()
            .0 / std::f64::consts::PI;
            let got = bessel_i(n as f64, x).unwrap();
            // the oscillatory integrand cancels to ~1e-16 absolute for small I_n
            assert!((got - want).abs() <= 1e-11 * want + 1e-15, "n={n} x={x}");
        }
    }
}

#[test]
fn log_gamma_matches_euler_integral() {
    // Γ(s) = ∫₀^∞ t^{s−1} e^{−t} dt, split at 1 to isolate the endpoint behaviour
    for s in [1.5, 2.0, 3.7, 8.0] {
        let f = |t: f64| (((s - 1.0) * t.ln()) - t).exp();
        let a = integrate_scalar(f, 0.0, 1.0, opts()).unwrap().0;
        let b = integrate_scalar(f, 1.0, 80.0, opts()).unwrap().0;
        let want = (a + b).ln();
        assert!((log_gamma(s).unwrap() - want).abs() < 1e-12, "s={s}");
    }
}

#[test]
fn rising_product_is_pochhammer_ratio() {
    for k in [0.25_f64, 0.5, 1.0] {
        for n in [0usize, 1, 4, 9] {
            let want = (n as f64 * k.ln() + log_gamma(1.0 / k + n as f64).unwrap() - log_gamma(1.0 / k).unwrap()).exp();
            assert!((rising_product(k, n) - want).abs() <= 1e-12 * want);
        }
    }
}

/// `exp(X)` for skew-Hermitian `X` through the Hermitian eigendecomposition
/// of `iX`.
fn exp_skew_hermitian(x: &DMatrix<C64>) -> DMatrix<C64> {
    let h = x * C64::new(0.0, 1.0);
    let eig = h.symmetric_eigen();
    let phases = eig.eigenvalues.map(|l| C64::from_polar(1.0, -l));
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&phases) * v.adjoint()
}

#[test]
fn matrix_exp_matches_eigendecomposition() {
    for (k, alpha) in [(0.5, C64::new(0.7, -0.4)), (1.0, C64::new(0.0, 1.1)), (0.0, C64::new(1.3, 0.2))] {
        let ctx = make_context(k, 10).unwrap();
        let gen = ctx.a_plus.scale(alpha).sub(&ctx.a_minus.scale(alpha.conj())).unwrap();
        let got = matrix_exp(&gen).unwrap();
        let want = OperatorMatrix::from_dmatrix(exp_skew_hermitian(gen.as_dmatrix())).unwrap();
        assert!(got.block_distance(&want, 10).unwrap() < 1e-12, "k={k}");
    }
}

#[test]
fn matrix_exp_of_diagonal() {
    let d = OperatorMatrix::diagonal(6, |i| C64::new(-(i as f64) * 3.0, i as f64));
    let e = matrix_exp(&d).unwrap();
    for i in 0..6 {
        let want = C64::new(-(i as f64) * 3.0, i as f64).exp();
        assert!((e.entry(i, i) - want).norm() < 1e-14);
    }
    assert!(e.entry(0, 1).norm() == 0.0);
}

// ((1−k)/π) ∫ |⟨n|β⟩_p|² d²β / (1−k|β|²)^e with t = k|β|² is
// ((1−k)/k) Γ(1/k+n)/(Γ(1/k) n!) B(n+1, 1/k−e+1)
fn disk_diagonal(k: f64, n: usize, e: f64) -> f64 {
    let lg = |x: f64| log_gamma(x).unwrap();
    let nf = n as f64;
    let ln_beta = lg(nf + 1.0) + lg(1.0 / k - e + 1.0) - lg(nf + 1.0 / k - e + 2.0);
    (1.0 - k) / k * (lg(1.0 / k + nf) - lg(1.0 / k) - lg(nf + 1.0) + ln_beta).exp()
}

#[test]
fn disk_measures_match_beta_integrals() {
    use kcs::measure::{identity_resolution_perelomov, DiskExponent, MeasureOptions};
    for k in [0.2, 0.6, 0.9] {
        for (exponent, e) in [(DiskExponent::Two, 2.0), (DiskExponent::One, 1.0)] {
            let id = identity_resolution_perelomov(k, 24, exponent, MeasureOptions::default()).unwrap();
            for n in 0..12 {
                let want = disk_diagonal(k, n, e);
                assert!((id.entry(n, n).re / want - 1.0).abs() < 1e-9, "k={k} e={e} n={n}");
            }
        }
    }
}
