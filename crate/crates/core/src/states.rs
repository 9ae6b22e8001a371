//! Constructors for the state families of the interpolating algebra.
//!
//! Every family has amplitudes of the form `(positive real) · z^n`, where
//! `z` is `α` or the disentangled parameter `β`:
//!
//! | family      | amplitude `c_n` (unnormalized)        | eigen-operator |
//! |-------------|---------------------------------------|----------------|
//! | algebraic   | `α^n / √(n! R_n)`                     | `A₋`           |
//! | perelomov   | `β^n √(R_n / n!)`                     | (displaced vacuum) |
//! | bminus      | `α^n √(R_n / n!)`                     | `B₋`           |
//! | coherent    | `α^n / √n!`                           | `â`            |
//! | phase       | `β^n` (`|β| < 1`)                     | `K₋` at `k = 1` |
//!
//! with `R_n = Π_{j<n}(1 + jk)`. Amplitudes are generated in log space so
//! that large `|α|` never overflows.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fock::{self, matrix_exp, make_context, FockError, FockVector, OperatorMatrix, C64};
use crate::specfun::{ln_factorial, ln_rising_product};

/// Dropped-tail probability allowed by the fixed-dimension constructors.
pub const TAIL_TOLERANCE: f64 = 1e-12;
/// Largest dimension [`StateLabel::build_auto`] will allocate.
pub const MAX_AUTO_DIM: usize = 512;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("dropped tail probability {tail:e} at dimension {dim} exceeds {tolerance:e}")]
    Truncation { dim: usize, tail: f64, tolerance: f64 },
    #[error("state not normalizable: k|z|^2 = {0} must be < 1")]
    NotNormalizable(f64),
    #[error("normalization series did not converge")]
    SeriesDiverged,
    #[error("unknown state family '{0}'")]
    UnknownFamily(String),
}

pub type Result<T> = std::result::Result<T, StateError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Algebraic,
    Perelomov,
    BMinus,
    Coherent,
    Phase,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Algebraic,
        Family::Perelomov,
        Family::BMinus,
        Family::Coherent,
        Family::Phase,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Algebraic => "algebraic",
            Family::Perelomov => "perelomov",
            Family::BMinus => "bminus",
            Family::Coherent => "coherent",
            Family::Phase => "phase",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| StateError::UnknownFamily(s.to_string()))
    }
}

/// Identifies one member of a state family.
///
/// For `Phase` the complex parameter is the geometric ratio `β` and `k`
/// is fixed to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateLabel {
    pub family: Family,
    pub alpha: C64,
    pub k: f64,
}

impl StateLabel {
    pub fn new(family: Family, alpha: C64, k: f64) -> Result<Self> {
        let k = if family == Family::Phase { 1.0 } else { k };
        let k = if family == Family::Coherent { 0.0 } else { fock::check_k(k)? };
        let label = Self { family, alpha, k };
        label.series()?;
        Ok(label)
    }

    fn series(&self) -> Result<Series> {
        Series::for_label(self)
    }

    /// Builds the normalized state at a fixed dimension.
    pub fn build(&self, dim: usize) -> Result<FockVector> {
        self.build_with_tail(dim, TAIL_TOLERANCE)
    }

    /// Like [`build`](Self::build) with a caller-chosen tail tolerance.
    pub fn build_with_tail(&self, dim: usize, tail_tol: f64) -> Result<FockVector> {
        self.series()?.vector(dim, tail_tol)
    }

    /// Builds the state at the smallest dimension `≥ min_dim` whose
    /// dropped tail is at most `tail_tol`, up to [`MAX_AUTO_DIM`].
    pub fn build_auto(&self, min_dim: usize, tail_tol: f64) -> Result<FockVector> {
        let s = self.series()?;
        let dim = s.minimal_dim(tail_tol)?.max(min_dim);
        s.vector(dim, tail_tol)
    }

    /// Smallest dimension with dropped tail `≤ tail_tol`.
    pub fn minimal_dim(&self, tail_tol: f64) -> Result<usize> {
        self.series()?.minimal_dim(tail_tol)
    }

    /// Probability outside the first `dim` levels.
    pub fn tail_probability(&self, dim: usize) -> Result<f64> {
        Ok(self.series()?.tail(dim))
    }
}

/// Log-space description `ln|c_n| = n·ln|z| + ½ σ (ln R_n − ln n!) − …`.
#[derive(Debug, Clone, Copy)]
struct Series {
    /// modulus and argument of the expansion variable
    r: f64,
    theta: f64,
    k: f64,
    kind: SeriesKind,
    /// ln of the normalization constant applied to each term
    ln_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SeriesKind {
    /// `z^n / √(n! R_n)`
    Inverse,
    /// `z^n √(R_n / n!)`
    Direct,
}

impl Series {
    fn for_label(label: &StateLabel) -> Result<Self> {
        let k = label.k;
        match label.family {
            Family::Algebraic => Self::inverse(label.alpha, k),
            Family::Coherent => Self::inverse(label.alpha, 0.0),
            Family::Perelomov => Self::direct(beta_of_alpha(label.alpha, k), k),
            Family::BMinus => Self::direct(label.alpha, k),
            Family::Phase => Self::direct(label.alpha, 1.0),
        }
    }

    fn inverse(z: C64, k: f64) -> Result<Self> {
        let mut s = Self {
            r: z.norm(),
            theta: z.arg(),
            k,
            kind: SeriesKind::Inverse,
            ln_norm: 0.0,
        };
        if k == 0.0 {
            s.ln_norm = -0.5 * s.r * s.r;
        } else {
            s.ln_norm = -0.5 * s.ln_series_sum()?;
        }
        Ok(s)
    }

    fn direct(z: C64, k: f64) -> Result<Self> {
        let r = z.norm();
        let x = k * r * r;
        if x >= 1.0 {
            return Err(StateError::NotNormalizable(x));
        }
        // (1 − k r²)^{1/2k}, with the k → 0 limit e^{−r²/2}
        let ln_norm = if k == 0.0 {
            -0.5 * r * r
        } else {
            (-x).ln_1p() / (2.0 * k)
        };
        Ok(Self {
            r,
            theta: z.arg(),
            k,
            kind: SeriesKind::Direct,
            ln_norm,
        })
    }

    /// `ln |c_n|` before normalization.
    fn ln_term(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        if self.r == 0.0 {
            return f64::NEG_INFINITY;
        }
        let sign = match self.kind {
            SeriesKind::Inverse => -1.0,
            SeriesKind::Direct => 1.0,
        };
        n as f64 * self.r.ln() + 0.5 * (sign * ln_rising_product(self.k, n) - ln_factorial(n))
    }

    /// `ln Σ_n |c_n|²` by direct summation.
    fn ln_series_sum(&self) -> Result<f64> {
        if self.r == 0.0 {
            return Ok(0.0);
        }
        let mut terms = Vec::new();
        let mut max = f64::NEG_INFINITY;
        let mut n = 0usize;
        loop {
            let t = 2.0 * self.ln_term(n);
            terms.push(t);
            max = max.max(t);
            // past the peak and negligible
            if t < max - 90.0 && n > 2 && t < 2.0 * self.ln_term(n - 1) {
                break;
            }
            n += 1;
            if n > 2_000_000 {
                return Err(StateError::SeriesDiverged);
            }
        }
        let s: f64 = terms.iter().map(|t| (t - max).exp()).sum();
        Ok(max + s.ln())
    }

    fn amplitude(&self, n: usize) -> C64 {
        let m = (self.ln_term(n) + self.ln_norm).exp();
        C64::from_polar(m, n as f64 * self.theta)
    }

    fn prob(&self, n: usize) -> f64 {
        (2.0 * (self.ln_term(n) + self.ln_norm)).exp()
    }

    /// Probability carried by levels `≥ dim`, summed directly.
    fn tail(&self, dim: usize) -> f64 {
        if self.r == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        let mut n = dim;
        let mut prev = f64::INFINITY;
        loop {
            let p = self.prob(n);
            acc += p;
            let falling = p <= prev;
            if falling && (p == 0.0 || p < 1e-18 * acc) {
                break;
            }
            prev = p;
            n += 1;
            if n > dim + 10_000_000 {
                break;
            }
        }
        acc
    }

    fn minimal_dim(&self, tail_tol: f64) -> Result<usize> {
        let mut tail = self.tail(MAX_AUTO_DIM);
        if tail > tail_tol {
            return Err(StateError::Truncation {
                dim: MAX_AUTO_DIM,
                tail,
                tolerance: tail_tol,
            });
        }
        let mut dim = MAX_AUTO_DIM;
        while dim > 1 {
            let next = tail + self.prob(dim - 1);
            if next > tail_tol {
                break;
            }
            tail = next;
            dim -= 1;
        }
        Ok(dim)
    }

    fn vector(&self, dim: usize, tail_tol: f64) -> Result<FockVector> {
        let tail = self.tail(dim);
        if tail > tail_tol {
            return Err(StateError::Truncation {
                dim,
                tail,
                tolerance: tail_tol,
            });
        }
        Ok(FockVector::new((0..dim).map(|n| self.amplitude(n)).collect())?)
    }
}

/// `β = e^{iθ} tanh(|α|√k)/√k`, with the analytic limit `β → α` at `k = 0`.
pub fn beta_of_alpha(alpha: C64, k: f64) -> C64 {
    let lambda = alpha.norm();
    let s = lambda * k.sqrt();
    // tanh(s)/s → 1 − s²/3
    let ratio = if s < 1e-8 { 1.0 - s * s / 3.0 } else { s.tanh() / s };
    alpha * ratio
}

/// Inverse of [`beta_of_alpha`]; requires `k|β|² < 1`.
pub fn alpha_of_beta(beta: C64, k: f64) -> Result<C64> {
    let b = beta.norm();
    let s = b * k.sqrt();
    if s >= 1.0 {
        return Err(StateError::NotNormalizable(s * s));
    }
    let ratio = if s < 1e-8 { 1.0 + s * s / 3.0 } else { s.atanh() / s };
    Ok(beta * ratio)
}

/// Parameters of `exp(αA₊ − α*A₋) = exp(βA₊) exp(γA₀) exp(δA₋)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisentangledParams {
    pub beta: C64,
    pub gamma: f64,
    pub delta: C64,
}

impl DisentangledParams {
    pub fn new(alpha: C64, k: f64) -> Self {
        let beta = beta_of_alpha(alpha, k);
        let lambda = alpha.norm();
        // γ = −(2/k) ln cosh(λ√k), → −λ² as k → 0
        let gamma = if k == 0.0 {
            -lambda * lambda
        } else {
            let s = lambda * k.sqrt();
            let half = (0.5 * s).sinh();
            let ln_cosh = if s < 20.0 {
                (2.0 * half * half).ln_1p()
            } else {
                s + (-2.0 * s).exp().ln_1p() - std::f64::consts::LN_2
            };
            -2.0 * ln_cosh / k
        };
        Self {
            beta,
            gamma,
            delta: -beta.conj(),
        }
    }
}

/// Eigenstate of `A₋` with eigenvalue `α`.
pub fn algebraic_cs(alpha: C64, k: f64, dim: usize) -> Result<FockVector> {
    StateLabel::new(Family::Algebraic, alpha, k)?.build(dim)
}

/// Displaced vacuum `exp(αA₊ − α*A₋)|0⟩` from its closed-form expansion.
pub fn perelomov_cs(alpha: C64, k: f64, dim: usize) -> Result<FockVector> {
    StateLabel::new(Family::Perelomov, alpha, k)?.build(dim)
}

/// Perelomov state addressed by `β` directly (`k|β|² < 1`).
pub fn perelomov_from_beta(beta: C64, k: f64, dim: usize) -> Result<FockVector> {
    let k = fock::check_k(k)?;
    Series::direct(beta, k)?.vector(dim, TAIL_TOLERANCE)
}

/// Eigenstate of `B₋` with eigenvalue `α`; requires `k|α|² < 1`.
pub fn bminus_eigenstate(alpha: C64, k: f64, dim: usize) -> Result<FockVector> {
    StateLabel::new(Family::BMinus, alpha, k)?.build(dim)
}

/// Glauber coherent state `e^{−|α|²/2} Σ α^n/√n! |n⟩`.
pub fn coherent_state(alpha: C64, dim: usize) -> Result<FockVector> {
    StateLabel::new(Family::Coherent, alpha, 0.0)?.build(dim)
}

/// Normalized geometric state `√(1−|β|²) Σ β^n |n⟩`.
pub fn phase_state(beta: C64, dim: usize) -> Result<FockVector> {
    StateLabel::new(Family::Phase, beta, 1.0)?.build(dim)
}

/// Unnormalized algebraic coefficients `α^n / √(n! R_n)` for `n < len`.
pub fn algebraic_coefficients(alpha: C64, k: f64, len: usize) -> Vec<C64> {
    let s = Series {
        r: alpha.norm(),
        theta: alpha.arg(),
        k,
        kind: SeriesKind::Inverse,
        ln_norm: 0.0,
    };
    (0..len).map(|n| s.amplitude(n)).collect()
}

/// Unnormalized group coefficients `β^n √(R_n / n!)` for `n < len`.
pub fn group_coefficients(beta: C64, k: f64, len: usize) -> Vec<C64> {
    let s = Series {
        r: beta.norm(),
        theta: beta.arg(),
        k,
        kind: SeriesKind::Direct,
        ln_norm: 0.0,
    };
    (0..len).map(|n| s.amplitude(n)).collect()
}

/// `Σ_n |α|^{2n} / (n! R_n)` by direct summation; the squared inverse of
/// the algebraic normalization constant.
pub fn algebraic_norm_series(alpha_abs: f64, k: f64) -> Result<f64> {
    let s = Series::inverse(C64::new(alpha_abs, 0.0), k)?;
    Ok((-2.0 * s.ln_norm).exp())
}

/// `Σ_n |β|^{2n} R_n / n!` by direct summation.
pub fn group_norm_series(beta_abs: f64, k: f64) -> Result<f64> {
    let s = Series {
        r: beta_abs,
        theta: 0.0,
        k,
        kind: SeriesKind::Direct,
        ln_norm: 0.0,
    };
    if k * beta_abs * beta_abs >= 1.0 {
        return Err(StateError::NotNormalizable(k * beta_abs * beta_abs));
    }
    Ok(s.ln_series_sum()?.exp())
}

/// `‖normalize(exp(αB₊)|0⟩) − |α,k⟩‖`.
pub fn nonunitary_deformation_check(alpha: C64, k: f64, dim: usize) -> Result<f64> {
    let target = algebraic_cs(alpha, k, dim)?;
    let ctx = make_context(k, dim)?;
    let u = matrix_exp(&ctx.b_plus.scale(alpha))?;
    let deformed = u.apply(&FockVector::vacuum(dim)?)?.normalized()?;
    Ok(deformed.distance(&target)?)
}

/// `‖Oψ − λψ‖`.
pub fn eigen_residual(op: &OperatorMatrix, state: &FockVector, eigenvalue: C64) -> Result<f64> {
    let applied = op.apply(state)?;
    Ok(applied.distance(&state.scaled(eigenvalue))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_i, rising_product};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn family_parsing() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        assert_eq!("BMinus".parse::<Family>().unwrap(), Family::BMinus);
        assert!("squeezed".parse::<Family>().is_err());
    }

    #[test]
    fn zero_alpha_is_vacuum() {
        for k in [0.0, 0.5, 1.0] {
            let v = algebraic_cs(c(0.0, 0.0), k, 10).unwrap();
            assert_eq!(v, FockVector::vacuum(10).unwrap());
            let p = perelomov_cs(c(0.0, 0.0), k, 10).unwrap();
            assert_eq!(p, FockVector::vacuum(10).unwrap());
        }
    }

    #[test]
    fn algebraic_k0_is_glauber() {
        let a = c(1.1, -0.4);
        let v = algebraic_cs(a, 0.0, 60).unwrap();
        let mut fact = 1.0_f64;
        let mut pow = c(1.0, 0.0);
        for n in 0..40 {
            if n > 0 {
                fact *= n as f64;
                pow *= a;
            }
            let want = pow * ((-0.5 * a.norm_sqr()).exp() / fact.sqrt());
            assert!((v.amplitudes()[n] - want).norm() <= 1e-12, "n={n}");
        }
    }

    #[test]
    fn algebraic_k1_normalization_is_bessel() {
        for a in [0.5, 1.0, 2.0] {
            let v = algebraic_cs(c(a, 0.0), 1.0, 60).unwrap();
            let want = 1.0 / bessel_i(0.0, 2.0 * a).unwrap().sqrt();
            assert!((v.amplitudes()[0].re - want).abs() <= 1e-10 * want);
        }
    }

    #[test]
    fn closed_form_normalization_cross_check() {
        // Σ |α|^{2n}/(n! R_n) = Γ(1/k) (|α|/√k)^{1−1/k} I_{1/k−1}(2|α|/√k)
        for k in [0.25, 0.5, 0.75, 1.0] {
            for a in [0.3, 1.0, 2.5] {
                let series = algebraic_norm_series(a, k).unwrap();
                let z = a / k.sqrt();
                let nu = 1.0 / k - 1.0;
                let closed = crate::specfun::log_gamma(1.0 / k).unwrap().exp()
                    * z.powf(-nu)
                    * bessel_i(nu, 2.0 * z).unwrap();
                assert!(((series - closed) / closed).abs() < 1e-12, "k={k} a={a}");
            }
        }
    }

    #[test]
    fn group_normalization_identity() {
        for k in [0.1_f64, 0.25, 0.5, 0.75, 1.0] {
            for b in [0.2_f64, 0.6, 0.9] {
                let b = b / k.sqrt() * 0.99;
                let series = group_norm_series(b, k).unwrap();
                let closed = (1.0 - k * b * b).powf(-1.0 / k);
                assert!(((series - closed) / closed).abs() <= 1e-10, "k={k} b={b}");
            }
        }
    }

    #[test]
    fn beta_limits() {
        let a = c(0.7, 0.2);
        assert_eq!(beta_of_alpha(a, 0.0), a);
        assert!((beta_of_alpha(a, 1e-14) - a).norm() < 1e-12);
        let big = beta_of_alpha(c(40.0, 0.0), 1.0);
        assert!((big.norm() - 1.0).abs() < 1e-15);
        assert!((beta_of_alpha(c(1.0, 0.0), 1.0).re - 0.761_594_155_955_764_9).abs() < 1e-15);
        let back = alpha_of_beta(beta_of_alpha(a, 0.6), 0.6).unwrap();
        assert!((back - a).norm() < 1e-14);
    }

    #[test]
    fn disentangled_params() {
        let p = DisentangledParams::new(c(1.0, 1.0), 0.5);
        assert_eq!(p.delta, -p.beta.conj());
        assert!(p.gamma <= 0.0);
        assert!(p.beta.norm() * 0.5_f64.sqrt() < 1.0);
        let z = DisentangledParams::new(c(1.5, 0.0), 0.0);
        assert_eq!(z.gamma, -2.25);
        let tiny = DisentangledParams::new(c(1.5, 0.0), 1e-9);
        assert!((tiny.gamma + 2.25).abs() < 1e-8);
        let big = DisentangledParams::new(c(30.0, 0.0), 1.0);
        assert!((big.gamma + 2.0 * (30f64.cosh()).ln()).abs() < 1e-10);
    }

    #[test]
    fn perelomov_phase_state_profile() {
        let a = c(0.9, 0.3);
        let v = perelomov_cs(a, 1.0, 120).unwrap();
        let beta = beta_of_alpha(a, 1.0);
        for n in 0..60 {
            let ratio = v.amplitudes()[n + 1] / v.amplitudes()[n];
            assert!((ratio - beta).norm() <= 1e-10);
        }
        let ph = phase_state(beta, 120).unwrap();
        assert!(ph.distance(&v).unwrap() < 1e-13);
    }

    #[test]
    fn perelomov_matches_displaced_vacuum() {
        let (a, k, dim) = (c(0.8, 0.0), 0.5, 120);
        let ctx = make_context(k, dim).unwrap();
        let gen = ctx.a_plus.scale(a).sub(&ctx.a_minus.scale(a.conj())).unwrap();
        let u = matrix_exp(&gen).unwrap();
        let displaced = u.apply(&FockVector::vacuum(dim).unwrap()).unwrap();
        let closed = perelomov_cs(a, k, dim).unwrap();
        assert!(closed.max_diff_prefix(&displaced, 20) <= 1e-8);
    }

    #[test]
    fn bminus_relations() {
        let (a, k) = (c(0.6, 0.0), 0.75);
        let dim = StateLabel::new(Family::BMinus, a, k).unwrap().minimal_dim(1e-26).unwrap();
        let v = bminus_eigenstate(a, k, dim).unwrap();
        let ctx = make_context(k, dim).unwrap();
        assert!(eigen_residual(&ctx.b_minus, &v, a).unwrap() <= 1e-10);
        // same amplitudes as the Perelomov state whose β equals α
        let p = perelomov_from_beta(a, k, dim).unwrap();
        assert!(p.distance(&v).unwrap() < 1e-14);
        let scaled = perelomov_from_beta(a / k.sqrt(), k, dim).unwrap();
        assert!(scaled.distance(&v).unwrap() > 1e-2);
        // k = 0 is Glauber
        let g = bminus_eigenstate(c(1.2, 0.5), 0.0, 60).unwrap();
        let cs = coherent_state(c(1.2, 0.5), 60).unwrap();
        assert!(g.distance(&cs).unwrap() < 1e-14);
    }

    #[test]
    fn bminus_normalizability() {
        assert!(matches!(
            bminus_eigenstate(c(1.0, 0.0), 1.0, 100),
            Err(StateError::NotNormalizable(_))
        ));
        assert!(matches!(
            StateLabel::new(Family::BMinus, c(2.0, 0.0), 0.3),
            Err(StateError::NotNormalizable(_))
        ));
    }

    #[test]
    fn algebraic_eigen_residual() {
        let (a, k) = (c(1.7, 0.0), 0.5);
        let ctx = make_context(k, 60).unwrap();
        let v = algebraic_cs(a, k, 60).unwrap();
        assert!(eigen_residual(&ctx.a_minus, &v, a).unwrap() <= 1e-10);
    }

    #[test]
    fn truncation_is_reported() {
        let err = algebraic_cs(c(4.0, 0.0), 0.0, 10).unwrap_err();
        assert!(matches!(err, StateError::Truncation { dim: 10, .. }));
        let label = StateLabel::new(Family::Perelomov, c(3.0, 0.0), 1.0).unwrap();
        assert!(matches!(label.build_auto(2, 1e-12), Err(StateError::Truncation { dim: 512, .. })));
    }

    #[test]
    fn minimal_dim_is_tight() {
        let label = StateLabel::new(Family::Algebraic, c(2.5, 0.0), 0.5).unwrap();
        let d = label.minimal_dim(1e-12).unwrap();
        assert!(label.tail_probability(d).unwrap() <= 1e-12);
        assert!(label.tail_probability(d - 1).unwrap() > 1e-12);
        let v = label.build_auto(2, 1e-12).unwrap();
        assert_eq!(v.dim(), d);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonunitary_deformation() {
        assert_eq!(nonunitary_deformation_check(c(0.0, 0.0), 0.5, 30).unwrap(), 0.0);
        assert!(nonunitary_deformation_check(c(1.0, 0.0), 1.0, 60).unwrap() <= 1e-8);
        assert!(nonunitary_deformation_check(c(2.0, 0.0), 0.25, 60).unwrap() <= 1e-8);
    }

    #[test]
    fn coefficient_helpers() {
        let a = c(0.4, 0.9);
        let k = 0.3;
        let u = algebraic_coefficients(a, k, 8);
        let g = group_coefficients(a, k, 8);
        let mut fact = 1.0;
        for n in 0..8 {
            if n > 0 {
                fact *= n as f64;
            }
            let r = rising_product(k, n);
            let pow = a.powu(n as u32);
            assert!((u[n] - pow / (fact * r).sqrt()).norm() < 1e-14);
            assert!((g[n] - pow * (r / fact).sqrt()).norm() < 1e-14);
        }
    }
}
