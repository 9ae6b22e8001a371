//! Photon statistics, quadrature variances, overlaps and the Wigner
//! function.
//!
//! Conventions: `x̂ = (â + â†)/√2`, `p̂ = (â − â†)/(i√2)`, so the vacuum
//! variance is 1/2. The Q parameter is variance over mean, so a Poisson
//! distribution gives exactly 1 (not 0). The Wigner function is a density
//! in the complex plane, normalized as `∫ W(z) d²z = 1` with
//! `d²z = d(Re z) d(Im z)`; the vacuum peaks at `2/π`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::fock::{self, FockError, FockVector, OperatorMatrix, C64};
use crate::specfun::{self, ln_factorial, rising_product, SpecFunError};
use crate::states::{self, StateError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObservableError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("invalid Wigner grid: {0}")]
    BadGrid(String),
    #[error("{0} requires k in (0, 1]")]
    NeedsPositiveK(&'static str),
}

pub type Result<T> = std::result::Result<T, ObservableError>;

/// `p_n = |c_n|²`.
pub fn photon_distribution(state: &FockVector) -> Vec<f64> {
    state.amplitudes().iter().map(|c| c.norm_sqr()).collect()
}

/// `(⟨n̂²⟩ − ⟨n̂⟩²) / ⟨n̂⟩`; `None` when the mean photon number is zero.
pub fn q_parameter(state: &FockVector) -> Option<f64> {
    let (mean, second) = photon_distribution(state)
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(m, s), (n, p)| {
            let nf = n as f64;
            (m + nf * p, s + nf * nf * p)
        });
    if mean == 0.0 {
        None
    } else {
        Some((second - mean * mean) / mean)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureReport {
    pub var_x: f64,
    pub var_p: f64,
    pub product: f64,
}

impl QuadratureReport {
    /// `Var x · Var p ≥ 1/4` up to `slack`.
    pub fn satisfies_uncertainty(&self, slack: f64) -> bool {
        self.product >= 0.25 - slack
    }
}

/// Quadrature operators for one dimension, reusable across many states.
#[derive(Debug, Clone)]
pub struct Quadratures {
    x: OperatorMatrix,
    p: OperatorMatrix,
}

impl Quadratures {
    pub fn new(dim: usize) -> Result<Self> {
        let ctx = fock::make_context(0.0, dim.max(2))?;
        Ok(Self { x: ctx.x, p: ctx.p })
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn variances(&self, state: &FockVector) -> Result<QuadratureReport> {
        let var_x = variance(&self.x, state)?;
        let var_p = variance(&self.p, state)?;
        Ok(QuadratureReport {
            var_x,
            var_p,
            product: var_x * var_p,
        })
    }
}

fn variance(op: &OperatorMatrix, state: &FockVector) -> Result<f64> {
    let applied = op.apply(state)?;
    let mean = state.inner(&applied)?.re;
    // ⟨ψ|O O|ψ⟩ = ‖Oψ‖² for Hermitian O
    let second = applied.norm().powi(2);
    Ok((second - mean * mean).max(0.0))
}

pub fn quadrature_variances(state: &FockVector) -> Result<QuadratureReport> {
    Quadratures::new(state.dim())?.variances(state)
}

/// `⟨a|b⟩` by direct summation.
pub fn overlap(a: &FockVector, b: &FockVector) -> Result<C64> {
    Ok(a.inner(b)?)
}

/// Closed form of `⟨α,k|β,k⟩` for the algebraic family.
///
/// Uses `Σ (α*β)^n / (n! R_n) = ₀F₁(; 1/k; α*β/k)`, which reduces to
/// `Γ(1/k) w^{1−1/k} I_{1/k−1}(2w)` with `w = √(α*β/k)` when `α*β ≥ 0`.
/// Normalizations come from the same Bessel form at `|α|` and `|β|`.
pub fn overlap_algebraic_closed(alpha: C64, beta: C64, k: f64) -> Result<C64> {
    if k == 0.0 {
        let e = alpha.conj() * beta - 0.5 * (alpha.norm_sqr() + beta.norm_sqr());
        return Ok(e.exp());
    }
    if !(k > 0.0 && k <= 1.0) {
        return Err(ObservableError::NeedsPositiveK("overlap_algebraic_closed"));
    }
    let nu = 1.0 / k - 1.0;
    let lg = specfun::log_gamma(1.0 / k)?;
    // ln Σ r^{2n}/(n! R_n) at real r
    let ln_sum_real = |r: f64| -> Result<f64> {
        if r == 0.0 {
            return Ok(0.0);
        }
        let w = r / k.sqrt();
        Ok(lg - nu * w.ln() + specfun::bessel_i(nu, 2.0 * w)?.ln())
    };
    let ln_norms = -0.5 * (ln_sum_real(alpha.norm())? + ln_sum_real(beta.norm())?);
    let prod = alpha.conj() * beta;
    let cross = if prod.im == 0.0 && prod.re >= 0.0 {
        C64::new(ln_sum_real(prod.re.sqrt())?.exp(), 0.0)
    } else {
        hyp0f1(1.0 / k, prod / k)
    };
    Ok(cross * ln_norms.exp())
}

/// `₀F₁(; b; z) = Σ z^n / (n! (b)_n)` for complex `z`, `b > 0`.
fn hyp0f1(b: f64, z: C64) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= z / (n * (b + n - 1.0));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && n > z.norm().sqrt() {
            break;
        }
        if n > 100_000.0 {
            break;
        }
    }
    sum
}

/// Closed form of `⟨β|β'⟩` for Perelomov states labelled by `β`:
/// `[(1−k|β|²)(1−k|β'|²)]^{1/2k} (1 − kβ*β')^{−1/k}`.
pub fn overlap_perelomov_closed(beta: C64, beta_prime: C64, k: f64) -> Result<C64> {
    if k == 0.0 {
        return overlap_algebraic_closed(beta, beta_prime, 0.0);
    }
    if !(k > 0.0 && k <= 1.0) {
        return Err(ObservableError::NeedsPositiveK("overlap_perelomov_closed"));
    }
    for b in [beta, beta_prime] {
        if k * b.norm_sqr() >= 1.0 {
            return Err(StateError::NotNormalizable(k * b.norm_sqr()).into());
        }
    }
    let ln_pref = ((-k * beta.norm_sqr()).ln_1p() + (-k * beta_prime.norm_sqr()).ln_1p()) / (2.0 * k);
    let cross = (C64::new(1.0, 0.0) - beta.conj() * beta_prime * k).ln() * (-1.0 / k);
    Ok((cross + ln_pref).exp())
}

/// Wigner function at `z` from the Fock amplitudes, via the matrix
/// elements of the displaced parity operator `D(z)(−1)^n̂ D(z)†`.
pub fn wigner(state: &FockVector, z: C64) -> f64 {
    let c = state.amplitudes();
    let dim = c.len();
    let x = 4.0 * z.norm_sqr();
    let phase = C64::from_polar(1.0, z.arg());
    let mut total = 0.0;
    let mut rot = C64::new(1.0, 0.0);
    for d in 0..dim {
        // f_n = e^{−x/2} x^{d/2} √(n!/(n+d)!) L_n^{(d)}(x), by forward recurrence
        let mut f_prev = 0.0;
        let mut f = if x == 0.0 {
            if d == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (0.5 * d as f64 * x.ln() - 0.5 * x - 0.5 * ln_factorial(d)).exp()
        };
        let mut acc = 0.0;
        let df = d as f64;
        for n in 0..dim - d {
            let weight = (c[n] * c[n + d].conj() * rot).re;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * weight * f;
            let nf = n as f64;
            let next = ((2.0 * nf + 1.0 + df - x) * f - (nf * (nf + df)).sqrt() * f_prev)
                / ((nf + 1.0) * (nf + 1.0 + df)).sqrt();
            f_prev = f;
            f = next;
        }
        total += if d == 0 { acc } else { 2.0 * acc };
        rot *= phase;
    }
    2.0 / PI * total
}

/// Which Fock-basis double-sum expression to evaluate in
/// [`wigner_double_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoubleSumForm {
    /// Gaussian `e^{−2|z|²}` and monomials `z^{m−l} z*^{n−l}`.
    Corrected,
    /// Gaussian `e^{−|z|²}` and monomials `z^{n−l} z*^{m−l}`.
    Printed,
}

/// Wigner function of the algebraic state `|α,k⟩` from the explicit double
/// sum over Fock indices, truncated at `terms`.
///
/// The `Corrected` form agrees with [`wigner`]; the `Printed` form differs
/// by the factor `e^{|z|²}` (and `z ↔ z*`), which is not a constant.
pub fn wigner_double_sum(alpha: C64, k: f64, z: C64, terms: usize, form: DoubleSumForm) -> Result<f64> {
    let norm2 = 1.0 / states::algebraic_norm_series(alpha.norm(), fock::check_k(k)?)?;
    let fact: Vec<f64> = (0..terms)
        .scan(1.0, |acc, n| {
            if n > 0 {
                *acc *= n as f64;
            }
            Some(*acc)
        })
        .collect();
    let coeff: Vec<C64> = (0..terms)
        .map(|n| alpha.powu(n as u32) / rising_product(k, n).sqrt())
        .collect();
    let zc = z.conj();
    let mut total = C64::new(0.0, 0.0);
    for n in 0..terms {
        for m in 0..terms {
            let mut inner = C64::new(0.0, 0.0);
            for l in 0..=n.min(m) {
                let mono = match form {
                    DoubleSumForm::Corrected => z.powu((m - l) as u32) * zc.powu((n - l) as u32),
                    DoubleSumForm::Printed => z.powu((n - l) as u32) * zc.powu((m - l) as u32),
                };
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                let scale = 2f64.powi((n + m - 2 * l) as i32) / (fact[l] * fact[n - l] * fact[m - l]);
                inner += mono * (sign * scale);
            }
            total += coeff[n] * coeff[m].conj() * inner;
        }
    }
    let gauss = match form {
        DoubleSumForm::Corrected => (-2.0 * z.norm_sqr()).exp(),
        DoubleSumForm::Printed => (-z.norm_sqr()).exp(),
    };
    Ok(2.0 / PI * gauss * norm2 * total.re)
}

/// Uniform rectangular grid in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn square(half_width: f64, step: f64) -> Self {
        Self {
            re_min: -half_width,
            re_max: half_width,
            im_min: -half_width,
            im_max: half_width,
            step,
        }
    }

    fn count(lo: f64, hi: f64, step: f64) -> usize {
        ((hi - lo) / step + 1e-9).floor() as usize + 1
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.step > 0.0
            && self.step.is_finite()
            && self.re_max >= self.re_min
            && self.im_max >= self.im_min
            && [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite());
        if !ok {
            return Err(ObservableError::BadGrid(format!("{self:?}")));
        }
        if self.nx() * self.ny() > 50_000_000 {
            return Err(ObservableError::BadGrid("more than 5e7 points".into()));
        }
        Ok(())
    }

    pub fn nx(&self) -> usize {
        Self::count(self.re_min, self.re_max, self.step)
    }

    pub fn ny(&self) -> usize {
        Self::count(self.im_min, self.im_max, self.step)
    }

    /// Point `(i, j)`, computed from the index so rows never drift.
    pub fn point(&self, i: usize, j: usize) -> C64 {
        C64::new(
            self.re_min + i as f64 * self.step,
            self.im_min + j as f64 * self.step,
        )
    }
}

/// Wigner values on a [`GridSpec`], stored with the real part varying
/// fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn compute(state: &FockVector, spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let (nx, ny) = (spec.nx(), spec.ny());
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(wigner(state, spec.point(i, j)));
            }
        }
        Ok(Self { spec, values })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.spec.nx() + i]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Trapezoid-rule integral over the grid rectangle.
    pub fn integral(&self) -> f64 {
        let (nx, ny) = (self.spec.nx(), self.spec.ny());
        let edge = |i: usize, n: usize| if n > 1 && (i == 0 || i == n - 1) { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for j in 0..ny {
            let mut row = 0.0;
            for i in 0..nx {
                row += edge(i, nx) * self.value(i, j);
            }
            total += edge(j, ny) * row;
        }
        total * self.spec.step * self.spec.step
    }
}
