//! Structural checks of the interpolating algebra: commutators, Casimir,
//! disentanglement of the displacement operator, and the differential
//! realizations on formal power series.
//!
//! Truncated ladder matrices are wrong only where a product reaches past
//! the last level, so every matrix comparison here is restricted to an
//! interior block that excludes those edge rows.

use thiserror::Error;

use crate::fock::{self, make_context, matrix_exp, FockError, OperatorMatrix, C64};
use crate::specfun::{ln_factorial, ln_rising_product};
use crate::states::DisentangledParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("dimension {dim} too small for {check} (need at least {min})")]
    DimensionTooSmall { check: &'static str, dim: usize, min: usize },
    #[error("series of order {order} cannot hold degree {degree}")]
    OrderOverflow { order: usize, degree: usize },
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub check: String,
    pub k: f64,
    pub dim: usize,
    pub block: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CertificationReport {
    fn new(check: impl Into<String>, k: f64, dim: usize, block: usize, residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            k,
            dim,
            block,
            residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
        }
    }
}

pub const COMMUTATOR_TOL: f64 = 1e-10;
pub const CASIMIR_TOL: f64 = 1e-12;
pub const DISENTANGLE_TOL: f64 = 1e-8;
pub const SERIES_TOL: f64 = 1e-12;

/// `[A₀,A±] = ±kA±` and `[A₊,A₋] = −2A₀` on the interior block.
pub fn verify_commutators(k: f64, dim: usize) -> Result<CertificationReport> {
    if dim < 8 {
        return Err(AlgebraError::DimensionTooSmall {
            check: "commutators",
            dim,
            min: 8,
        });
    }
    let ctx = make_context(k, dim)?;
    let block = dim - 1;
    let kc = C64::new(k, 0.0);
    let r1 = fock::commutator(&ctx.a0, &ctx.a_plus)?.block_distance(&ctx.a_plus.scale(kc), block)?;
    let r2 = fock::commutator(&ctx.a0, &ctx.a_minus)?.block_distance(&ctx.a_minus.scale(-kc), block)?;
    let r3 = fock::commutator(&ctx.a_plus, &ctx.a_minus)?.block_distance(&ctx.a0.scale(C64::new(-2.0, 0.0)), block)?;
    Ok(CertificationReport::new(
        "commutators",
        k,
        dim,
        block,
        r1.max(r2).max(r3),
        COMMUTATOR_TOL,
    ))
}

/// `A₀² − (k/2){A₋,A₊} = ½(½ − k)·I` on the interior block.
pub fn casimir_check(k: f64, dim: usize) -> Result<CertificationReport> {
    if dim < 4 {
        return Err(AlgebraError::DimensionTooSmall {
            check: "casimir",
            dim,
            min: 4,
        });
    }
    let ctx = make_context(k, dim)?;
    let block = dim - 1;
    let c = ctx
        .a0
        .mul(&ctx.a0)?
        .sub(&fock::anticommutator(&ctx.a_minus, &ctx.a_plus)?.scale(C64::new(0.5 * k, 0.0)))?;
    let want = OperatorMatrix::identity(dim).scale(C64::new(0.5 * (0.5 - k), 0.0));
    Ok(CertificationReport::new(
        "casimir",
        k,
        dim,
        block,
        c.block_distance(&want, block)?,
        CASIMIR_TOL,
    ))
}

/// Compares `exp(αA₊ − α*A₋)` with `exp(βA₊) exp(γA₀) exp(δA₋)` on the
/// top-left `block × block` corner.
pub fn verify_disentanglement(alpha: C64, k: f64, dim: usize, block: usize) -> Result<CertificationReport> {
    if block == 0 || dim < 4 * block {
        return Err(AlgebraError::DimensionTooSmall {
            check: "disentanglement",
            dim,
            min: 4 * block.max(1),
        });
    }
    let ctx = make_context(k, dim)?;
    let generator = ctx.a_plus.scale(alpha).sub(&ctx.a_minus.scale(alpha.conj()))?;
    let u1 = matrix_exp(&generator)?;
    let p = DisentangledParams::new(alpha, k);
    let u2 = matrix_exp(&ctx.a_plus.scale(p.beta))?
        .mul(&matrix_exp(&ctx.a0.scale(C64::new(p.gamma, 0.0)))?)?
        .mul(&matrix_exp(&ctx.a_minus.scale(p.delta))?)?;
    Ok(CertificationReport::new(
        "disentanglement",
        k,
        dim,
        block,
        u1.block_distance(&u2, block)?,
        DISENTANGLE_TOL,
    ))
}

/// Truncated formal power series `Σ_{j<order} a_j x^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coefficients: Vec<C64>,
}

impl PowerSeries {
    pub fn zeros(order: usize) -> Self {
        Self {
            coefficients: vec![C64::new(0.0, 0.0); order],
        }
    }

    pub fn monomial(degree: usize, coefficient: C64, order: usize) -> Result<Self> {
        if degree >= order {
            return Err(AlgebraError::OrderOverflow { order, degree });
        }
        let mut s = Self::zeros(order);
        s.coefficients[degree] = coefficient;
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn coefficient(&self, degree: usize) -> C64 {
        self.coefficients.get(degree).copied().unwrap_or_default()
    }

    /// `d/dx`; order `M → M − 1`.
    pub fn derivative(&self) -> Self {
        Self {
            coefficients: self
                .coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * j as f64)
                .collect(),
        }
    }

    /// Multiplication by `x`; order `M → M + 1`.
    pub fn shift(&self) -> Self {
        let mut coefficients = Vec::with_capacity(self.order() + 1);
        coefficients.push(C64::new(0.0, 0.0));
        coefficients.extend_from_slice(&self.coefficients);
        Self { coefficients }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|c| c * s).collect(),
        }
    }

    /// Sum, padded to the longer order.
    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().max(other.order());
        Self {
            coefficients: (0..order).map(|j| self.coefficient(j) + other.coefficient(j)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Resizes to `order`, failing if a nonzero coefficient would be lost.
    pub fn truncated(&self, order: usize) -> Result<Self> {
        if let Some(degree) = (order..self.order()).find(|&j| self.coefficients[j] != C64::new(0.0, 0.0)) {
            return Err(AlgebraError::OrderOverflow { order, degree });
        }
        Ok(Self {
            coefficients: (0..order).map(|j| self.coefficient(j)).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let order = self.order().max(other.order());
        (0..order)
            .map(|j| (self.coefficient(j) - other.coefficient(j)).norm())
            .fold(0.0, f64::max)
    }
}

/// Which function space the generators act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// Functions `⟨α,k|ψ⟩`; `|m⟩ ↦ x^m / √(m! R_m)`.
    Algebraic,
    /// Functions from the Perelomov states; `|m⟩ ↦ x^m √(R_m / m!)`.
    Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Lower,
    Raise,
    Zero,
}

impl Representation {
    /// Coefficient of `x^m` representing `|m⟩`.
    pub fn basis_weight(self, k: f64, m: usize) -> f64 {
        let ln = ln_factorial(m) + ln_rising_product(k, m);
        match self {
            Representation::Algebraic => (-0.5 * ln).exp(),
            Representation::Group => (0.5 * (ln_rising_product(k, m) - ln_factorial(m))).exp(),
        }
    }

    /// Applies a generator as a differential operator.
    ///
    /// Algebraic: `A₋ = d + kx d²`, `A₊ = x`, `A₀ = kx d + ½`.
    /// Group: `A₋ = d`, `A₊ = kx² d + x`, `A₀ = kx d + ½`.
    pub fn apply(self, generator: Generator, k: f64, f: &PowerSeries) -> PowerSeries {
        let kc = C64::new(k, 0.0);
        let d = f.derivative();
        match (self, generator) {
            (_, Generator::Zero) => d.shift().scale(kc).add(&f.scale(C64::new(0.5, 0.0))),
            (Representation::Algebraic, Generator::Lower) => d.add(&d.derivative().shift().scale(kc)),
            (Representation::Algebraic, Generator::Raise) => f.shift(),
            (Representation::Group, Generator::Lower) => d,
            (Representation::Group, Generator::Raise) => d.shift().shift().scale(kc).add(&f.shift()),
        }
    }
}

/// Compares the differential action of `A₋, A₊, A₀` on the representative
/// of `|m⟩` with the Fock matrix elements mapped into series coefficients.
pub fn differential_rep_check(k: f64, rep: Representation, m: usize, order: usize) -> Result<CertificationReport> {
    let k = fock::check_k(k)?;
    if m + 2 >= order {
        return Err(AlgebraError::OrderOverflow { order, degree: m + 2 });
    }
    let w = |n: usize| C64::new(rep.basis_weight(k, n), 0.0);
    let f = PowerSeries::monomial(m, w(m), order)?;
    let mut residual: f64 = 0.0;
    for generator in [Generator::Lower, Generator::Raise, Generator::Zero] {
        let got = rep.apply(generator, k, &f).truncated(order)?;
        let mut want = PowerSeries::zeros(order);
        match generator {
            Generator::Lower if m > 0 => {
                want.coefficients[m - 1] = w(m - 1) * fock::a_minus_element(k, m);
            }
            Generator::Lower => {}
            Generator::Raise => {
                want.coefficients[m + 1] = w(m + 1) * fock::a_minus_element(k, m + 1);
            }
            Generator::Zero => {
                want.coefficients[m] = w(m) * (k * m as f64 + 0.5);
            }
        }
        residual = residual.max(got.max_abs_diff(&want));
    }
    let name = match rep {
        Representation::Algebraic => "differential_rep_algebraic",
        Representation::Group => "differential_rep_group",
    };
    Ok(CertificationReport::new(name, k, order, m, residual, SERIES_TOL))
}

/// `[A₀,A±] ∓ kA±` and `[A₊,A₋] + 2A₀` as series transforms on every
/// monomial of degree `≤ order − 3`.
pub fn series_commutator_check(k: f64, rep: Representation, order: usize) -> Result<CertificationReport> {
    let k = fock::check_k(k)?;
    if order < 4 {
        return Err(AlgebraError::DimensionTooSmall {
            check: "series commutators",
            dim: order,
            min: 4,
        });
    }
    let kc = C64::new(k, 0.0);
    let app = |g, f: &PowerSeries| rep.apply(g, k, f);
    let comm = |x: Generator, y: Generator, f: &PowerSeries| app(x, &app(y, f)).sub(&app(y, &app(x, f)));
    let mut residual: f64 = 0.0;
    for degree in 0..=order - 3 {
        let f = PowerSeries::monomial(degree, C64::new(1.0, 0.0), order)?;
        let raise = comm(Generator::Zero, Generator::Raise, &f).sub(&app(Generator::Raise, &f).scale(kc));
        let lower = comm(Generator::Zero, Generator::Lower, &f).add(&app(Generator::Lower, &f).scale(kc));
        let cross = comm(Generator::Raise, Generator::Lower, &f).add(&app(Generator::Zero, &f).scale(C64::new(2.0, 0.0)));
        let zero = PowerSeries::zeros(order);
        for s in [raise, lower, cross] {
            residual = residual.max(s.max_abs_diff(&zero));
        }
    }
    let name = match rep {
        Representation::Algebraic => "series_commutators_algebraic",
        Representation::Group => "series_commutators_group",
    };
    Ok(CertificationReport::new(name, k, order, order - 2, residual, SERIES_TOL))
}
