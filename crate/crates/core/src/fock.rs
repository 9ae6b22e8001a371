//! Truncated Fock-space engine.
//!
//! States live in the span of `|0⟩ … |D−1⟩`; operators are dense complex
//! `D × D` matrices. Ladder operators are truncated by dropping the matrix
//! elements that would leave the space, so operator identities only hold
//! on the top-left `(D−r) × (D−r)` block, `r` being the total raising
//! degree of the identity.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("deformation parameter k = {0} outside [0, 1]")]
    InvalidK(f64),
    #[error("dimension {0} too small (need at least {1})")]
    DimensionTooSmall(usize, usize),
    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),
    #[error("matrix exponential overflow (1-norm {0:e})")]
    ExpOverflow(f64),
}

pub type Result<T> = std::result::Result<T, FockError>;

/// Amplitudes `c_0 … c_{D−1}` over the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: DVector<C64>,
}

impl FockVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(FockError::DimensionTooSmall(0, 1));
        }
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(FockError::NonFinite("state amplitudes"));
        }
        Ok(Self {
            amps: DVector::from_vec(amps),
        })
    }

    /// Number state `|n⟩` in dimension `dim`.
    pub fn number(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(FockError::DimensionTooSmall(dim, n + 1));
        }
        let mut v = DVector::from_element(dim, ZERO);
        v[n] = ONE;
        Ok(Self { amps: v })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::number(0, dim)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_nan() || n <= 0.0 {
            return Err(FockError::NonFinite("zero-norm state"));
        }
        Ok(Self {
            amps: self.amps.map(|c| c / n),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Result<C64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    /// Euclidean distance to another vector of the same dimension.
    pub fn distance(&self, other: &FockVector) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok((&self.amps - &other.amps).norm())
    }

    /// Largest amplitude difference over the first `len` levels.
    pub fn max_diff_prefix(&self, other: &FockVector, len: usize) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .take(len)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Copy truncated or zero-padded to `dim` levels.
    pub fn resized(&self, dim: usize) -> Self {
        let mut v = DVector::from_element(dim, ZERO);
        for (i, c) in self.amps.iter().take(dim).enumerate() {
            v[i] = *c;
        }
        Self { amps: v }
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self { amps: &self.amps * s }
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        Err(FockError::DimensionMismatch { left: a, right: b })
    } else {
        Ok(())
    }
}

/// Dense complex operator on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    m: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(FockError::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        Ok(Self { m })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::from_element(dim, dim, ZERO),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn diagonal<F: Fn(usize) -> C64>(dim: usize, f: F) -> Self {
        Self {
            m: DMatrix::from_fn(dim, dim, |r, c| if r == c { f(r) } else { ZERO }),
        }
    }

    /// Matrix with `f(n)` at `(n−1, n)`: maps `|n⟩` to `f(n)|n−1⟩`.
    pub fn lowering<F: Fn(usize) -> f64>(dim: usize, f: F) -> Self {
        Self {
            m: DMatrix::from_fn(dim, dim, |r, c| {
                if c == r + 1 {
                    C64::new(f(c), 0.0)
                } else {
                    ZERO
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { m: &self.m * s }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self { m: &self.m + &other.m })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self { m: &self.m - &other.m })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self { m: &self.m * &other.m })
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        check_dims(self.dim(), v.dim())?;
        Ok(FockVector { amps: &self.m * &v.amps })
    }

    /// Max-norm over the top-left `block × block` corner.
    pub fn block_max_abs(&self, block: usize) -> f64 {
        let b = block.min(self.dim());
        let mut worst = 0.0_f64;
        for r in 0..b {
            for c in 0..b {
                worst = worst.max(self.m[(r, c)].norm());
            }
        }
        worst
    }

    /// Max-norm of `self − other` over the top-left `block × block` corner.
    pub fn block_distance(&self, other: &Self, block: usize) -> Result<f64> {
        Ok(self.sub(other)?.block_max_abs(block))
    }

    /// Max absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn one_norm(&self) -> f64 {
        self.m
            .column_iter()
            .map(|col| col.iter().map(|c| c.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// `XY − YX`.
pub fn commutator(x: &OperatorMatrix, y: &OperatorMatrix) -> Result<OperatorMatrix> {
    x.mul(y)?.sub(&y.mul(x)?)
}

/// `XY + YX`.
pub fn anticommutator(x: &OperatorMatrix, y: &OperatorMatrix) -> Result<OperatorMatrix> {
    x.mul(y)?.add(&y.mul(x)?)
}

const TAYLOR_DEGREE: usize = 18;
const SCALED_NORM: f64 = 0.5;

/// `e^X` by scaling and squaring around a degree-18 Taylor core.
///
/// `X` is scaled by `2^{−s}` so that `‖X/2^s‖₁ ≤ 1/2`; the Taylor
/// remainder is then below `0.5^19/19! ≈ 2e−23` relative. The algorithm is
/// fixed, so results are bitwise reproducible for a given input.
pub fn matrix_exp(x: &OperatorMatrix) -> Result<OperatorMatrix> {
    if !x.is_finite() {
        return Err(FockError::NonFinite("matrix_exp input"));
    }
    let dim = x.dim();
    let norm = x.one_norm();
    let mut s = 0_i32;
    if norm > SCALED_NORM {
        s = (norm / SCALED_NORM).log2().ceil() as i32;
    }
    let scaled = &x.m * C64::new(0.5_f64.powi(s), 0.0);
    // Horner: I + A(I + A/2(I + A/3(…)))
    let eye = DMatrix::<C64>::identity(dim, dim);
    let mut acc = eye.clone();
    for j in (1..=TAYLOR_DEGREE).rev() {
        acc = &eye + (&scaled * &acc) * C64::new(1.0 / j as f64, 0.0);
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    let out = OperatorMatrix { m: acc };
    if !out.is_finite() {
        return Err(FockError::ExpOverflow(norm));
    }
    Ok(out)
}

/// `⟨ψ|O|ψ⟩`.
pub fn expectation(state: &FockVector, op: &OperatorMatrix) -> Result<C64> {
    let applied = op.apply(state)?;
    state.inner(&applied)
}

/// Validated deformation parameter `k ∈ [0, 1]`.
pub fn check_k(k: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&k) {
        Ok(k)
    } else {
        Err(FockError::InvalidK(k))
    }
}

/// Cached operator matrices of the interpolating algebra at fixed `k`.
///
/// ```text
/// A₀ = k n̂ + 1/2      A₋ = √(k n̂ + 1) â      A₊ = A₋†
/// B₋ = (1 + k n̂)^{−1/2} â                      B₊ = B₋†
/// ```
#[derive(Debug, Clone)]
pub struct AlgebraContext {
    pub k: f64,
    pub dim: usize,
    pub a: OperatorMatrix,
    pub a_dag: OperatorMatrix,
    pub n: OperatorMatrix,
    pub a0: OperatorMatrix,
    pub a_plus: OperatorMatrix,
    pub a_minus: OperatorMatrix,
    pub b_plus: OperatorMatrix,
    pub b_minus: OperatorMatrix,
    pub x: OperatorMatrix,
    pub p: OperatorMatrix,
}

/// `⟨n−1|A₋|n⟩ = √(n (1 + k(n−1)))`.
pub fn a_minus_element(k: f64, n: usize) -> f64 {
    let nf = n as f64;
    (nf * (1.0 + k * (nf - 1.0))).sqrt()
}

/// `⟨n−1|B₋|n⟩ = √(n / (1 + k(n−1)))`.
pub fn b_minus_element(k: f64, n: usize) -> f64 {
    let nf = n as f64;
    (nf / (1.0 + k * (nf - 1.0))).sqrt()
}

pub fn annihilation(dim: usize) -> OperatorMatrix {
    OperatorMatrix::lowering(dim, |n| (n as f64).sqrt())
}

pub fn make_context(k: f64, dim: usize) -> Result<AlgebraContext> {
    let k = check_k(k)?;
    if dim < 2 {
        return Err(FockError::DimensionTooSmall(dim, 2));
    }
    let a = annihilation(dim);
    let a_dag = a.adjoint();
    let n = OperatorMatrix::diagonal(dim, |i| C64::new(i as f64, 0.0));
    let a0 = OperatorMatrix::diagonal(dim, |i| C64::new(k * i as f64 + 0.5, 0.0));
    let a_minus = OperatorMatrix::lowering(dim, |i| a_minus_element(k, i));
    let a_plus = a_minus.adjoint();
    let b_minus = OperatorMatrix::lowering(dim, |i| b_minus_element(k, i));
    let b_plus = b_minus.adjoint();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let x = a.add(&a_dag)?.scale(C64::new(inv_sqrt2, 0.0));
    // (â − â†)/(i√2) = −i(â − â†)/√2
    let p = a.sub(&a_dag)?.scale(C64::new(0.0, -inv_sqrt2));
    Ok(AlgebraContext {
        k,
        dim,
        a,
        a_dag,
        n,
        a0,
        a_plus,
        a_minus,
        b_plus,
        b_minus,
        x,
        p,
    })
}
