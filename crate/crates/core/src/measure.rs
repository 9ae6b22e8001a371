//! Measures that resolve the identity with the algebraic and Perelomov
//! families, plus the moment checks behind them.
//!
//! Both measures are rotation invariant, so every quadrature here is a
//! product of an adaptive radial rule and a uniform angular trapezoid rule
//! with at least `4·dim` points. The angular rule is exact for the
//! trigonometric polynomials `e^{i(n−m)θ}` that appear.
//!
//! Algebraic weight (order `ν = 1/k − 1`):
//!
//! ```text
//! ρ(r) = 2 / (Γ(1/k) k^{(1/k+1)/2}) · r^ν · K_ν(2r/√k)
//! ∫₀^∞ ρ(r) r^{2n+1} dr = n! R_n / 2
//! ```
//!
//! Perelomov measure on the disk `|β| < 1/√k`:
//! `(1−k)/π · d²β / (1 − k|β|²)²`.

use std::f64::consts::{LN_2, PI};

use thiserror::Error;

use crate::fock::{FockError, FockVector, OperatorMatrix, C64};
use crate::quad::{self, QuadError, QuadOptions};
use crate::specfun::{self, ln_factorial, ln_rising_product, SpecFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("{what}: k = {k} outside {allowed}")]
    InvalidK { what: &'static str, k: f64, allowed: &'static str },
    #[error("state dimension {state} exceeds measure dimension {measure}")]
    DimensionMismatch { state: usize, measure: usize },
    #[error("dimension must be at least 1")]
    EmptyDimension,
}

pub type Result<T> = std::result::Result<T, MeasureError>;

fn require_k(what: &'static str, k: f64, open_top: bool) -> Result<f64> {
    let ok = if open_top { k > 0.0 && k < 1.0 } else { k > 0.0 && k <= 1.0 };
    if ok {
        Ok(k)
    } else {
        Err(MeasureError::InvalidK {
            what,
            k,
            allowed: if open_top { "(0, 1)" } else { "(0, 1]" },
        })
    }
}

/// Which closed form of the algebraic radial weight to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightForm {
    /// Order `1/k − 1`, argument `2r/√k`; satisfies the moment condition.
    Corrected,
    /// Order `(1/k − 1)/2`, argument `2r/k`, prefactor `2/(kΓ(1/k))`.
    /// Kept for diagnostics; it coincides with the corrected form only at
    /// `k = 1`.
    Printed,
}

fn ln_radial_weight(form: WeightForm, k: f64, r: f64) -> Result<f64> {
    let inv = 1.0 / k;
    let lg = specfun::log_gamma(inv)?;
    match form {
        WeightForm::Corrected => {
            let nu = inv - 1.0;
            Ok(LN_2 - lg - 0.5 * (inv + 1.0) * k.ln() + nu * r.ln()
                + specfun::ln_bessel_k(nu, 2.0 * r / k.sqrt())?)
        }
        WeightForm::Printed => {
            let nu = 0.5 * (inv - 1.0);
            Ok(LN_2 - k.ln() - lg + (inv - 1.0) * r.ln() + specfun::ln_bessel_k(nu, 2.0 * r / k)?)
        }
    }
}

/// Corrected algebraic weight `ρ(r)`; at `k = 1` this is `2K₀(2r)`.
pub fn radial_weight_algebraic(k: f64, r: f64) -> Result<f64> {
    radial_weight(WeightForm::Corrected, k, r)
}

pub fn radial_weight(form: WeightForm, k: f64, r: f64) -> Result<f64> {
    require_k("radial weight", k, false)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(SpecFunError::Domain {
            function: "radial_weight",
            value: r,
            requirement: "r > 0",
        }
        .into());
    }
    Ok(ln_radial_weight(form, k, r)?.exp())
}

/// `n! R_n / 2`, the moment `∫ρ r^{2n+1} dr` that makes the diagonal of the
/// completeness integral equal to one.
pub fn moment_target(k: f64, n: usize) -> f64 {
    (ln_factorial(n) + ln_rising_product(k, n) - LN_2).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub n: usize,
    pub computed: f64,
    pub target: f64,
    pub relative_error: f64,
}

/// Radius beyond which every `exp(ln_g(r, j))`, `j < count`, has dropped
/// below `e^{−drop}` of its maximum.
fn decay_radius<F>(mut ln_g: F, count: usize, drop: f64) -> Result<f64>
where
    F: FnMut(f64, usize) -> Result<f64>,
{
    let step = 0.25;
    let mut peak = vec![f64::NEG_INFINITY; count];
    let mut r = step;
    loop {
        let mut done = true;
        for (j, p) in peak.iter_mut().enumerate() {
            let v = ln_g(r, j)?;
            if v > *p {
                *p = v;
                done = false;
            } else if v > *p - drop {
                done = false;
            }
        }
        if done {
            return Ok(r);
        }
        r += step;
        if r > 1e5 {
            return Err(QuadError::BadInterval { a: 0.0, b: r }.into());
        }
    }
}

// e^{-40} ≈ 4e-18: the tail beyond r_max is far below 1e-14 of the moment
const TAIL_DROP: f64 = 40.0;

/// Compares `∫₀^∞ ρ(r) r^{2n+1} dr` (adaptive quadrature) with
/// [`moment_target`].
pub fn moment_check(k: f64, n: usize, form: WeightForm, opts: QuadOptions) -> Result<MomentReport> {
    require_k("moment_check", k, false)?;
    let target = moment_target(k, n);
    let ln_target = target.ln();
    let ln_g = |r: f64| -> Result<f64> { Ok(ln_radial_weight(form, k, r)? + (2 * n + 1) as f64 * r.ln() - ln_target) };
    let r_max = decay_radius(|r, _| ln_g(r), 1, TAIL_DROP)?;
    let mut failure = None;
    let (scaled, _) = quad::integrate_scalar(
        |r| match ln_g(r) {
            Ok(v) => v.exp(),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        r_max,
        opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let computed = scaled * target;
    Ok(MomentReport {
        n,
        computed,
        target,
        relative_error: (computed - target).abs() / target,
    })
}

/// Partial sums of `Σ_{n≥1} μ_n^{−1/(2n)}` with `μ_n = n! R_n / 2`.
///
/// The `n = 0` term has no meaning (`μ_0^{−∞}`) and is skipped. Growth of
/// the partial sums is only illustrated, not proved.
pub fn carleman_diagnostic(k: f64, n_max: usize) -> Result<Vec<f64>> {
    require_k("carleman_diagnostic", k, false)?;
    let mut acc = 0.0;
    Ok((1..=n_max)
        .map(|n| {
            let ln_mu = ln_factorial(n) + ln_rising_product(k, n) - LN_2;
            acc += (-ln_mu / (2.0 * n as f64)).exp();
            acc
        })
        .collect())
}

/// Power of the Perelomov measure denominator `(1 − k|β|²)^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskExponent {
    /// Resolves the identity.
    Two,
    /// Gives diagonal `(1−k)/(kn+1)`; diagnostic only.
    One,
}

impl DiskExponent {
    fn value(self) -> f64 {
        match self {
            DiskExponent::Two => 2.0,
            DiskExponent::One => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureKind {
    AlgebraicWeight(WeightForm),
    PerelomovDisk(DiskExponent),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `0 ≤ r ≤ r_max` in the `α` plane.
    Radial { r_max: f64 },
    /// `0 ≤ |β| < radius` in the `β` plane.
    Disk { radius: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct MeasureOptions {
    /// Override for the radial cutoff of the algebraic measure.
    pub r_max: Option<f64>,
    /// Override for the angular order; at least `4·dim` is always used.
    pub angular_points: Option<usize>,
    pub quad: QuadOptions,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            r_max: None,
            angular_points: None,
            quad: QuadOptions {
                rel_tol: 1e-12,
                abs_tol: 0.0,
                max_intervals: 4000,
            },
        }
    }
}

/// Product quadrature for `(1/π) ∫ |z⟩⟨z| dμ` written against the
/// unnormalized family coefficients (`α^n/√(n!R_n)` or `β^n √(R_n/n!)`).
///
/// `ln_weights[i]` absorbs the radial density, the Jacobian `r dr`, any
/// change of variables and the state normalization, so that
/// `(1/π) Σ_i Σ_j (2π/M) e^{ln_weights[i]} c(z_ij) c(z_ij)†` approximates
/// the identity.
#[derive(Debug, Clone)]
pub struct RadialMeasure {
    pub kind: MeasureKind,
    pub k: f64,
    pub dim: usize,
    pub nodes: Vec<f64>,
    pub ln_weights: Vec<f64>,
    pub angular_points: usize,
    pub domain: Domain,
}

fn ln_coefficient_scale(kind: MeasureKind, k: f64, n: usize) -> f64 {
    match kind {
        MeasureKind::AlgebraicWeight(_) => -0.5 * (ln_factorial(n) + ln_rising_product(k, n)),
        MeasureKind::PerelomovDisk(_) => 0.5 * (ln_rising_product(k, n) - ln_factorial(n)),
    }
}

impl RadialMeasure {
    /// Measure for the algebraic family. The radial partition is refined
    /// until the diagonal entries `n < dim` converge.
    pub fn algebraic(k: f64, dim: usize, form: WeightForm, opts: MeasureOptions) -> Result<Self> {
        require_k("algebraic measure", k, false)?;
        if dim == 0 {
            return Err(MeasureError::EmptyDimension);
        }
        let kind = MeasureKind::AlgebraicWeight(form);
        let scales: Vec<f64> = (0..dim).map(|n| ln_coefficient_scale(kind, k, n)).collect();
        // ln of the n-th diagonal integrand, w(r) r^{2n} |scale_n|²
        let ln_w = |r: f64| -> Result<f64> { Ok(ln_radial_weight(form, k, r)? + r.ln()) };
        let ln_diag = |r: f64, n: usize| -> Result<f64> { Ok(ln_w(r)? + 2.0 * n as f64 * r.ln() + 2.0 * scales[n]) };
        let r_max = match opts.r_max {
            Some(r) => r,
            None => decay_radius(&ln_diag, dim, TAIL_DROP)?,
        };
        let (nodes, ln_weights) = build_rule(ln_diag, ln_w, |t| t, 0.0, r_max, dim, opts.quad)?;
        Ok(Self {
            kind,
            k,
            dim,
            nodes,
            ln_weights,
            angular_points: angular_order(dim, opts.angular_points),
            domain: Domain::Radial { r_max },
        })
    }

    /// Measure for the Perelomov family on the disk `|β| < 1/√k`, `0 < k < 1`.
    ///
    /// Integration runs in `s ∈ [0, 1]` with `1 − k|β|² = s^m`; `m` is
    /// chosen so the edge factor `(1 − k|β|²)^{1/k − e}` becomes regular.
    pub fn perelomov(k: f64, dim: usize, exponent: DiskExponent, opts: MeasureOptions) -> Result<Self> {
        require_k("perelomov measure", k, true)?;
        if dim == 0 {
            return Err(MeasureError::EmptyDimension);
        }
        let kind = MeasureKind::PerelomovDisk(exponent);
        let p = 1.0 / k - exponent.value();
        let m = if p < 0.0 { 1.0 / (p + 1.0) } else { 1.0 };
        let s_power = m * (p + 1.0) - 1.0;
        // (1−k) · s^{mp} · m s^{m−1} / (2k): the b db measure in s, times the prefactor
        let ln_const = (1.0 - k).ln() + m.ln() - (2.0 * k).ln();
        let radius_of = move |s: f64| ((1.0 - s.powf(m)).max(0.0) / k).sqrt();
        let ln_w = move |s: f64| -> Result<f64> { Ok(ln_const + s_power * s.ln()) };
        let scales: Vec<f64> = (0..dim).map(|n| ln_coefficient_scale(kind, k, n)).collect();
        let ln_diag = |s: f64, n: usize| -> Result<f64> {
            let b = radius_of(s);
            let pow = if n == 0 { 0.0 } else { 2.0 * n as f64 * b.ln() };
            Ok(ln_w(s)? + pow + 2.0 * scales[n])
        };
        let (nodes, ln_weights) = build_rule(ln_diag, ln_w, radius_of, 0.0, 1.0, dim, opts.quad)?;
        Ok(Self {
            kind,
            k,
            dim,
            nodes,
            ln_weights,
            angular_points: angular_order(dim, opts.angular_points),
            domain: Domain::Disk { radius: 1.0 / k.sqrt() },
        })
    }

    /// `√(weight_i) · r_i^n · scale_n` for every radial node, row-major by
    /// node. Computed in log space.
    fn radial_factors(&self, dim: usize) -> Vec<f64> {
        let scales: Vec<f64> = (0..dim).map(|n| ln_coefficient_scale(self.kind, self.k, n)).collect();
        let mut out = Vec::with_capacity(self.nodes.len() * dim);
        for (&r, &lw) in self.nodes.iter().zip(&self.ln_weights) {
            let ln_r = r.ln();
            for (n, s) in scales.iter().enumerate() {
                let pow = if n == 0 { 0.0 } else { n as f64 * ln_r };
                out.push((0.5 * lw + pow + s).exp());
            }
        }
        out
    }
}

fn angular_order(dim: usize, requested: Option<usize>) -> usize {
    requested.unwrap_or(0).max(4 * dim).max(8)
}

/// Runs the adaptive integrator on the diagonal integrands, then freezes
/// the partition into nodes (mapped to radii) and log-weights.
fn build_rule<D, W, M>(
    ln_diag: D,
    ln_w: W,
    radius_of: M,
    a: f64,
    b: f64,
    dim: usize,
    opts: QuadOptions,
) -> Result<(Vec<f64>, Vec<f64>)>
where
    D: Fn(f64, usize) -> Result<f64>,
    W: Fn(f64) -> Result<f64>,
    M: Fn(f64) -> f64,
{
    let mut failure = None;
    let res = quad::integrate(
        |t, out| {
            for (n, o) in out.iter_mut().enumerate() {
                match ln_diag(t, n) {
                    Ok(v) => *o = v.exp(),
                    Err(e) => {
                        failure.get_or_insert(e);
                    }
                }
            }
        },
        a,
        b,
        dim,
        opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let (ts, ws) = res.rule();
    let mut nodes = Vec::with_capacity(ts.len());
    let mut ln_weights = Vec::with_capacity(ts.len());
    for (t, w) in ts.into_iter().zip(ws) {
        let r = radius_of(t);
        if r > 0.0 {
            nodes.push(r);
            ln_weights.push(ln_w(t)? + w.ln());
        }
    }
    Ok((nodes, ln_weights))
}

/// `Σ_j (2π/M) e^{idθ_j}` over the angular rule, divided by `π`.
fn angular_factor(points: usize, d: i64) -> C64 {
    let h = 2.0 * PI / points as f64;
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..points {
        acc += C64::from_polar(1.0, d as f64 * j as f64 * h);
    }
    acc * (h / PI)
}

/// Evaluates the completeness integral on the first `dim` levels.
pub fn identity_resolution(measure: &RadialMeasure, dim: usize) -> Result<OperatorMatrix> {
    if dim > measure.dim {
        return Err(MeasureError::DimensionMismatch {
            state: dim,
            measure: measure.dim,
        });
    }
    let v = measure.radial_factors(dim);
    let nodes = measure.nodes.len();
    let ang: Vec<C64> = (0..dim as i64).map(|d| angular_factor(measure.angular_points, d)).collect();
    let mut out = OperatorMatrix::zeros(dim);
    let mut m = out.as_dmatrix().clone();
    for row in 0..dim {
        for col in row..dim {
            let mut radial = 0.0;
            for i in 0..nodes {
                radial += v[i * dim + row] * v[i * dim + col];
            }
            // ∫ e^{i(row−col)θ}: conjugate of the (col−row) factor
            let value = ang[col - row].conj() * radial;
            m[(row, col)] = value;
            m[(col, row)] = value.conj();
        }
    }
    out = OperatorMatrix::from_dmatrix(m)?;
    Ok(out)
}

/// `(1/π) ∫ |α,k⟩⟨α,k| dμ` with the corrected weight.
pub fn identity_resolution_algebraic(k: f64, dim: usize, opts: MeasureOptions) -> Result<OperatorMatrix> {
    let m = RadialMeasure::algebraic(k, dim, WeightForm::Corrected, opts)?;
    identity_resolution(&m, dim)
}

/// `((1−k)/π) ∫ |β⟩_p ⟨β|_p d²β / (1 − k|β|²)^e` over the disk.
/// Rejects `k ≥ 1`, where the prefactor vanishes.
pub fn identity_resolution_perelomov(
    k: f64,
    dim: usize,
    exponent: DiskExponent,
    opts: MeasureOptions,
) -> Result<OperatorMatrix> {
    let m = RadialMeasure::perelomov(k, dim, exponent, opts)?;
    identity_resolution(&m, dim)
}

/// Reconstructs `ψ` from its projections `f(z*) = ⟨z|ψ⟩` on the quadrature
/// grid, `ψ ≈ (1/π) ∫ dμ f(z*) |z⟩`.
pub fn expand_state(psi: &FockVector, measure: &RadialMeasure) -> Result<FockVector> {
    let dim = psi.dim();
    if dim > measure.dim {
        return Err(MeasureError::DimensionMismatch {
            state: dim,
            measure: measure.dim,
        });
    }
    let v = measure.radial_factors(dim);
    let amps = psi.amplitudes();
    let points = measure.angular_points;
    let h = 2.0 * PI / points as f64;
    let mut rec = vec![C64::new(0.0, 0.0); dim];
    let mut coeff = vec![C64::new(0.0, 0.0); dim];
    for i in 0..measure.nodes.len() {
        let row = &v[i * dim..(i + 1) * dim];
        for j in 0..points {
            let step = C64::from_polar(1.0, j as f64 * h);
            let mut phase = C64::new(1.0, 0.0);
            let mut f = C64::new(0.0, 0.0);
            for n in 0..dim {
                coeff[n] = phase * row[n];
                f += coeff[n].conj() * amps[n];
                phase *= step;
            }
            for n in 0..dim {
                rec[n] += coeff[n] * f;
            }
        }
    }
    let scale = h / PI;
    Ok(FockVector::new(rec.into_iter().map(|c| c * scale).collect())?)
}
