//! Globally adaptive Gauss–Kronrod (7/15) quadrature for vector-valued
//! integrands on a finite interval.
//!
//! All components share one partition. The interval with the largest
//! normalized error estimate is bisected until every component meets its
//! tolerance, so the final partition can also be frozen into a plain
//! node/weight rule and reused for other integrands on the same range.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature did not converge after {intervals} intervals (error estimate {error:e})")]
    NoConvergence { intervals: usize, error: f64 },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd Kronrod abscissae XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone)]
struct Segment {
    a: f64,
    b: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Final partition, sorted by left endpoint.
    pub partition: Vec<(f64, f64)>,
}

impl QuadResult {
    /// Freezes the partition into a composite 15-point Kronrod rule.
    pub fn rule(&self) -> (Vec<f64>, Vec<f64>) {
        kronrod_rule(&self.partition)
    }
}

/// Composite 15-point Kronrod nodes and weights on the given partition.
pub fn kronrod_rule(partition: &[(f64, f64)]) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(partition.len() * 15);
    let mut weights = Vec::with_capacity(partition.len() * 15);
    for &(a, b) in partition {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        for j in 0..7 {
            nodes.push(c - h * XGK[j]);
            weights.push(h * WGK[j]);
        }
        nodes.push(c);
        weights.push(h * WGK[7]);
        for j in (0..7).rev() {
            nodes.push(c + h * XGK[j]);
            weights.push(h * WGK[j]);
        }
    }
    (nodes, weights)
}

fn apply_segment<F>(f: &mut F, a: f64, b: f64, dim: usize, buf: &mut [f64]) -> Result<Segment, QuadError>
where
    F: FnMut(f64, &mut [f64]),
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = vec![0.0; dim];
    let mut gauss = vec![0.0; dim];
    let mut eval = |x: f64, wk: f64, wg: f64, buf: &mut [f64]| -> Result<(), QuadError> {
        buf.iter_mut().for_each(|v| *v = 0.0);
        f(x, buf);
        for i in 0..dim {
            if !buf[i].is_finite() {
                return Err(QuadError::NonFinite { x });
            }
            kron[i] += wk * buf[i];
            gauss[i] += wg * buf[i];
        }
        Ok(())
    };
    eval(c, WGK[7], WG[3], buf)?;
    for j in 0..7 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        eval(c - h * XGK[j], WGK[j], wg, buf)?;
        eval(c + h * XGK[j], WGK[j], wg, buf)?;
    }
    let values: Vec<f64> = kron.iter().map(|v| v * h).collect();
    let errors: Vec<f64> = kron
        .iter()
        .zip(&gauss)
        .map(|(k, g)| {
            let e = ((k - g) * h).abs();
            // QUADPACK-style sharpening of the raw difference
            (200.0 * e).powf(1.5).min(e)
        })
        .collect();
    Ok(Segment { a, b, values, errors })
}

/// Integrates a `dim`-component integrand over `[a, b]`.
///
/// The callback receives the abscissa and a zeroed output slice of length
/// `dim`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, dim: usize, opts: QuadOptions) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64, &mut [f64]),
{
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(QuadError::BadInterval { a, b });
    }
    let mut buf = vec![0.0; dim];
    let mut segments = vec![apply_segment(&mut f, a, b, dim, &mut buf)?];
    loop {
        let mut totals = vec![0.0; dim];
        let mut errs = vec![0.0; dim];
        for s in &segments {
            for i in 0..dim {
                totals[i] += s.values[i];
                errs[i] += s.errors[i];
            }
        }
        let tol: Vec<f64> = totals
            .iter()
            .map(|t| (opts.rel_tol * t.abs()).max(opts.abs_tol).max(f64::MIN_POSITIVE))
            .collect();
        let done = (0..dim).all(|i| errs[i] <= tol[i]);
        if done {
            segments.sort_by(|x, y| x.a.total_cmp(&y.a));
            return Ok(QuadResult {
                values: totals,
                errors: errs,
                partition: segments.iter().map(|s| (s.a, s.b)).collect(),
            });
        }
        if segments.len() >= opts.max_intervals {
            let worst = (0..dim).map(|i| errs[i] / tol[i]).fold(0.0, f64::max);
            return Err(QuadError::NoConvergence {
                intervals: segments.len(),
                error: worst,
            });
        }
        // bisect the segment contributing most to the worst-normalized error
        let score = |s: &Segment| (0..dim).map(|i| s.errors[i] / tol[i]).fold(0.0, f64::max);
        let (idx, _) = segments
            .iter()
            .enumerate()
            .map(|(i, s)| (i, score(s)))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let seg = segments.swap_remove(idx);
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            return Err(QuadError::NoConvergence {
                intervals: segments.len() + 1,
                error: score(&seg),
            });
        }
        segments.push(apply_segment(&mut f, seg.a, mid, dim, &mut buf)?);
        segments.push(apply_segment(&mut f, mid, seg.b, dim, &mut buf)?);
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<(f64, f64), QuadError>
where
    F: FnMut(f64) -> f64,
{
    let r = integrate(|x, out| out[0] = f(x), a, b, 1, opts)?;
    Ok((r.values[0], r.errors[0]))
}
