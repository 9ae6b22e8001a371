//! Real special-function kernels: log-gamma, modified Bessel functions of
//! both kinds with real order, and the interpolating rising product
//! `Π_{j<n} (1 + j·k)`.
//!
//! Supported ranges are bounded. `bessel_i` is an ascending series and is
//! accurate for `x ≤ 50, |ν| ≤ 20`; `bessel_k` uses Temme's series below
//! `x = 2` and Steed's continued fraction above, followed by forward
//! recurrence in the order, and is accurate for `x ∈ (0, 50], |ν| ≤ 20`.
//! Larger arguments are evaluated but carry no accuracy contract.
//!
//! The conventional name of `I_ν` is the modified Bessel function of the
//! *first* kind.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{function}: argument {value} outside the domain ({requirement})")]
    Domain {
        function: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("{function}: result overflows f64 at order {order}, argument {x}")]
    Overflow {
        function: &'static str,
        order: f64,
        x: f64,
    },
    #[error("{function}: series did not converge at order {order}, argument {x}")]
    NoConvergence {
        function: &'static str,
        order: f64,
        x: f64,
    },
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// ζ(2) .. ζ(31)
#[allow(clippy::excessive_precision)]
const ZETA: [f64; 30] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_370_0,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308_0,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307_0,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265_0,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926_0,
    1.000_000_059_608_189_1,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334_0,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
    1.000_000_000_465_662_9,
];

// Taylor coefficients of 1/Γ(z) about z = 0: 1/Γ(z) = Σ_{j≥1} RGAMMA[j] z^j.
#[allow(clippy::excessive_precision)]
const RGAMMA: [f64; 29] = [
    0.0,
    1.0,
    0.577_215_664_901_532_86,
    -0.655_878_071_520_253_88,
    -0.042_002_635_034_095_236,
    0.166_538_611_382_291_49,
    -0.042_197_734_555_544_337,
    -0.009_621_971_527_876_973_6,
    0.007_218_943_246_663_099_5,
    -0.001_165_167_591_859_065_1,
    -0.000_215_241_674_114_950_97,
    0.000_128_050_282_388_116_19,
    -0.000_020_134_854_780_788_239,
    -1.250_493_482_142_670_7e-6,
    1.133_027_231_981_695_9e-6,
    -2.056_338_416_977_607_1e-7,
    6.116_095_104_481_415_8e-9,
    5.002_007_644_469_222_9e-9,
    -1.181_274_570_487_020_1e-9,
    1.043_426_711_691_100_5e-10,
    7.782_263_439_905_071_3e-12,
    -3.696_805_618_642_205_7e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_506_8e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_260_8e-15,
    -1.181_259_301_697_458_8e-16,
    1.186_692_254_751_600_3e-18,
    1.412_380_655_318_031_8e-18,
];

// B_{2j} / (2j (2j-1)) for the Stirling tail.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Γ(1 + z)` for `|z| ≤ 1/4` from the zeta series.
fn ln_gamma_1p_small(z: f64) -> f64 {
    // ln Γ(1+z) = −γz + Σ_{j≥2} ζ(j) (−z)^j / j
    let t = -z;
    let mut tj = t;
    let mut acc = 0.0;
    for (i, zeta) in ZETA.iter().enumerate() {
        tj *= t;
        acc += zeta * tj / (i + 2) as f64;
    }
    -EULER_GAMMA * z + acc
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut tail = 0.0;
    let mut p = inv;
    for c in STIRLING {
        tail += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + tail
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(SpecFunError::Domain {
            function: "log_gamma",
            value: x,
            requirement: "x > 0 and finite",
        });
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if (x - 1.0).abs() <= 0.25 {
        return ln_gamma_1p_small(x - 1.0);
    }
    if (x - 2.0).abs() <= 0.25 {
        let z = x - 2.0;
        return z.ln_1p() + ln_gamma_1p_small(z);
    }
    if x >= 12.0 {
        return ln_gamma_stirling(x);
    }
    // shift into the Stirling range
    let mut prod = 1.0;
    let mut y = x;
    while y < 12.0 {
        prod *= y;
        y += 1.0;
    }
    ln_gamma_stirling(y) - prod.ln()
}

/// `1/Γ(x)` for any real `x`; zero at the poles `x = 0, -1, -2, …`.
pub fn recip_gamma(x: f64) -> f64 {
    if x > 0.0 {
        if x > 171.0 {
            return 0.0;
        }
        return (-ln_gamma_pos(x)).exp();
    }
    if x == x.floor() {
        return 0.0;
    }
    // Γ(x) Γ(1−x) = π / sin(πx)
    let s = (PI * x).sin();
    s * gamma_pos(1.0 - x) / PI
}

fn gamma_pos(x: f64) -> f64 {
    ln_gamma_pos(x).exp()
}

/// `Π_{j=0}^{n−1} (1 + j·k)`; equals `k^n (1/k)_n` for `k > 0`.
pub fn rising_product(k: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (1.0 + j as f64 * k))
}

/// Natural log of [`rising_product`], summed term by term so it never
/// overflows.
pub fn ln_rising_product(k: f64, n: usize) -> f64 {
    (1..n).map(|j| (j as f64 * k).ln_1p()).sum()
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma_pos(n as f64 + 1.0)
    }
}

/// Modified Bessel function of the first kind `I_ν(x)` by its ascending
/// series.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(SpecFunError::Domain {
            function: "bessel_i",
            value: x,
            requirement: "x >= 0 and finite",
        });
    }
    // integer negative order: I_{-n} = I_n
    let nu = if nu < 0.0 && nu == nu.floor() { -nu } else { nu };
    if x == 0.0 {
        return Ok(if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            // (x/2)^ν with ν < 0 non-integer diverges at the origin
            return Err(SpecFunError::Overflow {
                function: "bessel_i",
                order: nu,
                x,
            });
        });
    }
    let half = 0.5 * x;
    let q = half * half;
    // leading term (x/2)^ν / Γ(ν+1), in log space where Γ(ν+1) > 0
    let mut term = if nu + 1.0 > 0.0 {
        (nu * half.ln() - ln_gamma_pos(nu + 1.0)).exp()
    } else {
        half.powf(nu) * recip_gamma(nu + 1.0)
    };
    let mut sum = term;
    let mut m = 0.0_f64;
    loop {
        m += 1.0;
        term *= q / (m * (m + nu));
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() && m > half {
            break;
        }
        if m > 10_000.0 {
            return Err(SpecFunError::NoConvergence {
                function: "bessel_i",
                order: nu,
                x,
            });
        }
    }
    if !sum.is_finite() {
        return Err(SpecFunError::Overflow {
            function: "bessel_i",
            order: nu,
            x,
        });
    }
    Ok(sum)
}

/// Modified Bessel function of the second kind `K_ν(x)`, even in `ν`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let (scaled, _) = bessel_k_pair_scaled(nu, x)?;
    let v = scaled * (-x).exp();
    if !v.is_finite() {
        return Err(SpecFunError::Overflow {
            function: "bessel_k",
            order: nu,
            x,
        });
    }
    Ok(v)
}

/// `e^x K_ν(x)`; the exponential scaling keeps large arguments
/// representable.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    bessel_k_pair_scaled(nu, x).map(|(k, _)| k)
}

/// `ln K_ν(x)` for use where `K_ν` itself underflows.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled(nu, x)?.ln() - x)
}

/// Returns `(e^x K_ν(x), e^x K_{ν+1}(x))` for `ν ≥ 0` after folding the
/// sign of the order.
fn bessel_k_pair_scaled(nu: f64, x: f64) -> Result<(f64, f64)> {
    if !(x.is_finite() && x > 0.0) {
        return Err(SpecFunError::Domain {
            function: "bessel_k",
            value: x,
            requirement: "x > 0 and finite",
        });
    }
    if !nu.is_finite() {
        return Err(SpecFunError::Domain {
            function: "bessel_k",
            value: nu,
            requirement: "finite order",
        });
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut k_mu, mut k_mu1) = if x < 2.0 {
        let (a, b) = temme_k(mu, x)?;
        let ex = x.exp();
        (a * ex, b * ex)
    } else {
        steed_k_scaled(mu, x)?
    };
    let two_over_x = 2.0 / x;
    let steps = nl as usize;
    for i in 1..=steps {
        let next = (mu + i as f64) * two_over_x * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    if !k_mu.is_finite() || !k_mu1.is_finite() {
        return Err(SpecFunError::Overflow {
            function: "bessel_k",
            order: nu,
            x,
        });
    }
    Ok((k_mu, k_mu1))
}

/// `(1/Γ(1+μ), 1/Γ(1−μ), Γ₁(μ), Γ₂(μ))` for `|μ| ≤ 1/2`, where
/// `Γ₁ = (1/Γ(1−μ) − 1/Γ(1+μ)) / 2μ` and `Γ₂ = (1/Γ(1−μ) + 1/Γ(1+μ)) / 2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mut even = 0.0; // Σ_{j even} c_j μ^{j-2}
    let mut odd = 0.0; // Σ_{j odd} c_j μ^{j-1}
    // Horner over μ²
    let mu2 = mu * mu;
    for j in (1..RGAMMA.len()).rev() {
        if j % 2 == 0 {
            even = even * mu2 + RGAMMA[j];
        } else {
            odd = odd * mu2 + RGAMMA[j];
        }
    }
    // even = Σ c_{2i} μ^{2i-2}, odd = Σ c_{2i+1} μ^{2i}
    let gam1 = -even;
    let gam2 = odd;
    let plus = gam2 - mu * gam1; // 1/Γ(1+μ)
    let minus = gam2 + mu * gam1; // 1/Γ(1−μ)
    (plus, minus, gam1, gam2)
}

fn temme_k(mu: f64, x: f64) -> Result<(f64, f64)> {
    let eps = f64::EPSILON;
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < eps { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < eps { 1.0 } else { e.sinh() / e };
    let (gampl, gammi, gam1, gam2) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mu2 = mu * mu;
    let mut i = 1.0;
    loop {
        ff = (i * ff + p + q) / (i * i - mu2);
        c *= dd / i;
        p /= i - mu;
        q /= i + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - i * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * eps {
            break;
        }
        i += 1.0;
        if i > 500.0 {
            return Err(SpecFunError::NoConvergence {
                function: "bessel_k",
                order: mu,
                x,
            });
        }
    }
    Ok((sum, sum1 * 2.0 / x))
}

fn steed_k_scaled(mu: f64, x: f64) -> Result<(f64, f64)> {
    let eps = f64::EPSILON;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut i = 2.0;
    loop {
        a -= 2.0 * (i - 1.0);
        c = -a * c / i;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < eps {
            break;
        }
        i += 1.0;
        if i > 100_000.0 {
            return Err(SpecFunError::NoConvergence {
                function: "bessel_k",
                order: mu,
                x,
            });
        }
    }
    let h = a1 * h;
    let k_mu = (PI / (2.0 * x)).sqrt() / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    Ok((k_mu, k_mu1))
}
