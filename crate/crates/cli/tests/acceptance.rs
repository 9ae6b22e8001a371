//! Acceptance battery. Prints one line per criterion and exits nonzero if
//! any of them fails.

use std::f64::consts::{FRAC_PI_3, PI};
use std::process::Command;
use std::time::Instant;

use kcs::algebra;
use kcs::codec::Table;
use kcs::fock::{make_context, FockVector, C64};
use kcs::measure::{self, DiskExponent, MeasureOptions, RadialMeasure, WeightForm};
use kcs::observables::{q_parameter, wigner, GridSpec, Quadratures, WignerGrid};
use kcs::quad::{integrate_scalar, QuadOptions};
use kcs::specfun::bessel_k;
use kcs::states::{self, Family, StateLabel};

type Check = Result<(bool, String), Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Check);

const K_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Smallest multiple of 8 whose dropped tail is at most `tol`, without the
/// automatic-dimension cap.
fn dim_for(label: &StateLabel, tol: f64) -> usize {
    let mut d = 8;
    while label.tail_probability(d).unwrap() > tol {
        d += 8;
    }
    d
}

fn label(family: Family, alpha: C64, k: f64) -> StateLabel {
    StateLabel::new(family, alpha, k).unwrap()
}

fn closure() -> Check {
    let mut worst: f64 = 0.0;
    for k in K_GRID {
        worst = worst.max(algebra::verify_commutators(k, 60)?.residual);
    }
    Ok((worst <= 1e-10, format!("max commutator residual {worst:.3e} (tol 1e-10)")))
}

fn casimir() -> Check {
    let mut worst: f64 = 0.0;
    for k in K_GRID {
        worst = worst.max(algebra::casimir_check(k, 60)?.residual);
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.3e} (tol 1e-12)")))
}

fn eigenstates() -> Check {
    let (mut worst_a, mut worst_b, mut n_b): (f64, f64, usize) = (0.0, 0.0, 0);
    for (i, r) in [0.5, 1.0, 1.5, 2.0, 2.5].into_iter().enumerate() {
        let alpha = C64::from_polar(r, 0.3 + 0.9 * i as f64);
        for k in K_GRID {
            let l = label(Family::Algebraic, alpha, k);
            let d = dim_for(&l, 1e-24);
            let ctx = make_context(k, d)?;
            worst_a = worst_a.max(states::eigen_residual(&ctx.a_minus, &l.build(d)?, alpha)?);
            if k * r * r <= 0.9 {
                let l = label(Family::BMinus, alpha, k);
                let d = dim_for(&l, 1e-24);
                let ctx = make_context(k, d)?;
                worst_b = worst_b.max(states::eigen_residual(&ctx.b_minus, &l.build(d)?, alpha)?);
                n_b += 1;
            }
        }
    }
    Ok((
        worst_a <= 1e-10 && worst_b <= 1e-10,
        format!("A- max {worst_a:.3e} over 25 points, B- max {worst_b:.3e} over {n_b} points (tol 1e-10)"),
    ))
}

fn bessel_i0_series(x: f64) -> f64 {
    let q = x * x / 4.0;
    let (mut term, mut sum, mut m) = (1.0, 1.0, 0.0);
    while term > 1e-18 * sum {
        m += 1.0;
        term *= q / (m * m);
        sum += term;
    }
    sum
}

fn limits() -> Check {
    // Glauber amplitudes by recursion
    let mut glauber: f64 = 0.0;
    for alpha in [C64::new(0.5, 0.0), C64::from_polar(1.7, -2.0), C64::new(2.5, 1.0)] {
        let s = states::algebraic_cs(alpha, 0.0, 80)?;
        let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        for (n, got) in s.amplitudes().iter().enumerate() {
            glauber = glauber.max((got - c).norm());
            c *= alpha / ((n + 1) as f64).sqrt();
        }
    }
    let mut norm: f64 = 0.0;
    for r in [0.5, 1.0, 2.0] {
        let s = states::algebraic_cs(C64::from_polar(r, 0.4), 1.0, 80)?;
        let want = 1.0 / bessel_i0_series(2.0 * r).sqrt();
        norm = norm.max((s.amplitudes()[0].re - want).abs());
    }
    let mut ratio: f64 = 0.0;
    for alpha in [C64::new(0.5, 0.0), C64::from_polar(1.0, 2.2), C64::from_polar(2.0, -0.6)] {
        let beta = alpha / alpha.norm() * alpha.norm().tanh();
        let s = states::perelomov_cs(alpha, 1.0, 600)?;
        let c = s.amplitudes();
        for n in 0..40 {
            ratio = ratio.max((c[n + 1] / c[n] - beta).norm());
        }
    }
    Ok((
        glauber <= 1e-12 && norm <= 1e-10 && ratio <= 1e-10,
        format!("k=0 amplitudes {glauber:.3e}, k=1 norm {norm:.3e}, Perelomov ratio {ratio:.3e}"),
    ))
}

fn disentanglement() -> Check {
    let mut worst: f64 = 0.0;
    for alpha in [C64::new(0.5, 0.0), C64::from_polar(1.2, FRAC_PI_3)] {
        for k in [0.25, 0.5, 1.0] {
            worst = worst.max(algebra::verify_disentanglement(alpha, k, 120, 20)?.residual);
        }
    }
    Ok((worst <= 1e-8, format!("max block residual {worst:.3e} (tol 1e-8)")))
}

fn quad() -> QuadOptions {
    QuadOptions {
        rel_tol: 1e-12,
        abs_tol: 0.0,
        max_intervals: 4000,
    }
}

fn moments() -> Check {
    let mut worst: f64 = 0.0;
    for k in [0.25, 0.5, 0.75, 1.0] {
        for n in 0..=10 {
            worst = worst.max(measure::moment_check(k, n, WeightForm::Corrected, quad())?.relative_error);
        }
    }
    // k=1 against 2K₀(2r) and (n!)²/2 directly
    let mut k1: f64 = 0.0;
    for n in 0..=10_i32 {
        let f = |r: f64| 2.0 * bessel_k(0.0, 2.0 * r).unwrap() * r.powi(2 * n + 1);
        let (got, _) = integrate_scalar(f, 0.0, 80.0, quad())?;
        let fact: f64 = (1..=n).map(|j| j as f64).product();
        k1 = k1.max((got / (fact * fact / 2.0) - 1.0).abs());
    }
    Ok((
        worst <= 1e-8 && k1 <= 1e-8,
        format!("corrected weight max rel {worst:.3e}, k=1 2K0(2r) max rel {k1:.3e} (tol 1e-8)"),
    ))
}

fn diag_off(id: &kcs::fock::OperatorMatrix, levels: usize) -> (f64, f64) {
    let (mut diag, mut off): (f64, f64) = (0.0, 0.0);
    for n in 0..levels {
        diag = diag.max((id.entry(n, n) - 1.0).norm());
        for m in (0..levels).filter(|&m| m != n) {
            off = off.max(id.entry(n, m).norm());
        }
    }
    (diag, off)
}

fn identity_algebraic() -> Check {
    let (mut diag, mut off): (f64, f64) = (0.0, 0.0);
    for k in [0.5, 1.0] {
        let id = measure::identity_resolution_algebraic(k, 44, MeasureOptions::default())?;
        let (d, o) = diag_off(&id, 11);
        diag = diag.max(d);
        off = off.max(o);
    }
    Ok((
        diag <= 1e-6 && off <= 1e-8,
        format!("diagonal dev {diag:.3e} (tol 1e-6), off-diagonal {off:.3e} (tol 1e-8)"),
    ))
}

fn identity_perelomov() -> Check {
    let (mut diag, mut profile): (f64, f64) = (0.0, 0.0);
    for k in [0.25, 0.5, 0.75] {
        let id = measure::identity_resolution_perelomov(k, 44, DiskExponent::Two, MeasureOptions::default())?;
        diag = diag.max(diag_off(&id, 11).0);
        let one = measure::identity_resolution_perelomov(k, 44, DiskExponent::One, MeasureOptions::default())?;
        let d0 = one.entry(0, 0).re;
        for n in 0..=10 {
            let shape = one.entry(n, n).re / d0;
            profile = profile.max((shape * (k * n as f64 + 1.0) - 1.0).abs());
        }
    }
    Ok((
        diag <= 1e-6 && profile <= 1e-6,
        format!("exponent-2 diagonal dev {diag:.3e}, exponent-1 1/(kn+1) profile rel {profile:.3e} (tol 1e-6)"),
    ))
}

fn statistics() -> Check {
    let radii: Vec<f64> = (1..=25).map(|i| i as f64 * 0.1).collect();
    let mut algebraic_max = f64::NEG_INFINITY;
    let mut poisson: f64 = 0.0;
    let mut perelomov_min = f64::INFINITY;
    let mut oracle: f64 = 0.0;
    for &r in &radii {
        let alpha = C64::from_polar(r, 0.9);
        for k in K_GRID {
            let l = label(Family::Algebraic, alpha, k);
            let q = q_parameter(&l.build(dim_for(&l, 1e-16))?).unwrap();
            if k == 0.0 {
                poisson = poisson.max((q - 1.0).abs());
            } else {
                algebraic_max = algebraic_max.max(q);
            }
        }
        for k in [0.1, 0.25, 0.5, 0.75, 1.0] {
            let l = label(Family::Perelomov, alpha, k);
            let q = q_parameter(&l.build(dim_for(&l, 1e-16))?).unwrap();
            perelomov_min = perelomov_min.min(q);
            let want = (k.sqrt() * r).cosh().powi(2);
            oracle = oracle.max((q / want - 1.0).abs());
        }
    }
    Ok((
        algebraic_max < 1.0 && poisson <= 1e-10 && perelomov_min > 1.0 && oracle <= 1e-8,
        format!(
            "algebraic k>0 max Q {algebraic_max:.6}, k=0 |Q-1| {poisson:.3e}, \
             Perelomov min Q {perelomov_min:.6} (cosh^2 oracle rel {oracle:.3e}), |alpha| 0.1..=2.5"
        ),
    ))
}

/// Integer grid points `(i, j)` with `|0.1 (i + i j)| ≤ radius`.
fn lattice(radius: f64) -> Vec<(i32, i32)> {
    let m = (radius * 10.0).round() as i32;
    let mut out = Vec::new();
    for i in -m..=m {
        for j in -m..=m {
            if i * i + j * j <= m * m {
                out.push((i, j));
            }
        }
    }
    out
}

fn squeezing() -> Check {
    let mut missing = Vec::new();
    let mut min_var: Vec<String> = Vec::new();
    let (mut sym, mut product) = (0.0_f64, f64::INFINITY);
    for (family, radius, ks) in [
        (Family::Algebraic, 2.5, &K_GRID[..]),
        (Family::Perelomov, 2.0, &K_GRID[1..]),
    ] {
        let points = lattice(radius);
        for &k in ks {
            let edge = label(family, C64::new(radius, 0.0), k);
            let dim = dim_for(&edge, 1e-16);
            let quad = Quadratures::new(dim)?;
            let at = |i: i32, j: i32| -> Result<_, Box<dyn std::error::Error>> {
                let alpha = C64::new(0.1 * i as f64, 0.1 * j as f64);
                Ok(quad.variances(&label(family, alpha, k).build(dim)?)?)
            };
            let mut lowest = f64::INFINITY;
            for &(i, j) in &points {
                let v = at(i, j)?;
                let minus = at(-i, -j)?;
                let rot = at(-j, i)?;
                sym = sym
                    .max((v.var_x - minus.var_x).abs())
                    .max((v.var_p - minus.var_p).abs())
                    .max((rot.var_x - v.var_p).abs())
                    .max((rot.var_p - v.var_x).abs());
                product = product.min(v.product);
                lowest = lowest.min(v.var_x);
            }
            if family == Family::Algebraic && k > 0.0 {
                min_var.push(format!("{k}:{lowest:.4}"));
                if lowest >= 0.5 {
                    missing.push(k);
                }
            }
        }
    }
    Ok((
        missing.is_empty() && sym <= 1e-12 && product >= 0.25 - 1e-10,
        format!(
            "min Var x per k [{}], symmetry {sym:.3e}, min product {product:.12}",
            min_var.join(" ")
        ),
    ))
}

fn wigner_checks() -> Check {
    let vacuum = FockVector::vacuum(8)?;
    let one = FockVector::number(1, 8)?;
    let w0 = (wigner(&vacuum, C64::new(0.0, 0.0)) - 2.0 / PI).abs();
    let w1 = (wigner(&one, C64::new(0.0, 0.0)) + 2.0 / PI).abs();
    let spec = GridSpec::square(7.0, 0.1);
    let l = label(Family::Algebraic, C64::new(2.5, 0.0), 0.5);
    let cat = l.build(dim_for(&l, 1e-16))?;
    let mut integral: f64 = 0.0;
    let mut min_w = 0.0;
    for (i, s) in [&vacuum, &one, &cat].into_iter().enumerate() {
        let g = WignerGrid::compute(s, spec)?;
        integral = integral.max((g.integral() - 1.0).abs());
        if i == 2 {
            min_w = g.min();
        }
    }
    Ok((
        w0 <= 1e-10 && w1 <= 1e-10 && min_w < 0.0 && integral <= 1e-6,
        format!("W_vac(0) dev {w0:.3e}, W_1(0) dev {w1:.3e}, min W(2.5,0.5) {min_w:.5}, integral dev {integral:.3e}"),
    ))
}

fn expansion() -> Check {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let targets = [
        FockVector::number(0, 16)?,
        FockVector::number(2, 16)?,
        FockVector::new(
            (0..16)
                .map(|n| C64::new(if n == 1 || n == 3 { inv } else { 0.0 }, 0.0))
                .collect(),
        )?,
    ];
    let mut worst: f64 = 0.0;
    for k in [0.5, 0.75] {
        let measures = [
            RadialMeasure::algebraic(k, 16, WeightForm::Corrected, MeasureOptions::default())?,
            RadialMeasure::perelomov(k, 16, DiskExponent::Two, MeasureOptions::default())?,
        ];
        for m in &measures {
            for psi in &targets {
                worst = worst.max(measure::expand_state(psi, m)?.distance(psi)?);
            }
        }
    }
    Ok((worst <= 1e-5, format!("max reconstruction error {worst:.3e} (tol 1e-5)")))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_kcs")).args(args).output().expect("spawn kcs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism() -> Check {
    let commands: [&[&str]; 6] = [
        &["state"],
        &["qsurface"],
        &["qsurface", "--family", "perelomov"],
        &["squeeze"],
        &["wigner"],
        &["verify"],
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for args in commands {
        let (code, first) = run_cli(args);
        let (_, second) = run_cli(args);
        let mut json_args = args.to_vec();
        json_args.extend(["--format", "json"]);
        let (json_code, json) = run_cli(&json_args);
        let csv_table = Table::from_csv(std::str::from_utf8(&first)?)?;
        let json_table = Table::from_json(std::str::from_utf8(&json)?)?;
        let same = first == second && !first.is_empty();
        let agree = csv_table == json_table;
        let exit_ok = code == 0 && json_code == 0;
        ok &= same && agree && exit_ok;
        if !(same && agree && exit_ok) {
            notes.push(format!("{}: identical={same} csv/json={agree} exit={code}", args.join(" ")));
        }
    }
    let detail = if notes.is_empty() {
        "6 invocations repeated byte-identical, CSV and JSON agree, verify exits 0".to_string()
    } else {
        notes.join("; ")
    };
    Ok((ok, detail))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("algebra closure", closure),
        ("casimir", casimir),
        ("eigenstate property", eigenstates),
        ("limits", limits),
        ("disentanglement", disentanglement),
        ("moment problem", moments),
        ("identity resolution (algebraic)", identity_algebraic),
        ("identity resolution (perelomov)", identity_perelomov),
        ("photon statistics", statistics),
        ("squeezing", squeezing),
        ("wigner", wigner_checks),
        ("round-trip expansion", expansion),
        ("cli determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failures += 1;
        }
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2} {name}: {detail} ({:.1}s)", i + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
