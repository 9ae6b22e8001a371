use kcs::codec::{parse_complex, Cell, Table};
use kcs::fock::{FockVector, C64};
use kcs::observables::{overlap, photon_distribution, quadrature_variances, wigner};
use kcs::states::{Family, StateLabel};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Algebraic),
        Just(Family::Perelomov),
        Just(Family::BMinus),
        Just(Family::Coherent),
    ]
}

/// Labels whose tail beyond `DIM` levels is negligible for every family.
fn label() -> impl Strategy<Value = StateLabel> {
    (family(), 0.0..2.0_f64, 0.0..std::f64::consts::TAU, 0.0..=1.0_f64).prop_map(|(f, r, phi, k)| {
        let r = match f {
            Family::BMinus => r.min(0.9),
            Family::Perelomov => r.min(1.5),
            _ => r,
        };
        StateLabel::new(f, C64::from_polar(r, phi), k).unwrap()
    })
}

const DIM: usize = 160;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn states_are_normalized(l in label()) {
        let s = l.build(DIM).unwrap();
        let total: f64 = photon_distribution(&s).iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-11);
    }

    #[test]
    fn heisenberg_bound(l in label()) {
        let v = quadrature_variances(&l.build(DIM).unwrap()).unwrap();
        prop_assert!(v.satisfies_uncertainty(1e-10), "{v:?}");
    }

    #[test]
    fn reflection_and_rotation(l in label()) {
        let s = l.build(DIM).unwrap();
        let minus = StateLabel::new(l.family, -l.alpha, l.k).unwrap().build(DIM).unwrap();
        let rot = StateLabel::new(l.family, l.alpha * C64::i(), l.k).unwrap().build(DIM).unwrap();
        let (v, vm, vr) = (
            quadrature_variances(&s).unwrap(),
            quadrature_variances(&minus).unwrap(),
            quadrature_variances(&rot).unwrap(),
        );
        prop_assert!((v.var_x - vm.var_x).abs() < 1e-12 && (v.var_p - vm.var_p).abs() < 1e-12);
        prop_assert!((vr.var_x - v.var_p).abs() < 1e-12 && (vr.var_p - v.var_x).abs() < 1e-12);
    }

    #[test]
    fn symmetry_for_any_real_profile(
        weights in proptest::collection::vec(0.01..1.0_f64, 12),
        r in 0.1..1.2_f64,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        // c_n = α^n S_n with arbitrary real S_n
        let build = |alpha: C64| {
            FockVector::new(
                weights.iter().enumerate().map(|(n, s)| alpha.powu(n as u32) * *s).collect(),
            )
            .unwrap()
            .normalized()
            .unwrap()
        };
        let alpha = C64::from_polar(r, phi);
        let v = quadrature_variances(&build(alpha)).unwrap();
        let vm = quadrature_variances(&build(-alpha)).unwrap();
        let vr = quadrature_variances(&build(alpha * C64::i())).unwrap();
        prop_assert!((v.var_x - vm.var_x).abs() < 1e-12 && (v.var_p - vm.var_p).abs() < 1e-12);
        prop_assert!((vr.var_x - v.var_p).abs() < 1e-12);
    }

    #[test]
    fn overlaps_are_bounded(a in label(), b in label()) {
        let o = overlap(&a.build(DIM).unwrap(), &b.build(DIM).unwrap()).unwrap();
        prop_assert!(o.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn wigner_is_bounded(l in label(), re in -4.0..4.0_f64, im in -4.0..4.0_f64) {
        let w = wigner(&l.build(DIM).unwrap(), C64::new(re, im));
        prop_assert!(w.abs() <= 2.0 / std::f64::consts::PI + 1e-12);
    }

    #[test]
    fn complex_text_round_trip(re in -1e6..1e6_f64, im in -1e6..1e6_f64) {
        let text = format!("{re:.16e}{im:+.16e}i");
        prop_assert_eq!(parse_complex(&text).unwrap(), C64::new(re, im));
    }

    #[test]
    fn table_codecs_agree(
        rows in proptest::collection::vec((any::<i32>(), -1e300..1e300_f64, "[a-z ,\"]{0,8}"), 0..6),
        meta in -1e10..1e10_f64,
    ) {
        let mut t = Table::new("prop", &["i", "x", "s"]).with_meta("m", meta);
        for (i, x, s) in rows {
            // purely numeric text would decode as a number
            let s = format!("t{s}");
            t.push(vec![Cell::Int(i as i64), Cell::Num(x), Cell::Text(s)]);
        }
        let from_csv = Table::from_csv(&t.to_csv().unwrap()).unwrap();
        let from_json = Table::from_json(&t.to_json().unwrap()).unwrap();
        prop_assert_eq!(&from_csv, &t);
        prop_assert_eq!(&from_json, &t);
    }
}
