use frey::ellcurve::{self, rational_conductor};
use frey::freycurves::{build_frey, conductor_profile, trace_table, ConductorProfile, FreyError, FreyKind};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

/// Small enough that every prime of a^13 + b^13 fits in 64 bits.
fn coprime() -> impl Strategy<Value = (i64, i64)> {
    (-25i64..=25, -25i64..=25).prop_filter("coprime, nonzero sum", |&(a, b)| a.gcd(&b) == 1 && a + b != 0)
}

/// Pairs with a + b ≡ 0 mod m (or ≢ 0 when divisible is false).
fn pair_with(m: i64, divisible: bool) -> impl Strategy<Value = (i64, i64)> {
    coprime().prop_filter("residue of a+b", move |&(a, b)| ((a + b) % m == 0) == divisible)
}

/// Pairs with v2(a + b) = v, or ≥ v when at_least is set; v ≥ 1.
fn pair_v2(v: u32, at_least: bool) -> impl Strategy<Value = (i64, i64)> {
    (-12i64..=12, -3i64..=3)
        .prop_map(move |(a, k)| {
            let a = 2 * a + 1;
            let m = if at_least { k } else { 2 * k + 1 };
            (a, (1i64 << v) * m - a)
        })
        .prop_filter("coprime, nonzero sum", |&(a, b)| a.gcd(&b) == 1 && a + b != 0)
}

/// F13 profile, or None when a^13 + b^13 has a prime factor past 64 bits.
fn f13_profile(a: i64, b: i64) -> Option<ConductorProfile> {
    match conductor_profile(FreyKind::F13, a, b, 1) {
        Ok(p) => Some(p),
        Err(FreyError::HypothesisViolated(m)) if m.contains("64 bits") => None,
        Err(e) => panic!("F13({a},{b}): {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn descent_succeeds((a, b) in coprime()) {
        for kind in [FreyKind::E13, FreyKind::F13] {
            prop_assert!(build_frey(kind, a, b).is_ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn e5_f5_tables_cross_check((a, b) in pair_with(5, false)) {
        conductor_profile(FreyKind::E5, a, b, 1).unwrap();
        conductor_profile(FreyKind::F5, a, b, 1).unwrap();
    }

    #[test]
    fn e5_f5_tables_cross_check_five_divides((a, b) in pair_with(5, true)) {
        let e = conductor_profile(FreyKind::E5, a, b, 1).unwrap();
        let f = conductor_profile(FreyKind::F5, a, b, 1).unwrap();
        prop_assert_eq!(e.exponent_at(5, 0), Some(2));
        prop_assert_eq!(f.exponent_at(5, 0), Some(0));
    }

    #[test]
    fn e13_tables_cross_check((a, b) in coprime()) {
        let p = conductor_profile(FreyKind::E13, a, b, 1).unwrap();
        prop_assert_eq!(p.exponent_at(13, 0), Some(2));
    }

    #[test]
    fn f13_thirteen_divides((a, b) in pair_with(13, true)) {
        let prof = f13_profile(a, b);
        prop_assume!(prof.is_some());
        prop_assert_eq!(prof.unwrap().exponent_at(13, 0), Some(1));
    }

    #[test]
    fn f13_thirteen_coprime((a, b) in pair_with(13, false)) {
        let prof = f13_profile(a, b);
        prop_assume!(prof.is_some());
        prop_assert_eq!(prof.unwrap().exponent_at(13, 0), Some(2));
    }

    #[test]
    fn f13_three_divides((a, b) in pair_with(3, true)) {
        let prof = f13_profile(a, b);
        prop_assume!(prof.is_some());
        prop_assert_eq!(prof.unwrap().exponent_at(3, 0), Some(1));
    }

    #[test]
    fn f13_two_adic_odd_sum((a, b) in pair_with(2, false)) {
        let want = if (a * b).rem_euclid(4) == 0 { 3 } else { 4 };
        let prof = f13_profile(a, b);
        prop_assume!(prof.is_some());
        prop_assert_eq!(prof.unwrap().exponent_at(2, 0), Some(want));
    }

    #[test]
    fn f13_two_adic_v1((a, b) in pair_v2(1, false)) {
        let prof = f13_profile(a, b);
        prop_assume!(prof.is_some());
        prop_assert_eq!(prof.unwrap().exponent_at(2, 0), Some(4));
    }

    #[test]
    fn f13_two_adic_v2((a, b) in pair_v2(2, false)) {
        let prof = f13_profile(a, b);
        prop_assume!(prof.is_some());
        prop_assert_eq!(prof.unwrap().exponent_at(2, 0), Some(0));
    }

    #[test]
    fn f13_two_adic_v3((a, b) in pair_v2(3, true)) {
        let prof = f13_profile(a, b);
        prop_assume!(prof.is_some());
        prop_assert_eq!(prof.unwrap().exponent_at(2, 0), Some(1));
    }

    #[test]
    fn traces_depend_only_on_residues(x in 0u64..7, y in 0u64..7, k in 1i64..6) {
        prop_assume!((x, y) != (0, 0));
        for kind in [FreyKind::E5, FreyKind::F5, FreyKind::E13, FreyKind::F13, FreyKind::W] {
            let t = trace_table(kind, 7).unwrap();
            let (a, b) = (x as i64 + 7 * k, y as i64);
            prop_assume!(a.gcd(&b) == 1 && a + b != 0);
            let c = t.get(x, y).unwrap();
            let m = build_frey(kind, a, b).unwrap();
            for (r, shape) in c.records.iter().zip(&c.shapes) {
                let (s, tr) = ellcurve::local_trace(&m.model, &r.slot).unwrap();
                prop_assert_eq!(s, *shape);
                prop_assert_eq!(tr, r.a);
            }
        }
    }
}

#[test]
fn w_table_agrees_with_tate_exhaustively() {
    let mut checked = 0;
    for a in -20i64..=20 {
        for b in -20i64..=20 {
            if a.gcd(&b) != 1 || a + b == 0 {
                continue;
            }
            let profile = conductor_profile(FreyKind::W, a, b, 1).unwrap();
            let m = build_frey(FreyKind::W, a, b).unwrap();
            let (n, _, _) = rational_conductor(&m.model.integral_ainvs_q().unwrap()).unwrap();
            assert_eq!(profile.norm(), Some(n.clone()), "W({a},{b})");
            checked += 1;
        }
    }
    assert!(checked > 900);
}

#[test]
fn w_zero_conductors() {
    let n = |a: [i64; 5]| rational_conductor(&a.map(BigInt::from)).unwrap().0;
    assert_eq!(n([0, 1, 0, 592, -16812]), BigInt::from(1200));
    assert_eq!(n([0, -1, 0, -333, -2088]), BigInt::from(1200));
}
