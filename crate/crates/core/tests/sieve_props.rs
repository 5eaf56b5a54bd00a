use frey::arith;
use frey::ellcurve::{local_trace, ReducedShape};
use frey::freycurves::{build_frey, is_admissible, trace_table, FreyKind};
use frey::localfield;
use frey::newformdb::{CoeffField, NewformRecord};
use frey::numfield::FieldId;
use frey::sieve::{bound, exponent_bound, exponent_bound_over, q_bound, refined_eliminate, SignMode, Survivors};
use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use std::collections::BTreeMap;

fn good_everywhere_above(model: &frey::ellcurve::WeierstrassModel, field: FieldId, q: u64) -> bool {
    localfield::prime_split(field, q)
        .unwrap()
        .iter()
        .all(|s| matches!(local_trace(model, s), Ok((ReducedShape::Nonsingular, _))))
}

fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
    (-25i64..25, -25i64..25).prop_filter("coprime", |&(a, b)| num_integer::gcd(a, b) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn self_match_gives_zero(kind in prop::sample::select(vec![FreyKind::W, FreyKind::E5, FreyKind::F5, FreyKind::E13]), (a, b) in coprime_pair()) {
        let Ok(e) = build_frey(kind, a, b) else { return Ok(()) };
        let form = NewformRecord::from_curve("self", e.model.clone(), Vec::new());
        for q in arith::primes_upto(61).into_iter().filter(|&q| is_admissible(kind, q)) {
            if good_everywhere_above(&e.model, kind.field(), q) {
                prop_assert!(exponent_bound(kind, &form, q).unwrap().is_zero(), "{kind} ({a},{b}) q={q}");
            }
        }
    }
}

fn synthetic(seed: u64, qs: &[u64]) -> NewformRecord {
    let k = CoeffField::rational();
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut ev = BTreeMap::new();
    for &q in qs {
        for s in localfield::prime_split(FieldId::Qsqrt5, q).unwrap() {
            let h = (2.0 * (s.norm() as f64).sqrt()) as i64;
            ev.insert((q, s.index), k.from_int(rand::Rng::gen_range(&mut rng, -h..=h)));
        }
    }
    NewformRecord { label: format!("syn{seed}"), field: FieldId::Qsqrt5, level: Vec::new(), coeff_field: k, eigenvalues: ev, curve: None }
}

fn subset(a: &Survivors, b: &Survivors) -> bool {
    match (a, b) {
        (_, Survivors::All) => true,
        (Survivors::All, Survivors::Finite(_)) => false,
        (Survivors::Finite(x), Survivors::Finite(y)) => x.is_subset(y),
    }
}

#[test]
fn survivors_shrink_as_primes_are_added() {
    let qs = [3, 7, 13, 17, 23];
    for seed in 0..20 {
        let f = synthetic(seed, &qs);
        let bounds: Vec<_> = qs.iter().map(|&q| q_bound(FreyKind::E5, &f, q, &[]).unwrap()).collect();
        let mut prev = Survivors::All;
        for n in 1..=qs.len() {
            let r = bound::combine(&f.label, bounds[..n].to_vec(), 7);
            assert!(subset(&r.survivors, &prev), "seed {seed} n {n}");
            // survivors are exactly the primes ≥ 7 dividing B*
            if let Survivors::Finite(s) = &r.survivors {
                for p in s {
                    assert!((&r.bound % p).is_zero());
                }
            }
            prev = r.survivors;
        }
    }
}

#[test]
fn bound_ignores_class_order() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for q in [3, 7, 13] {
        let t = trace_table(FreyKind::E5, q).unwrap();
        let f = synthetic(q, &[q]);
        let base = exponent_bound(FreyKind::E5, &f, q).unwrap();
        for _ in 0..5 {
            let mut cs: Vec<_> = t.classes.values().collect();
            cs.shuffle(&mut rng);
            assert_eq!(exponent_bound_over(q, cs, &f).unwrap(), base);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn refined_never_drops_a_witnessed_form((a, b) in coprime_pair(), q in prop::sample::select(vec![5u64, 7, 11]), p in prop::sample::select(vec![7u64, 11, 17, 19])) {
        prop_assume!(p != q && (a + b) % q as i64 != 0);
        let Ok(e) = build_frey(FreyKind::F13, a, b) else { return Ok(()) };
        prop_assume!(good_everywhere_above(&e.model, FieldId::CubicK, q));
        let form = NewformRecord::from_curve("backed", e.model, Vec::new());
        for mode in [SignMode::Permissive, SignMode::Strict] {
            prop_assert!(!refined_eliminate(&form, q, p, FreyKind::F13, mode).unwrap().eliminated);
        }
    }
}
