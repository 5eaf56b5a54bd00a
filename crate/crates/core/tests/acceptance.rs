//! One pass/fail/data_missing line per acceptance criterion. Run with `--nocapture` to see them.
//!
//! Criterion 8 reads Hilbert eigenvalue files from the directory in FREY_HILBERT_DIR.

use clap::Parser;
use frey::arith;
use frey::cli::{self, prove, Cli, ProveOptions, Verdict};
use frey::ellcurve::{local_trace, quadratic_twist, rational_conductor, ReducedShape, WeierstrassModel};
use frey::freycurves::{
    build_frey, conductor_profile, displayed_invariants_match, invariant_identity_check, is_admissible, trace_table, FactorPolynomials,
    FactorTriple, FreyKind, TripleVariant,
};
use frey::localfield::{self, padic_valuation, reduce_element, PrimeSlot};
use frey::newformdb::{eigenvalue_at, parse_rational_db, CoeffField, NewformRecord};
use frey::numfield::{nf_norm, FieldId, NfElem};
use frey::sieve::{bound, exponent_bound, exponent_bound_over, q_bound, run_sieve, second_case_report, SieveConfig, Survivors};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

enum Outcome {
    Pass(String),
    Fail(String),
    DataMissing(String),
}

/// Collects failures inside one criterion instead of stopping at the first.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn that(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn outcome(self) -> Outcome {
        if self.failures.is_empty() {
            Outcome::Pass(self.notes.join("; "))
        } else {
            Outcome::Fail(self.failures.join("; "))
        }
    }
}

fn coprime_pairs(kind: FreyKind, n: usize, bound: i64, seed: u64) -> Vec<(i64, i64)> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let (a, b) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        if a.gcd(&b) == 1 && !(kind.needs_nonzero_sum() && a + b == 0) {
            out.push((a, b));
        }
    }
    out
}

fn only_slot(field: FieldId, q: u64) -> PrimeSlot {
    let mut v = localfield::prime_split(field, q).unwrap();
    assert_eq!(v.len(), 1);
    v.remove(0)
}

fn criterion_1() -> Outcome {
    let mut c = Check::default();
    for kind in FreyKind::ALL {
        c.that(invariant_identity_check(kind), format!("{kind}: displayed invariants are not identities"));
        let mut bad = 0;
        for (a, b) in coprime_pairs(kind, 100, 40, 1 + kind as u64) {
            let inv = build_frey(kind, a, b).unwrap().invariants;
            let c4 = &inv.c4;
            let c6 = &inv.c6;
            let lhs = &(&(c4 * c4) * c4) - &(c6 * c6);
            if lhs != inv.disc.scale_int(1728) || !displayed_invariants_match(kind, a, b, &inv) {
                bad += 1;
            }
        }
        c.that(bad == 0, format!("{kind}: {bad}/100 pairs fail"));
    }
    for v in [TripleVariant::E13, TripleVariant::F13] {
        c.that(FactorTriple::get(v).sums_to_zero(), format!("{v:?}: A + B + C != 0"));
    }
    for r in [5, 13] {
        c.that(FactorPolynomials::get(r).identities_hold(), format!("r = {r}: x^r + y^r != (x+y)ψψ̄"));
    }
    c.note("5 kinds × 100 pairs");
    c.outcome()
}

/// 2-exponent of the conductor of W_{a,b}, written out from the four-branch table.
fn w_alpha(a: i64, b: i64) -> u32 {
    let v2s = arith::v_p_i64(a + b, 2).unwrap();
    if (a * b).rem_euclid(4) == 0 {
        3
    } else if (a * b).rem_euclid(4) == 2 || v2s == 1 {
        4
    } else if v2s == 2 {
        0
    } else {
        1
    }
}

fn criterion_2() -> Outcome {
    let mut c = Check::default();
    let mut n = 0;
    for a in -20i64..=20 {
        for b in -20i64..=20 {
            if a.gcd(&b) != 1 || a + b == 0 {
                continue;
            }
            let s5 = BigInt::from(a).pow(5) + BigInt::from(b).pow(5);
            let r: BigInt = arith::prime_divisors_u64(&s5).into_iter().filter(|&p| p != 2 && p != 5).map(BigInt::from).product();
            let want = BigInt::from(2).pow(w_alpha(a, b)) * 25 * r;
            let m = build_frey(FreyKind::W, a, b).unwrap().model;
            let (got, _, _) = rational_conductor(&m.integral_ainvs_q().unwrap()).unwrap();
            c.that(got == want, format!("W({a},{b}): conductor {got}, table {want}"));
            n += 1;
        }
    }
    let w0: [BigInt; 5] = [0, 1, 0, 592, -16812].map(BigInt::from);
    let n0 = rational_conductor(&w0).unwrap().0;
    c.that(n0 == BigInt::from(1200), format!("conductor(W0) = {n0}"));
    c.note(format!("{n} pairs, conductor(W0) = {n0}"));
    c.outcome()
}

fn criterion_3() -> Outcome {
    let mut c = Check::default();

    let t = trace_table(FreyKind::E5, 3).unwrap();
    let a3: BTreeSet<i64> = t.classes.iter().filter(|((x, y), _)| (x + y) % 3 == 0).map(|(_, ct)| ct.records[0].a).collect();
    c.that(a3 == BTreeSet::from([6]), format!("a_3(E5) with 3 | a+b: {a3:?}"));

    let s3 = only_slot(FieldId::Qsqrt5, 3);
    let e10 = build_frey(FreyKind::E5, 1, 0).unwrap().model;
    let e11 = build_frey(FreyKind::E5, 1, 1).unwrap().model;
    let six = [e10.clone(), quadratic_twist(&e10, -1), quadratic_twist(&e10, 2), quadratic_twist(&e10, -2), e11.clone(), quadratic_twist(&e11, 2)];
    for (i, m) in six.iter().enumerate() {
        let lt = local_trace(m, &s3).unwrap();
        c.that(lt == (ReducedShape::Nonsingular, 4), format!("curve {i} of the six: {lt:?}"));
    }

    let q3 = localfield::slot(FieldId::Q, 3, 0).unwrap();
    let w0 = WeierstrassModel::from_ints(FieldId::Q, [0, 1, 0, 592, -16812]).unwrap();
    let lt0 = local_trace(&quadratic_twist(&w0, -1), &q3).unwrap();
    c.that(lt0 == (ReducedShape::Node, -1), format!("a_3(W0⊗χ-1): {lt0:?}"));
    let mut frey_side = BTreeSet::new();
    let mut residues = BTreeSet::new();
    for a in -40i64..=40 {
        for b in -40i64..=40 {
            if a.gcd(&b) != 1 || a + b == 0 || arith::v_p_i64(a * b, 2) != Some(1) {
                continue;
            }
            let m = quadratic_twist(&build_frey(FreyKind::W, a, b).unwrap().model, -1);
            frey_side.insert(local_trace(&m, &q3).unwrap().1);
            residues.insert((a.rem_euclid(3), b.rem_euclid(3)));
        }
    }
    c.that(residues.len() == 8, format!("only {} residue classes mod 3 seen", residues.len()));
    c.that(frey_side == BTreeSet::from([-2, 1, 2]), format!("a_3(W⊗χ-1) under v2(ab) = 1: {frey_side:?}"));

    // 𝔮1 is the prime above 3 containing w + 1
    let slots = localfield::prime_split(FieldId::Qsqrt13, 3).unwrap();
    let wp1 = NfElem::from_ints(FieldId::Qsqrt13, &[1, 1]);
    let i1 = slots.iter().position(|s| reduce_element(&wp1, s).unwrap() == 0).unwrap();
    let i2 = 1 - i1;
    let t = trace_table(FreyKind::E13, 3).unwrap();
    let mut pairs = BTreeSet::new();
    for (&(x, y), ct) in &t.classes {
        let p = (ct.records[i1].a, ct.records[i2].a);
        pairs.insert(p);
        c.that((p == (-3, -1)) == ((x + y) % 3 == 0), format!("class ({x},{y}) gives {p:?}"));
    }
    c.that(pairs == BTreeSet::from([(-3, -1), (-1, -3), (-1, 1)]), format!("E13 pairs at 3: {pairs:?}"));
    for (a, b) in [(1, 0), (1, 1)] {
        let m = build_frey(FreyKind::E13, a, b).unwrap().model;
        let lt = local_trace(&m, &slots[i1]).unwrap();
        c.that(lt == (ReducedShape::Nonsingular, -1), format!("a_q1(E13({a},{b})): {lt:?}"));
    }
    c.note(format!("W⊗χ-1 set {frey_side:?}, E13 pairs {pairs:?}"));
    c.outcome()
}

fn criterion_4() -> Outcome {
    let mut c = Check::default();
    let n169 = BigRational::from_integer(169.into());
    for v in [TripleVariant::E13, TripleVariant::F13] {
        let t = FactorTriple::get(v);
        for (name, x) in [("α", &t.alpha), ("β", &t.beta), ("γ", &t.gamma)] {
            let n = nf_norm(x);
            c.that(n == n169, format!("{v:?} {name}: norm {n}"));
        }
    }

    let q13 = only_slot(FieldId::CubicK, 13);
    let three = only_slot(FieldId::CubicK, 3);
    let v = |x: &NfElem, s: &PrimeSlot| padic_valuation(x, s).unwrap();
    let vz = |n: i64, p: u64| arith::v_p_i64(n, p).unwrap() as i64;
    let mut divisible = Vec::new();
    let mut other = Vec::new();
    for a in 1i64.. {
        for k in [-2i64, -1, 1, 2, 3] {
            let b = 13 * k - a;
            if a.gcd(&b) == 1 && divisible.len() < 20 {
                divisible.push((a, b));
            }
            let b = 13 * k + 1 - a;
            if a.gcd(&b) == 1 && a + b != 0 && other.len() < 20 {
                other.push((a, b));
            }
        }
        if divisible.len() == 20 && other.len() == 20 {
            break;
        }
    }
    for &(a, b) in divisible.iter().chain(&other) {
        let inv = build_frey(FreyKind::F13, a, b).unwrap().invariants;
        let s = a + b;
        let (vc, vd) = (v(&inv.c4, &q13), v(&inv.disc, &q13));
        if s % 13 == 0 {
            c.that((vc, vd) == (8, 23 + 12 * vz(s, 13)), format!("F13({a},{b}) at q13: ({vc}, {vd})"));
        } else {
            c.that(vc >= 7 && vd == 21, format!("F13({a},{b}) at q13: ({vc}, {vd})"));
        }
        let (vc, vd) = (v(&inv.c4, &three), v(&inv.disc, &three));
        if s % 3 == 0 {
            c.that((vc, vd) == (4, 12 + 4 * vz(s, 3)), format!("F13({a},{b}) at 3: ({vc}, {vd})"));
        } else {
            c.that(vc >= 4 && vd == 12, format!("F13({a},{b}) at 3: ({vc}, {vd})"));
        }
    }
    let e2 = conductor_profile(FreyKind::F13, 1, 1, 1).unwrap().exponent_at(2, 0);
    c.that(e2 == Some(4), format!("F13(1,1) exponent at 2: {e2:?}"));
    c.note(format!("{} pairs with 13 | a+b, {} without", divisible.len(), other.len()));
    c.outcome()
}

fn criterion_5() -> Outcome {
    let mut c = Check::default();
    // x² − a x + 3 is irreducible over F_p iff it has no root
    let has_root = |a: i64, p: i64| (0..p).any(|x| (x * x - a * x + 3).rem_euclid(p) == 0);
    for p in [5u64, 7, 13] {
        for (a, b) in [(-3, -1), (-1, -3), (-1, 1)] {
            let got = frey::sieve::charpoly_pair_irreducible(&[a, b], 3, p);
            let oracle = !has_root(a, p as i64) || !has_root(b, p as i64);
            let table = !(p == 5 && (a, b) == (-1, 1));
            c.that(got == oracle && got == table, format!("({a},{b}) at p = {p}: {got}"));
        }
    }
    c.outcome()
}

fn criterion_6() -> Outcome {
    let mut c = Check::default();
    let db = parse_rational_db(cli::BUNDLED_CURVES).unwrap();
    let levels: BTreeSet<u64> = db.iter().map(|e| e.conductor).collect();
    c.that(levels == BTreeSet::from([50, 200, 400]), format!("levels {levels:?}"));
    for e in &db {
        let m = e.model();
        let fresh = |q: u64| local_trace(&m, &localfield::slot(FieldId::Q, q, 0).unwrap()).unwrap().1;
        let a3 = fresh(3);
        if e.two_torsion {
            for q in arith::primes_upto(50).into_iter().filter(|&q| q != 2 && q != 5) {
                c.that(fresh(q) % 2 == 0, format!("{}: a_{q} odd", e.label));
            }
        } else {
            c.that([-3, -1, 1, 3].contains(&a3), format!("{}: a_3 = {a3}", e.label));
        }
        c.that(!(a3.abs() == 3 && [1, 6].contains(&fresh(7).rem_euclid(7))), format!("{}: a_3 = ±3 and a_7 = ±1 mod 7", e.label));
    }
    for d in [1u64, 2] {
        c.that(second_case_report(d, &db).unwrap().resolved, format!("d = {d}: report not resolved"));
        let args = ["frey", "second-case", "--d", &d.to_string()];
        let rep = cli::execute(&Cli::parse_from(args)).unwrap();
        c.that(rep.json["verdict"] == "resolved" && rep.exit == 0, format!("d = {d}: command verdict {}", rep.json["verdict"]));
    }
    c.note(format!("{} curves", db.len()));
    c.outcome()
}

fn synthetic(seed: u64, qs: &[u64]) -> NewformRecord {
    let k = CoeffField::rational();
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut ev = BTreeMap::new();
    for &q in qs {
        for s in localfield::prime_split(FieldId::Qsqrt5, q).unwrap() {
            let h = (2.0 * (s.norm() as f64).sqrt()) as i64;
            ev.insert((q, s.index), k.from_int(rng.gen_range(-h..=h)));
        }
    }
    NewformRecord { label: format!("syn{seed}"), field: FieldId::Qsqrt5, level: Vec::new(), coeff_field: k, eigenvalues: ev, curve: None }
}

fn criterion_7() -> Outcome {
    let mut c = Check::default();
    let mut checked = 0;
    for kind in [FreyKind::W, FreyKind::E5, FreyKind::F5, FreyKind::E13] {
        for (a, b) in coprime_pairs(kind, 3, 15, 100 + kind as u64) {
            let e = build_frey(kind, a, b).unwrap();
            let form = NewformRecord::from_curve("self", e.model.clone(), Vec::new());
            for q in arith::primes_upto(61).into_iter().filter(|&q| is_admissible(kind, q)) {
                let good = localfield::prime_split(kind.field(), q)
                    .unwrap()
                    .iter()
                    .all(|s| matches!(local_trace(&e.model, s), Ok((ReducedShape::Nonsingular, _))));
                if good {
                    let b = exponent_bound(kind, &form, q).unwrap();
                    c.that(b.is_zero(), format!("{kind}({a},{b}) q = {q}: bound {b}"));
                    checked += 1;
                }
            }
        }
    }

    let qs = [3, 7, 13, 17, 23];
    for seed in 0..20 {
        let f = synthetic(seed, &qs);
        let bounds: Vec<_> = qs.iter().map(|&q| q_bound(FreyKind::E5, &f, q, &[]).unwrap()).collect();
        let mut prev = Survivors::All;
        for n in 1..=qs.len() {
            let r = bound::combine(&f.label, bounds[..n].to_vec(), 7);
            let shrinks = match (&r.survivors, &prev) {
                (_, Survivors::All) => true,
                (Survivors::Finite(x), Survivors::Finite(y)) => x.is_subset(y),
                _ => false,
            };
            c.that(shrinks, format!("seed {seed}: survivors grew at {n} primes"));
            prev = r.survivors;
        }
    }

    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for q in [3, 7, 13] {
        let t = trace_table(FreyKind::E5, q).unwrap();
        let f = synthetic(q, &[q]);
        let base = exponent_bound(FreyKind::E5, &f, q).unwrap();
        for _ in 0..5 {
            let mut cs: Vec<_> = t.classes.values().collect();
            cs.shuffle(&mut rng);
            c.that(exponent_bound_over(q, cs, &f).unwrap() == base, format!("q = {q}: bound depends on class order"));
        }
    }
    c.note(format!("{checked} self-match bounds, 20 synthetic databases"));
    c.outcome()
}

fn count_survivors(kind: FreyKind, forms: &[NewformRecord], aux: &[u64], p_floor: u64) -> Vec<(NewformRecord, Survivors)> {
    let cfg = SieveConfig { kind, d: 3, aux_primes: aux.to_vec(), p_floor, branches: Vec::new() };
    let res = run_sieve(&cfg, forms).unwrap();
    forms.iter().cloned().zip(res.into_iter().map(|r| r.survivors)).filter(|(_, s)| !s.is_empty()).collect()
}

fn criterion_8() -> Outcome {
    let Some(dir) = std::env::var_os("FREY_HILBERT_DIR").map(PathBuf::from) else {
        return Outcome::DataMissing("no Hilbert eigenvalue files; set FREY_HILBERT_DIR".into());
    };
    let forms = match cli::load_hilbert_dir(&dir) {
        Ok(f) => f,
        Err(e) => return Outcome::DataMissing(e.to_string()),
    };
    let level_of = |field: FieldId, parts: &[(u64, u32)]| -> Vec<NewformRecord> {
        let mut key: Vec<(u64, usize, u32)> =
            parts.iter().flat_map(|&(q, e)| localfield::prime_split(field, q).unwrap().into_iter().map(move |s| (s.q, s.index, e))).collect();
        key.sort();
        forms
            .iter()
            .filter(|f| {
                let mut k: Vec<_> = f.level.iter().map(|(s, e)| (s.q, s.index, *e)).collect();
                k.sort();
                f.field == field && k == key
            })
            .cloned()
            .collect()
    };
    let l5 = level_of(FieldId::Qsqrt5, &[(2, 6)]);
    let lk = level_of(FieldId::CubicK, &[(2, 1), (3, 1), (13, 1)]);
    if l5.is_empty() || lk.is_empty() {
        return Outcome::DataMissing(format!("{} forms at 2^6 over Q(√5), {} at 2·3·q13 over the cubic field", l5.len(), lk.len()));
    }

    let mut c = Check::default();
    let aux: Vec<u64> = arith::primes_upto(30).into_iter().filter(|&q| is_admissible(FreyKind::E5, q)).collect();
    let e = count_survivors(FreyKind::E5, &l5, &aux, 7);
    c.that(e.len() == 6, format!("E branch: {} survivors for p >= 7", e.len()));
    let f11 = count_survivors(FreyKind::F5, &l5, &aux, 11);
    c.that(f11.len() == 2, format!("F branch: {} survivors for p >= 11", f11.len()));
    let f7 = count_survivors(FreyKind::F5, &l5, &aux, 7);
    let s3 = only_slot(FieldId::Qsqrt5, 3);
    let extra: Vec<_> = f7.iter().filter(|(f, _)| !f11.iter().any(|(g, _)| g.label == f.label)).collect();
    c.that(extra.len() == 3, format!("F branch: {} extra survivors at p = 7", extra.len()));
    for (f, _) in extra {
        let a3 = eigenvalue_at(f, &s3).unwrap().as_i64();
        c.that(a3 == Some(4), format!("{}: a_3 = {a3:?}", f.label));
    }

    let opts = ProveOptions { strict_no_cited: true, ..ProveOptions::default() };
    let t5 = prove(5, 3, &forms, opts).unwrap();
    c.that(t5.verdict == Verdict::Resolved, format!("(5,3): {}", t5.verdict.as_str()));
    let t13 = prove(13, 3, &forms, opts).unwrap();
    c.that(t13.verdict == Verdict::ResolvedExceptListedP && t13.excluded == [7], format!("(13,3): {} {:?}", t13.verdict.as_str(), t13.excluded));
    let mut killed_at: BTreeMap<String, BTreeSet<u64>> = BTreeMap::new();
    for s in t13.steps.iter().filter(|s| s.step == "refined" && s.verified) {
        let q: u64 = s.evidence.last().and_then(|l| l.strip_prefix("q = ")).and_then(|l| l.split(':').next()).unwrap().parse().unwrap();
        killed_at.entry(s.p.clone()).or_default().insert(q);
    }
    let at = |p: &str| killed_at.get(p).cloned().unwrap_or_default();
    c.that(!at("= 11").is_empty() && at("= 11").iter().all(|&q| q == 5), format!("p = 11 eliminated at q in {:?}", at("= 11")));
    c.that(!at("= 5").is_empty() && at("= 5").iter().all(|q| [31, 47, 53].contains(q)), format!("p = 5 eliminated at q in {:?}", at("= 5")));
    c.outcome()
}

fn criterion_9() -> Outcome {
    let mut c = Check::default();
    let opts = ProveOptions::default();
    let traces = [prove(5, 3, &[], opts).unwrap(), prove(13, 3, &[], opts).unwrap()];
    let claims = ["295, 181", "244609, 148101", "10^7"];
    for claim in claims {
        let mut cited = 0;
        for t in &traces {
            for s in &t.steps {
                let text = format!("{} {}", s.reference, s.evidence.join(" "));
                if text.contains(claim) {
                    if s.is_cited() {
                        cited += 1;
                    } else {
                        c.that(false, format!("computed step \"{}\" states {claim}", s.step));
                    }
                }
            }
        }
        c.that(cited > 0, format!("{claim} is not cited in any trace"));
    }
    // the one step that uses p > 10^7 is advisory and carries no verdict weight
    let adv: Vec<_> = traces[0].steps.iter().filter(|s| s.advisory).collect();
    c.that(adv.iter().all(|s| s.step == "inertia at 2"), "unexpected advisory step");
    c.note("dimension table and p > 10^7 appear only as cited steps");
    c.outcome()
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Outcome::Fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match out {
            Outcome::Pass(d) if d.is_empty() => println!("criterion {n}: pass"),
            Outcome::Pass(d) => println!("criterion {n}: pass ({d})"),
            Outcome::DataMissing(d) => println!("criterion {n}: data_missing ({d})"),
            Outcome::Fail(d) => {
                println!("criterion {n}: fail ({d})");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
