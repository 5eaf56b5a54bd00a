//! Conductor exponents of the Frey curves from the piecewise tables, cross-checked against
//! the (v(c4), v(Δ)) values the tables rest on, and the levels they predict after level lowering.

use super::factors::FactorPolynomials;
use super::{build_frey, CoprimePair, FreyError, FreyKind, FreyModel};
use crate::arith;
use crate::ellcurve::ReductionKind;
use crate::localfield::{self, PrimeSlot};
use crate::numfield::NfElem;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConductorEntry {
    pub slot: PrimeSlot,
    /// One value, or the values the table leaves open.
    pub exponents: BTreeSet<u32>,
    pub reduction: ReductionKind,
    /// Valuation of the minimal discriminant where it is known.
    pub min_disc_valuation: Option<i64>,
}

impl ConductorEntry {
    fn new(slot: PrimeSlot, exponent: u32, min_disc_valuation: Option<i64>) -> Self {
        let reduction = match exponent {
            0 => ReductionKind::Good,
            1 => ReductionKind::Multiplicative,
            _ => ReductionKind::Additive,
        };
        ConductorEntry { slot, exponents: BTreeSet::from([exponent]), reduction, min_disc_valuation }
    }

    /// The exponent when the table determines it.
    pub fn exponent(&self) -> Option<u32> {
        (self.exponents.len() == 1).then(|| *self.exponents.first().unwrap())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConductorProfile {
    pub kind: FreyKind,
    pub pair: CoprimePair,
    /// Every slot that is bad or that the tables single out, ordered by slot.
    pub entries: Vec<ConductorEntry>,
}

impl ConductorProfile {
    pub fn entry(&self, q: u64, index: usize) -> Option<&ConductorEntry> {
        self.entries.iter().find(|e| e.slot.q == q && e.slot.index == index)
    }

    pub fn exponent_at(&self, q: u64, index: usize) -> Option<u32> {
        self.entry(q, index).map_or(Some(0), |e| e.exponent())
    }

    /// Absolute norm of the conductor when every exponent is determined.
    pub fn norm(&self) -> Option<BigInt> {
        let mut n = BigInt::one();
        for e in &self.entries {
            n *= BigInt::from(e.slot.norm()).pow(e.exponent()?);
        }
        Some(n)
    }
}

struct Ctx<'a> {
    frey: &'a FreyModel,
    pair: CoprimePair,
}

impl Ctx<'_> {
    fn v(&self, x: &NfElem, slot: &PrimeSlot) -> Result<Option<i64>, FreyError> {
        if x.is_zero() {
            return Ok(None);
        }
        Ok(Some(localfield::padic_valuation(x, slot)?))
    }

    fn vc4(&self, s: &PrimeSlot) -> Result<Option<i64>, FreyError> {
        self.v(&self.frey.invariants.c4, s)
    }

    fn vdisc(&self, s: &PrimeSlot) -> Result<i64, FreyError> {
        Ok(self.v(&self.frey.invariants.disc, s)?.expect("nonsingular model"))
    }

    fn expect(&self, ok: bool, what: impl FnOnce() -> String) -> Result<(), FreyError> {
        if ok {
            Ok(())
        } else {
            let (a, b) = (self.pair.a, self.pair.b);
            Err(FreyError::CrossCheckFailed(format!("{} ({a},{b}): {}", self.frey.kind, what())))
        }
    }

    /// Checks (v(c4), v(Δ)) at the slot, with c4_at_least meaning v(c4) ≥ the given value.
    fn expect_pair(&self, s: &PrimeSlot, c4: Option<i64>, c4_at_least: Option<i64>, disc: i64) -> Result<(), FreyError> {
        let (vc, vd) = (self.vc4(s)?, self.vdisc(s)?);
        let c_ok = match (c4, c4_at_least) {
            (Some(c), _) => vc == Some(c),
            (None, Some(m)) => vc.map_or(true, |v| v >= m),
            _ => true,
        };
        self.expect(c_ok && vd == disc, || format!("(v(c4), v(Δ)) = ({vc:?}, {vd}) at {s}"))
    }
}

fn v_int(n: i64, p: u64) -> i64 {
    arith::v_p_i64(n, p).map_or(i64::MAX, |v| v as i64)
}

fn only_slot(kind: FreyKind, q: u64) -> Result<PrimeSlot, FreyError> {
    let mut v = localfield::prime_split(kind.field(), q)?;
    assert_eq!(v.len(), 1, "{q} is expected to have a single prime above it");
    Ok(v.remove(0))
}

fn check_d(kind: FreyKind, d: u64) -> Result<(), FreyError> {
    if d == 0 {
        return Err(FreyError::HypothesisViolated("d must be positive".into()));
    }
    let r = kind.r() as u64;
    for l in arith::prime_divisors_u64(&BigInt::from(d)) {
        if l % r == 1 {
            return Err(FreyError::HypothesisViolated(format!("prime {l} of d is 1 mod {r}")));
        }
    }
    Ok(())
}

/// 2-exponent shared by W and F13.
fn two_exponent_w_f13(pair: CoprimePair) -> u32 {
    let (a, b) = (pair.a, pair.b);
    let v = v_int(a + b, 2);
    if (a * b).rem_euclid(4) == 0 {
        3
    } else if (a * b).rem_euclid(4) == 2 || v == 1 {
        4
    } else if v == 2 {
        0
    } else {
        1
    }
}

/// Entries at the primes the tables single out; no factorization of a^r + b^r needed.
fn special_entries(c: &Ctx) -> Result<Vec<ConductorEntry>, FreyError> {
    let kind = c.frey.kind;
    let (a, b) = (c.pair.a, c.pair.b);
    let s = a + b;
    let mut out = Vec::new();
    match kind {
        FreyKind::W => {
            let two = only_slot(kind, 2)?;
            let alpha = two_exponent_w_f13(c.pair);
            let vj = |sl: &PrimeSlot| -> Result<Option<i64>, FreyError> {
                let vd = c.vdisc(sl)?;
                Ok(c.vc4(sl)?.map(|v| 3 * v - vd))
            };
            let j2 = vj(&two)?;
            c.expect(j2.map_or(true, |j| j >= 0) == (v_int(s, 2) <= 2), || format!("v2(j) = {j2:?}"))?;
            out.push(ConductorEntry::new(two, alpha, None));
            let five = only_slot(kind, 5)?;
            let j5 = vj(&five)?;
            let want = if s % 5 == 0 { 1 - 4 * v_int(s, 5) } else { 0 };
            c.expect(j5 == Some(want), || format!("v5(j) = {j5:?}, expected {want}"))?;
            out.push(ConductorEntry::new(five, 2, None));
        }
        FreyKind::E5 | FreyKind::F5 => {
            let two = only_slot(kind, 2)?;
            c.expect_pair(&two, Some(4), None, 6)?;
            out.push(ConductorEntry::new(two, 6, None));
            let q5 = only_slot(kind, 5)?;
            let fp = FactorPolynomials::get(5);
            let divisible = s % 5 == 0;
            let exponent = match (kind, divisible) {
                (FreyKind::E5, false) | (FreyKind::F5, true) => {
                    c.expect(c.vdisc(&q5)? == 0, || format!("expected good reduction at {q5}"))?;
                    0
                }
                _ => 2,
            };
            if kind == FreyKind::F5 {
                if divisible {
                    let vphi = c.v(&NfElem::from_rational(kind.field(), fp.phi.eval_i64(a, b).as_rational().unwrap().clone()), &q5)?;
                    let vpsi = c.v(&fp.psi.eval_i64(a, b), &q5)?;
                    c.expect((vphi, vpsi) == (Some(2), Some(1)), || format!("(v(φ5), v(ψ5)) = ({vphi:?}, {vpsi:?})"))?;
                } else {
                    c.expect_pair(&q5, Some(-1), None, -3)?;
                }
            }
            out.push(ConductorEntry::new(q5, exponent, (exponent == 0).then_some(0)));
        }
        FreyKind::E13 => {
            let w = only_slot(kind, 13)?;
            out.push(ConductorEntry::new(w, 2, None));
            for q3 in localfield::prime_split(kind.field(), 3)? {
                c.expect_pair(&q3, None, Some(4), 12)?;
                out.push(ConductorEntry::new(q3, 0, Some(0)));
            }
            let two = only_slot(kind, 2)?;
            let v2 = v_int(s, 2);
            let mut e = ConductorEntry::new(two, if v2 >= 2 { 3 } else { 4 }, None);
            if v2 == 0 {
                e.exponents = BTreeSet::from([3, 4]);
            }
            out.push(e);
        }
        FreyKind::F13 => {
            let q13 = only_slot(kind, 13)?;
            let v13 = v_int(s, 13);
            if s % 13 == 0 {
                c.expect_pair(&q13, Some(8), None, 23 + 12 * v13)?;
                out.push(ConductorEntry::new(q13, 1, Some(-1 + 12 * v13)));
            } else {
                c.expect_pair(&q13, None, Some(7), 21)?;
                out.push(ConductorEntry::new(q13, 2, None));
            }
            let three = only_slot(kind, 3)?;
            if s % 3 == 0 {
                let v3 = v_int(s, 3);
                c.expect_pair(&three, Some(4), None, 12 + 4 * v3)?;
                out.push(ConductorEntry::new(three, 1, Some(4 * v3)));
            } else {
                c.expect_pair(&three, None, Some(4), 12)?;
                out.push(ConductorEntry::new(three, 0, Some(0)));
            }
            let two = only_slot(kind, 2)?;
            let v2 = v_int(s, 2);
            let vd = c.vdisc(&two)?;
            c.expect(vd == 4 + 4 * v2, || format!("v2(Δ) = {vd}"))?;
            match v2 {
                0 => c.expect_pair(&two, Some(4), None, 4)?,
                1 => c.expect_pair(&two, Some(4), None, 8)?,
                _ => {}
            }
            let alpha = two_exponent_w_f13(c.pair);
            let min_disc = match alpha {
                0 => Some(0),
                1 => Some(-8 + 4 * v2),
                _ => None,
            };
            out.push(ConductorEntry::new(two, alpha, min_disc));
        }
    }
    Ok(out)
}

fn special_primes(kind: FreyKind) -> &'static [u64] {
    match kind {
        FreyKind::W | FreyKind::E5 | FreyKind::F5 => &[2, 5],
        FreyKind::E13 | FreyKind::F13 => &[2, 3, 13],
    }
}

/// Multiplicative entries at the remaining primes dividing a^r + b^r.
fn generic_entries(c: &Ctx) -> Result<Vec<ConductorEntry>, FreyError> {
    let kind = c.frey.kind;
    let r = kind.r();
    let (a, b) = (c.pair.a, c.pair.b);
    let total = c.pair.power_sum(r);
    if total.is_zero() {
        // a = −b: only E13 reaches here, and then a^13 + b^13 = 0 has no primes to visit
        return Ok(Vec::new());
    }
    let mut primes: Vec<BigInt> = arith::factor(&total).into_iter().map(|(p, _)| BigInt::from(p)).collect();
    primes.retain(|p| !special_primes(kind).iter().any(|&s| *p == BigInt::from(s)));
    let mut out = Vec::new();
    for p in primes {
        let l: u64 = p.to_u64().ok_or_else(|| {
            FreyError::HypothesisViolated(format!("prime factor {p} of a^{r} + b^{r} exceeds 64 bits"))
        })?;
        let divides_sum = (a + b) % l as i64 == 0;
        let vl_total = arith::v_p(&total, l).unwrap() as i64;
        for slot in localfield::prime_split(kind.field(), l)? {
            let vd = c.vdisc(&slot)?;
            if vd == 0 {
                continue;
            }
            let vc = c.vc4(&slot)?;
            c.expect(vc == Some(0), || format!("v(c4) = {vc:?} at bad slot {slot}"))?;
            let want = match kind {
                FreyKind::W | FreyKind::F13 => (if divides_sum { 4 } else { 2 }) * vl_total,
                FreyKind::E5 | FreyKind::F5 => {
                    let fp = FactorPolynomials::get(5);
                    let vp = c.v(&fp.psi.eval_i64(a, b), &slot)?.unwrap_or(i64::MAX);
                    let vb = c.v(&fp.psi_bar.eval_i64(a, b), &slot)?.unwrap_or(i64::MAX);
                    2 * vp + vb
                }
                FreyKind::E13 => {
                    let vp = c.v(&FactorPolynomials::get(13).psi.eval_i64(a, b), &slot)?.unwrap_or(i64::MAX);
                    2 * vp
                }
            };
            c.expect(vd == want, || format!("v(Δ) = {vd} at {slot}, expected {want}"))?;
            if matches!(kind, FreyKind::E5 | FreyKind::F5 | FreyKind::E13) {
                c.expect(l % r as u64 == 1, || format!("bad prime {l} is not 1 mod {r}"))?;
            }
            out.push(ConductorEntry::new(slot, 1, Some(vd)));
        }
    }
    Ok(out)
}

/// Conductor exponents of the Frey curve at (a, b), with every table valuation claim re-derived.
pub fn conductor_profile(kind: FreyKind, a: i64, b: i64, d: u64) -> Result<ConductorProfile, FreyError> {
    check_d(kind, d)?;
    let frey = build_frey(kind, a, b)?;
    let c = Ctx { frey: &frey, pair: frey.pair };
    let mut entries = special_entries(&c)?;
    entries.extend(generic_entries(&c)?);
    entries.sort_by(|x, y| x.slot.cmp(&y.slot));
    Ok(ConductorProfile { kind, pair: frey.pair, entries })
}

/// A level as prime slots with exponents.
pub type Level = Vec<(PrimeSlot, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SerreLevel {
    pub kind: FreyKind,
    pub p: u64,
    /// Possible levels; more than one when the tables leave an exponent open.
    pub candidates: Vec<Level>,
    /// The congruence conditions on (a, b) that select this branch.
    pub conditions: Vec<String>,
}

impl SerreLevel {
    pub fn norms(&self) -> Vec<BigInt> {
        self.candidates
            .iter()
            .map(|l| l.iter().map(|(s, e)| BigInt::from(s.norm()).pow(*e)).product())
            .collect()
    }
}

fn violated(msg: String) -> FreyError {
    FreyError::HypothesisViolated(msg)
}

/// Level of the newform predicted by level lowering for a putative solution with a^r + b^r = d c^p.
pub fn serre_level(kind: FreyKind, a: i64, b: i64, d: u64, p: u64) -> Result<SerreLevel, FreyError> {
    check_d(kind, d)?;
    if !arith::is_prime(p) {
        return Err(violated(format!("{p} is not prime")));
    }
    let frey = build_frey(kind, a, b)?;
    let c = Ctx { frey: &frey, pair: frey.pair };
    let s = a + b;
    let special = special_entries(&c)?;
    let mut conditions = Vec::new();
    let keep_special = |entries: &[ConductorEntry]| -> Vec<ConductorEntry> {
        entries.iter().filter(|e| e.exponents.iter().any(|&x| x > 0)).cloned().collect()
    };
    let kept: Vec<ConductorEntry> = match kind {
        FreyKind::W => {
            if p < 7 {
                return Err(violated(format!("p = {p} < 7")));
            }
            let mut v = keep_special(&special);
            for l in arith::prime_divisors_u64(&BigInt::from(d)) {
                if l != 2 && l != 5 {
                    let slot = only_slot(kind, l)?;
                    v.push(ConductorEntry::new(slot, 1, None));
                }
            }
            conditions.push(format!("2-exponent {} from a·b and v2(a+b)", two_exponent_w_f13(c.pair)));
            v
        }
        FreyKind::E5 | FreyKind::F5 => {
            let want_div = kind == FreyKind::F5;
            if (s % 5 == 0) != want_div {
                return Err(violated(format!("{kind} needs 5 {} a+b", if want_div { "|" } else { "∤" })));
            }
            if p < 7 {
                return Err(violated(format!("p = {p} < 7")));
            }
            conditions.push(format!("5 {} a+b", if want_div { "|" } else { "∤" }));
            keep_special(&special)
        }
        FreyKind::E13 => {
            if !(p >= 7 || (p == 5 && s % 3 == 0)) {
                return Err(violated(format!("p = {p} needs p ≥ 7, or p = 5 with 3 | a+b")));
            }
            conditions.push(match v_int(s, 2) {
                0 => "a+b odd: s ∈ {3, 4}".to_string(),
                1 => "2 ∥ a+b: s = 4".to_string(),
                _ => "4 | a+b: s = 3".to_string(),
            });
            keep_special(&special)
        }
        FreyKind::F13 => {
            if p < 5 || p == 13 || (s % 13 != 0 && (p == 17 || p == 37)) {
                return Err(violated(format!("p = {p} outside the range for F13")));
            }
            conditions.push(format!("13 {} a+b", if s % 13 == 0 { "|" } else { "∤" }));
            conditions.push(format!("3 {} a+b", if s % 3 == 0 { "|" } else { "∤" }));
            conditions.push(format!("v2(a+b) = {}", v_int(s, 2).min(3)).replace("= 3", "≥ 3"));
            keep_special(&special)
        }
    };
    // expand open exponents into candidate levels
    let mut candidates: Vec<Level> = vec![Vec::new()];
    for e in kept {
        let mut next = Vec::new();
        for lvl in &candidates {
            for &x in &e.exponents {
                let mut l = lvl.clone();
                if x > 0 {
                    l.push((e.slot.clone(), x));
                }
                next.push(l);
            }
        }
        candidates = next;
    }
    for l in candidates.iter_mut() {
        l.sort();
    }
    Ok(SerreLevel { kind, p, candidates, conditions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_one_two() {
        let pr = conductor_profile(FreyKind::W, 1, 2, 3).unwrap();
        assert_eq!(pr.exponent_at(2, 0), Some(4));
        assert_eq!(pr.exponent_at(5, 0), Some(2));
        assert_eq!(pr.exponent_at(3, 0), Some(1));
        assert_eq!(pr.exponent_at(11, 0), Some(1));
        assert_eq!(pr.norm(), Some(BigInt::from(16 * 25 * 3 * 11)));
        let lv = serre_level(FreyKind::W, 1, 2, 3, 7).unwrap();
        assert_eq!(lv.norms(), vec![BigInt::from(1200)]);
    }

    #[test]
    fn e5_and_f5_tables() {
        let pr = conductor_profile(FreyKind::E5, 1, 2, 3).unwrap();
        assert_eq!(pr.exponent_at(2, 0), Some(6));
        assert_eq!(pr.exponent_at(5, 0), Some(0));
        let pr = conductor_profile(FreyKind::F5, 1, 2, 3).unwrap();
        assert_eq!(pr.exponent_at(5, 0), Some(2));
        let pr = conductor_profile(FreyKind::F5, 2, 3, 3).unwrap();
        assert_eq!(pr.exponent_at(5, 0), Some(0));
        assert_eq!(serre_level(FreyKind::E5, 1, 2, 3, 7).unwrap().norms(), vec![BigInt::from(4096)]);
        assert!(serre_level(FreyKind::E5, 2, 3, 3, 7).is_err());
    }

    #[test]
    fn f13_two_exponent_at_one_one() {
        let pr = conductor_profile(FreyKind::F13, 1, 1, 1).unwrap();
        assert_eq!(pr.exponent_at(2, 0), Some(4));
    }

    #[test]
    fn f13_level_all_divisible() {
        // 13 | a+b, 3 | a+b, 8 | a+b
        let lv = serre_level(FreyKind::F13, 1, 311, 3, 7).unwrap();
        assert_eq!(lv.candidates.len(), 1);
        let ex: Vec<(u64, u32)> = lv.candidates[0].iter().map(|(s, e)| (s.q, *e)).collect();
        assert_eq!(ex, vec![(2, 1), (3, 1), (13, 1)]);
    }

    #[test]
    fn e13_levels() {
        let lv = serre_level(FreyKind::E13, 1, 3, 3, 7).unwrap();
        let ex: Vec<(u64, u32)> = lv.candidates[0].iter().map(|(s, e)| (s.q, *e)).collect();
        assert_eq!(ex, vec![(2, 3), (13, 2)]);
        assert_eq!(serre_level(FreyKind::E13, 1, 2, 3, 7).unwrap().candidates.len(), 2);
        assert!(serre_level(FreyKind::E13, 1, 1, 3, 5).is_err());
        assert!(serre_level(FreyKind::E13, 1, 2, 3, 5).is_ok());
    }

    #[test]
    fn d_hypothesis() {
        assert!(matches!(conductor_profile(FreyKind::E5, 1, 2, 11), Err(FreyError::HypothesisViolated(_))));
        assert!(matches!(conductor_profile(FreyKind::E13, 1, 2, 53), Err(FreyError::HypothesisViolated(_))));
    }
}
