//! Prime splitting, residue fields, reduction maps and valuations at prime ideals.

pub mod padic;
mod residue;

pub use padic::{hensel_lift, PadicContext};
pub use residue::{Fe, ResidueField};

use crate::arith::{self, fp, fp::FpPoly};
use crate::numfield::{FieldId, NfElem, NumFieldError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalFieldError {
    #[error("{q} is not prime")]
    NotPrime { q: u64 },
    #[error("prime {q} is not supported in {field}")]
    UnsupportedPrime { field: FieldId, q: u64 },
    #[error("element has negative valuation at the slot")]
    NegativeValuation,
    #[error("valuation of zero")]
    ZeroElement,
    #[error("q-adic precision exhausted")]
    PrecisionExhausted,
    #[error("root is not a simple root modulo q")]
    NotSimpleRoot,
    #[error(transparent)]
    NumField(#[from] NumFieldError),
}

/// A prime ideal of a registered field above the rational prime q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimeSlot {
    pub field: FieldId,
    pub q: u64,
    pub index: usize,
    pub f: u32,
    pub e: u32,
    /// Monic irreducible factor of the defining polynomial mod q (it divides with multiplicity e).
    pub factor: FpPoly,
    /// Number of prime ideals of the field above q.
    pub count_above_q: usize,
}

impl PrimeSlot {
    /// N𝔮 = q^f.
    pub fn norm(&self) -> u64 {
        self.q.pow(self.f)
    }

    pub fn residue_field(&self) -> Arc<ResidueField> {
        ResidueField::get(self.q, &self.factor)
    }
}

impl fmt::Display for PrimeSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.q, self.index)
    }
}

/// Ramified slots read from the registered table: (field, q, factor, e, uniformizer).
fn registered_slot(field: FieldId, q: u64) -> Option<(FpPoly, u32, NfElem)> {
    match (field, q) {
        // √5 = 2ω − 1; x² − x − 1 ≡ (x − 3)² mod 5
        (FieldId::Qsqrt5, 5) => Some((vec![2, 1], 2, NfElem::from_ints(field, &[-1, 2]))),
        // w² = 13
        (FieldId::Qsqrt13, 13) => Some((vec![0, 1], 2, NfElem::generator(field))),
        // x³ + x² − 4x + 1 ≡ (x − 4)³ mod 13 and N(z − 4) = −65
        (FieldId::CubicK, 13) => Some((vec![9, 1], 3, NfElem::from_ints(field, &[-4, 1]))),
        // 2 is inert; the factor is θ² + θ + 1 for θ = (1 + w)/2, not a factor of x² − 13
        (FieldId::Qsqrt13, 2) => Some((vec![1, 1, 1], 1, NfElem::from_int(field, 2))),
        _ => None,
    }
}

/// A uniformizer at the slot: the registered one at ramified slots, q otherwise.
pub fn uniformizer(slot: &PrimeSlot) -> NfElem {
    match registered_slot(slot.field, slot.q) {
        Some((_, _, pi)) => pi,
        None => NfElem::from_int(slot.field, slot.q),
    }
}

pub fn prime_split(field: FieldId, q: u64) -> Result<Vec<PrimeSlot>, LocalFieldError> {
    if !arith::is_prime(q) {
        return Err(LocalFieldError::NotPrime { q });
    }
    if field.excluded_primes().contains(&q) {
        let (factor, e, _) = registered_slot(field, q).ok_or(LocalFieldError::UnsupportedPrime { field, q })?;
        let f = (factor.len() - 1) as u32;
        return Ok(vec![PrimeSlot { field, q, index: 0, f, e, factor, count_above_q: 1 }]);
    }
    let m = fp::reduce(&field.spec().defining_poly, q);
    let fs = fp::factor(&m, q);
    let n = fs.len();
    Ok(fs
        .into_iter()
        .enumerate()
        .map(|(index, (factor, e))| PrimeSlot {
            field,
            q,
            index,
            f: (factor.len() - 1) as u32,
            e,
            factor,
            count_above_q: n,
        })
        .collect())
}

pub fn slot(field: FieldId, q: u64, index: usize) -> Result<PrimeSlot, LocalFieldError> {
    prime_split(field, q)?
        .into_iter()
        .nth(index)
        .ok_or(LocalFieldError::UnsupportedPrime { field, q })
}

/// The inert prime 2 of Q(√13), where Z[w] is not maximal.
fn is_index_slot(slot: &PrimeSlot) -> bool {
    slot.field == FieldId::Qsqrt13 && slot.q == 2
}

/// a + bw = (a − b) + 2b·θ with θ = (1 + w)/2, reduced to F_2[θ]/(θ² + θ + 1).
fn reduce_index_slot(x: &NfElem, slot: &PrimeSlot) -> Result<Fe, LocalFieldError> {
    let zero = num_rational::BigRational::zero();
    let a = x.coeffs().first().unwrap_or(&zero);
    let b = x.coeffs().get(1).unwrap_or(&zero);
    let c0 = arith::rat_mod(&(a - b), 2).ok_or(LocalFieldError::NegativeValuation)?;
    let c1 = arith::rat_mod(&(b * num_rational::BigRational::from_integer(2.into())), 2)
        .ok_or(LocalFieldError::NegativeValuation)?;
    let mut p: FpPoly = vec![c0, c1];
    fp::trim(&mut p);
    Ok(slot.residue_field().encode(&p))
}

fn coeffs_q_integral(x: &NfElem, q: u64) -> bool {
    x.coeffs().iter().all(|c| arith::bigint_mod(c.denom(), q) != 0)
}

/// Coefficient-wise reduction of a q-integral element, generator ↦ t.
fn reduce_direct(x: &NfElem, slot: &PrimeSlot) -> Fe {
    let k = slot.residue_field();
    let mut p: FpPoly = x.coeffs().iter().map(|c| arith::rat_mod(c, slot.q).unwrap()).collect();
    fp::trim(&mut p);
    k.encode(&fp::rem(&p, &slot.factor, slot.q))
}

/// Integer numerator polynomial and denominator of an element.
fn numerator_poly(x: &NfElem) -> (padic::ZPoly, BigInt) {
    let d = x.denominator();
    let p = x.coeffs().iter().map(|c| (c * &d).to_integer()).collect();
    (p, d)
}

fn hensel_valuation(x: &NfElem, slot: &PrimeSlot) -> Result<i64, LocalFieldError> {
    let (p, d) = numerator_poly(x);
    let vd = arith::v_p(&d, slot.q).unwrap() as i64;
    let mut n = 24u32;
    loop {
        let ctx = PadicContext::get(slot, n);
        let img = ctx.image(&p);
        if let Some(v) = img.iter().filter_map(|c| arith::v_p(c, slot.q)).min() {
            return Ok(v as i64 - vd);
        }
        if n >= 1024 * slot.e {
            return Err(LocalFieldError::PrecisionExhausted);
        }
        n *= 2;
    }
}

/// Normalized valuation v_𝔮(x).
pub fn padic_valuation(x: &NfElem, slot: &PrimeSlot) -> Result<i64, LocalFieldError> {
    if x.is_zero() {
        return Err(LocalFieldError::ZeroElement);
    }
    if x.field() != slot.field {
        return Err(NumFieldError::FieldMismatch(x.field(), slot.field).into());
    }
    if let Some(r) = x.as_rational() {
        return Ok(arith::v_p_rat(r, slot.q).unwrap() * slot.e as i64);
    }
    if is_index_slot(slot) {
        // unique prime above 2 with residue degree 2
        return Ok(arith::v_p_rat(&x.norm(), 2).unwrap() / 2);
    }
    if slot.e == 1 {
        return hensel_valuation(x, slot);
    }
    // ramified registered slot, the unique prime above q: clear q from the
    // denominators, then divide by the uniformizer while the residue vanishes
    let pi = uniformizer(slot);
    let shift = arith::v_p(&x.denominator(), slot.q).unwrap();
    let mut y = x.scale(&num_rational::BigRational::from_integer(BigInt::from(slot.q).pow(shift)));
    let mut k = 0i64;
    let limit = 4096 * slot.e as i64;
    while reduce_direct(&y, slot) == 0 {
        y = y.checked_div(&pi)?;
        k += 1;
        if k > limit {
            return Err(LocalFieldError::PrecisionExhausted);
        }
    }
    Ok(k - (shift * slot.e) as i64)
}

/// Image of x in the residue field of the slot.
pub fn reduce_element(x: &NfElem, slot: &PrimeSlot) -> Result<Fe, LocalFieldError> {
    if x.field() != slot.field {
        return Err(NumFieldError::FieldMismatch(x.field(), slot.field).into());
    }
    if is_index_slot(slot) {
        if padic_valuation(x, slot)? < 0 {
            return Err(LocalFieldError::NegativeValuation);
        }
        return reduce_index_slot(x, slot);
    }
    if coeffs_q_integral(x, slot.q) {
        return Ok(reduce_direct(x, slot));
    }
    if padic_valuation(x, slot)? < 0 {
        return Err(LocalFieldError::NegativeValuation);
    }
    if slot.count_above_q == 1 {
        // integral at the only prime above q with q ∤ index means q-integral coefficients
        unreachable!("integral element at the unique prime above q with q in a denominator");
    }
    // split unramified slot: compute in Z/q^N[t]/(lifted factor) and divide out q^k
    let (p, d) = numerator_poly(x);
    let k = arith::v_p(&d, slot.q).unwrap();
    let qk = BigInt::from(slot.q).pow(k);
    let rest = &d / &qk;
    let ctx = PadicContext::get(slot, (2 * k + 24).next_power_of_two());
    let img = ctx.image(&p);
    let qb = BigInt::from(slot.q);
    let mut red: FpPoly = img
        .iter()
        .map(|c| {
            let (qt, r) = c.div_rem(&qk);
            debug_assert!(r.is_zero());
            arith::bigint_mod(&qt.mod_floor(&qb), slot.q)
        })
        .collect();
    fp::trim(&mut red);
    let inv = arith::invmod(arith::bigint_mod(&rest, slot.q), slot.q).expect("denominator not prime to q");
    let k_field = slot.residue_field();
    Ok(k_field.encode(&fp::scale(&red, inv, slot.q)))
}

/// Image of a rational number in F_q (denominator prime to q).
pub fn reduce_rational(r: &num_rational::BigRational, q: u64) -> Result<u64, LocalFieldError> {
    arith::rat_mod(r, q).ok_or(LocalFieldError::NegativeValuation)
}

/// Whether x is a unit at the slot.
pub fn is_unit_at(x: &NfElem, slot: &PrimeSlot) -> Result<bool, LocalFieldError> {
    Ok(padic_valuation(x, slot)? == 0)
}

/// Self-check of the registered ramified slots: v(q) = e and v(π) = 1 via norms.
pub fn verify_registered_slots() -> bool {
    let mut ok = true;
    for (field, q) in [(FieldId::Qsqrt5, 5u64), (FieldId::Qsqrt13, 13), (FieldId::CubicK, 13)] {
        let s = &prime_split(field, q).unwrap()[0];
        let pi = uniformizer(s);
        let vq = padic_valuation(&NfElem::from_int(field, q), s).unwrap();
        let npi = pi.norm();
        ok &= vq == s.e as i64;
        ok &= arith::v_p_rat(&npi, q) == Some(1);
        ok &= fp::factor(&fp::reduce(&field.spec().defining_poly, q), q) == vec![(s.factor.clone(), s.e)];
        ok &= !npi.is_zero() && !npi.is_one();
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn split_examples() {
        let s = prime_split(FieldId::Qsqrt5, 3).unwrap();
        assert_eq!((s.len(), s[0].e, s[0].f), (1, 1, 2));
        let s = prime_split(FieldId::Qsqrt13, 3).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].factor, vec![1, 1]);
        let wp1 = NfElem::from_ints(FieldId::Qsqrt13, &[1, 1]);
        assert!(padic_valuation(&wp1, &s[0]).unwrap() >= 1);
        let wm1 = NfElem::from_ints(FieldId::Qsqrt13, &[-1, 1]);
        assert_eq!(padic_valuation(&wm1, &s[0]).unwrap(), 0);
        let s = prime_split(FieldId::CubicK, 7).unwrap();
        assert_eq!((s.len(), s[0].f), (1, 3));
        let s = prime_split(FieldId::Qsqrt13, 2).unwrap();
        assert_eq!((s.len(), s[0].e, s[0].f, s[0].norm()), (1, 1, 2, 4));
        assert!(matches!(prime_split(FieldId::Q, 9), Err(LocalFieldError::NotPrime { .. })));
    }

    #[test]
    fn reduction_examples() {
        let s = &prime_split(FieldId::Qsqrt5, 3).unwrap()[0];
        assert_eq!(reduce_element(&NfElem::generator(FieldId::Qsqrt5), s).unwrap(), 3); // the class of t
        let s1 = &prime_split(FieldId::Qsqrt13, 3).unwrap()[0];
        assert_eq!(reduce_element(&NfElem::generator(FieldId::Qsqrt13), s1).unwrap(), 2);
        let half = NfElem::from_rational(FieldId::Qsqrt13, BigRational::new(1.into(), 2.into()));
        assert_eq!(reduce_element(&half, s1).unwrap(), 2);
        // (w + 1)/3 is integral at the first prime above 3 only
        let x = NfElem::from_ints(FieldId::Qsqrt13, &[1, 1]).scale(&BigRational::new(1.into(), 3.into()));
        let s2 = &prime_split(FieldId::Qsqrt13, 3).unwrap()[1];
        assert_eq!(reduce_element(&x, s2), Err(LocalFieldError::NegativeValuation));
        let r = reduce_element(&x, s1).unwrap();
        // (w+1)/3 · 3 = w + 1 and (w+1)/3 · (w-1) = 4: the residue r satisfies r·(w−1) ≡ 4
        let k = s1.residue_field();
        assert_eq!(k.mul(r, reduce_element(&wm1(), s1).unwrap()), 1);
    }

    #[test]
    fn inert_two_in_qsqrt13() {
        let s = &prime_split(FieldId::Qsqrt13, 2).unwrap()[0];
        let k = s.residue_field();
        // θ = (1 + w)/2 satisfies θ² − θ − 3 = 0, so its image is a root of t² + t + 1
        let theta = NfElem::from_ints(FieldId::Qsqrt13, &[1, 1]).scale(&BigRational::new(1.into(), 2.into()));
        let t = reduce_element(&theta, s).unwrap();
        assert_eq!(k.add(k.add(k.mul(t, t), t), 1), 0);
        assert_ne!(t, 0);
        assert_ne!(t, 1);
        assert_eq!(reduce_element(&NfElem::generator(FieldId::Qsqrt13), s).unwrap(), 1);
        assert_eq!(padic_valuation(&NfElem::from_ints(FieldId::Qsqrt13, &[2, 1]), s).unwrap(), 0);
        assert_eq!(padic_valuation(&NfElem::from_ints(FieldId::Qsqrt13, &[1, 1]), s).unwrap(), 1);
        assert_eq!(reduce_element(&NfElem::from_ints(FieldId::Qsqrt13, &[1, 1]).scale(&BigRational::new(1.into(), 4.into())), s), Err(LocalFieldError::NegativeValuation));
    }

    fn wm1() -> NfElem {
        NfElem::from_ints(FieldId::Qsqrt13, &[-1, 1])
    }

    #[test]
    fn ramified_valuations() {
        let s = &prime_split(FieldId::CubicK, 13).unwrap()[0];
        assert_eq!(padic_valuation(&NfElem::from_int(FieldId::CubicK, 13), s).unwrap(), 3);
        let s = &prime_split(FieldId::Qsqrt13, 13).unwrap()[0];
        assert_eq!(padic_valuation(&NfElem::generator(FieldId::Qsqrt13), s).unwrap(), 1);
        let s = &prime_split(FieldId::Qsqrt5, 5).unwrap()[0];
        let sqrt5 = NfElem::from_ints(FieldId::Qsqrt5, &[-1, 2]);
        assert_eq!(padic_valuation(&sqrt5.pow(-3).unwrap(), s).unwrap(), -3);
        assert!(verify_registered_slots());
    }
}
