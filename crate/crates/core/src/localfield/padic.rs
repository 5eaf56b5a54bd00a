//! q-adic lifting: Newton lifting of simple roots and quadratic Hensel lifting
//! of a coprime factorization of the defining polynomial.

use super::{LocalFieldError, PrimeSlot};
use crate::arith::{self, fp};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub type ZPoly = Vec<BigInt>;

fn zmod(p: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out: ZPoly = p.iter().map(|c| c.mod_floor(m)).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Division by a monic polynomial modulo m.
fn zdivrem_monic(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let mut r = zmod(a, m);
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.pop().unwrap();
        for (i, bi) in b[..db].iter().enumerate() {
            r[k + i] = (&r[k + i] - &c * bi).mod_floor(m);
        }
        q[k] = c;
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    (zmod(&q, m), r)
}

fn to_z(p: &fp::FpPoly) -> ZPoly {
    p.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts a simple root of `poly` modulo q to a root modulo q^n.
pub fn hensel_lift(poly: &[i64], root_mod_q: u64, q: u64, n: u32) -> Result<BigInt, LocalFieldError> {
    let f: ZPoly = poly.iter().map(|&c| BigInt::from(c)).collect();
    let df: ZPoly = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let eval = |p: &ZPoly, x: &BigInt, m: &BigInt| -> BigInt {
        p.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
    };
    let qb = BigInt::from(q);
    let r0 = BigInt::from(root_mod_q % q);
    if !eval(&f, &r0, &qb).is_zero() || eval(&df, &r0, &qb).is_zero() {
        return Err(LocalFieldError::NotSimpleRoot);
    }
    let target = qb.pow(n);
    let mut r = r0;
    let mut prec = 1u32;
    while prec < n {
        prec = (2 * prec).min(n);
        let m = qb.pow(prec);
        let fv = eval(&f, &r, &m);
        let dv = eval(&df, &r, &m);
        let inv = dv.extended_gcd(&m).x.mod_floor(&m);
        r = (&r - fv * inv).mod_floor(&m);
    }
    r = r.mod_floor(&target);
    assert!(eval(&f, &r, &target).is_zero(), "hensel_lift postcondition");
    assert_eq!(arith::bigint_mod(&r, q), root_mod_q % q, "hensel_lift does not reduce to the root");
    Ok(r)
}

/// The slot's local factor lifted to Z/q^N, for e = 1 slots.
#[derive(Debug)]
pub struct PadicContext {
    pub slot: PrimeSlot,
    pub precision: u32,
    pub modulus: BigInt,
    pub lifted_factor: ZPoly,
}

impl PadicContext {
    pub fn get(slot: &PrimeSlot, precision: u32) -> Arc<PadicContext> {
        type Key = (crate::numfield::FieldId, u64, usize, u32);
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<PadicContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (slot.field, slot.q, slot.index, precision);
        if let Some(c) = cache.lock().unwrap().get(&key) {
            return c.clone();
        }
        let built = Arc::new(Self::build(slot, precision));
        cache.lock().unwrap().entry(key).or_insert(built).clone()
    }

    fn build(slot: &PrimeSlot, precision: u32) -> PadicContext {
        assert_eq!(slot.e, 1, "Hensel context needs an unramified slot");
        let q = slot.q;
        let m_int = &slot.field.spec().defining_poly;
        let m: ZPoly = m_int.iter().map(|&c| BigInt::from(c)).collect();
        let mq = fp::reduce(m_int, q);
        let h0 = slot.factor.clone();
        let (g0, r) = fp::divrem(&mq, &h0, q);
        assert!(r.is_empty());
        let (one, s0, t0) = fp::ext_gcd(&g0, &h0, q);
        assert_eq!(one, vec![1], "local factor is not coprime to its cofactor");
        let (mut g, mut h, mut s, mut t) = (to_z(&g0), to_z(&h0), to_z(&s0), to_z(&t0));
        let qb = BigInt::from(q);
        let mut k = 1u32;
        while k < precision {
            k *= 2;
            let m2 = qb.pow(k);
            // quadratic Hensel step: f ≡ g h, s g + t h ≡ 1, h monic
            let e = zmod(&zsub(&m, &zmul(&g, &h)), &m2);
            let (qq, rr) = zdivrem_monic(&zmul(&s, &e), &h, &m2);
            let g2 = zmod(&zadd(&zadd(&g, &zmul(&t, &e)), &zmul(&qq, &g)), &m2);
            let h2 = zmod(&zadd(&h, &rr), &m2);
            let b = zmod(&zsub(&zadd(&zmul(&s, &g2), &zmul(&t, &h2)), &vec![BigInt::one()]), &m2);
            let (c, d) = zdivrem_monic(&zmul(&s, &b), &h2, &m2);
            s = zmod(&zsub(&s, &d), &m2);
            t = zmod(&zsub(&zsub(&t, &zmul(&t, &b)), &zmul(&c, &g2)), &m2);
            g = g2;
            h = h2;
        }
        let modulus = qb.pow(k);
        debug_assert!(zmod(&zsub(&m, &zmul(&g, &h)), &modulus).is_empty());
        PadicContext { slot: slot.clone(), precision: k, modulus, lifted_factor: h }
    }

    /// Reduces an integer polynomial into Z/q^N[t]/(lifted factor).
    pub fn image(&self, p: &ZPoly) -> ZPoly {
        zdivrem_monic(p, &self.lifted_factor, &self.modulus).1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_examples() {
        assert_eq!(hensel_lift(&[-13, 0, 1], 1, 3, 2).unwrap(), BigInt::from(7));
        assert_eq!(hensel_lift(&[-13, 0, 1], 1, 3, 1).unwrap(), BigInt::from(1));
        assert_eq!(hensel_lift(&[-1, -1, 1], 0, 3, 4), Err(LocalFieldError::NotSimpleRoot));
        assert_eq!(hensel_lift(&[-1, -1, 1], 1, 3, 4), Err(LocalFieldError::NotSimpleRoot));
        let r = hensel_lift(&[-13, 0, 1], 2, 3, 40).unwrap();
        assert_eq!((&r * &r - 13) % BigInt::from(3).pow(40), BigInt::zero());
    }
}
