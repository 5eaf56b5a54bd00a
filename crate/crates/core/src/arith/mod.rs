//! Integer helpers shared by the arithmetic modules.

pub mod fp;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// p-adic valuation of a nonzero integer; None for zero.
pub fn v_p(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

pub fn v_p_i64(n: i64, p: u64) -> Option<u32> {
    v_p(&BigInt::from(n), p)
}

/// p-adic valuation of a nonzero rational; None for zero.
pub fn v_p_rat(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let a = v_p(r.numer(), p).unwrap() as i64;
    let b = v_p(r.denom(), p).unwrap() as i64;
    Some(a - b)
}

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    num_prime::nt_funcs::primes(n + 1)
        .into_iter()
        .filter(|&p| p <= n)
        .collect()
}

/// Prime factorization of |n| (n ≠ 0), ascending.
pub fn factor(n: &BigInt) -> Vec<(BigUint, u32)> {
    let m = n.magnitude().clone();
    if m.is_zero() {
        panic!("factor of zero");
    }
    if let Some(small) = m.to_u64() {
        return num_prime::nt_funcs::factorize64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e as u32))
            .collect();
    }
    let map: BTreeMap<BigUint, usize> = num_prime::nt_funcs::factorize(m);
    map.into_iter().map(|(p, e)| (p, e as u32)).collect()
}

/// Prime divisors of |n| (n ≠ 0) that fit in a u64.
pub fn prime_divisors_u64(n: &BigInt) -> Vec<u64> {
    factor(n).into_iter().filter_map(|(p, _)| p.to_u64()).collect()
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, m: u64) -> Option<u64> {
    let g = BigInt::from(a).extended_gcd(&BigInt::from(m));
    if !g.gcd.is_one() {
        return None;
    }
    let x = g.x.mod_floor(&BigInt::from(m));
    x.to_u64()
}

/// Reduces a rational with denominator prime to p into F_p.
pub fn rat_mod(r: &BigRational, p: u64) -> Option<u64> {
    let num = bigint_mod(r.numer(), p);
    let den = bigint_mod(r.denom(), p);
    let inv = invmod(den, p)?;
    Some(mulmod(num, inv, p))
}

pub fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Legendre-type symbol for odd p: 1, -1, or 0.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = (a as i128).rem_euclid(p as i128) as u64;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol of an arbitrary integer modulo an odd prime.
pub fn legendre_big(a: &BigInt, p: u64) -> i32 {
    let a = bigint_mod(a, p);
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Exact integer square root of a nonnegative integer.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub fn exact_sqrt_rat(r: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(exact_sqrt(r.numer())?, exact_sqrt(r.denom())?))
}

/// Signed integer written as ±p1^e1·p2^e2·…, for reports.
pub fn factored_string(n: &BigInt) -> String {
    if n.is_zero() {
        return "0".into();
    }
    let sign = if n.sign() == Sign::Minus { "-" } else { "" };
    if n.magnitude().is_one() {
        return format!("{sign}1");
    }
    let parts: Vec<String> = factor(n)
        .into_iter()
        .map(|(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect();
    format!("{sign}{}", parts.join("*"))
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}
