//! Polynomials over a prime field F_p, lowest degree first, trimmed.
//!
//! Factorization is squarefree decomposition, distinct-degree splitting and
//! equal-degree splitting with a fixed pseudo-random stream, so results are
//! deterministic. Factor lists come back in the slot ordering contract:
//! degree ascending, then coefficient tuple from the constant term upward.

use super::{invmod, mulmod};
use num_bigint::BigUint;
use num_traits::One;

pub type FpPoly = Vec<u64>;

fn addm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    addm(a, p - b % p, p)
}

pub fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn reduce(a: &[i64], p: u64) -> FpPoly {
    let mut out: FpPoly = a.iter().map(|&c| (c as i128).rem_euclid(p as i128) as u64).collect();
    trim(&mut out);
    out
}

pub fn degree(a: &FpPoly) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| addm(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p))
        .collect();
    trim(&mut out);
    out
}

pub fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| subm(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p))
        .collect();
    trim(&mut out);
    out
}

pub fn scale(a: &FpPoly, c: u64, p: u64) -> FpPoly {
    let mut out: FpPoly = a.iter().map(|&x| mulmod(x, c, p)).collect();
    trim(&mut out);
    out
}

pub fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulmod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

pub fn divrem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let inv = invmod(b[db], p).expect("leading coefficient not invertible");
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = mulmod(r[r.len() - 1], inv, p);
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[k + i] = subm(r[k + i], mulmod(c, bi, p), p);
            }
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => scale(a, invmod(lc, p).unwrap(), p),
    }
}

pub fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    monic(&x, p)
}

/// Returns (g, s, t) with s·a + t·b = g, g monic.
pub fn ext_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(&lc) => {
            let inv = invmod(lc, p).unwrap();
            (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
        }
    }
}

pub fn derivative(a: &FpPoly, p: u64) -> FpPoly {
    let mut out: FpPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, i as u64 % p, p))
        .collect();
    trim(&mut out);
    out
}

/// base^e mod m.
pub fn powmod(base: &FpPoly, e: &BigUint, m: &FpPoly, p: u64) -> FpPoly {
    let mut result: FpPoly = rem(&vec![1], m, p);
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        result = rem(&mul(&result, &result, p), m, p);
        if e.bit(i) {
            result = rem(&mul(&result, &b, p), m, p);
        }
    }
    result
}

pub fn eval(a: &FpPoly, x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in a.iter().rev() {
        acc = addm(mulmod(acc, x, p), c, p);
    }
    acc
}

/// Number of distinct roots in F_p.
pub fn count_roots(f: &FpPoly, p: u64) -> usize {
    let f = monic(f, p);
    if degree(&f).unwrap_or(0) == 0 {
        return 0;
    }
    let x: FpPoly = vec![0, 1];
    let xp = powmod(&x, &BigUint::from(p), &f, p);
    let g = gcd(&sub(&xp, &x, p), &f, p);
    degree(&g).unwrap_or(0)
}

fn sqf_decompose(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    let mut out = Vec::new();
    let df = derivative(f, p);
    let mut c = gcd(f, &df, p);
    let mut w = divrem(f, &c, p).0;
    let mut i = 1u32;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &c, p);
        let fac = divrem(&w, &y, p).0;
        if degree(&fac).unwrap_or(0) > 0 {
            out.push((monic(&fac, p), i));
        }
        w = y;
        c = divrem(&c, &w, p).0;
        i += 1;
    }
    if degree(&c).unwrap_or(0) > 0 {
        // c is a p-th power: take the p-th root coefficientwise (Frobenius is the identity on F_p)
        let root: FpPoly = c.iter().step_by(p as usize).copied().collect();
        for (g, m) in sqf_decompose(&root, p) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn distinct_degree(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: FpPoly = vec![0, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 1;
    while degree(&f).unwrap_or(0) >= 2 * d {
        h = powmod(&h, &pe, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if degree(&g).unwrap_or(0) > 0 {
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
            out.push((g, d));
        }
        d += 1;
    }
    if degree(&f).unwrap_or(0) > 0 {
        let n = degree(&f).unwrap();
        out.push((monic(&f, p), n));
    }
    out
}

struct Stream(u64);

impl Stream {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }
}

fn equal_degree(f: &FpPoly, d: usize, p: u64, rng: &mut Stream) -> Vec<FpPoly> {
    let n = degree(f).unwrap();
    if n == d {
        return vec![monic(f, p)];
    }
    loop {
        let a: FpPoly = {
            let mut a: FpPoly = (0..n).map(|_| rng.next() % p).collect();
            trim(&mut a);
            a
        };
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = rem(&mul(&t, &t, p), f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
            sub(&powmod(&a, &e, f, p), &vec![1], p)
        };
        let g = gcd(&b, f, p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&monic(&h, p), d, p, rng));
            return out;
        }
    }
}

/// Ordering contract for factor lists: degree, then coefficients from the constant term.
pub fn slot_order(a: &FpPoly, b: &FpPoly) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Complete factorization of a nonzero polynomial into monic irreducibles with multiplicity.
pub fn factor(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    assert!(!f.is_empty(), "factor of zero polynomial");
    let f = monic(f, p);
    let mut rng = Stream(0x9E37_79B9_7F4A_7C15 ^ p);
    let mut out = Vec::new();
    for (part, mult) in sqf_decompose(&f, p) {
        for (g, d) in distinct_degree(&part, p) {
            for h in equal_degree(&g, d, p, &mut rng) {
                out.push((h, mult));
            }
        }
    }
    out.sort_by(|x, y| slot_order(&x.0, &y.0));
    out
}

pub fn is_irreducible(f: &FpPoly, p: u64) -> bool {
    let fs = factor(f, p);
    fs.len() == 1 && fs[0].1 == 1
}

pub fn constant(c: u64, p: u64) -> FpPoly {
    let mut v = vec![c % p];
    trim(&mut v);
    v
}
