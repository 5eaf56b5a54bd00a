//! Dense polynomials over Q, lowest degree first.
//!
//! The zero polynomial is the empty vector; every other value is trimmed so
//! the last entry is nonzero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type QPoly = Vec<BigRational>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn from_ints(c: &[i64]) -> QPoly {
    let mut p: QPoly = c.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    trim(&mut p);
    p
}

pub fn degree(p: &QPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn add(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out.push(x + y);
    }
    trim(&mut out);
    out
}

pub fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out.push(x - y);
    }
    trim(&mut out);
    out
}

pub fn scale(a: &QPoly, c: &BigRational) -> QPoly {
    let mut out: QPoly = a.iter().map(|x| x * c).collect();
    trim(&mut out);
    out
}

pub fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder. Panics when `b` is zero.
pub fn divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = degree(b).expect("polynomial division by zero");
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lc = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &lc;
        for (i, bi) in b.iter().enumerate() {
            let t = &c * bi;
            r[k + i] -= t;
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    divrem(a, b).1
}

pub fn make_monic(a: &QPoly) -> QPoly {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = lc.recip();
            scale(a, &inv)
        }
    }
}

/// Returns (g, s, t) with s·a + t·b = g and g monic (or zero when both inputs are zero).
pub fn ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![BigRational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if let Some(lc) = r0.last().cloned() {
        let inv = lc.recip();
        (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
    } else {
        (r0, s0, t0)
    }
}

/// Resultant res(a, b) by the Euclidean recurrence.
pub fn resultant(a: &QPoly, b: &QPoly) -> BigRational {
    let (Some(m), Some(n)) = (degree(a), degree(b)) else {
        return BigRational::zero();
    };
    if n == 0 {
        return pow(&b[0], m);
    }
    if m == 0 {
        return pow(&a[0], n);
    }
    let r = rem(a, b);
    let Some(k) = degree(&r) else {
        return BigRational::zero();
    };
    let sign = if (m * n) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
    sign * pow(&b[n], m - k) * resultant(b, &r)
}

pub fn pow(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

pub fn eval(p: &QPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &QPoly) -> QPoly {
    let mut out: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut out);
    out
}

/// Solves M·c = v for a possibly overdetermined system given by its columns.
/// Returns None when the system is inconsistent or the columns are dependent.
pub fn solve_columns(cols: &[Vec<BigRational>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = v.len();
    let ncols = cols.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(ncols);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            return None;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| m[i][ncols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn divrem_reconstructs() {
        let a = from_ints(&[1, 2, 3, 4, 5]);
        let b = from_ints(&[-1, 0, 2]);
        let (qq, r) = divrem(&a, &b);
        assert_eq!(add(&mul(&qq, &b), &r), a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn resultant_of_linear_factors() {
        // res(x - 2, x^2 - 13) = (2^2 - 13)
        let a = from_ints(&[-2, 1]);
        let b = from_ints(&[-13, 0, 1]);
        assert_eq!(resultant(&a, &b), q(-9));
        assert_eq!(resultant(&b, &a), q(-9));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = from_ints(&[-1, -1, 1]);
        let b = from_ints(&[3, 2]);
        let (g, s, t) = ext_gcd(&a, &b);
        assert_eq!(g, from_ints(&[1]));
        assert_eq!(add(&mul(&s, &a), &mul(&t, &b)), g);
    }

    #[test]
    fn solve_rejects_inconsistent() {
        let cols = vec![vec![q(1), q(0), q(0)]];
        assert_eq!(solve_columns(&cols, &[q(3), q(0), q(0)]), Some(vec![q(3)]));
        assert_eq!(solve_columns(&cols, &[q(3), q(1), q(0)]), None);
    }
}
