//! Tate's algorithm over Q for integral models.

use super::EllCurveError;
use crate::arith::{self, fp};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kodaira {
    I0,
    I(u32),
    II,
    III,
    IV,
    I0Star,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => write!(f, "I0"),
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::I0Star => write!(f, "I0*"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalData {
    pub p: u64,
    pub kodaira: Kodaira,
    pub conductor_exponent: u32,
    pub tamagawa: u32,
    pub disc_valuation: u32,
    /// Present for multiplicative reduction.
    pub split: Option<bool>,
    #[serde(skip)]
    pub minimal_model: [BigInt; 5],
}

type Ainvs = [BigInt; 5];

pub fn rst(a: &Ainvs, r: &BigInt, s: &BigInt, t: &BigInt) -> Ainvs {
    let [a1, a2, a3, a4, a6] = a;
    [
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
    ]
}

/// (b2, b4, b6, b8, c4, c6, Δ) of an integral model.
pub fn int_invariants(a: &Ainvs) -> [BigInt; 7] {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - 24 * &b4;
    let c6 = BigInt::from(36) * &b2 * &b4 - &b2 * &b2 * &b2 - 216 * &b6;
    let d = BigInt::from(9) * &b2 * &b4 * &b6 - &b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6;
    [b2, b4, b6, b8, c4, c6, d]
}

struct Ctx {
    p: u64,
    pb: BigInt,
}

impl Ctx {
    fn val(&self, x: &BigInt) -> u32 {
        arith::v_p(x, self.p).unwrap_or(u32::MAX)
    }
    fn divides(&self, x: &BigInt) -> bool {
        self.res(x) == 0
    }
    fn res(&self, x: &BigInt) -> u64 {
        arith::bigint_mod(x, self.p)
    }
    fn inv(&self, x: &BigInt) -> BigInt {
        BigInt::from(arith::invmod(self.res(x), self.p).expect("unit expected"))
    }
    /// Residue lifted to [0, p).
    fn lift(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.pb)
    }
    fn pk(&self, k: u32) -> BigInt {
        self.pb.pow(k)
    }
    fn exact(&self, x: &BigInt, d: &BigInt) -> BigInt {
        let (q, r) = x.div_rem(d);
        assert!(r.is_zero(), "inexact division in Tate's algorithm");
        q
    }
    /// Whether a x² + b x + c has a root mod p.
    fn quad_roots(&self, a: &BigInt, b: &BigInt, c: &BigInt) -> bool {
        let (a, b, c) = (self.res(a), self.res(b), self.res(c));
        if a == 0 {
            return b != 0 || c == 0;
        }
        if self.p == 2 {
            return (0..2).any(|x| (a * x * x + b * x + c) % 2 == 0);
        }
        let disc = (BigInt::from(b) * b - BigInt::from(4u64) * a * c).mod_floor(&self.pb);
        arith::legendre_big(&disc, self.p) >= 0
    }
    fn cubic_roots(&self, b: &BigInt, c: &BigInt, d: &BigInt) -> u32 {
        let poly = vec![self.res(d), self.res(c), self.res(b), 1];
        fp::count_roots(&poly, self.p) as u32
    }
}

/// Tate's algorithm at p for an integral model over Q.
pub fn tate(ainvs: &Ainvs, p: u64) -> Result<LocalData, EllCurveError> {
    if !arith::is_prime(p) {
        return Err(EllCurveError::Local(crate::localfield::LocalFieldError::NotPrime { q: p }));
    }
    let cx = Ctx { p, pb: BigInt::from(p) };
    let (pi, pi2, pi3, pi4) = (cx.pk(1), cx.pk(2), cx.pk(3), cx.pk(4));
    let zero = BigInt::zero();
    let half = if p == 2 { BigInt::zero() } else { cx.inv(&BigInt::from(2)) };
    let mut a = ainvs.clone();
    loop {
        let [b2, b4, b6, _, c4, c6, d] = int_invariants(&a);
        if d.is_zero() {
            return Err(EllCurveError::SingularModel);
        }
        let vd = cx.val(&d);
        let done = |kod, f, c, split, a: Ainvs| {
            Ok(LocalData {
                p,
                kodaira: kod,
                conductor_exponent: f,
                tamagawa: c,
                disc_valuation: vd,
                split,
                minimal_model: a,
            })
        };
        if vd == 0 {
            return done(Kodaira::I0, 0, 1, None, a);
        }
        // move the singular point to (0, 0)
        let (r, t) = if p == 2 {
            if cx.divides(&b2) {
                let r = a[3].clone();
                let t = ((&r + &a[1]) * &r + &a[3]) * &r + &a[4];
                (r, t)
            } else {
                let tmp = cx.inv(&a[0]);
                let r = &tmp * &a[2];
                let t = &tmp * (&a[3] + &r * &r);
                (r, t)
            }
        } else if p == 3 {
            let r = if cx.divides(&b2) { -&b6 } else { -cx.inv(&b2) * &b4 };
            let t = &a[0] * &r + &a[2];
            (r, t)
        } else {
            let r = if cx.divides(&c4) {
                -cx.inv(&BigInt::from(12)) * &b2
            } else {
                -cx.inv(&(BigInt::from(12) * &c4)) * (&c6 + &b2 * &c4)
            };
            let t = -&half * (&a[0] * &r + &a[2]);
            (r, t)
        };
        a = rst(&a, &cx.lift(&r), &zero, &cx.lift(&t));
        let [b2, _, b6, b8, ..] = int_invariants(&a);
        if !cx.divides(&b2) {
            let split = cx.quad_roots(&BigInt::one(), &a[0], &-&a[1]);
            let c = if split { vd } else if vd % 2 == 0 { 2 } else { 1 };
            return done(Kodaira::I(vd), 1, c, Some(split), a);
        }
        if cx.val(&a[4]) < 2 {
            return done(Kodaira::II, vd, 1, None, a);
        }
        if cx.val(&b8) < 3 {
            return done(Kodaira::III, vd - 1, 2, None, a);
        }
        if cx.val(&b6) < 3 {
            let c = if cx.quad_roots(&BigInt::one(), &cx.exact(&a[2], &pi), &-cx.exact(&a[4], &pi2)) { 3 } else { 1 };
            return done(Kodaira::IV, vd - 2, c, None, a);
        }
        // p | a1, a2; p² | a3, a4; p³ | a6
        let (s, t) = if p == 2 {
            (cx.lift(&a[1]), &pi * cx.lift(&cx.exact(&a[4], &pi2)))
        } else if p == 3 {
            // unreduced: a3 + 2t must vanish mod p², not only mod p
            (a[0].clone(), a[2].clone())
        } else {
            (-&a[0] * &half, -&a[2] * &half)
        };
        a = rst(&a, &zero, &s, &t);
        let b = cx.exact(&a[1], &pi);
        let c = cx.exact(&a[3], &pi2);
        let dd = cx.exact(&a[4], &pi3);
        let w = 27 * &dd * &dd - &b * &b * &c * &c + 4 * &b * &b * &b * &dd - 18 * &b * &c * &dd + 4 * &c * &c * &c;
        let x = 3 * &c - &b * &b;
        if !cx.divides(&w) {
            let cp = 1 + cx.cubic_roots(&b, &c, &dd);
            return done(Kodaira::I0Star, vd - 4, cp, None, a);
        }
        if !cx.divides(&x) {
            // double root moved to 0
            let r = if p == 2 {
                c.clone()
            } else if p == 3 {
                &b * &c
            } else {
                (&b * &c - 9 * &dd) * cx.inv(&(2 * &x))
            };
            a = rst(&a, &(&pi * cx.lift(&r)), &zero, &zero);
            let (mut ix, mut iy) = (3u32, 3u32);
            let (mut mx, mut my) = (pi2.clone(), pi2.clone());
            let cp;
            loop {
                let a3t = cx.exact(&a[2], &my);
                let a6t = cx.exact(&a[4], &(&mx * &my));
                if cx.divides(&(&a3t * &a3t + 4 * &a6t)) {
                    let t = if p == 2 { &my * cx.lift(&a6t) } else { &my * cx.lift(&(-&a3t * &half)) };
                    a = rst(&a, &zero, &zero, &t);
                    my = &my * &pi;
                    iy += 1;
                    let a2t = cx.exact(&a[1], &pi);
                    let a4t = cx.exact(&a[3], &(&pi * &mx));
                    let a6t = cx.exact(&a[4], &(&mx * &my));
                    if cx.divides(&(&a4t * &a4t - 4 * &a6t * &a2t)) {
                        let r = if p == 2 {
                            &mx * cx.lift(&(&a6t * cx.inv(&a2t)))
                        } else {
                            &mx * cx.lift(&(-&a4t * cx.inv(&(2 * &a2t))))
                        };
                        a = rst(&a, &r, &zero, &zero);
                        mx = &mx * &pi;
                        ix += 1;
                    } else {
                        cp = if cx.quad_roots(&a2t, &a4t, &a6t) { 4 } else { 2 };
                        break;
                    }
                } else {
                    cp = if cx.quad_roots(&BigInt::one(), &a3t, &-&a6t) { 4 } else { 2 };
                    break;
                }
            }
            return done(Kodaira::IStar(ix + iy - 5), vd - ix - iy + 1, cp, None, a);
        }
        // triple root moved to 0
        let r = if p == 2 {
            b.clone()
        } else if p == 3 {
            -&dd
        } else {
            -&b * cx.inv(&BigInt::from(3))
        };
        a = rst(&a, &(&pi * cx.lift(&r)), &zero, &zero);
        let a3t = cx.exact(&a[2], &pi2);
        let a6t = cx.exact(&a[4], &pi4);
        if !cx.divides(&(&a3t * &a3t + 4 * &a6t)) {
            let cp = if cx.quad_roots(&BigInt::one(), &a3t, &-&a6t) { 3 } else { 1 };
            return done(Kodaira::IVStar, vd - 6, cp, None, a);
        }
        let t = if p == 2 { -&pi2 * cx.lift(&a6t) } else { &pi2 * cx.lift(&(-&a3t * &half)) };
        a = rst(&a, &zero, &zero, &t);
        if cx.val(&a[3]) < 4 {
            return done(Kodaira::IIIStar, vd - 7, 2, None, a);
        }
        if cx.val(&a[4]) < 6 {
            return done(Kodaira::IIStar, vd - 8, 1, None, a);
        }
        // not minimal: scale by p
        a = [
            cx.exact(&a[0], &pi),
            cx.exact(&a[1], &pi2),
            cx.exact(&a[2], &pi3),
            cx.exact(&a[3], &pi4),
            cx.exact(&a[4], &cx.pk(6)),
        ];
    }
}

/// Conductor over Q with the local data at every bad prime, and a global minimal model.
pub fn rational_conductor(ainvs: &Ainvs) -> Result<(BigInt, Vec<LocalData>, Ainvs), EllCurveError> {
    let d = int_invariants(ainvs)[6].clone();
    if d.is_zero() {
        return Err(EllCurveError::SingularModel);
    }
    let mut n = BigInt::one();
    let mut out = Vec::new();
    let mut model = ainvs.clone();
    for (p, _) in arith::factor(&d) {
        let p: u64 = p.try_into().expect("bad prime beyond 64 bits");
        let ld = tate(&model, p)?;
        model = ld.minimal_model.clone();
        if ld.conductor_exponent > 0 {
            n *= BigInt::from(p).pow(ld.conductor_exponent);
            out.push(ld);
        }
    }
    Ok((n, out, model))
}
