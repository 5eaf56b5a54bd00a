use super::EllCurveError;
use crate::arith;
use crate::numfield::{FieldId, NfElem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 over a registered field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeierstrassModel {
    pub field: FieldId,
    pub a: [NfElem; 5],
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantSet {
    pub b2: NfElem,
    pub b4: NfElem,
    pub b6: NfElem,
    pub b8: NfElem,
    pub c4: NfElem,
    pub c6: NfElem,
    pub disc: NfElem,
    pub j: NfElem,
}

/// b- and c-invariants and Δ by the standard formulary, without the Δ ≠ 0 check.
pub(crate) fn raw_invariants(a: &[NfElem; 5]) -> (NfElem, NfElem, NfElem, NfElem, NfElem, NfElem, NfElem) {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + a2.scale_int(4);
    let b4 = a4.scale_int(2) + a1 * a3;
    let b6 = a3 * a3 + a6.scale_int(4);
    let b8 = &(a1 * a1) * a6 + (a2 * a6).scale_int(4) - &(a1 * a3) * a4 + a2 * &(a3 * a3) - a4 * a4;
    let c4 = &b2 * &b2 - b4.scale_int(24);
    let c6 = -(&(&b2 * &b2) * &b2) + (&b2 * &b4).scale_int(36) - b6.scale_int(216);
    let disc = -(&(&b2 * &b2) * &b8) - (&(&b4 * &b4) * &b4).scale_int(8) - (&b6 * &b6).scale_int(27)
        + (&(&b2 * &b4) * &b6).scale_int(9);
    (b2, b4, b6, b8, c4, c6, disc)
}

impl WeierstrassModel {
    pub fn new(a: [NfElem; 5]) -> Result<Self, EllCurveError> {
        let field = a[0].field();
        assert!(a.iter().all(|x| x.field() == field), "a-invariants from different fields");
        let m = WeierstrassModel { field, a };
        m.invariants()?;
        Ok(m)
    }

    pub fn from_ints(field: FieldId, a: [i64; 5]) -> Result<Self, EllCurveError> {
        Self::new(a.map(|c| NfElem::from_int(field, c)))
    }

    pub fn from_bigints(a: &[BigInt; 5]) -> Result<Self, EllCurveError> {
        Self::new(a.clone().map(|c| NfElem::from_int(FieldId::Q, c)))
    }

    /// y² = x³ + a4·x + a6.
    pub fn short(a4: NfElem, a6: NfElem) -> Result<Self, EllCurveError> {
        let f = a4.field();
        Self::new([NfElem::zero(f), NfElem::zero(f), NfElem::zero(f), a4, a6])
    }

    pub fn a1(&self) -> &NfElem {
        &self.a[0]
    }
    pub fn a2(&self) -> &NfElem {
        &self.a[1]
    }
    pub fn a3(&self) -> &NfElem {
        &self.a[2]
    }
    pub fn a4(&self) -> &NfElem {
        &self.a[3]
    }
    pub fn a6(&self) -> &NfElem {
        &self.a[4]
    }

    pub fn invariants(&self) -> Result<InvariantSet, EllCurveError> {
        let (b2, b4, b6, b8, c4, c6, disc) = raw_invariants(&self.a);
        if disc.is_zero() {
            return Err(EllCurveError::SingularModel);
        }
        let c4c = &(&c4 * &c4) * &c4;
        assert_eq!(&c4c - &(&c6 * &c6), disc.scale_int(1728), "c4^3 - c6^2 != 1728 disc");
        assert_eq!(b8.scale_int(4), &b2 * &b6 - &b4 * &b4, "4 b8 != b2 b6 - b4^2");
        let j = c4c.checked_div(&disc).unwrap();
        Ok(InvariantSet { b2, b4, b6, b8, c4, c6, disc, j })
    }

    /// The change of variables x = u²x' + r, y = u³y' + su²x' + t.
    pub fn transform(&self, u: &NfElem, r: &NfElem, s: &NfElem, t: &NfElem) -> WeierstrassModel {
        let [a1, a2, a3, a4, a6] = &self.a;
        let ui = u.inverse().expect("u must be nonzero");
        let u2 = &ui * &ui;
        let u3 = &u2 * &ui;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        let rr = r * r;
        let n1 = a1 + &s.scale_int(2);
        let n2 = a2 - &(s * a1) + r.scale_int(3) - s * s;
        let n3 = a3 + &(r * a1) + t.scale_int(2);
        let n4 = a4 - &(s * a3) + (r * a2).scale_int(2) - &(t + &(r * s)) * a1 + rr.scale_int(3) - (s * t).scale_int(2);
        let n6 = a6 + &(r * a4) + &rr * a2 + &rr * r - t * a3 - t * t - &(r * t) * a1;
        WeierstrassModel {
            field: self.field,
            a: [&n1 * &ui, &n2 * &u2, &n3 * &u3, &n4 * &u4, &n6 * &u6],
        }
    }

    /// y² = x³ + (b2/4)x² + (b4/2)x + b6/4, isomorphic over any field of characteristic ≠ 2.
    pub fn completed_square(&self) -> WeierstrassModel {
        let (b2, b4, b6, ..) = raw_invariants(&self.a);
        let f = self.field;
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        WeierstrassModel {
            field: f,
            a: [NfElem::zero(f), b2.scale(&q(1, 4)), NfElem::zero(f), b4.scale(&q(1, 2)), b6.scale(&q(1, 4))],
        }
    }

    /// Integer a-invariants when the model is over Q and integral.
    pub fn integral_ainvs_q(&self) -> Option<[BigInt; 5]> {
        if self.field != FieldId::Q {
            return None;
        }
        let mut out: [BigInt; 5] = Default::default();
        for (o, x) in out.iter_mut().zip(&self.a) {
            let r = &x.coeffs()[0];
            if !r.is_integer() {
                return None;
            }
            *o = r.to_integer();
        }
        Some(out)
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The quadratic twist by a squarefree D: the completed-square model with
/// (a2, a4, a6) scaled by (D, D², D³).
pub fn quadratic_twist(model: &WeierstrassModel, d: i64) -> WeierstrassModel {
    assert!(d != 0, "twist by zero");
    let m = model.completed_square();
    let f = model.field;
    let dd = BigRational::from_integer(d.into());
    WeierstrassModel {
        field: f,
        a: [
            NfElem::zero(f),
            m.a[1].scale(&dd),
            NfElem::zero(f),
            m.a[3].scale(&(&dd * &dd)),
            m.a[4].scale(&(&dd * &dd * &dd)),
        ],
    }
}

/// Whether a model over Q has a rational point of order 2.
pub fn has_rational_two_torsion(model: &WeierstrassModel) -> Result<bool, EllCurveError> {
    if model.field != FieldId::Q {
        return Err(EllCurveError::NotOverQ);
    }
    let (b2, b4, b6, ..) = raw_invariants(&model.a);
    // 4x³ + b2x² + 2b4x + b6 = 0; with X = 4x: X³ + b2X² + 8b4X + 16b6 = 0
    let den = b2.denominator() * b4.denominator() * b6.denominator();
    let (b2, b4, b6) = (
        b2.coeffs()[0].clone() * BigRational::from_integer(den.clone()),
        b4.coeffs()[0].clone() * BigRational::from_integer(den.clone()),
        b6.coeffs()[0].clone() * BigRational::from_integer(den.clone()),
    );
    // scaling x by den keeps the root set rational: X³ + den·b2 X² + 8 den² b4 X + 16 den³ b6
    let c2 = b2.to_integer();
    let c1 = BigInt::from(8) * &den * b4.to_integer();
    let c0 = BigInt::from(16) * &den * &den * b6.to_integer();
    let cubic = |x: &BigInt| x * x * x + &c2 * x * x + &c1 * x + &c0;
    if c0.is_zero() {
        return Ok(true);
    }
    let mut divisors = vec![BigInt::one()];
    for (p, e) in arith::factor(&c0) {
        let p = BigInt::from(p);
        let mut next = Vec::new();
        for d in &divisors {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divisors = next;
    }
    Ok(divisors.iter().any(|d| cubic(d).is_zero() || cubic(&-d).is_zero()))
}
