use super::field::FieldId;
use super::poly::{self, QPoly};
use super::NumFieldError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact element of one of the registered fields, in the power basis of its generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NfElem {
    field: FieldId,
    coeffs: Vec<BigRational>,
}

impl NfElem {
    /// Builds an element from power-basis coefficients; longer inputs are reduced.
    pub fn new(field: FieldId, coeffs: Vec<BigRational>) -> Self {
        let n = field.degree();
        if coeffs.len() <= n {
            let mut coeffs = coeffs;
            coeffs.resize(n, BigRational::zero());
            return NfElem { field, coeffs };
        }
        let mut p = coeffs;
        poly::trim(&mut p);
        Self::from_poly(field, &p)
    }

    pub fn from_ints(field: FieldId, c: &[i64]) -> Self {
        Self::new(field, c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn from_poly(field: FieldId, p: &QPoly) -> Self {
        let mut c = reduce_mod(field, p.clone());
        c.resize(field.degree(), BigRational::zero());
        NfElem { field, coeffs: c }
    }

    pub fn from_rational(field: FieldId, r: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); field.degree()];
        c[0] = r;
        NfElem { field, coeffs: c }
    }

    pub fn from_int(field: FieldId, n: impl Into<BigInt>) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn zero(field: FieldId) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: FieldId) -> Self {
        Self::from_int(field, 1)
    }

    /// The power-basis generator (ω, w, z, ζ; 0 for Q, whose defining polynomial is x).
    pub fn generator(field: FieldId) -> Self {
        Self::from_poly(field, &poly::from_ints(&[0, 1]))
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> QPoly {
        let mut p = self.coeffs.clone();
        poly::trim(&mut p);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Some(r) when the element is the rational r.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    fn check(&self, other: &Self) -> Result<(), NumFieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(NumFieldError::FieldMismatch(self.field, other.field))
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, NumFieldError> {
        self.check(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Ok(NfElem { field: self.field, coeffs })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, NumFieldError> {
        self.check(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        Ok(NfElem { field: self.field, coeffs })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, NumFieldError> {
        self.check(o)?;
        let n = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut c = reduce_mod(self.field, prod);
        c.resize(n, BigRational::zero());
        Ok(NfElem { field: self.field, coeffs: c })
    }

    pub fn inverse(&self) -> Result<Self, NumFieldError> {
        if self.is_zero() {
            return Err(NumFieldError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.field, r.recip()));
        }
        let m = &self.field.spec().poly_q;
        let (g, s, _) = poly::ext_gcd(&self.to_poly(), m);
        debug_assert_eq!(g.len(), 1);
        Ok(Self::from_poly(self.field, &s))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, NumFieldError> {
        self.check(o)?;
        self.checked_mul(&o.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, NumFieldError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.field);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        NfElem { field: self.field, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&BigRational::from_integer(n.into()))
    }

    /// Field norm to Q, as the resultant res(m, g) of the defining polynomial and the representative.
    pub fn norm(&self) -> BigRational {
        if self.field == FieldId::Q {
            return self.coeffs[0].clone();
        }
        poly::resultant(&self.field.spec().poly_q, &self.to_poly())
    }

    /// Nontrivial automorphism of a quadratic field; the identity on Q.
    pub fn conjugate(&self) -> Result<Self, NumFieldError> {
        let c = &self.coeffs;
        match self.field {
            FieldId::Q => Ok(self.clone()),
            FieldId::Qsqrt5 => Ok(NfElem {
                field: self.field,
                coeffs: vec![&c[0] + &c[1], -&c[1]],
            }),
            FieldId::Qsqrt13 => Ok(NfElem {
                field: self.field,
                coeffs: vec![c[0].clone(), -&c[1]],
            }),
            f => Err(NumFieldError::UnsupportedField(f)),
        }
    }

    /// Numeric value under the complex embedding sending the generator to `root`.
    pub fn embed_complex(&self, root: (f64, f64)) -> (f64, f64) {
        let mut acc = (0.0f64, 0.0f64);
        for c in self.coeffs.iter().rev() {
            let cf = rat_to_f64(c);
            acc = (acc.0 * root.0 - acc.1 * root.1 + cf, acc.0 * root.1 + acc.1 * root.0);
        }
        acc
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Reduces a coefficient vector modulo the monic defining polynomial.
fn reduce_mod(field: FieldId, mut p: Vec<BigRational>) -> Vec<BigRational> {
    let spec = field.spec();
    let n = spec.degree;
    let m = &spec.defining_poly;
    while p.len() > n {
        let top = p.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let k = p.len() - n;
        for (i, &mi) in m[..n].iter().enumerate() {
            if mi != 0 {
                p[k + i] -= &top * BigRational::from_integer(mi.into());
            }
        }
    }
    p
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self)
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.field.generator_name();
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => g.to_string(),
                _ => format!("{g}^{i}"),
            };
            let mag = c.abs();
            let body = if mon.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mon
            } else {
                format!("{mag}*{mon}")
            };
            terms.push((c.is_negative(), body));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (k, (neg, body)) in terms.into_iter().enumerate() {
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&body);
        }
        f.write_str(&s)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&NfElem> for &NfElem {
            type Output = NfElem;
            fn $m(self, o: &NfElem) -> NfElem {
                self.$checked(o).expect("field mismatch in arithmetic")
            }
        }
        impl $tr<NfElem> for NfElem {
            type Output = NfElem;
            fn $m(self, o: NfElem) -> NfElem {
                (&self).$checked(&o).expect("field mismatch in arithmetic")
            }
        }
        impl $tr<&NfElem> for NfElem {
            type Output = NfElem;
            fn $m(self, o: &NfElem) -> NfElem {
                (&self).$checked(o).expect("field mismatch in arithmetic")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &NfElem {
    type Output = NfElem;
    fn neg(self) -> NfElem {
        NfElem { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for NfElem {
    type Output = NfElem;
    fn neg(self) -> NfElem {
        -&self
    }
}
