//! Homogeneous binary forms Σ c_i x^{n-i} y^i with number-field coefficients.

use super::{FieldId, NfElem, NumFieldError};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryForm {
    field: FieldId,
    /// coeffs[i] multiplies x^{n-i} y^i, n = coeffs.len() - 1.
    coeffs: Vec<NfElem>,
}

impl BinaryForm {
    pub fn new(field: FieldId, coeffs: Vec<NfElem>) -> Self {
        assert!(!coeffs.is_empty());
        assert!(coeffs.iter().all(|c| c.field() == field));
        BinaryForm { field, coeffs }
    }

    pub fn from_ints(field: FieldId, c: &[i64]) -> Self {
        Self::new(field, c.iter().map(|&v| NfElem::from_int(field, v)).collect())
    }

    /// The constant form c (degree 0).
    pub fn constant(c: NfElem) -> Self {
        BinaryForm { field: c.field(), coeffs: vec![c] }
    }

    /// x^2 + t·xy + y^2.
    pub fn quadratic(t: &NfElem) -> Self {
        let f = t.field();
        Self::new(f, vec![NfElem::one(f), t.clone(), NfElem::one(f)])
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[NfElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree(), o.degree(), "adding forms of different degree");
        Self::new(self.field, self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.degree(), o.degree(), "subtracting forms of different degree");
        Self::new(self.field, self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = vec![NfElem::zero(self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(self.field, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(NfElem::one(self.field));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &NfElem) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_int(&self, n: i64) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|a| a.scale_int(n)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|a| -a).collect())
    }

    /// Applies a coefficient map that may change the field (descent, embedding).
    pub fn try_map(&self, f: impl Fn(&NfElem) -> Result<NfElem, NumFieldError>) -> Result<Self, NumFieldError> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        let field = coeffs[0].field();
        Ok(Self::new(field, coeffs))
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> NfElem {
        let n = self.degree();
        let mut xs = vec![BigRational::from_integer(1.into()); n + 1];
        let mut ys = xs.clone();
        let xr = BigRational::from_integer(x.clone());
        let yr = BigRational::from_integer(y.clone());
        for i in 1..=n {
            xs[i] = &xs[i - 1] * &xr;
            ys[i] = &ys[i - 1] * &yr;
        }
        let mut acc = NfElem::zero(self.field);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc + c.scale(&(&xs[n - i] * &ys[i]));
        }
        acc
    }

    pub fn eval_i64(&self, x: i64, y: i64) -> NfElem {
        self.eval(&BigInt::from(x), &BigInt::from(y))
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mon = match (n - i, i) {
                (0, 0) => String::new(),
                (a, 0) => if a == 1 { "x".into() } else { format!("x^{a}") },
                (0, b) => if b == 1 { "y".into() } else { format!("y^{b}") },
                (a, b) => format!(
                    "{}{}",
                    if a == 1 { "x".to_string() } else { format!("x^{a}") },
                    if b == 1 { "y".to_string() } else { format!("y^{b}") }
                ),
            };
            parts.push(if mon.is_empty() { format!("({c})") } else { format!("({c})*{mon}") });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
