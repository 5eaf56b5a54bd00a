//! Exact arithmetic in Q, Q(√5), Q(√13), the cubic field K and Q(ζ13).

mod element;
mod field;
pub mod form;
pub mod poly;

pub use element::NfElem;
pub use field::{is_irreducible_over_q, FieldId, FieldSpec};
pub use form::BinaryForm;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumFieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldId, FieldId),
    #[error("operation not supported in {0}")]
    UnsupportedField(FieldId),
    #[error("element does not lie in the subfield {0}")]
    NotInSubfield(FieldId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn nf_arith(op: ArithOp, x: &NfElem, y: &NfElem) -> Result<NfElem, NumFieldError> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

pub fn nf_pow(x: &NfElem, e: i64) -> Result<NfElem, NumFieldError> {
    x.pow(e)
}

pub fn nf_norm(x: &NfElem) -> BigRational {
    x.norm()
}

pub fn nf_conjugate(x: &NfElem) -> Result<NfElem, NumFieldError> {
    x.conjugate()
}

pub fn nf_descend(x: &NfElem, target: FieldId) -> Result<NfElem, NumFieldError> {
    registry().descend(x, target)
}

pub fn nf_embed(x: &NfElem) -> NfElem {
    registry().embed(x)
}

/// Images of subfield generators inside Q(ζ13), with the descent systems.
pub struct EmbeddingRegistry {
    entries: Vec<(FieldId, NfElem, Vec<Vec<BigRational>>)>,
}

/// Quadratic residues mod 13.
pub const QR13: [u32; 6] = [1, 3, 4, 9, 10, 12];

pub fn zeta_power(k: i64) -> NfElem {
    let k = k.rem_euclid(13) as usize;
    let mut c = vec![BigRational::zero(); k + 1];
    c[k] = BigRational::from_integer(1.into());
    NfElem::from_poly(FieldId::Zeta13, &{
        let mut p = c;
        poly::trim(&mut p);
        p
    })
}

/// ζ^k + ζ^{-k}.
pub fn zeta_real(k: i64) -> NfElem {
    zeta_power(k) + zeta_power(-k)
}

/// The Gauss sum Σ_{QR} ζ^k − Σ_{NQR} ζ^k, a square root of 13.
pub fn gauss_sum_13() -> NfElem {
    let mut acc = NfElem::zero(FieldId::Zeta13);
    for k in 1..13 {
        let t = zeta_power(k);
        acc = if QR13.contains(&(k as u32)) { acc + t } else { acc - t };
    }
    acc
}

/// The Gaussian period ζ + ζ^5 + ζ^8 + ζ^12 over the order-4 subgroup ⟨5⟩.
pub fn gaussian_period_13() -> NfElem {
    [1, 5, 8, 12].iter().fold(NfElem::zero(FieldId::Zeta13), |acc, &k| acc + zeta_power(k))
}

pub fn registry() -> &'static EmbeddingRegistry {
    static REG: OnceLock<EmbeddingRegistry> = OnceLock::new();
    REG.get_or_init(|| {
        let w = gauss_sum_13();
        assert_eq!(&w * &w, NfElem::from_int(FieldId::Zeta13, 13), "embedded w does not square to 13");
        let z = gaussian_period_13();
        let zz = &z * &z;
        let check = &(&zz * &z) + &zz - z.scale_int(4) + NfElem::one(FieldId::Zeta13);
        assert!(check.is_zero(), "embedded z does not satisfy the cubic");
        let mut entries = Vec::new();
        for (id, g) in [(FieldId::Qsqrt13, w), (FieldId::CubicK, z)] {
            let mut cols = Vec::new();
            let mut pw = NfElem::one(FieldId::Zeta13);
            for _ in 0..id.degree() {
                cols.push(pw.coeffs().to_vec());
                pw = &pw * &g;
            }
            entries.push((id, g, cols));
        }
        EmbeddingRegistry { entries }
    })
}

impl EmbeddingRegistry {
    pub fn image_of_generator(&self, sub: FieldId) -> Option<&NfElem> {
        self.entries.iter().find(|e| e.0 == sub).map(|e| &e.1)
    }

    /// Embeds an element of Q, Q(√13) or K into Q(ζ13).
    pub fn embed(&self, x: &NfElem) -> NfElem {
        match x.field() {
            FieldId::Zeta13 => x.clone(),
            FieldId::Q => NfElem::from_rational(FieldId::Zeta13, x.coeffs()[0].clone()),
            f => {
                let (_, _, cols) = self
                    .entries
                    .iter()
                    .find(|e| e.0 == f)
                    .unwrap_or_else(|| panic!("{f} has no registered embedding"));
                let mut c = vec![BigRational::zero(); 12];
                for (k, col) in cols.iter().enumerate() {
                    let s = &x.coeffs()[k];
                    if s.is_zero() {
                        continue;
                    }
                    for i in 0..12 {
                        c[i] += s * &col[i];
                    }
                }
                NfElem::new(FieldId::Zeta13, c)
            }
        }
    }

    pub fn descend(&self, x: &NfElem, target: FieldId) -> Result<NfElem, NumFieldError> {
        if x.field() != FieldId::Zeta13 {
            return Err(NumFieldError::FieldMismatch(x.field(), FieldId::Zeta13));
        }
        match target {
            FieldId::Zeta13 => Ok(x.clone()),
            FieldId::Q => x
                .as_rational()
                .map(|r| NfElem::from_rational(FieldId::Q, r.clone()))
                .ok_or(NumFieldError::NotInSubfield(FieldId::Q)),
            FieldId::Qsqrt5 => Err(NumFieldError::UnsupportedField(FieldId::Qsqrt5)),
            t => {
                let (_, _, cols) = self.entries.iter().find(|e| e.0 == t).unwrap();
                poly::solve_columns(cols, x.coeffs())
                    .map(|c| NfElem::new(t, c))
                    .ok_or(NumFieldError::NotInSubfield(t))
            }
        }
    }
}

/// The automorphism ζ ↦ ζ^k of Q(ζ13), k prime to 13.
pub fn zeta_sigma(x: &NfElem, k: u32) -> NfElem {
    assert_eq!(x.field(), FieldId::Zeta13);
    assert!(k % 13 != 0);
    let mut d = vec![BigRational::zero(); 13];
    for (i, c) in x.coeffs().iter().enumerate() {
        d[(i * k as usize) % 13] += c;
    }
    let top = d.pop().unwrap();
    let c: Vec<BigRational> = d.into_iter().map(|v| v - &top).collect();
    NfElem::new(FieldId::Zeta13, c)
}

/// Norm from the real subfield Q(ζ13)^+ down to Q of an element fixed by
/// complex conjugation: the exact square root of the full norm, with the sign
/// read off the six real embeddings.
pub fn norm_from_real_subfield(x: &NfElem) -> Result<BigRational, NumFieldError> {
    if x.field() != FieldId::Zeta13 {
        return Err(NumFieldError::FieldMismatch(x.field(), FieldId::Zeta13));
    }
    if zeta_sigma(x, 12) != *x {
        return Err(NumFieldError::NotInSubfield(FieldId::Zeta13));
    }
    let full = x.norm();
    let root = crate::arith::exact_sqrt_rat(&full.abs()).expect("norm from the real subfield is not a square");
    let mut sign = 1.0f64;
    for k in 1..=6 {
        let t = 2.0 * std::f64::consts::PI * k as f64 / 13.0;
        sign *= x.embed_complex((t.cos(), t.sin())).0;
    }
    Ok(if sign < 0.0 { -root } else { root })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn spec_examples() {
        let om = NfElem::generator(FieldId::Qsqrt5);
        let omb = nf_conjugate(&om).unwrap();
        assert_eq!(omb, NfElem::from_ints(FieldId::Qsqrt5, &[1, -1]));
        assert_eq!(&om * &omb, NfElem::from_int(FieldId::Qsqrt5, -1));
        assert_eq!(nf_norm(&om), q(-1));
        let w = NfElem::generator(FieldId::Qsqrt13);
        assert_eq!(&w * &w, NfElem::from_int(FieldId::Qsqrt13, 13));
        assert_eq!(nf_norm(&w), q(-13));
        let z = NfElem::generator(FieldId::CubicK);
        assert_eq!(z.pow(3).unwrap(), NfElem::from_ints(FieldId::CubicK, &[-1, 4, -1]));
        assert_eq!(
            nf_conjugate(&NfElem::from_ints(FieldId::Qsqrt13, &[3, 2])).unwrap(),
            NfElem::from_ints(FieldId::Qsqrt13, &[3, -2])
        );
        assert_eq!(nf_conjugate(&z), Err(NumFieldError::UnsupportedField(FieldId::CubicK)));
    }

    #[test]
    fn rational_norm_is_power() {
        let x = NfElem::from_int(FieldId::Zeta13, 3);
        assert_eq!(nf_norm(&x), q(3i64.pow(12)));
        let y = NfElem::from_int(FieldId::CubicK, -2);
        assert_eq!(nf_norm(&y), q(-8));
    }

    #[test]
    fn descent_examples() {
        let w = gauss_sum_13();
        assert_eq!(nf_descend(&w, FieldId::Qsqrt13).unwrap(), NfElem::generator(FieldId::Qsqrt13));
        let z = gaussian_period_13();
        assert_eq!(nf_descend(&z, FieldId::CubicK).unwrap(), NfElem::generator(FieldId::CubicK));
        assert_eq!(
            nf_descend(&zeta_power(1), FieldId::Qsqrt13),
            Err(NumFieldError::NotInSubfield(FieldId::Qsqrt13))
        );
    }

    #[test]
    fn division_and_inverse() {
        let x = NfElem::from_ints(FieldId::CubicK, &[2, -1, 3]);
        let y = NfElem::from_ints(FieldId::CubicK, &[1, 1]);
        let d = nf_arith(ArithOp::Div, &x, &y).unwrap();
        assert_eq!(&d * &y, x);
        assert_eq!(x.pow(-2).unwrap() * x.pow(2).unwrap(), NfElem::one(FieldId::CubicK));
        assert_eq!(
            nf_arith(ArithOp::Div, &x, &NfElem::zero(FieldId::CubicK)),
            Err(NumFieldError::DivisionByZero)
        );
        assert!(matches!(
            nf_arith(ArithOp::Add, &x, &NfElem::one(FieldId::Q)),
            Err(NumFieldError::FieldMismatch(..))
        ));
    }

    #[test]
    fn triple_constant_norms() {
        let r = |a: i64, b: i64| zeta_real(a) - zeta_real(b);
        let two = NfElem::from_int(FieldId::Zeta13, 2);
        let consts = [r(4, 3), r(1, 4), r(3, 1), r(8, 1), &two - &zeta_real(8), zeta_real(1) - &two];
        for x in consts {
            // absolute norm from Q(ζ13) is 13^2; from the real subfield it is 13
            assert_eq!(nf_norm(&x), q(169));
            assert_eq!(norm_from_real_subfield(&x).unwrap().abs(), q(13));
        }
        assert!(norm_from_real_subfield(&zeta_power(1)).is_err());
    }

    #[test]
    fn display() {
        let x = NfElem::from_ints(FieldId::Qsqrt13, &[-1, 1]).scale(&BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(x.to_string(), "-1/2 + 1/2*w");
        assert_eq!(NfElem::zero(FieldId::Q).to_string(), "0");
    }
}
