//! x^r + y^r = (x + y)·ψ_r·ψ̄_r for r = 5, 13, and the A + B + C = 0 triples over Q(ζ13).

use crate::numfield::{self, nf_descend, BinaryForm, FieldId, NfElem};
use serde::Serialize;
use std::sync::OnceLock;

pub struct FactorPolynomials {
    pub r: u32,
    pub field: FieldId,
    /// (x^r + y^r)/(x + y) over Q.
    pub phi: BinaryForm,
    pub psi: BinaryForm,
    pub psi_bar: BinaryForm,
}

fn phi_r(r: u32) -> BinaryForm {
    // x^{r-1} − x^{r-2}y + ... + y^{r-1}
    let c: Vec<i64> = (0..r).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    BinaryForm::from_ints(FieldId::Q, &c)
}

/// The root of X² + X − 1 that the displayed formulas call ω, written in our basis: ω − 1.
pub fn omega_display() -> NfElem {
    NfElem::from_ints(FieldId::Qsqrt5, &[-1, 1])
}

/// Its conjugate, −ω.
pub fn omega_bar_display() -> NfElem {
    NfElem::from_ints(FieldId::Qsqrt5, &[0, -1])
}

fn build_r5() -> FactorPolynomials {
    let phi = phi_r(5);
    let psi = BinaryForm::quadratic(&omega_display());
    let psi_bar = BinaryForm::quadratic(&omega_bar_display());
    let f = FactorPolynomials { r: 5, field: FieldId::Qsqrt5, phi, psi, psi_bar };
    f.assert_identities();
    f
}

/// ψ13 as the product of (x + ζ^k y) over the quadratic residues k, descended to Q(√13).
fn psi13_product(residues: &[u32]) -> BinaryForm {
    let mut acc = BinaryForm::constant(NfElem::one(FieldId::Zeta13));
    for &k in residues {
        let lin = BinaryForm::new(FieldId::Zeta13, vec![NfElem::one(FieldId::Zeta13), numfield::zeta_power(k as i64)]);
        acc = acc.mul(&lin);
    }
    acc.try_map(|c| nf_descend(c, FieldId::Qsqrt13)).expect("ψ13 is not defined over Q(√13)")
}

fn build_r13() -> FactorPolynomials {
    let phi = phi_r(13);
    let psi = psi13_product(&numfield::QR13);
    let nqr: Vec<u32> = (1..13).filter(|k| !numfield::QR13.contains(k)).collect();
    let psi_bar = psi13_product(&nqr);
    // the displayed expansion x⁶ + ½(w−1)x⁵y + 2x⁴y² + ½(w+1)x³y³ + 2x²y⁴ + ½(w−1)xy⁵ + y⁶
    let h = num_rational::BigRational::new(1.into(), 2.into());
    let wm = NfElem::from_ints(FieldId::Qsqrt13, &[-1, 1]).scale(&h);
    let wp = NfElem::from_ints(FieldId::Qsqrt13, &[1, 1]).scale(&h);
    let c = |n| NfElem::from_int(FieldId::Qsqrt13, n);
    let displayed = BinaryForm::new(FieldId::Qsqrt13, vec![c(1), wm.clone(), c(2), wp, c(2), wm, c(1)]);
    assert_eq!(psi, displayed, "ψ13 product disagrees with its expansion");
    let f = FactorPolynomials { r: 13, field: FieldId::Qsqrt13, phi, psi, psi_bar };
    f.assert_identities();
    f
}

impl FactorPolynomials {
    pub fn get(r: u32) -> &'static FactorPolynomials {
        static R5: OnceLock<FactorPolynomials> = OnceLock::new();
        static R13: OnceLock<FactorPolynomials> = OnceLock::new();
        match r {
            5 => R5.get_or_init(build_r5),
            13 => R13.get_or_init(build_r13),
            _ => panic!("no factor polynomials for r = {r}"),
        }
    }

    /// Checks x^r + y^r = (x + y)φ_r and φ_r = ψ_r ψ̄_r exactly.
    pub fn identities_hold(&self) -> bool {
        let lin = BinaryForm::from_ints(FieldId::Q, &[1, 1]);
        let mut sum = vec![0i64; self.r as usize + 1];
        sum[0] = 1;
        sum[self.r as usize] = 1;
        let first = lin.mul(&self.phi) == BinaryForm::from_ints(FieldId::Q, &sum);
        let phi_up = self.phi.try_map(|c| Ok(NfElem::from_rational(self.field, c.as_rational().unwrap().clone()))).unwrap();
        first && self.psi.mul(&self.psi_bar) == phi_up
    }

    fn assert_identities(&self) {
        assert!(self.identities_hold(), "factor identities fail for r = {}", self.r);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TripleVariant {
    E13,
    F13,
}

/// Quadratic forms A, B, C over Q(ζ13) with A + B + C = 0, and their constants.
pub struct FactorTriple {
    pub variant: TripleVariant,
    pub a: BinaryForm,
    pub b: BinaryForm,
    pub c: BinaryForm,
    pub alpha: NfElem,
    pub beta: NfElem,
    pub gamma: NfElem,
}

fn build_triple(variant: TripleVariant) -> FactorTriple {
    let t = numfield::zeta_real;
    let two = NfElem::from_int(FieldId::Zeta13, 2);
    let (alpha, beta, gamma, qa, qb, qc) = match variant {
        TripleVariant::E13 => (
            t(4) - t(3),
            t(1) - t(4),
            t(3) - t(1),
            BinaryForm::quadratic(&t(1)),
            BinaryForm::quadratic(&t(3)),
            BinaryForm::quadratic(&t(4)),
        ),
        TripleVariant::F13 => (
            t(8) - t(1),
            &two - &t(8),
            t(1) - two.clone(),
            BinaryForm::quadratic(&two),
            BinaryForm::quadratic(&t(1)),
            BinaryForm::quadratic(&t(8)),
        ),
    };
    let tr = FactorTriple { variant, a: qa.scale(&alpha), b: qb.scale(&beta), c: qc.scale(&gamma), alpha, beta, gamma };
    assert!(tr.sums_to_zero(), "A + B + C ≠ 0 for {variant:?}");
    tr
}

impl FactorTriple {
    pub fn get(variant: TripleVariant) -> &'static FactorTriple {
        static E: OnceLock<FactorTriple> = OnceLock::new();
        static F: OnceLock<FactorTriple> = OnceLock::new();
        match variant {
            TripleVariant::E13 => E.get_or_init(|| build_triple(variant)),
            TripleVariant::F13 => F.get_or_init(|| build_triple(variant)),
        }
    }

    pub fn sums_to_zero(&self) -> bool {
        self.a.add(&self.b).add(&self.c).is_zero()
    }

    /// AB + AC + BC.
    pub fn e2(&self) -> BinaryForm {
        self.a.mul(&self.b).add(&self.a.mul(&self.c)).add(&self.b.mul(&self.c))
    }

    /// 2A³ + 3A²B − 3AB² − 2B³.
    pub fn cubic(&self) -> BinaryForm {
        let (a, b) = (&self.a, &self.b);
        let a2 = a.mul(a);
        let b2 = b.mul(b);
        a2.mul(a)
            .scale_int(2)
            .add(&a2.mul(b).scale_int(3))
            .sub(&a.mul(&b2).scale_int(3))
            .sub(&b2.mul(b).scale_int(2))
    }

    pub fn abc(&self) -> BinaryForm {
        self.a.mul(&self.b).mul(&self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorizations() {
        assert!(FactorPolynomials::get(5).identities_hold());
        assert!(FactorPolynomials::get(13).identities_hold());
    }

    #[test]
    fn triples() {
        for v in [TripleVariant::E13, TripleVariant::F13] {
            let t = FactorTriple::get(v);
            assert!(t.sums_to_zero());
            for c in [&t.alpha, &t.beta, &t.gamma] {
                assert_eq!(c.norm(), num_rational::BigRational::from_integer(169.into()));
            }
        }
    }

    #[test]
    fn abc_square_is_thirteen_psi_squared() {
        let t = FactorTriple::get(TripleVariant::E13);
        let abc2 = t.abc().mul(&t.abc()).try_map(|c| nf_descend(c, FieldId::Qsqrt13)).unwrap();
        let psi = &FactorPolynomials::get(13).psi;
        assert_eq!(abc2, psi.mul(psi).scale_int(13));
    }
}
