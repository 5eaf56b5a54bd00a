//! a-invariants of the Frey curves as binary forms in (a, b), and the displayed invariant identities.

use super::factors::{omega_bar_display, omega_display, FactorPolynomials, FactorTriple, TripleVariant};
use crate::ellcurve::model::raw_invariants;
use crate::numfield::{nf_descend, BinaryForm, FieldId, NfElem};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FreyKind {
    W,
    E5,
    F5,
    E13,
    F13,
}

impl FreyKind {
    pub const ALL: [FreyKind; 5] = [FreyKind::W, FreyKind::E5, FreyKind::F5, FreyKind::E13, FreyKind::F13];

    pub fn field(self) -> FieldId {
        match self {
            FreyKind::W => FieldId::Q,
            FreyKind::E5 | FreyKind::F5 => FieldId::Qsqrt5,
            FreyKind::E13 => FieldId::Qsqrt13,
            FreyKind::F13 => FieldId::CubicK,
        }
    }

    /// The exponent r of x^r + y^r the curve is attached to.
    pub fn r(self) -> u32 {
        match self {
            FreyKind::W | FreyKind::E5 | FreyKind::F5 => 5,
            FreyKind::E13 | FreyKind::F13 => 13,
        }
    }

    /// Kinds whose hypotheses exclude a + b = 0.
    pub fn needs_nonzero_sum(self) -> bool {
        matches!(self, FreyKind::W | FreyKind::F13)
    }

    fn triple(self) -> Option<TripleVariant> {
        match self {
            FreyKind::E13 => Some(TripleVariant::E13),
            FreyKind::F13 => Some(TripleVariant::F13),
            _ => None,
        }
    }
}

impl fmt::Display for FreyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for FreyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        FreyKind::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown curve kind {s}"))
    }
}

/// κ = −3√5/10 + 1/2 and its conjugate, with √5 = 2ω − 1.
pub fn kappa() -> (NfElem, NfElem) {
    let half = BigRational::new(1.into(), 2.into());
    let tenth = BigRational::new(3.into(), 10.into());
    let sqrt5 = NfElem::from_ints(FieldId::Qsqrt5, &[-1, 2]);
    let h = NfElem::from_rational(FieldId::Qsqrt5, half);
    let s = sqrt5.scale(&tenth);
    (&h - &s, &h + &s)
}

/// [a1, a2, a3, a4, a6] as forms over the host field; zero coefficients are constant forms.
#[derive(Clone, Debug)]
pub struct FreyForms {
    pub kind: FreyKind,
    pub coeffs: [BinaryForm; 5],
    /// For E13 and F13, a4 and a6 before descent from Q(ζ13).
    pub cyclotomic: Option<[BinaryForm; 2]>,
}

fn zero_form(f: FieldId) -> BinaryForm {
    BinaryForm::constant(NfElem::zero(f))
}

fn build_forms(kind: FreyKind) -> FreyForms {
    let f = kind.field();
    let z = || zero_form(f);
    match kind {
        FreyKind::W => {
            let a2 = BinaryForm::from_ints(f, &[-5, 0, -5]);
            let a4 = FactorPolynomials::get(5).phi.scale_int(5);
            FreyForms { kind, coeffs: [z(), a2, z(), a4, z()], cyclotomic: None }
        }
        FreyKind::E5 | FreyKind::F5 => {
            let psi = &FactorPolynomials::get(5).psi;
            let (a2, c) = if kind == FreyKind::E5 {
                (BinaryForm::from_ints(f, &[2, 2]), -omega_bar_display())
            } else {
                (BinaryForm::from_ints(f, &[2, -2]), kappa().0)
            };
            FreyForms { kind, coeffs: [z(), a2, z(), psi.scale(&c), z()], cyclotomic: None }
        }
        FreyKind::E13 | FreyKind::F13 => {
            let t = FactorTriple::get(kind.triple().unwrap());
            let (m4, m6) = if kind == FreyKind::E13 { (27, -27) } else { (27 * 169, -27 * 2197) };
            let a4z = t.e2().scale_int(m4);
            let a6z = t.cubic().scale_int(m6);
            let down = |g: &BinaryForm| g.try_map(|c| nf_descend(c, f)).expect("Frey coefficient not in the subfield");
            FreyForms { kind, coeffs: [z(), z(), z(), down(&a4z), down(&a6z)], cyclotomic: Some([a4z, a6z]) }
        }
    }
}

impl FreyForms {
    pub fn get(kind: FreyKind) -> &'static FreyForms {
        static CELLS: [OnceLock<FreyForms>; 5] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let i = FreyKind::ALL.iter().position(|&k| k == kind).unwrap();
        CELLS[i].get_or_init(|| build_forms(kind))
    }

    pub fn eval(&self, a: i64, b: i64) -> [NfElem; 5] {
        self.coeffs.clone().map(|g| g.eval_i64(a, b))
    }

    /// Copy with one coefficient replaced, for mutation checks.
    pub fn with_coefficient(&self, index: usize, form: BinaryForm) -> FreyForms {
        let mut out = self.clone();
        out.coeffs[index] = form;
        out
    }
}

/// Invariants as displayed for each curve: (c4, c6, Δ), each optional.
struct Displayed {
    c4: Option<NfElem>,
    c6: Option<NfElem>,
    disc: Vec<NfElem>,
}

fn displayed(kind: FreyKind, x: i64, y: i64) -> Displayed {
    let f = kind.field();
    let n = |v: i64| NfElem::from_int(f, v);
    match kind {
        FreyKind::W => {
            let s = n(x + y);
            let p5 = n(x.pow(5) + y.pow(5));
            Displayed { c4: None, c6: None, disc: vec![n(16 * 125) * &s * &s * &p5 * &p5] }
        }
        FreyKind::E5 | FreyKind::F5 => {
            let fp = FactorPolynomials::get(5);
            let psi = fp.psi.eval_i64(x, y);
            let psib = fp.psi_bar.eval_i64(x, y);
            let phi = NfElem::from_rational(f, fp.phi.eval_i64(x, y).as_rational().unwrap().clone());
            if kind == FreyKind::E5 {
                let (w, wb) = (omega_display(), omega_bar_display());
                let u = &wb * &psi;
                let v = &w * &psib;
                Displayed {
                    c4: Some((&u + &v.scale_int(4)).scale_int(-16)),
                    c6: Some((n(x + y) * (&u - &v.scale_int(8))).scale_int(-64)),
                    disc: vec![(&wb * &phi * &psi).scale_int(64)],
                }
            } else {
                let (k, kb) = kappa();
                let u = &k * &psi;
                let v = &kb * &psib;
                Displayed {
                    c4: Some((&u + &v.scale_int(4)).scale_int(16)),
                    c6: Some((n(x - y) * (&u - &v.scale_int(8))).scale_int(64)),
                    disc: vec![(&k * &k * &kb * &phi * &psi).scale_int(64)],
                }
            }
        }
        FreyKind::E13 | FreyKind::F13 => {
            let t = FactorTriple::get(kind.triple().unwrap());
            let down = |e: NfElem| nf_descend(&e, f).expect("displayed invariant not in the subfield");
            let e2 = down(t.e2().eval_i64(x, y));
            let abc = t.abc().eval_i64(x, y);
            let abc2 = down(&abc * &abc);
            let two4_3_12 = NfElem::from_int(f, num_bigint::BigInt::from(16) * num_bigint::BigInt::from(3).pow(12));
            if kind == FreyKind::E13 {
                let psi = FactorPolynomials::get(13).psi.eval_i64(x, y);
                Displayed {
                    c4: Some(e2.scale_int(-16 * 81)),
                    c6: None,
                    disc: vec![&two4_3_12 * &abc2, (&two4_3_12 * &psi * &psi).scale_int(13)],
                }
            } else {
                Displayed {
                    c4: Some(e2.scale_int(-16 * 81 * 169)),
                    c6: None,
                    disc: vec![(&two4_3_12 * &abc2).scale_int(13i64.pow(6))],
                }
            }
        }
    }
}

/// Generic invariants of the forms against the displayed ones at (t, 1) for t = 0..=13.
/// Every displayed quantity is a form of degree at most 12, so agreement there is an identity.
pub fn identity_check_on(forms: &FreyForms) -> bool {
    (0..=13i64).all(|t| {
        let a = forms.eval(t, 1);
        let (_, _, _, _, c4, c6, disc) = raw_invariants(&a);
        let d = displayed(forms.kind, t, 1);
        d.c4.map_or(true, |v| v == c4) && d.c6.map_or(true, |v| v == c6) && d.disc.iter().all(|v| *v == disc)
    })
}

pub fn invariant_identity_check(kind: FreyKind) -> bool {
    identity_check_on(FreyForms::get(kind))
}

/// The displayed c4, c6 and Δ at a single pair against the invariants of the built curve.
pub fn displayed_invariants_match(kind: FreyKind, x: i64, y: i64, inv: &crate::ellcurve::InvariantSet) -> bool {
    let d = displayed(kind, x, y);
    d.c4.map_or(true, |v| v == inv.c4) && d.c6.map_or(true, |v| v == inv.c6) && d.disc.iter().all(|v| *v == inv.disc)
}
