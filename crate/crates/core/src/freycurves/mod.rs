//! Frey curves W, E5, F5, E13, F13: models, invariant identities, conductor tables, Serre levels and trace tables.

pub mod conductor;
pub mod factors;
pub mod forms;
pub mod traces;

pub use conductor::{conductor_profile, serre_level, ConductorEntry, ConductorProfile, SerreLevel};
pub use factors::{FactorPolynomials, FactorTriple, TripleVariant};
pub use forms::{displayed_invariants_match, identity_check_on, invariant_identity_check, FreyForms, FreyKind};
pub use traces::{always_bad, is_admissible, trace_table, trace_table_any, ClassTraces, TraceTable};

use crate::ellcurve::{EllCurveError, InvariantSet, WeierstrassModel};
use crate::localfield::LocalFieldError;
use crate::numfield::{nf_descend, NfElem, NumFieldError};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreyError {
    #[error("degenerate pair ({a}, {b}) for {kind}")]
    DegeneratePair { kind: FreyKind, a: i64, b: i64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),
    #[error("auxiliary prime {q} is not admissible for {kind}")]
    InadmissibleAuxPrime { kind: FreyKind, q: u64 },
    #[error(transparent)]
    NumField(#[from] NumFieldError),
    #[error(transparent)]
    EllCurve(#[from] EllCurveError),
    #[error(transparent)]
    Local(#[from] LocalFieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoprimePair {
    pub a: i64,
    pub b: i64,
}

impl CoprimePair {
    pub fn new(a: i64, b: i64) -> Option<Self> {
        ((a, b) != (0, 0) && a.gcd(&b) == 1).then_some(CoprimePair { a, b })
    }

    pub fn sum(&self) -> i64 {
        self.a + self.b
    }

    /// a^r + b^r exactly.
    pub fn power_sum(&self, r: u32) -> num_bigint::BigInt {
        num_bigint::BigInt::from(self.a).pow(r) + num_bigint::BigInt::from(self.b).pow(r)
    }
}

#[derive(Debug, Clone)]
pub struct FreyModel {
    pub kind: FreyKind,
    pub pair: CoprimePair,
    pub model: WeierstrassModel,
    pub invariants: InvariantSet,
}

fn check_pair(kind: FreyKind, a: i64, b: i64) -> Result<CoprimePair, FreyError> {
    let p = CoprimePair::new(a, b).ok_or(FreyError::DegeneratePair { kind, a, b })?;
    if kind.needs_nonzero_sum() && p.sum() == 0 {
        return Err(FreyError::DegeneratePair { kind, a, b });
    }
    Ok(p)
}

/// The Frey curve of the given kind at (a, b). E13 and F13 are evaluated over Q(ζ13) and descended.
pub fn build_frey(kind: FreyKind, a: i64, b: i64) -> Result<FreyModel, FreyError> {
    let pair = check_pair(kind, a, b)?;
    let forms = FreyForms::get(kind);
    let coeffs: [NfElem; 5] = match &forms.cyclotomic {
        Some([a4, a6]) => {
            let f = kind.field();
            let a4 = nf_descend(&a4.eval_i64(a, b), f)?;
            let a6 = nf_descend(&a6.eval_i64(a, b), f)?;
            [NfElem::zero(f), NfElem::zero(f), NfElem::zero(f), a4, a6]
        }
        None => forms.eval(a, b),
    };
    let model = WeierstrassModel::new(coeffs)?;
    let invariants = model.invariants()?;
    Ok(FreyModel { kind, pair, model, invariants })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::FieldId;
    use num_bigint::BigInt;

    #[test]
    fn w_discriminant() {
        let m = build_frey(FreyKind::W, 1, 2).unwrap();
        let want = BigInt::from(16 * 125 * 9) * BigInt::from(33 * 33);
        assert_eq!(m.invariants.disc, NfElem::from_int(FieldId::Q, want));
    }

    #[test]
    fn e13_at_one_zero() {
        let m = build_frey(FreyKind::E13, 1, 0).unwrap();
        assert_eq!(m.model.field, FieldId::Qsqrt13);
        let want = BigInt::from(16) * BigInt::from(3).pow(12) * 13;
        assert_eq!(m.invariants.disc, NfElem::from_int(FieldId::Qsqrt13, want));
    }

    #[test]
    fn degenerate_pairs() {
        assert!(matches!(build_frey(FreyKind::F13, 1, -1), Err(FreyError::DegeneratePair { .. })));
        assert!(matches!(build_frey(FreyKind::W, 2, -2), Err(FreyError::DegeneratePair { .. })));
        assert!(matches!(build_frey(FreyKind::E5, 2, 4), Err(FreyError::DegeneratePair { .. })));
        assert!(build_frey(FreyKind::E13, 1, -1).is_ok());
    }

    #[test]
    fn cyclotomic_and_descended_forms_agree() {
        for kind in [FreyKind::E13, FreyKind::F13] {
            let m = build_frey(kind, 3, -7).unwrap();
            assert_eq!(FreyForms::get(kind).eval(3, -7), m.model.a);
        }
    }
}
