//! Newform eigenvalue data: Hilbert newforms from line-oriented dumps and rational newforms
//! from Cremona-style curve tables.

pub mod coeff;
pub mod hilbert;
pub mod rational;

pub use coeff::{within_hasse, CoeffElem, CoeffField, ResidueMap};
pub use hilbert::{parse_hilbert_db, serialize_hilbert_db, PrimeLabelMap};
pub use rational::{parse_rational_db, RationalCurveEntry};

use crate::ellcurve::{self, EllCurveError, WeierstrassModel};
use crate::localfield::{self, LocalFieldError, PrimeSlot};
use crate::numfield::FieldId;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NewformDbError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unknown field {name}")]
    UnknownField { line: usize, name: String },
    #[error("line {line}: {msg}")]
    SlotMismatch { line: usize, msg: String },
    #[error("line {line}: eigenvalue of {label} at {slot} exceeds the Hasse bound")]
    HasseViolation { line: usize, label: String, slot: String },
    #[error("line {line}: {label} has conductor {computed}, not {declared}")]
    ConductorMismatch { line: usize, label: String, declared: u64, computed: BigInt },
    #[error("no eigenvalue for {label} at {slot}")]
    MissingEigenvalue { label: String, slot: String },
    #[error("prime {p} unsupported in the coefficient field: {reason}")]
    UnsupportedPrime { p: u64, reason: String },
    #[error(transparent)]
    EllCurve(#[from] EllCurveError),
    #[error(transparent)]
    Local(#[from] LocalFieldError),
}

/// A Hilbert (or rational) newform of parallel weight 2 and trivial character.
#[derive(Debug, Clone)]
pub struct NewformRecord {
    pub label: String,
    pub field: FieldId,
    pub level: Vec<(PrimeSlot, u32)>,
    pub coeff_field: CoeffField,
    /// Keyed by (q, slot index) in the deterministic slot order.
    pub eigenvalues: BTreeMap<(u64, usize), CoeffElem>,
    /// Backing curve when the form is known to come from one; missing eigenvalues are then computed.
    pub curve: Option<WeierstrassModel>,
}

impl NewformRecord {
    /// A rational-coefficient form whose eigenvalues are the traces of a curve.
    pub fn from_curve(label: impl Into<String>, curve: WeierstrassModel, level: Vec<(PrimeSlot, u32)>) -> Self {
        NewformRecord {
            label: label.into(),
            field: curve.field,
            level,
            coeff_field: CoeffField::rational(),
            eigenvalues: BTreeMap::new(),
            curve: Some(curve),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.coeff_field.is_rational()
    }

    pub fn divides_level(&self, slot: &PrimeSlot) -> bool {
        self.level.iter().any(|(s, e)| s == slot && *e > 0)
    }

    /// Prime norms of the level, as the integer N(level).
    pub fn level_norm(&self) -> BigInt {
        self.level.iter().map(|(s, e)| BigInt::from(s.norm()).pow(*e)).product()
    }

    pub fn level_string(&self) -> String {
        if self.level.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self.level.iter().map(|(s, e)| level_token(s, *e)).collect();
        parts.join(",")
    }
}

pub(crate) fn level_token(s: &PrimeSlot, e: u32) -> String {
    if s.count_above_q == 1 {
        format!("{}^{e}", s.q)
    } else {
        format!("{}.{}^{e}", s.q, s.index)
    }
}

impl fmt::Display for NewformRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {} of level {}", self.label, self.field, self.level_string())
    }
}

/// a_𝔮(f): the stored value, else a trace on the backing curve.
pub fn eigenvalue_at(form: &NewformRecord, slot: &PrimeSlot) -> Result<CoeffElem, NewformDbError> {
    if let Some(v) = form.eigenvalues.get(&(slot.q, slot.index)) {
        return Ok(v.clone());
    }
    match &form.curve {
        Some(c) if c.field == slot.field => {
            let (_, a) = ellcurve::local_trace(c, slot)?;
            Ok(form.coeff_field.from_int(a))
        }
        _ => Err(NewformDbError::MissingEigenvalue { label: form.label.clone(), slot: slot.to_string() }),
    }
}

/// Residue maps for the primes above p in the form's coefficient field.
pub fn coeff_field_primes(form: &NewformRecord, p: u64) -> Result<Vec<ResidueMap>, NewformDbError> {
    form.coeff_field.primes_above(p)
}

/// Slot lookup by (q, index) for a field.
pub fn resolve_slot(field: FieldId, q: u64, index: usize) -> Result<PrimeSlot, NewformDbError> {
    Ok(localfield::slot(field, q, index)?)
}
