//! Elimination engine: B_q, exponent bounds over residue classes, refined elimination,
//! level raising, parity and characteristic-polynomial criteria.

pub mod bound;
pub mod criteria;
pub mod refined;
pub mod second_case;

pub use bound::{bq, bq_class, class_factor, exponent_bound, exponent_bound_over, q_bound, run_sieve, Branch, QBound, SieveConfig, SieveResult, Support, Survivors};
pub use criteria::{charpoly_pair_irreducible, levelraising_check, mult_congruence_check};
pub use refined::{refined_eliminate, MapVerdict, RefinedOutcome, SignMode};
pub use second_case::{second_case_report, SecondCaseReport};

use crate::freycurves::{FreyError, FreyKind};
use crate::newformdb::NewformDbError;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SieveError {
    #[error("auxiliary prime {q} is not admissible for {kind}")]
    InadmissibleAuxPrime { kind: FreyKind, q: u64 },
    #[error("bad reduction at {slot} for {what}")]
    BadReduction { slot: String, what: String },
    #[error("form {form} is over {found}, expected {expected}")]
    FieldMismatch { form: String, found: String, expected: String },
    #[error("norm of a_q(E) - a_q(f) is not an integer for {form} at {slot}")]
    NonIntegralNorm { form: String, slot: String },
    #[error("curve database lacks levels {missing:?}")]
    IncompleteDatabase { missing: Vec<u64> },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Db(#[from] NewformDbError),
    #[error(transparent)]
    Frey(FreyError),
}

impl From<FreyError> for SieveError {
    fn from(e: FreyError) -> Self {
        match e {
            FreyError::InadmissibleAuxPrime { kind, q } => SieveError::InadmissibleAuxPrime { kind, q },
            e => SieveError::Frey(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    TraceGcd,
    #[serde(rename = "refined_i_ii")]
    RefinedIII,
    LevelRaising,
    Parity,
    MultCongruence,
    InertiaV1,
    CharpolyIrreducible,
    Cited,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).unwrap();
        f.write_str(s.as_str().unwrap())
    }
}

/// One atom of a proof trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationStep {
    pub step: String,
    pub form: String,
    /// The exponents the step speaks about, e.g. "= 7", ">= 7", "any".
    pub p: String,
    pub criterion: Criterion,
    pub evidence: Vec<String>,
    pub reference: String,
    pub verified: bool,
    /// Informational steps that the verdict does not depend on.
    pub advisory: bool,
}

impl EliminationStep {
    pub fn computed(step: &str, form: &str, p: &str, criterion: Criterion, evidence: Vec<String>, reference: &str, verified: bool) -> Self {
        EliminationStep {
            step: step.into(),
            form: form.into(),
            p: p.into(),
            criterion,
            evidence,
            reference: reference.into(),
            verified,
            advisory: false,
        }
    }

    pub fn advisory(mut self) -> Self {
        self.advisory = true;
        self
    }

    /// A cited step: no computed evidence, never verified.
    pub fn cited(step: &str, form: &str, p: &str, reference: &str) -> Self {
        EliminationStep {
            step: step.into(),
            form: form.into(),
            p: p.into(),
            criterion: Criterion::Cited,
            evidence: Vec::new(),
            reference: reference.into(),
            verified: false,
            advisory: false,
        }
    }

    pub fn is_cited(&self) -> bool {
        self.criterion == Criterion::Cited
    }
}

impl fmt::Display for EliminationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.is_cited() {
            "cited"
        } else if self.advisory {
            "advisory"
        } else if self.verified {
            "ok"
        } else {
            "FAIL"
        };
        write!(f, "[{mark}] {} | {} | p {} | {}", self.step, self.form, self.p, self.criterion)?;
        if !self.reference.is_empty() {
            write!(f, " -- {}", self.reference)?;
        }
        for e in &self.evidence {
            write!(f, "\n      {e}")?;
        }
        Ok(())
    }
}
