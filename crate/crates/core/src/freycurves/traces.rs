//! Traces of Frobenius of the Frey curves at an auxiliary prime, per residue class of (a, b).

use super::{build_frey, FreyError, FreyForms, FreyKind};
use crate::arith;
use crate::ellcurve::{self, reduced_shape, trace_of_reduction, ReducedShape, TraceRecord};
use crate::localfield::{self, Fe, PrimeSlot, ResidueField};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Traces at every slot above q for one residue class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassTraces {
    /// a_𝔮 at good slots, ±1 by split type at multiplicative ones.
    pub records: Vec<TraceRecord>,
    pub shapes: Vec<ReducedShape>,
}

impl ClassTraces {
    pub fn is_good(&self) -> bool {
        self.shapes.iter().all(|&s| s == ReducedShape::Nonsingular)
    }

    pub fn is_multiplicative(&self) -> bool {
        self.shapes.contains(&ReducedShape::Node)
    }

    pub fn traces(&self) -> Vec<i64> {
        self.records.iter().map(|r| r.a).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceTable {
    pub kind: FreyKind,
    pub q: u64,
    pub slots: Vec<PrimeSlot>,
    /// Keyed by (x, y) with 0 ≤ x, y < q, (x, y) ≠ (0, 0).
    pub classes: BTreeMap<(u64, u64), ClassTraces>,
}

impl TraceTable {
    pub fn get(&self, x: u64, y: u64) -> Option<&ClassTraces> {
        self.classes.get(&(x % self.q, y % self.q))
    }
}

pub fn is_admissible(kind: FreyKind, q: u64) -> bool {
    if !arith::is_prime(q) {
        return false;
    }
    match kind {
        FreyKind::W => q != 2 && q != 5,
        FreyKind::E5 | FreyKind::F5 => q != 2 && q != 5 && q % 5 != 1,
        FreyKind::E13 => q != 2 && q != 13 && q % 13 != 1,
        FreyKind::F13 => q != 2 && q != 3 && q != 13 && q % 13 != 1,
    }
}

/// Reduced coefficient forms at one slot: coefficient lists over the residue field.
struct ReducedForms {
    k: std::sync::Arc<ResidueField>,
    coeffs: [Vec<Fe>; 5],
}

impl ReducedForms {
    fn new(kind: FreyKind, slot: &PrimeSlot) -> Result<Self, FreyError> {
        let forms = FreyForms::get(kind);
        let mut coeffs: [Vec<Fe>; 5] = Default::default();
        for (out, g) in coeffs.iter_mut().zip(&forms.coeffs) {
            *out = g.coeffs().iter().map(|c| localfield::reduce_element(c, slot)).collect::<Result<_, _>>()?;
        }
        Ok(ReducedForms { k: slot.residue_field(), coeffs })
    }

    fn eval(&self, x: u64, y: u64) -> [Fe; 5] {
        let k = &self.k;
        let (xf, yf) = (k.from_int(x as i64), k.from_int(y as i64));
        self.coeffs.clone().map(|c| {
            let n = c.len() - 1;
            // Σ c_i x^{n-i} y^i
            let mut acc = k.zero();
            for (i, ci) in c.iter().enumerate() {
                let t = k.mul(k.pow(xf, (n - i) as u64), k.pow(yf, i as u64));
                acc = k.add(acc, k.mul(*ci, t));
            }
            acc
        })
    }
}

/// A coprime integer pair in the class (x, y) mod q that the kind accepts.
fn coprime_lift(kind: FreyKind, x: u64, y: u64, q: u64) -> (i64, i64) {
    let (x, y, q) = (x as i64, y as i64, q as i64);
    for k in 0.. {
        for (a, b) in [(x + k * q, y), (x, y + k * q), (x + k * q, y + q)] {
            if (a, b) != (0, 0) && a.gcd(&b) == 1 && !(kind.needs_nonzero_sum() && a + b == 0) {
                return (a, b);
            }
        }
    }
    unreachable!()
}

/// Per-slot traces for a projective representative.
fn class_traces(kind: FreyKind, q: u64, x: u64, y: u64, slots: &[PrimeSlot], reduced: &[ReducedForms]) -> Result<ClassTraces, FreyError> {
    let mut records = Vec::new();
    let mut shapes = Vec::new();
    for (slot, rf) in slots.iter().zip(reduced) {
        let a = rf.eval(x, y);
        let mut shape = reduced_shape(&rf.k, &a);
        let mut t = trace_of_reduction(&rf.k, &a);
        if shape == ReducedShape::Cusp {
            // the model is not minimal for this class: minimalize a lift
            let (la, lb) = coprime_lift(kind, x, y, q);
            let m = build_frey(kind, la, lb)?;
            (shape, t) = ellcurve::local_trace(&m.model, slot)?;
        }
        if shape == ReducedShape::Nonsingular {
            assert!((t as i128).pow(2) <= 4 * slot.norm() as i128, "Hasse bound violated at {slot}");
        }
        records.push(TraceRecord { slot: slot.clone(), norm: slot.norm(), a: t });
        shapes.push(shape);
    }
    Ok(ClassTraces { records, shapes })
}

/// Traces at the slots above q for every (x, y) ∈ F_q² \ {(0, 0)}.
///
/// Classes are computed on projective representatives. Scaling (x, y) by λ scales a_i by λ^i for
/// W, E13 and F13, an isomorphism, and by λ^{i/2} for E5 and F5, the quadratic twist by λ.
pub fn trace_table(kind: FreyKind, q: u64) -> Result<TraceTable, FreyError> {
    if !is_admissible(kind, q) {
        return Err(FreyError::InadmissibleAuxPrime { kind, q });
    }
    trace_table_any(kind, q)
}

/// Primes at which the kind has bad reduction for every pair.
pub fn always_bad(kind: FreyKind) -> &'static [u64] {
    match kind {
        FreyKind::W | FreyKind::E5 | FreyKind::F5 => &[2, 5],
        FreyKind::E13 => &[2, 13],
        FreyKind::F13 => &[2, 3, 13],
    }
}

/// The trace table without the congruence condition on q, so classes may have
/// multiplicative slots with q ∤ x + y. Only q prime and outside `always_bad` is required.
pub fn trace_table_any(kind: FreyKind, q: u64) -> Result<TraceTable, FreyError> {
    if !arith::is_prime(q) || always_bad(kind).contains(&q) {
        return Err(FreyError::InadmissibleAuxPrime { kind, q });
    }
    let slots = localfield::prime_split(kind.field(), q)?;
    let reduced: Vec<ReducedForms> = slots.iter().map(|s| ReducedForms::new(kind, s)).collect::<Result<_, _>>()?;
    let reps: Vec<(u64, u64)> = (0..q).map(|t| (1, t)).chain([(0, 1)]).collect();
    let rep_traces: Vec<ClassTraces> =
        reps.par_iter().map(|&(x, y)| class_traces(kind, q, x, y, &slots, &reduced)).collect::<Result<_, _>>()?;
    let twisting = matches!(kind, FreyKind::E5 | FreyKind::F5);
    let mut classes = BTreeMap::new();
    for ((x0, y0), base) in reps.iter().zip(&rep_traces) {
        for lambda in 1..q {
            let key = (x0 * lambda % q, y0 * lambda % q);
            let mut ct = base.clone();
            if twisting {
                let chi = arith::legendre(lambda as i64, q) as i64;
                for r in ct.records.iter_mut() {
                    // λ ∈ F_q is a square in F_{q^f} when f is even
                    r.a *= if r.slot.f % 2 == 0 { 1 } else { chi };
                }
            }
            classes.insert(key, ct);
        }
    }
    Ok(TraceTable { kind, q, slots, classes })
}
