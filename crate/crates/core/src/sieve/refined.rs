//! Refined elimination at an auxiliary prime: per class, congruences a_𝔮(f) ≡ a_𝔮(F) at good slots
//! and a_𝔮(f) ≡ ±(N𝔮 + 1) at multiplicative ones, tested under every residue map 𝔭 | p.

use super::bound::cached_table;
use super::SieveError;
use crate::ellcurve::ReducedShape;
use crate::freycurves::{ClassTraces, FreyKind};
use crate::localfield::Fe;
use crate::newformdb::{eigenvalue_at, CoeffElem, NewformRecord, ResidueMap};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    /// Independent sign at each multiplicative slot.
    #[default]
    Permissive,
    /// One sign shared by all multiplicative slots of a class.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapVerdict {
    pub map: String,
    pub eliminated: bool,
    /// A class whose congruences hold under this map.
    pub witness: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefinedOutcome {
    pub form: String,
    pub q: u64,
    pub p: u64,
    pub eliminated: bool,
    pub maps: Vec<MapVerdict>,
}

fn class_compatible(class: &ClassTraces, images: &[Fe], m: &ResidueMap, mode: SignMode) -> bool {
    let mut signs = [true, true];
    for ((r, shape), &v) in class.records.iter().zip(&class.shapes).zip(images) {
        match shape {
            ReducedShape::Nonsingular => {
                if v != m.from_int(r.a) {
                    return false;
                }
            }
            ReducedShape::Node => {
                let n1 = r.norm as i64 + 1;
                let ok = [v == m.from_int(n1), v == m.from_int(-n1)];
                match mode {
                    SignMode::Permissive if !ok[0] && !ok[1] => return false,
                    SignMode::Strict => {
                        signs[0] &= ok[0];
                        signs[1] &= ok[1];
                        if !signs[0] && !signs[1] {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
            // additive: no congruence to test
            ReducedShape::Cusp => {}
        }
    }
    true
}

/// Whether (form, p) is ruled out at q: true iff under every 𝔭 | p no class of the Frey family
/// satisfies its congruences. The strict (mod 13 admissibility) restriction on q is not imposed.
pub fn refined_eliminate(form: &NewformRecord, q: u64, p: u64, kind: FreyKind, mode: SignMode) -> Result<RefinedOutcome, SieveError> {
    if p == q {
        return Err(SieveError::InvalidConfig(format!("p = q = {p}")));
    }
    if form.field != kind.field() {
        return Err(SieveError::FieldMismatch {
            form: form.label.clone(),
            found: form.field.to_string(),
            expected: kind.field().to_string(),
        });
    }
    let t = cached_table(kind, q, true)?;
    for s in &t.slots {
        if form.divides_level(s) {
            return Err(SieveError::BadReduction { slot: s.to_string(), what: form.label.clone() });
        }
    }
    let vals: Vec<CoeffElem> = t.slots.iter().map(|s| eigenvalue_at(form, s)).collect::<Result<_, _>>()?;
    let mut maps = Vec::new();
    for m in form.coeff_field.primes_above(p)? {
        let images: Vec<Fe> = vals.iter().map(|v| m.apply(v)).collect::<Result<_, _>>()?;
        let witness = t.classes.iter().find(|(_, c)| class_compatible(c, &images, &m, mode)).map(|(&k, _)| k);
        maps.push(MapVerdict { map: m.to_string(), eliminated: witness.is_none(), witness });
    }
    let eliminated = maps.iter().all(|m| m.eliminated);
    Ok(RefinedOutcome { form: form.label.clone(), q, p, eliminated, maps })
}
