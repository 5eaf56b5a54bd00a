//! B_q(E, f) and the exponent bounds q·Π_{(x,y)} B_q(E_{x,y}, f).

use super::SieveError;
use crate::arith;
use crate::ellcurve::{ReducedShape, TraceRecord};
use crate::freycurves::{is_admissible, trace_table, trace_table_any, ClassTraces, FreyKind, TraceTable};
use crate::localfield::PrimeSlot;
use crate::newformdb::{eigenvalue_at, CoeffElem, CoeffField, NewformRecord};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

pub(crate) fn ser_big<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Trace tables are pure functions of (kind, q); built once per process.
pub(crate) fn cached_table(kind: FreyKind, q: u64, relaxed: bool) -> Result<Arc<TraceTable>, SieveError> {
    type Cache = Mutex<HashMap<(FreyKind, u64, bool), Arc<TraceTable>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(kind, q, relaxed)) {
        return Ok(t.clone());
    }
    let t = Arc::new(if relaxed { trace_table_any(kind, q)? } else { trace_table(kind, q)? });
    Ok(cache.lock().unwrap().entry((kind, q, relaxed)).or_insert(t).clone())
}

fn integral_norm(k: &CoeffField, x: &CoeffElem, form: &str, slot: &PrimeSlot) -> Result<BigInt, SieveError> {
    let n = k.norm(x).abs();
    if !n.is_integer() {
        return Err(SieveError::NonIntegralNorm { form: form.into(), slot: slot.to_string() });
    }
    Ok(n.to_integer())
}

/// a_𝔮(f) at every slot above q, in slot order.
fn form_values(form: &NewformRecord, slots: &[PrimeSlot]) -> Result<Vec<CoeffElem>, SieveError> {
    slots.iter().map(|s| Ok(eigenvalue_at(form, s)?)).collect()
}

fn check_slots(form: &NewformRecord, records: &[TraceRecord], q: u64) -> Result<(), SieveError> {
    let Some(first) = records.first() else {
        return Err(SieveError::InvalidConfig(format!("no slots above {q}")));
    };
    if first.slot.field != form.field {
        return Err(SieveError::FieldMismatch {
            form: form.label.clone(),
            found: form.field.to_string(),
            expected: first.slot.field.to_string(),
        });
    }
    if records.iter().any(|r| r.slot.q != q) || records.len() != first.slot.count_above_q {
        return Err(SieveError::InvalidConfig(format!("trace records do not cover the slots above {q}")));
    }
    for r in records {
        if form.divides_level(&r.slot) {
            return Err(SieveError::BadReduction { slot: r.slot.to_string(), what: form.label.clone() });
        }
    }
    Ok(())
}

/// gcd over the slots of |N(a_𝔮(E) − a_𝔮(f))|, with a curve of good reduction at every slot above q.
pub fn bq(curve_traces: &[TraceRecord], form: &NewformRecord, q: u64) -> Result<BigInt, SieveError> {
    check_slots(form, curve_traces, q)?;
    let k = &form.coeff_field;
    let mut g = BigInt::zero();
    for r in curve_traces {
        let af = eigenvalue_at(form, &r.slot)?;
        g = g.gcd(&integral_norm(k, &k.sub(&k.from_int(r.a), &af), &form.label, &r.slot)?);
    }
    Ok(g)
}

/// B_q for one residue class; the class must have good reduction at every slot.
pub fn bq_class(class: &ClassTraces, form: &NewformRecord, q: u64) -> Result<BigInt, SieveError> {
    if let Some(i) = class.shapes.iter().position(|&s| s != ReducedShape::Nonsingular) {
        return Err(SieveError::BadReduction { slot: class.records[i].slot.to_string(), what: "Frey curve".into() });
    }
    bq(&class.records, form, q)
}

fn factor_with(class: &ClassTraces, k: &CoeffField, vals: &[CoeffElem], label: &str) -> Result<BigInt, SieveError> {
    let mut g = BigInt::zero();
    for ((r, shape), af) in class.records.iter().zip(&class.shapes).zip(vals) {
        let x = match shape {
            ReducedShape::Nonsingular => k.sub(&k.from_int(r.a), af),
            // a_𝔮(f) ≡ ±(N𝔮 + 1)
            ReducedShape::Node => {
                let n1 = k.from_int(r.norm as i64 + 1);
                k.mul(&k.sub(&n1, af), &k.add(&n1, af))
            }
            ReducedShape::Cusp => {
                return Err(SieveError::BadReduction { slot: r.slot.to_string(), what: "Frey curve (additive)".into() })
            }
        };
        g = g.gcd(&integral_norm(k, &x, label, &r.slot)?);
    }
    Ok(g)
}

/// The class contribution: B_q at good classes; at multiplicative slots the difference is
/// replaced by (N𝔮 + 1)² − a_𝔮(f)², the level-lowering condition there.
pub fn class_factor(class: &ClassTraces, form: &NewformRecord, q: u64) -> Result<BigInt, SieveError> {
    check_slots(form, &class.records, q)?;
    let slots: Vec<PrimeSlot> = class.records.iter().map(|r| r.slot.clone()).collect();
    factor_with(class, &form.coeff_field, &form_values(form, &slots)?, &form.label)
}

/// q · Π class_factor over the given classes.
pub fn exponent_bound_over<'a>(q: u64, classes: impl IntoIterator<Item = &'a ClassTraces>, form: &NewformRecord) -> Result<BigInt, SieveError> {
    let mut acc = BigInt::from(q);
    let mut vals: Option<Vec<CoeffElem>> = None;
    for c in classes {
        if vals.is_none() {
            check_slots(form, &c.records, q)?;
            let slots: Vec<PrimeSlot> = c.records.iter().map(|r| r.slot.clone()).collect();
            vals = Some(form_values(form, &slots)?);
        }
        acc *= factor_with(c, &form.coeff_field, vals.as_ref().unwrap(), &form.label)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// q · Π over all (x, y) ≠ (0, 0) mod q of the class contributions. 0 means q says nothing about p.
pub fn exponent_bound(kind: FreyKind, form: &NewformRecord, q: u64) -> Result<BigInt, SieveError> {
    let t = cached_table(kind, q, false)?;
    exponent_bound_over(q, t.classes.values(), form)
}

/// Restriction of the classes at q = modulus to those with modulus | x + y (or not).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub modulus: u64,
    pub divides: bool,
}

impl Branch {
    fn keeps(&self, q: u64, x: u64, y: u64) -> bool {
        q != self.modulus || ((x + y) % q == 0) == self.divides
    }
}

/// Primes dividing a bound, or every prime when the bound is 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Support {
    All,
    Primes(BTreeSet<u64>),
}

#[derive(Debug, Clone, Serialize)]
pub struct QBound {
    pub q: u64,
    #[serde(serialize_with = "ser_big")]
    pub bound: BigInt,
    pub support: Support,
}

fn prime_support(n: &BigInt, cache: &mut HashMap<BigInt, Vec<u64>>) -> Vec<u64> {
    cache
        .entry(n.clone())
        .or_insert_with(|| {
            if n.is_one() {
                Vec::new()
            } else {
                arith::factor(n).into_iter().map(|(p, _)| p.to_u64().expect("prime factor beyond 64 bits")).collect()
            }
        })
        .clone()
}

/// The exponent bound at q with its prime support, factoring each distinct class contribution.
pub fn q_bound(kind: FreyKind, form: &NewformRecord, q: u64, branches: &[Branch]) -> Result<QBound, SieveError> {
    let t = cached_table(kind, q, false)?;
    let classes: Vec<&ClassTraces> =
        t.classes.iter().filter(|((x, y), _)| branches.iter().all(|b| b.keeps(q, *x, *y))).map(|(_, c)| c).collect();
    let Some(first) = classes.first() else {
        return Err(SieveError::InvalidConfig(format!("branch conditions leave no classes at {q}")));
    };
    check_slots(form, &first.records, q)?;
    let vals = form_values(form, &t.slots)?;
    let mut seen: HashMap<(Vec<i64>, Vec<ReducedShape>), BigInt> = HashMap::new();
    let mut factors = HashMap::new();
    let mut bound = BigInt::from(q);
    let mut support: BTreeSet<u64> = [q].into();
    for c in classes {
        let key = (c.traces(), c.shapes.clone());
        let f = match seen.get(&key) {
            Some(f) => f.clone(),
            None => {
                let f = factor_with(c, &form.coeff_field, &vals, &form.label)?;
                seen.insert(key, f.clone());
                if !f.is_zero() {
                    support.extend(prime_support(&f, &mut factors));
                }
                f
            }
        };
        bound *= &f;
    }
    let support = if bound.is_zero() { Support::All } else { Support::Primes(support) };
    Ok(QBound { q, bound, support })
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveConfig {
    pub kind: FreyKind,
    pub d: u64,
    pub aux_primes: Vec<u64>,
    pub p_floor: u64,
    pub branches: Vec<Branch>,
}

impl SieveConfig {
    pub fn validate(&self) -> Result<(), SieveError> {
        if self.aux_primes.is_empty() {
            return Err(SieveError::InvalidConfig("no auxiliary primes".into()));
        }
        if let Some(&q) = self.aux_primes.iter().find(|&&q| !is_admissible(self.kind, q)) {
            return Err(SieveError::InadmissibleAuxPrime { kind: self.kind, q });
        }
        if !arith::is_prime(self.p_floor) {
            return Err(SieveError::InvalidConfig(format!("p floor {} is not prime", self.p_floor)));
        }
        if self.d == 0 {
            return Err(SieveError::InvalidConfig("d must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Survivors {
    /// Every p ≥ p_floor: the combined bound is 0.
    All,
    Finite(BTreeSet<u64>),
}

impl Survivors {
    pub fn contains(&self, p: u64) -> bool {
        match self {
            Survivors::All => true,
            Survivors::Finite(s) => s.contains(&p),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Survivors::Finite(s) if s.is_empty())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveResult {
    pub form: String,
    /// gcd over q of the exponent bounds.
    #[serde(serialize_with = "ser_big")]
    pub bound: BigInt,
    pub survivors: Survivors,
    pub evidence: Vec<QBound>,
}

/// Combines per-q bounds: p survives iff p ≥ p_floor and p divides every bound.
pub fn combine(form: &str, mut evidence: Vec<QBound>, p_floor: u64) -> SieveResult {
    evidence.sort_by_key(|b| b.q);
    let bound = evidence.iter().fold(BigInt::zero(), |g, b| g.gcd(&b.bound));
    let mut acc: Option<BTreeSet<u64>> = None;
    for b in &evidence {
        if let Support::Primes(s) = &b.support {
            acc = Some(match acc {
                None => s.clone(),
                Some(a) => a.intersection(s).copied().collect(),
            });
        }
    }
    let survivors = match acc {
        None => Survivors::All,
        Some(s) => Survivors::Finite(s.into_iter().filter(|&p| p >= p_floor).collect()),
    };
    SieveResult { form: form.into(), bound, survivors, evidence }
}

/// Sieves every form with every auxiliary prime; results follow the input order of the forms.
pub fn run_sieve(config: &SieveConfig, forms: &[NewformRecord]) -> Result<Vec<SieveResult>, SieveError> {
    config.validate()?;
    let field = config.kind.field();
    if let Some(f) = forms.iter().find(|f| f.field != field) {
        return Err(SieveError::FieldMismatch { form: f.label.clone(), found: f.field.to_string(), expected: field.to_string() });
    }
    for &q in &config.aux_primes {
        cached_table(config.kind, q, false)?;
    }
    let jobs: Vec<(usize, u64)> = (0..forms.len()).flat_map(|i| config.aux_primes.iter().map(move |&q| (i, q))).collect();
    let bounds: Vec<(usize, QBound)> = jobs
        .par_iter()
        .map(|&(i, q)| Ok((i, q_bound(config.kind, &forms[i], q, &config.branches)?)))
        .collect::<Result<_, SieveError>>()?;
    let mut per_form: Vec<Vec<QBound>> = vec![Vec::new(); forms.len()];
    for (i, b) in bounds {
        per_form[i].push(b);
    }
    Ok(forms.iter().zip(per_form).map(|(f, ev)| combine(&f.label, ev, config.p_floor)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freycurves::build_frey;
    use crate::localfield;
    use crate::numfield::FieldId;
    use std::collections::BTreeMap;

    fn rational_form(field: FieldId, label: &str, vals: &[((u64, usize), i64)]) -> NewformRecord {
        let k = CoeffField::rational();
        NewformRecord {
            label: label.into(),
            field,
            level: Vec::new(),
            coeff_field: k.clone(),
            eigenvalues: vals.iter().map(|&(s, a)| (s, k.from_int(a))).collect::<BTreeMap<_, _>>(),
            curve: None,
        }
    }

    #[test]
    fn b3_six_against_four() {
        let f = rational_form(FieldId::Qsqrt5, "f", &[((3, 0), 4)]);
        let s = localfield::slot(FieldId::Qsqrt5, 3, 0).unwrap();
        let rec = TraceRecord { norm: 9, slot: s, a: 6 };
        assert_eq!(bq(&[rec], &f, 3).unwrap(), BigInt::from(2));
    }

    #[test]
    fn split_slots_take_gcd() {
        // 11 splits in Q(√5)
        let f = rational_form(FieldId::Qsqrt5, "f", &[((11, 0), 0), ((11, 1), 0)]);
        let recs: Vec<TraceRecord> = localfield::prime_split(FieldId::Qsqrt5, 11)
            .unwrap()
            .into_iter()
            .zip([4, 6])
            .map(|(slot, a)| TraceRecord { norm: 11, slot, a })
            .collect();
        assert_eq!(bq(&recs, &f, 11).unwrap(), BigInt::from(2));
    }

    #[test]
    fn self_match_is_zero() {
        let e = build_frey(FreyKind::E5, 1, 1).unwrap();
        let f = NewformRecord::from_curve("E11", e.model, Vec::new());
        assert!(exponent_bound(FreyKind::E5, &f, 3).unwrap().is_zero());
        let t = cached_table(FreyKind::E5, 3, false).unwrap();
        assert!(bq_class(t.get(1, 1).unwrap(), &f, 3).unwrap().is_zero());
    }

    #[test]
    fn e13_zero_form_at_three() {
        // every class pair lies in {(−3,−1), (−1,−3), (−1,1)}, so every gcd is 1
        let f = rational_form(FieldId::Qsqrt13, "z", &[((3, 0), 0), ((3, 1), 0)]);
        let b = q_bound(FreyKind::E13, &f, 3, &[]).unwrap();
        assert_eq!(b.support, Support::Primes([3].into()));
        assert_eq!(b.bound, BigInt::from(3));
    }

    #[test]
    fn bad_class_is_rejected_by_bq_class() {
        let t = cached_table(FreyKind::W, 3, false).unwrap();
        let f = rational_form(FieldId::Q, "z", &[((3, 0), 0)]);
        let bad = t.classes.values().find(|c| c.is_multiplicative()).unwrap();
        assert!(matches!(bq_class(bad, &f, 3), Err(SieveError::BadReduction { .. })));
        // the multiplicative class contributes (N+1)² − 0
        assert_eq!(class_factor(bad, &f, 3).unwrap(), BigInt::from(16));
    }

    #[test]
    fn inadmissible_and_mismatched() {
        let f = rational_form(FieldId::Qsqrt5, "f", &[]);
        assert!(matches!(exponent_bound(FreyKind::E5, &f, 11), Err(SieveError::InadmissibleAuxPrime { .. })));
        let g = rational_form(FieldId::Q, "g", &[]);
        let cfg = SieveConfig { kind: FreyKind::E5, d: 3, aux_primes: vec![3], p_floor: 7, branches: Vec::new() };
        assert!(matches!(run_sieve(&cfg, &[g]), Err(SieveError::FieldMismatch { .. })));
        assert!(matches!(exponent_bound(FreyKind::E5, &f, 3), Err(SieveError::Db(_))));
    }

    #[test]
    fn branch_filters_classes() {
        // a₃ = 6 exactly on the classes with 3 | x + y
        let f = rational_form(FieldId::Qsqrt5, "f", &[((3, 0), 6)]);
        let b = q_bound(FreyKind::E5, &f, 3, &[Branch { modulus: 3, divides: true }]).unwrap();
        assert_eq!(b.support, Support::All);
        let b = q_bound(FreyKind::E5, &f, 3, &[Branch { modulus: 3, divides: false }]).unwrap();
        assert_ne!(b.support, Support::All);
    }
}
