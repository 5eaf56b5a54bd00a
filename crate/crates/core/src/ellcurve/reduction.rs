//! Reduction types from valuations, and the inertia orders they allow.

use super::tate::{self, Kodaira, LocalData};
use super::{EllCurveError, WeierstrassModel};
use crate::arith;
use num_integer::Integer;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReductionKind {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Potential {
    NotApplicable,
    PotentiallyGood,
    PotentiallyMultiplicative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionClass {
    pub kind: ReductionKind,
    pub potential: Potential,
    pub kodaira: Option<Kodaira>,
    /// Known for good and multiplicative slots, and for additive slots over Q.
    pub conductor_exponent: Option<u32>,
}

impl ReductionClass {
    pub fn good() -> Self {
        ReductionClass { kind: ReductionKind::Good, potential: Potential::NotApplicable, kodaira: None, conductor_exponent: Some(0) }
    }

    pub fn multiplicative() -> Self {
        ReductionClass {
            kind: ReductionKind::Multiplicative,
            potential: Potential::PotentiallyMultiplicative,
            kodaira: None,
            conductor_exponent: Some(1),
        }
    }

    pub fn additive(potential: Potential, exponent: Option<u32>) -> Self {
        ReductionClass { kind: ReductionKind::Additive, potential, kodaira: None, conductor_exponent: exponent }
    }
}

/// Classifies reduction from (v(c4), v(Δ), v(j)), with None standing for the valuation of zero.
/// A model with v(c4) ≥ 4 and v(Δ) ≥ 12 is first rescaled by the uniformizer.
pub fn classify_reduction(vc4: Option<i64>, vdelta: i64, vj: Option<i64>) -> Result<ReductionClass, EllCurveError> {
    let consistent = match (vc4, vj) {
        (Some(c), Some(j)) => j == 3 * c - vdelta && c >= 0,
        (None, None) => true,
        _ => false,
    };
    if !consistent || vdelta < 0 {
        return Err(EllCurveError::InconsistentValuations);
    }
    let (mut vc4, mut vd) = (vc4, vdelta);
    while vc4.map_or(true, |c| c >= 4) && vd >= 12 {
        vc4 = vc4.map(|c| c - 4);
        vd -= 12;
    }
    if vd == 0 {
        return Ok(ReductionClass::good());
    }
    if vc4 == Some(0) {
        return Ok(ReductionClass::multiplicative());
    }
    let potential = if vj.is_some_and(|j| j < 0) { Potential::PotentiallyMultiplicative } else { Potential::PotentiallyGood };
    Ok(ReductionClass::additive(potential, None))
}

fn class_from_local(ld: &LocalData, model: &[num_bigint::BigInt; 5]) -> ReductionClass {
    let [.., c4, _, d] = tate::int_invariants(model);
    let kind = match ld.kodaira {
        Kodaira::I0 => ReductionKind::Good,
        Kodaira::I(_) => ReductionKind::Multiplicative,
        _ => ReductionKind::Additive,
    };
    let potential = match kind {
        ReductionKind::Good => Potential::NotApplicable,
        ReductionKind::Multiplicative => Potential::PotentiallyMultiplicative,
        ReductionKind::Additive => {
            // v(j) = 3 v(c4) − v(Δ)
            let vj = arith::v_p(&c4, ld.p).map(|v| 3 * v as i64 - arith::v_p(&d, ld.p).unwrap() as i64);
            if vj.is_some_and(|j| j < 0) {
                Potential::PotentiallyMultiplicative
            } else {
                Potential::PotentiallyGood
            }
        }
    };
    ReductionClass { kind, potential, kodaira: Some(ld.kodaira), conductor_exponent: Some(ld.conductor_exponent) }
}

/// Reduction class at ℓ of an integral model over Q, by Tate's algorithm.
pub fn tate_conductor_q(model: &WeierstrassModel, ell: u64) -> Result<(ReductionClass, LocalData), EllCurveError> {
    let a = model.integral_ainvs_q().ok_or(if model.field == crate::numfield::FieldId::Q {
        EllCurveError::NotIntegral
    } else {
        EllCurveError::NotOverQ
    })?;
    let ld = tate::tate(&a, ell)?;
    Ok((class_from_local(&ld, &a), ld))
}

/// Possible orders of the image of inertia in the mod-p representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InertiaProfile {
    pub p: u64,
    pub orders: BTreeSet<u64>,
}

impl InertiaProfile {
    pub fn new(p: u64, orders: impl IntoIterator<Item = u64>) -> Self {
        let orders: BTreeSet<u64> = orders.into_iter().collect();
        assert!(!orders.is_empty(), "empty inertia profile");
        InertiaProfile { p, orders }
    }

    /// Entries that depend on p.
    pub fn p_dependent(&self) -> BTreeSet<u64> {
        self.orders.iter().copied().filter(|&o| o % self.p == 0).collect()
    }
}

/// Inertia orders at a prime of residue characteristic ℓ for the mod-p representation.
pub fn inertia_order_set(class: &ReductionClass, vdelta_min: i64, ell: u64, p: u64) -> InertiaProfile {
    assert!(p != ell && p >= 5, "need p ≥ 5 and p ≠ ℓ");
    match (class.kind, class.potential) {
        (ReductionKind::Good, _) => InertiaProfile::new(p, [1]),
        // the Tate parameter is a p-th power or not
        (ReductionKind::Multiplicative, _) => InertiaProfile::new(p, [1, p]),
        (ReductionKind::Additive, Potential::PotentiallyMultiplicative) => InertiaProfile::new(p, [2, 2 * p]),
        _ if ell == 2 => InertiaProfile::new(p, [2, 3, 4, 6, 8, 24]),
        _ if ell == 3 => InertiaProfile::new(p, [2, 3, 4, 6, 12]),
        _ => {
            let e = 12 / vdelta_min.gcd(&12) as u64;
            let allowed = [1u64, 2, 3, 4, 6];
            InertiaProfile::new(p, [e, 2 * e].into_iter().filter(|o| allowed.contains(o)))
        }
    }
}

/// Disjoint order sets certify that the two representations differ on inertia.
pub fn inertia_v1_disjoint(a: &InertiaProfile, b: &InertiaProfile, p: u64) -> bool {
    assert!(a.p == p && b.p == p, "profiles instantiated at different p");
    a.orders.is_disjoint(&b.orders)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::FieldId;

    #[test]
    fn classify_examples() {
        assert_eq!(classify_reduction(Some(0), 3, Some(-3)).unwrap().kind, ReductionKind::Multiplicative);
        assert_eq!(classify_reduction(Some(4), 12, Some(0)).unwrap(), ReductionClass::good());
        assert_eq!(classify_reduction(None, 12, None).unwrap(), ReductionClass::good());
        let c = classify_reduction(Some(1), 5, Some(-2)).unwrap();
        assert_eq!((c.kind, c.potential), (ReductionKind::Additive, Potential::PotentiallyMultiplicative));
        let c = classify_reduction(Some(2), 3, Some(3)).unwrap();
        assert_eq!(c.potential, Potential::PotentiallyGood);
        assert_eq!(classify_reduction(Some(1), 3, Some(1)), Err(EllCurveError::InconsistentValuations));
    }

    #[test]
    fn inertia_examples() {
        let pg = ReductionClass::additive(Potential::PotentiallyGood, None);
        assert!(inertia_order_set(&pg, 2, 5, 7).orders.contains(&6));
        assert!(inertia_order_set(&pg, 8, 5, 7).orders.contains(&3));
        let pm = ReductionClass::additive(Potential::PotentiallyMultiplicative, None);
        let w = inertia_order_set(&pm, 5, 2, 7);
        assert_eq!(w.orders, BTreeSet::from([2, 14]));
        assert_eq!(w.p_dependent(), BTreeSet::from([14]));
        let g = inertia_order_set(&ReductionClass::good(), 0, 5, 7);
        assert_eq!(g.orders, BTreeSet::from([1]));
        assert!(inertia_v1_disjoint(&g, &w, 7));
        let v2 = inertia_order_set(&pg, 3, 2, 7);
        assert!(!inertia_v1_disjoint(&v2, &w, 7));
        assert!(inertia_v1_disjoint(&InertiaProfile::new(7, [3, 6]), &w, 7));
    }

    #[test]
    fn tate_class_over_q() {
        let m = WeierstrassModel::from_ints(FieldId::Q, [0, -1, 1, -10, -20]).unwrap();
        let (c, _) = tate_conductor_q(&m, 11).unwrap();
        assert_eq!(c.kind, ReductionKind::Multiplicative);
        let (c, _) = tate_conductor_q(&m, 7).unwrap();
        assert_eq!(c, ReductionClass { kodaira: Some(Kodaira::I0), ..ReductionClass::good() });
    }
}
