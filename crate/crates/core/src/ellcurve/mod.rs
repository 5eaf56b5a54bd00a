//! Weierstrass models, traces of Frobenius, Tate's algorithm over Q and inertia comparisons.

pub mod count;
pub mod model;
pub mod reduction;
pub mod tate;

pub use count::{count_points_all, point_count_on_model, reduced_shape, trace_of_reduction, ReducedShape, TraceRecord};
pub use model::{has_rational_two_torsion, quadratic_twist, InvariantSet, WeierstrassModel};
pub use reduction::{
    classify_reduction, inertia_order_set, inertia_v1_disjoint, tate_conductor_q, InertiaProfile, Potential,
    ReductionClass, ReductionKind,
};
pub use tate::{rational_conductor, Kodaira, LocalData};

use crate::arith;
use crate::localfield::{self, Fe, LocalFieldError, PrimeSlot};
use crate::numfield::NfElem;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EllCurveError {
    #[error("singular Weierstrass model")]
    SingularModel,
    #[error("bad reduction at the slot")]
    BadReduction,
    #[error("model is not over Q")]
    NotOverQ,
    #[error("model is not integral")]
    NotIntegral,
    #[error("valuations violate c4^3 - c6^2 = 1728 disc")]
    InconsistentValuations,
    #[error("no local minimal model available at {0}")]
    NoLocalMinimalModel(String),
    #[error(transparent)]
    Local(#[from] LocalFieldError),
}

/// Working q-adic precision for integer approximations of local models.
const LOCAL_PRECISION: u32 = 64;

fn rat_mod_big(r: &num_rational::BigRational, m: &BigInt) -> Option<BigInt> {
    let g = r.denom().extended_gcd(m);
    if g.gcd != BigInt::from(1) {
        return None;
    }
    Some((r.numer() * g.x).mod_floor(m))
}

/// Integer model congruent to the given one modulo q^N at a degree-one unramified slot.
fn integer_approximation(model: &WeierstrassModel, slot: &PrimeSlot) -> Result<[BigInt; 5], EllCurveError> {
    let q = slot.q;
    let m = BigInt::from(q).pow(LOCAL_PRECISION);
    let root0 = (q - slot.factor[0] % q) % q;
    let theta = localfield::hensel_lift(&slot.field.spec().defining_poly, root0, q, LOCAL_PRECISION)?;
    let mut out: [BigInt; 5] = Default::default();
    for (o, x) in out.iter_mut().zip(&model.a) {
        let mut acc = BigInt::zero();
        for c in x.coeffs().iter().rev() {
            let c = rat_mod_big(c, &m).ok_or(EllCurveError::NotIntegral)?;
            acc = (acc * &theta + c).mod_floor(&m);
        }
        *o = acc;
    }
    Ok(out)
}

/// Reduction of a model that is minimal at the slot.
///
/// Degree-one unramified slots go through Tate's algorithm on a q-adic integer
/// approximation; slots of residue characteristic at least 5 use the u-shift on
/// the short model. Other slots need the given model to be minimal already.
pub fn minimal_reduction_at(model: &WeierstrassModel, slot: &PrimeSlot) -> Result<[Fe; 5], EllCurveError> {
    let direct = count::reduce_at(model, slot);
    if let Ok(a) = &direct {
        let k = slot.residue_field();
        if reduced_shape(&k, a) != ReducedShape::Cusp {
            return direct;
        }
    }
    if slot.e == 1 && slot.f == 1 {
        let approx = integer_approximation(model, slot)?;
        let d = tate::int_invariants(&approx)[6].clone();
        let vd = arith::v_p(&d, slot.q).unwrap_or(u32::MAX);
        if vd + 12 >= LOCAL_PRECISION {
            return Err(LocalFieldError::PrecisionExhausted.into());
        }
        let ld = tate::tate(&approx, slot.q)?;
        return Ok(ld.minimal_model.clone().map(|c| arith::bigint_mod(&c, slot.q)));
    }
    if slot.q >= 5 {
        let inv = model.invariants()?;
        let pi = localfield::uniformizer(slot);
        let v = |x: &NfElem| -> Result<Option<i64>, EllCurveError> {
            if x.is_zero() {
                Ok(None)
            } else {
                Ok(Some(localfield::padic_valuation(x, slot)?))
            }
        };
        let (vc4, vd) = (v(&inv.c4)?, v(&inv.disc)?.unwrap());
        let mut k = vd / 12;
        if let Some(c) = vc4 {
            k = k.min(c / 4);
        }
        let f = model.field;
        let a4 = inv.c4.scale_int(-27).checked_div(&pi.pow(4 * k).unwrap()).unwrap();
        let a6 = inv.c6.scale_int(-54).checked_div(&pi.pow(6 * k).unwrap()).unwrap();
        let short = WeierstrassModel { field: f, a: [NfElem::zero(f), NfElem::zero(f), NfElem::zero(f), a4, a6] };
        return count::reduce_at(&short, slot);
    }
    match direct {
        Ok(a) => Ok(a),
        Err(_) => Err(EllCurveError::NoLocalMinimalModel(slot.to_string())),
    }
}

/// a_𝔮 of the curve at a slot of good reduction, minimalizing the model locally when needed.
pub fn point_count(model: &WeierstrassModel, slot: &PrimeSlot) -> Result<TraceRecord, EllCurveError> {
    if model.field != slot.field {
        return Err(LocalFieldError::NumField(crate::numfield::NumFieldError::FieldMismatch(model.field, slot.field)).into());
    }
    if let Ok(t) = point_count_on_model(model, slot) {
        return Ok(t);
    }
    let a = minimal_reduction_at(model, slot)?;
    count::good_trace(&a, slot)
}

/// N𝔮 + 1 − #Ẽ on a locally minimal model: a_𝔮 at good slots, ±1 at multiplicative ones, 0 at additive ones.
pub fn local_trace(model: &WeierstrassModel, slot: &PrimeSlot) -> Result<(ReducedShape, i64), EllCurveError> {
    let a = minimal_reduction_at(model, slot)?;
    let k = slot.residue_field();
    Ok((reduced_shape(&k, &a), trace_of_reduction(&k, &a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::FieldId;

    #[test]
    fn non_minimal_model_over_q_is_minimalized() {
        // 11a1 scaled by u = 3 reduces to a cusp at 3
        let u: i64 = 3;
        let m = WeierstrassModel::from_ints(FieldId::Q, [0, -u * u, u.pow(3), -10 * u.pow(4), -20 * u.pow(6)]).unwrap();
        let s = &localfield::prime_split(FieldId::Q, 3).unwrap()[0];
        assert!(point_count_on_model(&m, s).is_err());
        assert_eq!(point_count(&m, s).unwrap().a, -1);
        let s = &localfield::prime_split(FieldId::Q, 11).unwrap()[0];
        assert_eq!(local_trace(&m, s).unwrap(), (ReducedShape::Node, 1));
    }

    #[test]
    fn non_minimal_model_at_large_residue_char() {
        // 11a1 scaled by u = 7 over Q(√5), where 7 is inert
        let u: i64 = 7;
        let m = WeierstrassModel::from_ints(FieldId::Qsqrt5, [0, -u * u, u.pow(3), -10 * u.pow(4), -20 * u.pow(6)]).unwrap();
        let s = &localfield::prime_split(FieldId::Qsqrt5, 7).unwrap()[0];
        assert_eq!(s.f, 2);
        // a_49 = a_7² − 2·7 = 4 − 14
        assert_eq!(point_count(&m, s).unwrap().a, -10);
    }

    #[test]
    fn split_slot_minimalization() {
        // over Q(√13) the prime 3 splits; 11a1 scaled by 3 is non-minimal at both slots
        let u: i64 = 3;
        let m = WeierstrassModel::from_ints(FieldId::Qsqrt13, [0, -u * u, u.pow(3), -10 * u.pow(4), -20 * u.pow(6)]).unwrap();
        for s in localfield::prime_split(FieldId::Qsqrt13, 3).unwrap() {
            assert_eq!(point_count(&m, &s).unwrap().a, -1);
        }
    }
}
