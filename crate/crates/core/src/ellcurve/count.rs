//! Point counts of reduced Weierstrass equations over residue fields.

use super::{EllCurveError, WeierstrassModel};
use crate::localfield::{self, Fe, PrimeSlot, ResidueField};
use serde::Serialize;

/// Residue-field invariants of a reduced model: (b2, b4, b6, b8, c4, Δ).
pub fn reduced_invariants(k: &ResidueField, a: &[Fe; 5]) -> [Fe; 6] {
    let [a1, a2, a3, a4, a6] = *a;
    let m = |x, y| k.mul(x, y);
    let ad = |x, y| k.add(x, y);
    let sb = |x, y| k.sub(x, y);
    let c = |n: i64| k.from_int(n);
    let b2 = ad(m(a1, a1), m(c(4), a2));
    let b4 = ad(m(c(2), a4), m(a1, a3));
    let b6 = ad(m(a3, a3), m(c(4), a6));
    let b8 = sb(
        ad(ad(m(m(a1, a1), a6), m(c(4), m(a2, a6))), m(a2, m(a3, a3))),
        ad(m(m(a1, a3), a4), m(a4, a4)),
    );
    let c4 = sb(m(b2, b2), m(c(24), b4));
    let disc = sb(
        m(c(9), m(m(b2, b4), b6)),
        ad(ad(m(m(b2, b2), b8), m(c(8), m(m(b4, b4), b4))), m(c(27), m(b6, b6))),
    );
    [b2, b4, b6, b8, c4, disc]
}

/// Number of projective points of the (possibly singular) cubic, point at infinity included.
pub fn count_points_all(k: &ResidueField, a: &[Fe; 5]) -> u64 {
    if k.q() == 2 {
        return count_char2(k, a);
    }
    let [b2, b4, b6, ..] = reduced_invariants(k, a);
    let two_b4 = k.add(b4, b4);
    let four = k.from_int(4);
    let mut n: u64 = 1;
    for x in 0..k.size() {
        // (2y + a1x + a3)² = 4x³ + b2x² + 2b4x + b6
        let x2 = k.mul(x, x);
        let v = k.add(k.add(k.mul(four, k.mul(x2, x)), k.mul(b2, x2)), k.add(k.mul(two_b4, x), b6));
        n += (1 + k.chi(v)) as u64;
    }
    n
}

fn count_char2(k: &ResidueField, a: &[Fe; 5]) -> u64 {
    let [a1, a2, a3, a4, a6] = *a;
    let mut n: u64 = 1;
    for x in 0..k.size() {
        let x2 = k.mul(x, x);
        let rhs = k.add(k.add(k.mul(x2, x), k.mul(a2, x2)), k.add(k.mul(a4, x), a6));
        let lin = k.add(k.mul(a1, x), a3);
        for y in 0..k.size() {
            if k.add(k.mul(y, y), k.mul(lin, y)) == rhs {
                n += 1;
            }
        }
    }
    n
}

/// Reduction type of a reduced model read off from Δ and c4 in the residue field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReducedShape {
    Nonsingular,
    Node,
    Cusp,
}

pub fn reduced_shape(k: &ResidueField, a: &[Fe; 5]) -> ReducedShape {
    let [.., c4, disc] = reduced_invariants(k, a);
    if disc != 0 {
        ReducedShape::Nonsingular
    } else if c4 != 0 {
        ReducedShape::Node
    } else {
        ReducedShape::Cusp
    }
}

/// a = N𝔮 + 1 − #Ẽ, counting the singular point if there is one.
/// For a node this gives ±1 by split type, for a cusp 0.
pub fn trace_of_reduction(k: &ResidueField, a: &[Fe; 5]) -> i64 {
    k.size() as i64 + 1 - count_points_all(k, a) as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub slot: PrimeSlot,
    pub norm: u64,
    pub a: i64,
}

fn reduce_model(model: &WeierstrassModel, slot: &PrimeSlot) -> Result<[Fe; 5], EllCurveError> {
    let mut out = [0; 5];
    for (o, x) in out.iter_mut().zip(&model.a) {
        *o = localfield::reduce_element(x, slot)?;
    }
    Ok(out)
}

/// a_𝔮 = N𝔮 + 1 − #Ẽ(F_𝔮) when the given model itself has good reduction at the slot.
pub fn point_count_on_model(model: &WeierstrassModel, slot: &PrimeSlot) -> Result<TraceRecord, EllCurveError> {
    if model.field != slot.field {
        return Err(EllCurveError::Local(crate::numfield::NumFieldError::FieldMismatch(model.field, slot.field).into()));
    }
    let a = reduce_model(model, slot)?;
    good_trace(&a, slot)
}

pub(crate) fn good_trace(a: &[Fe; 5], slot: &PrimeSlot) -> Result<TraceRecord, EllCurveError> {
    let k = slot.residue_field();
    if reduced_shape(&k, a) != ReducedShape::Nonsingular {
        return Err(EllCurveError::BadReduction);
    }
    let t = trace_of_reduction(&k, a);
    assert!((t as i128).pow(2) <= 4 * k.size() as i128, "Hasse bound violated at {slot}");
    Ok(TraceRecord { slot: slot.clone(), norm: k.size(), a: t })
}

/// Reduction of the model at the slot, or the error for a non-integral model.
pub fn reduce_at(model: &WeierstrassModel, slot: &PrimeSlot) -> Result<[Fe; 5], EllCurveError> {
    reduce_model(model, slot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::FieldId;

    fn brute(k: &ResidueField, a: &[Fe; 5]) -> u64 {
        let [a1, a2, a3, a4, a6] = *a;
        let mut n = 1;
        for x in 0..k.size() {
            for y in 0..k.size() {
                let l = k.add(k.mul(y, y), k.mul(k.add(k.mul(a1, x), a3), y));
                let x2 = k.mul(x, x);
                let r = k.add(k.add(k.mul(x2, x), k.mul(a2, x2)), k.add(k.mul(a4, x), a6));
                n += (l == r) as u64;
            }
        }
        n
    }

    #[test]
    fn character_sum_matches_brute_force() {
        for (q, m) in [(3u64, vec![0u64, 1]), (5, vec![0, 1]), (3, vec![2, 2, 1]), (7, vec![0, 1]), (5, vec![2, 0, 1])] {
            let k = ResidueField::get(q, &m);
            let mut seed = 17u64;
            for _ in 0..40 {
                let mut a = [0; 5];
                for x in a.iter_mut() {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    *x = (seed >> 33) % k.size();
                }
                assert_eq!(count_points_all(&k, &a), brute(&k, &a), "q={q} a={a:?}");
            }
        }
    }

    #[test]
    fn known_traces_over_q() {
        // 11a1: a2 = -2, a3 = -1, a5 = 1, a7 = -2, a13 = 4
        let m = WeierstrassModel::from_ints(FieldId::Q, [0, -1, 1, -10, -20]).unwrap();
        let want = [(2, -2), (3, -1), (5, 1), (7, -2), (13, 4)];
        for (p, ap) in want {
            let s = &localfield::prime_split(FieldId::Q, p).unwrap()[0];
            assert_eq!(point_count_on_model(&m, s).unwrap().a, ap, "p={p}");
        }
        let s = &localfield::prime_split(FieldId::Q, 11).unwrap()[0];
        assert_eq!(point_count_on_model(&m, s), Err(EllCurveError::BadReduction));
        let a = reduce_at(&m, s).unwrap();
        // split multiplicative at 11
        assert_eq!(trace_of_reduction(&s.residue_field(), &a), 1);
    }

    #[test]
    fn quadratic_field_trace_is_frobenius_square() {
        // over F_9 the trace is a_3² − 2·3 for a curve over Q
        let m = WeierstrassModel::from_ints(FieldId::Qsqrt5, [0, -1, 1, -10, -20]).unwrap();
        let s = &localfield::prime_split(FieldId::Qsqrt5, 3).unwrap()[0];
        assert_eq!(point_count_on_model(&m, s).unwrap().a, (-1i64).pow(2) - 6);
    }
}
