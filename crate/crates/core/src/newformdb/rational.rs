//! Cremona-style curve tables: `<label> <N> <a1> <a2> <a3> <a4> <a6>`.

use super::{CoeffField, NewformDbError, NewformRecord};
use crate::arith;
use crate::ellcurve::{self, has_rational_two_torsion, rational_conductor, WeierstrassModel};
use crate::localfield;
use crate::numfield::FieldId;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;

/// Bound for the cached traces.
pub const TRACE_BOUND: u64 = 100;

#[derive(Debug, Clone)]
pub struct RationalCurveEntry {
    pub label: String,
    pub conductor: u64,
    pub ainvs: [BigInt; 5],
    /// a_q for primes q ≤ 100 not dividing the conductor.
    pub traces: BTreeMap<u64, i64>,
    pub two_torsion: bool,
}

impl RationalCurveEntry {
    pub fn model(&self) -> WeierstrassModel {
        WeierstrassModel::from_bigints(&self.ainvs).expect("entry was validated at parse time")
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        arith::prime_divisors_u64(&self.conductor.into())
    }

    /// a_q, from the cache or by a fresh count.
    pub fn trace(&self, q: u64) -> Result<i64, NewformDbError> {
        if let Some(&a) = self.traces.get(&q) {
            return Ok(a);
        }
        let s = localfield::slot(FieldId::Q, q, 0)?;
        Ok(ellcurve::local_trace(&self.model(), &s)?.1)
    }

    /// The newform of the isogeny class, curve-backed, with the cached traces as eigenvalues.
    pub fn as_newform(&self) -> NewformRecord {
        let k = CoeffField::rational();
        let level = arith::factor(&self.conductor.into())
            .into_iter()
            .map(|(p, e)| (localfield::slot(FieldId::Q, p.to_u64().unwrap(), 0).unwrap(), e))
            .collect();
        let mut f = NewformRecord::from_curve(self.label.clone(), self.model(), level);
        f.eigenvalues = self.traces.iter().map(|(&q, &a)| ((q, 0), k.from_int(a))).collect();
        f
    }
}

fn perr(line: usize, msg: impl Into<String>) -> NewformDbError {
    NewformDbError::Parse { line, msg: msg.into() }
}

fn entry(line: usize, toks: &[&str]) -> Result<RationalCurveEntry, NewformDbError> {
    let [label, n, a @ ..] = toks else {
        return Err(perr(line, "expected label, conductor and five a-invariants"));
    };
    if a.len() != 5 {
        return Err(perr(line, "expected label, conductor and five a-invariants"));
    }
    let conductor: u64 = n.parse().map_err(|_| perr(line, format!("bad conductor {n}")))?;
    let mut ainvs: [BigInt; 5] = Default::default();
    for (o, t) in ainvs.iter_mut().zip(a) {
        *o = t.parse().map_err(|_| perr(line, format!("bad a-invariant {t}")))?;
    }
    let model = WeierstrassModel::from_bigints(&ainvs).map_err(|e| perr(line, e.to_string()))?;
    let (computed, _, _) = rational_conductor(&ainvs)?;
    if computed != BigInt::from(conductor) {
        return Err(NewformDbError::ConductorMismatch { line, label: label.to_string(), declared: conductor, computed });
    }
    let mut traces = BTreeMap::new();
    for q in arith::primes_upto(TRACE_BOUND) {
        if conductor % q != 0 {
            let s = localfield::slot(FieldId::Q, q, 0)?;
            traces.insert(q, ellcurve::point_count(&model, &s)?.a);
        }
    }
    Ok(RationalCurveEntry {
        label: label.to_string(),
        conductor,
        ainvs,
        traces,
        two_torsion: has_rational_two_torsion(&model)?,
    })
}

/// Parses and verifies a curve table; every conductor is recomputed with Tate's algorithm.
pub fn parse_rational_db(text: &str) -> Result<Vec<RationalCurveEntry>, NewformDbError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = s.split_whitespace().collect();
        out.push(entry(n + 1, &toks)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w0_conductor_verifies() {
        let db = parse_rational_db("W0 1200 0 1 0 592 -16812\n").unwrap();
        assert_eq!(db[0].conductor, 1200);
        assert_eq!(db[0].bad_primes(), vec![2, 3, 5]);
    }

    #[test]
    fn conductor_mismatch() {
        let e = parse_rational_db("# header\nW0 1200 0 1 0 593 -16812\n").unwrap_err();
        assert!(matches!(e, NewformDbError::ConductorMismatch { line: 2, declared: 1200, .. }), "{e:?}");
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(parse_rational_db("x 11 0 -1 1 -10\n"), Err(NewformDbError::Parse { line: 1, .. })));
        assert!(matches!(parse_rational_db("x 11 0 -1 1 -10 q\n"), Err(NewformDbError::Parse { .. })));
        // singular: y² = x³
        assert!(matches!(parse_rational_db("x 1 0 0 0 0 0\n"), Err(NewformDbError::Parse { .. })));
    }

    #[test]
    fn cached_traces_match_fresh_counts() {
        let db = parse_rational_db("11a1 11 0 -1 1 -10 -20\n").unwrap();
        let e = &db[0];
        assert_eq!(e.traces[&2], -2);
        assert_eq!(e.traces[&97], -7);
        assert_eq!(e.trace(11).unwrap(), 1);
        assert!(!e.two_torsion);
        let f = e.as_newform();
        assert_eq!(f.level_string(), "11^1");
        assert_eq!(f.eigenvalues.len(), 24);
    }
}
