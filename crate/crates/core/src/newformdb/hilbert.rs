//! The Hilbert eigenvalue dump format.
//!
//! ```text
//! FIELD Qsqrt5
//! FORM f1 LEVEL 2^6 COEFF -1,1
//! EV f1 P 3,0 VAL 4
//! REMAP 11 0->1
//! ```
//!
//! Levels are `q^e` for a prime with one slot above it, `q.i^e` for slot i, or `1`.

use super::coeff::within_hasse;
use super::{level_token, CoeffField, NewformDbError, NewformRecord};
use crate::localfield::{self, PrimeSlot};
use crate::numfield::FieldId;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

/// External-to-internal slot index remaps, per (field, q).
#[derive(Debug, Clone, Default)]
pub struct PrimeLabelMap {
    map: BTreeMap<(FieldId, u64), BTreeMap<usize, usize>>,
}

impl PrimeLabelMap {
    pub fn insert(&mut self, field: FieldId, q: u64, ext: usize, int: usize) -> Result<(), String> {
        let m = self.map.entry((field, q)).or_default();
        if m.contains_key(&ext) {
            return Err(format!("external index {ext} above {q} remapped twice"));
        }
        m.insert(ext, int);
        Ok(())
    }

    /// The internal index, after checking that the remap is a permutation of the n slots above q.
    pub fn resolve(&self, field: FieldId, q: u64, ext: usize, n: usize) -> Result<usize, String> {
        let Some(m) = self.map.get(&(field, q)) else {
            return Ok(ext);
        };
        let mut seen = vec![false; n];
        for i in 0..n {
            let j = *m.get(&i).unwrap_or(&i);
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(format!("REMAP for {q} is not a bijection on the {n} slots"));
            }
        }
        if m.keys().any(|&k| k >= n) {
            return Err(format!("REMAP for {q} names a slot that does not exist"));
        }
        Ok(*m.get(&ext).unwrap_or(&ext))
    }
}

const HILBERT_FIELDS: [FieldId; 4] = [FieldId::Q, FieldId::Qsqrt5, FieldId::Qsqrt13, FieldId::CubicK];

struct Parser {
    field: Option<FieldId>,
    remap: PrimeLabelMap,
    forms: Vec<NewformRecord>,
    by_label: HashMap<String, usize>,
}

fn perr(line: usize, msg: impl Into<String>) -> NewformDbError {
    NewformDbError::Parse { line, msg: msg.into() }
}

fn slot_err(line: usize, msg: impl Into<String>) -> NewformDbError {
    NewformDbError::SlotMismatch { line, msg: msg.into() }
}

impl Parser {
    fn slot(&self, line: usize, field: FieldId, q: u64, ext: Option<usize>) -> Result<PrimeSlot, NewformDbError> {
        let slots = localfield::prime_split(field, q).map_err(|e| slot_err(line, e.to_string()))?;
        let ext = match ext {
            Some(i) => i,
            None if slots.len() == 1 => 0,
            None => return Err(slot_err(line, format!("{q} has {} slots in {field}; name one as {q}.i", slots.len()))),
        };
        let i = self.remap.resolve(field, q, ext, slots.len()).map_err(|m| slot_err(line, m))?;
        slots.into_iter().nth(i).ok_or_else(|| slot_err(line, format!("no slot {q}.{ext} in {field}")))
    }

    fn level(&self, line: usize, field: FieldId, s: &str) -> Result<Vec<(PrimeSlot, u32)>, NewformDbError> {
        if s == "1" {
            return Ok(Vec::new());
        }
        let mut out: Vec<(PrimeSlot, u32)> = Vec::new();
        for item in s.split(',') {
            let (base, e) = match item.split_once('^') {
                Some((b, e)) => (b, e.parse::<u32>().map_err(|_| perr(line, format!("bad exponent in {item}")))?),
                None => (item, 1),
            };
            if e == 0 {
                return Err(perr(line, format!("zero exponent in {item}")));
            }
            let (q, idx) = match base.split_once('.') {
                Some((q, i)) => (q, Some(i.parse::<usize>().map_err(|_| perr(line, format!("bad slot index in {item}")))?)),
                None => (base, None),
            };
            let q: u64 = q.parse().map_err(|_| perr(line, format!("bad level token {item}")))?;
            let slot = self.slot(line, field, q, idx)?;
            if out.iter().any(|(t, _)| *t == slot) {
                return Err(slot_err(line, format!("slot {slot} repeated in the level")));
            }
            out.push((slot, e));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    fn statement(&mut self, line: usize, toks: &[&str]) -> Result<(), NewformDbError> {
        match toks {
            ["FIELD", name] => {
                let f = name
                    .parse::<FieldId>()
                    .ok()
                    .filter(|f| HILBERT_FIELDS.contains(f))
                    .ok_or_else(|| NewformDbError::UnknownField { line, name: name.to_string() })?;
                self.field = Some(f);
            }
            ["REMAP", q, map] => {
                let field = self.field.ok_or_else(|| perr(line, "REMAP before FIELD"))?;
                let q: u64 = q.parse().map_err(|_| perr(line, "bad prime in REMAP"))?;
                let (a, b) = map.split_once("->").ok_or_else(|| perr(line, "REMAP expects ext->int"))?;
                let (a, b) = (a.parse().map_err(|_| perr(line, "bad index"))?, b.parse().map_err(|_| perr(line, "bad index"))?);
                self.remap.insert(field, q, a, b).map_err(|m| slot_err(line, m))?;
            }
            ["FORM", label, "LEVEL", level, "COEFF", coeff] => {
                let field = self.field.ok_or_else(|| perr(line, "FORM before FIELD"))?;
                if self.by_label.contains_key(*label) {
                    return Err(perr(line, format!("duplicate form {label}")));
                }
                let level = self.level(line, field, level)?;
                let poly: Vec<i64> = coeff
                    .split(',')
                    .map(|c| c.parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| perr(line, format!("bad coefficient polynomial {coeff}")))?;
                let coeff_field = CoeffField::new(poly).map_err(|m| perr(line, m))?;
                self.by_label.insert(label.to_string(), self.forms.len());
                self.forms.push(NewformRecord {
                    label: label.to_string(),
                    field,
                    level,
                    coeff_field,
                    eigenvalues: BTreeMap::new(),
                    curve: None,
                });
            }
            ["EV", label, "P", slot, "VAL", val] => {
                let &i = self.by_label.get(*label).ok_or_else(|| perr(line, format!("EV for undeclared form {label}")))?;
                let field = self.forms[i].field;
                let (q, idx) = slot.split_once(',').ok_or_else(|| perr(line, format!("bad slot {slot}")))?;
                let q: u64 = q.parse().map_err(|_| perr(line, format!("bad slot {slot}")))?;
                let idx: usize = idx.parse().map_err(|_| perr(line, format!("bad slot {slot}")))?;
                let s = self.slot(line, field, q, Some(idx))?;
                let form = &mut self.forms[i];
                let v = form.coeff_field.parse_elem(val).map_err(|m| perr(line, m))?;
                if form.coeff_field.degree() <= 2 && !form.divides_level(&s) && !within_hasse(&form.coeff_field, &v, s.norm()) {
                    return Err(NewformDbError::HasseViolation { line, label: label.to_string(), slot: s.to_string() });
                }
                if form.eigenvalues.insert((s.q, s.index), v).is_some() {
                    return Err(perr(line, format!("second eigenvalue for {label} at {s}")));
                }
            }
            [kw, ..] if ["FIELD", "REMAP", "FORM", "EV"].contains(kw) => {
                return Err(perr(line, format!("malformed {kw} statement")));
            }
            _ => return Err(perr(line, format!("unrecognised statement {}", toks.join(" ")))),
        }
        Ok(())
    }
}

/// Parses a dump into validated records, in declaration order.
pub fn parse_hilbert_db(text: &str) -> Result<Vec<NewformRecord>, NewformDbError> {
    let mut p = Parser { field: None, remap: PrimeLabelMap::default(), forms: Vec::new(), by_label: HashMap::new() };
    for (n, raw) in text.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = s.split_whitespace().collect();
        p.statement(n + 1, &toks)?;
    }
    Ok(p.forms)
}

/// Normal form of a database: internal slot indices, no remaps, eigenvalues in slot order.
pub fn serialize_hilbert_db(forms: &[NewformRecord]) -> String {
    let mut out = String::new();
    let mut field = None;
    for f in forms {
        if field != Some(f.field) {
            writeln!(out, "FIELD {}", f.field).unwrap();
            field = Some(f.field);
        }
        let level = if f.level.is_empty() {
            "1".to_string()
        } else {
            f.level.iter().map(|(s, e)| level_token(s, *e)).collect::<Vec<_>>().join(",")
        };
        writeln!(out, "FORM {} LEVEL {} COEFF {}", f.label, level, f.coeff_field).unwrap();
        for ((q, i), v) in &f.eigenvalues {
            writeln!(out, "EV {} P {q},{i} VAL {v}", f.label).unwrap();
        }
    }
    out
}
