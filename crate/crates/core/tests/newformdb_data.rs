use frey::ellcurve;
use frey::localfield;
use frey::newformdb::{eigenvalue_at, parse_rational_db, NewformRecord};
use frey::numfield::FieldId;
use std::collections::BTreeSet;

const LEVELS: &str = include_str!("../data/curves_50_200_400.txt");
const W_CURVES: &str = include_str!("../data/curves_1200.txt");

/// (label, a3, a7, rational 2-torsion), computed independently with PARI/GP's ellap and elltors.
const ORACLE: &[(&str, i64, i64, bool)] = &[
    ("50.a1", -1, -2, false),
    ("50.b1", 1, 2, false),
    ("200.a1", -3, 2, false),
    ("200.b1", -2, -2, true),
    ("200.c1", 0, 4, true),
    ("200.d1", 2, 2, true),
    ("200.e1", 3, -2, false),
    ("400.a1", -3, 2, false),
    ("400.b1", -2, -2, true),
    ("400.c1", -2, 2, true),
    ("400.d1", -1, -2, false),
    ("400.e1", 0, -4, true),
    ("400.f1", 1, 2, false),
    ("400.g1", 2, 2, true),
    ("400.h1", 3, -2, false),
];

#[test]
fn level_tables_ingest_and_match_oracle() {
    let db = parse_rational_db(LEVELS).unwrap();
    assert_eq!(db.len(), 40);
    for &(label, a3, a7, two) in ORACLE {
        let e = db.iter().find(|e| e.label == label).unwrap();
        assert_eq!((e.trace(3).unwrap(), e.trace(7).unwrap(), e.two_torsion), (a3, a7, two), "{label}");
    }
    let classes: BTreeSet<String> = db.iter().map(|e| e.label.trim_end_matches(char::is_numeric).to_string()).collect();
    assert_eq!(classes.len(), 15);
}

#[test]
fn isogenous_curves_share_traces() {
    let db = parse_rational_db(LEVELS).unwrap();
    for e in &db {
        let class = e.label.trim_end_matches(char::is_numeric);
        let rep = db.iter().find(|r| r.label.trim_end_matches(char::is_numeric) == class).unwrap();
        assert_eq!(e.traces, rep.traces, "{}", e.label);
    }
}

#[test]
fn w_curves_at_three() {
    let db = parse_rational_db(W_CURVES).unwrap();
    let s3 = localfield::slot(FieldId::Q, 3, 0).unwrap();
    let f: Vec<NewformRecord> = db.iter().map(|e| e.as_newform()).collect();
    // both have multiplicative reduction at 3: split for W0, non-split for W0′
    assert_eq!(eigenvalue_at(&f[0], &s3).unwrap().as_i64(), Some(1));
    assert_eq!(eigenvalue_at(&f[1], &s3).unwrap().as_i64(), Some(-1));
}

#[test]
fn backed_eigenvalues_agree_with_fresh_counts() {
    let db = parse_rational_db(LEVELS).unwrap();
    for e in &db {
        let f = e.as_newform();
        let model = e.model();
        for q in frey::arith::primes_upto(50) {
            if e.conductor % q == 0 {
                continue;
            }
            let s = localfield::slot(FieldId::Q, q, 0).unwrap();
            let fresh = ellcurve::point_count(&model, &s).unwrap().a;
            assert_eq!(eigenvalue_at(&f, &s).unwrap().as_i64(), Some(fresh), "{} q={q}", e.label);
        }
    }
}
