use super::poly::{self, QPoly};
use crate::arith::{self, fp};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldId {
    Q,
    Qsqrt5,
    Qsqrt13,
    CubicK,
    Zeta13,
}

impl FieldId {
    pub const ALL: [FieldId; 5] = [
        FieldId::Q,
        FieldId::Qsqrt5,
        FieldId::Qsqrt13,
        FieldId::CubicK,
        FieldId::Zeta13,
    ];

    pub fn spec(self) -> &'static FieldSpec {
        &specs()[self as usize]
    }

    pub fn degree(self) -> usize {
        self.spec().degree
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldId::Q => "Q",
            FieldId::Qsqrt5 => "Qsqrt5",
            FieldId::Qsqrt13 => "Qsqrt13",
            FieldId::CubicK => "CubicK",
            FieldId::Zeta13 => "Zeta13",
        }
    }

    /// Printed name of the power-basis generator.
    pub fn generator_name(self) -> &'static str {
        match self {
            FieldId::Q => "1",
            FieldId::Qsqrt5 => "omega",
            FieldId::Qsqrt13 => "w",
            FieldId::CubicK => "z",
            FieldId::Zeta13 => "zeta",
        }
    }

    /// Rational primes dividing the discriminant of the defining polynomial.
    /// Splitting there is read from the hand-registered table instead of a factorization.
    pub fn excluded_primes(self) -> &'static [u64] {
        match self {
            FieldId::Q => &[],
            FieldId::Qsqrt5 => &[5],
            FieldId::Qsqrt13 => &[2, 13],
            FieldId::CubicK => &[13],
            FieldId::Zeta13 => &[13],
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FieldId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown field `{s}`"))
    }
}

#[derive(Debug)]
pub struct FieldSpec {
    pub id: FieldId,
    /// Monic integer defining polynomial, constant term first.
    pub defining_poly: Vec<i64>,
    pub degree: usize,
    pub(crate) poly_q: QPoly,
}

fn specs() -> &'static [FieldSpec; 5] {
    static SPECS: OnceLock<[FieldSpec; 5]> = OnceLock::new();
    SPECS.get_or_init(|| {
        let make = |id, c: Vec<i64>| {
            let degree = c.len() - 1;
            let spec = FieldSpec {
                id,
                poly_q: poly::from_ints(&c),
                defining_poly: c,
                degree,
            };
            assert!(is_irreducible_over_q(&spec.defining_poly), "{id:?}: defining polynomial is reducible");
            spec
        };
        [
            make(FieldId::Q, vec![0, 1]),
            make(FieldId::Qsqrt5, vec![-1, -1, 1]),
            make(FieldId::Qsqrt13, vec![-13, 0, 1]),
            make(FieldId::CubicK, vec![1, -4, 1, 1]),
            make(FieldId::Zeta13, vec![1; 13]),
        ]
    })
}

/// Monic integer polynomial irreducibility: a rational root test, then a
/// search for a small prime not dividing the leading data where the
/// reduction stays irreducible. Returns false when no certificate is found.
pub fn is_irreducible_over_q(c: &[i64]) -> bool {
    let n = c.len() - 1;
    if n == 1 {
        return true;
    }
    // monic: rational roots are integer divisors of the constant term
    let c0 = c[0].unsigned_abs();
    if c0 == 0 {
        return false;
    }
    for d in 1..=c0 {
        if c0 % d != 0 {
            continue;
        }
        for r in [d as i64, -(d as i64)] {
            let v = c.iter().rev().fold(0i128, |acc, &x| acc * r as i128 + x as i128);
            if v == 0 {
                return false;
            }
        }
    }
    for q in arith::primes_upto(200) {
        let f = fp::reduce(c, q);
        if fp::degree(&f) == Some(n) && fp::is_irreducible(&f, q) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_degrees() {
        assert_eq!(FieldId::Q.degree(), 1);
        assert_eq!(FieldId::Qsqrt5.degree(), 2);
        assert_eq!(FieldId::CubicK.degree(), 3);
        assert_eq!(FieldId::Zeta13.degree(), 12);
        assert_eq!("CubicK".parse::<FieldId>(), Ok(FieldId::CubicK));
    }

    #[test]
    fn irreducibility_screen() {
        assert!(is_irreducible_over_q(&[-2, 0, 1]));
        assert!(!is_irreducible_over_q(&[-4, 0, 1]));
        // (x^2+1)^2 has no rational root and no irreducible reduction
        assert!(!is_irreducible_over_q(&[1, 0, 2, 0, 1]));
    }
}
