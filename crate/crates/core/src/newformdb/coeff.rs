//! Hecke eigenvalue fields Q[x]/(g) and their reductions modulo primes.

use super::NewformDbError;
use crate::arith::{self, fp, fp::FpPoly};
use crate::localfield::{Fe, ResidueField};
use crate::numfield::{is_irreducible_over_q, poly};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

/// Q[x]/(g) for a monic irreducible integer polynomial g, coefficients from the constant term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffField {
    poly: Vec<i64>,
}

/// An element in the power basis 1, x, …, x^{n−1}; always reduced, always of length n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffElem {
    coeffs: Vec<BigRational>,
}

impl CoeffField {
    pub fn new(poly: Vec<i64>) -> Result<Self, String> {
        if poly.len() < 2 || poly.last() != Some(&1) {
            return Err("coefficient polynomial must be monic of degree at least 1".into());
        }
        if !is_irreducible_over_q(&poly) {
            return Err(format!("coefficient polynomial {poly:?} is not irreducible"));
        }
        Ok(CoeffField { poly })
    }

    pub fn rational() -> Self {
        CoeffField { poly: vec![-1, 1] }
    }

    pub fn poly(&self) -> &[i64] {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    fn qpoly(&self) -> poly::QPoly {
        poly::from_ints(&self.poly)
    }

    /// Reduces an arbitrary coefficient vector modulo g.
    pub fn elem(&self, c: Vec<BigRational>) -> CoeffElem {
        let mut p = c;
        poly::trim(&mut p);
        let mut r = poly::rem(&p, &self.qpoly());
        r.resize(self.degree(), BigRational::zero());
        CoeffElem { coeffs: r }
    }

    pub fn from_int(&self, n: i64) -> CoeffElem {
        self.elem(vec![BigRational::from_integer(n.into())])
    }

    pub fn generator(&self) -> CoeffElem {
        self.elem(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn add(&self, a: &CoeffElem, b: &CoeffElem) -> CoeffElem {
        self.elem(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &CoeffElem, b: &CoeffElem) -> CoeffElem {
        self.elem(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect())
    }

    pub fn mul(&self, a: &CoeffElem, b: &CoeffElem) -> CoeffElem {
        self.elem(poly::mul(&a.coeffs, &b.coeffs))
    }

    /// N(a) = res(g, a) since g is monic.
    pub fn norm(&self, a: &CoeffElem) -> BigRational {
        let mut p = a.coeffs.clone();
        poly::trim(&mut p);
        poly::resultant(&self.qpoly(), &p)
    }

    /// Values of a under the real embeddings; only degrees 1 and 2 are supported.
    pub fn real_embeddings(&self, a: &CoeffElem) -> Option<Vec<f64>> {
        let c: Vec<f64> = a.coeffs.iter().map(|x| x.to_f64().unwrap()).collect();
        match self.degree() {
            1 => Some(vec![c[0]]),
            2 => {
                let (g0, g1) = (self.poly[0] as f64, self.poly[1] as f64);
                let disc = g1 * g1 - 4.0 * g0;
                if disc < 0.0 {
                    return Some(Vec::new());
                }
                let s = disc.sqrt();
                Some([(-g1 + s) / 2.0, (-g1 - s) / 2.0].iter().map(|r| c[0] + c[1] * r).collect())
            }
            _ => None,
        }
    }

    /// One map per prime of the coefficient field above p, in the deterministic factor order.
    pub fn primes_above(&self, p: u64) -> Result<Vec<ResidueMap>, NewformDbError> {
        if !arith::is_prime(p) {
            return Err(NewformDbError::UnsupportedPrime { p, reason: "not prime".into() });
        }
        let g = fp::reduce(&self.poly, p);
        let fs = fp::factor(&g, p);
        if fs.iter().any(|(_, e)| *e > 1) {
            return Err(NewformDbError::UnsupportedPrime { p, reason: "coefficient polynomial is not squarefree mod p".into() });
        }
        Ok(fs
            .into_iter()
            .enumerate()
            .map(|(index, (factor, _))| ResidueMap { p, index, field: ResidueField::get(p, &factor), factor })
            .collect())
    }

    pub fn parse_elem(&self, s: &str) -> Result<CoeffElem, String> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() > self.degree() {
            return Err(format!("value {s} has more coordinates than the coefficient field degree"));
        }
        let mut c = Vec::new();
        for t in parts {
            c.push(t.trim().parse::<BigRational>().map_err(|_| format!("bad rational {t}"))?);
        }
        Ok(self.elem(c))
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.poly.iter().map(|c| c.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl CoeffElem {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value when the element is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| &self.coeffs[0])
    }

    /// The value when the element is an integer that fits in i64.
    pub fn as_i64(&self) -> Option<i64> {
        self.as_rational().filter(|r| r.is_integer()).and_then(|r| r.to_integer().to_i64())
    }
}

/// Comma-separated power-basis coordinates with trailing zeros dropped: the VAL syntax.
impl fmt::Display for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut n = self.coeffs.len();
        while n > 1 && self.coeffs[n - 1].is_zero() {
            n -= 1;
        }
        let s: Vec<String> = self.coeffs[..n].iter().map(|c| c.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

/// Reduction from the coefficient field to F_p[x]/(factor), a prime 𝔭 | p.
#[derive(Debug, Clone)]
pub struct ResidueMap {
    pub p: u64,
    pub index: usize,
    pub factor: FpPoly,
    pub field: Arc<ResidueField>,
}

impl ResidueMap {
    pub fn degree(&self) -> u32 {
        self.field.degree()
    }

    /// Image of an element; errors when a denominator is divisible by p.
    pub fn apply(&self, a: &CoeffElem) -> Result<Fe, NewformDbError> {
        let mut red = Vec::with_capacity(a.coeffs.len());
        for c in &a.coeffs {
            red.push(arith::rat_mod(c, self.p).ok_or(NewformDbError::UnsupportedPrime {
                p: self.p,
                reason: format!("denominator of {c} is divisible by p"),
            })?);
        }
        fp::trim(&mut red);
        Ok(self.field.encode(&fp::rem(&red, &self.factor, self.p)))
    }

    pub fn from_int(&self, n: i64) -> Fe {
        self.field.from_int(n)
    }
}

impl fmt::Display for ResidueMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.factor.iter().map(|c| c.to_string()).collect();
        write!(f, "P{}[{}]", self.p, s.join(","))
    }
}

/// |a| ≤ 2√N exactly for rationals, up to rounding for quadratic elements.
pub fn within_hasse(field: &CoeffField, a: &CoeffElem, norm: u64) -> bool {
    if let Some(r) = a.as_rational() {
        let four_n = BigRational::from_integer((4 * norm as i128).into());
        return r * r <= four_n;
    }
    match field.real_embeddings(a) {
        Some(vals) => vals.iter().all(|v| v.abs() <= 2.0 * (norm as f64).sqrt() + 1e-9),
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> CoeffField {
        CoeffField::new(vec![-2, 0, 1]).unwrap()
    }

    #[test]
    fn norms() {
        let k = CoeffField::new(vec![-13, 0, 1]).unwrap();
        assert_eq!(k.norm(&k.generator()), BigRational::from_integer((-13).into()));
        let k = sqrt2();
        // N(3 + √2) = 7
        let a = k.add(&k.from_int(3), &k.generator());
        assert_eq!(k.norm(&a), BigRational::from_integer(7.into()));
        let r = CoeffField::rational();
        assert_eq!(r.norm(&r.from_int(-6)), BigRational::from_integer((-6).into()));
    }

    #[test]
    fn reducible_polynomial_rejected() {
        assert!(CoeffField::new(vec![-4, 0, 1]).is_err());
        assert!(CoeffField::new(vec![1, 2]).is_err());
    }

    #[test]
    fn sqrt2_at_seven_splits() {
        let k = sqrt2();
        let maps = k.primes_above(7).unwrap();
        assert_eq!(maps.len(), 2);
        let images: Vec<Fe> = maps.iter().map(|m| m.apply(&k.generator()).unwrap()).collect();
        // x² − 2 ≡ (x − 3)(x − 4) mod 7: each map kills one of √2 + 3, √2 + 4
        let mut sorted = images.clone();
        sorted.sort();
        assert_eq!(sorted, vec![3, 4]);
        for m in &maps {
            let killed = (0..2).filter(|&c| m.apply(&k.add(&k.generator(), &k.from_int(3 + c))).unwrap() == 0).count();
            assert_eq!(killed, 1);
        }
    }

    #[test]
    fn sqrt2_at_five_is_inert() {
        let maps = sqrt2().primes_above(5).unwrap();
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].field.size(), 25);
    }

    #[test]
    fn ramified_prime_unsupported() {
        assert!(matches!(sqrt2().primes_above(2), Err(NewformDbError::UnsupportedPrime { .. })));
    }

    #[test]
    fn rational_field_single_map() {
        let k = CoeffField::rational();
        let maps = k.primes_above(11).unwrap();
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].apply(&k.from_int(-3)).unwrap(), 8);
    }

    #[test]
    fn degree_product() {
        let k = CoeffField::new(vec![1, -4, 1, 1]).unwrap();
        for p in [3u64, 5, 7, 11, 17, 23, 29, 31, 53] {
            let maps = k.primes_above(p).unwrap();
            assert_eq!(maps.iter().map(|m| m.degree() as usize).sum::<usize>(), 3, "p={p}");
        }
    }

    #[test]
    fn display_and_parse() {
        let k = sqrt2();
        let a = k.parse_elem("1/2,-3").unwrap();
        assert_eq!(a.to_string(), "1/2,-3");
        assert_eq!(k.parse_elem("4,0").unwrap().to_string(), "4");
        assert!(k.parse_elem("1,2,3").is_err());
    }

    #[test]
    fn hasse_screen() {
        let k = sqrt2();
        // 2√2 ≈ 2.83 ≤ 2√3 ≈ 3.46 but 2 + 2√2 ≈ 4.83 is not
        assert!(within_hasse(&k, &k.parse_elem("0,2").unwrap(), 3));
        assert!(!within_hasse(&k, &k.parse_elem("2,2").unwrap(), 3));
        let r = CoeffField::rational();
        assert!(within_hasse(&r, &r.from_int(4), 4));
        assert!(!within_hasse(&r, &r.from_int(5), 4));
    }
}
