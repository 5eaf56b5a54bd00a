//! Finite fields F_{q^f} = F_q[t]/(modulus), elements encoded as base-q digit strings.

use crate::arith::{self, fp, fp::FpPoly};
use num_bigint::BigUint;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Fields up to this size get discrete log tables.
const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug)]
pub struct ResidueField {
    q: u64,
    f: u32,
    modulus: FpPoly,
    size: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Encoded element: Σ digit_i q^i with digit_i the coefficient of t^i.
pub type Fe = u64;

impl ResidueField {
    /// The field F_q[t]/(modulus); the modulus must be monic irreducible.
    pub fn get(q: u64, modulus: &FpPoly) -> Arc<ResidueField> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, FpPoly), Arc<ResidueField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (q, modulus.clone());
        if let Some(k) = cache.lock().unwrap().get(&key) {
            return k.clone();
        }
        let built = Arc::new(ResidueField::build(q, modulus.clone()));
        cache.lock().unwrap().entry(key).or_insert(built).clone()
    }

    fn build(q: u64, modulus: FpPoly) -> ResidueField {
        assert!(fp::is_irreducible(&modulus, q), "residue field modulus is reducible");
        assert_eq!(modulus.last(), Some(&1), "residue field modulus must be monic");
        let f = (modulus.len() - 1) as u32;
        let size = q.checked_pow(f).expect("residue field too large");
        let mut k = ResidueField { q, f, modulus, size, exp: Vec::new(), log: Vec::new() };
        if size <= TABLE_LIMIT {
            k.build_tables();
        }
        k
    }

    fn build_tables(&mut self) {
        let n = self.size - 1;
        let g = self.primitive_element();
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![u32::MAX; self.size as usize];
        let gp = self.decode(g);
        let mut cur: FpPoly = vec![1];
        for i in 0..n {
            let c = self.encode(&cur);
            exp[i as usize] = c as u32;
            log[c as usize] = i as u32;
            cur = fp::rem(&fp::mul(&cur, &gp, self.q), &self.modulus, self.q);
        }
        self.exp = exp;
        self.log = log;
    }

    fn primitive_element(&self) -> Fe {
        let n = self.size - 1;
        let primes: Vec<u64> = if n == 1 {
            Vec::new()
        } else {
            arith::prime_divisors_u64(&n.into())
        };
        'cand: for c in 1..self.size {
            let cp = self.decode(c);
            for &l in &primes {
                if fp::powmod(&cp, &BigUint::from(n / l), &self.modulus, self.q) == vec![1] {
                    continue 'cand;
                }
            }
            return c;
        }
        unreachable!("no primitive element")
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    pub fn encode(&self, a: &FpPoly) -> Fe {
        let r = if a.len() > self.f as usize { fp::rem(a, &self.modulus, self.q) } else { a.clone() };
        r.iter().rev().fold(0u64, |acc, &c| acc * self.q + c % self.q)
    }

    pub fn decode(&self, mut a: Fe) -> FpPoly {
        let mut out = Vec::with_capacity(self.f as usize);
        for _ in 0..self.f {
            out.push(a % self.q);
            a /= self.q;
        }
        fp::trim(&mut out);
        out
    }

    pub fn from_int(&self, n: i64) -> Fe {
        (n as i128).rem_euclid(self.q as i128) as u64
    }

    pub fn zero(&self) -> Fe {
        0
    }

    pub fn one(&self) -> Fe {
        1
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.f == 1 {
            return (a + b) % self.q;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.f {
            out += ((a % self.q + b % self.q) % self.q) * place;
            a /= self.q;
            b /= self.q;
            place *= self.q;
        }
        out
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.f == 1 {
            return (self.q - a) % self.q;
        }
        let mut a = a;
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.f {
            out += ((self.q - a % self.q) % self.q) * place;
            a /= self.q;
            place *= self.q;
        }
        out
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.f == 1 {
            return arith::mulmod(a, b, self.q);
        }
        if !self.log.is_empty() {
            let n = self.size - 1;
            let i = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n;
            return self.exp[i as usize] as u64;
        }
        self.encode(&fp::rem(&fp::mul(&self.decode(a), &self.decode(b), self.q), &self.modulus, self.q))
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return None;
        }
        if self.f == 1 {
            return arith::invmod(a, self.q);
        }
        if !self.log.is_empty() {
            let n = self.size - 1;
            let i = (n - self.log[a as usize] as u64) % n;
            return Some(self.exp[i as usize] as u64);
        }
        let (g, s, _) = fp::ext_gcd(&self.decode(a), &self.modulus, self.q);
        debug_assert_eq!(g, vec![1]);
        Some(self.encode(&s))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Quadratic character: 1 on nonzero squares, -1 on non-squares, 0 at 0.
    /// Only meaningful in odd characteristic.
    pub fn chi(&self, a: Fe) -> i32 {
        if a == 0 {
            return 0;
        }
        if !self.log.is_empty() {
            return if self.log[a as usize] % 2 == 0 { 1 } else { -1 };
        }
        if self.pow(a, (self.size - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// χ over every element, indexed by encoding.
    pub fn chi_table(&self) -> Vec<i8> {
        (0..self.size).map(|a| self.chi(a) as i8).collect()
    }

    pub fn is_square(&self, a: Fe) -> bool {
        if self.q == 2 {
            return true;
        }
        self.chi(a) >= 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_exhaustive_small() {
        for (q, m) in [(2u64, vec![1u64, 1, 1]), (3, vec![2, 2, 1]), (3, vec![1, 2, 0, 1]), (2, vec![1, 1, 0, 0, 1]), (3, vec![2, 0, 0, 1, 1])] {
            let k = ResidueField::get(q, &m);
            for a in 1..k.size() {
                let b = k.inv(a).unwrap();
                assert_eq!(k.mul(a, b), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn f9_arithmetic_consistent_with_polys() {
        // F_9 = F_3[t]/(t^2 - t - 1)
        let m = fp::reduce(&[-1, -1, 1], 3);
        let k = ResidueField::get(3, &m);
        assert_eq!(k.size(), 9);
        for a in 0..9 {
            for b in 0..9 {
                let direct = k.encode(&fp::rem(&fp::mul(&k.decode(a), &k.decode(b), 3), &m, 3));
                assert_eq!(k.mul(a, b), direct);
                assert_eq!(k.sub(k.add(a, b), b), a);
            }
        }
        let squares: std::collections::BTreeSet<u64> = (1..9).map(|a| k.mul(a, a)).collect();
        for a in 1..9 {
            assert_eq!(k.chi(a) == 1, squares.contains(&a));
        }
    }
}
