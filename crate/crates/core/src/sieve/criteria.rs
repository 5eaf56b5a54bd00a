//! Auxiliary criteria: level raising, multiplicative congruences, Frobenius char-poly irreducibility.

use super::SieveError;
use crate::arith;
use crate::newformdb::{CoeffElem, CoeffField};
use num_bigint::BigInt;
use num_traits::Zero;

/// True when a_p ≡ ±1 under some residue map 𝔭 | p, i.e. level raising at p cannot be excluded.
pub fn levelraising_check(field: &CoeffField, a_p: &CoeffElem, p: u64) -> Result<bool, SieveError> {
    for m in field.primes_above(p)? {
        let v = m.apply(a_p)?;
        if v == m.from_int(1) || v == m.from_int(-1) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// True when p | (ℓ + 1)² − a², the condition at a multiplicative prime ℓ of the Frey curve.
pub fn mult_congruence_check(a: i64, l: u64, p: u64) -> bool {
    let n = BigInt::from(l + 1).pow(2) - BigInt::from(a).pow(2);
    (n % BigInt::from(p)).is_zero()
}

/// True when some x² − a·x + norm, for a in `traces`, is irreducible over F_p.
pub fn charpoly_pair_irreducible(traces: &[i64], norm: u64, p: u64) -> bool {
    traces.iter().any(|&a| arith::legendre(a * a - 4 * norm as i64, p) == -1)
}
