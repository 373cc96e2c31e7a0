//! Integer and rational primitives.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// `⌊√n⌋` by integer Newton iteration.
///
/// The starting point `2^⌈bits/2⌉` is never below the root, so the iterates
/// decrease monotonically until they stop at the floor.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::Domain(format!("isqrt of negative number {n}")));
    }
    if n.is_zero() {
        return Ok(BigInt::zero());
    }
    let bits = n.bits();
    let mut x = BigInt::one() << bits.div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return Ok(x);
        }
        x = y;
    }
}

pub fn is_perfect_square(n: &BigInt) -> Result<bool> {
    let r = isqrt(n)?;
    Ok(&r * &r == *n)
}

/// Sign of `a + √d` for `d ≥ 0`, without floating point.
pub(crate) fn sign_plus_sqrt(a: &BigInt, d: &BigInt) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    if !a.is_negative() {
        if a.is_zero() && d.is_zero() {
            Equal
        } else {
            Greater
        }
    } else {
        (*d).cmp(&(a * a))
    }
}

#[cfg(test)]
pub(crate) fn int(v: i64) -> BigInt {
    BigInt::from(v)
}
