//! Fibonacci and Lucas numbers, their "-like" reseeded variants, Fibonacci and
//! Chebyshev polynomials, and the classical identities between them.

use std::str::FromStr;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Memo tables for `F_n` and `L_n`, shared between threads.
///
/// The "-like" values are single linear combinations of these, so they are
/// not cached separately.
#[derive(Debug)]
pub struct SequenceCache {
    fib: RwLock<Vec<BigInt>>,
    luc: RwLock<Vec<BigInt>>,
}

impl Default for SequenceCache {
    fn default() -> Self {
        Self::new()
    }
}

impl SequenceCache {
    pub fn new() -> Self {
        Self {
            fib: RwLock::new(vec![BigInt::zero(), BigInt::one()]),
            luc: RwLock::new(vec![BigInt::from(2), BigInt::one()]),
        }
    }

    /// `F_n` for `n ≥ −1`, with `F_{−1} = 1`.
    pub fn fibonacci(&self, n: i64) -> Result<BigInt> {
        match n {
            -1 => Ok(BigInt::one()),
            n if n < -1 => Err(Error::Domain(format!("fibonacci index {n} < -1"))),
            n => Ok(lookup(&self.fib, n as usize)),
        }
    }

    pub fn lucas(&self, n: i64) -> Result<BigInt> {
        if n < 0 {
            return Err(Error::Domain(format!("lucas index {n} < 0")));
        }
        Ok(lookup(&self.luc, n as usize))
    }
}

fn lookup(table: &RwLock<Vec<BigInt>>, n: usize) -> BigInt {
    if let Some(v) = table.read().expect("cache lock").get(n) {
        return v.clone();
    }
    let mut t = table.write().expect("cache lock");
    while t.len() <= n {
        let next = &t[t.len() - 1] + &t[t.len() - 2];
        t.push(next);
    }
    t[n].clone()
}

static CACHE: LazyLock<SequenceCache> = LazyLock::new(SequenceCache::new);

pub fn fibonacci(n: i64) -> Result<BigInt> {
    CACHE.fibonacci(n)
}

pub fn lucas(n: i64) -> Result<BigInt> {
    CACHE.lucas(n)
}

/// `F̃_n(m)`: Fibonacci reseeded with `F̃_0 = 0, F̃_1 = 1, F̃_2 = m`;
/// equal to `m·F_{n−1} + F_{n−2}` for `n ≥ 1`.
pub fn fib_like(n: i64, m: &BigInt) -> Result<BigInt> {
    match n {
        n if n < 0 => Err(Error::Domain(format!("fib_like index {n} < 0"))),
        0 => Ok(BigInt::zero()),
        n => Ok(m * fibonacci(n - 1)? + fibonacci(n - 2)?),
    }
}

/// `L̃_n(m) = m·L_{n−1} + L_{n−2}` for `n ≥ 2`, with `L̃_0 = 3 − m` and
/// `L̃_1 = 2m − 1`.
pub fn lucas_like(n: i64, m: &BigInt) -> Result<BigInt> {
    match n {
        n if n < 0 => Err(Error::Domain(format!("lucas_like index {n} < 0"))),
        0 => Ok(BigInt::from(3) - m),
        1 => Ok(BigInt::from(2) * m - 1),
        n => Ok(m * lucas(n - 1)? + lucas(n - 2)?),
    }
}

/// Fibonacci polynomial `F_k(x)`: `F_0 = 0`, `F_1 = 1`, `F_{k+1} = x·F_k + F_{k−1}`.
pub fn fib_poly(k: usize) -> IntPolynomial {
    let x = IntPolynomial::x();
    let (mut prev, mut cur) = (IntPolynomial::zero(), IntPolynomial::one());
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = &(&x * &cur) + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `F_k(x)` evaluated at a rational point by running the recurrence on values.
pub fn fib_poly_eval(k: usize, x: &BigRational) -> BigRational {
    let (mut prev, mut cur) = (BigRational::zero(), BigRational::one());
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = x * &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `F_k(x)` at an integer point, admitting `k = −1` (value 1).
pub fn fib_poly_value(k: i64, x: &BigInt) -> Result<BigInt> {
    if k < -1 {
        return Err(Error::Domain(format!("fibonacci polynomial index {k} < -1")));
    }
    let (mut prev, mut cur) = (BigInt::one(), BigInt::zero());
    for _ in 0..=k {
        let next = x * &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(prev)
}

/// Chebyshev polynomial of the second kind, `U_0 = 1`, `U_1 = 2x`.
pub fn chebyshev_u(n: usize) -> IntPolynomial {
    u_family(n, &IntPolynomial::from_i64(&[0, 2]))
}

/// `Ũ_n` with `Ũ_n(2y) = U_n(y)`: `Ũ_0 = 1`, `Ũ_1 = x`, `Ũ_{n+1} = x·Ũ_n − Ũ_{n−1}`.
/// Keeps half-argument Chebyshev values in integer coefficients.
pub fn chebyshev_u_doubled(n: usize) -> IntPolynomial {
    u_family(n, &IntPolynomial::x())
}

fn u_family(n: usize, first: &IntPolynomial) -> IntPolynomial {
    let (mut prev, mut cur) = (IntPolynomial::one(), first.clone());
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &(first * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Named identities checkable at an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `F_{n−1}² − F_n·F_{n−2} = (−1)^n`
    Fid,
    /// `L_{n−1}² − L_n·L_{n−2} = (−1)^{n−1}·5`
    Luc5,
    /// `L_n = F_{n+1} + F_{n−1}`
    Id1,
    /// `L_n + 2L_{n−1} = 5F_n`
    Id2,
    /// `F̃_{n+1}(m) = F_{n+1} + (m−1)F_n = m·F_n + F_{n−1}`, with `F̃` run
    /// from its own recurrence.
    Fib2a,
    /// `F_{k−1}(x)² − F_k(x)·F_{k−2}(x) = (−1)^k` in `Z[x]`.
    Idf2,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::Fid,
        Identity::Luc5,
        Identity::Id1,
        Identity::Id2,
        Identity::Fib2a,
        Identity::Idf2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Fid => "fid",
            Identity::Luc5 => "luc5",
            Identity::Id1 => "id1",
            Identity::Id2 => "id2",
            Identity::Fib2a => "fib2a",
            Identity::Idf2 => "idf2",
        }
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown identity '{s}'")))
    }
}

fn sign(n: i64) -> BigInt {
    if n % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// True iff `identity` holds exactly at index `n ≥ 2`. `fib2a` reads `arg`
/// as the integer `m`; the other identities ignore it.
pub fn identity_check(identity: Identity, n: i64, arg: Option<&BigRational>) -> Result<bool> {
    if n < 2 {
        return Err(Error::Usage(format!("identity index {n} < 2")));
    }
    let f = fibonacci;
    let l = lucas;
    Ok(match identity {
        Identity::Fid => f(n - 1)?.pow(2) - f(n)? * f(n - 2)? == sign(n),
        Identity::Luc5 => l(n - 1)?.pow(2) - l(n)? * l(n - 2)? == sign(n - 1) * 5,
        Identity::Id1 => l(n)? == f(n + 1)? + f(n - 1)?,
        Identity::Id2 => l(n)? + 2 * l(n - 1)? == 5 * f(n)?,
        Identity::Fib2a => {
            let m = match arg {
                Some(r) if r.is_integer() => r.to_integer(),
                _ => {
                    return Err(Error::Usage(
                        "fib2a needs an integer argument m".into(),
                    ))
                }
            };
            let by_recurrence = fib_like_by_recurrence(n + 1, &m);
            let shifted = f(n + 1)? + (&m - 1) * f(n)?;
            let direct = &m * f(n)? + f(n - 1)?;
            by_recurrence == shifted && shifted == direct
        }
        Identity::Idf2 => {
            let k = n as usize;
            let lhs = &fib_poly(k - 1).pow(2) - &(&fib_poly(k) * &fib_poly(k - 2));
            lhs == IntPolynomial::constant(sign(n))
        }
    })
}

/// `F̃_n(m)` from `F̃_0 = 0, F̃_1 = 1, F̃_2 = m` and `F̃_n = F̃_{n−1} + F̃_{n−2}`.
pub fn fib_like_by_recurrence(n: i64, m: &BigInt) -> BigInt {
    let mut seq = vec![BigInt::zero(), BigInt::one(), m.clone()];
    while (seq.len() as i64) <= n {
        let k = seq.len();
        let next = &seq[k - 1] + &seq[k - 2];
        seq.push(next);
    }
    seq[n as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn classical_values() {
        assert_eq!(fibonacci(10).unwrap(), int(55));
        assert_eq!(lucas(0).unwrap(), int(2));
        assert_eq!(fibonacci(-1).unwrap(), int(1));
        assert_eq!(lucas(4).unwrap(), int(7));
        assert!(fibonacci(-2).is_err());
        assert!(lucas(-1).is_err());
    }

    #[test]
    fn fib_like_examples() {
        assert_eq!(fib_like(2, &int(7)).unwrap(), int(7));
        assert_eq!(fib_like(5, &int(1)).unwrap(), int(5));
        assert_eq!(fib_like(3, &int(6)).unwrap(), int(7));
        assert_eq!(fib_like(0, &int(6)).unwrap(), int(0));
        assert_eq!(fib_like(1, &int(6)).unwrap(), int(1));
    }

    #[test]
    fn lucas_like_examples() {
        assert_eq!(lucas_like(0, &int(5)).unwrap(), int(-2));
        assert_eq!(lucas_like(2, &int(6)).unwrap(), int(8));
        assert_eq!(lucas_like(4, &int(1)).unwrap(), int(7));
        // L̃_1 agrees with m·L_0 + L_{−1} where L_{−1} = −1
        assert_eq!(lucas_like(1, &int(4)).unwrap(), int(7));
    }

    #[test]
    fn lucas_like_recurrence() {
        for m in -5..=10 {
            let m = int(m);
            assert_eq!(lucas_like(2, &m).unwrap(), &m + 2);
            for n in 2..40 {
                assert_eq!(
                    lucas_like(n, &m).unwrap(),
                    lucas_like(n - 1, &m).unwrap() + lucas_like(n - 2, &m).unwrap()
                );
            }
        }
    }

    #[test]
    fn fib_like_matches_recurrence_definition() {
        for m in -10..=10 {
            let m = int(m);
            for n in 0..60 {
                assert_eq!(fib_like(n, &m).unwrap(), fib_like_by_recurrence(n, &m));
            }
        }
    }

    #[test]
    fn fib_like_shift_property() {
        for m in -10..=10 {
            for n in 1..=100 {
                let lhs = fib_like(n, &int(m)).unwrap();
                let rhs = fibonacci(n).unwrap() + int(m - 1) * fibonacci(n - 1).unwrap();
                assert_eq!(lhs, rhs, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn fib_poly_examples() {
        assert_eq!(fib_poly(3), IntPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(fib_poly(5), IntPolynomial::from_i64(&[1, 0, 3, 0, 1]));
        assert_eq!(fib_poly(0), IntPolynomial::zero());
        assert_eq!(
            fib_poly_eval(4, &BigRational::one()),
            BigRational::from_integer(int(3))
        );
    }

    #[test]
    fn fib_poly_at_one_is_fibonacci() {
        for k in 0..=60 {
            assert_eq!(fib_poly(k).eval(&int(1)), fibonacci(k as i64).unwrap());
            assert_eq!(
                fib_poly_eval(k, &BigRational::one()),
                BigRational::from_integer(fibonacci(k as i64).unwrap())
            );
        }
    }

    #[test]
    fn fib_poly_value_matches_polynomial() {
        assert_eq!(fib_poly_value(-1, &int(7)).unwrap(), int(1));
        assert!(fib_poly_value(-2, &int(7)).is_err());
        for k in 0..20 {
            for x in -3..=5 {
                assert_eq!(fib_poly_value(k, &int(x)).unwrap(), fib_poly(k as usize).eval(&int(x)));
            }
        }
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_u(1), IntPolynomial::from_i64(&[0, 2]));
        assert_eq!(chebyshev_u(2), IntPolynomial::from_i64(&[-1, 0, 4]));
        assert_eq!(chebyshev_u(3), IntPolynomial::from_i64(&[0, -4, 0, 8]));
        assert_eq!(chebyshev_u(0), IntPolynomial::one());
    }

    #[test]
    fn doubled_chebyshev_matches_half_argument() {
        // Ũ_n(2y) = U_n(y): compose Ũ_n with 2x
        let two_x = IntPolynomial::from_i64(&[0, 2]);
        for n in 0..15 {
            assert_eq!(chebyshev_u_doubled(n).compose(&two_x), chebyshev_u(n));
        }
    }

    #[test]
    fn chebyshev_trig_values() {
        for n in 0..12usize {
            for t in [0.3f64, 1.1, 2.5] {
                let u = chebyshev_u(n).to_f64();
                let v = u.iter().rev().fold(0.0, |acc, c| acc * t.cos() + c);
                let expect = ((n as f64 + 1.0) * t).sin() / t.sin();
                assert!((v - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn identity_examples() {
        assert!(identity_check(Identity::Fid, 5, None).unwrap());
        assert!(identity_check(Identity::Id2, 3, None).unwrap());
        assert!(identity_check(Identity::Luc5, 4, None).unwrap());
        let m = BigRational::from_integer(int(4));
        assert!(identity_check(Identity::Fib2a, 6, Some(&m)).unwrap());
    }

    #[test]
    fn identity_errors() {
        assert!(matches!("nope".parse::<Identity>(), Err(Error::Usage(_))));
        assert!(matches!(identity_check(Identity::Fid, 1, None), Err(Error::Usage(_))));
        assert!(matches!(identity_check(Identity::Fib2a, 4, None), Err(Error::Usage(_))));
        let half = BigRational::new(int(1), int(2));
        assert!(identity_check(Identity::Fib2a, 4, Some(&half)).is_err());
        assert_eq!("idf2".parse::<Identity>().unwrap(), Identity::Idf2);
    }

    #[test]
    fn identities_hold_up_to_200() {
        for n in 2..=200 {
            for id in [Identity::Fid, Identity::Luc5, Identity::Id1, Identity::Id2] {
                assert!(identity_check(id, n, None).unwrap(), "{} at {n}", id.name());
            }
        }
    }

    #[test]
    fn concurrent_cache_reads_agree() {
        let cache = std::sync::Arc::new(SequenceCache::new());
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let c = cache.clone();
                std::thread::spawn(move || {
                    (0..200).all(|n| {
                        let i = (n * 7 + t) % 300;
                        c.fibonacci(i).unwrap() == fibonacci(i).unwrap()
                    })
                })
            })
            .collect();
        for h in handles {
            assert!(h.join().unwrap());
        }
        assert_eq!(cache.fibonacci(299).unwrap(), fibonacci(299).unwrap());
    }
}
