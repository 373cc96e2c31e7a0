//! Continuants: words of partial quotients as products of `(c 1; 1 0)`
//! matrices, and fixed points of periodic words.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::is_perfect_square;
use crate::error::{Error, Result};
use crate::surd::{PeriodicCF, QuadraticSurd};

/// `(a b; c d)`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    /// `(c 1; 1 0)`
    pub fn quotient(c: &BigInt) -> Self {
        Self::new(c.clone(), BigInt::one(), BigInt::one(), BigInt::zero())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, r: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &r.a + &self.b * &r.c,
            b: &self.a * &r.b + &self.b * &r.d,
            c: &self.c * &r.a + &self.d * &r.c,
            d: &self.c * &r.b + &self.d * &r.d,
        }
    }
}

/// A finite word of partial quotients `[c0, c1, …, ck]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CFWord(pub Vec<BigInt>);

impl CFWord {
    pub fn from_i64(v: &[i64]) -> Self {
        Self(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().cloned().collect())
    }

    /// Product of the quotient matrices; the identity for the empty word.
    pub fn matrix(&self) -> Mat2 {
        self.0
            .iter()
            .fold(Mat2::identity(), |acc, c| &acc * &Mat2::quotient(c))
    }

    /// All entries after the first are ≥ 1.
    pub fn is_canonical(&self) -> bool {
        self.0.iter().skip(1).all(Signed::is_positive)
    }
}

impl fmt::Display for CFWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Last two convergents of a word: the word's matrix is `(p p_prev; q q_prev)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Continuant {
    pub p: BigInt,
    pub q: BigInt,
    pub p_prev: BigInt,
    pub q_prev: BigInt,
}

impl Continuant {
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(
            self.p.clone(),
            self.p_prev.clone(),
            self.q.clone(),
            self.q_prev.clone(),
        )
    }
}

pub fn continuant(word: &CFWord) -> Result<Continuant> {
    if word.is_empty() {
        return Err(Error::Usage("continuant of an empty word".into()));
    }
    let m = word.matrix();
    Ok(Continuant {
        p: m.a,
        p_prev: m.b,
        q: m.c,
        q_prev: m.d,
    })
}

/// Removes interior zeros with `[…, a, 0, b, …] → […, a+b, …]`; the matrix
/// product is unchanged since `(a 1;1 0)(0 1;1 0)(b 1;1 0) = (a+b 1;1 0)`.
/// A zero in first or last position is left alone.
pub fn canonicalize(word: &CFWord) -> CFWord {
    let mut out: Vec<BigInt> = Vec::with_capacity(word.len());
    let mut pending_zero = false;
    for (i, c) in word.0.iter().enumerate() {
        if pending_zero {
            let last = out.last_mut().expect("zero has a predecessor");
            *last += c;
            pending_zero = false;
        } else if c.is_zero() && i > 0 && i + 1 < word.len() {
            pending_zero = true;
        } else {
            out.push(c.clone());
        }
    }
    CFWord(out)
}

/// Builds a canonical [`PeriodicCF`] from words that may contain interior zeros.
pub fn periodic_cf_from_words(preperiod: &CFWord, period: &CFWord) -> Result<PeriodicCF> {
    PeriodicCF::new(canonicalize(preperiod).0, canonicalize(period).0)
}

/// Exact value of a periodic continued fraction.
///
/// The period's matrix `(p p'; q q')` fixes `x = (p·x + p')/(q·x + q')`, so
/// `x` is the larger root of `q·x² + (q' − p)·x − p'`; the preperiod is then
/// applied as a Möbius map.
pub fn periodic_value(cf: &PeriodicCF) -> Result<QuadraticSurd> {
    let period = CFWord(cf.period().to_vec()).matrix();
    let (p, pp, q, qp) = (&period.a, &period.b, &period.c, &period.d);
    let b = qp - p;
    let disc = &b * &b + BigInt::from(4) * q * pp;
    if !disc.is_positive() || is_perfect_square(&disc)? {
        return Err(Error::NotQuadraticIrrational(format!(
            "period {:?} has a rational fixed point",
            cf.period()
        )));
    }
    let tail = QuadraticSurd::new(-b, BigInt::from(2) * q, disc)?;
    apply_mobius(&CFWord(cf.preperiod().to_vec()).matrix(), &tail)
}

/// `(a·x + b)/(c·x + d)` for `x = (P + √D)/Q`.
///
/// Multiplying through by the conjugate of the denominator leaves
/// `(U + det·Q·√D)/W` with `U`, `W` integers.
pub fn apply_mobius(m: &Mat2, x: &QuadraticSurd) -> Result<QuadraticSurd> {
    let (p, q, d) = (x.p(), x.q(), x.d());
    let num_r = &m.a * p + &m.b * q;
    let den_r = &m.c * p + &m.d * q;
    let u = &num_r * &den_r - &m.a * &m.c * d;
    let w = &den_r * &den_r - &m.c * &m.c * d;
    let v = m.det() * q;
    if w.is_zero() {
        return Err(Error::Domain("Möbius map sends the surd to infinity".into()));
    }
    QuadraticSurd::from_linear(u, v, w, d.clone())
}

/// Checks both ratios of the Fibonacci-like ratio lemma by continuants:
/// `F̃_{n+1}(m)/F̃_n(m) = [1^(n−1), m]` for `n ≥ 2`, and
/// `F̃_{n+2}(m)/F̃_n(m) = [2, 1^(n−2), m]` for `n ≥ 3`.
pub fn ratio_lemma_check(n: i64, m: &BigInt) -> Result<bool> {
    use crate::sequences::fib_like;
    if n < 2 {
        return Err(Error::Usage(format!("ratio lemma needs n >= 2, got {n}")));
    }
    let ones = |count: i64| std::iter::repeat_n(BigInt::one(), count as usize);
    let first: Vec<BigInt> = ones(n - 1).chain([m.clone()]).collect();
    let c = continuant(&CFWord(first))?;
    let mut ok = ratio_eq(&c.p, &c.q, &fib_like(n + 1, m)?, &fib_like(n, m)?);
    if n >= 3 {
        let second: Vec<BigInt> = std::iter::once(BigInt::from(2))
            .chain(ones(n - 2))
            .chain([m.clone()])
            .collect();
        let c = continuant(&CFWord(second))?;
        ok &= ratio_eq(&c.p, &c.q, &fib_like(n + 2, m)?, &fib_like(n, m)?);
    }
    Ok(ok)
}

fn ratio_eq(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> bool {
    !b.is_zero() && !d.is_zero() && a * d == b * c
}

/// Reversal identities from transposing the word's matrix:
/// `[ck, …, c0] = p_k/p_{k−1}` and `[ck, …, c1] = q_k/q_{k−1}`.
pub fn reversal_check(word: &CFWord) -> Result<bool> {
    if word.len() < 2 {
        return Err(Error::Usage("reversal check needs a word of length >= 2".into()));
    }
    let fwd = continuant(word)?;
    let rev = continuant(&word.reversed())?;
    let rev_tail = continuant(&CFWord(word.0[1..].iter().rev().cloned().collect()))?;
    Ok(rev.matrix() == fwd.matrix().transpose()
        && rev.p == fwd.p
        && rev.q == fwd.p_prev
        && rev_tail.p == fwd.q
        && rev_tail.q == fwd.q_prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::sequences::{fib_like, fibonacci};
    use crate::surd::DEFAULT_MAX_STEPS;

    fn w(v: &[i64]) -> CFWord {
        CFWord::from_i64(v)
    }

    #[test]
    fn continuant_examples() {
        let c = continuant(&w(&[2, 1, 1])).unwrap();
        assert_eq!((c.p, c.q), (int(5), int(2)));
        // [2N, 1^(n−1)] with N = 2, n = 3
        let c = continuant(&w(&[4, 1, 1])).unwrap();
        assert_eq!(c.p, fib_like(4, &int(4)).unwrap());
        assert_eq!(c.p, int(9));
        assert_eq!(c.q, fibonacci(3).unwrap());
        let c = continuant(&w(&[7])).unwrap();
        assert_eq!((c.p, c.q, c.p_prev, c.q_prev), (int(7), int(1), int(1), int(0)));
        assert!(matches!(continuant(&w(&[])), Err(Error::Usage(_))));
    }

    #[test]
    fn determinant_sign() {
        for len in 1..8usize {
            let word = CFWord((1..=len as i64).map(int).collect());
            let c = continuant(&word).unwrap();
            let det = &c.p * &c.q_prev - &c.p_prev * &c.q;
            // k = len − 1, det = (−1)^(k+1)
            let expect = if len % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(det, expect);
        }
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(&w(&[6, 2, 1, 0, 1, 2])), w(&[6, 2, 2, 2]));
        assert_eq!(canonicalize(&w(&[5, 1, 1])), w(&[5, 1, 1]));
        assert_eq!(canonicalize(&w(&[3, 0, 4])), w(&[7]));
        assert_eq!(canonicalize(&w(&[3, 0, 0, 4])), w(&[3, 4]));
        assert_eq!(canonicalize(&w(&[0, 5, 0])), w(&[0, 5, 0]));
        for word in [w(&[6, 2, 1, 0, 1, 2]), w(&[3, 0, 0, 4]), w(&[1, 0, 2, 0, 3])] {
            assert_eq!(canonicalize(&word).matrix(), word.matrix());
        }
    }

    #[test]
    fn periodic_value_examples() {
        let v = periodic_value(&PeriodicCF::from_i64(&[], &[2]).unwrap()).unwrap();
        assert_eq!(v.to_string(), "(1+√2)/1");
        let v = periodic_value(&PeriodicCF::from_i64(&[1], &[2]).unwrap()).unwrap();
        assert_eq!(v.to_string(), "(0+√2)/1");
        let v = periodic_value(&PeriodicCF::from_i64(&[], &[6, 2, 2, 2]).unwrap()).unwrap();
        assert_eq!(v.to_string(), "(9+√105)/3");
        assert_eq!(
            v.expand(DEFAULT_MAX_STEPS).unwrap(),
            PeriodicCF::from_i64(&[], &[6, 2, 2, 2]).unwrap()
        );
        let v = periodic_value(&PeriodicCF::from_i64(&[], &[1]).unwrap()).unwrap();
        assert_eq!(v.to_string(), "(1+√5)/2");
    }

    #[test]
    fn periodic_value_from_collapsible_words() {
        let cf = periodic_cf_from_words(&w(&[]), &w(&[6, 2, 1, 0, 1, 2])).unwrap();
        assert_eq!(periodic_value(&cf).unwrap().to_string(), "(9+√105)/3");
        assert!(periodic_cf_from_words(&w(&[]), &w(&[3, 0])).is_err());
    }

    #[test]
    fn mobius_with_negative_leading_term() {
        // [-2; 1, 1, (2)] = -√2
        let cf = PeriodicCF::from_i64(&[-2, 1, 1], &[2]).unwrap();
        assert_eq!(periodic_value(&cf).unwrap().to_string(), "(0-√2)/1");
    }

    #[test]
    fn ratio_lemma_examples() {
        assert!(ratio_lemma_check(2, &int(7)).unwrap());
        assert!(ratio_lemma_check(3, &int(2)).unwrap());
        assert!(ratio_lemma_check(5, &int(1)).unwrap());
        let c = continuant(&w(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!((c.p, c.q), (int(8), int(5)));
        assert!(matches!(ratio_lemma_check(1, &int(3)), Err(Error::Usage(_))));
    }

    #[test]
    fn reversal_examples() {
        assert!(reversal_check(&w(&[2, 1, 1])).unwrap());
        assert!(reversal_check(&w(&[9, 1])).unwrap());
        assert!(reversal_check(&w(&[3, 1, 4, 1, 5, 9])).unwrap());
        assert!(reversal_check(&w(&[5])).is_err());
    }

    #[test]
    fn reversal_of_two_one_one() {
        let c = continuant(&w(&[1, 1, 2])).unwrap();
        assert_eq!((c.p, c.q), (int(5), int(3)));
    }
}
