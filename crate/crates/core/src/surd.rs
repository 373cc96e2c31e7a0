//! Quadratic surds `(P + √D)/Q` and their periodic continued fractions.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_perfect_square, isqrt, sign_plus_sqrt};
use crate::error::{Error, Result};

/// Step budget used when the caller has no better bound.
pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// Trial-division bound used when reducing a representation to minimal `|Q|`.
const TRIAL_LIMIT: u64 = 1_000_000;

/// The real number `(P + √D)/Q`.
///
/// Always stored normalized (`Q | D − P²`) and with the smallest `|Q|` among
/// normalized representations of the same value, so `==` is value equality.
/// The sign of `Q` is the sign of the coefficient of `√D`: `5 − √2` is stored
/// as `(−5 + √2)/(−1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn new(p: BigInt, q: BigInt, d: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::Domain("surd denominator Q must be nonzero".into()));
        }
        if !d.is_positive() || is_perfect_square(&d)? {
            return Err(Error::NotQuadraticIrrational(format!(
                "D = {d} must be positive and not a perfect square"
            )));
        }
        let (mut p, mut q, mut d) = (p, q, d);
        if !(&d - &p * &p).is_multiple_of(&q) {
            let scale = q.abs();
            d *= &scale * &scale;
            p *= &scale;
            q *= &scale;
        }
        Ok(Self { p, q, d }.reduced())
    }

    /// `(u + v√d)/w` for nonzero `v` and `w`.
    pub fn from_linear(u: BigInt, v: BigInt, w: BigInt, d: BigInt) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::NotQuadraticIrrational(
                "irrational coefficient is zero".into(),
            ));
        }
        let (u, v, w) = if v.is_negative() { (-u, -v, -w) } else { (u, v, w) };
        Self::new(u, w, &v * &v * d)
    }

    /// Larger real root of `a·x² + b·x + c`.
    pub fn from_quadratic(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Domain("leading coefficient must be nonzero".into()));
        }
        let disc = b * b - BigInt::from(4) * a * c;
        if !disc.is_positive() || is_perfect_square(&disc)? {
            return Err(Error::NotQuadraticIrrational(format!(
                "discriminant {disc} is not a positive non-square"
            )));
        }
        if a.is_positive() {
            Self::new(-b, BigInt::from(2) * a, disc)
        } else {
            Self::new(b.clone(), BigInt::from(-2) * a, disc)
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// `⌊(P + √D)/Q⌋`, exact for either sign of `Q`.
    pub fn floor(&self) -> BigInt {
        let root = isqrt(&self.d).expect("D is positive");
        floor_with_root(&self.p, &self.q, &root)
    }

    /// `(P − √D)/Q`.
    pub fn conjugate(&self) -> Self {
        Self {
            p: -&self.p,
            q: -&self.q,
            d: self.d.clone(),
        }
    }

    /// Exact comparison with an integer. Never `Equal` since the surd is irrational.
    pub fn cmp_integer(&self, t: &BigInt) -> Ordering {
        let ord = sign_plus_sqrt(&(&self.p - t * &self.q), &self.d);
        if self.q.is_negative() {
            ord.reverse()
        } else {
            ord
        }
    }

    /// `s > 1` and `−1 < s̄ < 0`, i.e. the expansion is purely periodic.
    pub fn is_reduced(&self) -> bool {
        let conj = self.conjugate();
        self.cmp_integer(&BigInt::one()) == Ordering::Greater
            && conj.cmp_integer(&BigInt::zero()) == Ordering::Less
            && conj.cmp_integer(&-BigInt::one()) == Ordering::Greater
    }

    /// `n·s` for `n ≥ 1`.
    pub fn scale(&self, n: &BigInt) -> Result<Self> {
        if !n.is_positive() {
            return Err(Error::Domain(format!("scale factor {n} must be positive")));
        }
        Self::new(n * &self.p, self.q.clone(), n * n * &self.d)
    }

    /// The (P, Q) recurrence, one partial quotient per step. Unbounded.
    pub fn partial_quotients(&self) -> PartialQuotients {
        PartialQuotients {
            root: isqrt(&self.d).expect("D is positive"),
            d: self.d.clone(),
            p: self.p.clone(),
            q: self.q.clone(),
        }
    }

    /// Expands until the first repeated `(P, Q)` state.
    pub fn expand(&self, max_steps: usize) -> Result<PeriodicCF> {
        let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
        let mut terms = Vec::new();
        for step in self.partial_quotients() {
            if let Some(&start) = seen.get(&(step.p.clone(), step.q.clone())) {
                let period = terms.split_off(start);
                return PeriodicCF::new(terms, period);
            }
            if terms.len() == max_steps {
                return Err(Error::BudgetExceeded(max_steps));
            }
            seen.insert((step.p, step.q), terms.len());
            terms.push(step.quotient);
        }
        unreachable!("partial quotient iterator is infinite")
    }

    /// Primitive integer polynomial `[c0, c1, c2]` (constant first) with
    /// positive leading coefficient having this surd as a root.
    pub fn minimal_polynomial(&self) -> [BigInt; 3] {
        let a = &self.q * &self.q;
        let b = BigInt::from(-2) * &self.p * &self.q;
        let c = &self.p * &self.p - &self.d;
        let g = a.gcd(&b).gcd(&c);
        [c / &g, b / &g, a / &g]
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.minimal_polynomial()[2].is_one()
    }

    /// Divides out the largest `g` that keeps the representation integral and
    /// normalized. Valid `g` are closed under divisors and lcm, so the
    /// result has minimal `|Q|` and is unique per value.
    fn reduced(self) -> Self {
        let x = &self.d - &self.p * &self.p;
        let c = self
            .p
            .gcd(&self.q)
            .gcd(&(&x / &self.q))
            .gcd(&self.d);
        if c.is_one() {
            return self;
        }
        let mut s = self;
        for f in candidate_factors(&c) {
            while s.divisible_by(&f) {
                s.p /= &f;
                s.q /= &f;
                s.d /= &f * &f;
            }
        }
        s
    }

    fn divisible_by(&self, f: &BigInt) -> bool {
        let f2 = f * f;
        if !self.p.is_multiple_of(f) || !self.q.is_multiple_of(f) || !self.d.is_multiple_of(&f2) {
            return false;
        }
        let x = (&self.d - &self.p * &self.p) / &f2;
        x.is_multiple_of(&(&self.q / f))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_negative() {
            write!(f, "({}-√{})/{}", -&self.p, self.d, -&self.q)
        } else {
            write!(f, "({}+√{})/{}", self.p, self.d, self.q)
        }
    }
}

fn floor_with_root(p: &BigInt, q: &BigInt, root: &BigInt) -> BigInt {
    if q.is_positive() {
        (p + root).div_floor(q)
    } else {
        let num: BigInt = -p - root - 1;
        num.div_floor(&-q)
    }
}

/// Prime factors of `c` up to the trial limit, then whatever cofactor remains.
fn candidate_factors(c: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if let Some(mut n) = c.abs().to_u64() {
        let mut f = 2u64;
        while f * f <= n && f <= TRIAL_LIMIT {
            if n % f == 0 {
                out.push(BigInt::from(f));
                while n % f == 0 {
                    n /= f;
                }
            }
            f += if f == 2 { 1 } else { 2 };
        }
        if n > 1 {
            out.push(BigInt::from(n));
        }
        return out;
    }
    let mut n = c.abs();
    let mut f = 2u64;
    while f <= TRIAL_LIMIT && BigInt::from(f * f) <= n {
        let fb = BigInt::from(f);
        if n.is_multiple_of(&fb) {
            while n.is_multiple_of(&fb) {
                n /= &fb;
            }
            out.push(fb);
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        out.push(n);
    }
    out
}

/// One step of the expansion: the state `(P, Q)` before extracting `quotient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub p: BigInt,
    pub q: BigInt,
    pub quotient: BigInt,
}

pub struct PartialQuotients {
    root: BigInt,
    d: BigInt,
    p: BigInt,
    q: BigInt,
}

impl Iterator for PartialQuotients {
    type Item = Step;

    fn next(&mut self) -> Option<Step> {
        let a = floor_with_root(&self.p, &self.q, &self.root);
        let p_next = &a * &self.q - &self.p;
        let num = &self.d - &p_next * &p_next;
        debug_assert!(num.is_multiple_of(&self.q));
        let q_next = num / &self.q;
        let p = std::mem::replace(&mut self.p, p_next);
        let q = std::mem::replace(&mut self.q, q_next);
        Some(Step { p, q, quotient: a })
    }
}

/// `[a0, …, ak; (b1, …, bn)]`: a preperiod followed by a repeating period.
///
/// Constructed values are canonical: the period is primitive and the
/// preperiod is as short as possible, so structural equality is value
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicCF {
    preperiod: Vec<BigInt>,
    period: Vec<BigInt>,
}

impl PeriodicCF {
    pub fn new(preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Usage("period must be nonempty".into()));
        }
        if let Some(bad) = period.iter().find(|a| !a.is_positive()) {
            return Err(Error::Usage(format!("period entry {bad} must be >= 1")));
        }
        if let Some(bad) = preperiod.iter().skip(1).find(|a| !a.is_positive()) {
            return Err(Error::Usage(format!("preperiod entry {bad} must be >= 1")));
        }
        Ok(Self { preperiod, period }.canonical())
    }

    pub fn from_i64(preperiod: &[i64], period: &[i64]) -> Result<Self> {
        Self::new(
            preperiod.iter().map(|&a| BigInt::from(a)).collect(),
            period.iter().map(|&a| BigInt::from(a)).collect(),
        )
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Partial quotient at position `i` of the infinite expansion.
    pub fn term(&self, i: usize) -> &BigInt {
        if i < self.preperiod.len() {
            &self.preperiod[i]
        } else {
            &self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    fn canonical(mut self) -> Self {
        let len = self.period.len();
        if let Some(k) = (1..len)
            .filter(|k| len.is_multiple_of(*k))
            .find(|&k| (k..len).all(|i| self.period[i] == self.period[i - k]))
        {
            self.period.truncate(k);
        }
        while self.preperiod.last().is_some_and(|a| Some(a) == self.period.last()) {
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
        self
    }
}

impl fmt::Display for PeriodicCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "[{}; ({})]", join(&self.preperiod), join(&self.period))
    }
}
