//! Families of quadratic surds whose expansions collapse to period 1, 2 or 4,
//! with predicted expansions checked against direct expansion.
//!
//! * `α_n(N) = N·F_n + √B_n(N)`, and `λ_n(N) = F_n·[overline 2N, 1^(n−1)]`,
//!   which equals it.
//! * `β_n(N) = N·L_n + √C_n(N)` for `N = 5k + 3`, and
//!   `μ_n(k) = L_n·[overline 2N, 1^(n−2), 2, 1, 2k, 1, 2, 1^(n−2)]`.
//! * `G_k(N, x) = N·F_k(x) + √β_k(N, x)` from Fibonacci polynomials at integer `x`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};

use crate::convergents::{canonicalize, periodic_value, CFWord, Mat2};
use crate::error::{Error, Result};
use crate::sequences::{fib_like, fib_poly_value, fibonacci, lucas, lucas_like};
use crate::surd::{PeriodicCF, QuadraticSurd, DEFAULT_MAX_STEPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Alpha,
    Lambda,
    Beta,
    Mu,
    GPoly,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Alpha,
        Family::Lambda,
        Family::Beta,
        Family::Mu,
        Family::GPoly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Alpha => "alpha",
            Family::Lambda => "lambda",
            Family::Beta => "beta",
            Family::Mu => "mu",
            Family::GPoly => "g",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown family '{s}'")))
    }
}

/// One parameter tuple of a family. `big_n` is the multiplier `N`; for the
/// Lucas families it is derived as `5k + 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremCase {
    Alpha { n: i64, big_n: i64 },
    Lambda { n: i64, big_n: i64 },
    Beta { n: i64, k: i64 },
    Mu { n: i64, k: i64 },
    GPoly { k: i64, big_n: i64, x: i64 },
}

impl TheoremCase {
    pub fn family(&self) -> Family {
        match self {
            TheoremCase::Alpha { .. } => Family::Alpha,
            TheoremCase::Lambda { .. } => Family::Lambda,
            TheoremCase::Beta { .. } => Family::Beta,
            TheoremCase::Mu { .. } => Family::Mu,
            TheoremCase::GPoly { .. } => Family::GPoly,
        }
    }

    pub fn big_n(&self) -> i64 {
        match *self {
            TheoremCase::Alpha { big_n, .. }
            | TheoremCase::Lambda { big_n, .. }
            | TheoremCase::GPoly { big_n, .. } => big_n,
            TheoremCase::Beta { k, .. } | TheoremCase::Mu { k, .. } => 5 * k + 3,
        }
    }

    /// `(n, N, k, x)` with `None` for parameters the family does not use.
    pub fn params(&self) -> (Option<i64>, i64, Option<i64>, Option<i64>) {
        match *self {
            TheoremCase::Alpha { n, big_n } | TheoremCase::Lambda { n, big_n } => {
                (Some(n), big_n, None, None)
            }
            TheoremCase::Beta { n, k } | TheoremCase::Mu { n, k } => {
                (Some(n), 5 * k + 3, Some(k), None)
            }
            TheoremCase::GPoly { k, big_n, x } => (None, big_n, Some(k), Some(x)),
        }
    }
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TheoremCase::Alpha { n, big_n } => write!(f, "alpha(n={n}, N={big_n})"),
            TheoremCase::Lambda { n, big_n } => write!(f, "lambda(n={n}, N={big_n})"),
            TheoremCase::Beta { n, k } => write!(f, "beta(n={n}, k={k})"),
            TheoremCase::Mu { n, k } => write!(f, "mu(n={n}, k={k})"),
            TheoremCase::GPoly { k, big_n, x } => write!(f, "g(k={k}, N={big_n}, x={x})"),
        }
    }
}

/// Outcome of checking one case: the constructed surd, the family's
/// discriminant (`B_n(N)`, `C_n(N)` or `β_k(N, x)`), and both expansions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub case: TheoremCase,
    pub surd: QuadraticSurd,
    pub discriminant: BigInt,
    pub predicted: PeriodicCF,
    pub computed: PeriodicCF,
    pub matched: bool,
    pub period_length: usize,
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Usage(what.to_string()))
    }
}

fn predicted(preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Result<PeriodicCF> {
    PeriodicCF::new(preperiod, period).map_err(|e| Error::TheoremEncoding(e.to_string()))
}

/// Surd with `Q = 1`: `P + √D`.
fn integral_surd(p: BigInt, d: BigInt) -> Result<QuadraticSurd> {
    QuadraticSurd::new(p, BigInt::one(), d)
}

// Fibonacci family

/// `B_n(N) = N²F_n² + F_n·F̃_n(2N)`
pub fn alpha_discriminant(n: i64, big_n: i64) -> Result<BigInt> {
    require(n >= 1 && big_n >= 1, "alpha needs n >= 1 and N >= 1")?;
    let nn = BigInt::from(big_n);
    let f = fibonacci(n)?;
    Ok(&nn * &nn * &f * &f + &f * fib_like(n, &(2 * &nn))?)
}

/// Larger root of `x² − 2N·F_n·x − F_n·F̃_n(2N)`.
pub fn alpha_surd(n: i64, big_n: i64) -> Result<QuadraticSurd> {
    let d = alpha_discriminant(n, big_n)?;
    integral_surd(BigInt::from(big_n) * fibonacci(n)?, d)
}

/// `[F̃_{n+1}(2N); (2F̃_{n+1}(N))]` for odd `n`,
/// `[F̃_{n+1}(2N) − 1; (1, 2F̃_{n+1}(N) − 2)]` for even `n`.
pub fn predicted_alpha_cf(n: i64, big_n: i64) -> Result<PeriodicCF> {
    require(n >= 1 && big_n >= 1, "alpha needs n >= 1 and N >= 1")?;
    let nn = BigInt::from(big_n);
    let head = fib_like(n + 1, &(2 * &nn))?;
    let tail = 2 * fib_like(n + 1, &nn)?;
    if n % 2 == 1 {
        predicted(vec![head], vec![tail])
    } else {
        predicted(vec![head - 1], vec![BigInt::one(), tail - 2])
    }
}

/// `[2N, 1^(n−1)]`
pub fn alpha_long_word(n: i64, big_n: i64) -> CFWord {
    let mut w = vec![BigInt::from(2 * big_n)];
    w.extend(std::iter::repeat_n(BigInt::one(), (n - 1) as usize));
    CFWord(w)
}

/// `F_n·[overline 2N, 1^(n−1)]`
pub fn lambda_surd(n: i64, big_n: i64) -> Result<QuadraticSurd> {
    require(n >= 1 && big_n >= 1, "lambda needs n >= 1 and N >= 1")?;
    let x = periodic_value(&PeriodicCF::new(vec![], alpha_long_word(n, big_n).0)?)?;
    x.scale(&fibonacci(n)?)
}

// Lucas family

fn lucas_n(k: i64) -> BigInt {
    BigInt::from(5 * k + 3)
}

/// `C_n(N) = N²L_n² + L_n·L̃_n(2N)` with `N = 5k + 3`.
pub fn beta_discriminant(n: i64, k: i64) -> Result<BigInt> {
    require(n >= 2 && k >= 0, "beta needs n >= 2 and k >= 0")?;
    let nn = lucas_n(k);
    let l = lucas(n)?;
    Ok(&nn * &nn * &l * &l + &l * lucas_like(n, &(2 * &nn))?)
}

/// Larger root of `x² − 2N·L_n·x − L_n·L̃_n(2N)` with `N = 5k + 3`.
pub fn beta_surd(n: i64, k: i64) -> Result<QuadraticSurd> {
    let d = beta_discriminant(n, k)?;
    integral_surd(lucas_n(k) * lucas(n)?, d)
}

/// `(2/5)·L̃_{n+1}(N)`, asserting integrality and agreement with the
/// equivalent form `2k·L_n + 2F_{n+1}`.
pub fn two_fifths_lucas(n: i64, k: i64) -> Result<BigInt> {
    let twice: BigInt = 2 * lucas_like(n + 1, &lucas_n(k))?;
    let (q, r) = twice.div_rem(&BigInt::from(5));
    if !r.is_zero() {
        return Err(Error::TheoremEncoding(format!(
            "2·L̃_{}({}) = {twice} is not divisible by 5",
            n + 1,
            5 * k + 3
        )));
    }
    let alt = 2 * k * lucas(n)? + 2 * fibonacci(n + 1)?;
    if alt != q {
        return Err(Error::TheoremEncoding(format!(
            "(2/5)L̃_{}(N) = {q} but 2kL_n + 2F_(n+1) = {alt}",
            n + 1
        )));
    }
    Ok(q)
}

/// Even `n`: `[L̃_{n+1}(2N); ((2/5)L̃_{n+1}(N), 2L̃_{n+1}(N))]`.
/// Odd `n`: `[L̃_{n+1}(2N) − 1; (1, (2/5)L̃_{n+1}(N) − 2, 1, 2L̃_{n+1}(N) − 2)]`.
pub fn predicted_beta_cf(n: i64, k: i64) -> Result<PeriodicCF> {
    require(n >= 2 && k >= 0, "beta needs n >= 2 and k >= 0")?;
    let nn = lucas_n(k);
    let head = lucas_like(n + 1, &(2 * &nn))?;
    let small = two_fifths_lucas(n, k)?;
    let large = 2 * lucas_like(n + 1, &nn)?;
    if n % 2 == 0 {
        predicted(vec![head], vec![small, large])
    } else {
        let one = BigInt::one();
        predicted(vec![head - 1], vec![one.clone(), small - 2, one, large - 2])
    }
}

/// `[2N, 1^(n−2), 2, 1, 2k, 1, 2, 1^(n−2)]` before zero collapse.
pub fn mu_word(n: i64, k: i64) -> CFWord {
    let ones = || std::iter::repeat_n(1i64, (n - 2) as usize);
    let raw: Vec<i64> = std::iter::once(2 * (5 * k + 3))
        .chain(ones())
        .chain([2, 1, 2 * k, 1, 2])
        .chain(ones())
        .collect();
    CFWord::from_i64(&raw)
}

/// `L_n·[overline mu_word(n, k)]`
pub fn mu_surd(n: i64, k: i64) -> Result<QuadraticSurd> {
    require(n >= 2 && k >= 0, "mu needs n >= 2 and k >= 0")?;
    let word = canonicalize(&mu_word(n, k));
    let y = periodic_value(&PeriodicCF::new(vec![], word.0)?)?;
    y.scale(&lucas(n)?)
}

/// The block `[2, 1, 2k, 1, 2]` multiplies out to `(6(3k+2) 6k+5; 6k+5 2k+2)`.
pub fn mu_middle_block(k: i64) -> Mat2 {
    Mat2::from_i64(6 * (3 * k + 2), 6 * k + 5, 6 * k + 5, 2 * k + 2)
}

/// Multiplies out the μ period word and checks the closed forms of all four
/// entries, each of which carries an exact division by 5, plus
/// `q_{n−1} − p_n = −(4/5)·N·L_n·L̃_{n+1}(N)`.
pub fn mu_matrix_identity(n: i64, k: i64) -> Result<bool> {
    require(n >= 2 && k >= 0, "mu needs n >= 2 and k >= 0")?;
    let m = mu_word(n, k).matrix();
    let middle = CFWord::from_i64(&[2, 1, 2 * k, 1, 2]).matrix();

    let nn = lucas_n(k);
    let k_ = BigInt::from(k);
    let l = lucas(n)?;
    let lp = lucas(n - 1)?;
    let lt_next = lucas_like(n + 1, &nn)?;
    let lt_2n = lucas_like(n, &(2 * &nn))?;
    let five = BigInt::from(5);

    // Each closed form is stated as (1/5)·X; check 5 | X and X/5 = entry.
    let fifth_is = |x: BigInt, entry: &BigInt| -> bool {
        x.is_multiple_of(&five) && &(x / &five) == entry
    };

    let n2 = &nn * &nn;
    let p_n = 4 * &n2 * &l * &l + 6 * &nn * &l * &lp + (&l * &l - &l * &lp + &lp * &lp);
    let p_prev_expanded = 4 * &n2 * &l * &lp
        + 2 * &nn * (&l * &l - &l * &lp)
        + 2 * &l * &lp
        + 5 * (4 * &k_ + 2) * &lp * &lp;
    let p_prev_factored = 2 * &lt_next * &lt_2n;
    let q_n_expanded = 2 * &nn * &l * &l + 2 * &l * &lp;
    let q_n_factored = 2 * &l * &lt_next;
    let sum_sq = &l * &l + &lp * &lp;
    let q_prev_ok = sum_sq.is_multiple_of(&five)
        && m.d == (2 * &k_ + 1) * &l * &lp + &sum_sq / &five;
    let combo = -4 * &nn * &l * &lt_next;

    Ok(middle == mu_middle_block(k)
        && fifth_is(p_n, &m.a)
        && fifth_is(p_prev_expanded, &m.b)
        && fifth_is(p_prev_factored, &m.b)
        && fifth_is(q_n_expanded, &m.c)
        && fifth_is(q_n_factored, &m.c)
        && q_prev_ok
        && fifth_is(combo, &(&m.d - &m.a)))
}

// Fibonacci polynomial family

fn g_parts(k: i64, big_n: i64, x: i64) -> Result<(BigInt, BigInt, BigInt, BigInt)> {
    require(k >= 1 && big_n >= 1 && x >= 1, "g needs k >= 1, N >= 1 and x >= 1")?;
    let xv = BigInt::from(x);
    Ok((
        BigInt::from(big_n),
        fib_poly_value(k, &xv)?,
        fib_poly_value(k - 1, &xv)?,
        fib_poly_value(k - 2, &xv)?,
    ))
}

/// `β_k(N, x) = N²F_k(x)² + F_k(x)·(2N·F_{k−1}(x) + F_{k−2}(x))`
pub fn g_discriminant(k: i64, big_n: i64, x: i64) -> Result<BigInt> {
    let (nn, fk, fk1, fk2) = g_parts(k, big_n, x)?;
    Ok(&nn * &nn * &fk * &fk + &fk * (2 * &nn * fk1 + fk2))
}

/// `G_k(N, x) = N·F_k(x) + √β_k(N, x)`; a square discriminant is an error.
pub fn g_surd(k: i64, big_n: i64, x: i64) -> Result<QuadraticSurd> {
    let (nn, fk, _, _) = g_parts(k, big_n, x)?;
    let d = g_discriminant(k, big_n, x)?;
    integral_surd(nn * fk, d)
}

/// Odd `k`: `[2N·F_k + F_{k−1}; (2N·F_k + 2F_{k−1})]`.
/// Even `k`: `[2N·F_k + F_{k−1} − 1; (1, 2N·F_k + 2F_{k−1} − 2)]`.
pub fn predicted_g_cf(k: i64, big_n: i64, x: i64) -> Result<PeriodicCF> {
    let (nn, fk, fk1, _) = g_parts(k, big_n, x)?;
    let head = 2 * &nn * &fk + &fk1;
    let tail = 2 * &nn * &fk + 2 * &fk1;
    if k % 2 == 1 {
        predicted(vec![head], vec![tail])
    } else {
        predicted(vec![head - 1], vec![BigInt::one(), tail - 2])
    }
}

/// `F_k(x)·[overline 2N, x^(k−1)]`, the long-period route to `G_k(N, x)`.
pub fn g_long_surd(k: i64, big_n: i64, x: i64) -> Result<QuadraticSurd> {
    let (_, fk, _, _) = g_parts(k, big_n, x)?;
    let mut word = vec![BigInt::from(2 * big_n)];
    word.extend(std::iter::repeat_n(BigInt::from(x), (k - 1) as usize));
    periodic_value(&PeriodicCF::new(vec![], word)?)?.scale(&fk)
}

// Harness

pub fn verify(case: &TheoremCase) -> Result<VerificationReport> {
    verify_with_budget(case, DEFAULT_MAX_STEPS)
}

pub fn verify_with_budget(case: &TheoremCase, max_steps: usize) -> Result<VerificationReport> {
    let (surd, discriminant, predicted) = match *case {
        TheoremCase::Alpha { n, big_n } => (
            alpha_surd(n, big_n)?,
            alpha_discriminant(n, big_n)?,
            predicted_alpha_cf(n, big_n)?,
        ),
        TheoremCase::Lambda { n, big_n } => (
            lambda_surd(n, big_n)?,
            alpha_discriminant(n, big_n)?,
            predicted_alpha_cf(n, big_n)?,
        ),
        TheoremCase::Beta { n, k } => (
            beta_surd(n, k)?,
            beta_discriminant(n, k)?,
            predicted_beta_cf(n, k)?,
        ),
        TheoremCase::Mu { n, k } => (
            mu_surd(n, k)?,
            beta_discriminant(n, k)?,
            predicted_beta_cf(n, k)?,
        ),
        TheoremCase::GPoly { k, big_n, x } => (
            g_surd(k, big_n, x)?,
            g_discriminant(k, big_n, x)?,
            predicted_g_cf(k, big_n, x)?,
        ),
    };
    let computed = surd.expand(max_steps)?;
    Ok(VerificationReport {
        case: *case,
        matched: predicted == computed,
        period_length: computed.period_len(),
        surd,
        discriminant,
        predicted,
        computed,
    })
}
