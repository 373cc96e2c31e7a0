//! Convergent-denominator polynomials of `[overline N, x^(k)]`, their
//! generating-function identities, and numerical root loci.
//!
//! All identities here are exact comparisons in `Z[x]`. Floating point only
//! enters through [`hyperbola_roots`], [`numeric_roots`] and the residuals.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::sequences::{chebyshev_u_doubled, fib_poly};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn dist(self, other: ComplexPoint) -> f64 {
        (self.to_complex() - other.to_complex()).norm()
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Curve {
    /// `y² − x² = (N² − 1)/N²`
    H1,
    /// `3x⁴ − 18x²y² + 3y⁴ + 2x³ − 6xy² + 9x² − 9y² + 4x + 3 = 0`
    QuarticK4N3,
    /// Real roots in `(−4/N, 0]`.
    ChebyshevIntervalK1,
}

impl Curve {
    pub fn name(self) -> &'static str {
        match self {
            Curve::H1 => "h1",
            Curve::QuarticK4N3 => "quartic-k4",
            Curve::ChebyshevIntervalK1 => "chebk1",
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Curve::H1, Curve::QuarticK4N3, Curve::ChebyshevIntervalK1]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown curve '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocusReport {
    pub k: i64,
    pub big_n: i64,
    pub n: i64,
    pub curve: Curve,
    pub roots: Vec<ComplexPoint>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Usage(what.to_string()))
    }
}

fn constant(c: i64) -> IntPolynomial {
    IntPolynomial::constant(BigInt::from(c))
}

// Exact families

/// Partial quotient `a_j` of `[overline N, x^(k)]` for any integer `j`.
fn quotient(k: i64, big_n: i64, j: i64) -> IntPolynomial {
    if j.rem_euclid(k + 1) == 0 {
        constant(big_n)
    } else {
        IntPolynomial::x()
    }
}

/// Denominators `q_lo..=q_hi` where `lo ≤ −1`, running the recurrence
/// backwards below `q_{−1} = 0`, `q_0 = 1`.
fn denominators_window(k: i64, big_n: i64, lo: i64, hi: i64) -> Vec<IntPolynomial> {
    debug_assert!(lo <= -1 && hi >= 0);
    // back[i] = q_{-1-i}
    let mut back = vec![IntPolynomial::zero(), IntPolynomial::one()];
    let mut j = -1;
    while j - 1 > lo {
        // q_{j−2} = q_j − a_j·q_{j−1}
        let len = back.len();
        let next = &back[len - 2] - &(&quotient(k, big_n, j) * &back[len - 1]);
        back.push(next);
        j -= 1;
    }
    back.truncate((-1 - lo + 1) as usize);
    back.reverse();
    let mut out = back;
    let mut prev = IntPolynomial::zero();
    let mut cur = IntPolynomial::one();
    out.push(cur.clone());
    for j in 1..=hi {
        let next = &(&quotient(k, big_n, j) * &cur) + &prev;
        prev = std::mem::replace(&mut cur, next);
        out.push(cur.clone());
    }
    out
}

/// `q_1..=q_count` for `[overline N, x^(k)]`.
pub fn convergent_denominators(k: i64, big_n: i64, count: usize) -> Result<Vec<IntPolynomial>> {
    require(k >= 1 && big_n >= 1 && count >= 1, "needs k >= 1, N >= 1 and count >= 1")?;
    let w = denominators_window(k, big_n, -1, count as i64);
    Ok(w.into_iter().skip(2).collect())
}

/// `q_j` for any `j ≥ −(k + 2)`, with the recurrence continued backwards.
pub fn denominator(k: i64, big_n: i64, j: i64) -> Result<IntPolynomial> {
    require(k >= 1 && big_n >= 1, "needs k >= 1 and N >= 1")?;
    let lo = j.min(-1);
    let w = denominators_window(k, big_n, lo, j.max(0));
    Ok(w[(j - lo) as usize].clone())
}

/// `g_0 = N`, `g_1 = Nx + 2`, `g_{k+1} = x·g_k + g_{k−1}`.
pub fn g_poly(k: usize, big_n: i64) -> IntPolynomial {
    let x = IntPolynomial::x();
    let mut prev = constant(big_n);
    let mut cur = IntPolynomial::from_i64(&[2, big_n]);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = &(&x * &cur) + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `g_k = N·F_{k+1}(x) + 2·F_k(x)`
pub fn g_poly_closed_form(k: usize, big_n: i64) -> IntPolynomial {
    &fib_poly(k + 1).scale(&BigInt::from(big_n)) + &fib_poly(k).scale(&BigInt::from(2))
}

/// Checks `s_{j+1} = g_k·s_j + (−1)^k·s_{j−1}` for `j = 0..count`, where
/// `s_j = q_{j(k+1)+residue}` and `s_{−1}` comes from the backward recurrence.
pub fn subsequence_recurrence_check(k: i64, big_n: i64, residue: i64, count: usize) -> Result<bool> {
    require(k >= 1 && big_n >= 1, "needs k >= 1 and N >= 1")?;
    require((0..=k).contains(&residue), "residue must lie in 0..=k")?;
    let stride = k + 1;
    let lo = (residue - stride).min(-1);
    let hi = count as i64 * stride + residue;
    let w = denominators_window(k, big_n, lo, hi);
    let s = |j: i64| &w[(j * stride + residue - lo) as usize];
    let g = g_poly(k as usize, big_n);
    let sign = if k % 2 == 0 { 1 } else { -1 };
    Ok((0..count as i64).all(|j| {
        let rhs = &(&g * s(j)) + &s(j - 1).scale(&BigInt::from(sign));
        s(j + 1) == &rhs
    }))
}

/// `Q_m = q_{m(k+1)+k}` for `m = 0..count`.
pub fn residue_minus1_family(k: i64, big_n: i64, count: usize) -> Result<Vec<IntPolynomial>> {
    require(k >= 1 && big_n >= 1, "needs k >= 1 and N >= 1")?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let hi = (count as i64 - 1) * (k + 1) + k;
    let w = denominators_window(k, big_n, -1, hi);
    Ok((0..count as i64)
        .map(|m| w[(m * (k + 1) + k + 1) as usize].clone())
        .collect())
}

/// `F_{k+1}(x)·F_{m+1}(g_k)` for even `k`, `F_{k+1}(x)·Ũ_m(g_k)` for odd `k`.
pub fn residue_minus1_closed_form(k: i64, big_n: i64, m: usize) -> Result<IntPolynomial> {
    require(k >= 1 && big_n >= 1, "needs k >= 1 and N >= 1")?;
    let g = g_poly(k as usize, big_n);
    let outer = if k % 2 == 0 {
        fib_poly(m + 1)
    } else {
        chebyshev_u_doubled(m)
    };
    Ok(&fib_poly(k as usize + 1) * &outer.compose(&g))
}

/// Every `Q_m` for `m < count` is divisible by `F_{k+1}(x)` and matches its
/// Fibonacci or Chebyshev factorization.
pub fn factorization_check(k: i64, big_n: i64, count: usize) -> Result<bool> {
    let fk1 = fib_poly(k as usize + 1);
    for (m, q) in residue_minus1_family(k, big_n, count)?.iter().enumerate() {
        if q.checked_div(&fk1).is_none() || *q != residue_minus1_closed_form(k, big_n, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn shifted_step(big_n: i64) -> IntPolynomial {
    let n2 = big_n * big_n;
    IntPolynomial::from_i64(&[n2 - 1, 0, n2])
}

/// `Q_0 = 1`, `Q_1 = N²x² + N² − 1`, `Q_{n+1} = (N²x² + N² − 1)·Q_n + N²·Q_{n−1}`.
pub fn shifted_q(n: usize, big_n: i64) -> Result<IntPolynomial> {
    require(big_n >= 2, "needs N >= 2")?;
    let step = shifted_step(big_n);
    let n2 = BigInt::from(big_n * big_n);
    let mut prev = IntPolynomial::zero();
    let mut cur = IntPolynomial::one();
    for _ in 0..n {
        let next = &(&step * &cur) + &prev.scale(&n2);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `N^n·F_{n+1}(Nx² + N − 1/N)`, cleared of denominators.
pub fn shifted_q_closed_form(n: usize, big_n: i64) -> Result<IntPolynomial> {
    require(big_n >= 2, "needs N >= 2")?;
    Ok(fib_poly(n + 1).compose_homogenized(&shifted_step(big_n), &BigInt::from(big_n), n))
}

/// `Q_m(x) = N^m·(q_{3m+2}/(x² + 1))(x − 1/N)` with `q` from `[overline N, x, x]`.
pub fn shifted_q_from_denominators(m: usize, big_n: i64) -> Result<bool> {
    let q = denominator(2, big_n, 3 * m as i64 + 2)?;
    let Some(r) = q.checked_div(&IntPolynomial::from_i64(&[1, 0, 1])) else {
        return Ok(false);
    };
    let nn = BigInt::from(big_n);
    // N^(2m)·r((Nx − 1)/N), then divide by N^m.
    let wide = r.compose_homogenized(&IntPolynomial::from_i64(&[-1, big_n]), &nn, 2 * m);
    let scaled = IntPolynomial::constant(num_traits::pow(nn, m));
    Ok(wide.checked_div(&scaled).as_ref() == Some(&shifted_q(m, big_n)?))
}

/// `q_{2n+1} = x·Ũ_n(Nx + 2)` and `q_{2n} = Ũ_n(Nx + 2) − Ũ_{n−1}(Nx + 2)` for `k = 1`.
pub fn chebyshev_relation_check(n: usize, big_n: i64) -> Result<bool> {
    require(n >= 1 && big_n >= 1, "needs n >= 1 and N >= 1")?;
    let qs = convergent_denominators(1, big_n, 2 * n + 1)?;
    let y = IntPolynomial::from_i64(&[2, big_n]);
    let un = chebyshev_u_doubled(n).compose(&y);
    let un1 = chebyshev_u_doubled(n - 1).compose(&y);
    Ok(qs[2 * n] == &IntPolynomial::x() * &un && qs[2 * n - 1] == &un - &un1)
}

// Numerics

/// Closed-form roots of `shifted_q(n, N)`: for `θ_j = jπ/(n+1)`, `j = 1..=n`,
/// `sinh 2φ_j = 2N·cos θ_j/(N² − 1)` and `z = ±√(1 − 1/N²)·(sinh φ_j + i·cosh φ_j)`.
pub fn hyperbola_roots(n: usize, big_n: i64) -> Result<Vec<ComplexPoint>> {
    require(n >= 1 && big_n >= 2, "needs n >= 1 and N >= 2")?;
    let nf = big_n as f64;
    let scale = (1.0 - 1.0 / (nf * nf)).sqrt();
    let mut out = Vec::with_capacity(2 * n);
    for j in 1..=n {
        let theta = j as f64 * PI / (n as f64 + 1.0);
        let s = 2.0 * nf * theta.cos() / (nf * nf - 1.0);
        let phi = 0.5 * (s + (s * s + 1.0).sqrt()).ln();
        let z = ComplexPoint::new(scale * phi.sinh(), scale * phi.cosh());
        out.push(z);
        out.push(ComplexPoint::new(-z.re, -z.im));
    }
    Ok(out)
}

pub const ROOT_TOLERANCE: f64 = 1e-12;
pub const ROOT_BUDGET: usize = 500;
pub const ROOT_RESIDUAL: f64 = 1e-10;

/// `|p(z)| / (‖p‖₁·max(1, |z|)^deg)`, with `p(z)` evaluated exactly.
pub fn relative_residual(p: &IntPolynomial, z: Complex64) -> f64 {
    let deg = p.degree().unwrap_or(0) as i32;
    let scale = p.l1_norm_f64() * z.norm().max(1.0).powi(deg);
    if scale == 0.0 {
        return 0.0;
    }
    p.eval_complex_exact(z).norm() / scale
}

fn horner(cs: &[f64], z: Complex64) -> Complex64 {
    cs.iter().rev().fold(Complex64::zero(), |acc, &v| acc * z + v)
}

/// `p(z)/p'(z)` in `f64`, through the reversed polynomial when `|z| > 1` so
/// that large starting points do not overflow.
fn newton_ratio(c: &[f64], dc: &[f64], rev: &[f64], drev: &[f64], z: Complex64) -> Complex64 {
    if z.norm() <= 1.0 {
        return horner(c, z) / horner(dc, z);
    }
    let w = z.inv();
    let r = horner(rev, w);
    let deg = (c.len() - 1) as f64;
    z * r / (r * deg - w * horner(drev, w))
}

fn aberth_step(ratio: Complex64, z: &[Complex64], j: usize) -> Complex64 {
    let repulsion: Complex64 = (0..z.len())
        .filter(|&i| i != j)
        .map(|i| (z[j] - z[i]).inv())
        .sum();
    ratio / (Complex64::one() - ratio * repulsion)
}

const POLISH_BUDGET: usize = 60;

/// All complex roots with multiplicity by Aberth iteration from points on a
/// circle of radius `1 + max|c_i/c_deg|`.
///
/// The iteration first runs in `f64` (at most [`ROOT_BUDGET`] sweeps), then
/// polishes with `p` and `p'` evaluated exactly at each iterate. Convergence
/// means every update of the polishing sweep is below [`ROOT_TOLERANCE`]
/// relative to `max(1, |z|)`.
pub fn numeric_roots(p: &IntPolynomial) -> Result<Vec<ComplexPoint>> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Domain("numeric_roots needs degree >= 1".into())),
    };
    let c = p.to_f64();
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("coefficients overflow f64".into()));
    }
    let dp = p.derivative();
    let dc = dp.to_f64();
    let rev: Vec<f64> = c.iter().rev().copied().collect();
    let drev = IntPolynomial::new(p.coeffs().iter().rev().cloned().collect())
        .derivative()
        .to_f64();
    let lead = c[deg];
    let radius = 1.0 + c[..deg].iter().map(|v| (v / lead).abs()).fold(0.0, f64::max);

    let offset = 0.4;
    let mut z: Vec<Complex64> = (0..deg)
        .map(|j| Complex64::from_polar(radius, 2.0 * PI * j as f64 / deg as f64 + offset))
        .collect();
    let small = |step: Complex64, at: Complex64| step.norm() < ROOT_TOLERANCE * at.norm().max(1.0);

    for _ in 0..ROOT_BUDGET {
        let mut settled = true;
        for j in 0..deg {
            let step = aberth_step(newton_ratio(&c, &dc, &rev, &drev, z[j]), &z, j);
            if !step.is_finite() {
                settled = false;
                continue;
            }
            z[j] -= step;
            settled &= small(step, z[j]);
        }
        if settled {
            break;
        }
    }

    let mut done = vec![false; deg];
    for _ in 0..POLISH_BUDGET {
        for j in 0..deg {
            if done[j] {
                continue;
            }
            let pz = p.eval_complex_exact(z[j]);
            if pz.is_zero() {
                done[j] = true;
                continue;
            }
            let step = aberth_step(pz / dp.eval_complex_exact(z[j]), &z, j);
            if !step.is_finite() {
                continue;
            }
            z[j] -= step;
            done[j] = small(step, z[j]);
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }

    let converged = done.iter().all(|&d| d);
    let points: Vec<ComplexPoint> = z.iter().map(|&v| v.into()).collect();
    let worst = z.iter().map(|&v| relative_residual(p, v)).fold(0.0, f64::max);
    if !converged || worst.is_nan() || worst >= ROOT_RESIDUAL || points.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericFailure {
            message: format!(
                "degree {deg}: converged={converged}, worst relative residual {worst:e}"
            ),
            best: points,
        });
    }
    Ok(points)
}

/// Residual of one point against a curve. `big_n` is required for `H1` and
/// `ChebyshevIntervalK1`.
pub fn point_residual(z: ComplexPoint, curve: Curve, big_n: Option<i64>) -> Result<f64> {
    let (x, y) = (z.re, z.im);
    match curve {
        Curve::H1 => {
            let nf = curve_n(curve, big_n)? as f64;
            Ok((y * y - x * x - (nf * nf - 1.0) / (nf * nf)).abs())
        }
        Curve::QuarticK4N3 => {
            let (x2, y2) = (x * x, y * y);
            Ok((3.0 * x2 * x2 - 18.0 * x2 * y2 + 3.0 * y2 * y2 + 2.0 * x2 * x
                - 6.0 * x * y2
                + 9.0 * x2
                - 9.0 * y2
                + 4.0 * x
                + 3.0)
                .abs())
        }
        Curve::ChebyshevIntervalK1 => {
            let lo = -4.0 / curve_n(curve, big_n)? as f64;
            let outside = if x <= lo {
                lo - x
            } else if x > 0.0 {
                x
            } else {
                0.0
            };
            Ok(outside.max(y.abs()))
        }
    }
}

fn curve_n(curve: Curve, big_n: Option<i64>) -> Result<i64> {
    match big_n {
        Some(n) if n >= 1 => Ok(n),
        _ => Err(Error::Usage(format!("curve {curve} needs N >= 1"))),
    }
}

/// Maximum of [`point_residual`] over the points. For the interval curve this
/// is the distance by which any point leaves the real segment `(−4/N, 0]`.
pub fn locus_residual(points: &[ComplexPoint], curve: Curve, big_n: Option<i64>) -> Result<f64> {
    points.iter().try_fold(0.0, |acc: f64, &z| {
        Ok(acc.max(point_residual(z, curve, big_n)?))
    })
}

/// Largest distance in a greedy nearest-neighbour pairing of two point sets;
/// infinite if the sizes differ.
pub fn multiset_distance(a: &[ComplexPoint], b: &[ComplexPoint]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for &p in a {
        let best = (0..b.len())
            .filter(|&i| !used[i])
            .min_by(|&i, &j| p.dist(b[i]).total_cmp(&p.dist(b[j])));
        match best {
            Some(i) => {
                used[i] = true;
                worst = worst.max(p.dist(b[i]));
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

fn report(
    (k, big_n, n): (i64, i64, i64),
    curve: Curve,
    roots: Vec<ComplexPoint>,
    curve_n: Option<i64>,
) -> Result<LocusReport> {
    let residuals = roots
        .iter()
        .map(|&z| point_residual(z, curve, curve_n))
        .collect::<Result<Vec<_>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(LocusReport { k, big_n, n, curve, roots, residuals, max_residual })
}

/// Numeric roots of `shifted_q(n, N)` measured against `H1`.
pub fn h1_report(n: usize, big_n: i64) -> Result<LocusReport> {
    let roots = numeric_roots(&shifted_q(n, big_n)?)?;
    report((2, big_n, n as i64), Curve::H1, roots, Some(big_n))
}

/// Roots of `q_{2n+1}` for `k = 1`, measured against the interval `(−4/N, 0]`.
pub fn chebyshev_k1_report(n: usize, big_n: i64) -> Result<LocusReport> {
    require(n >= 1 && big_n >= 1, "needs n >= 1 and N >= 1")?;
    let q = &convergent_denominators(1, big_n, 2 * n + 1)?[2 * n];
    let roots = numeric_roots(q)?;
    report((1, big_n, n as i64), Curve::ChebyshevIntervalK1, roots, Some(big_n))
}

/// `(2/N)(cos(jπ/(n+1)) − 1)` for `j = 0..=n`, in increasing order.
pub fn k1_odd_root_formula(n: usize, big_n: i64) -> Vec<f64> {
    let nf = big_n as f64;
    (0..=n)
        .rev()
        .map(|j| 2.0 / nf * ((j as f64 * PI / (n as f64 + 1.0)).cos() - 1.0))
        .collect()
}

/// Largest gap between the roots of `q_{2n+1}` and the cosine formula,
/// counting imaginary parts as error.
pub fn k1_odd_root_deviation(n: usize, big_n: i64) -> Result<f64> {
    let r = chebyshev_k1_report(n, big_n)?;
    let expected: Vec<ComplexPoint> = k1_odd_root_formula(n, big_n)
        .into_iter()
        .map(|x| ComplexPoint::new(x, 0.0))
        .collect();
    Ok(multiset_distance(&expected, &r.roots))
}

/// Real and non-real roots of `q_{2n}` for `k = 1`, split by position
/// relative to `(−4/N, 0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenK1Roots {
    pub roots: Vec<ComplexPoint>,
    pub real_inside: usize,
    pub real_outside: usize,
    pub non_real: usize,
}

/// Classifies roots with `|im| ≤ 1e−8` as real.
pub fn k1_even_roots(n: usize, big_n: i64) -> Result<EvenK1Roots> {
    require(n >= 1 && big_n >= 1, "needs n >= 1 and N >= 1")?;
    let q = &convergent_denominators(1, big_n, 2 * n)?[2 * n - 1];
    let roots = numeric_roots(q)?;
    let lo = -4.0 / big_n as f64;
    let (mut inside, mut outside, mut non_real) = (0, 0, 0);
    for z in &roots {
        if z.im.abs() > 1e-8 {
            non_real += 1;
        } else if z.re > lo && z.re <= 0.0 {
            inside += 1;
        } else {
            outside += 1;
        }
    }
    Ok(EvenK1Roots { roots, real_inside: inside, real_outside: outside, non_real })
}

/// `Q_m(3, x)/F_5(x)` for `k = 4`, i.e. `F_{m+1}(g_4)` at `N = 3`.
pub fn quartic_family_member(m: usize) -> Result<IntPolynomial> {
    let q = residue_minus1_family(4, 3, m + 1)?.pop().unwrap_or_default();
    q.checked_div(&fib_poly(5))
        .ok_or_else(|| Error::Domain(format!("Q_{m}(3, x) not divisible by F_5")))
}

/// Roots of [`quartic_family_member`] measured against the quartic curve.
pub fn quartic_report(m: usize) -> Result<LocusReport> {
    require(m >= 1, "needs m >= 1")?;
    let roots = numeric_roots(&quartic_family_member(m)?)?;
    report((4, 3, m as i64), Curve::QuarticK4N3, roots, None)
}
