//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints its `criterion N: PASS|FAIL` line; exits nonzero if any
//! fails. Sweeps phrased as commands run the `cfmul` binary.

use std::process::{Command, ExitCode};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cfmul::convergents::{continuant, periodic_value, ratio_lemma_check};
use cfmul::families::{
    chebyshev_k1_report, chebyshev_relation_check, factorization_check, g_poly,
    g_poly_closed_form, hyperbola_roots, k1_even_roots, k1_odd_root_deviation, locus_residual,
    multiset_distance, numeric_roots, quartic_report, shifted_q, shifted_q_closed_form,
    subsequence_recurrence_check, Curve,
};
use cfmul::sequences::{fib_like, fibonacci, identity_check, Identity};
use cfmul::theorems::{
    alpha_long_word, alpha_surd, beta_surd, mu_matrix_identity, mu_surd, predicted_alpha_cf,
};
use cfmul::{PeriodicCF, QuadraticSurd, DEFAULT_MAX_STEPS};

static RESULTS: Mutex<Vec<(u32, bool, String)>> = Mutex::new(Vec::new());

fn report(id: u32, pass: bool, detail: &str) {
    RESULTS.lock().unwrap().push((id, pass, detail.to_string()));
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

struct Sweep {
    records: Vec<serde_json::Value>,
    status: Option<i32>,
    elapsed: Duration,
}

fn sweep(args: &[&str]) -> Sweep {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_cfmul"))
        .args(args)
        .args(["--format", "json"])
        .output()
        .expect("cfmul runs");
    let elapsed = start.elapsed();
    let records = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    Sweep { records, status: out.status.code(), elapsed }
}

/// Records that are not matched, or whose period length differs from `want`.
fn sweep_failures(s: &Sweep, want: impl Fn(&serde_json::Value) -> u64) -> Vec<String> {
    s.records
        .iter()
        .filter(|r| r["status"] != "matched" || r["period_length"].as_u64() != Some(want(r)))
        .map(|r| r.to_string())
        .collect()
}

fn criterion_01_alpha_sweep() {
    let s = sweep(&["verify", "alpha", "--n", "1..20", "--N", "1..10"]);
    let failures = sweep_failures(&s, |r| if r["n"].as_u64().unwrap() % 2 == 1 { 1 } else { 2 });
    let pass = failures.is_empty()
        && s.records.len() == 200
        && s.status == Some(0)
        && s.elapsed < Duration::from_secs(5);
    report(
        1,
        pass,
        &format!(
            "{} records, exit {:?}, failures {failures:?}, {:?}",
            s.records.len(),
            s.status,
            s.elapsed
        ),
    );
}

fn criterion_02_long_period_collapse() {
    let mut failures = Vec::new();
    for n in 1..=20 {
        for big_n in 1..=10 {
            let alpha = alpha_surd(n, big_n).unwrap();
            let word = alpha_long_word(n, big_n);
            let lambda = periodic_value(&PeriodicCF::new(vec![], word.0.clone()).unwrap())
                .unwrap()
                .scale(&fibonacci(n).unwrap())
                .unwrap();
            let c = continuant(&word).unwrap();
            let ok = lambda == alpha
                && lambda.expand(DEFAULT_MAX_STEPS).unwrap() == predicted_alpha_cf(n, big_n).unwrap()
                && c.p == fib_like(n + 1, &int(2 * big_n)).unwrap()
                && c.q == fibonacci(n).unwrap();
            if !ok {
                failures.push(format!("n={n} N={big_n}"));
            }
        }
    }
    report(2, failures.is_empty(), &format!("200 cases, mismatches {failures:?}"));
}

fn criterion_03_lucas_families() {
    let start = Instant::now();
    let by_parity = |r: &serde_json::Value| if r["n"].as_u64().unwrap().is_multiple_of(2) { 2 } else { 4 };
    let beta = sweep(&["verify", "beta", "--n", "2..15", "--k", "0..5"]);
    let mu = sweep(&["verify", "mu", "--n", "2..15", "--k", "0..5"]);
    let mut failures = sweep_failures(&beta, by_parity);
    failures.extend(sweep_failures(&mu, by_parity));
    if beta.records.len() != 84 || mu.records.len() != 84 || beta.status != Some(0) || mu.status != Some(0) {
        failures.push(format!(
            "beta {} records exit {:?}, mu {} records exit {:?}",
            beta.records.len(),
            beta.status,
            mu.records.len(),
            mu.status
        ));
    }
    for n in 2..=15 {
        for k in 0..=5 {
            if mu_surd(n, k).unwrap() != beta_surd(n, k).unwrap() {
                failures.push(format!("mu != beta at n={n} k={k}"));
            }
            if !mu_matrix_identity(n, k).unwrap() {
                failures.push(format!("matrix entries at n={n} k={k}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(10);
    report(3, pass, &format!("2 x 84 records, failures {failures:?}, {elapsed:?}"));
}

/// The `(P, Q, a)` states below were iterated by hand from
/// `a = ⌊(P + √D)/Q⌋`, `P' = aQ − P`, `Q' = (D − P'²)/Q`.
fn criterion_04_concrete_anchors() {
    struct Anchor {
        name: &'static str,
        surd: QuadraticSurd,
        display: &'static str,
        states: &'static [(i64, i64, i64)],
        cf: PeriodicCF,
    }
    let anchors = [
        Anchor {
            name: "alpha_1(1)",
            surd: alpha_surd(1, 1).unwrap(),
            display: "(1+√2)/1",
            states: &[(1, 1, 2), (1, 1, 2), (1, 1, 2)],
            cf: PeriodicCF::from_i64(&[2], &[2]).unwrap(),
        },
        Anchor {
            name: "beta_2(3)",
            surd: beta_surd(2, 0).unwrap(),
            display: "(9+√105)/1",
            states: &[(9, 1, 19), (10, 5, 4), (10, 1, 20), (10, 5, 4), (10, 1, 20)],
            cf: PeriodicCF::from_i64(&[19], &[4, 20]).unwrap(),
        },
        Anchor {
            name: "beta_3(3)",
            surd: beta_surd(3, 0).unwrap(),
            display: "(12+√220)/1",
            states: &[
                (12, 1, 26),
                (14, 24, 1),
                (10, 5, 4),
                (10, 24, 1),
                (14, 1, 28),
                (14, 24, 1),
                (10, 5, 4),
            ],
            cf: PeriodicCF::from_i64(&[26], &[1, 4, 1, 28]).unwrap(),
        },
        Anchor {
            name: "G_2(1,2)",
            surd: cfmul::theorems::g_surd(2, 1, 2).unwrap(),
            display: "(2+√8)/1",
            states: &[(2, 1, 4), (2, 4, 1), (2, 1, 4), (2, 4, 1)],
            cf: PeriodicCF::from_i64(&[4], &[1, 4]).unwrap(),
        },
    ];
    let mut failures = Vec::new();
    for a in &anchors {
        let steps: Vec<(BigInt, BigInt, BigInt)> = a
            .surd
            .partial_quotients()
            .take(a.states.len())
            .map(|s| (s.p, s.q, s.quotient))
            .collect();
        let want: Vec<(BigInt, BigInt, BigInt)> = a
            .states
            .iter()
            .map(|&(p, q, c)| (int(p), int(q), int(c)))
            .collect();
        let ok = a.surd.to_string() == a.display
            && steps == want
            && a.surd.expand(DEFAULT_MAX_STEPS).unwrap() == a.cf;
        if !ok {
            failures.push(a.name);
        }
    }
    report(4, failures.is_empty(), &format!("4 anchors, failures {failures:?}"));
}

fn criterion_05_fibonacci_polynomial_family() {
    let s = sweep(&["verify", "g", "--k", "1..12", "--N", "1..6", "--x", "1..6"]);
    let degenerate: Vec<String> = s
        .records
        .iter()
        .filter(|r| r["status"] == "degenerate")
        .map(|r| r.to_string())
        .collect();
    let failures: Vec<String> = s
        .records
        .iter()
        .filter(|r| r["status"] != "degenerate")
        .filter(|r| {
            let want = if r["k"].as_u64().unwrap() % 2 == 1 { 1 } else { 2 };
            r["status"] != "matched" || r["period_length"].as_u64() != Some(want)
        })
        .map(|r| r.to_string())
        .collect();
    let pass = failures.is_empty() && s.records.len() == 432 && s.status == Some(0);
    report(
        5,
        pass,
        &format!(
            "{} records, {} square-discriminant cases reported {degenerate:?}, exit {:?}, failures {failures:?}",
            s.records.len(),
            degenerate.len(),
            s.status
        ),
    );
}

fn criterion_06_identity_suite() {
    let mut failures = Vec::new();
    for n in 2..=200 {
        for id in [Identity::Fid, Identity::Luc5, Identity::Id1, Identity::Id2] {
            if !identity_check(id, n, None).unwrap() {
                failures.push(format!("{} n={n}", id.name()));
            }
        }
    }
    for k in 2..=60 {
        if !identity_check(Identity::Idf2, k, None).unwrap() {
            failures.push(format!("idf2 k={k}"));
        }
    }
    for n in 2..=30 {
        for m in 1..=20 {
            let arg = BigRational::from_integer(int(m));
            if !identity_check(Identity::Fib2a, n, Some(&arg)).unwrap() {
                failures.push(format!("fib2a n={n} m={m}"));
            }
            if !ratio_lemma_check(n, &int(m)).unwrap() {
                failures.push(format!("ratio lemma n={n} m={m}"));
            }
        }
    }
    report(6, failures.is_empty(), &format!("failures {failures:?}"));
}

fn criterion_07_polynomial_algebra() {
    let mut failures = Vec::new();
    for k in 1..=6 {
        for big_n in 1..=5 {
            for residue in 0..=k {
                if !subsequence_recurrence_check(k, big_n, residue, 8).unwrap() {
                    failures.push(format!("recurrence k={k} N={big_n} r={residue}"));
                }
            }
            if !factorization_check(k, big_n, 9).unwrap() {
                failures.push(format!("factorization k={k} N={big_n}"));
            }
        }
        if g_poly(k as usize, 3) != g_poly_closed_form(k as usize, 3) {
            failures.push(format!("g closed form k={k}"));
        }
    }
    for n in 0..=15 {
        for big_n in 2..=6 {
            if shifted_q(n, big_n).unwrap() != shifted_q_closed_form(n, big_n).unwrap() {
                failures.push(format!("shifted n={n} N={big_n}"));
            }
        }
    }
    for n in 1..=15 {
        for big_n in 1..=6 {
            if !chebyshev_relation_check(n, big_n).unwrap() {
                failures.push(format!("chebyshev n={n} N={big_n}"));
            }
        }
    }
    report(7, failures.is_empty(), &format!("failures {failures:?}"));
}

fn criterion_08_hyperbola_locus() {
    let mut worst_residual: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    let mut failures = Vec::new();
    for n in 1..=12 {
        for big_n in 2..=6 {
            let closed = hyperbola_roots(n, big_n).unwrap();
            let residual = locus_residual(&closed, Curve::H1, Some(big_n)).unwrap();
            let gap = match numeric_roots(&shifted_q(n, big_n).unwrap()) {
                Ok(roots) => multiset_distance(&closed, &roots),
                Err(e) => {
                    failures.push(format!("n={n} N={big_n}: {e}"));
                    f64::INFINITY
                }
            };
            worst_residual = worst_residual.max(residual);
            worst_gap = worst_gap.max(gap);
        }
    }
    let pass = failures.is_empty() && worst_residual < 1e-10 && worst_gap < 1e-8;
    report(
        8,
        pass,
        &format!("max residual {worst_residual:e}, max root gap {worst_gap:e}, failures {failures:?}"),
    );
}

fn criterion_09_chebyshev_interval() {
    let mut worst_dev: f64 = 0.0;
    let mut worst_interval: f64 = 0.0;
    let mut even_counts = Vec::new();
    let mut even_ok = true;
    for n in 1..=15 {
        for big_n in 1..=6 {
            worst_dev = worst_dev.max(k1_odd_root_deviation(n, big_n).unwrap());
            worst_interval = worst_interval.max(chebyshev_k1_report(n, big_n).unwrap().max_residual);
            let even = k1_even_roots(n, big_n).unwrap();
            if even.real_outside != 1 {
                even_ok = false;
                even_counts.push(format!(
                    "n={n} N={big_n}: {} inside/{} outside/{} non-real",
                    even.real_inside, even.real_outside, even.non_real
                ));
            }
        }
    }
    let odd_ok = worst_dev < 1e-10 && worst_interval < 1e-10;
    let shown: Vec<_> = even_counts.iter().take(3).collect();
    report(
        9,
        odd_ok && even_ok,
        &format!(
            "odd family: max deviation {worst_dev:e}, max interval violation {worst_interval:e}; \
             even family with exactly one real root outside: {} of 90 cases, e.g. {shown:?}",
            90 - even_counts.len()
        ),
    );
}

fn criterion_10_quartic_trend() {
    let r6 = quartic_report(6).unwrap();
    let r12 = quartic_report(12).unwrap();
    report(
        10,
        r12.max_residual < r6.max_residual,
        &format!("residual(6) = {:e}, residual(12) = {:e}", r6.max_residual, r12.max_residual),
    );
}

fn random_cf(rng: &mut ChaCha8Rng) -> PeriodicCF {
    let pre_len = rng.gen_range(0..=4);
    let mut pre: Vec<BigInt> = (0..pre_len).map(|_| int(rng.gen_range(1..=40))).collect();
    if let Some(first) = pre.first_mut() {
        *first = int(rng.gen_range(-40..=40));
    }
    let period_len = rng.gen_range(1..=6);
    let period = (0..period_len).map(|_| int(rng.gen_range(1..=40))).collect();
    PeriodicCF::new(pre, period).unwrap()
}

fn random_surd(rng: &mut ChaCha8Rng) -> QuadraticSurd {
    loop {
        let p = int(rng.gen_range(-200..=200));
        let q = int(rng.gen_range(1..=60) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let d = int(rng.gen_range(2..=5000));
        if let Ok(s) = QuadraticSurd::new(p, q, d) {
            return s;
        }
    }
}

fn criterion_11_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    for _ in 0..1000 {
        let cf = random_cf(&mut rng);
        let back = periodic_value(&cf).and_then(|s| s.expand(DEFAULT_MAX_STEPS));
        if back.as_ref() != Ok(&cf) {
            failures.push(format!("{cf} -> {back:?}"));
        }
        let s = random_surd(&mut rng);
        let back = s.expand(DEFAULT_MAX_STEPS).and_then(|cf| periodic_value(&cf));
        if back.as_ref() != Ok(&s) {
            failures.push(format!("{s} -> {back:?}"));
        }
    }
    report(
        11,
        failures.is_empty(),
        &format!("1000 + 1000 random inputs, failures {failures:?}"),
    );
}

fn main() -> ExitCode {
    let criteria = [
        (1, criterion_01_alpha_sweep as fn()),
        (2, criterion_02_long_period_collapse as fn()),
        (3, criterion_03_lucas_families as fn()),
        (4, criterion_04_concrete_anchors as fn()),
        (5, criterion_05_fibonacci_polynomial_family as fn()),
        (6, criterion_06_identity_suite as fn()),
        (7, criterion_07_polynomial_algebra as fn()),
        (8, criterion_08_hyperbola_locus as fn()),
        (9, criterion_09_chebyshev_interval as fn()),
        (10, criterion_10_quartic_trend as fn()),
        (11, criterion_11_round_trip as fn()),
    ];
    let started = Instant::now();
    let handles: Vec<_> = criteria
        .into_iter()
        .map(|(id, f)| (id, thread::spawn(f)))
        .collect();
    let mut panics = Vec::new();
    for (id, h) in handles {
        if let Err(e) = h.join() {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            panics.push((id, msg));
        }
    }
    let mut results = RESULTS.lock().unwrap().clone();
    for (id, msg) in panics {
        if !results.iter().any(|r| r.0 == id) {
            results.push((id, false, format!("panicked: {msg}")));
        }
    }
    results.sort_by_key(|r| r.0);
    for (id, pass, detail) in &results {
        println!("criterion {id:>2}: {} ({detail})", if *pass { "PASS" } else { "FAIL" });
    }
    let failed = results.iter().filter(|r| !r.1).count();
    println!(
        "acceptance: {} passed, {failed} failed in {:.1?}",
        results.len() - failed,
        started.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
