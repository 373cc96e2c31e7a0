use std::io::{self, Write};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use cfmul::convergents::periodic_cf_from_words;
use cfmul::families::{
    chebyshev_k1_report, convergent_denominators, g_poly, h1_report, hyperbola_roots,
    k1_even_roots, k1_odd_root_deviation, multiset_distance, quartic_report, shifted_q,
    LocusReport,
};
use cfmul::theorems::{verify_with_budget, TheoremCase};
use cfmul::{periodic_value, CFWord, Error, IntPolynomial, PeriodicCF, QuadraticSurd};

use crate::output::{opt, Record, Sink, SCHEMA_VERSION};
use crate::{Cli, Command, CurveArg, ExpandArgs, FamilyArg, LocusArgs, PolyArgs, PolyKind, ValueArgs, VerifyArgs};

/// Outcome of a command: the exit status, or an error to report.
enum Failure {
    Lib(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Domain(_) | Error::NotQuadraticIrrational(_) => 2,
        Error::BudgetExceeded(_) | Error::TheoremEncoding(_) | Error::NumericFailure { .. } => 1,
    }
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let mut sink = Sink::new(cli.format, out);
    let result = match &cli.command {
        Command::Expand(a) => expand(cli, a, &mut sink),
        Command::Value(a) => value(a, &mut sink),
        Command::Verify(a) => verify(cli, a, &mut sink, err),
        Command::Poly(a) => poly(a, &mut sink),
        Command::Locus(a) => locus(cli, a, &mut sink),
    };
    let flushed = sink.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => code,
        (Ok(_), Err(e)) | (Err(Failure::Io(e)), _) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        (Err(Failure::Usage(msg)), _) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        (Err(Failure::Lib(e)), _) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::NumericFailure { best, .. } = &e {
                for z in best {
                    let _ = writeln!(err, "  best iterate {z}");
                }
            }
            exit_code(&e)
        }
    }
}

fn parse_int(s: &str) -> std::result::Result<BigInt, Failure> {
    s.trim()
        .parse()
        .or_else(|_| usage(format!("'{s}' is not an integer")))
}

fn parse_list(s: &str) -> std::result::Result<Vec<BigInt>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_int).collect()
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

// expand

#[derive(Serialize)]
struct ExpandRecord {
    schema_version: u32,
    surd: String,
    p: String,
    q: String,
    d: String,
    preperiod: Vec<String>,
    period: Vec<String>,
    cf: String,
    period_length: usize,
}

impl Record for ExpandRecord {
    const HEADER: &'static [&'static str] =
        &["surd", "p", "q", "d", "preperiod", "period", "cf", "period_length"];

    fn row(&self) -> Vec<String> {
        vec![
            self.surd.clone(),
            self.p.clone(),
            self.q.clone(),
            self.d.clone(),
            self.preperiod.join(" "),
            self.period.join(" "),
            self.cf.clone(),
            self.period_length.to_string(),
        ]
    }

    fn text(&self) -> String {
        self.cf.clone()
    }
}

fn expand(cli: &Cli, a: &ExpandArgs, sink: &mut Sink) -> Outcome {
    let surd = match (&a.surd, &a.quadratic) {
        (Some(v), None) => {
            QuadraticSurd::new(parse_int(&v[0])?, parse_int(&v[1])?, parse_int(&v[2])?)?
        }
        (None, Some(v)) => {
            QuadraticSurd::from_quadratic(&parse_int(&v[0])?, &parse_int(&v[1])?, &parse_int(&v[2])?)?
        }
        _ => return usage("give exactly one of --surd or --quadratic"),
    };
    let cf = surd.expand(cli.max_steps)?;
    sink.emit(&ExpandRecord {
        schema_version: SCHEMA_VERSION,
        surd: surd.to_string(),
        p: surd.p().to_string(),
        q: surd.q().to_string(),
        d: surd.d().to_string(),
        preperiod: strings(cf.preperiod()),
        period: strings(cf.period()),
        cf: cf.to_string(),
        period_length: cf.period_len(),
    })?;
    Ok(0)
}

// value

#[derive(Serialize)]
struct ValueRecord {
    schema_version: u32,
    cf: String,
    surd: String,
    p: String,
    q: String,
    d: String,
    /// Constant term first.
    minimal_polynomial: Vec<String>,
}

impl ValueRecord {
    fn polynomial(&self) -> IntPolynomial {
        IntPolynomial::new(self.minimal_polynomial.iter().map(|c| c.parse().unwrap_or_default()).collect())
    }
}

impl Record for ValueRecord {
    const HEADER: &'static [&'static str] = &["cf", "surd", "p", "q", "d", "minimal_polynomial"];

    fn row(&self) -> Vec<String> {
        vec![
            self.cf.clone(),
            self.surd.clone(),
            self.p.clone(),
            self.q.clone(),
            self.d.clone(),
            self.minimal_polynomial.join(" "),
        ]
    }

    fn text(&self) -> String {
        format!(
            "{}\nP = {}, Q = {}, D = {}\nminimal polynomial: {}",
            self.surd,
            self.p,
            self.q,
            self.d,
            self.polynomial()
        )
    }
}

fn value(a: &ValueArgs, sink: &mut Sink) -> Outcome {
    let pre = CFWord(parse_list(a.pre.as_deref().unwrap_or(""))?);
    let period = CFWord(parse_list(&a.period)?);
    let cf: PeriodicCF = periodic_cf_from_words(&pre, &period)?;
    let surd = periodic_value(&cf)?;
    sink.emit(&ValueRecord {
        schema_version: SCHEMA_VERSION,
        cf: cf.to_string(),
        surd: surd.to_string(),
        p: surd.p().to_string(),
        q: surd.q().to_string(),
        d: surd.d().to_string(),
        minimal_polynomial: strings(&surd.minimal_polynomial()),
    })?;
    Ok(0)
}

// verify

fn parse_range(name: &str, s: &str) -> std::result::Result<Vec<i64>, Failure> {
    let bad = || Failure::Usage(format!("malformed range for --{name}: '{s}'"));
    let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (int(a)?, int(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = int(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(Failure::Usage(format!("empty range for --{name}: '{s}'")));
    }
    Ok((lo..=hi).collect())
}

fn required(name: &str, v: &Option<String>, family: &str) -> std::result::Result<Vec<i64>, Failure> {
    match v {
        Some(s) => parse_range(name, s),
        None => usage(format!("{family} needs --{name}")),
    }
}

fn unused(name: &str, v: &Option<String>, family: &str) -> std::result::Result<(), Failure> {
    match v {
        Some(_) => usage(format!("{family} does not take --{name}")),
        None => Ok(()),
    }
}

/// Cases in lexicographic order of the family's parameters.
fn cases(a: &VerifyArgs) -> std::result::Result<Vec<TheoremCase>, Failure> {
    let name = match a.family {
        FamilyArg::Alpha => "alpha",
        FamilyArg::Lambda => "lambda",
        FamilyArg::Beta => "beta",
        FamilyArg::Mu => "mu",
        FamilyArg::G => "g",
    };
    let mut out = Vec::new();
    match a.family {
        FamilyArg::Alpha | FamilyArg::Lambda => {
            let ns = required("n", &a.n, name)?;
            let bns = required("N", &a.big_n, name)?;
            unused("k", &a.k, name)?;
            unused("x", &a.x, name)?;
            for &n in &ns {
                for &big_n in &bns {
                    out.push(if a.family == FamilyArg::Alpha {
                        TheoremCase::Alpha { n, big_n }
                    } else {
                        TheoremCase::Lambda { n, big_n }
                    });
                }
            }
        }
        FamilyArg::Beta | FamilyArg::Mu => {
            let ns = required("n", &a.n, name)?;
            let ks = required("k", &a.k, name)?;
            unused("N", &a.big_n, name)?;
            unused("x", &a.x, name)?;
            for &n in &ns {
                for &k in &ks {
                    out.push(if a.family == FamilyArg::Beta {
                        TheoremCase::Beta { n, k }
                    } else {
                        TheoremCase::Mu { n, k }
                    });
                }
            }
        }
        FamilyArg::G => {
            let ks = required("k", &a.k, name)?;
            let bns = required("N", &a.big_n, name)?;
            let xs = required("x", &a.x, name)?;
            unused("n", &a.n, name)?;
            for &k in &ks {
                for &big_n in &bns {
                    for &x in &xs {
                        out.push(TheoremCase::GPoly { k, big_n, x });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct VerifyRecord {
    schema_version: u32,
    family: String,
    n: Option<i64>,
    #[serde(rename = "N")]
    big_n: i64,
    k: Option<i64>,
    x: Option<i64>,
    discriminant: Option<String>,
    surd: Option<String>,
    predicted: Option<String>,
    computed: Option<String>,
    matched: bool,
    period_length: Option<usize>,
    /// `matched`, `mismatch`, `degenerate` (square discriminant) or `error`.
    status: &'static str,
    message: Option<String>,
}

impl Record for VerifyRecord {
    const HEADER: &'static [&'static str] = &[
        "family",
        "n",
        "N",
        "k",
        "x",
        "discriminant",
        "surd",
        "predicted",
        "computed",
        "matched",
        "period_length",
        "status",
        "message",
    ];

    fn row(&self) -> Vec<String> {
        vec![
            self.family.clone(),
            opt(&self.n),
            self.big_n.to_string(),
            opt(&self.k),
            opt(&self.x),
            opt(&self.discriminant),
            opt(&self.surd),
            opt(&self.predicted),
            opt(&self.computed),
            self.matched.to_string(),
            opt(&self.period_length),
            self.status.to_string(),
            opt(&self.message),
        ]
    }

    fn text(&self) -> String {
        let mut params = Vec::new();
        if let Some(n) = self.n {
            params.push(format!("n={n}"));
        }
        params.push(format!("N={}", self.big_n));
        if let Some(k) = self.k {
            params.push(format!("k={k}"));
        }
        if let Some(x) = self.x {
            params.push(format!("x={x}"));
        }
        let head = format!("{} {}", self.family, params.join(" "));
        match self.status {
            "matched" => format!(
                "{head}: matched {} = {} (period {})",
                opt(&self.surd),
                opt(&self.computed),
                opt(&self.period_length)
            ),
            "mismatch" => format!(
                "{head}: MISMATCH {} predicted {} computed {}",
                opt(&self.surd),
                opt(&self.predicted),
                opt(&self.computed)
            ),
            status => format!("{head}: {status} {}", opt(&self.message)),
        }
    }
}

/// Out-of-domain parameters come back as `Err` so the sweep can stop with a
/// usage error instead of emitting a record.
fn verify_record(case: &TheoremCase, max_steps: usize) -> std::result::Result<VerifyRecord, String> {
    let (n, big_n, k, x) = case.params();
    let mut rec = VerifyRecord {
        schema_version: SCHEMA_VERSION,
        family: case.family().to_string(),
        n,
        big_n,
        k,
        x,
        discriminant: None,
        surd: None,
        predicted: None,
        computed: None,
        matched: false,
        period_length: None,
        status: "error",
        message: None,
    };
    match verify_with_budget(case, max_steps) {
        Ok(r) => {
            rec.discriminant = Some(r.discriminant.to_string());
            rec.surd = Some(r.surd.to_string());
            rec.predicted = Some(r.predicted.to_string());
            rec.computed = Some(r.computed.to_string());
            rec.matched = r.matched;
            rec.period_length = Some(r.period_length);
            rec.status = if r.matched { "matched" } else { "mismatch" };
        }
        Err(Error::NotQuadraticIrrational(msg)) => {
            rec.status = "degenerate";
            rec.message = Some(msg);
        }
        Err(Error::Usage(msg)) => return Err(msg),
        Err(e) => rec.message = Some(e.to_string()),
    }
    Ok(rec)
}

const CHUNK: usize = 256;

fn verify(cli: &Cli, a: &VerifyArgs, sink: &mut Sink, err: &mut dyn Write) -> Outcome {
    let all = cases(a)?;
    let (mut matched, mut degenerate, mut bad) = (0usize, 0usize, 0usize);
    for chunk in all.chunks(CHUNK) {
        let records = chunk
            .par_iter()
            .map(|c| verify_record(c, cli.max_steps))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(Failure::Usage)?;
        for r in &records {
            match r.status {
                "matched" => matched += 1,
                "degenerate" => degenerate += 1,
                _ => bad += 1,
            }
            sink.emit(r)?;
        }
    }
    writeln!(
        err,
        "{} cases: {matched} matched, {degenerate} degenerate, {bad} failed",
        all.len()
    )?;
    Ok(if bad == 0 { 0 } else { 1 })
}

// poly

#[derive(Serialize)]
struct PolyRecord {
    schema_version: u32,
    kind: &'static str,
    k: Option<i64>,
    #[serde(rename = "N")]
    big_n: i64,
    index: i64,
    degree: Option<usize>,
    /// Constant term first.
    coefficients: Vec<String>,
    polynomial: String,
}

impl Record for PolyRecord {
    const HEADER: &'static [&'static str] =
        &["kind", "k", "N", "index", "degree", "coefficients", "polynomial"];

    fn row(&self) -> Vec<String> {
        vec![
            self.kind.to_string(),
            opt(&self.k),
            self.big_n.to_string(),
            self.index.to_string(),
            opt(&self.degree),
            self.coefficients.join(","),
            self.polynomial.clone(),
        ]
    }

    fn text(&self) -> String {
        if self.coefficients.is_empty() {
            "0".to_string()
        } else {
            self.coefficients.join(",")
        }
    }
}

fn need(name: &str, v: Option<i64>, min: i64) -> std::result::Result<i64, Failure> {
    match v {
        Some(v) if v >= min => Ok(v),
        Some(v) => usage(format!("--{name} must be at least {min}, got {v}")),
        None => usage(format!("missing --{name}")),
    }
}

fn poly(a: &PolyArgs, sink: &mut Sink) -> Outcome {
    let big_n = need("N", a.big_n, 1)?;
    let record = |kind, k, index: i64, p: &IntPolynomial| PolyRecord {
        schema_version: SCHEMA_VERSION,
        kind,
        k,
        big_n,
        index,
        degree: p.degree(),
        coefficients: strings(p.coeffs()),
        polynomial: p.to_string(),
    };
    match a.kind {
        PolyKind::Family => {
            let k = need("k", a.k, 1)?;
            let count = need("count", a.count, 1)?;
            for (j, q) in convergent_denominators(k, big_n, count as usize)?.iter().enumerate() {
                sink.emit(&record("family", Some(k), j as i64 + 1, q))?;
            }
        }
        PolyKind::Shifted => {
            let n = need("n", a.n, 0)?;
            sink.emit(&record("shifted", None, n, &shifted_q(n as usize, big_n)?))?;
        }
        PolyKind::Gpoly => {
            let k = need("k", a.k, 0)?;
            sink.emit(&record("gpoly", Some(k), k, &g_poly(k as usize, big_n)))?;
        }
    }
    Ok(0)
}

// locus

#[derive(Serialize)]
struct LocusRecord {
    schema_version: u32,
    /// `root` or `summary`.
    record: &'static str,
    curve: &'static str,
    k: i64,
    #[serde(rename = "N")]
    big_n: i64,
    n: i64,
    index: Option<usize>,
    re: Option<f64>,
    im: Option<f64>,
    residual: Option<f64>,
    max_residual: Option<f64>,
    passed: Option<bool>,
    detail: Option<String>,
}

impl Record for LocusRecord {
    const HEADER: &'static [&'static str] = &[
        "record",
        "curve",
        "k",
        "N",
        "n",
        "index",
        "re",
        "im",
        "residual",
        "max_residual",
        "passed",
        "detail",
    ];

    fn row(&self) -> Vec<String> {
        vec![
            self.record.to_string(),
            self.curve.to_string(),
            self.k.to_string(),
            self.big_n.to_string(),
            self.n.to_string(),
            opt(&self.index),
            opt(&self.re),
            opt(&self.im),
            opt(&self.residual),
            opt(&self.max_residual),
            opt(&self.passed),
            opt(&self.detail),
        ]
    }

    fn text(&self) -> String {
        match self.record {
            "root" => format!(
                "  z{} = {:+.16e} {:+.16e}i  residual {:.3e}",
                opt(&self.index),
                self.re.unwrap_or(f64::NAN),
                self.im.unwrap_or(f64::NAN),
                self.residual.unwrap_or(f64::NAN)
            ),
            _ => format!(
                "{} k={} N={} n={}: max residual {:.3e}{}{}",
                self.curve,
                self.k,
                self.big_n,
                self.n,
                self.max_residual.unwrap_or(f64::NAN),
                self.detail.as_ref().map(|d| format!(", {d}")).unwrap_or_default(),
                match self.passed {
                    Some(true) => " [pass]",
                    Some(false) => " [FAIL]",
                    None => "",
                }
            ),
        }
    }
}

fn emit_report(sink: &mut Sink, r: &LocusReport, passed: Option<bool>, detail: Option<String>) -> io::Result<()> {
    let curve = r.curve.name();
    for (i, (z, res)) in r.roots.iter().zip(&r.residuals).enumerate() {
        sink.emit(&LocusRecord {
            schema_version: SCHEMA_VERSION,
            record: "root",
            curve,
            k: r.k,
            big_n: r.big_n,
            n: r.n,
            index: Some(i),
            re: Some(z.re),
            im: Some(z.im),
            residual: Some(*res),
            max_residual: None,
            passed: None,
            detail: None,
        })?;
    }
    sink.emit(&LocusRecord {
        schema_version: SCHEMA_VERSION,
        record: "summary",
        curve,
        k: r.k,
        big_n: r.big_n,
        n: r.n,
        index: None,
        re: None,
        im: None,
        residual: None,
        max_residual: Some(r.max_residual),
        passed,
        detail,
    })
}

fn locus(cli: &Cli, a: &LocusArgs, sink: &mut Sink) -> Outcome {
    let tol = cli.tolerance;
    match a.curve {
        CurveArg::H1 => {
            let n = need("n", a.n, 1)?;
            let big_n = need("N", a.big_n, 2)?;
            let r = h1_report(n as usize, big_n)?;
            let gap = multiset_distance(&hyperbola_roots(n as usize, big_n)?, &r.roots);
            let passed = r.max_residual < tol && gap < tol;
            emit_report(sink, &r, Some(passed), Some(format!("closed_form_gap={gap:e}")))?;
            Ok(if passed { 0 } else { 1 })
        }
        CurveArg::Chebk1 => {
            let n = need("n", a.n, 1)? as usize;
            let big_n = need("N", a.big_n, 1)?;
            let r = chebyshev_k1_report(n, big_n)?;
            let deviation = k1_odd_root_deviation(n, big_n)?;
            let even = k1_even_roots(n, big_n)?;
            let passed = r.max_residual < tol && deviation < tol && even.real_outside == 1;
            let detail = format!(
                "formula_deviation={deviation:e} even_real_inside={} even_real_outside={} even_non_real={}",
                even.real_inside, even.real_outside, even.non_real
            );
            emit_report(sink, &r, Some(passed), Some(detail))?;
            Ok(if passed { 0 } else { 1 })
        }
        CurveArg::QuarticK4 => {
            let ms = parse_list(&a.m)?;
            if ms.is_empty() {
                return usage("--m needs at least one index");
            }
            let mut residuals = Vec::new();
            for m in &ms {
                let m: usize = match m.try_into() {
                    Ok(v) if v >= 1 => v,
                    _ => return usage(format!("--m entries must be positive, got {m}")),
                };
                let r = quartic_report(m)?;
                residuals.push(r.max_residual);
                emit_report(sink, &r, None, None)?;
            }
            let decreasing = residuals.windows(2).all(|w| w[1] < w[0]);
            let trend = residuals.iter().map(|r| format!("{r:e}")).collect::<Vec<_>>().join(" > ");
            sink.emit(&LocusRecord {
                schema_version: SCHEMA_VERSION,
                record: "summary",
                curve: "quartic-k4",
                k: 4,
                big_n: 3,
                n: ms.last().and_then(|m| i64::try_from(m).ok()).unwrap_or(0),
                index: None,
                re: None,
                im: None,
                residual: None,
                max_residual: residuals.last().copied(),
                passed: Some(decreasing),
                detail: Some(format!("trend {trend}")),
            })?;
            Ok(if decreasing { 0 } else { 1 })
        }
    }
}
