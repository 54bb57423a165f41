//! The `mobfrob` command line.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit code
//! with everything that should go to stdout and stderr, so the binary is a
//! thin wrapper and tests can drive the CLI in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{self, Bound};
use crate::cache::{CacheStore, CACHE_ENV};
use crate::charsums;
use crate::curves::{self, CountRecord, CurveSpec};
use crate::diophantine::{self, CertifiedReal};
use crate::fields::{self, FieldDesc, FiniteField};
use crate::mobius::{self, Angle, Method, MobiusSumResult};
use crate::mp;
use crate::zeta::{self, FrobeniusSpectrum, LPolynomial};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "mobfrob", version, about = "Frobenius traces, angles and Möbius-weighted sums for curves over finite fields")]
pub struct Cli {
    /// Working precision in bits for multiprecision quantities (at least 64).
    #[arg(long, global = true, default_value_t = 128)]
    pub precision_bits: usize,
    /// Largest number of field elements any enumeration may visit.
    #[arg(long, global = true, default_value_t = fields::DEFAULT_ENUMERATION_BUDGET)]
    pub budget: u128,
    /// Largest N the Möbius sieve may be asked for.
    #[arg(long, global = true, default_value_t = mobius::DEFAULT_SIEVE_BUDGET)]
    pub sieve_limit: usize,
    /// Implied constant multiplying every bound right-hand side.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub slack: f64,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Point-count cache file.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point counts #C(F_{q^n}) and Frobenius traces for n = 1..n_max.
    CurveCount(CurveCountArgs),
    /// The L-polynomial P(T) rebuilt from point counts, and ordinarity.
    CurveZeta(CurveArgs),
    /// Certified Frobenius eigenvalues and angles.
    CurveAngles(CurveArgs),
    /// Möbius-weighted sums against a fixed angle or a curve's traces.
    MobiusSum(MobiusArgs),
    /// Explicit constants and bound right-hand sides.
    Bounds(BoundsArgs),
    /// Dirichlet approximants and irrationality-exponent probes.
    Approx(ApproxArgs),
    /// Kloosterman sums, their recurrence and Möbius-weighted angle sums.
    Kloosterman(KloostermanArgs),
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Curve, e.g. "elliptic 5^1 a=[1] b=[0]" or "hyperelliptic 3 f=[1,0,0,0,0,1]".
    #[arg(long)]
    pub curve: String,
}

#[derive(Debug, Args)]
pub struct CurveCountArgs {
    /// Curve, e.g. "elliptic 5^1 a=[1] b=[0]".
    #[arg(long)]
    pub curve: String,
    /// Largest extension degree (default 2g).
    #[arg(long)]
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Swapped,
    Both,
}

#[derive(Debug, Args)]
pub struct MobiusArgs {
    /// Angle in turns as a decimal string.
    #[arg(long, conflicts_with = "curve")]
    pub alpha: Option<String>,
    /// Curve whose normalised traces (or one angle) weight the sum.
    #[arg(long)]
    pub curve: Option<String>,
    /// Use only angle j (0-based, with multiplicity) of the curve.
    #[arg(long, requires = "curve")]
    pub angle: Option<usize>,
    /// Summation lengths, comma separated.
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Summation order for curve sums.
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    /// κ for the N^{1−1/(4κ+4)}(ln N)^4 bound with a decimal --alpha.
    #[arg(long)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub g: usize,
    /// Degrees d for the constant C(2, d), comma separated (default 2g).
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<u64>,
    /// N values for the right-hand sides, comma separated.
    #[arg(long = "n", value_delimiter = ',', default_value = "1000000")]
    pub n: Vec<u64>,
    /// s in the two-parameter exponential-sum bound.
    #[arg(long, default_value_t = 1)]
    pub s: u64,
    /// B in c·N(ln N)^{−B}.
    #[arg(long, default_value_t = 1.0)]
    pub davenport_b: f64,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// Real number as a decimal string (radius: one unit in the last digit).
    #[arg(long, conflicts_with = "curve")]
    pub alpha: Option<String>,
    /// Take α as an angle of this curve.
    #[arg(long, requires = "angle")]
    pub curve: Option<String>,
    /// Angle index (0-based, with multiplicity).
    #[arg(long)]
    pub angle: Option<usize>,
    /// N values for Dirichlet approximants, comma separated.
    #[arg(long = "n", value_delimiter = ',', conflicts_with = "probe")]
    pub n: Vec<u64>,
    /// Irrationality probe over convergents with denominator up to this.
    #[arg(long)]
    pub probe: Option<u64>,
    /// κ for the denominator lower bound ½(N/2π)^{1/κ} (curve default κ(q,g)).
    #[arg(long)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Args)]
pub struct KloostermanArgs {
    /// Field: q as a prime power, or "p^m" / "p^m/[modulus]".
    #[arg(long)]
    pub q: String,
    /// a as a residue or a coefficient list.
    #[arg(long, default_value = "1")]
    pub a: String,
    /// Largest extension degree.
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
    /// Also sum μ(n)cos(2πnφ) up to this N.
    #[arg(long)]
    pub mobius_n: Option<usize>,
}

/// Exit code and the text for both streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain { kind: String, message: String },
}

// innermost variant name from a Debug rendering: "Field(BudgetExceeded { .. })" -> "BudgetExceeded"
fn variant_name(debug: &str) -> String {
    let mut rest = debug;
    loop {
        let end = rest.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(rest.len());
        let name = &rest[..end];
        let tail = &rest[end..];
        match tail.strip_prefix('(') {
            Some(inner) if inner.starts_with(|c: char| c.is_ascii_uppercase()) => rest = inner,
            _ => return name.to_string(),
        }
    }
}

macro_rules! domain_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Domain { kind: variant_name(&format!("{e:?}")), message: e.to_string() }
            }
        }
    )*};
}

domain_errors!(
    curves::CurveError,
    fields::FieldError,
    zeta::ZetaError,
    mobius::MobiusError,
    bounds::BoundsError,
    diophantine::DiophantineError,
    charsums::CharSumError,
    crate::cache::CacheError
);

type Res<T> = std::result::Result<T, Failure>;

struct Ctx<'a> {
    cli: &'a Cli,
    name: &'static str,
    warnings: Vec<String>,
}

impl Ctx<'_> {
    fn bits(&self) -> usize {
        self.cli.precision_bits
    }

    fn digits(&self) -> usize {
        zeta::decimal_digits(self.bits())
    }

    fn usage(&self, msg: &str) -> Failure {
        let mut cmd = Cli::command();
        let help = cmd.find_subcommand_mut(self.name).map(|c| c.render_help().to_string()).unwrap_or_default();
        Failure::Usage(format!("error: {msg}\n\n{help}"))
    }

    fn meta(&self, units: &str) -> Value {
        json!({ "command": self.name, "precision_bits": self.bits(), "units": units })
    }

    fn header(&self, units: &str) -> String {
        format!("# mobfrob {} precision_bits={} units: {}\n", self.name, self.bits(), units)
    }

    fn format(&self, default: Format) -> Format {
        self.cli.format.unwrap_or(default)
    }

    fn parse_curve(&self, s: &str) -> Res<CurveSpec> {
        Ok(s.parse::<CurveSpec>()?)
    }

    fn counts(&mut self, spec: &CurveSpec, n_max: usize) -> Res<Vec<CountRecord>> {
        let budget = self.cli.budget;
        let Some(path) = self.cli.cache.clone() else {
            return Ok(curves::trace_sequence(spec, n_max, budget, None)?);
        };
        let (mut store, warning) = CacheStore::open_or_rebuild(path)?;
        if let Some(w) = warning {
            self.warnings.push(format!("warning: {w}; rebuilding"));
        }
        let records = curves::trace_sequence(spec, n_max, budget, Some(&mut store))?;
        store.save()?;
        Ok(records)
    }

    fn lpoly(&mut self, spec: &CurveSpec) -> Res<LPolynomial> {
        let records = self.counts(spec, 2 * spec.genus())?;
        Ok(zeta::reconstruct_l_polynomial(&records, spec.q(), spec.genus())?)
    }

    fn spectrum(&mut self, spec: &CurveSpec) -> Res<(LPolynomial, FrobeniusSpectrum)> {
        let lpoly = self.lpoly(spec)?;
        let spectrum = zeta::compute_spectrum_auto(&lpoly, self.bits())?;
        Ok((lpoly, spectrum))
    }

    fn curve_angle(&mut self, spec: &CurveSpec, j: usize) -> Res<(CertifiedReal, Angle, BigFloatPair)> {
        let (_, spectrum) = self.spectrum(spec)?;
        let angles = spectrum.angles();
        let Some(a) = angles.get(j) else {
            return Err(self.usage(&format!("angle index {j} out of range (curve has {} angles)", angles.len())));
        };
        let r = spectrum.angle_radius();
        Ok((CertifiedReal::from_bigfloat(a, &r), Angle::from_bigfloat(a, mp::to_f64_up(&r)), (a.clone(), r)))
    }

    fn sieve(&self, n: usize) -> Res<mobius::MobiusTable> {
        Ok(mobius::sieve_with_budget(n, self.cli.sieve_limit)?)
    }
}

type BigFloatPair = (astro_float::BigFloat, astro_float::BigFloat);

fn emit_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn ordinary(lpoly: &LPolynomial, spec: &CurveSpec) -> bool {
    zeta::is_ordinary(lpoly, spec.base().characteristic() as u64)
}

fn curve_count(ctx: &mut Ctx, a: &CurveCountArgs) -> Res<String> {
    let spec = ctx.parse_curve(&a.curve)?;
    let n_max = a.n_max.unwrap_or(2 * spec.genus());
    if n_max == 0 {
        return Err(ctx.usage("--n-max must be positive"));
    }
    let records = ctx.counts(&spec, n_max)?;
    let units = "count = #C(F_{q^n}) points; trace = q^n + 1 - count";
    Ok(match ctx.format(Format::Csv) {
        Format::Csv => {
            let mut out = ctx.header(units);
            writeln!(out, "# curve={} q={} g={}", spec, spec.q(), spec.genus()).unwrap();
            out.push_str("n,count,trace\n");
            for r in &records {
                writeln!(out, "{},{},{}", r.n, r.count, r.trace).unwrap();
            }
            out
        }
        Format::Json => emit_json(&json!({
            "meta": ctx.meta(units),
            "curve": spec.to_string(),
            "q": spec.q().to_string(),
            "g": spec.genus(),
            "records": records.iter().map(|r| json!({
                "n": r.n, "count": r.count.to_string(), "trace": r.trace.to_string()
            })).collect::<Vec<_>>(),
        })),
    })
}

fn curve_zeta(ctx: &mut Ctx, a: &CurveArgs) -> Res<String> {
    let spec = ctx.parse_curve(&a.curve)?;
    let lpoly = ctx.lpoly(&spec)?;
    let ord = ordinary(&lpoly, &spec);
    let units = "P(T) = sum c_i T^i, exact integer coefficients";
    Ok(match ctx.format(Format::Json) {
        Format::Json => emit_json(&json!({
            "meta": ctx.meta(units),
            "curve": spec.to_string(),
            "q": spec.q().to_string(),
            "g": spec.genus(),
            "P": lpoly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "ordinary": ord,
        })),
        Format::Csv => {
            let mut out = ctx.header(units);
            writeln!(out, "# curve={} q={} g={} ordinary={}", spec, spec.q(), spec.genus(), ord).unwrap();
            out.push_str("i,c_i\n");
            for (i, c) in lpoly.coeffs().iter().enumerate() {
                writeln!(out, "{i},{c}").unwrap();
            }
            out
        }
    })
}

fn curve_angles(ctx: &mut Ctx, a: &CurveArgs) -> Res<String> {
    let spec = ctx.parse_curve(&a.curve)?;
    let (lpoly, spectrum) = ctx.spectrum(&spec)?;
    let ord = ordinary(&lpoly, &spec);
    let units = "angle = arg(beta)/2pi in turns [0,1); re, im of beta; radii are certified error bounds";
    Ok(match ctx.format(Format::Json) {
        Format::Json => {
            let mut v = spectrum.to_json();
            v["meta"] = ctx.meta(units);
            v["curve"] = json!(spec.to_string());
            v["ordinary"] = json!(ord);
            v["P"] = json!(lpoly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
            emit_json(&v)
        }
        Format::Csv => {
            let d = ctx.digits();
            let mut out = ctx.header(units);
            writeln!(
                out,
                "# curve={} q={} g={} ordinary={} working_bits={}",
                spec,
                spec.q(),
                spec.genus(),
                ord,
                spectrum.precision_bits()
            )
            .unwrap();
            out.push_str("j,angle,re,im,multiplicity,radius,angle_radius\n");
            for (j, e) in spectrum.distinct().iter().enumerate() {
                writeln!(
                    out,
                    "{j},{},{},{},{},{},{}",
                    mp::to_decimal(&e.angle, d),
                    mp::to_decimal(&e.value.re, d),
                    mp::to_decimal(&e.value.im, d),
                    e.multiplicity,
                    mp::to_decimal(&e.radius, 6),
                    mp::to_decimal(&e.angle_radius, 6)
                )
                .unwrap();
            }
            out
        }
    })
}

fn mobius_sum(ctx: &mut Ctx, a: &MobiusArgs) -> Res<String> {
    if a.n.iter().any(|&n| n == 0) {
        return Err(ctx.usage("every --n must be positive"));
    }
    let n_max = *a.n.iter().max().expect("required");
    let slack = ctx.cli.slack;
    let mut results: Vec<MobiusSumResult> = Vec::new();
    let mut source = json!({});
    match (&a.alpha, &a.curve, a.angle) {
        (Some(alpha), None, _) => {
            let angle = Angle::from_decimal(alpha)?;
            let table = ctx.sieve(n_max)?;
            for &n in &a.n {
                let mut r = mobius::mobius_exponential_sum(&table, &angle, n)?;
                if let Some(kappa) = a.kappa {
                    r = r.with_bound(bounds::bound_rhs(&Bound::MuAlpha { n: n as u64, kappa }, slack)?.value);
                }
                results.push(r);
            }
            source = json!({ "alpha": alpha });
        }
        (None, Some(curve), Some(j)) => {
            let spec = ctx.parse_curve(curve)?;
            let (_, angle, _) = ctx.curve_angle(&spec, j)?;
            let kappa = mp::to_f64(&bounds::kappa_frobenius(spec.q(), spec.genus())?);
            let table = ctx.sieve(n_max)?;
            for &n in &a.n {
                let r = mobius::mobius_exponential_sum(&table, &angle, n)?;
                results.push(r.with_bound(bounds::bound_rhs(&Bound::MuAlpha { n: n as u64, kappa }, slack)?.value));
            }
            source = json!({ "curve": spec.to_string(), "angle": j });
        }
        (None, Some(curve), None) => {
            let spec = ctx.parse_curve(curve)?;
            let (_, spectrum) = ctx.spectrum(&spec)?;
            let table = ctx.sieve(n_max)?;
            let methods = match a.method {
                MethodArg::Direct => vec![Method::Direct],
                MethodArg::Swapped => vec![Method::Swapped],
                MethodArg::Both => vec![Method::Direct, Method::Swapped],
            };
            for &n in &a.n {
                let rhs = bounds::bound_rhs(&Bound::Theorem2 { n: n as u64, q: spec.q(), g: spec.genus() }, slack)?;
                for &m in &methods {
                    results.push(mobius::mobius_frobenius_sum(&table, &spectrum, n, m)?.with_bound(rhs.value));
                }
            }
            source = json!({ "curve": spec.to_string() });
        }
        _ => return Err(ctx.usage("give exactly one of --alpha or --curve")),
    }
    let units = "value = sum_{n<=N} mu(n) w(n) (real part); ratio = |value| / (slack * bound_rhs)";
    Ok(match ctx.format(Format::Csv) {
        Format::Csv => {
            let mut out = ctx.header(units);
            let src = source.as_object().unwrap();
            let desc: Vec<String> = src.iter().map(|(k, v)| format!("{k}={}", v.as_str().map_or(v.to_string(), str::to_string))).collect();
            writeln!(out, "# {} slack={}", desc.join(" "), slack).unwrap();
            writeln!(out, "{}", mobius::CSV_HEADER).unwrap();
            for r in &results {
                writeln!(out, "{}", r.csv_row()).unwrap();
            }
            out
        }
        Format::Json => emit_json(&json!({
            "meta": ctx.meta(units),
            "source": source,
            "slack": slack,
            "rows": results.iter().map(|r| json!({
                "N": r.n, "method": r.method.name(), "value": r.value, "imag": r.imag,
                "error_bound": r.error_bound, "bound_rhs": r.bound_rhs, "ratio": r.ratio(),
            })).collect::<Vec<_>>(),
        })),
    })
}

fn bounds_cmd(ctx: &mut Ctx, a: &BoundsArgs) -> Res<String> {
    let q = a.q as u128;
    let prof = bounds::profile(q, a.g)?;
    let d = ctx.digits().min(30);
    let gamma_direct = bounds::gamma_direct(q, a.g)?;
    let degrees = if a.d.is_empty() { vec![2 * a.g as u64] } else { a.d.clone() };
    let mut constants = Vec::new();
    for &deg in &degrees {
        constants.push((deg, bounds::bw_constant(2, deg)?));
    }
    let kappa = mp::to_f64(&prof.kappa_qg);
    let slack = ctx.cli.slack;
    let mut rhs = Vec::new();
    for &n in &a.n {
        for b in [
            Bound::Theorem2 { n, q, g: a.g },
            Bound::MuAlpha { n, kappa },
            Bound::MobExp2 { n, s: a.s },
            Bound::Davenport { n, b: a.davenport_b, c: 1.0 },
            Bound::GapLower { s: n, kappa },
        ] {
            let v = bounds::bound_rhs(&b, slack)?;
            rhs.push((b.name(), n, v));
        }
    }
    let units = "constants are dimensionless; rhs value = slack * bound, ln_value its natural log; N is s for gap_lower";
    Ok(match ctx.format(Format::Json) {
        Format::Json => emit_json(&json!({
            "meta": ctx.meta(units),
            "q": q.to_string(),
            "g": a.g,
            "C(2,d)": constants.iter().map(|(deg, c)| (deg.to_string(), json!(mp::to_decimal(c, d)))).collect::<serde_json::Map<_, _>>(),
            "kappa": mp::to_decimal(&prof.kappa_qg, d),
            "gamma": mp::to_decimal(&prof.gamma_qg, d),
            "gamma_direct": mp::to_decimal(&gamma_direct, d),
            "slack": slack,
            "rhs": rhs.iter().map(|(name, n, v)| json!({
                "name": name, "N": n, "ln_value": mp::to_decimal(&v.ln, 20), "value": v.value,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = ctx.header(units);
            writeln!(out, "# q={q} g={} slack={slack}", a.g).unwrap();
            out.push_str("name,N,value,ln_value\n");
            for (deg, c) in &constants {
                writeln!(out, "C(2;{deg}),,{},", mp::to_decimal(c, d)).unwrap();
            }
            writeln!(out, "kappa,,{},", mp::to_decimal(&prof.kappa_qg, d)).unwrap();
            writeln!(out, "gamma,,{},", mp::to_decimal(&prof.gamma_qg, d)).unwrap();
            writeln!(out, "gamma_direct,,{},", mp::to_decimal(&gamma_direct, d)).unwrap();
            for (name, n, v) in &rhs {
                writeln!(out, "{name},{n},{:.12e},{}", v.value, mp::to_decimal(&v.ln, 20)).unwrap();
            }
            out
        }
    })
}

fn approx(ctx: &mut Ctx, a: &ApproxArgs) -> Res<String> {
    let (alpha, mut kappa, source) = match (&a.alpha, &a.curve, a.angle) {
        (Some(s), None, None) => (CertifiedReal::from_decimal(s)?, None, json!({ "alpha": s })),
        (None, Some(c), Some(j)) => {
            let spec = ctx.parse_curve(c)?;
            let (real, _, _) = ctx.curve_angle(&spec, j)?;
            let k = mp::to_f64(&bounds::kappa_frobenius(spec.q(), spec.genus())?);
            (real, Some(k), json!({ "curve": spec.to_string(), "angle": j }))
        }
        _ => return Err(ctx.usage("give --alpha, or --curve with --angle")),
    };
    if a.kappa.is_some() {
        kappa = a.kappa;
    }
    let units = "gap = |alpha - r/s| at the interval midpoint; exponent = -ln(gap)/ln(s)";
    let fmt = ctx.format(Format::Csv);
    if let Some(s_max) = a.probe {
        let rows = diophantine::irrationality_probe(&alpha, s_max)?;
        return Ok(match fmt {
            Format::Csv => {
                let mut out = ctx.header(units);
                writeln!(out, "{},running_max", diophantine::PROBE_CSV_HEADER).unwrap();
                for r in &rows {
                    writeln!(out, "{},{:.9}", r.csv_row(), r.running_max).unwrap();
                }
                out
            }
            Format::Json => emit_json(&json!({ "meta": ctx.meta(units), "source": source, "probe": rows })),
        });
    }
    if a.n.is_empty() {
        return Err(ctx.usage("give --n or --probe"));
    }
    let mut rows = Vec::new();
    for &n in &a.n {
        let approx = diophantine::dirichlet_approximant(&alpha, n)?;
        let check = match kappa {
            Some(k) => Some(diophantine::large_denominator_check(&alpha, n, k)?),
            None => None,
        };
        rows.push((approx, check));
    }
    Ok(match fmt {
        Format::Csv => {
            let mut out = ctx.header(units);
            writeln!(out, "N,{},lower_bound,satisfied", diophantine::RationalApproximant::csv_header()).unwrap();
            for (ap, check) in &rows {
                let (lb, sat) = check.as_ref().map_or((String::new(), String::new()), |c| {
                    (format!("{:.12e}", c.lower_bound), c.satisfied.to_string())
                });
                writeln!(out, "{},{},{lb},{sat}", ap.n, ap.csv_row()).unwrap();
            }
            out
        }
        Format::Json => emit_json(&json!({
            "meta": ctx.meta(units),
            "source": source,
            "kappa": kappa,
            "rows": rows.iter().map(|(ap, c)| json!({
                "approximant": ap,
                "lower_bound": c.as_ref().map(|c| c.lower_bound),
                "satisfied": c.as_ref().map(|c| c.satisfied),
            })).collect::<Vec<_>>(),
        })),
    })
}

fn parse_field(s: &str) -> Res<Arc<FieldDesc>> {
    let s = s.trim();
    if !s.contains('^') && !s.contains('/') {
        if let Ok(q) = s.parse::<u64>() {
            let (p, m) = fields::primes::prime_power(q)
                .ok_or_else(|| Failure::Domain { kind: "NonPrimeP".into(), message: format!("{q} is not a prime power") })?;
            return Ok(Arc::new(fields::make_field(p as u64, m, None)?));
        }
    }
    Ok(Arc::new(s.parse::<FieldDesc>()?))
}

fn kloosterman(ctx: &mut Ctx, a: &KloostermanArgs) -> Res<String> {
    let base = parse_field(&a.q)?;
    let coeffs = if a.a.trim().starts_with('[') {
        fields::parse_list(&a.a).ok_or_else(|| ctx.usage(&format!("cannot parse --a {:?}", a.a)))?
    } else {
        vec![a.a.trim().parse::<u32>().map_err(|_| ctx.usage(&format!("cannot parse --a {:?}", a.a)))?]
    };
    let elem = base.element(&coeffs)?;
    let bits = ctx.bits();
    let rep = charsums::recurrence_check(&base, &elem, a.n_max, bits, ctx.cli.budget)?;
    let t1 = rep.rows[0].direct.clone();
    let t1_radius = charsums::kloosterman_sum(&base, &elem, 1, None, bits, ctx.cli.budget)?.radius;
    let spectrum = charsums::kloosterman_spectrum(base.order(), &t1, &t1_radius, bits)?;
    let mob = match a.mobius_n {
        Some(n) if n > 0 => {
            let table = ctx.sieve(n)?;
            Some(charsums::mobius_char_sum(&table, &spectrum, n, Method::Direct)?)
        }
        Some(_) => return Err(ctx.usage("--mobius-n must be positive")),
        None => None,
    };
    let d = ctx.digits();
    let units = "T_n = sum over F_{q^n}^* of psi(Tr(a x + 1/x)), unnormalised; recurrence T_{n+1} = -T_1 T_n - q T_{n-1}, T_0 = -2; phi in turns";
    let fmt = ctx.format(Format::Csv);
    Ok(match fmt {
        Format::Csv => {
            let mut out = ctx.header(units);
            writeln!(out, "# q={} a={:?}", base.order(), coeffs).unwrap();
            writeln!(out, "{}", charsums::RECURRENCE_CSV_HEADER).unwrap();
            for r in &rep.rows {
                writeln!(out, "{}", r.csv_row(d)).unwrap();
            }
            writeln!(out, "# max_deviation={:.3e}", rep.max_deviation).unwrap();
            writeln!(out, "# unsigned_recurrence_max_deviation={:.6e}", rep.unsigned_max_deviation).unwrap();
            writeln!(out, "# max_normalized={:.15}", rep.max_normalized).unwrap();
            writeln!(out, "# phi={} phi_radius={}", mp::to_decimal(&spectrum.phi, d), mp::to_decimal(&spectrum.phi_radius, 6)).unwrap();
            if let Some(m) = &mob {
                writeln!(out, "# mobius_N={} mobius_value={:.15e} mobius_error_bound={:.3e}", m.n, m.value, m.error_bound)
                    .unwrap();
            }
            out
        }
        Format::Json => emit_json(&json!({
            "meta": ctx.meta(units),
            "q": base.order().to_string(),
            "a": coeffs,
            "rows": rep.rows.iter().map(|r| json!({
                "n": r.n,
                "T_n_direct": mp::to_decimal(&r.direct, d),
                "T_n_recurrence": mp::to_decimal(&r.recurrence, d),
                "deviation": r.deviation,
            })).collect::<Vec<_>>(),
            "max_deviation": rep.max_deviation,
            "unsigned_recurrence_max_deviation": rep.unsigned_max_deviation,
            "max_normalized": rep.max_normalized,
            "phi": mp::to_decimal(&spectrum.phi, d),
            "phi_radius": mp::to_decimal(&spectrum.phi_radius, 6),
            "mobius": mob.map(|m| json!({ "N": m.n, "value": m.value, "error_bound": m.error_bound })),
        })),
    })
}

fn dispatch(cli: &Cli) -> (Res<String>, Vec<String>) {
    let name = match &cli.command {
        Command::CurveCount(_) => "curve-count",
        Command::CurveZeta(_) => "curve-zeta",
        Command::CurveAngles(_) => "curve-angles",
        Command::MobiusSum(_) => "mobius-sum",
        Command::Bounds(_) => "bounds",
        Command::Approx(_) => "approx",
        Command::Kloosterman(_) => "kloosterman",
    };
    let mut ctx = Ctx { cli, name, warnings: Vec::new() };
    let res = if cli.precision_bits < 64 {
        Err(ctx.usage("--precision-bits must be at least 64"))
    } else if cli.budget == 0 || cli.sieve_limit == 0 || cli.workers == Some(0) {
        Err(ctx.usage("budgets and --workers must be positive"))
    } else {
        match &cli.command {
            Command::CurveCount(a) => curve_count(&mut ctx, a),
            Command::CurveZeta(a) => curve_zeta(&mut ctx, a),
            Command::CurveAngles(a) => curve_angles(&mut ctx, a),
            Command::MobiusSum(a) => mobius_sum(&mut ctx, a),
            Command::Bounds(a) => bounds_cmd(&mut ctx, a),
            Command::Approx(a) => approx(&mut ctx, a),
            Command::Kloosterman(a) => kloosterman(&mut ctx, a),
        }
    };
    (res, ctx.warnings)
}

// help of the subcommand named in `args`, or of the whole program
fn grammar(args: &[OsString]) -> String {
    let mut cmd = Cli::command();
    let name = args.iter().skip(1).filter_map(|a| a.to_str()).find(|a| cmd.find_subcommand(a).is_some());
    match name {
        Some(n) => cmd.find_subcommand_mut(n).expect("found").render_help().to_string(),
        None => cmd.render_help().to_string(),
    }
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let mut text = e.render().to_string();
            if code == EXIT_USAGE {
                text.push('\n');
                text.push_str(&grammar(&args));
            }
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (res, warnings) = match cli.workers {
        Some(w) if w > 0 => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => (Err(Failure::Usage(format!("error: cannot start {w} workers: {e}"))), Vec::new()),
        },
        _ => dispatch(&cli),
    };
    let mut stderr: String = warnings.iter().map(|w| format!("{w}\n")).collect();
    match res {
        Ok(stdout) => Outcome { code: EXIT_OK, stdout, stderr },
        Err(Failure::Usage(msg)) => {
            stderr.push_str(&msg);
            Outcome { code: EXIT_USAGE, stdout: String::new(), stderr }
        }
        Err(Failure::Domain { kind, message }) => {
            writeln!(stderr, "error: {kind}: {message}").unwrap();
            Outcome { code: EXIT_DOMAIN, stdout: String::new(), stderr }
        }
    }
}
