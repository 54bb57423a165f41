//! Elliptic and hyperelliptic models in odd characteristic, with brute-force
//! point counting over `F_{q^n}`.
//!
//! For `y² = f(x)` the affine points over `F_{q^n}` number
//! `Σ_x (1 + χ(f(x)))`, where `χ` is the quadratic character. The smooth
//! projective model adds one point at infinity when `deg f` is odd, and
//! `1 + χ(lc f)` points when `deg f` is even.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::cache::CacheStore;
use crate::fields::{self, poly, ExtensionDesc, FieldDesc, FieldElement, FieldError, FiniteField, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("curve models need odd characteristic")]
    EvenCharacteristic,
    #[error("genus zero model (deg f = {0})")]
    GenusZero(usize),
    #[error("Weil bound violated at n = {n}: trace {trace}")]
    WeilViolation { n: usize, trace: i128 },
    #[error("cannot parse curve specification {0:?}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type Result<T> = std::result::Result<T, CurveError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveKind {
    /// `y² = x³ + a x + b`
    Elliptic { a: FieldElement, b: FieldElement },
    /// `y² = f(x)`, coefficients constant term first.
    Hyperelliptic { f: Vec<FieldElement> },
}

/// A validated curve model with its genus.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    base: Arc<FieldDesc>,
    kind: CurveKind,
    genus: usize,
    rhs: Poly,
}

/// `#C(F_{q^n})` and the Frobenius trace `A_C(n) = q^n + 1 − #C(F_{q^n})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CountRecord {
    pub n: usize,
    pub count: u128,
    pub trace: i128,
}

impl CountRecord {
    pub fn new(q: u128, n: usize, count: u128) -> Self {
        let qn = q.pow(n as u32) as i128;
        CountRecord { n, count, trace: qn + 1 - count as i128 }
    }

    /// `a_C(n) = A_C(n) / (2g q^{n/2})` in double precision.
    pub fn normalized_trace(&self, q: u128, genus: usize) -> f64 {
        self.trace as f64 / (2.0 * genus as f64 * (q as f64).powf(self.n as f64 / 2.0))
    }
}

/// Checks smoothness and computes the genus.
pub fn validate(base: Arc<FieldDesc>, kind: CurveKind) -> Result<CurveSpec> {
    if base.p() == 2 {
        return Err(CurveError::EvenCharacteristic);
    }
    let f = base.as_ref();
    let rhs: Poly = match &kind {
        CurveKind::Elliptic { a, b } => {
            f.check(a)?;
            f.check(b)?;
            // 4a³ + 27b²
            let a3 = f.pow(a, 3)?;
            let b2 = f.mul(b, b)?;
            let disc = f.add(&f.mul(&f.from_int(4), &a3)?, &f.mul(&f.from_int(27), &b2)?)?;
            if disc.is_zero() {
                return Err(CurveError::SingularCurve("4a³ + 27b² = 0".into()));
            }
            vec![b.coeffs().to_vec(), a.coeffs().to_vec(), f.zero_raw(), f.one_raw()]
        }
        CurveKind::Hyperelliptic { f: coeffs } => {
            for c in coeffs {
                f.check(c)?;
            }
            poly::trim(f, coeffs.iter().map(|c| c.coeffs().to_vec()).collect())
        }
    };
    let deg = poly::degree(f, &rhs).unwrap_or(0);
    if deg <= 2 {
        return Err(CurveError::GenusZero(deg));
    }
    let g = poly::gcd(f, &rhs, &poly::derivative(f, &rhs));
    if poly::degree(f, &g) != Some(0) {
        return Err(CurveError::SingularCurve("f is not squarefree".into()));
    }
    Ok(CurveSpec { base, kind, genus: (deg - 1) / 2, rhs })
}

impl CurveSpec {
    pub fn elliptic(base: Arc<FieldDesc>, a: FieldElement, b: FieldElement) -> Result<Self> {
        validate(base, CurveKind::Elliptic { a, b })
    }

    pub fn hyperelliptic(base: Arc<FieldDesc>, f: Vec<FieldElement>) -> Result<Self> {
        validate(base, CurveKind::Hyperelliptic { f })
    }

    /// Hyperelliptic curve over `F_p` from integer coefficients.
    pub fn hyperelliptic_over_prime(p: u64, f: &[i64]) -> Result<Self> {
        let base = Arc::new(fields::make_field(p, 1, None)?);
        let coeffs = f.iter().map(|&c| base.from_int(c)).collect();
        Self::hyperelliptic(base, coeffs)
    }

    /// Elliptic curve `y² = x³ + ax + b` over `F_p`.
    pub fn elliptic_over_prime(p: u64, a: i64, b: i64) -> Result<Self> {
        let base = Arc::new(fields::make_field(p, 1, None)?);
        let (a, b) = (base.from_int(a), base.from_int(b));
        Self::elliptic(base, a, b)
    }

    pub fn base(&self) -> &Arc<FieldDesc> {
        &self.base
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn q(&self) -> u128 {
        self.base.order()
    }

    /// Right-hand side `f` of `y² = f(x)` as a polynomial over the base.
    pub fn rhs(&self) -> &Poly {
        &self.rhs
    }

    /// Canonical string, used for cache keys.
    pub fn spec_string(&self) -> String {
        let m = self.base.m();
        let elem = |c: &[u32]| fields::format_list(c);
        match &self.kind {
            CurveKind::Elliptic { a, b } => {
                format!("elliptic {} a={} b={}", self.base.spec_string(), elem(a.coeffs()), elem(b.coeffs()))
            }
            CurveKind::Hyperelliptic { f } => {
                let body = if m == 1 {
                    let v: Vec<u32> = f.iter().map(|c| c.coeffs()[0]).collect();
                    fields::format_list(&v)
                } else {
                    let v: Vec<String> = f.iter().map(|c| elem(c.coeffs())).collect();
                    format!("[{}]", v.join(","))
                };
                format!("hyperelliptic {} f={}", self.base.spec_string(), body)
            }
        }
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

impl FromStr for CurveSpec {
    type Err = CurveError;

    /// `elliptic <field> a=<elem> b=<elem>` or `hyperelliptic <field> f=[...]`,
    /// where `<field>` is `p^m` or `p^m/[modulus]` and an element is a residue
    /// or a bracketed coefficient list.
    fn from_str(s: &str) -> Result<Self> {
        let err = || CurveError::Parse(s.to_string());
        let mut words = s.split_whitespace();
        let kind = words.next().ok_or_else(err)?;
        let field: FieldDesc = words.next().ok_or_else(err)?.parse()?;
        let base = Arc::new(field);
        let mut args = std::collections::BTreeMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(err)?;
            args.insert(k.to_string(), v.to_string());
        }
        let elem = |text: &str| -> Result<FieldElement> {
            let text = text.trim();
            let coeffs = if text.starts_with('[') {
                fields::parse_list(text).ok_or_else(err)?
            } else {
                vec![text.parse::<u32>().map_err(|_| err())?]
            };
            Ok(base.element(&coeffs)?)
        };
        match kind {
            "elliptic" => {
                let a = elem(args.get("a").ok_or_else(err)?)?;
                let b = elem(args.get("b").ok_or_else(err)?)?;
                CurveSpec::elliptic(base.clone(), a, b)
            }
            "hyperelliptic" => {
                let text = args.get("f").ok_or_else(err)?;
                let items = split_top_level(text).ok_or_else(err)?;
                let f = items.iter().map(|t| elem(t)).collect::<Result<Vec<_>>>()?;
                CurveSpec::hyperelliptic(base.clone(), f)
            }
            _ => Err(err()),
        }
    }
}

// "[1,[0,1],2]" -> ["1", "[0,1]", "2"]
fn split_top_level(s: &str) -> Option<Vec<String>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    Some(out)
}

/// Quadratic-character table of a field, indexed by element index.
struct SquareTable {
    bits: Vec<u64>,
}

impl SquareTable {
    fn build<F: FiniteField>(field: &F) -> Self {
        let q = field.order() as usize;
        let mut bits = vec![0u64; q.div_ceil(64)];
        // squares of x and -x coincide; half the field suffices but the
        // ordering of indices makes that awkward, so square everything
        let mut x = field.zero_raw();
        for _ in 0..q {
            let s = field.index_raw(&field.mul_raw(&x, &x)) as usize;
            bits[s / 64] |= 1 << (s % 64);
            increment(&mut x, field.characteristic());
        }
        SquareTable { bits }
    }

    fn chi(&self, index: usize) -> i64 {
        if index == 0 {
            0
        } else if self.bits[index / 64] >> (index % 64) & 1 == 1 {
            1
        } else {
            -1
        }
    }
}

fn increment(x: &mut [u32], p: u32) {
    for c in x.iter_mut() {
        *c += 1;
        if *c < p {
            return;
        }
        *c = 0;
    }
}

const CHUNK: u128 = 1 << 14;

/// Counts `#C(F_{q^n})` using the default extension modulus.
pub fn count_points(spec: &CurveSpec, n: usize, budget: u128) -> Result<CountRecord> {
    let order = spec.q().checked_pow(n as u32).ok_or(FieldError::Overflow)?;
    fields::check_budget(order, budget)?;
    let ext = fields::make_extension(spec.base.clone(), n, None)?;
    count_points_in(spec, &ext, budget)
}

/// Counts points over a caller-supplied model of `F_{q^n}`.
pub fn count_points_in(spec: &CurveSpec, ext: &ExtensionDesc, budget: u128) -> Result<CountRecord> {
    if ext.base().id() != spec.base.id() {
        return Err(FieldError::OwnerMismatch.into());
    }
    let order = ext.order();
    fields::check_budget(order, budget)?;
    let table = SquareTable::build(ext);
    let rhs: Vec<Vec<u32>> = spec.rhs.iter().map(|c| ext.embed_raw(c)).collect();
    let p = ext.characteristic();
    let chunks: Vec<u128> = (0..order.div_ceil(CHUNK)).collect();
    let affine: i64 = chunks
        .par_iter()
        .map(|&c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(order);
            let mut x = ext.from_index_raw(start);
            let mut acc = 0i64;
            for _ in start..end {
                let y = poly::eval(ext, &rhs, &x);
                acc += 1 + table.chi(ext.index_raw(&y) as usize);
                increment(&mut x, p);
            }
            acc
        })
        .sum();
    let deg = rhs.len() - 1;
    let at_infinity = if deg % 2 == 1 {
        1
    } else {
        1 + table.chi(ext.index_raw(&rhs[deg]) as usize)
    };
    let count = (affine + at_infinity) as u128;
    let record = CountRecord::new(spec.q(), ext.n(), count);
    // Weil: A² ≤ 4g² q^n
    let g = spec.genus as i128;
    if record.trace * record.trace > 4 * g * g * order as i128 {
        return Err(CurveError::WeilViolation { n: ext.n(), trace: record.trace });
    }
    Ok(record)
}

/// Records for `n = 1..=n_max`, served from `cache` when possible.
pub fn trace_sequence(
    spec: &CurveSpec,
    n_max: usize,
    budget: u128,
    mut cache: Option<&mut CacheStore>,
) -> Result<Vec<CountRecord>> {
    let order = spec.q().checked_pow(n_max as u32).ok_or(FieldError::Overflow)?;
    if n_max > 0 {
        fields::check_budget(order, budget)?;
    }
    (1..=n_max)
        .map(|n| match cache.as_deref_mut() {
            Some(store) => store.get_or_count(spec, n, budget),
            None => count_points(spec, n, budget),
        })
        .collect()
}
