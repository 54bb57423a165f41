//! The Möbius function and Möbius-weighted sums
//! `Σ_{n≤N} μ(n) e(nα)` and `Σ_{n≤N} μ(n) a_C(n)`.
//!
//! Terms are evaluated by the fixed-point [`kernel`] and accumulated as exact
//! integers over fixed blocks, so a sum does not depend on how many threads
//! computed it, and the direct and swapped orders of the Frobenius sum give
//! the same integer before the final conversion.

pub mod kernel;
pub mod sieve;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::mp;
use crate::zeta::FrobeniusSpectrum;

/// Largest table built without an explicit budget.
pub const DEFAULT_SIEVE_BUDGET: usize = 100_000_000;
/// Above this limit the segmented sieve is used.
pub const SEGMENT_THRESHOLD: usize = 10_000_000;
const SEGMENT: usize = 1 << 20;
const BLOCK: usize = 1 << 14;
/// Largest tolerated per-term error from the angle radius.
const MAX_TERM_ANGLE_ERR: f64 = 1.0 / (1u64 << 20) as f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MobiusError {
    #[error("sieve limit {limit} exceeds the budget {budget}")]
    BudgetExceeded { limit: usize, budget: usize },
    #[error("N = {n} exceeds the table limit {limit}")]
    BeyondTable { n: usize, limit: usize },
    #[error("angle radius {radius:e} is too coarse for N = {n}")]
    PrecisionExhausted { n: usize, radius: f64 },
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
}

pub type Result<T> = std::result::Result<T, MobiusError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTable {
    limit: usize,
    values: Vec<i8>,
    mertens: Option<Vec<i32>>,
}

/// `μ(1..=n)` under [`DEFAULT_SIEVE_BUDGET`].
pub fn sieve(n: usize) -> Result<MobiusTable> {
    sieve_with_budget(n, DEFAULT_SIEVE_BUDGET)
}

pub fn sieve_with_budget(n: usize, budget: usize) -> Result<MobiusTable> {
    if n > budget {
        return Err(MobiusError::BudgetExceeded { limit: n, budget });
    }
    let values = if n > SEGMENT_THRESHOLD { sieve::segmented(n, SEGMENT) } else { sieve::linear(n) };
    Ok(MobiusTable { limit: n, values, mertens: None })
}

impl MobiusTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    /// `μ(n)` for `1 ≤ n ≤ limit`.
    pub fn mu(&self, n: usize) -> i8 {
        self.values[n]
    }

    /// `μ(1..=limit)`.
    pub fn values(&self) -> &[i8] {
        &self.values[1..]
    }

    /// Precomputes the Mertens prefix sums.
    pub fn with_mertens(mut self) -> Self {
        let mut acc = 0i32;
        self.mertens = Some(
            self.values
                .iter()
                .map(|&m| {
                    acc += m as i32;
                    acc
                })
                .collect(),
        );
        self
    }

    /// `M(k) = Σ_{n≤k} μ(n)`.
    pub fn mertens(&self, k: usize) -> i64 {
        match &self.mertens {
            Some(m) => m[k] as i64,
            None => self.values[..=k].iter().map(|&m| m as i64).sum(),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.limit {
            return Err(MobiusError::BeyondTable { n, limit: self.limit });
        }
        Ok(())
    }

    // (#{n ≤ N squarefree}, Σ_{n ≤ N squarefree} n)
    fn support(&self, n: usize) -> (f64, f64) {
        let (count, weight) = self.values[1..=n]
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .fold((0u64, 0u128), |(c, w), (i, _)| (c + 1, w + i as u128 + 1));
        (count as f64, weight as f64)
    }
}

/// A point of `R/Z` as a 128-bit fraction of a turn, with an error radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    pub turns: u128,
    /// Distance (in turns) to the true angle, quantisation included.
    pub radius: f64,
}

const QUANTUM: f64 = 1.0 / 340282366920938463463374607431768211456.0; // 2^-128

impl Angle {
    /// Reduces `x` mod 1; `radius` is the error already carried by `x`.
    pub fn from_bigfloat(x: &BigFloat, radius: f64) -> Self {
        let modulus = BigInt::from(1u8) << 128;
        let t = mp::floor_scaled(x, 128).mod_floor(&modulus);
        Angle { turns: t.to_u128().expect("reduced"), radius: radius + QUANTUM }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::from_bigfloat(&mp::from_f64(x, 64), 0.0)
    }

    /// Decimal string such as `"0.1762"` or `"-1.5"`, read at 256 bits.
    pub fn from_decimal(s: &str) -> Result<Self> {
        let x = mp::parse_decimal(s.trim(), 256).ok_or_else(|| MobiusError::InvalidAngle(s.to_string()))?;
        if x.is_inf() {
            return Err(MobiusError::InvalidAngle(s.to_string()));
        }
        let rel = mp::to_f64(&x).abs().max(1.0) * 2f64.powi(-250);
        Ok(Self::from_bigfloat(&x, rel))
    }

    /// `num / den` mod 1.
    pub fn rational(num: i64, den: u64) -> Self {
        let x = mp::div(&mp::from_i64(num, 256), &mp::from_u64(den, 256), 256);
        Self::from_bigfloat(&x, 2f64.powi(-250))
    }

    pub fn to_f64(&self) -> f64 {
        self.turns as f64 * QUANTUM
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Swapped,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Swapped => "swapped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MobiusSumResult {
    pub n: usize,
    pub method: Method,
    pub value: f64,
    /// Imaginary part; zero for real sums up to rounding.
    pub imag: f64,
    pub error_bound: f64,
    pub bound_rhs: Option<f64>,
}

pub const CSV_HEADER: &str = "N,method,value,error_bound,bound_rhs,ratio";

impl MobiusSumResult {
    pub fn with_bound(mut self, rhs: f64) -> Self {
        self.bound_rhs = Some(rhs);
        self
    }

    /// `|value| / bound_rhs`.
    pub fn ratio(&self) -> Option<f64> {
        self.bound_rhs.map(|b| self.value.hypot(self.imag) / b)
    }

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.12e}"));
        format!(
            "{},{},{:.15e},{:.3e},{},{}",
            self.n,
            self.method.name(),
            self.value,
            self.error_bound,
            opt(self.bound_rhs),
            opt(self.ratio())
        )
    }
}

fn blocks(n: usize) -> Vec<(usize, usize)> {
    (1..=n).step_by(BLOCK).map(|lo| (lo, (lo + BLOCK - 1).min(n))).collect()
}

// Σ μ(k) e(kα) scaled by 2^62
fn exp_sum_fixed(table: &MobiusTable, turns: u128, n: usize) -> (i128, i128) {
    blocks(n)
        .par_iter()
        .map(|&(lo, hi)| {
            let (mut re, mut im) = (0i128, 0i128);
            for k in lo..=hi {
                let m = table.values[k];
                if m != 0 {
                    let (c, s) = kernel::cis(turns.wrapping_mul(k as u128));
                    re += m as i128 * c;
                    im += m as i128 * s;
                }
            }
            (re, im)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0, 0), |(a, b), (c, d)| (a + c, b + d))
}

fn check_angle(n: usize, a: &Angle) -> Result<()> {
    if std::f64::consts::TAU * n as f64 * a.radius > MAX_TERM_ANGLE_ERR {
        return Err(MobiusError::PrecisionExhausted { n, radius: a.radius });
    }
    Ok(())
}

// rounding of the final i128 → f64 conversion
fn conversion_err(v: f64) -> f64 {
    v.abs() * f64::EPSILON + f64::MIN_POSITIVE
}

/// `Σ_{n≤N} μ(n) e(nα)`.
pub fn mobius_exponential_sum(table: &MobiusTable, alpha: &Angle, n: usize) -> Result<MobiusSumResult> {
    table.check(n)?;
    check_angle(n, alpha)?;
    let (re, im) = exp_sum_fixed(table, alpha.turns, n);
    let (count, weight) = table.support(n);
    let (value, imag) = (kernel::to_f64(re), kernel::to_f64(im));
    let err = count * kernel::KERNEL_ERR * std::f64::consts::SQRT_2
        + std::f64::consts::TAU * alpha.radius * weight
        + conversion_err(value)
        + conversion_err(imag);
    Ok(MobiusSumResult { n, method: Method::Direct, value, imag, error_bound: err * (1.0 + 1e-9), bound_rhs: None })
}

/// Angles of a spectrum with multiplicities, reduced to [`Angle`]s.
pub fn spectrum_angles(spectrum: &FrobeniusSpectrum) -> Vec<(Angle, usize)> {
    spectrum
        .distinct()
        .iter()
        .map(|r| (Angle::from_bigfloat(&r.angle, mp::to_f64_up(&r.angle_radius)), r.multiplicity))
        .collect()
}

/// `S(N) = Σ_{n≤N} μ(n) a_C(n)` with `a_C(n) = (1/2g) Σ_j cos(2π n α_j)`.
///
/// `Direct` sums over `n` with `a_C(n)` formed term by term; `Swapped` sums
/// the exponential sums at each `α_j`. Both produce the same fixed-point
/// integer.
pub fn mobius_frobenius_sum(
    table: &MobiusTable,
    spectrum: &FrobeniusSpectrum,
    n: usize,
    method: Method,
) -> Result<MobiusSumResult> {
    let angles = spectrum_angles(spectrum);
    mobius_angle_sum(table, &angles, spectrum.genus(), n, method)
}

/// [`mobius_frobenius_sum`] from explicit angles with multiplicities summing
/// to `2g`.
pub fn mobius_angle_sum(
    table: &MobiusTable,
    angles: &[(Angle, usize)],
    genus: usize,
    n: usize,
    method: Method,
) -> Result<MobiusSumResult> {
    table.check(n)?;
    for (a, _) in angles {
        check_angle(n, a)?;
    }
    let (re, im) = match method {
        Method::Direct => {
            let re = blocks(n)
                .par_iter()
                .map(|&(lo, hi)| {
                    let mut acc = 0i128;
                    for k in lo..=hi {
                        let m = table.values[k];
                        if m != 0 {
                            let a: i128 = angles
                                .iter()
                                .map(|(a, mult)| *mult as i128 * kernel::cis(a.turns.wrapping_mul(k as u128)).0)
                                .sum();
                            acc += m as i128 * a;
                        }
                    }
                    acc
                })
                .collect::<Vec<_>>()
                .into_iter()
                .sum::<i128>();
            (re, 0)
        }
        Method::Swapped => angles.iter().fold((0i128, 0i128), |(re, im), (a, mult)| {
            let (r, i) = exp_sum_fixed(table, a.turns, n);
            (re + *mult as i128 * r, im + *mult as i128 * i)
        }),
    };
    let two_g = (2 * genus) as f64;
    let (count, weight) = table.support(n);
    let value = kernel::to_f64(re) / two_g;
    let imag = kernel::to_f64(im) / two_g;
    let per_angle: f64 = angles
        .iter()
        .map(|(a, mult)| *mult as f64 * (count * kernel::KERNEL_ERR + std::f64::consts::TAU * a.radius * weight))
        .sum();
    let err = per_angle / two_g + 2.0 * conversion_err(value);
    Ok(MobiusSumResult { n, method, value, imag, error_bound: err * (1.0 + 1e-9), bound_rhs: None })
}

/// `a_C(n)` in fixed point, for inspecting individual terms.
pub fn normalized_trace_fixed(angles: &[(Angle, usize)], genus: usize, n: usize) -> f64 {
    let s: i128 =
        angles.iter().map(|(a, mult)| *mult as i128 * kernel::cis(a.turns.wrapping_mul(n as u128)).0).sum();
    kernel::to_f64(s) / (2 * genus) as f64
}
