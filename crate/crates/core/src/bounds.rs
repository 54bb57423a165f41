//! Explicit constants and the right-hand sides of the Möbius sum bounds.
//!
//! Everything is evaluated at [`PRECISION`] bits with natural logarithms.
//! Bounds are computed in log space: with `κ` of order `10^12` the raw values
//! under- or overflow any floating format, while their logarithms do not.

use astro_float::BigFloat;
use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::mp;

pub const PRECISION: usize = 128;

/// `2^25 · 3^3`, the `n = 2` prefactor of the Baker–Wüstholz constant.
pub const BW2_PREFACTOR: u64 = 905_969_664;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, BoundsError>;

fn invalid<T>(msg: String) -> Result<T> {
    Err(BoundsError::InvalidParams(msg))
}

fn big(v: u64) -> BigFloat {
    mp::from_u64(v, PRECISION)
}

fn ln_u64(v: u64) -> BigFloat {
    mp::ln(&big(v), PRECISION)
}

/// `C(n, d) = 18 (n+1)! n^{n+1} (32d)^{n+2} ln(2nd)`.
pub fn bw_constant(n: u32, d: u64) -> Result<BigFloat> {
    if n < 2 || d < 1 {
        return invalid(format!("C(n, d) needs n ≥ 2 and d ≥ 1, got n = {n}, d = {d}"));
    }
    let fact: BigInt = (1..=n as u64 + 1).map(BigInt::from).product();
    let prefactor = BigInt::from(18) * fact * BigInt::from(n).pow(n + 1) * BigInt::from(32 * d).pow(n + 2);
    let p = PRECISION;
    Ok(mp::mul(&mp::from_bigint(&prefactor, p), &ln_u64(2 * n as u64 * d), p))
}

/// `C(2, d) = 2^25 3^3 d^4 ln(4d)` from the closed form.
pub fn bw_constant_2(d: u64) -> BigFloat {
    let p = PRECISION;
    let d4 = mp::from_bigint(&BigInt::from(d).pow(4), p);
    mp::mul(&mp::mul(&big(BW2_PREFACTOR), &d4, p), &ln_u64(4 * d), p)
}

/// Inputs of `κ(α)`: the degree `d` of `Q(e(α))` and `A_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaParams {
    pub d: u64,
    pub a1: f64,
}

impl KappaParams {
    pub fn new(d: u64, a1: f64) -> Result<Self> {
        if d < 2 {
            return invalid(format!("degree {d} < 2"));
        }
        if !(a1.is_finite() && a1 >= 1.0 / d as f64) {
            return invalid(format!("A_1 = {a1} below 1/d"));
        }
        Ok(KappaParams { d, a1 })
    }

    /// `A_1 = max{h, 2πα/d, 1/d}` with `α` first reduced to `[0, 1)`.
    pub fn from_angle(d: u64, height: f64, alpha: f64) -> Result<Self> {
        if d < 2 {
            return invalid(format!("degree {d} < 2"));
        }
        let alpha = alpha.rem_euclid(1.0);
        let a1 = height.max(std::f64::consts::TAU * alpha / d as f64).max(1.0 / d as f64);
        Self::new(d, a1)
    }
}

/// `κ(α) = 2^25 3^3 π d^3 A_1 ln(4d)`.
pub fn kappa_alpha(params: &KappaParams) -> BigFloat {
    let p = PRECISION;
    let d3 = mp::from_bigint(&BigInt::from(params.d).pow(3), p);
    let a1 = mp::from_f64(params.a1, p);
    kappa_alpha_big(&d3, &a1, &ln_u64(4 * params.d))
}

fn kappa_alpha_big(d3: &BigFloat, a1: &BigFloat, ln4d: &BigFloat) -> BigFloat {
    let p = PRECISION;
    let c = mp::mul(&big(BW2_PREFACTOR), &mp::pi(p), p);
    mp::mul(&mp::mul(&mp::mul(&c, d3, p), a1, p), ln4d, p)
}

fn check_qg(q: u128, g: usize) -> Result<()> {
    if q < 2 || g < 1 {
        return invalid(format!("need q ≥ 2 and g ≥ 1, got q = {q}, g = {g}"));
    }
    Ok(())
}

fn pi_plus_ln_q(q: u128) -> BigFloat {
    let p = PRECISION;
    mp::add(&mp::pi(p), &mp::ln(&mp::from_bigint(&BigInt::from(q), p), p), p)
}

/// `κ(q, g) = 2^31 3^3 π g^3 (π + ln q) ln(16g)`, obtained as `κ(α)` with
/// `d = 4g` and `A_1 = π + ln q`.
pub fn kappa_frobenius(q: u128, g: usize) -> Result<BigFloat> {
    check_qg(q, g)?;
    let d = 4 * g as u64;
    let d3 = mp::from_bigint(&BigInt::from(d).pow(3), PRECISION);
    Ok(kappa_alpha_big(&d3, &pi_plus_ln_q(q), &ln_u64(4 * d)))
}

/// `γ(q, g) = 4κ(q, g) + 4`.
pub fn gamma(q: u128, g: usize) -> Result<BigFloat> {
    let p = PRECISION;
    let k = kappa_frobenius(q, g)?;
    Ok(mp::add(&mp::mul(&big(4), &k, p), &big(4), p))
}

/// `γ(q, g) = 2^33 3^3 π g^3 (π + ln q) ln(16g) + 4`, written out directly.
pub fn gamma_direct(q: u128, g: usize) -> Result<BigFloat> {
    check_qg(q, g)?;
    let p = PRECISION;
    let c = mp::mul(&big((1u64 << 33) * 27), &mp::pi(p), p);
    let g3 = big((g as u64).pow(3));
    let t = mp::mul(&mp::mul(&mp::mul(&c, &g3, p), &pi_plus_ln_q(q), p), &ln_u64(16 * g as u64), p);
    Ok(mp::add(&t, &big(4), p))
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundProfile {
    pub q: u128,
    pub g: usize,
    #[serde(serialize_with = "as_decimal")]
    pub kappa_qg: BigFloat,
    #[serde(serialize_with = "as_decimal")]
    pub gamma_qg: BigFloat,
}

fn as_decimal<S: serde::Serializer>(x: &BigFloat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&mp::to_decimal(x, 30))
}

/// `κ(q, g)` and `γ(q, g)`, with the two routes to `γ` required to agree.
pub fn profile(q: u128, g: usize) -> Result<BoundProfile> {
    let kappa_qg = kappa_frobenius(q, g)?;
    let gamma_qg = gamma(q, g)?;
    let direct = gamma_direct(q, g)?;
    let rel = mp::to_f64(&mp::div(&mp::sub(&gamma_qg, &direct, PRECISION), &direct, PRECISION)).abs();
    assert!(rel < 1e-30, "the two γ formulas disagree by {rel:e}");
    Ok(BoundProfile { q, g, kappa_qg, gamma_qg })
}

/// A named right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    /// `1 / (π (2s)^{1+κ})`.
    GapLower { s: u64, kappa: f64 },
    /// `(s^{1/4} N^{1/4} + s^{-1/4} N^{1/2} + N^{2/5}) N^{1/2} (ln N)^4`.
    MobExp2 { n: u64, s: u64 },
    /// `N^{1 − 1/(4κ+4)} (ln N)^4`.
    MuAlpha { n: u64, kappa: f64 },
    /// `c N (ln N)^{−B}`.
    Davenport { n: u64, b: f64, c: f64 },
    /// `N^{1 − 1/γ(q,g)} (ln N)^4`.
    Theorem2 { n: u64, q: u128, g: usize },
}

impl Bound {
    pub fn name(&self) -> &'static str {
        match self {
            Bound::GapLower { .. } => "gap_lower",
            Bound::MobExp2 { .. } => "mobexp2",
            Bound::MuAlpha { .. } => "mu_alpha",
            Bound::Davenport { .. } => "davenport",
            Bound::Theorem2 { .. } => "theorem2",
        }
    }
}

pub const BOUND_NAMES: [&str; 5] = ["gap_lower", "mobexp2", "mu_alpha", "davenport", "theorem2"];

/// A bound value with its natural logarithm; `value` is `0` or `inf` when it
/// is outside the range of `f64`.
#[derive(Debug, Clone)]
pub struct BoundValue {
    pub ln: BigFloat,
    pub value: f64,
}

impl BoundValue {
    fn from_ln(ln: BigFloat) -> Self {
        let l = mp::to_f64(&ln);
        let value = if l < -745.2 {
            0.0
        } else if l > 709.7 {
            f64::INFINITY
        } else {
            mp::to_f64(&mp::exp(&ln, PRECISION))
        };
        BoundValue { ln, value }
    }

    pub fn ln_f64(&self) -> f64 {
        mp::to_f64(&self.ln)
    }
}

fn need_n(n: u64) -> Result<BigFloat> {
    if n < 2 {
        return invalid(format!("N = {n} < 2"));
    }
    Ok(ln_u64(n))
}

fn need_positive(name: &str, v: f64) -> Result<BigFloat> {
    if !(v > 0.0 && v.is_finite()) {
        return invalid(format!("{name} = {v} must be positive"));
    }
    Ok(mp::from_f64(v, PRECISION))
}

/// Evaluates `bound` times `slack` (the unknown implied constant).
pub fn bound_rhs(bound: &Bound, slack: f64) -> Result<BoundValue> {
    let p = PRECISION;
    let ln_slack = mp::ln(&need_positive("slack", slack)?, p);
    let four = big(4);
    // (ln N)^4 in log form
    let log_power = |ln_n: &BigFloat, k: &BigFloat| mp::mul(k, &mp::ln(ln_n, p), p);
    let ln = match bound {
        Bound::GapLower { s, kappa } => {
            if *s < 1 {
                return invalid("s must be ≥ 1".into());
            }
            let k = need_positive("kappa", *kappa)?;
            let e = mp::add(&big(1), &k, p);
            let t = mp::mul(&e, &ln_u64(2 * s), p);
            mp::sub(&mp::sub(&mp::from_u64(0, p), &mp::ln(&mp::pi(p), p), p), &t, p)
        }
        Bound::MobExp2 { n, s } => {
            let ln_n = need_n(*n)?;
            if *s < 1 {
                return invalid("s must be ≥ 1".into());
            }
            let (nf, sf) = (big(*n), big(*s));
            let pw = |x: &BigFloat, e: f64| mp::powf(x, &mp::from_f64(e, p), p);
            let bracket = mp::add(
                &mp::add(&mp::mul(&pw(&sf, 0.25), &pw(&nf, 0.25), p), &mp::mul(&pw(&sf, -0.25), &pw(&nf, 0.5), p), p),
                &pw(&nf, 0.4),
                p,
            );
            let ln_bracket = mp::ln(&bracket, p);
            mp::add(&mp::add(&ln_bracket, &mp::mul(&mp::from_f64(0.5, p), &ln_n, p), p), &log_power(&ln_n, &four), p)
        }
        Bound::MuAlpha { n, kappa } => {
            let ln_n = need_n(*n)?;
            let k = need_positive("kappa", *kappa)?;
            let denom = mp::add(&mp::mul(&four, &k, p), &four, p);
            exponent_form(&ln_n, &denom)
        }
        Bound::Davenport { n, b, c } => {
            let ln_n = need_n(*n)?;
            let ln_c = mp::ln(&need_positive("c", *c)?, p);
            if !(b.is_finite() && *b >= 0.0) {
                return invalid(format!("B = {b} must be ≥ 0"));
            }
            let bb = mp::from_f64(*b, p);
            mp::sub(&mp::add(&ln_c, &ln_n, p), &log_power(&ln_n, &bb), p)
        }
        Bound::Theorem2 { n, q, g } => {
            let ln_n = need_n(*n)?;
            exponent_form(&ln_n, &gamma(*q, *g)?)
        }
    };
    Ok(BoundValue::from_ln(mp::add(&ln, &ln_slack, p)))
}

// ln(N^{1 − 1/γ} (ln N)^4)
fn exponent_form(ln_n: &BigFloat, gamma: &BigFloat) -> BigFloat {
    let p = PRECISION;
    let e = mp::sub(&big(1), &mp::div(&big(1), gamma, p), p);
    mp::add(&mp::mul(&e, ln_n, p), &mp::mul(&big(4), &mp::ln(ln_n, p), p), p)
}
