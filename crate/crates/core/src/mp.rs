//! Thin helpers over [`astro_float::BigFloat`].
//!
//! Every transcendental function in `astro-float` is correctly rounded, so a
//! single call contributes at most one ulp of the requested precision. The
//! helpers here keep the constants cache out of call sites and add the exact
//! conversions (to and from integers and rationals) that the certification
//! code relies on.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding used for values.
pub const RM: RoundingMode = RoundingMode::ToEven;

/// Rounding used for error bounds.
pub const UP: RoundingMode = RoundingMode::Up;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

pub fn pi(p: usize) -> BigFloat {
    with_consts(|cc| cc.pi(p, RM))
}

pub fn two_pi(p: usize) -> BigFloat {
    let mut x = pi(p + 64);
    x = x.mul(&BigFloat::from_u8(2, 64), p, RM);
    x
}

pub fn ln(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.ln(p, RM, cc))
}

pub fn exp(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.exp(p, RM, cc))
}

pub fn cos(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.cos(p, RM, cc))
}

pub fn sin(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.sin(p, RM, cc))
}

pub fn atan(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.atan(p, RM, cc))
}

pub fn sqrt(x: &BigFloat, p: usize) -> BigFloat {
    x.sqrt(p, RM)
}

/// `x^y` for positive `x`, through `exp(y ln x)`.
pub fn powf(x: &BigFloat, y: &BigFloat, p: usize) -> BigFloat {
    let l = ln(x, p + 64);
    exp(&l.mul(y, p + 64, RM), p)
}

pub fn from_i64(v: i64, p: usize) -> BigFloat {
    BigFloat::from_i64(v, p.max(64))
}

pub fn from_u64(v: u64, p: usize) -> BigFloat {
    BigFloat::from_u64(v, p.max(64))
}

pub fn from_f64(v: f64, p: usize) -> BigFloat {
    BigFloat::from_f64(v, p.max(64))
}

/// Rounds an integer to `p` bits (exact when `p` is at least its bit length).
pub fn from_bigint(v: &BigInt, p: usize) -> BigFloat {
    if v.is_zero() {
        return BigFloat::from_u8(0, p.max(64));
    }
    let mag = v.magnitude();
    let bits = mag.bits() as usize;
    let words_needed = bits.div_ceil(64);
    let shift = words_needed * 64 - bits;
    let normalized: BigUint = mag << shift;
    let words: Vec<Word> = normalized.to_u64_digits();
    let sign = if v.is_negative() { Sign::Neg } else { Sign::Pos };
    let exact = BigFloat::from_words(&words, sign, bits as i32);
    let mut out = exact;
    if out.precision().unwrap_or(0) > p.max(64) {
        out.set_precision(p.max(64), RM).expect("precision");
    }
    out
}

pub fn from_ratio(v: &BigRational, p: usize) -> BigFloat {
    let n = from_bigint(v.numer(), v.numer().bits() as usize + 64);
    let d = from_bigint(v.denom(), v.denom().bits() as usize + 64);
    n.div(&d, p, RM)
}

/// Exact value of a finite `BigFloat` as a rational number.
pub fn to_ratio(x: &BigFloat) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let (words, _n, sign, e, _) = x.as_raw_parts()?;
    let mant = BigUint::from_slice(
        &words
            .iter()
            .flat_map(|w| [(*w & 0xffff_ffff) as u32, (*w >> 32) as u32])
            .collect::<Vec<_>>(),
    );
    let shift = e as i64 - 64 * words.len() as i64;
    let s = if sign == Sign::Neg { BigSign::Minus } else { BigSign::Plus };
    let m = BigInt::from_biguint(s, mant);
    Some(if shift >= 0 {
        BigRational::from_integer(m << shift as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-shift) as usize)
    })
}

/// `floor(x · 2^k)` for a finite `x`.
pub fn floor_scaled(x: &BigFloat, k: usize) -> BigInt {
    let r = to_ratio(x).expect("finite value");
    let scaled = r * BigRational::from_integer(BigInt::one() << k);
    scaled.floor().to_integer()
}

/// Nearest `f64`.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let mut y = x.clone();
    y.set_precision(64, RM).expect("precision");
    let (words, _, sign, e, _) = y.as_raw_parts().expect("finite");
    let top = *words.last().expect("mantissa");
    // top has its msb set; value = top * 2^(e - 64)
    let v = (top as f64) * pow2(e as i64 - 64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Upper bound on `|x|` as an `f64` (never rounds a positive value to zero).
pub fn to_f64_up(x: &BigFloat) -> f64 {
    let v = to_f64(&x.abs()).abs();
    if v == 0.0 && !x.is_zero() {
        return f64::from_bits(1);
    }
    next_up(v)
}

fn next_up(v: f64) -> f64 {
    if v.is_infinite() || v.is_nan() {
        return v;
    }
    if v == 0.0 {
        return f64::from_bits(1);
    }
    f64::from_bits(v.to_bits() + 1)
}

fn pow2(e: i64) -> f64 {
    if e > 1023 {
        return f64::INFINITY;
    }
    if e < -1074 {
        return 0.0;
    }
    if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (e + 1074))
    }
}

/// `2^e` as a `BigFloat`.
pub fn pow2_big(e: i64) -> BigFloat {
    let mut x = BigFloat::from_u8(1, 64);
    x.set_exponent((e + 1) as i32);
    x
}

/// Decimal rendering with `digits` significant digits, deterministic.
pub fn to_decimal(x: &BigFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let bits = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 8;
    let mut y = x.clone();
    y.set_precision(bits.max(64), RM).expect("precision");
    let s = with_consts(|cc| y.format(Radix::Dec, RM, cc)).expect("format");
    trim_decimal(&s, digits)
}

// astro-float renders "d.ddd...e+k"; keep `digits` significant digits
fn trim_decimal(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e),
        None => return s.to_string(),
    };
    let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let keep = digits.saturating_sub(int.len());
    let frac: String = frac.chars().take(keep).collect();
    let frac = frac.trim_end_matches('0');
    let exp: i64 = exp.parse().unwrap_or(0);
    let mut out = String::from(sign);
    out.push_str(int);
    if !frac.is_empty() {
        out.push('.');
        out.push_str(frac);
    }
    if exp != 0 {
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}

pub fn parse_decimal(s: &str, p: usize) -> Option<BigFloat> {
    let x = with_consts(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc));
    if x.is_nan() {
        None
    } else {
        Some(x)
    }
}

/// Unit in the last place of `x` at precision `p` (as a power of two).
pub fn ulp(x: &BigFloat, p: usize) -> BigFloat {
    match x.exponent() {
        Some(e) if !x.is_zero() => pow2_big(e as i64 - p as i64),
        _ => pow2_big(-(p as i64)),
    }
}

pub fn add(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    a.add(b, p, RM)
}

pub fn sub(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    a.sub(b, p, RM)
}

pub fn mul(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    a.mul(b, p, RM)
}

pub fn div(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    a.div(b, p, RM)
}

/// Upper-rounded sum for error bounds.
pub fn add_up(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, 64, UP)
}

pub fn mul_up(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, 64, UP)
}

pub fn div_up(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, 64, UP)
}

pub fn lt(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp(b).is_some_and(|c| c < 0)
}

pub fn le(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp(b).is_some_and(|c| c <= 0)
}

/// Complex number with `BigFloat` parts.
#[derive(Debug, Clone)]
pub struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl MpComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    pub fn zero(p: usize) -> Self {
        Self::new(from_u64(0, p), from_u64(0, p))
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        Self::new(from_f64(re, p), from_f64(im, p))
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        Self::new(add(&self.re, &o.re, p), add(&self.im, &o.im, p))
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        Self::new(sub(&self.re, &o.re, p), sub(&self.im, &o.im, p))
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let q = p + 8;
        let re = sub(&mul(&self.re, &o.re, q), &mul(&self.im, &o.im, q), p);
        let im = add(&mul(&self.re, &o.im, q), &mul(&self.im, &o.re, q), p);
        Self::new(re, im)
    }

    pub fn scale(&self, k: &BigFloat, p: usize) -> Self {
        Self::new(mul(&self.re, k, p), mul(&self.im, k, p))
    }

    pub fn div(&self, o: &Self, p: usize) -> Self {
        let q = p + 16;
        let den = o.norm_sqr(q);
        let re = add(&mul(&self.re, &o.re, q), &mul(&self.im, &o.im, q), q);
        let im = sub(&mul(&self.im, &o.re, q), &mul(&self.re, &o.im, q), q);
        Self::new(div(&re, &den, p), div(&im, &den, p))
    }

    pub fn norm_sqr(&self, p: usize) -> BigFloat {
        add(&mul(&self.re, &self.re, p + 8), &mul(&self.im, &self.im, p + 8), p)
    }

    pub fn abs(&self, p: usize) -> BigFloat {
        sqrt(&self.norm_sqr(p + 8), p)
    }

    /// Argument in turns, normalised into `[0, 1)`.
    pub fn arg_turns(&self, p: usize) -> BigFloat {
        let q = p + 32;
        let pi = pi(q);
        let zero = from_u64(0, 64);
        let (re, im) = (&self.re, &self.im);
        let half_pi = div(&pi, &from_u64(2, 64), q);
        // angle in (-pi, pi]
        let angle = if re.abs_cmp(im).is_some_and(|c| c >= 0) {
            let t = atan(&div(im, re, q), q);
            if re.is_positive() || re.is_zero() {
                t
            } else if im.is_negative() {
                sub(&t, &pi, q)
            } else {
                add(&t, &pi, q)
            }
        } else {
            let t = atan(&div(re, im, q), q);
            if im.is_positive() {
                sub(&half_pi, &t, q)
            } else {
                sub(&half_pi.neg(), &t, q)
            }
        };
        let mut turns = div(&angle, &two_pi(q), q);
        if lt(&turns, &zero) {
            turns = add(&turns, &from_u64(1, 64), q);
        }
        if le(&from_u64(1, 64), &turns) {
            turns = sub(&turns, &from_u64(1, 64), q);
        }
        let mut out = turns;
        out.set_precision(p, RM).expect("precision");
        out
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

/// Exact integer value of `x` when it is integral and fits an `i64`.
pub fn to_i64_exact(x: &BigFloat) -> Option<i64> {
    let r = to_ratio(x)?;
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigint_roundtrip_is_exact() {
        for v in ["0", "1", "-7", "123456789012345678901234567890", "-18446744073709551616"] {
            let b: BigInt = v.parse().unwrap();
            let f = from_bigint(&b, 256);
            assert_eq!(to_ratio(&f).unwrap(), BigRational::from_integer(b));
        }
    }

    #[test]
    fn f64_conversion() {
        for v in [1.0, -2.5, 0.1, 1e-300, 3.0e200] {
            assert_eq!(to_f64(&from_f64(v, 128)), v);
        }
        let third = div(&from_u64(1, 128), &from_u64(3, 128), 128);
        assert!((to_f64(&third) - 1.0 / 3.0).abs() < 1e-17);
    }

    #[test]
    fn arg_turns_quadrants() {
        let cases = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.25), (-1.0, 0.0, 0.5), (0.0, -1.0, 0.75), (1.0, -1.0, 0.875)];
        for (re, im, want) in cases {
            let z = MpComplex::from_f64(re, im, 128);
            let got = to_f64(&z.arg_turns(128));
            assert!((got - want).abs() < 1e-30, "{re} {im} -> {got}");
        }
        let z = MpComplex::from_f64(1.0, 2.0, 128);
        let got = to_f64(&z.arg_turns(128));
        assert!((got - 2f64.atan() / std::f64::consts::TAU).abs() < 1e-16);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&from_u64(5, 64), 10), "5");
        assert_eq!(to_decimal(&from_f64(-0.25, 64), 10), "-2.5e-1");
        assert_eq!(to_decimal(&pi(128), 12), "3.14159265358");
    }

    #[test]
    fn floor_scaled_matches_integer_part() {
        let x = from_f64(0.75, 128);
        assert_eq!(floor_scaled(&x, 2), BigInt::from(3));
        assert_eq!(floor_scaled(&from_f64(-0.75, 128), 2), BigInt::from(-3));
    }
}
