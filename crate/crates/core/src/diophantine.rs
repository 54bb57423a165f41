//! Continued fractions and Dirichlet approximation of reals known only up to
//! an error radius.
//!
//! A real is an exact rational interval `[lo, hi]`. A partial quotient is
//! emitted only when both endpoints agree on it, so every quotient in a
//! [`CFExpansion`] is correct for every real in the interval.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use astro_float::BigFloat;

use crate::mp;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiophantineError {
    #[error("the error interval already straddles an integer")]
    ZeroInterval,
    #[error("certified expansion too short for N = {n}")]
    InsufficientPrecision { n: u64 },
    #[error("indistinguishable from the rational {r}/{s}")]
    RationalDetected { r: BigInt, s: BigInt },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cannot parse '{0}' as a decimal")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, DiophantineError>;

/// A real number known to lie in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: BigRational,
    hi: BigRational,
}

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl CertifiedReal {
    pub fn exact(x: BigRational) -> Self {
        CertifiedReal { lo: x.clone(), hi: x }
    }

    pub fn interval(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(DiophantineError::InvalidParams("empty interval".into()));
        }
        Ok(CertifiedReal { lo, hi })
    }

    pub fn with_radius(mid: BigRational, radius: BigRational) -> Self {
        let r = radius.abs();
        CertifiedReal { lo: &mid - &r, hi: mid + r }
    }

    /// A rounded decimal: the radius is one unit in the last written digit.
    pub fn from_decimal(s: &str) -> Result<Self> {
        let (mid, unit) = parse_decimal_exact(s)?;
        Ok(Self::with_radius(mid, unit))
    }

    /// The decimal taken as an exact rational.
    pub fn from_decimal_exact(s: &str) -> Result<Self> {
        Ok(Self::exact(parse_decimal_exact(s)?.0))
    }

    /// `√n` to `bits` binary places.
    pub fn sqrt(n: u64, bits: u32) -> Self {
        let scaled = BigInt::from(n) << (2 * bits as usize);
        let r = scaled.sqrt();
        let den = BigInt::one() << bits as usize;
        if &r * &r == scaled {
            return Self::exact(ratio(r, den));
        }
        CertifiedReal { lo: ratio(r.clone(), den.clone()), hi: ratio(r + 1, den) }
    }

    /// `(1 + √5) / 2` to `bits` binary places.
    pub fn golden_ratio(bits: u32) -> Self {
        let s = Self::sqrt(5, bits + 1);
        let half = ratio(1, 2);
        CertifiedReal { lo: (s.lo + BigInt::one()) * &half, hi: (s.hi + BigInt::one()) * half }
    }

    /// `x ± radius`.
    pub fn from_bigfloat(x: &BigFloat, radius: &BigFloat) -> Self {
        let mid = mp::to_ratio(x).expect("finite value");
        let r = mp::to_ratio(radius).expect("finite radius");
        Self::with_radius(mid, r)
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

/// `"-12.345e-3"` as an exact rational, with one unit of its last digit.
fn parse_decimal_exact(s: &str) -> Result<(BigRational, BigRational)> {
    let bad = || DiophantineError::Parse(s.to_string());
    let t = s.trim();
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().unwrap_or_default();
    let scale = exp - frac.len() as i64;
    let pow = BigInt::from(10).pow(scale.unsigned_abs() as u32);
    let (value, unit) = if scale >= 0 {
        (BigRational::from_integer(digits * &pow), BigRational::from_integer(pow))
    } else {
        (ratio(digits, pow.clone()), ratio(1, pow))
    };
    Ok((if neg { -value } else { value }, unit))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Continuation {
    /// The input was an exact rational and the expansion is complete.
    Terminated,
    /// The next quotient lies in `lo..=hi` (`hi = None`: unbounded).
    Undetermined { lo: BigInt, hi: Option<BigInt> },
    /// `max_terms` reached.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    /// `a_0; a_1, a_2, ...`, every one certified.
    pub partial_quotients: Vec<BigInt>,
    pub continuation: Continuation,
}

impl CFExpansion {
    pub fn certified_depth(&self) -> usize {
        self.partial_quotients.len()
    }

    /// Convergents `p_k / q_k`.
    pub fn convergents(&self) -> Vec<(BigInt, BigInt)> {
        let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
        let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
        self.partial_quotients
            .iter()
            .map(|a| {
                let p = a * &p1 + &p0;
                let q = a * &q1 + &q0;
                (p0, q0) = (p1.clone(), q1.clone());
                (p1, q1) = (p.clone(), q.clone());
                (p, q)
            })
            .collect()
    }
}

pub fn continued_fraction(alpha: &CertifiedReal, max_terms: usize) -> Result<CFExpansion> {
    let (mut lo, mut hi) = (alpha.lo.clone(), alpha.hi.clone());
    if lo.floor() != hi.floor() {
        return Err(DiophantineError::ZeroInterval);
    }
    let mut quotients = Vec::new();
    loop {
        if quotients.len() == max_terms {
            return Ok(CFExpansion { partial_quotients: quotients, continuation: Continuation::Truncated });
        }
        let (a, b) = (lo.floor().to_integer(), hi.floor().to_integer());
        if a != b {
            let continuation = Continuation::Undetermined { lo: a, hi: Some(b) };
            return Ok(CFExpansion { partial_quotients: quotients, continuation });
        }
        let frac_lo = &lo - BigRational::from_integer(a.clone());
        let frac_hi = &hi - BigRational::from_integer(a.clone());
        quotients.push(a);
        if frac_hi.is_zero() {
            return Ok(CFExpansion { partial_quotients: quotients, continuation: Continuation::Terminated });
        }
        if frac_lo.is_zero() {
            // the remainder may be exactly zero or arbitrarily large
            let continuation = Continuation::Undetermined { lo: frac_hi.recip().floor().to_integer(), hi: None };
            return Ok(CFExpansion { partial_quotients: quotients, continuation });
        }
        (lo, hi) = (frac_hi.recip(), frac_lo.recip());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalApproximant {
    #[serde(serialize_with = "as_string")]
    pub r: BigInt,
    #[serde(serialize_with = "as_string")]
    pub s: BigInt,
    pub n: u64,
    /// `|α − r/s|` at the interval midpoint.
    pub gap: f64,
    /// Certified bounds on the gap.
    #[serde(skip)]
    pub gap_interval: (BigRational, BigRational),
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl RationalApproximant {
    pub fn csv_header() -> &'static str {
        "s,r,gap,gap_s_N"
    }

    pub fn csv_row(&self) -> String {
        let s = self.s.to_f64().unwrap_or(f64::NAN);
        format!("{},{},{:.12e},{:.12e}", self.s, self.r, self.gap, self.gap * s * self.n as f64)
    }
}

/// Bounds on `|α − r/s|`.
fn gap_bounds(alpha: &CertifiedReal, r: &BigInt, s: &BigInt) -> (BigRational, BigRational) {
    let x = ratio(r.clone(), s.clone());
    let (a, b) = (&alpha.lo - &x, &alpha.hi - &x);
    if a.is_positive() {
        (a, b)
    } else if b.is_negative() {
        (-b, -a)
    } else {
        (BigRational::zero(), a.abs().max(b.abs()))
    }
}

const CF_TERMS: usize = 100_000;

/// The last convergent `r/s` with `s ≤ N`, satisfying `0 < |α − r/s| ≤ 1/(sN)`.
pub fn dirichlet_approximant(alpha: &CertifiedReal, n: u64) -> Result<RationalApproximant> {
    if n < 2 {
        return Err(DiophantineError::InvalidParams(format!("N = {n} < 2")));
    }
    let nb = BigInt::from(n);
    let cf = continued_fraction(alpha, CF_TERMS)?;
    let conv = cf.convergents();
    let k = conv.iter().rposition(|(_, q)| q <= &nb).expect("q_0 = 1");
    let (r, s) = conv[k].clone();
    if k + 1 == conv.len() {
        // the next denominator is not certified to exceed N
        let q_prev = if k == 0 { BigInt::zero() } else { conv[k - 1].1.clone() };
        match &cf.continuation {
            Continuation::Terminated => return Err(DiophantineError::RationalDetected { r, s }),
            Continuation::Truncated => return Err(DiophantineError::InsufficientPrecision { n }),
            Continuation::Undetermined { lo, .. } => {
                if lo * &s + &q_prev <= nb {
                    return Err(DiophantineError::InsufficientPrecision { n });
                }
            }
        }
    }
    let (glo, ghi) = gap_bounds(alpha, &r, &s);
    if glo.is_zero() {
        return Err(DiophantineError::RationalDetected { r, s });
    }
    if ghi > ratio(1, &s * &nb) {
        return Err(DiophantineError::InsufficientPrecision { n });
    }
    let gap = ((&glo + &ghi) / BigInt::from(2)).to_f64().unwrap_or(0.0);
    debug_assert!(r.gcd(&s).is_one());
    Ok(RationalApproximant { r, s, n, gap, gap_interval: (glo, ghi) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenominatorReport {
    pub approximant: RationalApproximant,
    /// `½ (N / 2π)^{1/κ}`.
    pub lower_bound: f64,
    pub satisfied: bool,
}

/// Compares the Dirichlet denominator with `½ (N/2π)^{1/κ}`.
pub fn large_denominator_check(alpha: &CertifiedReal, n: u64, kappa: f64) -> Result<DenominatorReport> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(DiophantineError::InvalidParams(format!("kappa = {kappa}")));
    }
    let approximant = dirichlet_approximant(alpha, n)?;
    let lower_bound = 0.5 * ((n as f64 / std::f64::consts::TAU).ln() / kappa).exp();
    let s = approximant.s.to_f64().unwrap_or(f64::INFINITY);
    Ok(DenominatorReport { satisfied: s > lower_bound, lower_bound, approximant })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    #[serde(serialize_with = "as_string")]
    pub s: BigInt,
    #[serde(serialize_with = "as_string")]
    pub r: BigInt,
    pub gap: f64,
    pub gap_s: f64,
    /// `−ln(gap) / ln(s)`.
    pub exponent: f64,
    pub running_max: f64,
    /// Natural log of the certified lower end of the gap.
    pub ln_gap_lower: f64,
}

pub const PROBE_CSV_HEADER: &str = "s,r,gap,gap_s,exponent";

impl ProbeRow {
    pub fn csv_row(&self) -> String {
        format!("{},{},{:.12e},{:.12e},{:.9}", self.s, self.r, self.gap, self.gap_s, self.exponent)
    }
}

fn ln_ratio(x: &BigRational) -> f64 {
    let p = 128;
    mp::to_f64(&mp::ln(&mp::from_ratio(x, p), p))
}

/// Irrationality-exponent estimates from every convergent with `2 ≤ q_k ≤ s_max`.
pub fn irrationality_probe(alpha: &CertifiedReal, s_max: u64) -> Result<Vec<ProbeRow>> {
    let cf = continued_fraction(alpha, CF_TERMS)?;
    let conv = cf.convergents();
    let smax = BigInt::from(s_max);
    if conv.last().is_none_or(|(_, q)| q <= &smax) {
        return match cf.continuation {
            Continuation::Terminated => {
                let (r, s) = conv.last().cloned().expect("nonempty");
                Err(DiophantineError::RationalDetected { r, s })
            }
            _ => Err(DiophantineError::InsufficientPrecision { n: s_max }),
        };
    }
    let mut rows = Vec::new();
    let mut running = f64::NEG_INFINITY;
    for (r, s) in conv.into_iter().filter(|(_, q)| q >= &BigInt::from(2) && q <= &smax) {
        let (glo, ghi) = gap_bounds(alpha, &r, &s);
        if glo.is_zero() {
            return Err(DiophantineError::RationalDetected { r, s });
        }
        let mid = (&glo + &ghi) / BigInt::from(2);
        let ln_gap = ln_ratio(&mid);
        let ln_s = ln_ratio(&BigRational::from_integer(s.clone()));
        let exponent = -ln_gap / ln_s;
        running = running.max(exponent);
        rows.push(ProbeRow {
            gap: mid.to_f64().unwrap_or(0.0),
            gap_s: (&mid * BigRational::from_integer(s.clone())).to_f64().unwrap_or(0.0),
            exponent,
            running_max: running,
            ln_gap_lower: ln_ratio(&glo),
            s,
            r,
        });
    }
    Ok(rows)
}

/// `ln(1 / (π (2s)^{1+κ}))`, the log of the lower bound on the gap of a
/// Frobenius angle to any rational with denominator `s`.
pub fn angle_gap_lower_bound_ln(s: f64, kappa: f64) -> f64 {
    -std::f64::consts::PI.ln() - (1.0 + kappa) * (2.0 * s).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn quadratic_irrationals_are_periodic() {
        let phi = continued_fraction(&CertifiedReal::golden_ratio(128), 1000).unwrap();
        assert!(phi.certified_depth() > 80);
        assert!(phi.partial_quotients.iter().all(|a| a.is_one()));
        let r2 = continued_fraction(&CertifiedReal::sqrt(2, 128), 1000).unwrap();
        assert_eq!(r2.partial_quotients[0], BigInt::one());
        assert!(r2.partial_quotients[1..].iter().all(|a| a == &BigInt::from(2)));
        assert!(r2.certified_depth() > 50);
    }

    #[test]
    fn rational_expansion_terminates() {
        let x = CertifiedReal::exact(ratio(3, 7));
        let cf = continued_fraction(&x, 100).unwrap();
        assert_eq!(cf.partial_quotients, ints(&[0, 2, 3]));
        assert_eq!(cf.continuation, Continuation::Terminated);
        assert_eq!(cf.convergents().last().unwrap(), &(BigInt::from(3), BigInt::from(7)));
        let wide = CertifiedReal::with_radius(ratio(1, 2), ratio(1, 1));
        assert_eq!(continued_fraction(&wide, 10), Err(DiophantineError::ZeroInterval));
    }

    #[test]
    fn dirichlet_examples() {
        // convergents of √2: 1, 3/2, 7/5, 17/12
        let a = dirichlet_approximant(&CertifiedReal::sqrt(2, 128), 10).unwrap();
        assert_eq!((a.r.clone(), a.s.clone()), (BigInt::from(7), BigInt::from(5)));
        assert!((a.gap - 0.014213562373095).abs() < 1e-12 && a.gap <= 1.0 / 50.0);
        let g = dirichlet_approximant(&CertifiedReal::golden_ratio(128), 2).unwrap();
        assert!(g.gap <= 1.0 / (g.s.to_f64().unwrap() * 2.0));
        assert_eq!((g.r, g.s), (BigInt::from(3), BigInt::from(2)));
        let third = CertifiedReal::exact(ratio(1, 3));
        assert!(matches!(dirichlet_approximant(&third, 10), Err(DiophantineError::RationalDetected { .. })));
        let touching = CertifiedReal::interval(ratio(1, 3), ratio(1, 3) + ratio(1, BigInt::from(10).pow(20))).unwrap();
        assert!(matches!(dirichlet_approximant(&touching, 10), Err(DiophantineError::InsufficientPrecision { .. })));
        let coarse = CertifiedReal::from_decimal("1.41421").unwrap();
        assert!(matches!(
            dirichlet_approximant(&coarse, 1_000_000),
            Err(DiophantineError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn decimal_parsing() {
        let x = CertifiedReal::from_decimal_exact("-1.25e1").unwrap();
        assert_eq!(x.lo(), &ratio(-25, 2));
        let y = CertifiedReal::from_decimal("0.176").unwrap();
        assert_eq!(y.width(), ratio(2, 1000));
        assert!(CertifiedReal::from_decimal("1.2.3").is_err());
        assert!(CertifiedReal::from_decimal("").is_err());
    }

    #[test]
    fn denominator_check() {
        let r = large_denominator_check(&CertifiedReal::sqrt(2, 128), 10_000, 2.0).unwrap();
        assert!((r.lower_bound - 0.5 * (10_000.0 / std::f64::consts::TAU).sqrt()).abs() < 1e-12);
        assert!((r.lower_bound - 19.947114).abs() < 1e-5);
        assert!(r.satisfied);
        let huge = large_denominator_check(&CertifiedReal::sqrt(2, 128), 10_000, 1e13).unwrap();
        assert!((huge.lower_bound - 0.5).abs() < 1e-9 && huge.satisfied);
        assert!(large_denominator_check(&CertifiedReal::sqrt(2, 128), 100, 0.0).is_err());
    }

    #[test]
    fn probe_golden_ratio() {
        let rows = irrationality_probe(&CertifiedReal::golden_ratio(256), 1_000_000).unwrap();
        let last = rows.last().unwrap();
        assert!(last.exponent > 2.0 && last.exponent < 2.1);
        // gap·s² → 1/√5
        let s = last.s.to_f64().unwrap();
        assert!((last.gap_s * s - 1.0 / 5f64.sqrt()).abs() < 1e-6);
        let third = CertifiedReal::exact(ratio(1, 3));
        assert!(matches!(irrationality_probe(&third, 100), Err(DiophantineError::RationalDetected { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn dirichlet_contract(words in proptest::collection::vec(any::<u64>(), 4), e in 2u32..5) {
            // a random 256-bit number in [0, 1), slightly blurred
            let num = words.iter().fold(BigInt::zero(), |acc, w| (acc << 64) + BigInt::from(*w));
            let x = ratio(num, BigInt::one() << 256);
            let alpha = CertifiedReal::with_radius(x, ratio(1, BigInt::one() << 250));
            let n = 10u64.pow(e);
            let a = dirichlet_approximant(&alpha, n).unwrap();
            prop_assert!(a.r.gcd(&a.s).is_one());
            prop_assert!(a.s <= BigInt::from(n) && a.s.is_positive());
            prop_assert!(a.gap_interval.0.is_positive());
            prop_assert!(a.gap_interval.1 <= ratio(1, &a.s * BigInt::from(n)));
            let cf = continued_fraction(&alpha, 200).unwrap();
            let conv = cf.convergents();
            for k in 2..conv.len() {
                let ak = &cf.partial_quotients[k];
                prop_assert_eq!(&conv[k].0, &(ak * &conv[k - 1].0 + &conv[k - 2].0));
                prop_assert_eq!(&conv[k].1, &(ak * &conv[k - 1].1 + &conv[k - 2].1));
            }
        }
    }
}
