//! Additive character sums `S_R(n)` along the extensions `F_{q^n}` and
//! Kloosterman sums with their spectral form `T_n = −(ϑ^n + ϑ̄^n)`.
//!
//! The sign: over `F_9`, `T_1 = −1` but direct enumeration gives `T_2 = 5`,
//! so `T_n = ϑ^n + ϑ̄^n` with `ϑϑ̄ = q` cannot hold. With `ϑ + ϑ̄ = −T_1` the
//! sums obey `T_{n+1} = −T_1 T_n − q T_{n−1}`, `T_0 = −2`.
//!
//! Sums are computed exactly as class counts: `N_c = #{x : Tr(c₀R(x)) = c}`
//! for `c ∈ Z/p`, so the sum is the cyclotomic integer `Σ N_c ζ_p^c`, which is
//! then evaluated at the requested precision.

use std::sync::Arc;

use astro_float::BigFloat;
use rayon::prelude::*;
use thiserror::Error;

use crate::fields::{self, poly, poly::Poly, primes, ExtensionDesc, FieldDesc, FieldElement, FieldError, FiniteField};
use crate::mobius::{self, Angle, Method, MobiusSumResult, MobiusTable};
use crate::mp::{self, MpComplex};

/// Polynomial maps of larger degree are not tested for Artin–Schreier form.
pub const DEGENERACY_DEGREE_CAP: usize = 64;
const CHUNK: u128 = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharSumError {
    #[error("R is of the form Q^p − Q + c; the sum has no cancellation")]
    DegenerateR,
    #[error("the denominator of R is the zero polynomial")]
    ZeroDenominator,
    #[error("|T_1| = {t1} exceeds 2·sqrt(q) = {limit}")]
    WeilViolation { t1: f64, limit: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Mobius(#[from] mobius::MobiusError),
}

pub type Result<T> = std::result::Result<T, CharSumError>;

/// `R = num / den` over `F_q`.
#[derive(Debug, Clone)]
pub struct RationalMap {
    base: Arc<FieldDesc>,
    num: Poly,
    den: Poly,
    kloosterman_a: Option<FieldElement>,
}

impl RationalMap {
    pub fn new(base: Arc<FieldDesc>, num: Vec<FieldElement>, den: Vec<FieldElement>) -> Result<Self> {
        let f = base.as_ref();
        for c in num.iter().chain(&den) {
            f.check(c)?;
        }
        let num = poly::trim(f, num.iter().map(|c| c.coeffs().to_vec()).collect());
        let den = poly::trim(f, den.iter().map(|c| c.coeffs().to_vec()).collect());
        if den.is_empty() {
            return Err(CharSumError::ZeroDenominator);
        }
        Ok(RationalMap { base, num, den, kloosterman_a: None })
    }

    pub fn polynomial(base: Arc<FieldDesc>, coeffs: Vec<FieldElement>) -> Result<Self> {
        let one = base.one();
        Self::new(base, coeffs, vec![one])
    }

    /// `R(x) = a x + 1/x = (a x² + 1) / x`.
    pub fn kloosterman(base: Arc<FieldDesc>, a: FieldElement) -> Result<Self> {
        base.check(&a)?;
        if a.is_zero() {
            return Err(CharSumError::InvalidParams("a must be nonzero".into()));
        }
        let (zero, one) = (base.zero(), base.one());
        let mut r = Self::new(base, vec![one.clone(), zero.clone(), a.clone()], vec![zero, one])?;
        r.kloosterman_a = Some(a);
        Ok(r)
    }

    pub fn base(&self) -> &Arc<FieldDesc> {
        &self.base
    }

    pub fn kloosterman_parameter(&self) -> Option<&FieldElement> {
        self.kloosterman_a.as_ref()
    }

    fn is_polynomial(&self) -> bool {
        poly::degree(self.base.as_ref(), &self.den) == Some(0)
    }

    /// Artin–Schreier test for polynomial `R`: peel `Q^p − Q` off the top
    /// degrees divisible by `p`; `R` is degenerate when only a constant is
    /// left. `None` when `R` is not a polynomial or exceeds the degree cap.
    pub fn is_degenerate(&self) -> Option<bool> {
        let f = self.base.as_ref();
        if !self.is_polynomial() {
            return None;
        }
        let inv = f.inv_raw(&self.den[0]).expect("nonzero constant");
        let mut r: Poly = self.num.iter().map(|c| f.mul_raw(c, &inv)).collect();
        if poly::degree(f, &r).unwrap_or(0) > DEGENERACY_DEGREE_CAP {
            return None;
        }
        let p = f.characteristic() as usize;
        // y^{1/p} = y^{p^{m−1}}
        let root_exp = (f.order() / p as u128).max(1);
        loop {
            let d = match poly::degree(f, &r) {
                None | Some(0) => return Some(true),
                Some(d) => d,
            };
            if d % p != 0 {
                return Some(false);
            }
            let c = f.pow_raw(&r[d], root_exp);
            // subtract (c x^{d/p})^p − c x^{d/p}
            let mut t: Poly = vec![f.zero_raw(); d + 1];
            t[d] = f.pow_raw(&c, p as u128);
            t[d / p] = f.sub_raw(&t[d / p], &c);
            r = poly::sub(f, &r, &t);
        }
    }
}

/// A character sum as an exact class count plus its evaluation.
#[derive(Debug, Clone)]
pub struct CharSum {
    pub n: usize,
    /// `counts[c] = #{x : Tr(c₀ R(x)) = c}`.
    pub counts: Vec<u64>,
    /// `Σ_x ψ(R(x))`.
    pub value: MpComplex,
    /// `q^{−n/2} Σ_x ψ(R(x))`.
    pub normalized: MpComplex,
    /// Error radius of `value` (each part).
    pub radius: BigFloat,
    pub precision_bits: usize,
}

fn evaluate_counts(counts: Vec<u64>, p: u32, q: u128, n: usize, bits: usize) -> CharSum {
    let w = bits + 32;
    let two_pi = mp::two_pi(w);
    let (mut re, mut im) = (mp::from_u64(0, w), mp::from_u64(0, w));
    let mut total = 0u64;
    for (c, &k) in counts.iter().enumerate() {
        if k == 0 {
            continue;
        }
        total += k;
        let ang = mp::div(&mp::mul(&two_pi, &mp::from_u64(c as u64, 64), w), &mp::from_u64(p as u64, 64), w);
        let kk = mp::from_u64(k, 64);
        re = mp::add(&re, &mp::mul(&kk, &mp::cos(&ang, w), w), w);
        im = mp::add(&im, &mp::mul(&kk, &mp::sin(&ang, w), w), w);
    }
    let value = MpComplex::new(re, im);
    let qn2 = mp::powf(&mp::from_bigint(&q.into(), w), &mp::from_f64(n as f64 / 2.0, w), w);
    let normalized = MpComplex::new(mp::div(&value.re, &qn2, w), mp::div(&value.im, &qn2, w));
    // a few ulps per term at w bits, with room to spare
    let radius = mp::mul_up(&mp::from_u64(8 * (total + counts.len() as u64), 64), &mp::pow2_big(-(w as i64)));
    CharSum { n, counts, value, normalized, radius, precision_bits: bits }
}

fn scalar(base: &FieldDesc, c: Option<&FieldElement>) -> Result<Vec<u32>> {
    match c {
        None => Ok(base.one_raw()),
        Some(c) => {
            base.check(c)?;
            if c.is_zero() {
                return Err(CharSumError::InvalidParams("character parameter must be nonzero".into()));
            }
            Ok(c.coeffs().to_vec())
        }
    }
}

/// `Σ_{x ∈ F_{q^n}^*, den(x) ≠ 0} ψ_c(Tr_{F_{q^n}/F_q} R(x))` by enumeration,
/// with `ψ_c(y) = e(Tr_{F_q/F_p}(c y) / p)` (`c = 1` by default).
pub fn char_sum_direct(
    r: &RationalMap,
    n: usize,
    c: Option<&FieldElement>,
    bits: usize,
    budget: u128,
) -> Result<CharSum> {
    if n == 0 {
        return Err(CharSumError::InvalidParams("n must be positive".into()));
    }
    if r.is_degenerate() == Some(true) {
        return Err(CharSumError::DegenerateR);
    }
    let base = r.base.as_ref();
    let ext = fields::make_extension(r.base.clone(), n, None)?;
    fields::check_budget(ext.order(), budget)?;
    let emb = |poly: &Poly| -> Poly { poly.iter().map(|a| ext.embed_raw(a)).collect() };
    let (num, den) = (emb(&r.num), emb(&r.den));
    let c = ext.embed_raw(&scalar(base, c)?);
    let p = base.characteristic() as usize;
    let order = ext.order();
    let chunks: Vec<u128> = (1..order).step_by(CHUNK as usize).collect();
    let counts = chunks
        .par_iter()
        .map(|&lo| {
            let mut local = vec![0u64; p];
            for i in lo..(lo + CHUNK).min(order) {
                let x = ext.from_index_raw(i);
                let d = poly::eval(&ext, &den, &x);
                let Some(dinv) = ext.inv_raw(&d) else { continue };
                let y = ext.mul_raw(&poly::eval(&ext, &num, &x), &dinv);
                local[ext.trace_raw(&ext.mul_raw(&c, &y)) as usize] += 1;
            }
            local
        })
        .reduce(|| vec![0u64; p], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    Ok(evaluate_counts(counts, p as u32, base.order(), n, bits))
}

/// Least generator of `F^*` in index order.
pub fn multiplicative_generator<F: FiniteField>(f: &F) -> Vec<u32> {
    let m = f.order() - 1;
    let factors: Vec<u128> = primes::factorize(m).into_iter().map(|(r, _)| r).collect();
    let one = f.one_raw();
    (2..f.order())
        .map(|i| f.from_index_raw(i))
        .find(|g| factors.iter().all(|r| f.pow_raw(g, m / r) != one))
        .unwrap_or(one)
}

/// Connection polynomial `C` (with `C_0 = 1`) of the shortest linear
/// recurrence `Σ_{i≤L} C_i s_{k−i} = 0` over `F_p`.
pub fn berlekamp_massey(s: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let inv = |x: u64| -> u64 {
        let (mut b, mut e, mut r) = (x % p64, p64 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p64;
            }
            b = b * b % p64;
            e >>= 1;
        }
        r
    };
    let mut c = vec![1u64];
    let mut prev = vec![1u64];
    let (mut l, mut shift, mut last) = (0usize, 1usize, 1u64);
    for k in 0..s.len() {
        let mut d = s[k] as u64;
        for i in 1..=l.min(c.len() - 1) {
            d = (d + c[i] * s[k - i] as u64) % p64;
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = d * inv(last) % p64;
        let t = c.clone();
        if c.len() < prev.len() + shift {
            c.resize(prev.len() + shift, 0);
        }
        for (i, &b) in prev.iter().enumerate() {
            c[i + shift] = (c[i + shift] + p64 - coef * b % p64) % p64;
        }
        if 2 * l <= k {
            l = k + 1 - l;
            prev = t;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.truncate(l + 1);
    c.resize(l + 1, 0);
    c.into_iter().map(|x| x as u32).collect()
}

/// Linear-recurrent sequence `Tr(c·g^k)` for `k = 0..len`; the first
/// `conn.len() − 1` terms are computed directly.
fn trace_powers(ext: &ExtensionDesc, g: &[u32], c: &[u32], conn: &[u32], len: usize) -> Vec<u32> {
    let p = ext.characteristic() as u64;
    let l = conn.len() - 1;
    let mut out = Vec::with_capacity(len);
    let mut x = c.to_vec();
    for _ in 0..l.min(len) {
        out.push(ext.trace_raw(&x));
        x = ext.mul_raw(&x, g);
    }
    for k in l..len {
        let mut acc = 0u64;
        for i in 1..=l {
            acc += conn[i] as u64 * out[k - i] as u64;
        }
        out.push(((p - acc % p) % p) as u32);
    }
    out
}

/// Kloosterman sum `T_n(a) = Σ_{x ∈ F_{q^n}^*} ψ_c(a x + 1/x)` by walking the
/// powers of a generator; the traces `Tr(g^k)` are extended by their linear
/// recurrence at `O(mn)` per term.
pub fn kloosterman_sum(
    base: &Arc<FieldDesc>,
    a: &FieldElement,
    n: usize,
    c: Option<&FieldElement>,
    bits: usize,
    budget: u128,
) -> Result<CharSum> {
    base.check(a)?;
    if a.is_zero() || n == 0 {
        return Err(CharSumError::InvalidParams("need a ≠ 0 and n ≥ 1".into()));
    }
    let ext = fields::make_extension(base.clone(), n, None)?;
    fields::check_budget(ext.order(), budget)?;
    let p = ext.characteristic();
    let len = usize::try_from(ext.order() - 1).map_err(|_| FieldError::Overflow)?;
    let g = multiplicative_generator(&ext);
    let c = ext.embed_raw(&scalar(base, c)?);
    let ca = ext.mul_raw(&c, &ext.embed_raw(a.coeffs()));
    let dim = ext.prime_degree();
    let seed = trace_powers(&ext, &g, &ext.one_raw(), &vec![0; 2 * dim + 1], 2 * dim);
    let conn = berlekamp_massey(&seed, p);
    // Tr(c g^k) and Tr(c a g^k); 1/x = g^{−k} is read backwards
    let w = trace_powers(&ext, &g, &c, &conn, len);
    let v = trace_powers(&ext, &g, &ca, &conn, len);
    let mut counts = vec![0u64; p as usize];
    for k in 0..len {
        let back = if k == 0 { 0 } else { len - k };
        counts[((v[k] + w[back]) % p) as usize] += 1;
    }
    Ok(evaluate_counts(counts, p, base.order(), n, bits))
}

/// `ϑ` with `ϑ + ϑ̄ = −T_1`, `ϑϑ̄ = q`, `Im ϑ ≥ 0`; `φ = arg(ϑ)/2π ∈ [0, 1/2]`.
#[derive(Debug, Clone)]
pub struct KloostermanSpectrum {
    pub q: u128,
    pub t1: BigFloat,
    pub theta: MpComplex,
    pub phi: BigFloat,
    pub phi_radius: BigFloat,
    pub precision_bits: usize,
}

pub fn kloosterman_spectrum(q: u128, t1: &BigFloat, t1_radius: &BigFloat, bits: usize) -> Result<KloostermanSpectrum> {
    if q < 2 {
        return Err(CharSumError::InvalidParams(format!("q = {q}")));
    }
    let w = bits + 32;
    let qf = mp::from_bigint(&q.into(), w);
    let two_sqrt_q = mp::mul(&mp::from_u64(2, 64), &mp::sqrt(&qf, w), w);
    let slack = mp::add_up(t1_radius, &mp::mul_up(&two_sqrt_q, &mp::pow2_big(-(bits as i64) + 8)));
    if mp::lt(&mp::add_up(&two_sqrt_q, &slack), &t1.abs()) {
        return Err(CharSumError::WeilViolation { t1: mp::to_f64(t1), limit: mp::to_f64(&two_sqrt_q) });
    }
    let half = mp::div(&t1.neg(), &mp::from_u64(2, 64), w);
    let disc = mp::sub(&qf, &mp::mul(&half, &half, w), w);
    let im = if disc.is_positive() { mp::sqrt(&disc, w) } else { mp::from_u64(0, w) };
    let theta = MpComplex::new(half, im);
    let phi = theta.arg_turns(w);
    // dφ/dT_1 = 1 / (2π sqrt(4q − T_1²)); near the edge fall back to a square-root bound
    let four_disc = mp::mul(&mp::from_u64(4, 64), &disc, w);
    let margin = mp::sub(&four_disc, &mp::mul_up(&mp::mul_up(&mp::from_u64(4, 64), &two_sqrt_q), t1_radius), 64);
    let phi_radius = if margin.is_positive() {
        mp::div_up(t1_radius, &mp::mul(&mp::two_pi(64), &mp::sqrt(&margin, 64), 64))
    } else {
        // |Δ arccos(x)| ≤ π sqrt(|Δx|) near x = ±1
        let dx = mp::div_up(&mp::mul_up(&mp::from_u64(2, 64), &slack), &two_sqrt_q);
        mp::mul_up(&mp::from_f64(0.5, 64), &mp::sqrt(&dx, 64))
    };
    let phi_radius = mp::add_up(&phi_radius, &mp::pow2_big(-(w as i64) + 4));
    Ok(KloostermanSpectrum { q, t1: t1.clone(), theta, phi, phi_radius, precision_bits: bits })
}

impl KloostermanSpectrum {
    /// Unnormalised `T_n = −2 q^{n/2} cos(2π n φ)`.
    pub fn predict(&self, n: u64) -> BigFloat {
        let w = self.precision_bits + 32;
        let qn2 = mp::powf(&mp::from_bigint(&self.q.into(), w), &mp::from_f64(n as f64 / 2.0, w), w);
        mp::mul(&qn2, &self.normalized(n), w)
    }

    /// `K(n) = T_n / q^{n/2} = −2 cos(2π n φ)`.
    pub fn normalized(&self, n: u64) -> BigFloat {
        let w = self.precision_bits + 32;
        let frac = mp::mul(&self.phi, &mp::from_u64(n, 64), w + 64).fract();
        let c = mp::cos(&mp::mul(&mp::two_pi(w), &frac, w), w);
        mp::mul(&mp::from_i64(-2, 64), &c, w)
    }

    /// `φ` and `1 − φ` as angles for the Möbius sums.
    pub fn angles(&self) -> [(Angle, usize); 2] {
        let r = mp::to_f64_up(&self.phi_radius);
        let neg = mp::sub(&mp::from_u64(1, 64), &self.phi, self.precision_bits + 96);
        [(Angle::from_bigfloat(&self.phi, r), 1), (Angle::from_bigfloat(&neg, r), 1)]
    }
}

#[derive(Debug, Clone)]
pub struct RecurrenceRow {
    pub n: usize,
    pub direct: BigFloat,
    pub recurrence: BigFloat,
    pub deviation: f64,
}

#[derive(Debug, Clone)]
pub struct RecurrenceReport {
    pub q: u128,
    pub rows: Vec<RecurrenceRow>,
    pub max_deviation: f64,
    /// Deviation of the direct sums from `T_{n+1} = T_1 T_n − q T_{n−1}`,
    /// `T_0 = 2`, the form without the sign.
    pub unsigned_max_deviation: f64,
    /// `max_n |T_n| / q^{n/2}`.
    pub max_normalized: f64,
}

pub const RECURRENCE_CSV_HEADER: &str = "n,T_n_direct,T_n_recurrence,deviation";

impl RecurrenceRow {
    pub fn csv_row(&self, digits: usize) -> String {
        format!(
            "{},{},{},{:.3e}",
            self.n,
            mp::to_decimal(&self.direct, digits),
            mp::to_decimal(&self.recurrence, digits),
            self.deviation
        )
    }
}

/// Direct `T_n` for `n = 1..=n_max` against `T_{n+1} = −T_1 T_n − q T_{n−1}`,
/// `T_0 = −2`.
pub fn recurrence_check(
    base: &Arc<FieldDesc>,
    a: &FieldElement,
    n_max: usize,
    bits: usize,
    budget: u128,
) -> Result<RecurrenceReport> {
    if n_max == 0 {
        return Err(CharSumError::InvalidParams("n_max must be positive".into()));
    }
    let q = base.order();
    let order = q.checked_pow(n_max as u32).ok_or(FieldError::Overflow)?;
    fields::check_budget(order, budget)?;
    let w = bits + 32;
    let qf = mp::from_bigint(&q.into(), w);
    let direct: Vec<CharSum> =
        (1..=n_max).map(|n| kloosterman_sum(base, a, n, None, bits, budget)).collect::<Result<_>>()?;
    let t1 = direct[0].value.re.clone();
    let (mut prev, mut cur) = (mp::from_i64(-2, w), t1.clone());
    let (mut uprev, mut ucur) = (mp::from_u64(2, w), t1.clone());
    let mut rows = Vec::new();
    let (mut max_dev, mut umax_dev, mut max_norm) = (0f64, 0f64, 0f64);
    for (i, d) in direct.iter().enumerate() {
        let n = i + 1;
        if n > 1 {
            let next = mp::sub(&mp::mul(&t1.neg(), &cur, w), &mp::mul(&qf, &prev, w), w);
            prev = std::mem::replace(&mut cur, next);
            let unext = mp::sub(&mp::mul(&t1, &ucur, w), &mp::mul(&qf, &uprev, w), w);
            uprev = std::mem::replace(&mut ucur, unext);
        }
        let deviation = mp::to_f64(&mp::sub(&d.value.re, &cur, w)).abs();
        max_dev = max_dev.max(deviation);
        umax_dev = umax_dev.max(mp::to_f64(&mp::sub(&d.value.re, &ucur, w)).abs());
        max_norm = max_norm.max(mp::to_f64(&d.normalized.re).abs());
        rows.push(RecurrenceRow { n, direct: d.value.re.clone(), recurrence: cur.clone(), deviation });
    }
    Ok(RecurrenceReport { q, rows, max_deviation: max_dev, unsigned_max_deviation: umax_dev, max_normalized: max_norm })
}

/// `Σ_{n≤N} μ(n) cos(2π n φ)`.
pub fn mobius_char_sum(
    table: &MobiusTable,
    spectrum: &KloostermanSpectrum,
    n: usize,
    method: Method,
) -> Result<MobiusSumResult> {
    Ok(mobius::mobius_angle_sum(table, &spectrum.angles(), 1, n, method)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::DEFAULT_ENUMERATION_BUDGET as BUDGET;
    use proptest::prelude::*;

    fn prime(p: u64) -> Arc<FieldDesc> {
        Arc::new(fields::make_field(p, 1, None).unwrap())
    }

    fn re(x: &CharSum) -> f64 {
        mp::to_f64(&x.value.re)
    }

    #[test]
    fn kloosterman_small_examples() {
        let f3 = prime(3);
        let k = kloosterman_sum(&f3, &f3.one(), 1, None, 128, BUDGET).unwrap();
        // x ∈ {1, 2}: x + 1/x ∈ {2, 1}
        assert_eq!(k.counts, vec![0, 1, 1]);
        assert!((re(&k) + 1.0).abs() < 1e-30);
        assert!((mp::to_f64(&k.normalized.re) + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let f5 = prime(5);
        let k5 = kloosterman_sum(&f5, &f5.one(), 1, None, 128, BUDGET).unwrap();
        let oracle = 2.0 - 2.0 * (std::f64::consts::PI / 5.0).cos();
        assert!((re(&k5) - oracle).abs() < 1e-15);
        assert!(mp::to_f64(&k5.value.im).abs() < 1e-30);
    }

    #[test]
    fn fast_path_matches_enumeration() {
        for (p, m) in [(3u64, 1usize), (5, 1), (7, 1), (3, 2), (5, 2)] {
            let base = Arc::new(fields::make_field(p, m, None).unwrap());
            for ai in 1..base.order().min(5) {
                let a = base.wrap(base.from_index_raw(ai));
                let r = RationalMap::kloosterman(base.clone(), a.clone()).unwrap();
                for n in 1..=3 {
                    if base.order().pow(n as u32) > 20_000 {
                        continue;
                    }
                    let fast = kloosterman_sum(&base, &a, n, None, 128, BUDGET).unwrap();
                    let slow = char_sum_direct(&r, n, None, 128, BUDGET).unwrap();
                    assert_eq!(fast.counts, slow.counts, "p={p} m={m} a={ai} n={n}");
                }
            }
        }
    }

    #[test]
    fn recurrence_over_f9() {
        let f3 = prime(3);
        let rep = recurrence_check(&f3, &f3.one(), 6, 128, BUDGET).unwrap();
        // counted by hand over F_3[i]: Tr(x + 1/x) = 0 for six x, 1 and 2 once each
        assert!((mp::to_f64(&rep.rows[1].direct) - 5.0).abs() < 1e-30);
        assert!(rep.max_deviation <= 1e-10);
        // without the sign the second term would be T_1² − 2q = −5
        assert!(rep.unsigned_max_deviation >= 9.0);
        assert!(rep.max_normalized <= 2.0 + 1e-12);
    }

    #[test]
    fn recurrence_over_larger_fields() {
        for (p, m, n_max) in [(5u64, 1usize, 9usize), (7, 1, 8), (3, 2, 7), (13, 1, 6)] {
            let base = Arc::new(fields::make_field(p, m, None).unwrap());
            let a = base.wrap(base.from_index_raw(2));
            let rep = recurrence_check(&base, &a, n_max, 128, BUDGET).unwrap();
            assert!(rep.max_deviation <= 1e-10, "p={p} m={m}: {}", rep.max_deviation);
            assert!(rep.max_normalized <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn linear_map_sums_to_minus_one() {
        for (p, m) in [(3u64, 1usize), (7, 1), (3, 2)] {
            let base = Arc::new(fields::make_field(p, m, None).unwrap());
            let r = RationalMap::polynomial(base.clone(), vec![base.zero(), base.one()]).unwrap();
            let s = char_sum_direct(&r, 1, None, 128, BUDGET).unwrap();
            let q = base.order() as f64;
            assert!((re(&s) + 1.0).abs() < 1e-30);
            assert!((mp::to_f64(&s.normalized.re) + 1.0 / q.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn artin_schreier_detection() {
        let f5 = prime(5);
        let e = |v: i64| f5.from_int(v);
        // x^5 − x + 3
        let r = RationalMap::polynomial(f5.clone(), vec![e(3), e(-1), e(0), e(0), e(0), e(1)]).unwrap();
        assert_eq!(r.is_degenerate(), Some(true));
        assert_eq!(char_sum_direct(&r, 1, None, 128, BUDGET).unwrap_err(), CharSumError::DegenerateR);
        // (2x²)^5 − 2x² + x³
        let mut c = vec![e(0); 11];
        c[10] = f5.pow(&e(2), 5).unwrap();
        c[2] = e(-2);
        c[3] = e(1);
        let r = RationalMap::polynomial(f5.clone(), c).unwrap();
        assert_eq!(r.is_degenerate(), Some(false));
        let k = RationalMap::kloosterman(f5.clone(), f5.one()).unwrap();
        assert_eq!(k.is_degenerate(), None);
        let f25 = Arc::new(fields::make_field(5, 2, None).unwrap());
        let s = f25.wrap(vec![0, 1]);
        // (s x)^5 − s x over F_25
        let mut c = vec![f25.zero(); 6];
        c[5] = f25.pow(&s, 5).unwrap();
        c[1] = f25.sub(&f25.zero(), &s).unwrap();
        assert_eq!(RationalMap::polynomial(f25, c).unwrap().is_degenerate(), Some(true));
    }

    #[test]
    fn spectrum_examples() {
        let bits = 128;
        let zero_rad = mp::from_u64(0, 64);
        let s = kloosterman_spectrum(3, &mp::from_i64(-1, 64), &zero_rad, bits).unwrap();
        let w = bits + 32;
        let (tr, norm) = (mp::mul(&mp::from_u64(2, 64), &s.theta.re, w), s.theta.norm_sqr(w));
        assert!((mp::to_f64(&tr) - 1.0).abs() < 1e-30 && (mp::to_f64(&norm) - 3.0).abs() < 1e-30);
        assert!((mp::to_f64(&s.theta.im) - 2.75f64.sqrt()).abs() < 1e-15);
        assert!((mp::to_f64(&s.predict(1)) + 1.0).abs() < 1e-30);
        assert!((mp::to_f64(&s.predict(2)) - 5.0).abs() < 1e-30);
        assert!((mp::to_f64(&s.predict(3)) - 8.0).abs() < 1e-30);

        let edge = mp::mul(&mp::from_u64(2, 64), &mp::sqrt(&mp::from_u64(7, w), w), w);
        let s = kloosterman_spectrum(7, &edge.neg(), &zero_rad, bits).unwrap();
        assert!(mp::to_f64(&s.phi).abs() < 1e-15);
        let s = kloosterman_spectrum(7, &mp::from_u64(0, 64), &zero_rad, bits).unwrap();
        assert!((mp::to_f64(&s.phi) - 0.25).abs() < 1e-30);
        assert!(matches!(
            kloosterman_spectrum(3, &mp::from_u64(4, 64), &zero_rad, bits),
            Err(CharSumError::WeilViolation { .. })
        ));
    }

    #[test]
    fn mobius_weighted_kloosterman() {
        let f3 = prime(3);
        let k = kloosterman_sum(&f3, &f3.one(), 1, None, 128, BUDGET).unwrap();
        let s = kloosterman_spectrum(3, &k.value.re, &k.radius, 128).unwrap();
        let phi = mp::to_f64(&s.phi);
        let t = mobius::sieve(100_000).unwrap();
        let one = mobius_char_sum(&t, &s, 1, Method::Direct).unwrap();
        assert!((one.value - (std::f64::consts::TAU * phi).cos()).abs() < 1e-15);
        let two = mobius_char_sum(&t, &s, 2, Method::Direct).unwrap();
        let oracle = (std::f64::consts::TAU * phi).cos() - (2.0 * std::f64::consts::TAU * phi).cos();
        assert!((two.value - oracle).abs() < 1e-15);
        let d = mobius_char_sum(&t, &s, 100_000, Method::Direct).unwrap();
        let w = mobius_char_sum(&t, &s, 100_000, Method::Swapped).unwrap();
        assert_eq!(d.value, w.value);
        // independent multiprecision re-summation in reverse order
        let m = 5_000usize;
        let d = mobius_char_sum(&t, &s, m, Method::Direct).unwrap();
        let w = 160;
        let tp = mp::mul(&mp::two_pi(w), &s.phi, w);
        let mut acc = mp::from_u64(0, w);
        for k in (1..=m).rev() {
            if t.mu(k) != 0 {
                let c = mp::cos(&mp::mul(&tp, &mp::from_u64(k as u64, 64), w), w);
                acc = mp::add(&acc, &mp::mul(&mp::from_i64(t.mu(k) as i64, 8), &c, w), w);
            }
        }
        assert!((d.value - mp::to_f64(&acc)).abs() <= d.error_bound, "{} vs {}", d.value, mp::to_f64(&acc));
    }

    #[test]
    fn berlekamp_massey_finds_fibonacci() {
        let mut s = vec![0u32, 1];
        for k in 2..20 {
            s.push((s[k - 1] + s[k - 2]) % 7);
        }
        assert_eq!(berlekamp_massey(&s, 7), vec![1, 6, 6]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn kloosterman_sums_are_real_and_weil_bounded(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), a in 1i64..13, n in 1usize..4) {
            let base = prime(p);
            let a = base.from_int(a);
            prop_assume!(!a.is_zero());
            let k = kloosterman_sum(&base, &a, n, None, 128, BUDGET).unwrap();
            prop_assert!(mp::to_f64(&k.value.im).abs() < 1e-25);
            prop_assert!(mp::to_f64(&k.normalized.re).abs() <= 2.0 + 1e-12);
        }
    }
}
