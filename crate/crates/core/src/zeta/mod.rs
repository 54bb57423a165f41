//! L-polynomials of curves and their Frobenius spectra.
//!
//! `P(T) = Σ c_i T^i = Π (1 − β_j T)` is rebuilt exactly from point counts by
//! Newton's identities. The eigenvalues `β_j = √q · e(α_j)` are the roots of
//! the reversed polynomial `χ(T) = T^{2g} P(1/T)`, found with certified error
//! radii (see [`roots`]).

pub mod roots;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::curves::CountRecord;
use crate::mp::{self, MpComplex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaError {
    #[error("Newton identity step {k} does not divide exactly; the counts are inconsistent")]
    NonIntegerCoefficient { k: usize },
    #[error("functional equation fails at coefficient {i}")]
    SymmetryViolation { i: usize },
    #[error("expected point counts for n = 1..={expected}")]
    IncompleteRecords { expected: usize },
    #[error("root certification failed at {bits} bits")]
    PrecisionExhausted { bits: usize },
    #[error("eigenvalue error disks overlap at {bits} bits")]
    ClusteredRoots { bits: usize },
    #[error("eigenvalue off the circle |z| = sqrt(q)")]
    WeilViolation,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, ZetaError>;

/// Default working precision for spectra.
pub const DEFAULT_PRECISION: usize = 128;
/// Largest precision tried by [`compute_spectrum_auto`].
pub const MAX_PRECISION: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    q: u128,
    g: usize,
    coeffs: Vec<BigInt>,
}

impl LPolynomial {
    /// Checks `c_0 = 1`, the length and the functional equation.
    pub fn new(q: u128, g: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        if q < 2 || g == 0 {
            return Err(ZetaError::InvalidParams(format!("q = {q}, g = {g}")));
        }
        if coeffs.len() != 2 * g + 1 || !coeffs[0].is_one() {
            return Err(ZetaError::InvalidParams("need 2g + 1 coefficients with c_0 = 1".into()));
        }
        let qb = BigInt::from(q);
        for i in 0..=g {
            if coeffs[2 * g - i] != qb.pow((g - i) as u32) * &coeffs[i] {
                return Err(ZetaError::SymmetryViolation { i });
            }
        }
        Ok(LPolynomial { q, g, coeffs })
    }

    pub fn q(&self) -> u128 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients of `χ(T) = T^{2g} P(1/T)`, ascending.
    pub fn reversed(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// Power sums `s_1..=s_n` of the eigenvalues, i.e. `A_C(1..=n)`.
    pub fn power_sums(&self, n: usize) -> Vec<BigInt> {
        let c = |i: usize| self.coeffs.get(i).cloned().unwrap_or_default();
        let mut s: Vec<BigInt> = Vec::with_capacity(n);
        for k in 1..=n {
            let mut acc = -c(k) * BigInt::from(k);
            for i in 1..k.min(2 * self.g + 1) {
                acc -= c(i) * &s[k - i - 1];
            }
            s.push(acc);
        }
        s
    }

    /// `A_C(n) = Σ β_j^n`, exactly.
    pub fn trace(&self, n: usize) -> BigInt {
        self.power_sums(n).pop().unwrap_or_default()
    }

    /// `#C(F_{q^n}) = q^n + 1 − A_C(n)`.
    pub fn point_count(&self, n: usize) -> BigInt {
        BigInt::from(self.q).pow(n as u32) + 1 - self.trace(n)
    }

    /// `a_C(n) = A_C(n) / (2g q^{n/2})` rounded to `p` bits.
    pub fn normalized_trace(&self, n: usize, p: usize) -> BigFloat {
        let w = p + 32;
        let a = mp::from_bigint(&self.trace(n), w);
        let qn = mp::powf(&mp::from_u64(self.q as u64, w), &mp::from_f64(n as f64 / 2.0, w), w);
        let den = mp::mul(&mp::from_u64(2 * self.g as u64, w), &qn, w);
        mp::div(&a, &den, p)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q.to_string(),
            "g": self.g,
            "P": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Rebuilds `P(T)` from the counts for `n = 1..=2g`.
pub fn reconstruct_l_polynomial(records: &[CountRecord], q: u128, g: usize) -> Result<LPolynomial> {
    let d = 2 * g;
    if g == 0 || records.len() < d || records.iter().take(d).enumerate().any(|(i, r)| r.n != i + 1) {
        return Err(ZetaError::IncompleteRecords { expected: d });
    }
    let s: Vec<BigInt> = records.iter().take(d).map(|r| BigInt::from(r.trace)).collect();
    let mut c = vec![BigInt::one()];
    for k in 1..=d {
        let sum: BigInt = (1..=k).map(|i| &s[i - 1] * &c[k - i]).sum();
        let kb = BigInt::from(k);
        if !(&sum % &kb).is_zero() {
            return Err(ZetaError::NonIntegerCoefficient { k });
        }
        c.push(-(sum / kb));
    }
    LPolynomial::new(q, g, c)
}

/// `p ∤ c_g`: the Newton polygon of `P` has only slopes 0 and 1.
pub fn is_ordinary(lpoly: &LPolynomial, p: u64) -> bool {
    !(&lpoly.coeffs[lpoly.g] % BigInt::from(p)).is_zero()
}

/// Height of a Frobenius eigenvalue, `½ ln q`.
pub fn eigenvalue_height(q: u128) -> Result<f64> {
    check_q(q).map(|lq| lq / 2.0)
}

/// Bound `ln q` on the height of `e(α_j) = β_j / √q`.
pub fn angle_exponential_height_bound(q: u128) -> Result<f64> {
    check_q(q)
}

fn check_q(q: u128) -> Result<f64> {
    if q < 2 {
        return Err(ZetaError::InvalidParams(format!("q = {q} < 2")));
    }
    Ok((q as f64).ln())
}

/// A distinct eigenvalue with its certificate.
#[derive(Debug, Clone)]
pub struct Eigenvalue {
    pub value: MpComplex,
    /// Radius of a disk around `value` containing the true eigenvalue.
    pub radius: BigFloat,
    /// Normalised angle in `[0, 1)`.
    pub angle: BigFloat,
    pub angle_radius: BigFloat,
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct FrobeniusSpectrum {
    q: u128,
    g: usize,
    precision_bits: usize,
    roots: Vec<Eigenvalue>,
}

/// Real value with an error radius.
#[derive(Debug, Clone)]
pub struct Ball {
    pub mid: BigFloat,
    pub rad: BigFloat,
}

impl Ball {
    pub fn contains(&self, x: &BigFloat) -> bool {
        let d = mp::sub(x, &self.mid, self.mid.mantissa_max_bit_len().unwrap_or(64) + 8).abs();
        mp::le(&d, &self.rad)
    }
}

impl FrobeniusSpectrum {
    pub fn q(&self) -> u128 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    /// Distinct eigenvalues, ascending by angle.
    pub fn distinct(&self) -> &[Eigenvalue] {
        &self.roots
    }

    /// All `2g` eigenvalues, repeated by multiplicity.
    pub fn eigenvalues(&self) -> Vec<MpComplex> {
        self.expand(|r| r.value.clone())
    }

    /// All `2g` angles in `[0, 1)`, ascending.
    pub fn angles(&self) -> Vec<BigFloat> {
        self.expand(|r| r.angle.clone())
    }

    pub fn angles_f64(&self) -> Vec<f64> {
        self.angles().iter().map(mp::to_f64).collect()
    }

    fn expand<T>(&self, f: impl Fn(&Eigenvalue) -> T) -> Vec<T> {
        self.roots.iter().flat_map(|r| (0..r.multiplicity).map(|_| f(r)).collect::<Vec<_>>()).collect()
    }

    /// Largest eigenvalue radius.
    pub fn radius(&self) -> BigFloat {
        max_of(self.roots.iter().map(|r| &r.radius))
    }

    /// Largest angle radius.
    pub fn angle_radius(&self) -> BigFloat {
        max_of(self.roots.iter().map(|r| &r.angle_radius))
    }

    /// `a_C(n) = (1/2g) Σ_j cos(2π n α_j)` with a propagated error radius.
    pub fn normalized_trace(&self, n: u64) -> Ball {
        let w = self.precision_bits + 32;
        let mut sum = mp::from_u64(0, w);
        for r in &self.roots {
            // n·α is exact at this precision
            let na = mp::mul(&r.angle, &mp::from_u64(n, 64), w + 64);
            let frac = na.fract();
            let c = mp::cos(&mp::mul(&mp::two_pi(w), &frac, w), w);
            sum = mp::add(&sum, &mp::mul(&c, &mp::from_u64(r.multiplicity as u64, 64), w), w);
        }
        let mid = mp::div(&sum, &mp::from_u64(2 * self.g as u64, 64), w);
        let two_pi_n = mp::mul_up(&mp::from_f64(std::f64::consts::TAU * (1.0 + 1e-15), 64), &mp::from_u64(n, 64));
        let rounding = mp::pow2_big(-(w as i64) + 8);
        Ball { mid, rad: mp::add_up(&mp::mul_up(&two_pi_n, &self.angle_radius()), &rounding) }
    }

    /// [`normalized_trace`](Self::normalized_trace), failing when the radius
    /// exceeds `tol`.
    pub fn normalized_trace_within(&self, n: u64, tol: f64) -> Result<Ball> {
        let b = self.normalized_trace(n);
        if mp::to_f64_up(&b.rad) > tol {
            return Err(ZetaError::PrecisionExhausted { bits: self.precision_bits });
        }
        Ok(b)
    }

    /// Coefficients of `Π (1 − β_j T)` expanded from the spectrum.
    pub fn expand_l_polynomial(&self) -> Vec<MpComplex> {
        let w = self.precision_bits + 32;
        let mut poly = vec![MpComplex::new(mp::from_u64(1, w), mp::from_u64(0, w))];
        for beta in self.eigenvalues() {
            let mut next = vec![MpComplex::zero(w); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] = next[i].add(c, w);
                next[i + 1] = next[i + 1].sub(&c.mul(&beta, w), w);
            }
            poly = next;
        }
        poly
    }

    pub fn to_json(&self) -> Value {
        let digits = decimal_digits(self.precision_bits);
        let eig: Vec<Value> = self
            .roots
            .iter()
            .map(|r| {
                json!({
                    "re": mp::to_decimal(&r.value.re, digits),
                    "im": mp::to_decimal(&r.value.im, digits),
                    "angle": mp::to_decimal(&r.angle, digits),
                    "multiplicity": r.multiplicity,
                    "radius": mp::to_decimal(&r.radius, 6),
                    "angle_radius": mp::to_decimal(&r.angle_radius, 6),
                })
            })
            .collect();
        json!({
            "q": self.q.to_string(),
            "g": self.g,
            "precision_bits": self.precision_bits,
            "radius": mp::to_decimal(&self.radius(), 6),
            "angle_radius": mp::to_decimal(&self.angle_radius(), 6),
            "eigenvalues": eig,
        })
    }
}

/// Significant decimal digits carried by `bits` binary digits.
pub fn decimal_digits(bits: usize) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).floor() as usize
}

fn max_of<'a>(it: impl Iterator<Item = &'a BigFloat>) -> BigFloat {
    it.fold(mp::from_u64(0, 64), |m, x| if mp::lt(&m, x) { x.clone() } else { m })
}

/// Eigenvalues and angles certified at `precision_bits`.
pub fn compute_spectrum(lpoly: &LPolynomial, precision_bits: usize) -> Result<FrobeniusSpectrum> {
    if precision_bits < 64 {
        return Err(ZetaError::InvalidParams(format!("precision {precision_bits} < 64")));
    }
    let bits = precision_bits;
    let w = bits + 32;
    let sqrt_q = mp::sqrt(&mp::from_bigint(&BigInt::from(lpoly.q), w), w);
    let sqrt_q_f = lpoly.q as f64;
    let sqrt_q_f = sqrt_q_f.sqrt();
    let target = mp::mul(&mp::pow2_big(-(bits as i64) + 16), &sqrt_q, 64);
    let weil_slack = mp::mul_up(&mp::pow2_big(-(w as i64) + 8), &sqrt_q);

    let mut found: Vec<Eigenvalue> = Vec::new();
    for (factor, multiplicity) in roots::squarefree_parts(&lpoly.reversed()) {
        for seed in roots::aberth_seeds(&factor, sqrt_q_f) {
            let z = roots::newton_polish(&factor, seed, w);
            let radius = roots::certify(&factor, &z, w).ok_or(ZetaError::PrecisionExhausted { bits })?;
            if mp::lt(&target, &radius) {
                return Err(ZetaError::PrecisionExhausted { bits });
            }
            let off = mp::sub(&z.abs(w), &sqrt_q, w).abs();
            if mp::lt(&mp::add_up(&radius, &weil_slack), &off) {
                return Err(ZetaError::WeilViolation);
            }
            let angle = z.arg_turns(w);
            // |Δ arg| ≤ (π/2)·ρ/|z| radians, a quarter of ρ/|z| in turns
            let angle_radius = mp::add_up(&mp::div_up(&radius, &sqrt_q), &mp::pow2_big(-(w as i64) + 4));
            found.push(Eigenvalue { value: z, radius, angle, angle_radius, multiplicity });
        }
    }
    for i in 0..found.len() {
        for j in i + 1..found.len() {
            let gap = found[i].value.sub(&found[j].value, w).abs(64);
            if mp::le(&gap, &mp::add_up(&found[i].radius, &found[j].radius)) {
                return Err(ZetaError::ClusteredRoots { bits });
            }
        }
    }
    found.sort_by(|a, b| a.angle.cmp(&b.angle).unwrap_or(0).cmp(&0));
    let total: usize = found.iter().map(|r| r.multiplicity).sum();
    debug_assert_eq!(total, 2 * lpoly.g);
    Ok(FrobeniusSpectrum { q: lpoly.q, g: lpoly.g, precision_bits: bits, roots: found })
}

/// [`compute_spectrum`] from [`DEFAULT_PRECISION`], doubling on
/// `PrecisionExhausted` up to [`MAX_PRECISION`].
pub fn compute_spectrum_auto(lpoly: &LPolynomial, min_bits: usize) -> Result<FrobeniusSpectrum> {
    let mut bits = min_bits.max(DEFAULT_PRECISION);
    loop {
        match compute_spectrum(lpoly, bits) {
            Err(ZetaError::PrecisionExhausted { .. }) if bits < MAX_PRECISION => bits *= 2,
            other => return other,
        }
    }
}

/// Largest absolute coefficient, for relative comparisons.
pub fn max_abs_coeff(lpoly: &LPolynomial) -> f64 {
    lpoly.coeffs.iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
}
