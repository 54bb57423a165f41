//! Certified complex roots of integer polynomials.
//!
//! The polynomial is split into squarefree parts over `Q` (Yun), so every part
//! has simple roots with known multiplicity. Each part is solved by
//! Aberth–Ehrlich iteration in `f64`, every seed is polished by Newton steps
//! at the working precision, and a radius is certified from
//! `min_j |z − r_j| ≤ d · |f(z)| / |f'(z)|` with rounding errors bounded
//! from above.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::mp::{self, MpComplex};

type QPoly = Vec<BigRational>;

fn q_trim(mut a: QPoly) -> QPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn q_deriv(a: &QPoly) -> QPoly {
    q_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn q_div_rem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let b = q_trim(b.clone());
    let db = b.len() - 1;
    let mut r = q_trim(a.clone());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &b[db];
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &c * bc;
        }
        q[k] = c;
        r.pop();
        r = q_trim(r);
    }
    (q_trim(q), r)
}

fn q_monic(a: QPoly) -> QPoly {
    let a = q_trim(a);
    match a.last().cloned() {
        Some(lc) => a.into_iter().map(|c| c / &lc).collect(),
        None => a,
    }
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (q_trim(a.clone()), q_trim(b.clone()));
    while !b.is_empty() {
        let r = q_div_rem(&a, &b).1;
        a = b;
        b = r;
    }
    q_monic(a)
}

fn q_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    q_trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn to_primitive(a: &QPoly) -> Vec<BigInt> {
    let lcm = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = a.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

/// Squarefree decomposition over `Q`: primitive integer factors, each with
/// its multiplicity.
pub fn squarefree_parts(f: &[BigInt]) -> Vec<(Vec<BigInt>, usize)> {
    let f: QPoly = q_trim(f.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    if f.len() <= 1 {
        return Vec::new();
    }
    let df = q_deriv(&f);
    let a0 = q_gcd(&f, &df);
    let mut b = q_div_rem(&f, &a0).0;
    let c = q_div_rem(&df, &a0).0;
    let mut d = q_sub(&c, &q_deriv(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a = q_gcd(&b, &d);
        let nb = q_div_rem(&b, &a).0;
        let nc = q_div_rem(&d, &a).0;
        if a.len() > 1 {
            out.push((to_primitive(&a), i));
        }
        d = q_sub(&nc, &q_deriv(&nb));
        b = nb;
        i += 1;
    }
    out
}

/// Aberth–Ehrlich seeds. `scale` is the expected root modulus.
pub fn aberth_seeds(f: &[BigInt], scale: f64) -> Vec<Complex64> {
    let d = f.len() - 1;
    if d == 1 {
        let r = -f[0].to_f64().unwrap_or(0.0) / f[1].to_f64().unwrap_or(1.0);
        return vec![Complex64::new(r, 0.0)];
    }
    // substitute z = scale·w so the roots sit near the unit circle
    let lead = f[d].to_f64().unwrap_or(1.0);
    let g: Vec<Complex64> = f
        .iter()
        .enumerate()
        .map(|(k, c)| Complex64::new(c.to_f64().unwrap_or(0.0) / lead * scale.powi(k as i32 - d as i32), 0.0))
        .collect();
    let eval = |w: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for c in g.iter().rev() {
            dv = dv * w + v;
            v = v * w + c;
        }
        (v, dv)
    };
    let mut w: Vec<Complex64> = (0..d)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * (j as f64 + 0.25) / d as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let (v, dv) = eval(w[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d).filter(|&j| j != i).map(|j| 1.0 / (w[i] - w[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            w[i] -= step;
            worst = worst.max(step.norm());
        }
        if worst < 1e-15 {
            break;
        }
    }
    w.into_iter().map(|x| x * scale).collect()
}

fn horner(coeffs: &[BigFloat], z: &MpComplex, p: usize) -> (MpComplex, MpComplex) {
    let mut v = MpComplex::zero(p);
    let mut dv = MpComplex::zero(p);
    for c in coeffs.iter().rev() {
        dv = dv.mul(z, p).add(&v, p);
        v = v.mul(z, p);
        v.re = mp::add(&v.re, c, p);
    }
    (v, dv)
}

/// Newton polishing at `p` bits, starting from a machine-precision seed.
pub fn newton_polish(f: &[BigInt], seed: Complex64, p: usize) -> MpComplex {
    let coeffs: Vec<BigFloat> = f.iter().map(|c| mp::from_bigint(c, p + 64)).collect();
    let mut z = MpComplex::from_f64(seed.re, seed.im, p);
    let tol = mp::pow2_big(-(p as i64) + 6);
    for _ in 0..200 {
        let (v, dv) = horner(&coeffs, &z, p);
        if v.re.is_zero() && v.im.is_zero() {
            break;
        }
        if dv.re.is_zero() && dv.im.is_zero() {
            break;
        }
        let step = v.div(&dv, p);
        z = z.sub(&step, p);
        let rel = mp::div(&step.abs(64), &mp::add(&z.abs(64), &mp::from_u64(1, 64), 64), 64);
        if mp::le(&rel, &tol) {
            // one more step settles the last bits
            let (v, dv) = horner(&coeffs, &z, p);
            if !(dv.re.is_zero() && dv.im.is_zero()) {
                z = z.sub(&v.div(&dv, p), p);
            }
            break;
        }
    }
    z
}

/// Certified radius around `z` containing a root of `f` (which must be
/// squarefree), or `None` when rounding noise swamps the derivative.
pub fn certify(f: &[BigInt], z: &MpComplex, p: usize) -> Option<BigFloat> {
    let q = p + 32;
    let coeffs: Vec<BigFloat> = f.iter().map(|c| mp::from_bigint(c, q + 64)).collect();
    let (v, dv) = horner(&coeffs, z, q);
    let r = z.abs(64);
    let r_up = mp::mul_up(&r, &mp::from_f64(1.0 + 1e-15, 64));
    // Σ|a_i| r^i and Σ i|a_i| r^(i-1), rounded up
    let mut mag = mp::from_u64(0, 64);
    let mut dmag = mp::from_u64(0, 64);
    for c in coeffs.iter().rev() {
        dmag = mp::add_up(&mp::mul_up(&dmag, &r_up), &mag);
        mag = mp::add_up(&mp::mul_up(&mag, &r_up), &c.abs());
    }
    let unit = mp::pow2_big(-(q as i64) + 1);
    let factor = mp::from_u64(8 * (f.len() as u64) + 8, 64);
    let err_v = mp::mul_up(&mp::mul_up(&factor, &unit), &mag);
    let err_dv = mp::mul_up(&mp::mul_up(&factor, &unit), &dmag);
    let slack = mp::from_f64(1.0 + 1e-12, 64);
    let num = mp::add_up(&mp::mul_up(&v.abs(64), &slack), &err_v);
    let den_raw = mp::sub(&mp::div(&dv.abs(64), &slack, 64), &err_dv, 64);
    if !den_raw.is_positive() {
        return None;
    }
    let degree = mp::from_u64((f.len() - 1) as u64, 64);
    Some(mp::mul_up(&degree, &mp::div_up(&num, &den_raw)))
}
