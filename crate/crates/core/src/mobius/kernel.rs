//! Fixed-point `e(t) = cos 2πt + i sin 2πt`.
//!
//! An angle is a `u128` fraction of a full turn, so `n·α mod 1` is an exact
//! wrapping multiplication. Values come back scaled by `2^62`, each component
//! within [`KERNEL_ERR`] of the truth. Everything is integer arithmetic, so
//! results are bit-identical on every platform and for every thread count.

use std::sync::OnceLock;

use num_traits::ToPrimitive;

use crate::mp;

/// Fixed-point scale: `1.0` is `ONE`.
pub const SCALE_BITS: u32 = 62;
pub const ONE: i128 = 1 << SCALE_BITS;

/// Bound on the error of each component of [`cis`], as a real number.
pub const KERNEL_ERR: f64 = 1.0 / (1u64 << 56) as f64;

const OCTANT_SHIFT: u32 = 125;
const OCTANT_MASK: u128 = (1 << OCTANT_SHIFT) - 1;

/// `floor(2π · 2^61)`.
fn two_pi_q61() -> u128 {
    static C: OnceLock<u128> = OnceLock::new();
    *C.get_or_init(|| mp::floor_scaled(&mp::two_pi(192), 61).to_u128().expect("fits"))
}

/// `(cos θ, sin θ)` for `0 ≤ θ ≤ π/4`, `θ` scaled by `2^62`.
fn cos_sin_small(theta: i128) -> (i128, i128) {
    let x2 = (theta * theta) >> SCALE_BITS;
    let mut s = ONE;
    for k in (3..=19).rev().step_by(2) {
        s = ONE - ((x2 * s) >> SCALE_BITS) / (k * (k - 1));
    }
    let mut c = ONE;
    for k in (2..=20).rev().step_by(2) {
        c = ONE - ((x2 * c) >> SCALE_BITS) / (k * (k - 1));
    }
    (c, (theta * s) >> SCALE_BITS)
}

/// `e(t / 2^128)` as `(re, im)` scaled by `2^62`.
pub fn cis(t: u128) -> (i128, i128) {
    let octant = (t >> OCTANT_SHIFT) as u8;
    let mut r = t & OCTANT_MASK;
    if octant & 1 == 1 {
        r = (1 << OCTANT_SHIFT) - r;
    }
    let theta = (((r >> 64) * two_pi_q61()) >> 63) as i128;
    let (c, s) = cos_sin_small(theta);
    match octant {
        0 => (c, s),
        1 => (s, c),
        2 => (-s, c),
        3 => (-c, s),
        4 => (-c, -s),
        5 => (-s, -c),
        6 => (s, -c),
        _ => (c, -s),
    }
}

/// Fixed-point value as `f64` (correctly rounded for `|v| < 2^53` units).
pub fn to_f64(v: i128) -> f64 {
    v as f64 / ONE as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use astro_float::BigFloat;
    use rand::{Rng, SeedableRng};

    // oracle: multiprecision cos/sin of 2π·t/2^128
    fn reference(t: u128) -> (i128, i128) {
        let p = 256;
        let frac = mp::div(
            &mp::from_bigint(&num_bigint::BigInt::from(t), p),
            &mp::pow2_big(128),
            p,
        );
        let phi = mp::mul(&mp::two_pi(p), &frac, p);
        let fixed = |x: BigFloat| mp::floor_scaled(&x, SCALE_BITS as usize).to_i128().unwrap();
        (fixed(mp::cos(&phi, p)), fixed(mp::sin(&phi, p)))
    }

    #[test]
    fn agrees_with_multiprecision_reference() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut samples: Vec<u128> = (0..2000).map(|_| rng.gen()).collect();
        // octant boundaries and their neighbours
        for k in 0..8u128 {
            let b = k << OCTANT_SHIFT;
            samples.extend([b, b.wrapping_sub(1), b + 1]);
        }
        // KERNEL_ERR in units of 2^-62, plus one for the floor in the oracle
        let tol = (KERNEL_ERR * ONE as f64) as i128 + 1;
        for t in samples {
            let (c, s) = cis(t);
            let (rc, rs) = reference(t);
            assert!((c - rc).abs() <= tol, "cos at {t}: {c} vs {rc}");
            assert!((s - rs).abs() <= tol, "sin at {t}: {s} vs {rs}");
        }
    }

    #[test]
    fn quarter_turns() {
        assert_eq!(cis(0), (ONE, 0));
        let (c, s) = cis(1 << 126);
        assert!(c.abs() < 64 && (s - ONE).abs() < 64);
        let (c, s) = cis(1 << 127);
        assert!((c + ONE).abs() < 64 && s.abs() < 64);
    }
}
