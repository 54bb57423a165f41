//! Dense univariate polynomials over a [`FiniteField`], coefficient vectors in
//! ascending degree. Schoolbook arithmetic throughout.

use super::{primes, FiniteField};

pub type Poly = Vec<Vec<u32>>;

pub fn trim<F: FiniteField + ?Sized>(f: &F, mut a: Poly) -> Poly {
    while a.last().is_some_and(|c| f.is_zero_raw(c)) {
        a.pop();
    }
    a
}

/// Degree, `None` for the zero polynomial.
pub fn degree<F: FiniteField + ?Sized>(f: &F, a: &Poly) -> Option<usize> {
    a.iter().rposition(|c| !f.is_zero_raw(c))
}

pub fn sub<F: FiniteField + ?Sized>(f: &F, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = f.zero_raw();
    let out = (0..n)
        .map(|i| f.sub_raw(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub fn mul<F: FiniteField + ?Sized>(f: &F, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero_raw(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero_raw(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = f.mul_raw(x, y);
            out[i + j] = f.add_raw(&out[i + j], &t);
        }
    }
    trim(f, out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn div_rem<F: FiniteField + ?Sized>(f: &F, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(f, b.clone());
    let db = b.len().checked_sub(1).expect("division by the zero polynomial");
    let lead_inv = f.inv_raw(&b[db]).expect("nonzero leading coefficient");
    let mut r = trim(f, a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero_raw(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = f.mul_raw(&r[r.len() - 1], &lead_inv);
        for (i, bc) in b.iter().enumerate() {
            let t = f.mul_raw(&c, bc);
            r[k + i] = f.sub_raw(&r[k + i], &t);
        }
        q[k] = c;
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub fn rem<F: FiniteField + ?Sized>(f: &F, a: &Poly, b: &Poly) -> Poly {
    div_rem(f, a, b).1
}

pub fn make_monic<F: FiniteField + ?Sized>(f: &F, a: Poly) -> Poly {
    let a = trim(f, a);
    match a.last() {
        None => a,
        Some(lc) => {
            let inv = f.inv_raw(lc).expect("nonzero");
            a.iter().map(|c| f.mul_raw(c, &inv)).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: FiniteField + ?Sized>(f: &F, a: &Poly, b: &Poly) -> Poly {
    let mut a = trim(f, a.clone());
    let mut b = trim(f, b.clone());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    make_monic(f, a)
}

pub fn derivative<F: FiniteField + ?Sized>(f: &F, a: &Poly) -> Poly {
    let p = f.characteristic() as u64;
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.scale_raw(c, (i as u64 % p) as u32))
        .collect();
    trim(f, out)
}

pub fn mul_mod<F: FiniteField + ?Sized>(f: &F, a: &Poly, b: &Poly, m: &Poly) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn pow_mod<F: FiniteField + ?Sized>(f: &F, base: &Poly, mut e: u128, m: &Poly) -> Poly {
    let mut result = rem(f, &vec![f.one_raw()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(f, &result, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(f, &b, &b, m);
        }
    }
    result
}

/// Evaluates `a` at `x` by Horner's rule.
pub fn eval<F: FiniteField + ?Sized>(f: &F, a: &Poly, x: &[u32]) -> Vec<u32> {
    let mut acc = f.zero_raw();
    for c in a.iter().rev() {
        acc = f.add_raw(&f.mul_raw(&acc, x), c);
    }
    acc
}

/// Rabin's irreducibility test for a polynomial over `f`.
pub fn is_irreducible<F: FiniteField + ?Sized>(f: &F, a: &Poly) -> bool {
    let a = trim(f, a.clone());
    let n = match degree(f, &a) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let q = f.order();
    let x: Poly = vec![f.zero_raw(), f.one_raw()];
    // x^(q^i) mod a for i = 0..=n
    let mut powers = Vec::with_capacity(n + 1);
    let mut cur = rem(f, &x, &a);
    powers.push(cur.clone());
    for _ in 0..n {
        cur = pow_mod(f, &cur, q, &a);
        powers.push(cur.clone());
    }
    if trim(f, sub(f, &powers[n], &x)).iter().any(|c| !f.is_zero_raw(c)) {
        return false;
    }
    for (r, _) in primes::factorize(n as u128) {
        let k = n / r as usize;
        let h = sub(f, &powers[k], &x);
        let g = gcd(f, &h, &a);
        if degree(f, &g) != Some(0) {
            return false;
        }
    }
    true
}
