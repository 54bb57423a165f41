//! Exact arithmetic in `F_q` (`q = p^m`) and in tower extensions `F_{q^n}`.
//!
//! Elements are flat coefficient vectors over `F_p`. For a base field
//! `F_q = F_p[s]/(M(s))` an element is `m` residues. For an extension
//! `F_{q^n} = F_q[t]/(N(t))` it is `n` base coefficients laid out one after
//! another, so `n·m` residues in total; base element `j` of coefficient `t^i`
//! sits at index `i·m + j`.
//!
//! Element order everywhere (enumeration, modulus search) is the integer
//! encoding `Σ c_k p^k` of the flat vector, constant term least significant.

pub mod poly;
pub mod primes;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

pub use poly::Poly;

/// Default cap on the number of elements an enumeration may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeP(u64),
    #[error("modulus polynomial is reducible")]
    ReduciblePoly,
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("operands belong to different fields")]
    OwnerMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("quadratic character needs odd characteristic")]
    EvenCharacteristic,
    #[error("field has {size} elements, over the enumeration budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("field order overflows 128 bits")]
    Overflow,
    #[error("cannot parse field specification {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, FieldError>;

/// Identity token tying elements to the field that created them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldId(u64);

impl FieldId {
    fn fresh() -> Self {
        static NEXT: AtomicU64 = AtomicU64::new(1);
        FieldId(NEXT.fetch_add(1, Ordering::Relaxed))
    }
}

/// An element of a finite field, owned by the field that created it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<u32>,
    owner: FieldId,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn owner(&self) -> FieldId {
        self.owner
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Binary operation selector for [`FiniteField::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    /// Only the left operand is used; negative exponents invert first.
    Pow(i128),
}

pub trait FiniteField: Send + Sync {
    fn id(&self) -> FieldId;
    fn characteristic(&self) -> u32;
    /// Dimension over the prime field; length of raw coefficient vectors.
    fn prime_degree(&self) -> usize;
    /// Number of elements.
    fn order(&self) -> u128;
    /// Product of two raw coefficient vectors.
    fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32>;
    /// `Tr_{F/F_p}` of each flat basis vector; the trace is the dot product
    /// with this vector.
    fn trace_functional(&self) -> &[u32];

    fn zero_raw(&self) -> Vec<u32> {
        vec![0; self.prime_degree()]
    }

    fn one_raw(&self) -> Vec<u32> {
        let mut v = self.zero_raw();
        v[0] = 1;
        v
    }

    fn is_zero_raw(&self, a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn add_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.characteristic() as u64;
        a.iter().zip(b).map(|(&x, &y)| ((x as u64 + y as u64) % p) as u32).collect()
    }

    fn sub_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.characteristic() as u64;
        a.iter().zip(b).map(|(&x, &y)| ((x as u64 + p - y as u64) % p) as u32).collect()
    }

    fn neg_raw(&self, a: &[u32]) -> Vec<u32> {
        self.sub_raw(&self.zero_raw(), a)
    }

    fn scale_raw(&self, a: &[u32], k: u32) -> Vec<u32> {
        let p = self.characteristic() as u64;
        a.iter().map(|&x| ((x as u64 * k as u64) % p) as u32).collect()
    }

    fn pow_raw(&self, a: &[u32], mut e: u128) -> Vec<u32> {
        let mut r = self.one_raw();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_raw(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul_raw(&b, &b);
            }
        }
        r
    }

    fn inv_raw(&self, a: &[u32]) -> Option<Vec<u32>> {
        if self.is_zero_raw(a) {
            None
        } else {
            Some(self.pow_raw(a, self.order() - 2))
        }
    }

    /// `Tr_{F/F_p}` through the precomputed linear functional.
    fn trace_raw(&self, a: &[u32]) -> u32 {
        let p = self.characteristic() as u64;
        let t: u64 = a
            .iter()
            .zip(self.trace_functional())
            .fold(0, |acc, (&x, &w)| (acc + x as u64 * w as u64) % p);
        t as u32
    }

    fn index_raw(&self, a: &[u32]) -> u128 {
        let p = self.characteristic() as u128;
        a.iter().rev().fold(0, |acc, &c| acc * p + c as u128)
    }

    fn from_index_raw(&self, mut i: u128) -> Vec<u32> {
        let p = self.characteristic() as u128;
        (0..self.prime_degree())
            .map(|_| {
                let c = (i % p) as u32;
                i /= p;
                c
            })
            .collect()
    }

    /// Wraps a flat coefficient vector, reducing residues mod `p`.
    fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.prime_degree() {
            return Err(FieldError::InvalidElement(format!(
                "{} coefficients for a field of degree {}",
                coeffs.len(),
                self.prime_degree()
            )));
        }
        let p = self.characteristic();
        let mut v: Vec<u32> = coeffs.iter().map(|&c| c % p).collect();
        v.resize(self.prime_degree(), 0);
        Ok(self.wrap(v))
    }

    /// The image of an integer in the prime subfield.
    fn from_int(&self, k: i64) -> FieldElement {
        let p = self.characteristic() as i64;
        let mut v = self.zero_raw();
        v[0] = k.rem_euclid(p) as u32;
        self.wrap(v)
    }

    fn wrap(&self, coeffs: Vec<u32>) -> FieldElement {
        debug_assert_eq!(coeffs.len(), self.prime_degree());
        FieldElement { coeffs, owner: self.id() }
    }

    fn zero(&self) -> FieldElement {
        self.wrap(self.zero_raw())
    }

    fn one(&self) -> FieldElement {
        self.wrap(self.one_raw())
    }

    fn check(&self, x: &FieldElement) -> Result<()> {
        if x.owner == self.id() {
            Ok(())
        } else {
            Err(FieldError::OwnerMismatch)
        }
    }

    fn arith(&self, a: &FieldElement, b: &FieldElement, op: Op) -> Result<FieldElement> {
        self.check(a)?;
        if !matches!(op, Op::Pow(_)) {
            self.check(b)?;
        }
        let out = match op {
            Op::Add => self.add_raw(&a.coeffs, &b.coeffs),
            Op::Sub => self.sub_raw(&a.coeffs, &b.coeffs),
            Op::Mul => self.mul_raw(&a.coeffs, &b.coeffs),
            Op::Div => {
                let inv = self.inv_raw(&b.coeffs).ok_or(FieldError::DivisionByZero)?;
                self.mul_raw(&a.coeffs, &inv)
            }
            Op::Pow(k) if k >= 0 => self.pow_raw(&a.coeffs, k as u128),
            Op::Pow(k) => {
                let inv = self.inv_raw(&a.coeffs).ok_or(FieldError::DivisionByZero)?;
                self.pow_raw(&inv, k.unsigned_abs())
            }
        };
        Ok(self.wrap(out))
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.arith(a, b, Op::Add)
    }

    fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.arith(a, b, Op::Sub)
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.arith(a, b, Op::Mul)
    }

    fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.arith(a, b, Op::Div)
    }

    fn pow(&self, a: &FieldElement, k: i128) -> Result<FieldElement> {
        self.arith(a, a, Op::Pow(k))
    }

    /// `Tr_{F/F_p}(x) = Σ x^{p^i}` by repeated `p`-th powers. The sum is checked
    /// to land in the prime field.
    fn trace_to_prime(&self, x: &FieldElement) -> Result<u32> {
        self.check(x)?;
        let p = self.characteristic() as u128;
        let mut conj = x.coeffs.clone();
        let mut acc = self.zero_raw();
        for _ in 0..self.prime_degree() {
            acc = self.add_raw(&acc, &conj);
            conj = self.pow_raw(&conj, p);
        }
        assert!(acc[1..].iter().all(|&c| c == 0), "trace left the prime field");
        Ok(acc[0])
    }

    /// Legendre-style character: `0`, `+1` for nonzero squares, `-1` otherwise.
    fn quadratic_character(&self, x: &FieldElement) -> Result<i8> {
        self.check(x)?;
        if self.characteristic() == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        Ok(self.quadratic_character_raw(&x.coeffs))
    }

    fn quadratic_character_raw(&self, x: &[u32]) -> i8 {
        if self.is_zero_raw(x) {
            return 0;
        }
        let e = self.pow_raw(x, (self.order() - 1) / 2);
        if e == self.one_raw() {
            1
        } else {
            debug_assert_eq!(e, self.neg_raw(&self.one_raw()));
            -1
        }
    }

    /// All elements in index order, within [`DEFAULT_ENUMERATION_BUDGET`].
    fn enumerate(&self) -> Result<Elements<'_, Self>>
    where
        Self: Sized,
    {
        self.enumerate_with_budget(DEFAULT_ENUMERATION_BUDGET)
    }

    fn enumerate_with_budget(&self, budget: u128) -> Result<Elements<'_, Self>>
    where
        Self: Sized,
    {
        check_budget(self.order(), budget)?;
        Ok(Elements { field: self, next: 0, end: self.order() })
    }

    /// Elements with index in `start..end`, for partitioned enumeration.
    fn enumerate_range(&self, start: u128, end: u128) -> Elements<'_, Self>
    where
        Self: Sized,
    {
        Elements { field: self, next: start, end: end.min(self.order()) }
    }

    fn index_of(&self, x: &FieldElement) -> Result<u128> {
        self.check(x)?;
        Ok(self.index_raw(&x.coeffs))
    }
}

pub fn check_budget(size: u128, budget: u128) -> Result<()> {
    if size > budget {
        Err(FieldError::BudgetExceeded { size, budget })
    } else {
        Ok(())
    }
}

/// Iterator over field elements in index order.
pub struct Elements<'a, F: FiniteField> {
    field: &'a F,
    next: u128,
    end: u128,
}

impl<F: FiniteField> Iterator for Elements<'_, F> {
    type Item = FieldElement;

    fn next(&mut self) -> Option<FieldElement> {
        if self.next >= self.end {
            return None;
        }
        let v = self.field.from_index_raw(self.next);
        self.next += 1;
        Some(self.field.wrap(v))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.end - self.next).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

fn checked_order(base: u128, exp: usize) -> Result<u128> {
    let e = u32::try_from(exp).map_err(|_| FieldError::Overflow)?;
    base.checked_pow(e).ok_or(FieldError::Overflow)
}

fn trace_functional_of<F: FiniteField + ?Sized>(f: &F) -> Vec<u32> {
    let d = f.prime_degree();
    let p = f.characteristic() as u128;
    (0..d)
        .map(|i| {
            let mut e = f.zero_raw();
            e[i] = 1;
            let mut acc = f.zero_raw();
            for _ in 0..d {
                acc = f.add_raw(&acc, &e);
                e = f.pow_raw(&e, p);
            }
            acc[0]
        })
        .collect()
}

/// `F_q = F_p[s]/(M(s))` with `q = p^m`.
#[derive(Debug, Clone)]
pub struct FieldDesc {
    p: u32,
    m: usize,
    modulus: Vec<u32>,
    order: u128,
    id: FieldId,
    trace: Vec<u32>,
}

impl FieldDesc {
    /// The prime field `F_p` with the degree-1 modulus `x`.
    pub fn prime(p: u32) -> Result<Self> {
        if !primes::is_prime(p as u64) {
            return Err(FieldError::NonPrimeP(p as u64));
        }
        Ok(Self::unchecked(p, vec![0, 1]))
    }

    fn unchecked(p: u32, modulus: Vec<u32>) -> Self {
        let m = modulus.len() - 1;
        let mut f = FieldDesc {
            p,
            m,
            modulus,
            order: (p as u128).pow(m as u32),
            id: FieldId::fresh(),
            trace: Vec::new(),
        };
        f.trace = trace_functional_of(&f);
        f
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Canonical `p^m/[c0,...,cm]` form.
    pub fn spec_string(&self) -> String {
        format!("{}^{}/{}", self.p, self.m, format_list(&self.modulus))
    }

    fn mul_prime(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
}

/// Builds `F_{p^m}`. Without a seed, the modulus is the least monic
/// irreducible polynomial of degree `m` in index order.
pub fn make_field(p: u64, m: usize, seed_poly: Option<&[u32]>) -> Result<FieldDesc> {
    if !primes::is_prime(p) || p > u32::MAX as u64 {
        return Err(FieldError::NonPrimeP(p));
    }
    if m == 0 {
        return Err(FieldError::InvalidModulus("degree must be positive".into()));
    }
    let p = p as u32;
    checked_order(p as u128, m)?;
    let fp = FieldDesc::prime(p)?;
    let to_poly = |c: &[u32]| -> Poly { c.iter().map(|&x| vec![x % p]).collect() };
    let modulus = match seed_poly {
        Some(seed) => {
            if seed.len() != m + 1 || seed[m] % p != 1 {
                return Err(FieldError::InvalidModulus(format!(
                    "expected a monic polynomial of degree {m}"
                )));
            }
            if !poly::is_irreducible(&fp, &to_poly(seed)) {
                return Err(FieldError::ReduciblePoly);
            }
            seed.iter().map(|&c| c % p).collect()
        }
        None => {
            if m == 1 {
                vec![0, 1]
            } else {
                let count = checked_order(p as u128, m)?;
                (0..count)
                    .map(|i| {
                        let mut c = fp_digits(i, p, m);
                        c.push(1);
                        c
                    })
                    .find(|c| poly::is_irreducible(&fp, &to_poly(c)))
                    .expect("an irreducible polynomial of every degree exists")
            }
        }
    };
    Ok(FieldDesc::unchecked(p, modulus))
}

fn fp_digits(mut i: u128, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let c = (i % p as u128) as u32;
            i /= p as u128;
            c
        })
        .collect()
}

impl FiniteField for FieldDesc {
    fn id(&self) -> FieldId {
        self.id
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn prime_degree(&self) -> usize {
        self.m
    }

    fn order(&self) -> u128 {
        self.order
    }

    fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let m = self.m;
        if m == 1 {
            return vec![self.mul_prime(a[0], b[0])];
        }
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce by the monic modulus from the top
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &mc) in self.modulus[..m].iter().enumerate() {
                prod[k - m + j] = (prod[k - m + j] + (p - c) * mc as u64) % p;
            }
        }
        prod[..m].iter().map(|&c| c as u32).collect()
    }

    fn trace_functional(&self) -> &[u32] {
        &self.trace
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

impl FromStr for FieldDesc {
    type Err = FieldError;

    /// Parses `p^m` (default modulus) or `p^m/[c0,...,cm]`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || FieldError::Parse(s.to_string());
        let s = s.trim();
        let (head, modulus) = match s.split_once('/') {
            Some((h, m)) => (h, Some(parse_list(m).ok_or_else(err)?)),
            None => (s, None),
        };
        let (p, m) = match head.split_once('^') {
            Some((p, m)) => (
                p.trim().parse::<u64>().map_err(|_| err())?,
                m.trim().parse::<usize>().map_err(|_| err())?,
            ),
            None => (head.parse::<u64>().map_err(|_| err())?, 1),
        };
        make_field(p, m, modulus.as_deref())
    }
}

/// `F_{q^n} = F_q[t]/(N(t))` over a [`FieldDesc`].
#[derive(Debug, Clone)]
pub struct ExtensionDesc {
    base: Arc<FieldDesc>,
    n: usize,
    modulus: Poly,
    order: u128,
    id: FieldId,
    trace: Vec<u32>,
}

/// Builds the degree-`n` extension of `base`. Without a seed, the modulus is
/// the least monic irreducible of degree `n` over the base in index order.
pub fn make_extension(base: Arc<FieldDesc>, n: usize, seed_poly: Option<&Poly>) -> Result<ExtensionDesc> {
    if n == 0 {
        return Err(FieldError::InvalidModulus("degree must be positive".into()));
    }
    let q = base.order();
    let order = checked_order(q, n)?;
    let modulus: Poly = match seed_poly {
        Some(seed) => {
            let seed: Poly = seed
                .iter()
                .map(|c| {
                    let mut c: Vec<u32> = c.iter().map(|&x| x % base.p).collect();
                    c.resize(base.m, 0);
                    c
                })
                .collect();
            if seed.len() != n + 1 || seed[n] != base.one_raw() {
                return Err(FieldError::InvalidModulus(format!(
                    "expected a monic polynomial of degree {n}"
                )));
            }
            if !poly::is_irreducible(base.as_ref(), &seed) {
                return Err(FieldError::ReduciblePoly);
            }
            seed
        }
        None => {
            if n == 1 {
                vec![base.zero_raw(), base.one_raw()]
            } else {
                let count = checked_order(q, n)?;
                (0..count)
                    .map(|i| {
                        let mut c: Poly = (0..n)
                            .map(|k| base.from_index_raw((i / q.pow(k as u32)) % q))
                            .collect();
                        c.push(base.one_raw());
                        c
                    })
                    .find(|c| poly::is_irreducible(base.as_ref(), c))
                    .expect("an irreducible polynomial of every degree exists")
            }
        }
    };
    let mut ext = ExtensionDesc { base, n, modulus, order, id: FieldId::fresh(), trace: Vec::new() };
    ext.trace = trace_functional_of(&ext);
    Ok(ext)
}

impl ExtensionDesc {
    pub fn base(&self) -> &Arc<FieldDesc> {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Monic modulus over the base, constant term first.
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Embeds a base-field element as a constant.
    pub fn embed(&self, x: &FieldElement) -> Result<FieldElement> {
        self.base.check(x)?;
        Ok(self.wrap(self.embed_raw(&x.coeffs)))
    }

    pub fn embed_raw(&self, x: &[u32]) -> Vec<u32> {
        let mut v = self.zero_raw();
        v[..self.base.m].copy_from_slice(x);
        v
    }

    /// `Tr_{F_{q^n}/F_q}(x) = Σ x^{q^i}`, checked to lie in the base field.
    pub fn trace_to_base(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        let q = self.base.order();
        let mut conj = x.coeffs.clone();
        let mut acc = self.zero_raw();
        for _ in 0..self.n {
            acc = self.add_raw(&acc, &conj);
            conj = self.pow_raw(&conj, q);
        }
        let m = self.base.m;
        assert!(acc[m..].iter().all(|&c| c == 0), "trace left the base field");
        Ok(self.base.wrap(acc[..m].to_vec()))
    }

    fn coeff<'a>(&self, a: &'a [u32], i: usize) -> &'a [u32] {
        let m = self.base.m;
        &a[i * m..(i + 1) * m]
    }
}

impl FiniteField for ExtensionDesc {
    fn id(&self) -> FieldId {
        self.id
    }

    fn characteristic(&self) -> u32 {
        self.base.p
    }

    fn prime_degree(&self) -> usize {
        self.base.m * self.n
    }

    fn order(&self) -> u128 {
        self.order
    }

    fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let (n, m) = (self.n, self.base.m);
        if m == 1 {
            return mul_mod_prime(self.base.p as u64, a, b, &self.modulus);
        }
        let base = self.base.as_ref();
        let mut prod: Vec<Vec<u32>> = vec![base.zero_raw(); 2 * n - 1];
        for i in 0..n {
            let x = self.coeff(a, i);
            if base.is_zero_raw(x) {
                continue;
            }
            for j in 0..n {
                let t = base.mul_raw(x, self.coeff(b, j));
                prod[i + j] = base.add_raw(&prod[i + j], &t);
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = std::mem::replace(&mut prod[k], base.zero_raw());
            if base.is_zero_raw(&c) {
                continue;
            }
            for j in 0..n {
                let t = base.mul_raw(&c, &self.modulus[j]);
                prod[k - n + j] = base.sub_raw(&prod[k - n + j], &t);
            }
        }
        prod.truncate(n);
        prod.concat()
    }

    fn trace_functional(&self) -> &[u32] {
        &self.trace
    }
}

// Tower over a prime field: plain polynomial product mod a monic modulus.
fn mul_mod_prime(p: u64, a: &[u32], b: &[u32], modulus: &Poly) -> Vec<u32> {
    let n = a.len();
    if n == 1 {
        return vec![((a[0] as u64 * b[0] as u64) % p) as u32];
    }
    let mut prod = vec![0u64; 2 * n - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] += x as u64 * y as u64;
        }
        // keep the accumulators small enough for any p < 2^32
        if p > 1 << 16 {
            for c in prod.iter_mut() {
                *c %= p;
            }
        }
    }
    for c in prod.iter_mut() {
        *c %= p;
    }
    for k in (n..2 * n - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for j in 0..n {
            prod[k - n + j] = (prod[k - n + j] + (p - c) * modulus[j][0] as u64) % p;
        }
    }
    prod[..n].iter().map(|&c| c as u32).collect()
}

pub(crate) fn format_list<T: fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub(crate) fn parse_list(s: &str) -> Option<Vec<u32>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}
