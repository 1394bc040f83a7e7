//! Exact arithmetic in small finite fields `F_q`, `q = p^k <= 256`.
//!
//! Elements are stored as their canonical integer encoding: the residue
//! `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` modulo the field's modulus is encoded
//! as `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Prime fields use modular
//! arithmetic; extension fields use an addition table and log/antilog tables.

use std::fmt;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {0} is out of range (2..=256)")]
    OrderOutOfRange(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("value {value} is not an element of F_{q}")]
    NotAnElement { value: u32, q: u32 },
}

/// An element of `F_q` in its canonical encoding `0..q`.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Fq(pub u8);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_q` together with its arithmetic tables.
///
/// Immutable after construction; share it by reference.
#[derive(Clone)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, low-degree-first, length `k + 1`. For prime fields this is `x`.
    modulus: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    // extension fields only
    add: Vec<u8>,
    log: Vec<u16>,
    exp: Vec<u8>,
    primitive: Fq,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial helpers over `F_p`, coefficients low-degree-first.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    /// Digits of `n` in base `p`, padded to `len`.
    pub fn digits(mut n: u32, p: u32, len: usize) -> Vec<u32> {
        let mut d = Vec::with_capacity(len);
        for _ in 0..len {
            d.push(n % p);
            n /= p;
        }
        d
    }

    pub fn encode(coeffs: &[u32], p: u32) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    /// Irreducibility of a monic polynomial by trial division with every
    /// monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        for d in 1..=deg / 2 {
            for n in 0..p.pow(d as u32) {
                let mut cand = digits(n, p, d);
                cand.push(1);
                if rem(m, &cand, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl Field {
    /// Builds `F_{p^k}`. For `k > 1` the modulus is the lexicographically
    /// smallest monic irreducible of degree `k`, comparing coefficients
    /// low-degree-first.
    pub fn new(p: u32, k: u32) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(FieldError::OrderOutOfRange(q));
        }
        let q = q as u32;
        if k == 1 {
            Ok(Self::prime(p))
        } else {
            Ok(Self::extension(p, k, q))
        }
    }

    /// Builds the field of order `q`, which must be a prime power in `2..=256`.
    pub fn with_order(q: u32) -> Result<Field, FieldError> {
        if !(2..=MAX_ORDER).contains(&q) {
            return Err(FieldError::OrderOutOfRange(q as u64));
        }
        let p = (2..=q).find(|d| q % d == 0).unwrap();
        let mut k = 0;
        let mut n = q;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        if n != 1 {
            return Err(FieldError::NotPrimePower(q));
        }
        Field::new(p, k)
    }

    fn prime(p: u32) -> Field {
        let neg = (0..p).map(|a| ((p - a) % p) as u8).collect();
        let mut inv = vec![0u8; p as usize];
        for a in 1..p {
            // p is small; a^(p-2) by repeated multiplication
            let mut r = 1u32;
            for _ in 0..p - 2 {
                r = r * a % p;
            }
            inv[a as usize] = r as u8;
        }
        let primitive = (1..p)
            .find(|&g| {
                let mut x = 1u32;
                (1..p).all(|e| {
                    x = x * g % p;
                    x != 1 || e == p - 1
                })
            })
            .unwrap_or(1);
        Field {
            p,
            k: 1,
            q: p,
            modulus: vec![0, 1],
            neg,
            inv,
            add: Vec::new(),
            log: Vec::new(),
            exp: Vec::new(),
            primitive: Fq(primitive as u8),
        }
    }

    fn extension(p: u32, k: u32, q: u32) -> Field {
        let k_us = k as usize;
        // lexicographic over (c_0, ..., c_{k-1}) with c_0 most significant
        let modulus: Vec<u32> = (0..q)
            .map(|n| {
                let mut c = fp_poly::digits(n, p, k_us);
                c.reverse();
                c.push(1);
                c
            })
            .find(|m| m[0] != 0 && fp_poly::is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");

        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut neg = vec![0u8; qs];
        for a in 0..q {
            let da = fp_poly::digits(a, p, k_us);
            for b in 0..q {
                let db = fp_poly::digits(b, p, k_us);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = fp_poly::encode(&s, p) as u8;
            }
            let n: Vec<u32> = da.iter().map(|x| (p - x) % p).collect();
            neg[a as usize] = fp_poly::encode(&n, p) as u8;
        }

        // smallest generator of the multiplicative group
        let (primitive, powers) = (2..q)
            .chain(std::iter::once(1))
            .find_map(|g| {
                let gd = fp_poly::digits(g, p, k_us);
                let mut cur = vec![1u32];
                let mut powers = Vec::with_capacity(qs - 1);
                for _ in 0..q - 1 {
                    let mut c = cur.clone();
                    c.resize(k_us, 0);
                    powers.push(fp_poly::encode(&c, p));
                    cur = fp_poly::mul_mod(&cur, &gd, &modulus, p);
                    let mut c = cur.clone();
                    c.resize(k_us, 0);
                    if fp_poly::encode(&c, p) == 1 && powers.len() < qs - 1 {
                        return None;
                    }
                }
                Some((g, powers))
            })
            .expect("multiplicative group of a finite field is cyclic");

        let mut log = vec![0u16; qs];
        let mut exp = vec![0u8; 2 * (qs - 1)];
        for (e, &v) in powers.iter().enumerate() {
            log[v as usize] = e as u16;
            exp[e] = v as u8;
            exp[e + qs - 1] = v as u8;
        }
        let mut inv = vec![0u8; qs];
        for a in 1..qs {
            let l = log[a] as usize;
            inv[a] = exp[(qs - 1 - l) % (qs - 1)];
        }

        Field {
            p,
            k,
            q,
            modulus: modulus.iter().map(|&c| c as u8).collect(),
            neg,
            inv,
            add,
            log,
            exp,
            primitive: Fq(primitive as u8),
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// The defining modulus, low-degree-first. `[0, 1]` (i.e. `x`) for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// A generator of the multiplicative group.
    pub fn primitive(&self) -> Fq {
        self.primitive
    }

    #[inline]
    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    pub fn element(&self, value: u32) -> Result<Fq, FieldError> {
        if value < self.q {
            Ok(Fq(value as u8))
        } else {
            Err(FieldError::NotAnElement { value, q: self.q })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u8)
    }

    /// All `q` elements in canonical order, starting `0, 1`.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + Clone {
        (0..self.q).map(|v| Fq(v as u8))
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.k == 1 {
            let s = a.0 as u32 + b.0 as u32;
            Fq(if s >= self.p { s - self.p } else { s } as u8)
        } else {
            Fq(self.add[a.0 as usize * self.q as usize + b.0 as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if self.k == 1 {
            Fq(((a.0 as u32 * b.0 as u32) % self.p) as u8)
        } else if a.0 == 0 || b.0 == 0 {
            Fq::ZERO
        } else {
            let l = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
            Fq(self.exp[l])
        }
    }

    /// `a * b + c`
    #[inline]
    pub fn mul_add(&self, a: Fq, b: Fq, c: Fq) -> Fq {
        self.add(self.mul(a, b), c)
    }

    pub fn inv(&self, a: Fq) -> Result<Fq, FieldError> {
        if a.is_zero() {
            Err(FieldError::ZeroInverse)
        } else {
            Ok(self.inv_nonzero(a))
        }
    }

    /// Inverse of an element the caller knows to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Fq) -> Fq {
        debug_assert!(!a.is_zero());
        Fq(self.inv[a.0 as usize])
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Human-readable description, including the modulus for extension fields.
    pub fn describe(&self) -> String {
        if self.k == 1 {
            format!("F_{}", self.q)
        } else {
            let mut terms = Vec::new();
            for (i, &c) in self.modulus.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
                terms.push(match i {
                    0 => coeff,
                    1 => format!("{coeff}x"),
                    _ => format!("{coeff}x^{i}"),
                });
            }
            format!("F_{} = F_{}[x]/({})", self.q, self.p, terms.join("+"))
        }
    }
}
