//! Finite fields GF(q) with canonical element indexing.
//!
//! An element with coefficient vector `(c_0, .., c_{e-1})` over GF(p) has index
//! `sum c_i p^i`. Index 0 is zero and index 1 is one. Multiplication goes
//! through discrete-log tables built once at construction.

use std::fmt;

use super::max_order;
use crate::error::{Error, Result};

/// Reduction polynomials for GF(2^m), as bit masks including the leading term.
const BINARY_MODULI: &[(u32, u64)] = &[
    (2, 0b111),              // x^2 + x + 1
    (3, 0b1011),             // x^3 + x + 1
    (5, (1 << 5) | 0b101),   // x^5 + x^2 + 1
    (7, (1 << 7) | 0b11),    // x^7 + x + 1
    (9, (1 << 9) | 0b11),    // x^9 + x + 1
    (11, (1 << 11) | 0b101), // x^11 + x^2 + 1
];

/// Splits `q` into `(p, e)` with `q = p^e`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

pub fn is_prime_power(q: u64) -> bool {
    prime_power(q).is_some()
}

/// Polynomials over GF(p) as little-endian coefficient vectors.
mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn from_index(mut x: u64, p: u32, len: usize) -> Vec<u32> {
        let mut v = vec![0; len];
        for c in v.iter_mut() {
            *c = (x % p as u64) as u32;
            x /= p as u64;
        }
        v
    }

    /// Irreducibility by trial division against every monic polynomial of
    /// degree 1..=deg/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for lo in 0..count {
                let mut g = from_index(lo, p, d);
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// Finite field GF(p^e).
#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) mod {:?}", self.q, self.modulus)
    }
}

impl FiniteField {
    /// Builds GF(q) with the fixed reduction polynomial for `(p, e)`.
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > max_order() as u64 {
            return Err(Error::SizeGuard { order: q as u128, limit: max_order() });
        }
        let modulus = Self::reduction_polynomial(p, e);
        let mut field = FiniteField { p, e, q: q as u32, modulus, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    /// The reduction polynomial used for `GF(p^e)`, little-endian and monic.
    pub fn reduction_polynomial(p: u32, e: u32) -> Vec<u32> {
        if p == 2 {
            if let Some(&(_, mask)) = BINARY_MODULI.iter().find(|(m, _)| *m == e) {
                return (0..=e).map(|i| ((mask >> i) & 1) as u32).collect();
            }
        }
        let count = (p as u64).pow(e);
        (0..count)
            .map(|lo| {
                let mut f = poly::from_index(lo, p, e as usize);
                f.push(1);
                f
            })
            .find(|f| poly::is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists")
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        if q == 2 {
            self.exp = vec![1];
            self.log = vec![0, 0];
            return;
        }
        for g in 2..q as u32 {
            let mut exp = Vec::with_capacity(q - 1);
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = self.mul_slow(x, g);
                if x == 1 || exp.len() >= q {
                    break;
                }
            }
            if exp.len() == q - 1 {
                let mut log = vec![0u32; q];
                for (i, &v) in exp.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }

    /// Polynomial multiplication modulo the reduction polynomial, without tables.
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        if self.p == 2 {
            let mask: u64 = self.modulus.iter().enumerate().map(|(i, &c)| (c as u64) << i).sum();
            let (mut a, mut b, mut r) = (a as u64, b as u64, 0u64);
            while b != 0 {
                if b & 1 == 1 {
                    r ^= a;
                }
                b >>= 1;
                a <<= 1;
                if a & (1 << self.e) != 0 {
                    a ^= mask;
                }
            }
            return r as u32;
        }
        let e = self.e as usize;
        let pa = poly::from_index(a as u64, self.p, e);
        let pb = poly::from_index(b as u64, self.p, e);
        let mut prod = vec![0u32; 2 * e - 1];
        for (i, &x) in pa.iter().enumerate() {
            for (j, &y) in pb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let r = poly::rem(&prod, &self.modulus, self.p);
        r.iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64) as u32
    }

    pub fn order(&self) -> usize {
        self.q as usize
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Reduction polynomial coefficients `c_0..c_e` (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut r, mut place) = (a, b, 0, 1);
        for _ in 0..self.e {
            r += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        r
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut r, mut place) = (a, 0, 1);
        for _ in 0..self.e {
            r += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        r
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a as usize];
        Some(self.exp[((n - l) % n) as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize]
    }

    /// Discrete logarithm to the base of [`Self::primitive_element`].
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}
