//! The local rings `Z/p^n Z` for `n` in {1, 2}.
//!
//! Everything is stored as `u32` in `[0, p^n)`. With `p <= 97` the modulus is
//! at most 9409, so a product of two residues fits in a `u32` and sums of a
//! few thousand products fit in a `u64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PRIME: u32 = 97;

/// The ring `Z/p^n Z`. Cheap to copy; every matrix and module carries one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ring {
    p: u32,
    n: u32,
    modulus: u32,
}

pub fn is_prime(x: u32) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn new(p: u32, n: u32) -> Result<Ring> {
        if !(p > 3 && p <= MAX_PRIME && is_prime(p) && (n == 1 || n == 2)) {
            return Err(Error::UnsupportedModulus { p, n });
        }
        Ok(Ring {
            p,
            n,
            modulus: p.pow(n),
        })
    }

    /// Parses a modulus such as `25` or `5` into the matching ring.
    pub fn from_modulus(m: u32) -> Result<Ring> {
        for p in 5..=MAX_PRIME {
            if !is_prime(p) {
                continue;
            }
            if m == p {
                return Ring::new(p, 1);
            }
            if m == p * p {
                return Ring::new(p, 2);
            }
        }
        Err(Error::UnsupportedModulus { p: m, n: 0 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The residue field `Z/pZ`.
    pub fn residue_field(&self) -> Ring {
        Ring {
            p: self.p,
            n: 1,
            modulus: self.p,
        }
    }

    /// `Z/p^2 Z` over the same prime.
    pub fn square(&self) -> Ring {
        Ring {
            p: self.p,
            n: 2,
            modulus: self.p * self.p,
        }
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        (x % self.modulus as u64) as u32
    }

    #[inline]
    pub fn from_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.modulus as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        a * b % self.modulus
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.modulus;
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn is_unit(&self, a: u32) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// p-adic valuation, with `valuation(0) == n`.
    #[inline]
    pub fn valuation(&self, a: u32) -> u32 {
        if a == 0 {
            return self.n;
        }
        let mut v = 0;
        let mut x = a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// `p^k` as an element of the ring (0 once `k >= n`).
    #[inline]
    pub fn p_pow(&self, k: u32) -> u32 {
        if k >= self.n {
            0
        } else {
            self.p.pow(k)
        }
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.from_i64(t0))
    }

    /// Multiplicative order of a unit.
    pub fn unit_order(&self, a: u32) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let mut x = a % self.modulus;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    pub fn residue(&self, value: u32) -> Residue {
        Residue {
            value: value % self.modulus,
            ring: *self,
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "Z/{}Z", self.p)
        } else {
            write!(f, "Z/{}^{}Z", self.p, self.n)
        }
    }
}

/// A single element of `Z/p^n Z` that knows its ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u32,
    ring: Ring,
}

impl Residue {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn inv(&self) -> Option<Residue> {
        self.ring.inv(self.value).map(|v| self.ring.residue(v))
    }

    pub fn pow(&self, e: u64) -> Residue {
        self.ring.residue(self.ring.pow(self.value, e))
    }

    pub fn valuation(&self) -> u32 {
        self.ring.valuation(self.value)
    }

    fn check(&self, other: &Residue) {
        assert_eq!(
            self.ring, other.ring,
            "residues from different rings combined"
        );
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        self.ring.residue(self.ring.add(self.value, rhs.value))
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        self.ring.residue(self.ring.sub(self.value, rhs.value))
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        self.ring.residue(self.ring.mul(self.value, rhs.value))
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        self.ring.residue(self.ring.neg(self.value))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
