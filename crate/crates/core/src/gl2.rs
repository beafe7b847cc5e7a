//! Invertible 2x2 matrices over `Z/p^n Z`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::RingMatrix;
use crate::ring::Ring;

/// An element of `GL2(Z/p^n Z)`, entries `[a, b, c, d]` for `[[a,b],[c,d]]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gl2 {
    ring: Ring,
    e: [u32; 4],
}

impl Gl2 {
    pub fn new(ring: Ring, a: i64, b: i64, c: i64, d: i64) -> Result<Gl2> {
        let g = Gl2 {
            ring,
            e: [
                ring.from_i64(a),
                ring.from_i64(b),
                ring.from_i64(c),
                ring.from_i64(d),
            ],
        };
        if !ring.is_unit(g.det()) {
            return Err(Error::NotInvertible(ring.modulus()));
        }
        Ok(g)
    }

    pub(crate) fn from_entries(ring: Ring, e: [u32; 4]) -> Gl2 {
        Gl2 { ring, e }
    }

    pub fn identity(ring: Ring) -> Gl2 {
        Gl2 {
            ring,
            e: [1, 0, 0, 1],
        }
    }

    pub fn scalar(ring: Ring, lambda: i64) -> Result<Gl2> {
        Gl2::new(ring, lambda, 0, 0, lambda)
    }

    pub fn diag(ring: Ring, a: i64, d: i64) -> Result<Gl2> {
        Gl2::new(ring, a, 0, 0, d)
    }

    /// The standard unipotent `[[1,1],[0,1]]`.
    pub fn unipotent(ring: Ring) -> Gl2 {
        Gl2 {
            ring,
            e: [1, 1, 0, 1],
        }
    }

    pub fn from_matrix(m: &RingMatrix) -> Result<Gl2> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::ShapeMismatch("expected a 2x2 matrix".into()));
        }
        let r = m.ring();
        let d = m.data();
        Gl2::new(r, d[0] as i64, d[1] as i64, d[2] as i64, d[3] as i64)
    }

    pub fn parse(text: &str) -> Result<Gl2> {
        Gl2::from_matrix(&RingMatrix::parse_literal(text)?)
    }

    pub fn to_matrix(&self) -> RingMatrix {
        RingMatrix::from_data(self.ring, 2, 2, self.e.to_vec())
    }

    #[inline]
    pub fn ring(&self) -> Ring {
        self.ring
    }

    #[inline]
    pub fn entries(&self) -> [u32; 4] {
        self.e
    }

    /// Compact key for hashing group elements (entries are below 2^14).
    #[inline]
    pub fn key(&self) -> u64 {
        let [a, b, c, d] = self.e;
        (a as u64) | (b as u64) << 16 | (c as u64) << 32 | (d as u64) << 48
    }

    #[inline]
    pub fn det(&self) -> u32 {
        let r = &self.ring;
        let [a, b, c, d] = self.e;
        r.sub(r.mul(a, d), r.mul(b, c))
    }

    pub fn trace(&self) -> u32 {
        self.ring.add(self.e[0], self.e[3])
    }

    #[inline]
    pub fn mul(&self, o: &Gl2) -> Gl2 {
        debug_assert_eq!(self.ring, o.ring);
        let m = self.ring.modulus();
        let [a, b, c, d] = self.e;
        let [x, y, z, w] = o.e;
        Gl2 {
            ring: self.ring,
            e: [
                (a * x + b * z) % m,
                (a * y + b * w) % m,
                (c * x + d * z) % m,
                (c * y + d * w) % m,
            ],
        }
    }

    pub fn inv(&self) -> Gl2 {
        let r = &self.ring;
        let di = r.inv(self.det()).expect("GL2 element has unit determinant");
        let [a, b, c, d] = self.e;
        Gl2 {
            ring: self.ring,
            e: [
                r.mul(d, di),
                r.mul(r.neg(b), di),
                r.mul(r.neg(c), di),
                r.mul(a, di),
            ],
        }
    }

    pub fn pow(&self, mut k: u64) -> Gl2 {
        let mut base = *self;
        let mut acc = Gl2::identity(self.ring);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.e == [1, 0, 0, 1]
    }

    pub fn is_scalar(&self) -> bool {
        self.e[1] == 0 && self.e[2] == 0 && self.e[0] == self.e[3]
    }

    pub fn is_diagonal(&self) -> bool {
        self.e[1] == 0 && self.e[2] == 0
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.e[2] == 0
    }

    /// `g v` for a column vector.
    #[inline]
    pub fn apply(&self, v: [u32; 2]) -> [u32; 2] {
        let m = self.ring.modulus();
        let [a, b, c, d] = self.e;
        [(a * v[0] + b * v[1]) % m, (c * v[0] + d * v[1]) % m]
    }

    /// Entrywise reduction modulo `p`.
    pub fn reduce(&self) -> Gl2 {
        let f = self.ring.residue_field();
        let p = f.p();
        Gl2 {
            ring: f,
            e: self.e.map(|x| x % p),
        }
    }

    /// Same integer entries, read modulo `p^2`, plus `p * noise`.
    pub fn lift(&self, noise: [u32; 4]) -> Gl2 {
        let sq = self.ring.square();
        let p = self.ring.p();
        let e = [0, 1, 2, 3].map(|i| (self.e[i] + p * (noise[i] % p)) % sq.modulus());
        Gl2 { ring: sq, e }
    }

    /// `I + p A` over `Z/p^2 Z` for `A` with entries mod `p`.
    pub fn kernel_element(ring: Ring, a: [u32; 4]) -> Gl2 {
        let sq = ring.square();
        let p = sq.p();
        let mut e = a.map(|x| (x % p) * p);
        e[0] += 1;
        e[3] += 1;
        Gl2 { ring: sq, e }
    }

    /// `A` such that `self = I + p A`, if `self` is congruent to the identity mod `p`.
    pub fn kernel_coordinates(&self) -> Option<[u32; 4]> {
        if self.ring.n() != 2 || !self.reduce().is_identity() {
            return None;
        }
        let p = self.ring.p();
        let mut e = self.e;
        e[0] = self.ring.sub(e[0], 1);
        e[3] = self.ring.sub(e[3], 1);
        Some(e.map(|x| x / p))
    }

    /// `g - I` as a ring matrix.
    pub fn minus_identity(&self) -> RingMatrix {
        let r = &self.ring;
        let [a, b, c, d] = self.e;
        RingMatrix::from_data(self.ring, 2, 2, vec![r.sub(a, 1), b, c, r.sub(d, 1)])
    }

    pub fn conjugate_by(&self, p: &Gl2) -> Gl2 {
        p.inv().mul(self).mul(p)
    }

    pub fn literal(&self) -> String {
        let [a, b, c, d] = self.e;
        format!("[[{a},{b}],[{c},{d}]]")
    }
}

impl fmt::Display for Gl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.literal(), self.ring.modulus())
    }
}

impl fmt::Debug for Gl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
