//! Canonical linear algebra over `Z/p^n Z`.
//!
//! `Z/p^n Z` is a chain ring: every element is a unit times a power of `p`.
//! That makes the Howell form easy to compute directly. Pick the pivot of
//! least valuation in each column, normalize it to `p^v`, clear the column,
//! and push the saturation row `p^(n-v) * row` back into the pool so the
//! result has the Howell property. A final pass reduces the entries above
//! each pivot into `[0, p^v)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::RingMatrix;
use crate::ring::Ring;

fn is_zero(row: &[u32]) -> bool {
    row.iter().all(|&x| x == 0)
}

fn leading(row: &[u32]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

/// `dst -= q * src`
fn sub_multiple(ring: &Ring, dst: &mut [u32], src: &[u32], q: u32) {
    if q == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = ring.sub(*d, ring.mul(q, s));
        }
    }
}

fn scale(ring: &Ring, row: &mut [u32], c: u32) {
    for x in row.iter_mut() {
        *x = ring.mul(*x, c);
    }
}

/// Howell form of the row span of `rows` (each of length `cols`).
pub(crate) fn howell_rows(ring: Ring, cols: usize, rows: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let n = ring.n();
    let mut pool: Vec<Vec<u32>> = rows.into_iter().filter(|r| !is_zero(r)).collect();
    let mut out: Vec<(usize, Vec<u32>)> = Vec::new();
    for c in 0..cols {
        if pool.is_empty() {
            break;
        }
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in pool.iter().enumerate() {
            if r[c] != 0 {
                let v = ring.valuation(r[c]);
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((i, v));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((bi, v)) = best else { continue };
        let mut piv = pool.swap_remove(bi);
        let pv = ring.p_pow(v);
        let unit = ring.inv(piv[c] / pv).expect("unit part");
        scale(&ring, &mut piv, unit);
        debug_assert_eq!(piv[c], pv);
        for r in pool.iter_mut() {
            if r[c] != 0 {
                let q = r[c] / pv;
                sub_multiple(&ring, r, &piv, q);
            }
        }
        if v > 0 {
            let mut sat = piv.clone();
            scale(&ring, &mut sat, ring.p_pow(n - v));
            pool.push(sat);
        }
        pool.retain(|r| !is_zero(r));
        out.push((c, piv));
    }
    for i in 0..out.len() {
        let (c, ref piv) = out[i];
        let pv = piv[c];
        let piv = piv.clone();
        for (_, row) in out[..i].iter_mut() {
            let q = row[c] / pv;
            sub_multiple(&ring, row, &piv, q);
        }
    }
    out.into_iter().map(|(_, r)| r).collect()
}

/// Howell form of `m`: the canonical generating set of its row span.
/// Zero rows are dropped, so the zero matrix maps to an empty matrix.
pub fn howell_form(m: &RingMatrix) -> RingMatrix {
    let rows = howell_rows(m.ring(), m.cols(), m.row_vecs());
    RingMatrix::from_row_vecs(m.ring(), m.cols(), &rows)
}

/// `{x : m x = 0}`.
pub fn kernel(m: &RingMatrix) -> Submodule {
    let ring = m.ring();
    let (r, c) = (m.rows(), m.cols());
    let width = r + c;
    let aug: Vec<Vec<u32>> = (0..c)
        .map(|j| {
            let mut row = vec![0; width];
            for (i, x) in row[..r].iter_mut().enumerate() {
                *x = m.get(i, j);
            }
            row[r + j] = 1;
            row
        })
        .collect();
    let h = howell_rows(ring, width, aug);
    let basis = h
        .into_iter()
        .filter(|row| is_zero(&row[..r]))
        .map(|row| row[r..].to_vec())
        .collect();
    // Rows with a zero left block are already in Howell form on the right block.
    Submodule::from_howell(ring, c, basis)
}

/// Column span of `m` as a submodule of the codomain.
pub fn image(m: &RingMatrix) -> Submodule {
    Submodule::new(m.ring(), m.rows(), m.transpose().row_vecs())
}

/// A submodule of `(Z/p^n Z)^k`, held by its Howell basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Submodule {
    #[serde(skip)]
    ring: Ring,
    ambient: usize,
    basis: Vec<Vec<u32>>,
}

/// Invariant factor decomposition of a quotient `num / den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPresentation {
    /// Orders `p^e` of the cyclic factors, ascending. Empty for the trivial quotient.
    pub invariants: Vec<u64>,
    /// One element of `num` per factor, generating it modulo `den`.
    pub generators: Vec<Vec<u32>>,
}

impl Submodule {
    pub fn new(ring: Ring, ambient: usize, generators: Vec<Vec<u32>>) -> Submodule {
        for g in &generators {
            assert_eq!(g.len(), ambient, "generator length");
        }
        let basis = howell_rows(ring, ambient, generators);
        Submodule {
            ring,
            ambient,
            basis,
        }
    }

    fn from_howell(ring: Ring, ambient: usize, basis: Vec<Vec<u32>>) -> Submodule {
        debug_assert_eq!(howell_rows(ring, ambient, basis.clone()), basis);
        Submodule {
            ring,
            ambient,
            basis,
        }
    }

    pub fn zero(ring: Ring, ambient: usize) -> Submodule {
        Submodule {
            ring,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ring: Ring, ambient: usize) -> Submodule {
        let basis = (0..ambient)
            .map(|i| {
                let mut e = vec![0; ambient];
                e[i] = 1;
                e
            })
            .collect();
        Submodule {
            ring,
            ambient,
            basis,
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> RingMatrix {
        RingMatrix::from_row_vecs(self.ring, self.ambient, &self.basis)
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// `log_p` of the number of elements.
    pub fn log_order(&self) -> u32 {
        let n = self.ring.n();
        self.basis
            .iter()
            .map(|r| {
                let c = leading(r).expect("nonzero basis row");
                n - self.ring.valuation(r[c])
            })
            .sum()
    }

    pub fn order(&self) -> u64 {
        (self.ring.p() as u64)
            .checked_pow(self.log_order())
            .expect("submodule order exceeds u64")
    }

    fn reduce(&self, x: &mut [u32]) -> bool {
        for row in &self.basis {
            let c = leading(row).unwrap();
            if x[c] == 0 {
                continue;
            }
            if !x[c].is_multiple_of(row[c]) {
                return false;
            }
            sub_multiple(&self.ring, x, row, x[c] / row[c]);
        }
        is_zero(x)
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        assert_eq!(x.len(), self.ambient);
        let mut x: Vec<u32> = x.iter().map(|&v| v % self.ring.modulus()).collect();
        self.reduce(&mut x)
    }

    fn compatible(&self, other: &Submodule) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ModulusMismatch {
                left: self.ring.modulus(),
                right: other.ring.modulus(),
            });
        }
        if self.ambient != other.ambient {
            return Err(Error::ShapeMismatch(format!(
                "ambient ranks {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn is_subset_of(&self, other: &Submodule) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.basis.iter().all(|b| other.contains(b)))
    }

    pub fn equal(&self, other: &Submodule) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.basis == other.basis)
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.compatible(other)?;
        let gens = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Submodule::new(self.ring, self.ambient, gens))
    }

    /// Zassenhaus: the rows `[s | s]` and `[t | 0]` span `{(s + t, s)}`, and the
    /// part with zero left block is exactly `{(0, s) : s in S ∩ T}`.
    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.compatible(other)?;
        let k = self.ambient;
        let mut rows = Vec::with_capacity(self.basis.len() + other.basis.len());
        for s in &self.basis {
            let mut r = s.clone();
            r.extend_from_slice(s);
            rows.push(r);
        }
        for t in &other.basis {
            let mut r = t.clone();
            r.extend(std::iter::repeat_n(0, k));
            rows.push(r);
        }
        let h = howell_rows(self.ring, 2 * k, rows);
        let basis = h
            .into_iter()
            .filter(|r| is_zero(&r[..k]))
            .map(|r| r[k..].to_vec())
            .collect();
        Ok(Submodule::from_howell(self.ring, k, basis))
    }

    /// `{y : y . s = 0 for all s}`. Over the Frobenius ring `Z/p^n Z` this is
    /// an involution, so `x ∈ S` iff `a . x = 0` for every annihilator row `a`.
    pub fn annihilator(&self) -> Submodule {
        if self.basis.is_empty() {
            return Submodule::full(self.ring, self.ambient);
        }
        kernel(&self.basis_matrix())
    }

    /// Image of the submodule under a linear map given as a matrix acting on columns.
    pub fn map(&self, m: &RingMatrix) -> Submodule {
        assert_eq!(m.cols(), self.ambient);
        let gens = self.basis.iter().map(|b| m.apply(b)).collect();
        Submodule::new(self.ring, m.rows(), gens)
    }

    /// `{x in self : m x in target}`.
    pub fn preimage_within(&self, m: &RingMatrix, target: &Submodule) -> Submodule {
        assert_eq!(m.cols(), self.ambient);
        assert_eq!(m.rows(), target.ambient);
        if self.basis.is_empty() {
            return self.clone();
        }
        // Unknowns (a, c): sum a_i m(b_i) - sum c_j t_j = 0, then x = sum a_i b_i.
        let s = self.basis.len();
        let t = target.basis.len();
        let images: Vec<Vec<u32>> = self.basis.iter().map(|b| m.apply(b)).collect();
        let mut system = RingMatrix::zeros(self.ring, m.rows(), s + t);
        for (i, img) in images.iter().enumerate() {
            for (r, &v) in img.iter().enumerate() {
                system.set(r, i, v);
            }
        }
        for (j, tj) in target.basis.iter().enumerate() {
            for (r, &v) in tj.iter().enumerate() {
                system.set(r, s + j, self.ring.neg(v));
            }
        }
        let ker = kernel(&system);
        let gens = ker
            .basis
            .iter()
            .map(|sol| combine(&self.ring, &sol[..s], &self.basis, self.ambient))
            .collect();
        Submodule::new(self.ring, self.ambient, gens)
    }
}

fn combine(ring: &Ring, coeffs: &[u32], rows: &[Vec<u32>], width: usize) -> Vec<u32> {
    let mut acc = vec![0u64; width];
    for (&c, row) in coeffs.iter().zip(rows) {
        if c == 0 {
            continue;
        }
        for (a, &x) in acc.iter_mut().zip(row) {
            *a += (c * x) as u64;
        }
    }
    acc.into_iter().map(|a| ring.reduce(a)).collect()
}

/// Invariant factors of `num / den`, together with generators lifted to `num`.
pub fn quotient_presentation(num: &Submodule, den: &Submodule) -> Result<QuotientPresentation> {
    if !den.is_subset_of(num)? {
        return Err(Error::NotASubmodule);
    }
    let ring = num.ring;
    let n = ring.n();
    let s = num.basis.len();
    if s == 0 {
        return Ok(QuotientPresentation {
            invariants: Vec::new(),
            generators: Vec::new(),
        });
    }
    // Relations among the generators of num modulo den.
    let t = den.basis.len();
    let mut system = RingMatrix::zeros(ring, num.ambient, s + t);
    for (i, b) in num.basis.iter().enumerate() {
        for (r, &v) in b.iter().enumerate() {
            system.set(r, i, v);
        }
    }
    for (j, e) in den.basis.iter().enumerate() {
        for (r, &v) in e.iter().enumerate() {
            system.set(r, s + j, ring.neg(v));
        }
    }
    let rel: Vec<Vec<u32>> = kernel(&system)
        .basis
        .into_iter()
        .map(|r| r[..s].to_vec())
        .filter(|r| !is_zero(r))
        .collect();

    let diag = smith_with_column_inverse(ring, s, rel);
    let mut factors: Vec<(u64, Vec<u32>)> = Vec::new();
    for (j, row) in diag.qinv.iter().enumerate() {
        let v = diag.valuations.get(j).copied().unwrap_or(n);
        if v == 0 {
            continue;
        }
        let order = (ring.p() as u64).pow(v);
        factors.push((order, combine(&ring, row, &num.basis, num.ambient)));
    }
    factors.sort_by_key(|(o, _)| *o);
    let (invariants, generators) = factors.into_iter().unzip();
    Ok(QuotientPresentation {
        invariants,
        generators,
    })
}

/// Invariant-factor orders of `num / den`, ascending.
pub fn quotient_invariants(num: &Submodule, den: &Submodule) -> Result<Vec<u64>> {
    Ok(quotient_presentation(num, den)?.invariants)
}

struct SmithData {
    /// Valuation of each diagonal pivot, in pivot order.
    valuations: Vec<u32>,
    /// Inverse of the accumulated column transform; row `j` is the coefficient
    /// vector of the `j`-th quotient generator.
    qinv: Vec<Vec<u32>>,
}

fn smith_with_column_inverse(ring: Ring, cols: usize, mut a: Vec<Vec<u32>>) -> SmithData {
    let mut qinv: Vec<Vec<u32>> = (0..cols)
        .map(|i| {
            let mut e = vec![0; cols];
            e[i] = 1;
            e
        })
        .collect();
    let mut valuations = Vec::new();
    let rows = a.len();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = ring.valuation(x);
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        a.swap(t, bi);
        if bj != t {
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            qinv.swap(t, bj);
        }
        let pv = ring.p_pow(v);
        let unit = ring.inv(a[t][t] / pv).unwrap();
        scale(&ring, &mut a[t], unit);
        let pivot_row = a[t].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != t && row[t] != 0 {
                let q = row[t] / pv;
                sub_multiple(&ring, row, &pivot_row, q);
            }
        }
        for j in (t + 1)..cols {
            let x = a[t][j];
            if x == 0 {
                continue;
            }
            let q = x / pv;
            // col_j -= q col_t  <=>  qinv row_t += q qinv row_j
            for row in a.iter_mut() {
                row[j] = ring.sub(row[j], ring.mul(q, row[t]));
            }
            let src = qinv[j].clone();
            for (d, s) in qinv[t].iter_mut().zip(src) {
                *d = ring.add(*d, ring.mul(q, s));
            }
        }
        valuations.push(v);
        t += 1;
    }
    SmithData { valuations, qinv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ring(p: u32, n: u32) -> Ring {
        Ring::new(p, n).unwrap()
    }

    fn mat(r: Ring, rows: &[[i64; 2]]) -> RingMatrix {
        RingMatrix::from_rows(r, rows).unwrap()
    }

    /// Every element of the row span, by brute force.
    fn span(r: Ring, rows: &[Vec<u32>], width: usize) -> HashSet<Vec<u32>> {
        let mut set: HashSet<Vec<u32>> = HashSet::new();
        set.insert(vec![0; width]);
        for row in rows {
            let current: Vec<Vec<u32>> = set.iter().cloned().collect();
            for v in current {
                for c in 0..r.modulus() {
                    let w: Vec<u32> = v
                        .iter()
                        .zip(row)
                        .map(|(&a, &b)| r.add(a, r.mul(c, b)))
                        .collect();
                    set.insert(w);
                }
            }
        }
        set
    }

    #[test]
    fn howell_examples() {
        let r25 = ring(5, 2);
        let id = mat(r25, &[[1, 0], [0, 1]]);
        assert_eq!(howell_form(&id), id);

        let m = mat(r25, &[[5, 0], [10, 0]]);
        let h = howell_form(&m);
        assert_eq!(h.row_vecs(), vec![vec![5, 0]]);
        assert_eq!(span(r25, &h.row_vecs(), 2), span(r25, &m.row_vecs(), 2));

        let r5 = ring(5, 1);
        let m = mat(r5, &[[2, 4], [0, 0]]);
        let h = howell_form(&m);
        assert_eq!(h.row_vecs(), vec![vec![1, 2]]);
        assert_eq!(span(r5, &h.row_vecs(), 2), span(r5, &m.row_vecs(), 2));

        assert_eq!(howell_form(&RingMatrix::zeros(r25, 3, 2)).rows(), 0);
    }

    #[test]
    fn howell_saturates() {
        // span{(5,1)} has order 25 and needs the saturation row (0,5).
        let r25 = ring(5, 2);
        let s = Submodule::new(r25, 2, vec![vec![5, 1]]);
        assert_eq!(s.basis(), &[vec![5, 1], vec![0, 5]]);
        assert_eq!(s.order(), 25);
        assert_eq!(span(r25, s.basis(), 2).len(), 25);
    }

    #[test]
    fn kernel_examples() {
        let r25 = ring(5, 2);
        assert_eq!(kernel(&RingMatrix::zeros(r25, 2, 2)).order(), 625);
        assert!(kernel(&RingMatrix::identity(r25, 2)).is_zero());
        let m = mat(r25, &[[5, 0], [0, 5]]);
        let k = kernel(&m);
        let brute: Vec<Vec<u32>> = (0..25)
            .flat_map(|a| (0..25).map(move |b| vec![a, b]))
            .filter(|v| m.apply(v) == vec![0, 0])
            .collect();
        assert_eq!(brute.len(), 25);
        assert_eq!(k.order(), 25);
        assert!(brute.iter().all(|v| k.contains(v)));
    }

    #[test]
    fn image_examples() {
        let r5 = ring(5, 1);
        assert_eq!(image(&RingMatrix::identity(r5, 2)).order(), 25);
        let m = mat(r5, &[[0, 1], [0, 0]]);
        let img = image(&m);
        let brute: HashSet<Vec<u32>> = (0..5)
            .flat_map(|a| (0..5).map(move |b| vec![a, b]))
            .map(|v| m.apply(&v))
            .collect();
        assert_eq!(brute.len(), 5);
        assert_eq!(img.order(), 5);
        assert_eq!(img.basis(), &[vec![1, 0]]);
        // sigma - 1 for sigma = [[1,1],[0,1]] is the same matrix.
        let sigma = mat(r5, &[[1, 1], [0, 1]]);
        let d = sigma.sub(&RingMatrix::identity(r5, 2)).unwrap();
        assert_eq!(image(&d), img);
    }

    #[test]
    fn quotient_examples() {
        let r5 = ring(5, 1);
        let full = Submodule::full(r5, 2);
        assert!(quotient_invariants(&full, &full).unwrap().is_empty());
        let line = Submodule::new(r5, 2, vec![vec![1, 0]]);
        assert_eq!(quotient_invariants(&full, &line).unwrap(), vec![5]);
        assert_eq!(quotient_invariants(&line, &full), Err(Error::NotASubmodule));
        let r25 = ring(5, 2);
        assert_eq!(
            quotient_invariants(&Submodule::full(r25, 2), &Submodule::zero(r25, 2)).unwrap(),
            vec![25, 25]
        );
    }

    #[test]
    fn quotient_mixed() {
        let r25 = ring(5, 2);
        let num = Submodule::full(r25, 2);
        let den = Submodule::new(r25, 2, vec![vec![5, 0]]);
        let q = quotient_presentation(&num, &den).unwrap();
        assert_eq!(q.invariants, vec![5, 25]);
        // The order-5 generator has 5*g in den but g not in den.
        let g = &q.generators[0];
        assert!(!den.contains(g));
        let g5: Vec<u32> = g.iter().map(|&x| r25.mul(5, x)).collect();
        assert!(den.contains(&g5));
    }

    #[test]
    fn lattice_ops() {
        let r5 = ring(5, 1);
        let full = Submodule::full(r5, 2);
        let s = Submodule::new(r5, 2, vec![vec![1, 3]]);
        assert_eq!(full.intersect(&s).unwrap(), s);
        let x = Submodule::new(r5, 2, vec![vec![1, 0]]);
        let y = Submodule::new(r5, 2, vec![vec![0, 1]]);
        assert!(x.intersect(&y).unwrap().is_zero());

        let r25 = ring(5, 2);
        let a = Submodule::new(r25, 2, vec![vec![5, 0]]);
        let b = Submodule::new(r25, 2, vec![vec![0, 5]]);
        let pm = a.sum(&b).unwrap();
        assert_eq!(pm.order(), 25);
        let brute: HashSet<Vec<u32>> = (0..25)
            .flat_map(|i| (0..25).map(move |j| vec![i, j]))
            .filter(|v| v[0] % 5 == 0 && v[1] % 5 == 0)
            .collect();
        assert_eq!(span(r25, pm.basis(), 2), brute);

        assert!(matches!(s.sum(&a), Err(Error::ModulusMismatch { .. })));
    }

    #[test]
    fn annihilator_involution() {
        let r25 = ring(5, 2);
        for gens in [
            vec![vec![5, 1]],
            vec![vec![5, 0]],
            vec![vec![1, 7]],
            vec![vec![5, 10], vec![0, 5]],
            vec![],
        ] {
            let s = Submodule::new(r25, 2, gens);
            assert_eq!(s.annihilator().annihilator(), s);
        }
    }

    #[test]
    fn preimage() {
        let r25 = ring(5, 2);
        let m = mat(r25, &[[1, 1], [0, 1]])
            .sub(&RingMatrix::identity(r25, 2))
            .unwrap();
        let target = Submodule::new(r25, 2, vec![vec![5, 0]]);
        let pre = Submodule::full(r25, 2).preimage_within(&m, &target);
        let brute: Vec<Vec<u32>> = (0..25)
            .flat_map(|i| (0..25).map(move |j| vec![i, j]))
            .filter(|v| target.contains(&m.apply(v)))
            .collect();
        assert_eq!(pre.order() as usize, brute.len());
        assert!(brute.iter().all(|v| pre.contains(v)));
    }
}
