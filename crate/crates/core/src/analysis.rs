//! Structural analysis of matrix groups: orders, cyclic subgroups, reduction
//! mod p, Sylow subgroups, invariant lines and the shape classification of
//! the mod-p image.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gl2::Gl2;
use crate::group::{gl2_order, MatrixGroup, DEFAULT_CAP};
use crate::linalg::Submodule;
use crate::ring::Ring;

pub fn element_order(g: &Gl2) -> u64 {
    let bound = gl2_order(g.ring());
    let mut x = *g;
    let mut k = 1;
    while !x.is_identity() {
        x = x.mul(g);
        k += 1;
        assert!(k <= bound, "element order exceeds |GL2|");
    }
    k
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Distinct cyclic subgroups as lists of element indices `[1, g, g^2, ...]`,
/// in order of the first generator met in the group's element order.
pub fn cyclic_subgroup_indices(g: &MatrixGroup) -> Vec<Vec<usize>> {
    let mut covered = vec![false; g.order()];
    let mut out = Vec::new();
    for i in 0..g.order() {
        if covered[i] {
            continue;
        }
        let x = g.element(i);
        let mut powers = vec![0usize];
        let mut y = x;
        while !y.is_identity() {
            powers.push(g.index_of(&y).expect("closed group"));
            y = y.mul(&x);
        }
        let ord = powers.len() as u64;
        for (k, &idx) in powers.iter().enumerate() {
            if gcd(k as u64, ord) == 1 || ord == 1 {
                covered[idx] = true;
            }
        }
        out.push(powers);
    }
    out
}

/// All distinct cyclic subgroups `<g>`, each closed from its generator.
pub fn cyclic_subgroups(g: &MatrixGroup) -> Vec<MatrixGroup> {
    cyclic_subgroup_indices(g)
        .into_iter()
        .map(|pw| {
            let gen = g.element(*pw.get(1).unwrap_or(&0));
            let gens: Vec<Gl2> = if gen.is_identity() { vec![] } else { vec![gen] };
            MatrixGroup::close(g.ring(), &gens, DEFAULT_CAP).expect("cyclic subgroup")
        })
        .collect()
}

/// Image `G1` of reduction mod `p` and its kernel `H` inside `G2`.
pub fn reduction_split(g2: &MatrixGroup) -> Result<(MatrixGroup, MatrixGroup)> {
    let ring = g2.ring();
    if ring.n() != 2 {
        return Err(Error::UnsupportedModulus {
            p: ring.p(),
            n: ring.n(),
        });
    }
    let reduced: Vec<Gl2> = g2.generators().iter().map(Gl2::reduce).collect();
    let g1 = MatrixGroup::close(ring.residue_field(), &reduced, DEFAULT_CAP)?;
    let kernel = g2.elements().iter().filter(|g| g.reduce().is_identity());
    let h = MatrixGroup::from_elements(ring, kernel, DEFAULT_CAP)?;
    Ok((g1, h))
}

/// `F_p`-dimension of a subgroup of the kernel of reduction `{I + pA}`.
pub fn h_dimension(h: &MatrixGroup) -> Result<u32> {
    let ring = h.ring();
    let mut coords = Vec::with_capacity(h.order());
    for g in h.elements() {
        let a = g.kernel_coordinates().ok_or(Error::NotReductionKernel)?;
        coords.push(a.to_vec());
    }
    let span = Submodule::new(ring.residue_field(), 4, coords);
    let dim = span.log_order();
    debug_assert_eq!((ring.p() as usize).pow(dim), h.order());
    Ok(dim)
}

/// A Sylow `p`-subgroup, and whether it is the unique (normal) one.
#[derive(Debug, Clone)]
pub struct SylowResult {
    pub subgroup: MatrixGroup,
    pub normal: bool,
}

fn p_part(order: usize, p: usize) -> usize {
    let mut q = 1;
    let mut m = order;
    while m.is_multiple_of(p) {
        m /= p;
        q *= p;
    }
    q
}

fn is_p_power(x: usize, p: usize) -> bool {
    p_part(x, p) == x
}

pub fn p_sylow(g: &MatrixGroup) -> Result<SylowResult> {
    let p = g.ring().p() as usize;
    let target = p_part(g.order(), p);
    let p_elements: Vec<Gl2> = g
        .elements()
        .iter()
        .filter(|x| is_p_power(element_order(x) as usize, p))
        .copied()
        .collect();
    if p_elements.len() == target {
        let subgroup = MatrixGroup::from_elements(g.ring(), &p_elements, DEFAULT_CAP)?;
        debug_assert_eq!(subgroup.order(), target);
        return Ok(SylowResult {
            subgroup,
            normal: true,
        });
    }
    // Not unique: grow a p-subgroup one element at a time. A proper subgroup of
    // a Sylow subgroup always has a p-element in its normalizer outside it.
    let mut current = MatrixGroup::trivial(g.ring());
    while current.order() < target {
        let mut grown = false;
        for x in &p_elements {
            if current.contains(x) {
                continue;
            }
            let mut gens = current.generators().to_vec();
            gens.push(*x);
            let cand = MatrixGroup::close(g.ring(), &gens, DEFAULT_CAP)?;
            if is_p_power(cand.order(), p) {
                current = cand;
                grown = true;
                break;
            }
        }
        assert!(grown, "p-subgroup could not be extended");
    }
    Ok(SylowResult {
        subgroup: current,
        normal: false,
    })
}

/// `G1 ∩ D` for the diagonal matrices `D`.
pub fn diagonal_part(g1: &MatrixGroup) -> MatrixGroup {
    let diag = g1.elements().iter().filter(|x| x.is_diagonal());
    MatrixGroup::from_elements(g1.ring(), diag, DEFAULT_CAP).expect("subgroup of a closed group")
}

/// Normalized generators of the `p + 1` lines of `F_p^2`, in lexicographic
/// order: `(0,1), (1,0), (1,1), ..., (1,p-1)`.
pub fn line_generators(ring: Ring) -> Vec<[u32; 2]> {
    let mut v = vec![[0, 1]];
    v.extend((0..ring.p()).map(|t| [1, t]));
    v
}

fn preserves_line(g: &Gl2, v: [u32; 2]) -> bool {
    let w = g.apply(v);
    let r = g.ring();
    r.sub(r.mul(v[0], w[1]), r.mul(v[1], w[0])) == 0
}

/// Lines of `F_p^2` stable under `g1`, as order-`p` submodules.
pub fn invariant_lines(g1: &MatrixGroup) -> Vec<Submodule> {
    invariant_line_vectors(g1)
        .into_iter()
        .map(|v| Submodule::new(g1.ring(), 2, vec![v.to_vec()]))
        .collect()
}

pub fn invariant_line_vectors(g1: &MatrixGroup) -> Vec<[u32; 2]> {
    assert_eq!(g1.ring().n(), 1, "invariant lines are taken mod p");
    line_generators(g1.ring())
        .into_iter()
        .filter(|&v| g1.generators().iter().all(|g| preserves_line(g, v)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassTag {
    #[serde(rename = "TwoLines-DiagonalCyclic")]
    TwoLinesDiagonalCyclic,
    #[serde(rename = "OneLine-Borel")]
    OneLineBorel,
    #[serde(rename = "NoLine")]
    NoLine,
    #[serde(rename = "ManyLines-Scalarish")]
    ManyLinesScalarish,
}

impl ClassTag {
    pub fn expected_lines(&self, p: u32) -> usize {
        match self {
            ClassTag::TwoLinesDiagonalCyclic => 2,
            ClassTag::OneLineBorel => 1,
            ClassTag::NoLine => 0,
            ClassTag::ManyLinesScalarish => p as usize + 1,
        }
    }
}

/// Shape of a subgroup of `GL2(F_p)` relative to its invariant lines.
#[derive(Debug, Clone)]
pub struct Classification {
    pub tag: ClassTag,
    /// Columns are the new basis; `basis^-1 g basis` is the element in that basis.
    pub basis_change: Gl2,
    /// Two-line case: whether the (diagonalized) group is cyclic.
    pub cyclic: bool,
    /// Diagonal generator in the new basis (cyclic two-line case, or the
    /// Borel complement generator in the one-line case).
    pub rho: Option<Gl2>,
    /// `[[1,1],[0,1]]` in the new basis, one-line case.
    pub sigma: Option<Gl2>,
}

impl Classification {
    pub fn conjugated(&self, g1: &MatrixGroup) -> MatrixGroup {
        g1.conjugate_by(&self.basis_change, DEFAULT_CAP)
            .expect("conjugate of a closed group")
    }
}

fn basis_from_columns(ring: Ring, c1: [u32; 2], c2: [u32; 2]) -> Gl2 {
    Gl2::from_entries(ring, [c1[0], c2[0], c1[1], c2[1]])
}

fn has_element_of_order(g: &MatrixGroup, order: u64) -> Option<Gl2> {
    g.elements()
        .iter()
        .find(|x| element_order(x) == order)
        .copied()
}

pub fn classify_g1(g1: &MatrixGroup) -> Classification {
    let ring = g1.ring();
    assert_eq!(ring.n(), 1, "classification is over F_p");
    let p = ring.p();
    let lines = invariant_line_vectors(g1);
    let id = Gl2::identity(ring);
    match lines.len() {
        2 => {
            let basis = basis_from_columns(ring, lines[0], lines[1]);
            let conj = g1.conjugate_by(&basis, DEFAULT_CAP).expect("conjugate");
            debug_assert!(conj.elements().iter().all(Gl2::is_diagonal));
            let rho = has_element_of_order(&conj, conj.order() as u64);
            Classification {
                tag: ClassTag::TwoLinesDiagonalCyclic,
                basis_change: basis,
                cyclic: rho.is_some(),
                rho,
                sigma: None,
            }
        }
        1 => classify_borel(g1, lines[0]),
        0 => Classification {
            tag: ClassTag::NoLine,
            basis_change: id,
            cyclic: false,
            rho: None,
            sigma: None,
        },
        k => {
            debug_assert_eq!(k, p as usize + 1);
            Classification {
                tag: ClassTag::ManyLinesScalarish,
                basis_change: id,
                cyclic: false,
                rho: None,
                sigma: None,
            }
        }
    }
}

fn classify_borel(g1: &MatrixGroup, line: [u32; 2]) -> Classification {
    let ring = g1.ring();
    let p = ring.p() as u64;
    let second = if line == [0, 1] { [1, 0] } else { [0, 1] };
    let mut basis = basis_from_columns(ring, line, second);
    let tri = g1.conjugate_by(&basis, DEFAULT_CAP).expect("conjugate");
    debug_assert!(tri.elements().iter().all(Gl2::is_upper_triangular));

    let complement_order = tri.order() as u64 / p;
    let rho_prime = if !complement_order.is_multiple_of(p) {
        has_element_of_order(&tri, complement_order)
    } else {
        None
    };
    if let Some(r) = rho_prime {
        let [x, y, _, z] = r.entries();
        if x != z {
            // eigenvector of r for z: ((-y)/(x - z), 1)
            let w0 = ring.mul(ring.neg(y), ring.inv(ring.sub(x, z)).unwrap());
            let q = basis_from_columns(ring, [1, 0], [w0, 1]);
            basis = basis.mul(&q);
        }
    }
    let tri = g1.conjugate_by(&basis, DEFAULT_CAP).expect("conjugate");
    let unipotent = tri
        .elements()
        .iter()
        .find(|g| {
            let [a, b, _, d] = g.entries();
            a == 1 && d == 1 && b != 0
        })
        .copied();
    let mut sigma = None;
    if let Some(u) = unipotent {
        let beta = ring.inv(u.entries()[1]).unwrap();
        let d = basis_from_columns(ring, [1, 0], [0, beta]);
        basis = basis.mul(&d);
        let s = u.conjugate_by(&d);
        debug_assert_eq!(s, Gl2::unipotent(ring));
        sigma = Some(s);
    }
    // rho_prime is written in the first triangular basis; move it to the final one.
    let first = basis_from_columns(ring, line, second);
    let rho = rho_prime.map(|r| first.mul(&r).mul(&first.inv()).conjugate_by(&basis));
    if let Some(r) = rho {
        debug_assert!(r.is_diagonal());
    }
    Classification {
        tag: ClassTag::OneLineBorel,
        basis_change: basis,
        cyclic: false,
        rho: if sigma.is_some() { rho } else { None },
        sigma,
    }
}

pub fn commutator(g: &Gl2, h: &Gl2) -> Gl2 {
    g.mul(h).mul(&g.inv()).mul(&h.inv())
}

/// Whether `sub` is normal in `g` (conjugates of `sub`'s generators by
/// `g`'s generators stay in `sub`).
pub fn is_normal(sub: &MatrixGroup, g: &MatrixGroup) -> Result<bool> {
    if !sub.is_subgroup_of(g) {
        return Err(Error::NotASubgroup);
    }
    Ok(g.generators().iter().all(|x| {
        let xi = x.inv();
        sub.generators()
            .iter()
            .all(|h| sub.contains(&x.mul(h).mul(&xi)))
    }))
}

/// `{det g mod p^level : g in G}`, sorted.
pub fn det_image(g: &MatrixGroup, level: u32) -> Result<Vec<u32>> {
    let ring = g.ring();
    if level == 0 || level > ring.n() {
        return Err(Error::UnsupportedModulus {
            p: ring.p(),
            n: level,
        });
    }
    let m = ring.p().pow(level);
    let set: BTreeSet<u32> = g.elements().iter().map(|x| x.det() % m).collect();
    Ok(set.into_iter().collect())
}

pub fn contains_nontrivial_scalar(g1: &MatrixGroup) -> Option<Gl2> {
    g1.elements()
        .iter()
        .find(|x| x.is_scalar() && !x.is_identity())
        .copied()
}

/// Whether `g` restricted to its own elements is cyclic.
pub fn is_cyclic(g: &MatrixGroup) -> bool {
    has_element_of_order(g, g.order() as u64).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r5() -> Ring {
        Ring::new(5, 1).unwrap()
    }

    fn close(r: Ring, gens: &[Gl2]) -> MatrixGroup {
        MatrixGroup::close(r, gens, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn orders() {
        let r = r5();
        assert_eq!(element_order(&Gl2::identity(r)), 1);
        assert_eq!(element_order(&Gl2::unipotent(r.square())), 25);
        assert_eq!(element_order(&Gl2::diag(r, 2, 3).unwrap()), 4);
    }

    #[test]
    fn cyclic_subgroup_counts() {
        let r = r5();
        assert_eq!(cyclic_subgroups(&MatrixGroup::trivial(r)).len(), 1);
        assert_eq!(cyclic_subgroups(&close(r, &[Gl2::unipotent(r)])).len(), 2);
        let d = close(
            r,
            &[Gl2::diag(r, 2, 1).unwrap(), Gl2::diag(r, 1, 2).unwrap()],
        );
        assert_eq!(d.order(), 16);
        // oracle: dedup <g> over all 16 elements by element set
        let mut keys: Vec<Vec<u64>> = d
            .elements()
            .iter()
            .map(|g| close(r, &[*g]).canonical_key())
            .collect();
        keys.sort();
        keys.dedup();
        let subs = cyclic_subgroups(&d);
        assert_eq!(subs.len(), keys.len());
        let mut got: Vec<Vec<u64>> = subs.iter().map(|s| s.canonical_key()).collect();
        got.sort();
        assert_eq!(got, keys);
    }

    #[test]
    fn reduction_examples() {
        let r = r5();
        let r25 = r.square();
        let mut kernel_gens = Vec::new();
        for i in 0..4 {
            let mut a = [0; 4];
            a[i] = 1;
            kernel_gens.push(Gl2::kernel_element(r, a));
        }
        let full = close(r25, &kernel_gens);
        assert_eq!(full.order(), 625);
        let (g1, h) = reduction_split(&full).unwrap();
        assert_eq!(g1.order(), 1);
        assert_eq!(h.order(), 625);
        assert_eq!(h_dimension(&h).unwrap(), 4);

        let s = close(r25, &[Gl2::unipotent(r25)]);
        let (g1, h) = reduction_split(&s).unwrap();
        assert_eq!((s.order(), g1.order(), h.order()), (25, 5, 5));
        assert_eq!(h_dimension(&h).unwrap(), 1);

        let d = close(r25, &[Gl2::diag(r25, 2, 3).unwrap()]);
        assert_eq!(element_order(&Gl2::diag(r25, 2, 3).unwrap()), 20);
        let (g1, h) = reduction_split(&d).unwrap();
        assert_eq!((d.order(), g1.order(), h.order()), (20, 4, 5));

        assert_eq!(h_dimension(&MatrixGroup::trivial(r25)).unwrap(), 0);
        assert_eq!(h_dimension(&s).unwrap_err(), Error::NotReductionKernel);
    }

    #[test]
    fn sylow_examples() {
        let r = r5();
        let d = close(r, &[Gl2::diag(r, 2, 3).unwrap()]);
        assert_eq!(p_sylow(&d).unwrap().subgroup.order(), 1);
        let borel = close(r, &[Gl2::diag(r, 2, 1).unwrap(), Gl2::unipotent(r)]);
        let syl = p_sylow(&borel).unwrap();
        assert!(syl.normal);
        assert_eq!(syl.subgroup.order(), 5);
        assert!(syl.subgroup.contains(&Gl2::unipotent(r)));
        let s25 = close(r.square(), &[Gl2::unipotent(r.square())]);
        assert_eq!(p_sylow(&s25).unwrap().subgroup.order(), 25);
    }

    #[test]
    fn sylow_not_normal_in_gl2() {
        let r = r5();
        let gl2 = close(
            r,
            &[
                Gl2::diag(r, 2, 1).unwrap(),
                Gl2::unipotent(r),
                Gl2::new(r, 0, 1, 1, 0).unwrap(),
            ],
        );
        assert_eq!(gl2.order(), 480);
        let syl = p_sylow(&gl2).unwrap();
        assert!(!syl.normal);
        assert_eq!(syl.subgroup.order(), 5);
    }

    #[test]
    fn diagonal_part_examples() {
        let r = r5();
        let d = close(r, &[Gl2::diag(r, 2, 3).unwrap()]);
        assert!(diagonal_part(&d).same_elements(&d));
        let borel = close(r, &[Gl2::diag(r, 2, 1).unwrap(), Gl2::unipotent(r)]);
        let gd = diagonal_part(&borel);
        assert_eq!(gd.order(), 4);
        assert!(gd.contains(&Gl2::diag(r, 2, 1).unwrap()));
        assert_eq!(diagonal_part(&close(r, &[Gl2::unipotent(r)])).order(), 1);
    }

    #[test]
    fn lines() {
        let r = r5();
        let scalar = close(r, &[Gl2::scalar(r, 2).unwrap()]);
        assert_eq!(invariant_lines(&scalar).len(), 6);
        let sigma = close(r, &[Gl2::unipotent(r)]);
        let l = invariant_lines(&sigma);
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].basis(), &[vec![1, 0]]);
        let d = close(r, &[Gl2::diag(r, 2, 3).unwrap()]);
        let l = invariant_lines(&d);
        assert_eq!(l.len(), 2);
        assert_eq!(l[0].basis(), &[vec![0, 1]]);
        assert_eq!(l[1].basis(), &[vec![1, 0]]);
    }

    #[test]
    fn classification_examples() {
        let r = r5();
        let d = close(r, &[Gl2::diag(r, 2, 3).unwrap()]);
        let c = classify_g1(&d);
        assert_eq!(c.tag, ClassTag::TwoLinesDiagonalCyclic);
        assert!(c.cyclic);

        let borel = close(r, &[Gl2::diag(r, 1, 2).unwrap(), Gl2::unipotent(r)]);
        let c = classify_g1(&borel);
        assert_eq!(c.tag, ClassTag::OneLineBorel);
        assert_eq!(c.sigma, Some(Gl2::unipotent(r)));
        assert_eq!(c.rho, Some(Gl2::diag(r, 1, 2).unwrap()));
        assert_eq!(c.basis_change, Gl2::identity(r));

        let gamma = Gl2::new(r, 2, 1, 0, 2).unwrap();
        assert_eq!(gamma.pow(4), Gl2::new(r, 1, 2, 0, 1).unwrap());
        let g = close(r, &[gamma]);
        let c = classify_g1(&g);
        assert_eq!(c.tag, ClassTag::OneLineBorel);
        assert!(g.contains(&Gl2::new(r, 1, 2, 0, 1).unwrap()));
        let conj = c.conjugated(&g);
        assert!(conj.contains(&Gl2::unipotent(r)));
        assert!(conj.contains(&c.rho.unwrap()));
        assert!(c.rho.unwrap().is_scalar());
    }

    #[test]
    fn borel_in_skew_basis() {
        // Borel subgroup conjugated away from upper triangular form.
        let r = Ring::new(7, 1).unwrap();
        let p = Gl2::new(r, 2, 3, 1, 4).unwrap();
        let g = close(
            r,
            &[
                Gl2::diag(r, 3, 2).unwrap().conjugate_by(&p),
                Gl2::unipotent(r).conjugate_by(&p),
            ],
        );
        let c = classify_g1(&g);
        assert_eq!(c.tag, ClassTag::OneLineBorel);
        let conj = c.conjugated(&g);
        let rho = c.rho.unwrap();
        assert!(rho.is_diagonal());
        let gen = close(r, &[rho, Gl2::unipotent(r)]);
        assert!(gen.same_elements(&conj));
    }

    #[test]
    fn commutator_examples() {
        let r = r5();
        let a = Gl2::diag(r, 2, 3).unwrap();
        assert!(commutator(&a, &a).is_identity());
        assert!(commutator(&a, &Gl2::scalar(r, 4).unwrap()).is_identity());
        let delta = Gl2::unipotent(r);
        assert_eq!(commutator(&delta, &a), Gl2::new(r, 1, 2, 0, 1).unwrap());
    }

    #[test]
    fn normality() {
        let r = r5();
        let borel = close(r, &[Gl2::diag(r, 2, 1).unwrap(), Gl2::unipotent(r)]);
        let sigma = close(r, &[Gl2::unipotent(r)]);
        assert!(is_normal(&sigma, &borel).unwrap());
        let gd = close(r, &[Gl2::diag(r, 2, 1).unwrap()]);
        assert!(!is_normal(&gd, &borel).unwrap());
        let d = close(
            r,
            &[Gl2::diag(r, 2, 1).unwrap(), Gl2::diag(r, 1, 2).unwrap()],
        );
        assert!(is_normal(&gd, &d).unwrap());
        let other = close(r, &[Gl2::new(r, 0, 1, 1, 0).unwrap()]);
        assert_eq!(is_normal(&other, &borel), Err(Error::NotASubgroup));
    }

    #[test]
    fn determinants() {
        let r = r5();
        assert_eq!(
            det_image(&close(r, &[Gl2::unipotent(r)]), 1).unwrap(),
            vec![1]
        );
        // diag(2,3) has determinant 6 = 1, so every power does too.
        let d = close(r, &[Gl2::diag(r, 2, 3).unwrap()]);
        assert_eq!(det_image(&d, 1).unwrap(), vec![1]);
        let gl2 = close(
            r,
            &[
                Gl2::diag(r, 2, 1).unwrap(),
                Gl2::new(r, 0, 1, 1, 0).unwrap(),
                Gl2::unipotent(r),
            ],
        );
        assert_eq!(det_image(&gl2, 1).unwrap(), vec![1, 2, 3, 4]);
        assert!(det_image(&gl2, 2).is_err());
    }

    #[test]
    fn scalars() {
        let r = r5();
        let two = Gl2::scalar(r, 2).unwrap();
        assert_eq!(contains_nontrivial_scalar(&close(r, &[two])), Some(two));
        assert_eq!(
            contains_nontrivial_scalar(&close(r, &[Gl2::unipotent(r)])),
            None
        );
        let g = close(r, &[Gl2::diag(r, 2, 2).unwrap(), Gl2::unipotent(r)]);
        assert!(contains_nontrivial_scalar(&g).is_some());
    }
}
