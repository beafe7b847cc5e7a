//! Field-theoretic hypotheses translated into conditions on the image groups.
//!
//! `G2` is the image mod `p^2`, `G1` its reduction and `H` the kernel of
//! reduction. The Galois correspondence gives:
//!
//! | field statement                                 | group condition                                   |
//! |-------------------------------------------------|---------------------------------------------------|
//! | `k` contains `zeta_p`                           | `det(G1) = {1}`                                   |
//! | `k` does not contain the degree-`p` subfield `L` of `Q(zeta_{p^2})` | `p` divides `|det(G2) mod p^2|` |
//! | `K1 = k(zeta_p)`                                | `det` is injective on `G1`                        |
//! | a `k`-rational point of exact order `p`         | a nonzero `G1`-fixed vector in `F_p^2`             |
//! | `Gal(K2 / K1(zeta_{p^2}))`                      | `{h in H : det h = 1 mod p^2}`                     |
//! | `Gal(K2 / F(zeta_{p^2}))`, `F` fixed by `<sigma>` | `{g in G2 : g mod p fixes P1, det g = 1 mod p^2}` |

use crate::analysis::det_image;
use crate::cohomology::{fixed_submodule, GModule};
use crate::error::Result;
use crate::gl2::Gl2;
use crate::group::{MatrixGroup, DEFAULT_CAP};

pub fn contains_zeta_p(g1: &MatrixGroup) -> Result<bool> {
    Ok(det_image(g1, 1)? == vec![1])
}

pub fn excludes_degree_p_subfield(g2: &MatrixGroup) -> Result<bool> {
    let p = g2.ring().p() as usize;
    Ok(det_image(g2, 2)?.len() % p == 0)
}

pub fn first_layer_is_cyclotomic(g1: &MatrixGroup) -> Result<bool> {
    Ok(det_image(g1, 1)?.len() == g1.order())
}

pub fn has_rational_point_of_order_p(g1: &MatrixGroup) -> bool {
    !fixed_submodule(g1, &GModule::new(g1.ring())).is_zero()
}

fn subgroup_where(g2: &MatrixGroup, keep: impl Fn(&Gl2) -> bool) -> MatrixGroup {
    let elems = g2.elements().iter().filter(|x| keep(x));
    MatrixGroup::from_elements(g2.ring(), elems, DEFAULT_CAP).expect("subgroup of a closed group")
}

/// Model of `Gal(K2 / K1(zeta_{p^2}))`: kernel elements of determinant 1.
pub fn gamma_subgroup(g2: &MatrixGroup) -> MatrixGroup {
    subgroup_where(g2, |x| x.reduce().is_identity() && x.det() == 1)
}

/// Model of `Gal(K2 / F(zeta_{p^2}))` for the fixed line spanned by `p1`
/// (a vector mod `p`): elements fixing `p1` mod `p` with determinant 1.
pub fn h_prime(g2: &MatrixGroup, p1: [u32; 2]) -> MatrixGroup {
    subgroup_where(g2, |x| x.reduce().apply(p1) == p1 && x.det() == 1)
}

/// The same subgroup described through the unipotent part instead:
/// elements whose reduction lies in `unipotent` and of determinant 1.
pub fn h_prime_via_unipotent(g2: &MatrixGroup, unipotent: &MatrixGroup) -> MatrixGroup {
    subgroup_where(g2, |x| unipotent.contains(&x.reduce()) && x.det() == 1)
}
