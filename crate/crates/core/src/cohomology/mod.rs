//! First cohomology of matrix groups acting on `(Z/p^n Z)^2`.
//!
//! Cocycle spaces are solved in generator coordinates (the values on the
//! group's generators); the map to full value tables is injective, so
//! quotients taken there are the same groups. [`cocycle_space`] and
//! [`coboundary_space`] expose the full-table form.

mod engine;
mod quotient;

use serde::Serialize;

pub use engine::LINEAR_BUDGET;
pub use quotient::{check_inflation_restriction, inflation, ExactnessReport, QuotientGroup};

use crate::analysis::{cyclic_subgroup_indices, element_order};
use crate::error::{Error, Result};
use crate::gl2::Gl2;
use crate::group::{MatrixGroup, DEFAULT_CAP};
use crate::linalg::{image, kernel, quotient_presentation, Submodule};
use crate::matrix::RingMatrix;
use crate::ring::Ring;

use engine::{solve, table_for_group, ActionTable, Solved};

/// The module `(Z/p^n Z)^2` on which a matrix group acts by multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GModule {
    ring: Ring,
}

impl GModule {
    pub fn new(ring: Ring) -> GModule {
        GModule { ring }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn order(&self) -> u64 {
        (self.ring.modulus() as u64).pow(2)
    }

    pub fn full(&self) -> Submodule {
        Submodule::full(self.ring, 2)
    }

    fn check(&self, g: &MatrixGroup) -> Result<()> {
        if g.ring() != self.ring {
            return Err(Error::ModulusMismatch {
                left: g.ring().modulus(),
                right: self.ring.modulus(),
            });
        }
        Ok(())
    }
}

/// A value table `g -> Z_g`, indexed like the group's elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cocycle {
    pub values: Vec<[u32; 2]>,
}

impl Cocycle {
    pub fn zero(order: usize) -> Cocycle {
        Cocycle {
            values: vec![[0, 0]; order],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == [0, 0])
    }

    /// The coboundary `g -> (g - 1) m`.
    pub fn coboundary(g: &MatrixGroup, m: [u32; 2]) -> Cocycle {
        let ring = g.ring();
        let values = g
            .elements()
            .iter()
            .map(|x| {
                let y = x.apply(m);
                [ring.sub(y[0], m[0]), ring.sub(y[1], m[1])]
            })
            .collect();
        Cocycle { values }
    }

    pub fn flatten(&self) -> Vec<u32> {
        self.values.iter().flat_map(|v| v.iter().copied()).collect()
    }
}

/// Checks `Z_{gh} = Z_g + g Z_h` on every pair.
pub fn is_cocycle(g: &MatrixGroup, z: &Cocycle) -> bool {
    if z.values.len() != g.order() {
        return false;
    }
    let ring = g.ring();
    for (i, x) in g.elements().iter().enumerate() {
        for (j, y) in g.elements().iter().enumerate() {
            let xy = g.index_of(&x.mul(y)).expect("closed group");
            let gz = x.apply(z.values[j]);
            let rhs = [
                ring.add(z.values[i][0], gz[0]),
                ring.add(z.values[i][1], gz[1]),
            ];
            if z.values[xy] != rhs {
                return false;
            }
        }
    }
    true
}

/// `H^1(G, M)` presented by invariant factors.
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    pub group_order: usize,
    /// Cocycles, in generator coordinates.
    pub z1: Submodule,
    /// Coboundaries, in generator coordinates.
    pub b1: Submodule,
    /// Orders of the cyclic factors, ascending; empty when trivial.
    pub invariants: Vec<u64>,
    /// One cocycle per invariant factor.
    pub class_reps: Vec<Cocycle>,
}

impl CohomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }
}

/// JSON shape for a cohomology query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub group_order: usize,
    pub z1_order: u64,
    pub b1_order: u64,
    pub invariants: Vec<u64>,
    pub h1loc_invariants: Vec<u64>,
}

/// Cocycle solution for one `(G, M)`, reused across the H^1 queries.
pub struct Cohomology<'g> {
    group: &'g MatrixGroup,
    table: ActionTable,
    solved: Solved,
}

impl<'g> Cohomology<'g> {
    pub fn new(g: &'g MatrixGroup, m: &GModule) -> Result<Cohomology<'g>> {
        Cohomology::with_budget(g, m, LINEAR_BUDGET)
    }

    pub fn with_budget(g: &'g MatrixGroup, m: &GModule, budget: usize) -> Result<Cohomology<'g>> {
        m.check(g)?;
        let table = table_for_group(g, m.full());
        let solved = solve(&table, budget)?;
        Ok(Cohomology {
            group: g,
            table,
            solved,
        })
    }

    pub fn group(&self) -> &MatrixGroup {
        self.group
    }

    pub fn z1(&self) -> &Submodule {
        &self.solved.z1
    }

    pub fn b1(&self) -> &Submodule {
        &self.solved.b1
    }

    /// Full value table of the cocycle with generator values `z`.
    pub fn cocycle(&self, z: &[u32]) -> Cocycle {
        Cocycle {
            values: self
                .solved
                .table_values(&self.table.ring, self.table.order, z),
        }
    }

    fn present(&self, num: &Submodule) -> Result<CohomologyGroup> {
        let q = quotient_presentation(num, &self.solved.b1)?;
        let class_reps = q.generators.iter().map(|z| self.cocycle(z)).collect();
        Ok(CohomologyGroup {
            group_order: self.table.order,
            z1: num.clone(),
            b1: self.solved.b1.clone(),
            invariants: q.invariants,
            class_reps,
        })
    }

    pub fn h1(&self) -> Result<CohomologyGroup> {
        self.present(&self.solved.z1)
    }

    /// Cocycles satisfying the local conditions, via per-element solvability
    /// of `(g - 1) W = Z_g`.
    pub fn local_cocycles_per_element(&self) -> Submodule {
        self.solved.local_per_element(&self.table)
    }

    /// Cocycles whose restriction to every cyclic subgroup is a coboundary there.
    pub fn local_cocycles_via_cyclic(&self) -> Submodule {
        let mut current = self.solved.z1.clone();
        if current == self.solved.b1 {
            return current;
        }
        for powers in cyclic_subgroup_indices(self.group) {
            if powers.len() == 1 {
                continue;
            }
            current = self
                .solved
                .local_for_subgroup(&self.table, &current, &powers);
            if current == self.solved.b1 {
                break;
            }
        }
        current
    }

    /// `H^1_loc`, computed both ways; the two must agree.
    pub fn h1_loc(&self) -> Result<CohomologyGroup> {
        if self.solved.z1 == self.solved.b1 {
            return self.present(&self.solved.b1);
        }
        let per_element = self.local_cocycles_per_element();
        let via_cyclic = self.local_cocycles_via_cyclic();
        if per_element != via_cyclic {
            let a = quotient_presentation(&per_element, &self.solved.b1)?.invariants;
            let b = quotient_presentation(&via_cyclic, &self.solved.b1)?.invariants;
            return Err(Error::CharacterizationMismatch {
                per_element: a,
                cyclic: b,
            });
        }
        self.present(&per_element)
    }

    pub fn report(&self) -> Result<CohomologyReport> {
        let h1 = self.h1()?;
        let loc = if h1.is_trivial() {
            Vec::new()
        } else {
            self.h1_loc()?.invariants
        };
        Ok(CohomologyReport {
            group_order: self.table.order,
            z1_order: self.solved.z1.order(),
            b1_order: self.solved.b1.order(),
            invariants: h1.invariants,
            h1loc_invariants: loc,
        })
    }
}

fn expand(g: &MatrixGroup, coh: &Cohomology, sub: &Submodule) -> Submodule {
    let rows = sub
        .basis()
        .iter()
        .map(|z| coh.cocycle(z).flatten())
        .collect();
    Submodule::new(g.ring(), 2 * g.order(), rows)
}

/// `Z^1(G, M)` as a submodule of `M^|G|`, coordinates ordered by element index.
pub fn cocycle_space(g: &MatrixGroup, m: &GModule) -> Result<Submodule> {
    let coh = Cohomology::new(g, m)?;
    Ok(expand(g, &coh, coh.z1()))
}

/// `B^1(G, M) = { g -> (g - 1) m }` as a submodule of `M^|G|`.
pub fn coboundary_space(g: &MatrixGroup, m: &GModule) -> Result<Submodule> {
    m.check(g)?;
    let ring = g.ring();
    let rows = [[1u32, 0], [0, 1]]
        .iter()
        .map(|&e| Cocycle::coboundary(g, e).flatten())
        .collect();
    Ok(Submodule::new(ring, 2 * g.order(), rows))
}

pub fn h1(g: &MatrixGroup, m: &GModule) -> Result<CohomologyGroup> {
    Cohomology::new(g, m)?.h1()
}

pub fn h1_loc(g: &MatrixGroup, m: &GModule) -> Result<CohomologyGroup> {
    Cohomology::new(g, m)?.h1_loc()
}

/// `sum_{i < order} delta^i` as a 2x2 matrix.
pub fn norm_matrix(delta: &Gl2, order: u64) -> RingMatrix {
    let ring = delta.ring();
    let mut acc = [0u64; 4];
    let mut x = Gl2::identity(ring);
    for _ in 0..order {
        for (a, e) in acc.iter_mut().zip(x.entries()) {
            *a += e as u64;
        }
        x = x.mul(delta);
    }
    RingMatrix::from_data(ring, 2, 2, acc.map(|a| ring.reduce(a)).to_vec())
}

/// `ker(N) / Im(delta - 1)` for the cyclic group of the given order generated
/// by `delta`, acting on the stable submodule `a`.
pub fn cyclic_h1_on(delta: &Gl2, order: u64, a: &Submodule) -> Result<Vec<u64>> {
    let ring = delta.ring();
    let norm = norm_matrix(delta, order);
    let ker = a.preimage_within(&norm, &Submodule::zero(ring, 2));
    let im = a.map(&delta.minus_identity());
    Ok(quotient_presentation(&ker, &im)?.invariants)
}

/// `H^1(<delta>, M)` from the norm formula. Class representatives are
/// expanded on `<delta>` (elements in power order) via
/// `Z_{delta^i} = sum_{j < i} delta^j v`.
pub fn cyclic_h1(delta: &Gl2, m: &GModule) -> Result<CohomologyGroup> {
    let ring = m.ring();
    if delta.ring() != ring {
        return Err(Error::ModulusMismatch {
            left: delta.ring().modulus(),
            right: ring.modulus(),
        });
    }
    let order = element_order(delta);
    let norm = norm_matrix(delta, order);
    let z1 = kernel(&norm);
    let b1 = image(&delta.minus_identity());
    let q = quotient_presentation(&z1, &b1)?;
    let class_reps = q
        .generators
        .iter()
        .map(|v| {
            let v = [v[0], v[1]];
            let mut values = Vec::with_capacity(order as usize);
            let mut acc = [0u32, 0];
            let mut power = Gl2::identity(ring);
            for _ in 0..order {
                values.push(acc);
                let pv = power.apply(v);
                acc = [ring.add(acc[0], pv[0]), ring.add(acc[1], pv[1])];
                power = power.mul(delta);
            }
            Cocycle { values }
        })
        .collect();
    Ok(CohomologyGroup {
        group_order: order as usize,
        z1,
        b1,
        invariants: q.invariants,
        class_reps,
    })
}

/// Value table of `z` restricted to the subgroup `c` (indexed like `c`).
pub fn restriction(z: &Cocycle, g: &MatrixGroup, c: &MatrixGroup) -> Result<Cocycle> {
    if !c.is_subgroup_of(g) {
        return Err(Error::NotASubgroup);
    }
    let values = c
        .elements()
        .iter()
        .map(|x| z.values[g.index_of(x).expect("subgroup element")])
        .collect();
    Ok(Cocycle { values })
}

/// Whether `z` is a coboundary of `g`, by solving `Z_s = (s - 1) W` jointly
/// over the generators and checking the resulting table.
pub fn is_coboundary(g: &MatrixGroup, z: &Cocycle) -> bool {
    let m = GModule::new(g.ring());
    let b = coboundary_space(g, &m).expect("same ring");
    b.contains(&z.flatten())
}

/// `Z_g` lies in `(g - 1) M` for every `g`.
pub fn satisfies_local_conditions(g: &MatrixGroup, z: &Cocycle) -> bool {
    g.elements()
        .iter()
        .zip(&z.values)
        .all(|(x, v)| image(&x.minus_identity()).contains(&v[..]))
}

/// `M^S`, the vectors fixed by every element of `s`.
pub fn fixed_submodule(s: &MatrixGroup, m: &GModule) -> Submodule {
    let ring = m.ring();
    if s.generators().is_empty() {
        return m.full();
    }
    let mut rows = Vec::with_capacity(2 * s.generators().len());
    for g in s.generators() {
        let d = g.minus_identity();
        rows.push(d.row(0).to_vec());
        rows.push(d.row(1).to_vec());
    }
    kernel(&RingMatrix::from_row_vecs(ring, 2, &rows))
}

/// `M^S` restricted to vectors of exact order `p` in `F_p^2`: whether the
/// mod-`p` group fixes a nonzero vector.
pub fn has_fixed_point_of_order_p(g1: &MatrixGroup) -> bool {
    !fixed_submodule(g1, &GModule::new(g1.ring())).is_zero()
}

/// Convenience for building `<gens>` with the default cap.
pub fn group(ring: Ring, gens: &[Gl2]) -> Result<MatrixGroup> {
    MatrixGroup::close(ring, gens, DEFAULT_CAP)
}
