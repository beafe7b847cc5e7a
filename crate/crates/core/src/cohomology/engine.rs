//! Solving for 1-cocycles of a finite group acting on a submodule of
//! `(Z/p^n Z)^2`.
//!
//! A cocycle is determined by its values `z_i` on the generators: walking the
//! Cayley graph breadth-first from the identity, `Z_{s h} = z_s + s Z_h`
//! expresses every value as a linear function `L_h` of `z = (z_1, ..., z_r)`.
//! Each edge that closes a cycle gives a linear constraint. Imposing
//! `Z_{s h} = Z_s + s Z_h` for every generator `s` and every `h` implies the
//! full cocycle identity by induction on word length, so the solution space
//! of those constraints inside `A^r` is exactly `Z^1`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::gl2::Gl2;
use crate::linalg::{kernel, Submodule};
use crate::matrix::RingMatrix;
use crate::ring::Ring;

/// Default cap on `|G| * rank` unknowns of the flat value table.
pub const LINEAR_BUDGET: usize = 60_000;

/// A finite group given by a generator Cayley table, acting on `coeff`
/// through 2x2 matrices.
pub(crate) struct ActionTable {
    pub ring: Ring,
    pub order: usize,
    pub identity: usize,
    /// Action matrix of each generator.
    pub gens: Vec<Gl2>,
    /// `left[i][h]`: index of `gens[i] * h`.
    pub left: Vec<Vec<u32>>,
    /// Action matrix of each element.
    pub act: Vec<Gl2>,
    pub coeff: Submodule,
}

/// `L_h` for each element: a 2 x 2r matrix with `Z_h = L_h z`.
pub(crate) struct Expansion {
    r: usize,
    rows: Vec<u32>,
}

impl Expansion {
    fn slot(&self, h: usize) -> &[u32] {
        let w = 4 * self.r;
        &self.rows[h * w..(h + 1) * w]
    }

    pub fn matrix(&self, ring: Ring, h: usize) -> RingMatrix {
        RingMatrix::from_data(ring, 2, 2 * self.r, self.slot(h).to_vec())
    }

    pub fn value(&self, ring: &Ring, h: usize, z: &[u32]) -> [u32; 2] {
        let s = self.slot(h);
        let w = 2 * self.r;
        let mut out = [0u64; 2];
        for k in 0..w {
            if z[k] != 0 {
                out[0] += (s[k] * z[k]) as u64;
                out[1] += (s[w + k] * z[k]) as u64;
            }
        }
        [ring.reduce(out[0]), ring.reduce(out[1])]
    }
}

/// Row span kept in Howell form, grown one row at a time.
struct ConstraintSpan {
    span: Submodule,
}

impl ConstraintSpan {
    fn new(ring: Ring, width: usize) -> Self {
        ConstraintSpan {
            span: Submodule::zero(ring, width),
        }
    }

    fn push(&mut self, row: Vec<u32>) {
        if row.iter().all(|&x| x == 0) || self.span.contains(&row) {
            return;
        }
        let mut gens = self.span.basis().to_vec();
        gens.push(row);
        self.span = Submodule::new(self.span.ring(), self.span.ambient_rank(), gens);
    }
}

pub(crate) struct Solved {
    pub r: usize,
    pub expansion: Expansion,
    /// Cocycles in generator coordinates (ambient rank `2r`).
    pub z1: Submodule,
    /// Coboundaries in generator coordinates.
    pub b1: Submodule,
}

pub(crate) fn solve(table: &ActionTable, budget: usize) -> Result<Solved> {
    let unknowns = table.order * 2;
    if unknowns > budget {
        return Err(Error::LinearBudgetExceeded { unknowns, budget });
    }
    let ring = table.ring;
    let r = table.gens.len();
    let w = 2 * r;
    let slot = 4 * r;
    let mut rows = vec![0u32; table.order * slot];
    let mut seen = vec![false; table.order];
    let mut constraints = ConstraintSpan::new(ring, w);

    seen[table.identity] = true;
    let mut queue = VecDeque::from([table.identity]);
    let mut candidate = vec![0u32; slot];
    while let Some(h) = queue.pop_front() {
        for (i, s) in table.gens.iter().enumerate() {
            let t = table.left[i][h] as usize;
            // candidate = E_i + s * L_h
            let [a, b, c, d] = s.entries();
            {
                let lh = &rows[h * slot..(h + 1) * slot];
                for k in 0..w {
                    let x = lh[k];
                    let y = lh[w + k];
                    candidate[k] = ring.reduce((a * x + b * y) as u64);
                    candidate[w + k] = ring.reduce((c * x + d * y) as u64);
                }
            }
            candidate[2 * i] = ring.add(candidate[2 * i], 1);
            candidate[w + 2 * i + 1] = ring.add(candidate[w + 2 * i + 1], 1);
            if !seen[t] {
                seen[t] = true;
                rows[t * slot..(t + 1) * slot].copy_from_slice(&candidate);
                queue.push_back(t);
            } else {
                let lt = &rows[t * slot..(t + 1) * slot];
                let top: Vec<u32> = (0..w).map(|k| ring.sub(lt[k], candidate[k])).collect();
                let bottom: Vec<u32> = (0..w)
                    .map(|k| ring.sub(lt[w + k], candidate[w + k]))
                    .collect();
                constraints.push(top);
                constraints.push(bottom);
            }
        }
    }
    debug_assert!(
        seen.iter().all(|&x| x),
        "generators do not reach every element"
    );

    // Values on generators must lie in the coefficient module.
    let full = Submodule::full(ring, 2);
    if table.coeff != full {
        let ann = table.coeff.annihilator();
        for i in 0..r {
            for y in ann.basis() {
                let mut row = vec![0; w];
                row[2 * i] = y[0];
                row[2 * i + 1] = y[1];
                constraints.push(row);
            }
        }
    }

    let z1 = if w == 0 {
        Submodule::zero(ring, 0)
    } else {
        kernel(&constraints.span.basis_matrix_or_zero(w))
    };

    let b1 = coboundaries(ring, &table.gens, &table.coeff);
    debug_assert!(b1.is_subset_of(&z1).unwrap());
    Ok(Solved {
        r,
        expansion: Expansion { r, rows },
        z1,
        b1,
    })
}

/// `{ ((s_i - 1) a)_i : a in coeff }` in generator coordinates.
pub(crate) fn coboundaries(ring: Ring, gens: &[Gl2], coeff: &Submodule) -> Submodule {
    let w = 2 * gens.len();
    let rows = coeff
        .basis()
        .iter()
        .map(|a| {
            let v = [a[0], a[1]];
            let mut row = Vec::with_capacity(w);
            for s in gens {
                let sv = s.apply(v);
                row.push(ring.sub(sv[0], v[0]));
                row.push(ring.sub(sv[1], v[1]));
            }
            row
        })
        .collect();
    Submodule::new(ring, w, rows)
}

trait BasisOrZero {
    fn basis_matrix_or_zero(&self, width: usize) -> RingMatrix;
}

impl BasisOrZero for Submodule {
    fn basis_matrix_or_zero(&self, width: usize) -> RingMatrix {
        if self.is_zero() {
            RingMatrix::zeros(self.ring(), 1, width)
        } else {
            self.basis_matrix()
        }
    }
}

impl Solved {
    /// `Z^1` elements whose value at every element `h` lies in `(h - 1) A`.
    pub fn local_per_element(&self, table: &ActionTable) -> Submodule {
        let ring = table.ring;
        let mut current = self.z1.clone();
        for h in 0..table.order {
            if current.is_zero() {
                break;
            }
            let target = table.coeff.map(&table.act[h].minus_identity());
            if target == table.coeff {
                continue;
            }
            let lh = self.expansion.matrix(ring, h);
            current = current.preimage_within(&lh, &target);
        }
        current
    }

    /// Elements of `within` whose restriction to the subgroup with element
    /// indices `powers` is a coboundary of that subgroup, tested on the full
    /// value table over the subgroup.
    pub fn local_for_subgroup(
        &self,
        table: &ActionTable,
        within: &Submodule,
        powers: &[usize],
    ) -> Submodule {
        let ring = table.ring;
        let w = 2 * self.r;
        let k = powers.len();
        let mut res = RingMatrix::zeros(ring, 2 * k, w);
        for (j, &h) in powers.iter().enumerate() {
            let lh = self.expansion.slot(h);
            for col in 0..w {
                res.set(2 * j, col, lh[col]);
                res.set(2 * j + 1, col, lh[w + col]);
            }
        }
        let cob_rows: Vec<Vec<u32>> = table
            .coeff
            .basis()
            .iter()
            .map(|a| {
                let v = [a[0], a[1]];
                let mut row = Vec::with_capacity(2 * k);
                for &h in powers {
                    let hv = table.act[h].apply(v);
                    row.push(ring.sub(hv[0], v[0]));
                    row.push(ring.sub(hv[1], v[1]));
                }
                row
            })
            .collect();
        let cob = Submodule::new(ring, 2 * k, cob_rows);
        within.preimage_within(&res, &cob)
    }

    pub fn table_values(&self, ring: &Ring, order: usize, z: &[u32]) -> Vec<[u32; 2]> {
        (0..order)
            .map(|h| self.expansion.value(ring, h, z))
            .collect()
    }
}

/// Action table of a matrix group on `coeff` through its own elements.
pub(crate) fn table_for_group(group: &crate::group::MatrixGroup, coeff: Submodule) -> ActionTable {
    let r = group.generators().len();
    let left = (0..r)
        .map(|i| {
            (0..group.order())
                .map(|h| group.left_mul(i, h) as u32)
                .collect()
        })
        .collect();
    ActionTable {
        ring: group.ring(),
        order: group.order(),
        identity: 0,
        gens: group.generators().to_vec(),
        left,
        act: group.elements().to_vec(),
        coeff,
    }
}
