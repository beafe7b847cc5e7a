//! Finite subgroups of `GL2(Z/p^n Z)` held as explicit element lists.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gl2::Gl2;
use crate::ring::Ring;

pub const DEFAULT_CAP: usize = 20_000;

/// A finite matrix group with its elements in breadth-first order from the
/// identity. Immutable once built.
#[derive(Clone)]
pub struct MatrixGroup {
    ring: Ring,
    generators: Vec<Gl2>,
    elements: Vec<Gl2>,
    index: HashMap<u64, u32>,
    /// `left[i][h]` is the index of `generators[i] * elements[h]`.
    left: Vec<Vec<u32>>,
}

impl std::fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixGroup")
            .field("ring", &self.ring)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Order of `GL2(Z/p^n Z)`: `p^(4(n-1)) (p^2 - 1)(p^2 - p)`.
pub fn gl2_order(ring: Ring) -> u64 {
    let p = ring.p() as u64;
    p.pow(4 * (ring.n() - 1)) * (p * p - 1) * (p * p - p)
}

impl MatrixGroup {
    /// Breadth-first closure of `generators` under left multiplication.
    pub fn close(ring: Ring, generators: &[Gl2], cap: usize) -> Result<MatrixGroup> {
        for g in generators {
            if g.ring() != ring {
                return Err(Error::ModulusMismatch {
                    left: ring.modulus(),
                    right: g.ring().modulus(),
                });
            }
        }
        let id = Gl2::identity(ring);
        let mut elements = vec![id];
        let mut index = HashMap::new();
        index.insert(id.key(), 0u32);
        let mut left: Vec<Vec<u32>> = vec![Vec::new(); generators.len()];
        let mut h = 0;
        while h < elements.len() {
            let x = elements[h];
            for (i, s) in generators.iter().enumerate() {
                let t = s.mul(&x);
                let next = elements.len() as u32;
                let idx = *index.entry(t.key()).or_insert(next);
                if idx == next {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    elements.push(t);
                }
                left[i].push(idx);
            }
            h += 1;
        }
        Ok(MatrixGroup {
            ring,
            generators: generators.to_vec(),
            elements,
            index,
            left,
        })
    }

    pub fn trivial(ring: Ring) -> MatrixGroup {
        MatrixGroup::close(ring, &[], 1).expect("trivial group")
    }

    /// The subgroup generated by `elements`, with a small generating set picked
    /// greedily (an element becomes a generator only if it is not yet reached).
    pub fn from_elements<'a, I>(ring: Ring, elements: I, cap: usize) -> Result<MatrixGroup>
    where
        I: IntoIterator<Item = &'a Gl2>,
    {
        let mut group = MatrixGroup::trivial(ring);
        let mut gens: Vec<Gl2> = Vec::new();
        for g in elements {
            if !group.contains(g) {
                gens.push(*g);
                group = MatrixGroup::close(ring, &gens, cap)?;
            }
        }
        Ok(group)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Gl2] {
        &self.generators
    }

    pub fn elements(&self) -> &[Gl2] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> Gl2 {
        self.elements[i]
    }

    pub fn index_of(&self, g: &Gl2) -> Option<usize> {
        if g.ring() != self.ring {
            return None;
        }
        self.index.get(&g.key()).map(|&i| i as usize)
    }

    pub fn contains(&self, g: &Gl2) -> bool {
        self.index_of(g).is_some()
    }

    /// Index of `generators[gen] * elements[h]`.
    #[inline]
    pub fn left_mul(&self, gen: usize, h: usize) -> usize {
        self.left[gen][h] as usize
    }

    pub fn is_subgroup_of(&self, other: &MatrixGroup) -> bool {
        self.ring == other.ring && self.generators.iter().all(|g| other.contains(g))
    }

    /// Sorted element keys: equal iff the element sets are equal.
    pub fn canonical_key(&self) -> Vec<u64> {
        let mut k: Vec<u64> = self.elements.iter().map(Gl2::key).collect();
        k.sort_unstable();
        k
    }

    pub fn same_elements(&self, other: &MatrixGroup) -> bool {
        self.ring == other.ring
            && self.order() == other.order()
            && self.elements.iter().all(|g| other.contains(g))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| a.mul(b) == b.mul(a))
        })
    }

    /// Conjugate group `p^-1 G p`.
    pub fn conjugate_by(&self, p: &Gl2, cap: usize) -> Result<MatrixGroup> {
        let gens: Vec<Gl2> = self.generators.iter().map(|g| g.conjugate_by(p)).collect();
        MatrixGroup::close(self.ring, &gens, cap)
    }

    pub fn generator_literals(&self) -> Vec<String> {
        self.generators.iter().map(Gl2::literal).collect()
    }
}
