//! Quotients `G/N` as abstract multiplication tables, inflation, and the
//! inflation-restriction exactness check.

use serde::Serialize;

use super::engine::{solve, table_for_group, ActionTable, Solved};
use super::{Cocycle, CohomologyGroup, GModule, LINEAR_BUDGET};
use crate::analysis::is_normal;
use crate::error::{Error, Result};
use crate::group::MatrixGroup;
use crate::linalg::{quotient_presentation, Submodule};

/// `G/N` acting on `M^N`. Cosets are numbered by their first element in the
/// parent's breadth-first order, so coset 0 is `N` itself.
pub struct QuotientGroup<'g> {
    parent: &'g MatrixGroup,
    normal: &'g MatrixGroup,
    /// Coset number of each parent element.
    coset_of: Vec<u32>,
    /// Parent index of each coset's representative.
    reps: Vec<usize>,
    table: ActionTable,
}

impl<'g> QuotientGroup<'g> {
    pub fn new(parent: &'g MatrixGroup, normal: &'g MatrixGroup, m: &GModule) -> Result<Self> {
        m.check(parent)?;
        if !is_normal(normal, parent)? {
            return Err(Error::NotNormal);
        }
        let ring = parent.ring();
        let mut coset_of = vec![u32::MAX; parent.order()];
        let mut reps = Vec::new();
        for h in 0..parent.order() {
            if coset_of[h] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            let x = parent.element(h);
            for n in normal.elements() {
                let idx = parent.index_of(&x.mul(n)).expect("subgroup of parent");
                coset_of[idx] = c;
            }
            reps.push(h);
        }
        let left = (0..parent.generators().len())
            .map(|i| {
                reps.iter()
                    .map(|&h| coset_of[parent.left_mul(i, h)])
                    .collect()
            })
            .collect();
        let table = ActionTable {
            ring,
            order: reps.len(),
            identity: 0,
            gens: parent.generators().to_vec(),
            left,
            act: reps.iter().map(|&h| parent.element(h)).collect(),
            coeff: super::fixed_submodule(normal, m),
        };
        Ok(QuotientGroup {
            parent,
            normal,
            coset_of,
            reps,
            table,
        })
    }

    pub fn normal(&self) -> &MatrixGroup {
        self.normal
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn coset_of(&self, parent_index: usize) -> usize {
        self.coset_of[parent_index] as usize
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    /// The coefficient module `M^N`.
    pub fn coefficients(&self) -> &Submodule {
        &self.table.coeff
    }

    fn solve(&self) -> Result<Solved> {
        solve(&self.table, LINEAR_BUDGET)
    }

    /// `H^1(G/N, M^N)`; class representatives are indexed by coset number.
    pub fn h1(&self) -> Result<CohomologyGroup> {
        let solved = self.solve()?;
        let q = quotient_presentation(&solved.z1, &solved.b1)?;
        let class_reps = q
            .generators
            .iter()
            .map(|z| Cocycle {
                values: solved.table_values(&self.table.ring, self.table.order, z),
            })
            .collect();
        Ok(CohomologyGroup {
            group_order: self.order(),
            z1: solved.z1,
            b1: solved.b1,
            invariants: q.invariants,
            class_reps,
        })
    }
}

/// Pulls a cocycle on `G/N` (indexed by coset) back to `G`: `Z'_g = Z_{gN}`.
pub fn inflation(q: &QuotientGroup, cls: &Cocycle) -> Result<Cocycle> {
    if cls.values.len() != q.order() {
        return Err(Error::ShapeMismatch(format!(
            "cocycle has {} values, quotient has {} cosets",
            cls.values.len(),
            q.order()
        )));
    }
    for v in &cls.values {
        if !q.coefficients().contains(&v[..]) {
            return Err(Error::ValuesNotFixed);
        }
    }
    let values = (0..q.parent.order())
        .map(|h| cls.values[q.coset_of(h)])
        .collect();
    Ok(Cocycle { values })
}

/// Outcome of checking `0 -> H^1(G/N, M^N) -> H^1(G, M) -> H^1(N, M)` on one
/// instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub group_order: usize,
    pub normal_order: usize,
    pub h1_quotient: Vec<u64>,
    pub h1_group: Vec<u64>,
    /// `ker(res_N)` as a subgroup of `H^1(G, M)`.
    pub kernel_restriction: Vec<u64>,
    /// `Inf(H^1(G/N, M^N))` inside `H^1(G, M)`.
    pub image_inflation: Vec<u64>,
    pub inflation_injective: bool,
    pub exact_in_middle: bool,
}

impl ExactnessReport {
    pub fn holds(&self) -> bool {
        self.inflation_injective && self.exact_in_middle
    }
}

/// Both quotient and group cocycles live in coordinates on the parent's
/// generators (the quotient's generators are their cosets), so inflation is
/// the identity map on those coordinates.
pub fn check_inflation_restriction(
    g: &MatrixGroup,
    n: &MatrixGroup,
    m: &GModule,
) -> Result<ExactnessReport> {
    let q = QuotientGroup::new(g, n, m)?;
    let sq = q.solve()?;
    let table = table_for_group(g, m.full());
    let sg = solve(&table, LINEAR_BUDGET)?;

    if !sq.z1.is_subset_of(&sg.z1)? {
        return Err(Error::NotACocycle);
    }
    let inf_in_b1 = sq.z1.intersect(&sg.b1)?;
    let inflation_injective = inf_in_b1 == sq.b1;

    let n_indices: Vec<usize> = n
        .elements()
        .iter()
        .map(|x| g.index_of(x).expect("subgroup"))
        .collect();
    let ker_res = sg.local_for_subgroup(&table, &sg.z1, &n_indices);
    let image = sq.z1.sum(&sg.b1)?;
    let exact_in_middle = image == ker_res;

    Ok(ExactnessReport {
        group_order: g.order(),
        normal_order: n.order(),
        h1_quotient: quotient_presentation(&sq.z1, &sq.b1)?.invariants,
        h1_group: quotient_presentation(&sg.z1, &sg.b1)?.invariants,
        kernel_restriction: quotient_presentation(&ker_res, &sg.b1)?.invariants,
        image_inflation: quotient_presentation(&image, &sg.b1)?.invariants,
        inflation_injective,
        exact_in_middle,
    })
}
