//! Seeded sampling of subgroups of `GL2(Z/pZ)` and of their lifts to
//! `GL2(Z/p^2 Z)`.
//!
//! Every family draws from its own generator stream seeded by
//! `(seed, family name)`, so adding or resizing one family leaves the others
//! unchanged.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::cyclic_subgroups;
use crate::error::{Error, Result};
use crate::gl2::Gl2;
use crate::group::{gl2_order, MatrixGroup};
use crate::ring::Ring;

/// A group in the corpus together with the family that produced it.
#[derive(Debug, Clone)]
pub struct Sample {
    pub family: String,
    pub group: MatrixGroup,
}

/// Corpus sizes. The defaults give a few hundred groups per level at `p = 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleSizes {
    pub random_scalar: usize,
    pub random_diagonal: usize,
    pub random_borel: usize,
    pub random_subgroups: usize,
    pub conjugates: usize,
    /// Pairs of cyclic subgroups joined in the two-generated family; all
    /// pairs are used when there are at most this many.
    pub generated_pairs: usize,
    /// Base groups per family used for lifting.
    pub lift_bases: usize,
    /// Random lifts per base group (on top of the structured kernel slices).
    pub lifts_per_base: usize,
    pub cyclic_lifts: usize,
}

impl Default for SampleSizes {
    fn default() -> Self {
        SampleSizes {
            random_scalar: 400,
            random_diagonal: 60,
            random_borel: 60,
            random_subgroups: 300,
            conjugates: 200,
            generated_pairs: 16_000,
            lift_bases: 60,
            lifts_per_base: 4,
            cyclic_lifts: 200,
        }
    }
}

pub(crate) fn family_rng(seed: u64, family: &str) -> ChaCha8Rng {
    // FNV-1a over the family name, mixed into the user seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in family.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub fn random_element(ring: Ring, rng: &mut impl Rng) -> Gl2 {
    let m = ring.modulus() as i64;
    loop {
        let e: [i64; 4] = [0; 4].map(|_| rng.gen_range(0..m));
        if let Ok(g) = Gl2::new(ring, e[0], e[1], e[2], e[3]) {
            return g;
        }
    }
}

fn random_unit(ring: Ring, rng: &mut impl Rng) -> u32 {
    loop {
        let x = rng.gen_range(1..ring.modulus());
        if ring.is_unit(x) {
            return x;
        }
    }
}

fn random_diag(ring: Ring, rng: &mut impl Rng) -> Gl2 {
    let a = random_unit(ring, rng);
    let d = random_unit(ring, rng);
    Gl2::diag(ring, a as i64, d as i64).expect("unit diagonal")
}

/// Smallest primitive root modulo `p`.
pub fn primitive_root(ring: Ring) -> u32 {
    let f = ring.residue_field();
    (2..f.p())
        .find(|&g| f.unit_order(g) == Some(f.p() as u64 - 1))
        .expect("primitive root")
}

/// Companion matrix of `x^2 - t x + n` generating the multiplicative group of
/// `F_{p^2}` (first `(t, n)` in lexicographic order).
pub fn nonsplit_generator(ring: Ring) -> Gl2 {
    let f = ring.residue_field();
    let p = f.p();
    let target = (p as u64).pow(2) - 1;
    for t in 0..p {
        for n in 1..p {
            let c = Gl2::new(f, 0, -(n as i64), 1, t as i64).expect("unit det");
            if crate::analysis::element_order(&c) == target {
                return c;
            }
        }
    }
    unreachable!("F_p^2 has a primitive element")
}

fn sl2_generators(ring: Ring) -> Vec<Gl2> {
    vec![
        Gl2::unipotent(ring),
        Gl2::new(ring, 1, 0, 1, 1).expect("unit det"),
    ]
}

fn gl2_generators(ring: Ring) -> Vec<Gl2> {
    let mut g = sl2_generators(ring);
    let r = primitive_root(ring);
    g.push(Gl2::diag(ring, r as i64, 1).expect("unit"));
    g
}

fn divisors(x: u64) -> Vec<u64> {
    (1..=x).filter(|d| x.is_multiple_of(*d)).collect()
}

/// Accumulates distinct groups in insertion order.
struct Collector {
    seen: HashSet<Vec<u64>>,
    out: Vec<Sample>,
    cap: usize,
    cap_skips: usize,
}

impl Collector {
    fn new(cap: usize) -> Self {
        Collector {
            seen: HashSet::new(),
            out: Vec::new(),
            cap,
            cap_skips: 0,
        }
    }

    fn add(&mut self, family: &str, ring: Ring, gens: &[Gl2]) -> Option<&MatrixGroup> {
        match MatrixGroup::close(ring, gens, self.cap) {
            Ok(g) => {
                if self.seen.insert(g.canonical_key()) {
                    self.out.push(Sample {
                        family: family.to_string(),
                        group: g,
                    });
                    self.out.last().map(|s| &s.group)
                } else {
                    None
                }
            }
            Err(Error::CapExceeded { .. }) => {
                self.cap_skips += 1;
                None
            }
            Err(e) => panic!("sampling produced an invalid generator set: {e}"),
        }
    }
}

/// Corpus of subgroups of `GL2(F_p)`.
pub struct LevelOneCorpus {
    pub samples: Vec<Sample>,
    pub cap_skips: usize,
}

pub fn level_one(p: u32, seed: u64, sizes: &SampleSizes, cap: usize) -> Result<LevelOneCorpus> {
    let ring = Ring::new(p, 1)?;
    let mut c = Collector::new(cap);
    let units: Vec<i64> = (1..p as i64).collect();
    let sigma = Gl2::unipotent(ring);
    let w = Gl2::new(ring, 0, 1, 1, 0)?;

    // scalar-containing
    for &l in &units[1..] {
        c.add("scalar", ring, &[Gl2::scalar(ring, l)?]);
        c.add("scalar", ring, &[Gl2::scalar(ring, l)?, sigma]);
    }
    let mut rng = family_rng(seed, "scalar-random");
    for i in 0..sizes.random_scalar {
        let l = units[rng.gen_range(1..units.len())];
        let mut gens = vec![Gl2::scalar(ring, l)?, random_element(ring, &mut rng)];
        if i % 3 == 2 {
            gens.push(random_element(ring, &mut rng));
        }
        c.add("scalar-random", ring, &gens);
    }

    // split diagonal
    for &a in &units {
        for &d in &units {
            c.add("diagonal-cyclic", ring, &[Gl2::diag(ring, a, d)?]);
        }
    }
    let g = primitive_root(ring) as i64;
    c.add(
        "diagonal-full",
        ring,
        &[Gl2::diag(ring, g, 1)?, Gl2::diag(ring, 1, g)?],
    );
    let mut rng = family_rng(seed, "diagonal-random");
    for _ in 0..sizes.random_diagonal {
        let gens = [random_diag(ring, &mut rng), random_diag(ring, &mut rng)];
        c.add("diagonal-random", ring, &gens);
    }

    // monomial: normalizers of the split torus
    for &a in &units {
        for &d in &units {
            c.add("monomial", ring, &[Gl2::diag(ring, a, d)?, w]);
        }
    }

    // non-split torus
    let ns = nonsplit_generator(ring);
    let ns_order = (p as u64).pow(2) - 1;
    for d in divisors(ns_order) {
        c.add("nonsplit-torus", ring, &[ns.pow(ns_order / d)]);
    }

    // Borel-type
    c.add("unipotent", ring, &[sigma]);
    for &a in &units {
        for &d in &units {
            c.add("borel", ring, &[Gl2::diag(ring, a, d)?, sigma]);
        }
    }
    let mut rng = family_rng(seed, "borel-random");
    for _ in 0..sizes.random_borel {
        let gens = [
            random_diag(ring, &mut rng),
            random_diag(ring, &mut rng),
            sigma,
        ];
        c.add("borel-random", ring, &gens);
    }
    // upper triangular with a non-diagonalizable generator [[a,b],[0,a]]
    for &a in &units {
        c.add("borel-jordan", ring, &[Gl2::new(ring, a, 1, 0, a)?]);
    }

    c.add("sl2", ring, &sl2_generators(ring));
    c.add("gl2", ring, &gl2_generators(ring));

    let mut rng = family_rng(seed, "random");
    for _ in 0..sizes.random_subgroups {
        let k = rng.gen_range(1..=2);
        let gens: Vec<Gl2> = (0..k).map(|_| random_element(ring, &mut rng)).collect();
        c.add("random", ring, &gens);
    }

    // every subgroup <a, b> is the join of two cyclic subgroups
    let full = MatrixGroup::close(
        ring,
        &gl2_generators(ring),
        cap.max(gl2_order(ring) as usize),
    )?;
    let cyclic: Vec<Gl2> = cyclic_subgroups(&full)
        .iter()
        .map(|z| {
            z.generators()
                .first()
                .copied()
                .unwrap_or(Gl2::identity(ring))
        })
        .collect();
    let n = cyclic.len();
    let pairs = n * (n + 1) / 2;
    if pairs <= sizes.generated_pairs {
        for i in 0..n {
            for j in i..n {
                c.add("two-generated", ring, &[cyclic[i], cyclic[j]]);
            }
        }
    } else {
        let mut rng = family_rng(seed, "two-generated");
        for _ in 0..sizes.generated_pairs {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            c.add("two-generated", ring, &[cyclic[i], cyclic[j]]);
        }
    }

    let structured: Vec<Vec<Gl2>> = c
        .out
        .iter()
        .filter(|s| {
            s.family != "random" && s.family != "two-generated" && !s.family.ends_with("-random")
        })
        .map(|s| s.group.generators().to_vec())
        .collect();
    let mut rng = family_rng(seed, "conjugate");
    if !structured.is_empty() {
        for _ in 0..sizes.conjugates {
            let base = &structured[rng.gen_range(0..structured.len())];
            let x = random_element(ring, &mut rng);
            let gens: Vec<Gl2> = base.iter().map(|g| g.conjugate_by(&x)).collect();
            c.add("conjugate", ring, &gens);
        }
    }

    Ok(LevelOneCorpus {
        samples: c.out,
        cap_skips: c.cap_skips,
    })
}

/// Structured kernel slices `{I + pA : A in V}` given by spanning sets, one
/// or more per dimension 0 to 4.
pub fn kernel_slices() -> Vec<(&'static str, Vec<[u32; 4]>)> {
    vec![
        ("dim0", vec![]),
        ("dim1-e12", vec![[0, 1, 0, 0]]),
        ("dim1-e11", vec![[1, 0, 0, 0]]),
        ("dim1-scalar", vec![[1, 0, 0, 1]]),
        ("dim2-e11-e12", vec![[1, 0, 0, 0], [0, 1, 0, 0]]),
        ("dim2-e11-e22", vec![[1, 0, 0, 0], [0, 0, 0, 1]]),
        ("dim2-e12-e21", vec![[0, 1, 0, 0], [0, 0, 1, 0]]),
        ("dim2-scalar-e12", vec![[1, 0, 0, 1], [0, 1, 0, 0]]),
        ("dim3-borel", vec![[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
        (
            "dim3-traceless",
            vec![[1, 0, 0, 4], [0, 1, 0, 0], [0, 0, 1, 0]],
        ),
        (
            "dim4",
            vec![[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        ),
    ]
}

fn random_slice(p: u32, rng: &mut impl Rng) -> Vec<[u32; 4]> {
    let k = rng.gen_range(1..=2);
    (0..k)
        .map(|_| [0; 4].map(|_| rng.gen_range(0..p)))
        .collect()
}

pub struct LevelTwoCorpus {
    pub samples: Vec<Sample>,
    pub cap_skips: usize,
}

/// Lifts of level-one groups: generators lifted with `p`-multiples of noise
/// (zero noise for the first variant), joined with a kernel slice.
pub fn level_two(
    base: &[Sample],
    seed: u64,
    sizes: &SampleSizes,
    cap: usize,
) -> Result<LevelTwoCorpus> {
    let Some(first) = base.first() else {
        return Ok(LevelTwoCorpus {
            samples: Vec::new(),
            cap_skips: 0,
        });
    };
    let ring = first.group.ring().square();
    let p = ring.p();
    let mut c = Collector::new(cap);
    let slices = kernel_slices();

    // group families in first-seen order, take the first `lift_bases` of each
    let mut families: Vec<&str> = Vec::new();
    for s in base {
        if !families.contains(&s.family.as_str()) {
            families.push(&s.family);
        }
    }
    for fam in families {
        let name = format!("lift:{fam}");
        let mut rng = family_rng(seed, &name);
        let bases = base
            .iter()
            .filter(|s| s.family == fam)
            .take(sizes.lift_bases);
        for b in bases {
            let gens1 = b.group.generators();
            let lifted0: Vec<Gl2> = gens1.iter().map(|g| g.lift([0; 4])).collect();
            for (_, slice) in &slices {
                let mut gens = lifted0.clone();
                gens.extend(slice.iter().map(|a| Gl2::kernel_element(ring, *a)));
                c.add(&name, ring, &gens);
            }
            for _ in 0..sizes.lifts_per_base {
                let mut gens: Vec<Gl2> = gens1
                    .iter()
                    .map(|g| g.lift([0; 4].map(|_| rng.gen_range(0..p))))
                    .collect();
                if rng.gen_bool(0.5) {
                    gens.extend(
                        random_slice(p, &mut rng)
                            .iter()
                            .map(|a| Gl2::kernel_element(ring, *a)),
                    );
                }
                c.add(&name, ring, &gens);
            }
        }
    }
    Ok(LevelTwoCorpus {
        samples: c.out,
        cap_skips: c.cap_skips,
    })
}

/// Cyclic subgroups `<g>` of `GL2(Z/p^2 Z)` for seeded random `g`.
pub fn random_cyclic_lifts(p: u32, seed: u64, count: usize, cap: usize) -> Result<Vec<Sample>> {
    let ring = Ring::new(p, 2)?;
    let mut rng = family_rng(seed, "cyclic-lift");
    let mut c = Collector::new(cap);
    let mut attempts = 0;
    while c.out.len() < count && attempts < 50 * count.max(1) {
        attempts += 1;
        let g = random_element(ring, &mut rng);
        c.add("cyclic-lift", ring, &[g]);
    }
    Ok(c.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    #[test]
    fn nonsplit_generator_is_irreducible() {
        let r = Ring::new(5, 1).unwrap();
        let c = nonsplit_generator(r);
        let g = MatrixGroup::close(r, &[c], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 24);
        assert!(crate::analysis::invariant_line_vectors(&g).is_empty());
    }

    #[test]
    fn sl2_and_gl2_orders() {
        let r = Ring::new(7, 1).unwrap();
        let s = MatrixGroup::close(r, &sl2_generators(r), DEFAULT_CAP).unwrap();
        assert_eq!(s.order(), 336);
        let g = MatrixGroup::close(r, &gl2_generators(r), DEFAULT_CAP).unwrap();
        assert_eq!(g.order() as u64, crate::group::gl2_order(r));
    }

    #[test]
    fn corpus_is_deterministic_and_distinct() {
        let sizes = SampleSizes {
            random_scalar: 20,
            random_subgroups: 20,
            conjugates: 10,
            ..SampleSizes::default()
        };
        let a = level_one(5, 7, &sizes, DEFAULT_CAP).unwrap();
        let b = level_one(5, 7, &sizes, DEFAULT_CAP).unwrap();
        let ka: Vec<_> = a.samples.iter().map(|s| s.group.canonical_key()).collect();
        let kb: Vec<_> = b.samples.iter().map(|s| s.group.canonical_key()).collect();
        assert_eq!(ka, kb);
        let distinct: HashSet<_> = ka.iter().collect();
        assert_eq!(distinct.len(), ka.len());
    }
}
