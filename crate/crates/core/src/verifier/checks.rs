//! The check registry and the per-group evaluation of each statement.

use serde_json::json;

use super::dictionary::{
    first_layer_is_cyclotomic, gamma_subgroup, h_prime, h_prime_via_unipotent,
};
use super::micro;
use super::{CorpusKind, Outcome, Profile, Sample};
use crate::analysis::{diagonal_part, element_order, is_normal, p_sylow, ClassTag};
use crate::cohomology::{
    check_inflation_restriction, cyclic_h1, cyclic_h1_on, fixed_submodule, h1_loc, Cohomology,
    GModule, QuotientGroup,
};
use crate::error::{Error, Result};
use crate::gl2::Gl2;
use crate::group::{MatrixGroup, DEFAULT_CAP};

pub(crate) struct Check {
    pub id: &'static str,
    pub statement: &'static str,
    pub corpora: &'static [CorpusKind],
    pub eval: fn(&Sample, &Profile) -> Outcome,
    /// Group-independent sub-checks, run once per report.
    pub extra: Option<fn(u32) -> Outcome>,
    pub caveat: Option<&'static str>,
}

const BOTH: &[CorpusKind] = &[CorpusKind::LevelOne, CorpusKind::LevelTwo];
const LIFTS: &[CorpusKind] = &[CorpusKind::LevelTwo];
const CYCLIC: &[CorpusKind] = &[CorpusKind::Cyclic];

const ABSTRACT_CAVEAT: &str = "hypotheses are checked on abstract subgroups; a flagged group \
    need not occur as the Galois image of an elliptic curve, so a flag does not contradict the \
    statement";

static CHECKS: &[Check] = &[
    Check {
        id: "lemma-2.3",
        statement: "a nontrivial scalar in G1 forces H^1(Gn, (Z/p^n)^2) = 0",
        corpora: BOTH,
        eval: scalar_vanishing,
        extra: None,
        caveat: None,
    },
    Check {
        id: "cor-2.4",
        statement: "a non-cyclic diagonal part G1 ∩ D forces H^1 = 0",
        corpora: BOTH,
        eval: diagonal_noncyclic,
        extra: None,
        caveat: None,
    },
    Check {
        id: "lemma-2.5",
        statement: "H^1(G2) != 0 forces G1 cyclic diagonal (two lines) or G1 = <rho, sigma> (one line)",
        corpora: LIFTS,
        eval: classification,
        extra: Some(classification_identities),
        caveat: None,
    },
    Check {
        id: "lemma-2.6",
        statement: "dim H != 2 forces H^1_loc(G2) = 0",
        corpora: LIFTS,
        eval: kernel_dimension,
        extra: None,
        caveat: None,
    },
    Check {
        id: "lemma-3.1",
        statement: "H^1 of a cyclic group is ker(N) / Im(delta - 1)",
        corpora: CYCLIC,
        eval: cyclic_formula,
        extra: None,
        caveat: None,
    },
    Check {
        id: "prop-3.2",
        statement: "H^1_loc(G2) != 0, G1 cyclic and p | |det G2| force a fixed point of order p and K1 = k(zeta_p)",
        corpora: LIFTS,
        eval: prop_cyclic,
        extra: Some(micro::lifted_diagonal_minus_identity),
        caveat: Some(ABSTRACT_CAVEAT),
    },
    Check {
        id: "prop-3.3",
        statement: "H^1_loc(G2) != 0, G1 non-cyclic and p | |det G2| force a fixed point of order p and K1 = k'(zeta_p)",
        corpora: LIFTS,
        eval: prop_noncyclic,
        extra: None,
        caveat: Some(ABSTRACT_CAVEAT),
    },
    Check {
        id: "main-thm-search",
        statement: "no group with p | |det G2|, H^1_loc(G2) != 0 and no G1-fixed vector",
        corpora: LIFTS,
        eval: main_search,
        extra: None,
        caveat: Some(ABSTRACT_CAVEAT),
    },
    Check {
        id: "thm-2.2",
        statement: "no G1-invariant line forces H^1(Gn) = 0",
        corpora: BOTH,
        eval: no_invariant_line,
        extra: None,
        caveat: None,
    },
];

/// Registered check ids, in the order `verify --all` runs them.
pub static REGISTRY: [&str; 9] = [
    "lemma-2.3",
    "cor-2.4",
    "lemma-2.5",
    "lemma-2.6",
    "lemma-3.1",
    "prop-3.2",
    "prop-3.3",
    "main-thm-search",
    "thm-2.2",
];

pub(crate) fn lookup(id: &str) -> Result<&'static Check> {
    CHECKS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

fn level_key(s: &Sample) -> &'static str {
    if s.group.ring().n() == 1 {
        "level1"
    } else {
        "level2"
    }
}

fn vanishing(
    s: &Sample,
    pr: &Profile,
    applies: bool,
    why: &str,
    extra: serde_json::Value,
) -> Outcome {
    if !applies {
        return Outcome::skip();
    }
    let mut o = Outcome::tested();
    o.count(level_key(s));
    if !pr.h1.is_empty() {
        o.fail(
            format!("H^1 nonzero although {why}"),
            json!({ "h1": pr.h1, "detail": extra }),
        );
    }
    o
}

fn scalar_vanishing(s: &Sample, pr: &Profile) -> Outcome {
    let scalar = pr.g1_scalar.map(|g| g.literal());
    vanishing(
        s,
        pr,
        scalar.is_some(),
        "G1 contains a nontrivial scalar",
        json!({ "scalar": scalar }),
    )
}

fn diagonal_noncyclic(s: &Sample, pr: &Profile) -> Outcome {
    let gd = diagonal_part(&pr.g1).order();
    vanishing(
        s,
        pr,
        !pr.gd_cyclic,
        "the diagonal part is not cyclic",
        json!({ "gd_order": gd }),
    )
}

fn no_invariant_line(s: &Sample, pr: &Profile) -> Outcome {
    vanishing(
        s,
        pr,
        pr.lines.is_empty(),
        "G1 has no invariant line",
        json!({ "g1_order": pr.g1.order() }),
    )
}

fn classification_identities(p: u32) -> Outcome {
    micro::merge(micro::jordan_power(p), micro::borel_commutator(p))
}

fn classification(_s: &Sample, pr: &Profile) -> Outcome {
    if pr.h1.is_empty() {
        return Outcome::skip();
    }
    let mut o = Outcome::tested();
    let cls = &pr.classification;
    let p = pr.g1.ring().p() as usize;
    let base = json!({
        "h1": pr.h1,
        "g1_order": pr.g1.order(),
        "lines": pr.lines.len(),
        "tag": cls.tag,
    });
    match cls.tag {
        ClassTag::TwoLinesDiagonalCyclic => {
            o.count("case:two-lines");
            if !cls.cyclic {
                o.fail("two invariant lines but G1 is not cyclic", base);
            }
        }
        ClassTag::OneLineBorel => {
            o.count("case:one-line");
            let (Some(rho), Some(sigma)) = (cls.rho, cls.sigma) else {
                o.fail("one invariant line but no (rho, sigma) generators", base);
                return o;
            };
            let conj = cls.conjugated(&pr.g1);
            let ring = conj.ring();
            let generated =
                MatrixGroup::close(ring, &[rho, sigma], DEFAULT_CAP).expect("subgroup of GL2(F_p)");
            if !generated.same_elements(&conj) {
                o.fail("rho and sigma do not generate G1", base.clone());
            }
            let gd = diagonal_part(&conj);
            if conj.order() != p * gd.order() {
                o.fail(
                    "|G1| / |G_D| != p",
                    json!({ "g1": conj.order(), "gd": gd.order(), "base": base }),
                );
            }
            if element_order(&rho) as usize != gd.order() {
                o.fail("rho does not generate G_D", base.clone());
            }
            let gd_normal = is_normal(&gd, &conj).expect("G_D is a subgroup");
            if gd_normal != rho.is_identity() {
                o.fail(
                    "normality of G_D differs from rho = I",
                    json!({ "gd_normal": gd_normal, "rho": rho.literal(), "base": base }),
                );
            }
        }
        // every line is stable under the trivial group, which is case (i) with rho = I
        ClassTag::ManyLinesScalarish if pr.g1.order() == 1 => o.count("case:trivial-g1"),
        _ => o.fail(
            "H^1 nonzero but G1 has neither one nor two invariant lines",
            base,
        ),
    }
    o
}

fn kernel_dimension(s: &Sample, pr: &Profile) -> Outcome {
    let g = &s.group;
    let Some(d) = pr.dim_h else {
        return Outcome::skip();
    };
    if d == 2 {
        let mut o = Outcome::skip();
        o.count("excluded:dim2");
        return o;
    }
    let mut o = Outcome::tested();
    o.count(format!("dim{d}"));
    if !pr.h1_loc.is_empty() {
        // restriction to the p-Sylow is injective on H^1_loc
        let sylow = p_sylow(g).map(|s| {
            let h = h1_loc(&s.subgroup, &GModule::new(g.ring()));
            json!({ "order": s.subgroup.order(), "h1_loc": h.map(|c| c.invariants).ok() })
        });
        o.fail(
            "H^1_loc nonzero with dim H != 2",
            json!({ "dim_h": d, "h1": pr.h1, "h1_loc": pr.h1_loc, "sylow": sylow.ok() }),
        );
    }
    o
}

fn cyclic_formula(s: &Sample, pr: &Profile) -> Outcome {
    let g = &s.group;
    let delta = g
        .generators()
        .first()
        .copied()
        .unwrap_or_else(|| Gl2::identity(g.ring()));
    let mut o = Outcome::tested();
    o.count(level_key(s));
    match cyclic_h1(&delta, &GModule::new(g.ring())) {
        Ok(c) if c.invariants == pr.h1 => {}
        Ok(c) => o.fail(
            "engine and norm formula disagree",
            json!({ "engine": pr.h1, "formula": c.invariants }),
        ),
        Err(e) => o.fail("error", json!({ "error": e.to_string() })),
    }
    if !pr.h1_loc.is_empty() {
        o.fail(
            "H^1_loc of a cyclic group is nonzero",
            json!({ "h1_loc": pr.h1_loc }),
        );
    }
    o
}

/// An element of `g` generating `g / n` when that quotient is cyclic, with
/// the quotient order.
fn cyclic_quotient_generator(g: &MatrixGroup, n: &MatrixGroup) -> Option<(Gl2, u64)> {
    let q = (g.order() / n.order()) as u64;
    g.elements().iter().find_map(|x| {
        let mut y = *x;
        let mut k = 1;
        while !n.contains(&y) {
            y = y.mul(x);
            k += 1;
        }
        (k == q).then_some((*x, q))
    })
}

fn exactness(o: &mut Outcome, g: &MatrixGroup, n: &MatrixGroup, label: &str) {
    match check_inflation_restriction(g, n, &GModule::new(g.ring())) {
        Ok(r) if r.holds() => o.count(format!("exact:{label}")),
        Ok(r) => o.fail(
            format!("inflation-restriction not exact for {label}"),
            serde_json::to_value(r).expect("serializable"),
        ),
        Err(e) => o.fail("error", json!({ "error": e.to_string(), "at": label })),
    }
}

fn prop_cyclic(s: &Sample, pr: &Profile) -> Outcome {
    let g2 = &s.group;
    let mut o = Outcome::skip();

    if pr.det_hypothesis && !pr.h1_loc.is_empty() && pr.g1_cyclic {
        o.applicable = true;
        o.count("hypotheses_met");
        let data = json!({ "h1_loc": pr.h1_loc, "g1_order": pr.g1.order(), "dim_h": pr.dim_h });
        if !pr.g1_fixed_vector {
            o.flag("no G1-fixed vector of order p", data.clone());
        }
        if !first_layer_is_cyclotomic(&pr.g1).unwrap_or(false) {
            o.flag("det is not injective on G1", data);
        }
    }

    // Proof mechanics: G1 cyclic, diagonalizable, no eigenvalue 1.
    if !(pr.g1_cyclic && pr.lines.len() == 2 && !pr.g1_fixed_vector) {
        return o;
    }
    o.applicable = true;
    o.count("mechanics");
    let ring = g2.ring();
    let g1_order = pr.g1.order() as u64;
    let Some(delta) = g2
        .elements()
        .iter()
        .find(|x| element_order(&x.reduce()) == g1_order)
        .copied()
    else {
        o.fail("no lift of a generator of G1", json!({}));
        return o;
    };
    let d = delta.minus_identity();
    let det = ring.sub(
        ring.mul(d.get(0, 0), d.get(1, 1)),
        ring.mul(d.get(0, 1), d.get(1, 0)),
    );
    if !ring.is_unit(det) {
        o.fail(
            "lift minus identity is not invertible",
            json!({ "delta": delta.literal() }),
        );
    }
    let gamma = gamma_subgroup(g2);
    let m = GModule::new(ring);
    let fixed = fixed_submodule(&gamma, &m);
    if fixed.map(&d) != fixed {
        o.fail(
            "Im(delta - 1) differs from the gamma-fixed module",
            json!({ "delta": delta.literal(), "fixed_order": fixed.order() }),
        );
    }
    match cyclic_quotient_generator(g2, &gamma) {
        Some((gen, order)) => {
            o.count("mechanics:quotient_cyclic");
            let formula = cyclic_h1_on(&gen, order, &fixed);
            let engine = QuotientGroup::new(g2, &gamma, &m).and_then(|q| q.h1());
            match (formula, engine) {
                (Ok(f), Ok(e)) => {
                    if !f.is_empty() || !e.invariants.is_empty() {
                        o.fail(
                            "inflation term does not vanish",
                            json!({ "formula": f, "engine": e.invariants, "quotient_order": order }),
                        );
                    }
                }
                (Err(e), _) | (_, Err(e)) => o.fail("error", json!({ "error": e.to_string() })),
            }
        }
        None => o.count("mechanics:quotient_not_cyclic"),
    }
    exactness(&mut o, g2, &gamma, "gamma");
    o
}

fn prop_noncyclic(s: &Sample, pr: &Profile) -> Outcome {
    let g2 = &s.group;
    let ring = g2.ring();
    let p = ring.p() as usize;
    let cls = &pr.classification;
    let mut o = Outcome::skip();

    if pr.det_hypothesis && !pr.h1_loc.is_empty() && !pr.g1_cyclic {
        o.applicable = true;
        o.count("hypotheses_met");
        let data = json!({ "h1_loc": pr.h1_loc, "g1_order": pr.g1.order(), "tag": cls.tag });
        let lambda1_is_one = cls.rho.map(|r| r.entries()[0] == 1);
        if !pr.g1_fixed_vector || lambda1_is_one != Some(true) {
            o.flag("no G1-fixed vector of order p", data.clone());
        }
        if let Some(rho) = cls.rho {
            let ord = element_order(&rho);
            let f = rho.ring();
            let injective = (1..ord).all(|k| f.pow(rho.det(), k) != 1);
            if !injective {
                o.flag("det is not injective on <rho>", data);
            }
        }
    }

    if cls.tag != ClassTag::OneLineBorel || cls.sigma.is_none() {
        return o;
    }
    o.applicable = true;
    o.count("mechanics");
    let basis = cls.basis_change;
    let [b0, _, b2, _] = basis.entries();
    let p1 = [b0, b2];
    let sigma = basis.mul(&Gl2::unipotent(basis.ring())).mul(&basis.inv());
    let unipotent = MatrixGroup::close(pr.g1.ring(), &[sigma], DEFAULT_CAP).expect("order p");
    if !is_normal(&unipotent, &pr.g1).unwrap_or(false) {
        o.fail(
            "<sigma> is not normal in G1",
            json!({ "sigma": sigma.literal() }),
        );
    }

    let hp = h_prime(g2, p1);
    let alt = h_prime_via_unipotent(g2, &unipotent);
    if !hp.same_elements(&alt) {
        o.fail(
            "the two descriptions of H' differ",
            json!({ "fixing_p1": hp.order(), "over_sigma": alt.order() }),
        );
    }
    if !is_normal(&hp, g2).unwrap_or(false) {
        o.fail(
            "H' is not normal in G2",
            json!({ "h_prime_order": hp.order() }),
        );
    }
    let base = json!({
        "h_prime_order": hp.order(),
        "dim_h": pr.dim_h,
        "h1_loc": pr.h1_loc,
    });
    if hp.order() != p * p {
        o.count("mechanics:h_prime_order_mismatch");
        o.flag("|H'| != p^2 under the subgroup model", base);
        return o;
    }
    let h_cap_hp = hp
        .elements()
        .iter()
        .filter(|x| x.reduce().is_identity())
        .count();
    if h_cap_hp != p {
        o.count("mechanics:intersection_mismatch");
        o.flag(
            "H ∩ H' is not of order p",
            json!({ "intersection": h_cap_hp, "base": base }),
        );
        return o;
    }
    o.count("mechanics:h_prime_model_ok");

    let m = GModule::new(ring);
    match Cohomology::new(&hp, &m).and_then(|c| c.h1_loc()) {
        Ok(l) if l.is_trivial() => {}
        Ok(l) => o.fail("H^1_loc(H') is nonzero", json!({ "h1_loc": l.invariants })),
        Err(e) => o.fail("error", json!({ "error": e.to_string() })),
    }
    exactness(&mut o, g2, &hp, "h_prime");

    let fixed = fixed_submodule(&hp, &m);
    if fixed.is_zero() || fixed.basis().len() != 1 {
        o.count("mechanics:fixed_module_not_cyclic");
        return o;
    }
    let f = pr.g1.ring();
    let eigen = |g: &Gl2| -> u32 {
        let w = g.reduce().apply(p1);
        if p1[0] != 0 {
            f.mul(w[0], f.inv(p1[0]).expect("unit"))
        } else {
            f.mul(w[1], f.inv(p1[1]).expect("unit"))
        }
    };
    let mut nontrivial = false;
    for g in g2.generators() {
        if eigen(g) != 1 {
            nontrivial = true;
            if fixed.map(&g.minus_identity()) != fixed {
                o.fail(
                    "delta - 1 is not surjective on the H'-fixed module",
                    json!({ "delta": g.literal(), "fixed_order": fixed.order() }),
                );
            }
        }
    }
    if !nontrivial {
        return o;
    }
    o.count("mechanics:surjectivity");
    if let Some((gen, order)) = cyclic_quotient_generator(g2, &hp) {
        o.count("mechanics:quotient_cyclic");
        match cyclic_h1_on(&gen, order, &fixed) {
            Ok(inv) if inv.is_empty() => {}
            Ok(inv) => o.fail(
                "inflation term does not vanish",
                json!({ "h1": inv, "quotient_order": order }),
            ),
            Err(e) => o.fail("error", json!({ "error": e.to_string() })),
        }
    } else {
        o.count("mechanics:quotient_not_cyclic");
    }
    o
}

fn main_search(_s: &Sample, pr: &Profile) -> Outcome {
    if !pr.det_hypothesis {
        let mut o = Outcome::skip();
        o.count("excluded:det_hypothesis");
        return o;
    }
    let mut o = Outcome::tested();
    if let Some(d) = pr.dim_h {
        o.count(format!("dim{d}"));
    }
    if pr.h1_loc.is_empty() {
        return o;
    }
    o.count("h1_loc_nonzero");
    if !pr.g1_fixed_vector {
        o.flag(
            "possibly non-realizable: H^1_loc != 0 without a G1-fixed vector",
            json!({
                "h1": pr.h1,
                "h1_loc": pr.h1_loc,
                "g1_order": pr.g1.order(),
                "dim_h": pr.dim_h,
                "tag": pr.classification.tag,
            }),
        );
    }
    o
}
