use proptest::prelude::*;

use locdiv::analysis::{cyclic_subgroups, reduction_split};
use locdiv::cohomology::{
    check_inflation_restriction, is_coboundary, is_cocycle, restriction, Cocycle,
};
use locdiv::groupfile::parse_group_file;
use locdiv::linalg::{howell_form, image, kernel, quotient_invariants};
use locdiv::verifier::evaluate;
use locdiv::{Cohomology, Error, GModule, Gl2, MatrixGroup, Ring, RingMatrix, Submodule, REGISTRY};

const SMALL_CAP: usize = 3000;

fn ring() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just(Ring::new(5, 1).unwrap()),
        Just(Ring::new(7, 1).unwrap()),
        Just(Ring::new(5, 2).unwrap()),
    ]
}

fn matrix_in(r: Ring, max_rows: usize, max_cols: usize) -> impl Strategy<Value = RingMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(rows, cols)| {
        proptest::collection::vec(0..r.modulus(), rows * cols)
            .prop_map(move |data| RingMatrix::from_data(r, rows, cols, data))
    })
}

fn element_in(r: Ring) -> impl Strategy<Value = Gl2> {
    let m = r.modulus() as i64;
    [0..m, 0..m, 0..m, 0..m]
        .prop_filter_map("singular", move |[a, b, c, d]| Gl2::new(r, a, b, c, d).ok())
}

/// A subgroup generated by one or two random elements, within `SMALL_CAP`.
fn group() -> impl Strategy<Value = MatrixGroup> {
    ring().prop_flat_map(|r| {
        proptest::collection::vec(element_in(r), 1..=2).prop_filter_map("too large", move |gens| {
            match MatrixGroup::close(r, &gens, SMALL_CAP) {
                Ok(g) => Some(g),
                Err(Error::CapExceeded { .. }) => None,
                Err(e) => panic!("{e}"),
            }
        })
    })
}

fn span(r: Ring, m: &RingMatrix) -> Submodule {
    Submodule::new(r, m.cols(), m.row_vecs())
}

fn all_vectors(r: Ring, k: usize) -> Vec<Vec<u32>> {
    let m = r.modulus();
    (0..m.pow(k as u32))
        .map(|mut code| {
            (0..k)
                .map(|_| {
                    let x = code % m;
                    code /= m;
                    x
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn howell_form_is_idempotent_and_keeps_the_span(m in ring().prop_flat_map(|r| matrix_in(r, 5, 4))) {
        let h = howell_form(&m);
        prop_assert_eq!(&howell_form(&h), &h);
        let r = m.ring();
        prop_assert_eq!(span(r, &m), Submodule::new(r, m.cols(), h.row_vecs()));
    }

    #[test]
    fn image_and_kernel_orders_multiply_to_the_domain(m in ring().prop_flat_map(|r| matrix_in(r, 3, 3))) {
        let r = m.ring();
        let k = kernel(&m);
        let im = image(&m);
        prop_assert_eq!(k.order() * im.order(), (r.modulus() as u64).pow(m.cols() as u32));
        for v in k.basis() {
            prop_assert!(m.apply(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn kernel_matches_enumeration(m in matrix_in(Ring::new(5, 2).unwrap(), 2, 2)) {
        let r = m.ring();
        let zeros = all_vectors(r, m.cols())
            .into_iter()
            .filter(|v| m.apply(v).iter().all(|&x| x == 0))
            .count() as u64;
        prop_assert_eq!(kernel(&m).order(), zeros);
    }

    #[test]
    fn quotient_invariants_multiply_to_the_index(
        (a, b) in ring().prop_flat_map(|r| (matrix_in(r, 3, 3), matrix_in(r, 3, 3)))
            .prop_filter("same width", |(a, b)| a.cols() == b.cols())
    ) {
        let r = a.ring();
        let s = span(r, &a);
        let t = s.intersect(&span(r, &b)).unwrap();
        let inv = quotient_invariants(&s, &t).unwrap();
        prop_assert_eq!(inv.iter().product::<u64>(), s.order() / t.order());
        prop_assert!(inv.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn submodules_form_a_modular_lattice(
        (a, b, c) in ring().prop_flat_map(|r| (matrix_in(r, 2, 3), matrix_in(r, 2, 3), matrix_in(r, 2, 3)))
            .prop_filter("same width", |(a, b, c)| a.cols() == b.cols() && b.cols() == c.cols())
    ) {
        let r = a.ring();
        let (a, b, c) = (span(r, &a), span(r, &b), span(r, &c));
        let sum = a.sum(&b).unwrap();
        let meet = a.intersect(&b).unwrap();
        prop_assert_eq!(sum.order() * meet.order(), a.order() * b.order());
        prop_assert!(meet.is_subset_of(&a).unwrap() && a.is_subset_of(&sum).unwrap());
        // modular law with a <= a + c
        let ac = a.sum(&c).unwrap();
        let lhs = a.sum(&b.intersect(&ac).unwrap()).unwrap();
        let rhs = sum.intersect(&ac).unwrap();
        prop_assert!(lhs.equal(&rhs).unwrap());
    }

    #[test]
    fn closure_is_a_group(g in group()) {
        let r = g.ring();
        let gl2 = locdiv::group::gl2_order(r);
        prop_assert_eq!(gl2 % g.order() as u64, 0);
        for s in g.generators() {
            prop_assert!(g.contains(s));
            prop_assert!(g.contains(&s.inv()));
            prop_assert!(s.mul(&s.inv()).is_identity());
        }
        let e = g.elements();
        for i in (0..e.len()).step_by(1 + e.len() / 20) {
            for j in (0..e.len()).step_by(1 + e.len() / 20) {
                prop_assert!(g.contains(&e[i].mul(&e[j])));
            }
        }
    }

    #[test]
    fn cocycles_split_into_coboundaries_and_classes(g in group()) {
        let m = GModule::new(g.ring());
        let coh = Cohomology::new(&g, &m).unwrap();
        let h = coh.h1().unwrap();
        prop_assert_eq!(coh.z1().order(), coh.b1().order() * h.order());
        prop_assert!(coh.b1().is_subset_of(coh.z1()).unwrap());
        if g.order() <= 200 {
            for rep in &h.class_reps {
                prop_assert!(is_cocycle(&g, rep));
            }
        }
        let loc = coh.h1_loc().unwrap();
        prop_assert_eq!(h.order() % loc.order(), 0);
    }

    #[test]
    fn restriction_preserves_cocycles_and_coboundaries(
        (g, v, pick) in group().prop_flat_map(|g| {
            let m = g.ring().modulus();
            (Just(g), [0..m, 0..m], any::<prop::sample::Index>())
        })
    ) {
        prop_assume!(g.order() <= 400);
        let cyc = cyclic_subgroups(&g);
        let c = &cyc[pick.index(cyc.len())];
        let b = Cocycle::coboundary(&g, v);
        let rb = restriction(&b, &g, c).unwrap();
        prop_assert!(is_coboundary(c, &rb));
        let h = Cohomology::new(&g, &GModule::new(g.ring())).unwrap().h1().unwrap();
        for rep in &h.class_reps {
            let rz = restriction(rep, &g, c).unwrap();
            prop_assert!(is_cocycle(c, &rz));
        }
    }

    #[test]
    fn inflation_restriction_is_exact_for_the_reduction_kernel(g in group()) {
        prop_assume!(g.ring().n() == 2);
        let (_, h) = reduction_split(&g).unwrap();
        let rep = check_inflation_restriction(&g, &h, &GModule::new(g.ring())).unwrap();
        prop_assert!(rep.holds(), "{:?}", rep);
    }

    #[test]
    fn literals_and_group_files_round_trip(g in group()) {
        let r = g.ring();
        for s in g.generators() {
            prop_assert_eq!(Gl2::parse(&s.to_string()).unwrap(), *s);
        }
        let text = format!("mod {}^{}\n{}\n", r.p(), r.n(), g.generator_literals().join("\n"));
        let d = parse_group_file(&text).unwrap();
        prop_assert_eq!(d.ring, r);
        prop_assert_eq!(&d.generators, &g.generators().to_vec());
    }

    #[test]
    fn evaluation_is_deterministic(g in group(), pick in 0..REGISTRY.len()) {
        let id = REGISTRY[pick];
        let a = evaluate(id, "sample", &g).unwrap();
        let b = evaluate(id, "sample", &g).unwrap();
        prop_assert_eq!(a.applicable, b.applicable);
        prop_assert_eq!(a.failures, b.failures);
        prop_assert_eq!(a.flagged, b.flagged);
    }
}
