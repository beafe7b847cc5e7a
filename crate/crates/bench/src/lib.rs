//! Groups shared by the benchmarks.

use locdiv::{Gl2, MatrixGroup, Ring, DEFAULT_CAP};

/// Named groups of increasing size, from a cyclic group mod 5 to a group
/// of order 1875 mod 25.
pub fn fixtures() -> Vec<(&'static str, MatrixGroup)> {
    let parse = |r: Ring, lits: &[&str]| {
        let gens: Vec<Gl2> = lits
            .iter()
            .map(|s| Gl2::parse(&format!("{s} mod {}", r.modulus())).expect("literal"))
            .collect();
        MatrixGroup::close(r, &gens, DEFAULT_CAP).expect("within cap")
    };
    let f5 = Ring::new(5, 1).expect("ring");
    let z25 = Ring::new(5, 2).expect("ring");
    vec![
        ("unipotent_mod5", parse(f5, &["[[1,1],[0,1]]"])),
        (
            "borel_mod5",
            parse(f5, &["[[2,0],[0,1]]", "[[1,0],[0,2]]", "[[1,1],[0,1]]"]),
        ),
        (
            "gl2_mod5",
            parse(f5, &["[[2,0],[0,1]]", "[[0,1],[4,0]]", "[[1,1],[0,1]]"]),
        ),
        (
            "borel_lift_mod25",
            parse(z25, &["[[16,10],[0,9]]", "[[21,1],[5,16]]"]),
        ),
        (
            "irreducible_lift_mod25",
            parse(z25, &["[[1,1],[2,3]]", "[[6,0],[0,1]]"]),
        ),
    ]
}
