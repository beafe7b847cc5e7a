//! Exhaustive checks of the matrix identities used in the proofs.

use serde_json::json;

use super::Outcome;
use crate::analysis::commutator;
use crate::gl2::Gl2;
use crate::ring::Ring;

/// `[[a,b],[0,a]]^(p-1) = [[1, (p-1) a^(p-2) b],[0,1]]` for all `a, b != 0`.
pub(crate) fn jordan_power(p: u32) -> Outcome {
    let mut o = Outcome::skip();
    let Ok(r) = Ring::new(p, 1) else {
        return o;
    };
    for a in 1..p {
        for b in 1..p {
            let g = Gl2::new(r, a as i64, b as i64, 0, a as i64).expect("unit");
            let lhs = g.pow(p as u64 - 1);
            let top = r.mul(r.mul(p - 1, r.pow(a, p as u64 - 2)), b);
            let rhs = Gl2::new(r, 1, top as i64, 0, 1).expect("unit");
            o.count("identity:jordan_power");
            if lhs != rhs {
                o.fail(
                    "jordan power identity",
                    json!({ "a": a, "b": b, "lhs": lhs.literal(), "rhs": rhs.literal() }),
                );
            }
        }
    }
    o
}

/// `d g d^-1 g^-1 = [[1, (d - a) b' / (d d')],[0,1]]` for `g = diag(a, d)` and
/// `delta = [[a', b'],[0, d']]`, over all unit parameters.
pub(crate) fn borel_commutator(p: u32) -> Outcome {
    let mut o = Outcome::skip();
    let Ok(r) = Ring::new(p, 1) else {
        return o;
    };
    for a in 1..p {
        for d in 1..p {
            let g = Gl2::diag(r, a as i64, d as i64).expect("unit");
            for a2 in 1..p {
                for d2 in 1..p {
                    for b2 in 1..p {
                        let delta = Gl2::new(r, a2 as i64, b2 as i64, 0, d2 as i64).expect("unit");
                        let lhs = commutator(&delta, &g);
                        let den = r.inv(r.mul(d, d2)).expect("unit");
                        let top = r.mul(r.mul(r.sub(d, a), b2), den);
                        let rhs = Gl2::new(r, 1, top as i64, 0, 1).expect("unit");
                        o.count("identity:borel_commutator");
                        if lhs != rhs {
                            o.fail(
                                "commutator identity",
                                json!({ "a": a, "d": d, "a2": a2, "b2": b2, "d2": d2 }),
                            );
                        }
                    }
                }
            }
        }
    }
    o
}

/// `diag(l1, l2) + p (mu_ij) - I` is invertible mod `p^2` whenever
/// `l1, l2 != 1` mod `p`, for all `mu`.
pub(crate) fn lifted_diagonal_minus_identity(p: u32) -> Outcome {
    let mut o = Outcome::skip();
    let Ok(r) = Ring::new(p, 2) else {
        return o;
    };
    for l1 in 2..p {
        for l2 in 2..p {
            for code in 0..p.pow(4) {
                let mu = [code % p, code / p % p, code / p / p % p, code / p / p / p];
                let x = [l1 + p * mu[0], p * mu[1], p * mu[2], l2 + p * mu[3]];
                let g = Gl2::new(r, x[0] as i64, x[1] as i64, x[2] as i64, x[3] as i64)
                    .expect("unit diagonal mod p");
                let m = g.minus_identity();
                let det = r.sub(
                    r.mul(m.get(0, 0), m.get(1, 1)),
                    r.mul(m.get(0, 1), m.get(1, 0)),
                );
                o.count("identity:lift_minus_identity_invertible");
                if !r.is_unit(det) {
                    o.fail(
                        "lifted diagonal minus identity is singular",
                        json!({ "lambda": [l1, l2], "mu": mu }),
                    );
                }
            }
        }
    }
    o
}

/// Case and failure counts of one identity.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IdentityCount {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
}

/// Runs every identity exhaustively at `p`.
pub fn identities(p: u32) -> Vec<IdentityCount> {
    type Run = (&'static str, fn(u32) -> Outcome);
    let runs: [Run; 3] = [
        ("jordan_power", jordan_power),
        ("borel_commutator", borel_commutator),
        (
            "lift_minus_identity_invertible",
            lifted_diagonal_minus_identity,
        ),
    ];
    runs.iter()
        .map(|(name, f)| {
            let o = f(p);
            IdentityCount {
                name,
                cases: o.coverage.len() as u64,
                failures: o.failures.len() as u64,
            }
        })
        .collect()
}

pub(crate) fn merge(mut a: Outcome, b: Outcome) -> Outcome {
    a.applicable |= b.applicable;
    a.coverage.extend(b.coverage);
    a.failures.extend(b.failures);
    a.flagged.extend(b.flagged);
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_at_5_and_7() {
        for p in [5, 7] {
            let a = jordan_power(p);
            assert!(a.failures.is_empty());
            assert_eq!(a.coverage.len(), ((p - 1) * (p - 1)) as usize);
            let b = borel_commutator(p);
            assert!(b.failures.is_empty());
            assert_eq!(b.coverage.len(), (p - 1).pow(5) as usize);
            let c = lifted_diagonal_minus_identity(p);
            assert!(c.failures.is_empty());
            assert_eq!(c.coverage.len(), ((p - 2) * (p - 2) * p.pow(4)) as usize);
        }
    }

    #[test]
    fn public_counts() {
        let c = identities(5);
        assert_eq!(
            c.iter().map(|x| x.cases).collect::<Vec<_>>(),
            vec![16, 1024, 5625]
        );
        assert!(c.iter().all(|x| x.failures == 0));
    }

    #[test]
    fn jordan_example_mod_5() {
        let r = Ring::new(5, 1).unwrap();
        let g = Gl2::new(r, 2, 1, 0, 2).unwrap();
        assert_eq!(g.pow(4), Gl2::new(r, 1, 2, 0, 1).unwrap());
        let s = crate::group::MatrixGroup::close(r, &[g], 100).unwrap();
        assert!(s.contains(&Gl2::unipotent(r)));
    }
}
