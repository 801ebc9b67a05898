//! Small named algebras used by tests, the harness and the command line.

use crate::congruence::Partition;
use crate::table::LeftQuasigroup;

/// Principal quandle on `S_3` with `f` conjugation by a 3-cycle. It is
/// semiregular, but its quotient by [`SEMIREGULAR_WITNESS_CONGRUENCE`] is not.
/// Found by `miner::mine_non_closure_witness`.
pub const SEMIREGULAR_WITNESS: &str = "6
0 5 1 3 4 2
3 1 2 4 0 5
3 1 2 4 0 5
0 5 1 3 4 2
0 5 1 3 4 2
3 1 2 4 0 5
";

pub const SEMIREGULAR_WITNESS_CONGRUENCE: &str = "0 | 1 2 5 | 3 | 4";

/// Centrality is not upward closed here: `C(1,1;0)` holds but
/// `C(1,1;[0 1|2|3])` fails.
pub const NON_MONOTONE: &str = "4
0 1 3 2
0 1 3 2
1 0 2 3
1 0 2 3
";

pub fn dihedral(n: usize) -> LeftQuasigroup {
    LeftQuasigroup::from_fn(n, |x, y| (2 * n + 2 * x - y) % n).unwrap()
}

/// `x·y = g·x + f·y + c` over `Z_n`.
pub fn affine_cyclic(n: usize, g: usize, f: usize, c: usize) -> LeftQuasigroup {
    LeftQuasigroup::from_fn(n, |x, y| (g * x + f * y + c) % n).unwrap()
}

/// The affine latin quandle of order 4, over `Z_2²` with `f` of order 3.
pub fn tetrahedral() -> LeftQuasigroup {
    let f = |v: usize| ((v & 1) << 1 | ((v >> 1) ^ (v & 1))) & 3;
    LeftQuasigroup::from_fn(4, |x, y| x ^ f(x) ^ f(y)).unwrap()
}

pub fn semiregular_witness() -> (LeftQuasigroup, Partition) {
    let q = LeftQuasigroup::parse(SEMIREGULAR_WITNESS).unwrap();
    let alpha = Partition::parse(6, SEMIREGULAR_WITNESS_CONGRUENCE).unwrap();
    (q, alpha)
}

/// Every fixture with its name, in a fixed order.
pub fn all() -> Vec<(String, LeftQuasigroup)> {
    let mut out: Vec<(String, LeftQuasigroup)> =
        (1..=4).map(|n| (format!("P{n}"), LeftQuasigroup::projection(n))).collect();
    out.push(("dihedral-3".into(), dihedral(3)));
    out.push(("dihedral-5".into(), dihedral(5)));
    out.push(("aff-z4-2-3-0".into(), affine_cyclic(4, 2, 3, 0)));
    out.push(("aff-z3-2-2-0".into(), affine_cyclic(3, 2, 2, 0)));
    out.push(("dihedral-3xP2".into(), dihedral(3).direct_product(&LeftQuasigroup::projection(2), 12).unwrap()));
    out.push(("tetrahedral".into(), tetrahedral()));
    out.push(("semiregular-witness".into(), semiregular_witness().0));
    out.push(("non-monotone".into(), LeftQuasigroup::parse(NON_MONOTONE).unwrap()));
    out
}

pub fn get(name: &str) -> Option<LeftQuasigroup> {
    all().into_iter().find(|(n, _)| n == name).map(|(_, q)| q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::miner;

    #[test]
    fn fixtures_validate_and_round_trip() {
        for (name, q) in all() {
            let back = LeftQuasigroup::parse(&q.to_lq()).unwrap();
            assert_eq!(back, q, "{name}");
        }
    }

    #[test]
    fn known_flags() {
        assert!(dihedral(3).classify().quandle);
        assert!(affine_cyclic(3, 2, 2, 0).is_latin());
        assert!(affine_cyclic(4, 2, 3, 0).is_idempotent());
        let t = tetrahedral().classify();
        assert!(t.quandle && t.latin && t.faithful);
    }

    #[test]
    fn stored_witness_replays_and_matches_the_miner() {
        let (q, alpha) = semiregular_witness();
        let (quotient, _) = crate::congruence::quotient(&q, &alpha).unwrap();
        let w = miner::NonClosureWitness { quandle: q.clone(), congruence: alpha.clone(), quotient, source: String::new() };
        assert!(w.replays().unwrap());
        let mined = miner::mine_non_closure_witness(12).unwrap().unwrap();
        assert_eq!((mined.quandle, mined.congruence), (q, alpha));
    }
}
