//! `C(α,β;δ)` straight from its definition, for cross-checking the matrix
//! closure on very small algebras.
//!
//! A term `t(x, z₁, …, z_k)` over `{·, \}` is evaluated on one instantiation
//! at a time: `x` on an ordered pair `x α y` with `x ≠ y`, each `zᵢ` on a pair
//! `zᵢ β uᵢ`. Evaluating all four corners at once makes the value of a term
//! a 4-tuple, so the values of all terms of depth at most `d` form a set
//! that is built level by level. No subuniverse of `Q⁴` is formed: every
//! instantiation is closed separately and only to the depth bound.

use std::collections::HashSet;

use super::TcMatrix;
use crate::congruence::{CongruenceLattice, Partition};
use crate::table::LeftQuasigroup;

/// Default shape of the enumerated terms: one `α` variable, three `β`
/// variables, nesting depth four.
pub const DEFAULT_EXTRA_VARS: usize = 3;
pub const DEFAULT_DEPTH: usize = 4;

/// Values of every term of depth `≤ depth` in the variables `vars`.
fn term_values(q: &LeftQuasigroup, vars: &[TcMatrix], depth: usize) -> HashSet<TcMatrix> {
    let apply = |t: fn(&LeftQuasigroup, usize, usize) -> usize, a: &TcMatrix, b: &TcMatrix| -> TcMatrix {
        std::array::from_fn(|i| t(q, a[i] as usize, b[i] as usize) as u8)
    };
    let mut all: Vec<TcMatrix> = Vec::new();
    let mut set: HashSet<TcMatrix> = HashSet::new();
    for v in vars {
        if set.insert(*v) {
            all.push(*v);
        }
    }
    // Terms before `fresh_from` were already combined with each other.
    let mut fresh_from = 0;
    for _ in 0..depth {
        let level_end = all.len();
        let mut next = Vec::new();
        for i in 0..level_end {
            for j in 0..level_end {
                if i < fresh_from && j < fresh_from {
                    continue;
                }
                let (a, b) = (&all[i], &all[j]);
                for c in [apply(LeftQuasigroup::mul, a, b), apply(LeftQuasigroup::ldiv, a, b)] {
                    if set.insert(c) {
                        next.push(c);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        fresh_from = level_end;
        all.extend(next);
    }
    set
}

/// Union over all instantiations of the corner values of terms with one `α`
/// variable, `extra_vars` `β` variables and depth at most `depth`.
///
/// Instantiations whose `β` pairs repeat are dominated by ones with distinct
/// pairs (more variables never remove term values), so only sets of
/// distinct pairs are visited.
pub fn term_matrices(
    q: &LeftQuasigroup,
    alpha: &Partition,
    beta: &Partition,
    extra_vars: usize,
    depth: usize,
) -> HashSet<TcMatrix> {
    let n = q.order();
    let row_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| x != y && alpha.related(x, y))
        .collect();
    let column_vars: Vec<TcMatrix> = (0..n)
        .flat_map(|z| (0..n).map(move |u| (z, u)))
        .filter(|&(z, u)| beta.related(z, u))
        .map(|(z, u)| [z as u8, u as u8, z as u8, u as u8])
        .collect();
    let k = extra_vars.min(column_vars.len());

    let mut union: HashSet<TcMatrix> = HashSet::new();
    let mut chosen: Vec<usize> = (0..k).collect();
    for &(x, y) in &row_pairs {
        let row_var = [x as u8, x as u8, y as u8, y as u8];
        chosen.clear();
        chosen.extend(0..k);
        loop {
            let mut vars = vec![row_var];
            vars.extend(chosen.iter().map(|&i| column_vars[i]));
            union.extend(term_values(q, &vars, depth));
            if !next_combination(&mut chosen, column_vars.len()) {
                break;
            }
        }
    }
    union
}

/// Advances `c` to the next `|c|`-subset of `0..m` in lexicographic order.
fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < m - k + i {
            c[i] += 1;
            for j in (i + 1)..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `C(α,β;δ)` over the enumerated terms.
pub fn centralizes_by_terms(q: &LeftQuasigroup, alpha: &Partition, beta: &Partition, delta: &Partition) -> bool {
    let ms = term_matrices(q, alpha, beta, DEFAULT_EXTRA_VARS, DEFAULT_DEPTH);
    super::centralizes_on(&ms.into_iter().collect::<Vec<_>>(), delta)
}

/// The least member of `Con(Q)` passing the enumerated-term check.
///
/// The passing congruences are closed under meets (if `p` and `q` are
/// related by every passing `δ`, so are `r` and `s`), so the least one is
/// the meet of all of them.
pub fn commutator_by_terms(q: &LeftQuasigroup, lattice: &CongruenceLattice, alpha: &Partition, beta: &Partition) -> Partition {
    let ms: Vec<TcMatrix> = term_matrices(q, alpha, beta, DEFAULT_EXTRA_VARS, DEFAULT_DEPTH).into_iter().collect();
    lattice
        .congruences()
        .iter()
        .filter(|d| super::centralizes_on(&ms, d))
        .fold(Partition::full(q.order()), |acc, d| acc.meet(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_exhaustive() {
        let mut c = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut c, 6) {
            count += 1;
        }
        assert_eq!(count, 20);
    }

    #[test]
    fn projections_only_give_generators() {
        let q = LeftQuasigroup::projection(3);
        let one = Partition::full(3);
        let ms = term_matrices(&q, &one, &one, 3, 4);
        // x·y = y: every term value is one of its variables
        for m in &ms {
            assert!(m[0] == m[1] && m[2] == m[3] || m[0] == m[2] && m[1] == m[3]);
        }
    }

    #[test]
    fn agrees_with_closure_on_dihedral() {
        let q = LeftQuasigroup::from_fn(3, |x, y| (6 + 2 * x - y) % 3).unwrap();
        let lattice = CongruenceLattice::build(&q, 10).unwrap();
        let one = Partition::full(3);
        assert_eq!(commutator_by_terms(&q, &lattice, &one, &one), super::super::commutator(&q, &one, &one).unwrap());
    }
}
