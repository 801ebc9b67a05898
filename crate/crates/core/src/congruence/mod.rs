//! Congruences of a left quasigroup, the congruence lattice, and quotients.

mod partition;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::table::LeftQuasigroup;

pub use partition::{Partition, UnionFind};

/// Default cap on the number of congruences materialized in a lattice.
pub const DEFAULT_LATTICE_CAP: usize = 50_000;

/// Compatibility with `·` and `\`, checked over all pairs of related pairs.
///
/// For each operation it suffices to vary one argument at a time, so the
/// scan is over `x α y` with a fixed second argument and vice versa.
pub fn is_congruence(q: &LeftQuasigroup, p: &Partition) -> bool {
    let n = q.order();
    if p.size() != n {
        return false;
    }
    for (x, y) in p.pairs() {
        for u in 0..n {
            if !p.related(q.mul(x, u), q.mul(y, u))
                || !p.related(q.mul(u, x), q.mul(u, y))
                || !p.related(q.ldiv(x, u), q.ldiv(y, u))
                || !p.related(q.ldiv(u, x), q.ldiv(u, y))
            {
                return false;
            }
        }
    }
    true
}

/// Smallest congruence containing the given pairs.
///
/// Every merged pair is pushed through the four families of basic
/// translations `y ↦ x·y`, `y ↦ x\y`, `y ↦ y·x`, `y ↦ y\x`; union–find
/// supplies transitivity.
pub fn generate(q: &LeftQuasigroup, pairs: impl IntoIterator<Item = (usize, usize)>) -> Partition {
    let n = q.order();
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for (a, b) in pairs {
        if uf.union(a, b) {
            queue.push((a, b));
        }
    }
    while let Some((a, b)) = queue.pop() {
        for x in 0..n {
            for (c, d) in [
                (q.mul(x, a), q.mul(x, b)),
                (q.ldiv(x, a), q.ldiv(x, b)),
                (q.mul(a, x), q.mul(b, x)),
                (q.ldiv(a, x), q.ldiv(b, x)),
            ] {
                if uf.union(c, d) {
                    queue.push((c, d));
                }
            }
        }
    }
    uf.into_partition()
}

/// `Cg(a, b)`.
pub fn principal_congruence(q: &LeftQuasigroup, a: usize, b: usize) -> Partition {
    generate(q, [(a, b)])
}

/// Join of two congruences, re-closed under the operations.
pub fn join(q: &LeftQuasigroup, a: &Partition, b: &Partition) -> Partition {
    generate(q, a.pairs().chain(b.pairs()))
}

/// The quotient algebra on block indices, together with the block map.
pub fn quotient(q: &LeftQuasigroup, alpha: &Partition) -> Result<(LeftQuasigroup, Vec<usize>)> {
    if !is_congruence(q, alpha) {
        return Err(Error::NotACongruence);
    }
    let reps = alpha.representatives();
    let k = reps.len();
    let mut mul = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            mul.push(alpha.block_of(q.mul(a, b)) as u8);
        }
    }
    let map: Vec<usize> = (0..q.order()).map(|x| alpha.block_of(x)).collect();
    let quot = LeftQuasigroup::from_table(k, mul)?;
    // well-definedness over all representatives
    for x in 0..q.order() {
        for y in 0..q.order() {
            if quot.mul(map[x], map[y]) != map[q.mul(x, y)] {
                return Err(Error::NotACongruence);
            }
        }
    }
    Ok((quot, map))
}

/// `β/α` on the block indices of `Q/α`.
pub fn quotient_congruence(alpha: &Partition, beta: &Partition) -> Result<Partition> {
    if !alpha.leq(beta) {
        return Err(Error::OrderViolation);
    }
    let labels: Vec<u8> = alpha.representatives().iter().map(|&r| beta.labels()[r]).collect();
    Ok(Partition::from_labels(&labels))
}

/// Pulls a partition of `Q/α` back along the block map.
pub fn lift(alpha: &Partition, on_quotient: &Partition) -> Partition {
    let labels: Vec<u8> = (0..alpha.size())
        .map(|x| on_quotient.labels()[alpha.block_of(x)])
        .collect();
    Partition::from_labels(&labels)
}

/// `Con(Q)`, sorted from `0_Q` (most blocks) to `1_Q`.
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    congruences: Vec<Partition>,
    index: HashMap<Partition, usize>,
    leq: Vec<Vec<bool>>,
}

impl CongruenceLattice {
    /// Generates every congruence by closing the principal congruences under joins.
    pub fn build(q: &LeftQuasigroup, cap: usize) -> Result<Self> {
        let n = q.order();
        let mut principals: Vec<Partition> = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                let c = principal_congruence(q, a, b);
                if !principals.contains(&c) {
                    principals.push(c);
                }
            }
        }
        let bottom = Partition::discrete(n);
        let mut all = vec![bottom.clone()];
        let mut index: HashMap<Partition, usize> = HashMap::from([(bottom, 0)]);
        let mut i = 0;
        while i < all.len() {
            for p in &principals {
                if p.leq(&all[i]) {
                    continue;
                }
                let j = join(q, &all[i], p);
                if !index.contains_key(&j) {
                    if all.len() >= cap {
                        return Err(Error::CapExceeded { what: "congruence lattice size", limit: cap });
                    }
                    index.insert(j.clone(), all.len());
                    all.push(j);
                }
            }
            i += 1;
        }
        Ok(Self::from_congruences(all))
    }

    fn from_congruences(mut congruences: Vec<Partition>) -> Self {
        congruences.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
        let index = congruences.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let leq = congruences
            .iter()
            .map(|a| congruences.iter().map(|b| a.leq(b)).collect())
            .collect();
        Self { congruences, index, leq }
    }

    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn congruences(&self) -> &[Partition] {
        &self.congruences
    }

    pub fn get(&self, i: usize) -> &Partition {
        &self.congruences[i]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.congruences.len() - 1
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let m = self.congruences[i].meet(&self.congruences[j]);
        self.index[&m]
    }

    /// Least upper bound read off the order relation.
    pub fn join(&self, i: usize, j: usize) -> usize {
        let uppers: Vec<usize> = (0..self.len()).filter(|&k| self.leq[i][k] && self.leq[j][k]).collect();
        *uppers
            .iter()
            .find(|&&k| uppers.iter().all(|&u| self.leq[k][u]))
            .expect("a lattice has joins")
    }

    /// Every meet and join of two members lies in the lattice.
    pub fn is_closed(&self, q: &LeftQuasigroup) -> bool {
        let l = &self.congruences;
        l.iter().all(|a| {
            l.iter().all(|b| {
                self.index.contains_key(&a.meet(b)) && self.index.contains_key(&join(q, a, b))
            })
        })
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        let meet: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| self.meet(i, j)).collect()).collect();
        let join: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| self.join(i, j)).collect()).collect();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| meet[a][join[b][c]] == join[meet[a][b]][meet[a][c]]))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> LeftQuasigroup {
        LeftQuasigroup::from_fn(3, |x, y| (6 + 2 * x - y) % 3).unwrap()
    }

    #[test]
    fn is_congruence_examples() {
        let q = d3();
        assert!(is_congruence(&q, &Partition::discrete(3)));
        let p3 = LeftQuasigroup::projection(3);
        for labels in [[0, 0, 1], [0, 1, 0], [0, 1, 1], [0, 0, 0]] {
            assert!(is_congruence(&p3, &Partition::from_labels(&labels)));
        }
        assert!(!is_congruence(&q, &Partition::parse(3, "0 1 | 2").unwrap()));
    }

    #[test]
    fn principal_examples() {
        let q = d3();
        assert_eq!(principal_congruence(&q, 1, 1), Partition::discrete(3));
        assert_eq!(principal_congruence(&q, 0, 1), Partition::full(3));
        let p4 = LeftQuasigroup::projection(4);
        assert_eq!(principal_congruence(&p4, 1, 3), Partition::parse(4, "0 | 1 3 | 2").unwrap());
    }

    #[test]
    fn lattice_examples() {
        let bell = [1, 1, 2, 5, 15];
        for n in 1..=4 {
            let l = CongruenceLattice::build(&LeftQuasigroup::projection(n), 1000).unwrap();
            assert_eq!(l.len(), bell[n]);
            assert!(l.is_closed(&LeftQuasigroup::projection(n)));
        }
        let l = CongruenceLattice::build(&d3(), 1000).unwrap();
        assert_eq!(l.congruences(), &[Partition::discrete(3), Partition::full(3)]);
        assert!(l.is_distributive());
        let p3 = CongruenceLattice::build(&LeftQuasigroup::projection(3), 1000).unwrap();
        assert!(!p3.is_distributive());
        assert!(CongruenceLattice::build(&LeftQuasigroup::projection(4), 3).is_err());
    }

    #[test]
    fn quotient_examples() {
        let q = d3();
        let (same, map) = quotient(&q, &Partition::discrete(3)).unwrap();
        assert_eq!(same, q);
        assert_eq!(map, vec![0, 1, 2]);
        let (one, _) = quotient(&q, &Partition::full(3)).unwrap();
        assert_eq!(one.order(), 1);
        let p4 = LeftQuasigroup::projection(4);
        let alpha = Partition::parse(4, "0 1 | 2 3").unwrap();
        assert_eq!(quotient(&p4, &alpha).unwrap().0, LeftQuasigroup::projection(2));
        assert_eq!(
            quotient(&q, &Partition::parse(3, "0 1 | 2").unwrap()),
            Err(Error::NotACongruence)
        );
    }

    #[test]
    fn quotient_congruence_examples() {
        let alpha = Partition::parse(4, "0 1 | 2 3").unwrap();
        assert_eq!(quotient_congruence(&alpha, &alpha).unwrap(), Partition::discrete(2));
        assert_eq!(quotient_congruence(&alpha, &Partition::full(4)).unwrap(), Partition::full(2));
        assert_eq!(
            quotient_congruence(&Partition::full(4), &alpha),
            Err(Error::OrderViolation)
        );
        let beta = Partition::full(4);
        let lifted = lift(&alpha, &quotient_congruence(&alpha, &beta).unwrap());
        assert_eq!(lifted, beta);
    }

    #[test]
    fn chain_lattice_is_distributive() {
        // Aff(Z_4, 2, 3, 0): x·y = 2x + 3y.
        let q = LeftQuasigroup::from_fn(4, |x, y| (2 * x + 3 * y) % 4).unwrap();
        let l = CongruenceLattice::build(&q, 100).unwrap();
        assert!(l.is_closed(&q));
        for c in l.congruences() {
            assert!(is_congruence(&q, c));
        }
    }
}
