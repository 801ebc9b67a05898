use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|x| self.find(x)).collect();
        Partition::from_labels(&roots)
    }
}

/// An equivalence relation on `0..n` in canonical form: `labels[x]` is the
/// index of the block of `x`, blocks numbered by their minimum element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<u8>,
    blocks: usize,
}

impl Partition {
    /// `0_n`.
    pub fn discrete(n: usize) -> Self {
        Self { labels: (0..n).map(|i| i as u8).collect(), blocks: n }
    }

    /// `1_n`.
    pub fn full(n: usize) -> Self {
        Self { labels: vec![0; n], blocks: n.min(1) }
    }

    /// Canonicalizes an arbitrary labelling (equal labels means same block).
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(raw: &[T]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels: Vec<u8> = raw
            .iter()
            .map(|l| {
                let next = map.len() as u8;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self { labels, blocks: map.len() }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                if x >= n || raw[x] != usize::MAX {
                    return Err(Error::MalformedInput(format!("blocks do not partition 0..{n}")));
                }
                raw[x] = i;
            }
        }
        if raw.contains(&usize::MAX) {
            return Err(Error::MalformedInput(format!("blocks do not cover 0..{n}")));
        }
        Ok(Self::from_labels(&raw))
    }

    /// Parses the text form `"0 1 | 2 3"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let blocks = text
            .split('|')
            .map(|b| {
                b.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| Error::MalformedInput(format!("bad element {t:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_blocks(n, &blocks)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    #[inline]
    pub fn block_of(&self, x: usize) -> usize {
        self.labels[x] as usize
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    #[inline]
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks == self.labels.len()
    }

    pub fn is_full(&self) -> bool {
        self.blocks <= 1
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(x);
        }
        out
    }

    /// Smallest element of each block, in block order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.blocks];
        for (x, &l) in self.labels.iter().enumerate() {
            if reps[l as usize] == usize::MAX {
                reps[l as usize] = x;
            }
        }
        reps
    }

    /// `self ⊆ other` as relations.
    pub fn leq(&self, other: &Self) -> bool {
        let mut image = vec![u8::MAX; self.blocks];
        for (x, &l) in self.labels.iter().enumerate() {
            let target = other.labels[x];
            let slot = &mut image[l as usize];
            if *slot == u8::MAX {
                *slot = target;
            } else if *slot != target {
                return false;
            }
        }
        true
    }

    pub fn meet(&self, other: &Self) -> Self {
        let pairs: Vec<(u8, u8)> = self.labels.iter().zip(&other.labels).map(|(&a, &b)| (a, b)).collect();
        Self::from_labels(&pairs)
    }

    /// Join in the lattice of equivalence relations (transitive closure of the union).
    pub fn join_equivalence(&self, other: &Self) -> Self {
        let mut uf = UnionFind::new(self.size());
        for p in [self, other] {
            for b in p.blocks() {
                for w in b.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
        uf.into_partition()
    }

    /// Pairs `(x, y)` with `x < y` in the same block.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.size();
        (0..n).flat_map(move |x| ((x + 1)..n).filter(move |&y| self.related(x, y)).map(move |y| (x, y)))
    }

    /// Number of ordered pairs in the relation.
    pub fn relation_size(&self) -> usize {
        self.blocks().iter().map(|b| b.len() * b.len()).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", blocks.join(" | "))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_orders_blocks_by_minimum() {
        let p = Partition::from_labels(&[7, 3, 7, 3]);
        let q = Partition::from_blocks(4, &[vec![3, 1], vec![2, 0]]).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.labels(), &[0, 1, 0, 1]);
        assert_eq!(p.to_string(), "0 2 | 1 3");
        assert_eq!(Partition::parse(4, "0 2 | 1 3").unwrap(), p);
    }

    #[test]
    fn bad_block_lists() {
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    fn labels(n: usize) -> impl Strategy<Value = Vec<u8>> {
        proptest::collection::vec(0u8..4, n)
    }

    proptest! {
        #[test]
        fn lattice_laws(a in labels(6), b in labels(6)) {
            let a = Partition::from_labels(&a);
            let b = Partition::from_labels(&b);
            let m = a.meet(&b);
            let j = a.join_equivalence(&b);
            prop_assert!(m.leq(&a) && m.leq(&b));
            prop_assert!(a.leq(&j) && b.leq(&j));
            prop_assert_eq!(a.meet(&j), a.clone());
            prop_assert_eq!(a.join_equivalence(&m), a.clone());
            prop_assert_eq!(a.leq(&b), a.meet(&b) == a);
        }
    }
}
