//! Permutations of `0..n` and finitely generated permutation groups.
//!
//! Composition follows function notation: `a.compose(&b)` applies `b` first.

mod chain;
mod group;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use chain::StabChain;
pub use group::{normal_closure, normalizer, internal_direct_product, GroupReport, PermGroup, DEFAULT_ENUMERATION_CAP};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    img: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { img: (0..n).map(|i| i as u8).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > crate::table::MAX_ORDER {
            return Err(Error::CapExceeded { what: "degree", limit: crate::table::MAX_ORDER });
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::MalformedInput(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Self { img: images.into_iter().map(|v| v as u8).collect() })
    }

    /// Builds a permutation on `n` points from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut img: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                img[a] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::from_images(img)
    }

    pub(crate) fn from_bytes_unchecked(img: Vec<u8>) -> Self {
        Self { img }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.img.iter().map(|&v| v as usize).collect()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.img
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { img: other.img.iter().map(|&v| self.img[v as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.img.len()];
        for (i, &v) in self.img.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Self { img: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate_by(&self, h: &Self) -> Self {
        let mut out = vec![0u8; self.img.len()];
        for (x, &y) in self.img.iter().enumerate() {
            out[h.img[x] as usize] = h.img[y as usize];
        }
        Self { img: out }
    }

    /// Group commutator `a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.inverse().compose(&b.inverse()).compose(a).compose(b)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.img.iter().enumerate().position(|(i, &v)| i != v as usize)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.img.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}
