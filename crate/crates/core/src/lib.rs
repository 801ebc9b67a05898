//! Finite left quasigroups: multiplication tables, permutation groups,
//! congruences, the group/congruence Galois connection, the term-condition
//! commutator, central extensions, and Mal'tsev term search.

pub mod census;
pub mod commutator;
pub mod congruence;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod galois;
pub mod maltsev;
pub mod miner;
pub mod perm;
pub mod report;
pub mod table;
pub mod verify;

pub use congruence::{CongruenceLattice, Partition, UnionFind};
pub use error::{Error, Result};
pub use galois::{GroupKind, GroupTag, Groups};
pub use perm::{PermGroup, Permutation, StabChain};
pub use table::{LeftQuasigroup, PropertyReport};
