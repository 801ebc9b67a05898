//! Mining a semiregular quandle with a quotient that is not semiregular.
//!
//! Principal quandles `x·y = x f(x⁻¹y)` on a group `G` are semiregular,
//! while their quotients include coset quandles that need not be. The miner
//! walks small nonabelian permutation groups, takes `f` to be conjugation by
//! an element normalizing `G`, and scans every congruence.

use crate::census::permutations;
use crate::congruence::{self, CongruenceLattice, Partition};
use crate::error::Result;
use crate::galois::Groups;
use crate::perm::{PermGroup, Permutation};
use crate::table::LeftQuasigroup;

/// A semiregular quandle together with a congruence whose quotient is not.
#[derive(Clone, Debug)]
pub struct NonClosureWitness {
    pub quandle: LeftQuasigroup,
    pub congruence: Partition,
    pub quotient: LeftQuasigroup,
    /// Group the quandle was built on, as `name` plus the conjugating element.
    pub source: String,
}

impl NonClosureWitness {
    /// Rechecks every claim from the tables alone.
    pub fn replays(&self) -> Result<bool> {
        let q = &self.quandle;
        if !q.is_rack() || !q.is_idempotent() || !congruence::is_congruence(q, &self.congruence) {
            return Ok(false);
        }
        let (quotient, _) = congruence::quotient(q, &self.congruence)?;
        Ok(quotient == self.quotient && is_semiregular(q)? && !is_semiregular(&quotient)?)
    }
}

pub fn is_semiregular(q: &LeftQuasigroup) -> Result<bool> {
    Ok(Groups::new(q)?.dis().is_semiregular())
}

/// `x·y = x g x⁻¹ y g⁻¹` on the elements of `group`, that is `f` is
/// conjugation by `g`. Requires `g` to normalize `group`.
pub fn principal_quandle(group: &PermGroup, g: &Permutation) -> Result<LeftQuasigroup> {
    let elems = group.require_elements()?.to_vec();
    let index = |p: &Permutation| elems.iter().position(|e| e == p);
    let ginv = g.inverse();
    let f = |p: &Permutation| g.compose(p).compose(&ginv);
    let n = elems.len();
    let mut table = Vec::with_capacity(n * n);
    for x in &elems {
        let xinv = x.inverse();
        for y in &elems {
            let z = x.compose(&f(&xinv.compose(y)));
            let k = index(&z).ok_or_else(|| {
                crate::error::Error::PreconditionFailed("conjugating element does not normalize the group".into())
            })?;
            table.push(k as u8);
        }
    }
    LeftQuasigroup::from_table(n, table)
}

/// Small nonabelian groups, smallest first.
pub fn small_groups() -> Vec<(&'static str, PermGroup)> {
    let p = |d: usize, cycles: &[&[usize]]| Permutation::from_cycles(d, cycles).unwrap();
    let dihedral = |k: usize| {
        let rot: Vec<usize> = (0..k).collect();
        let refl: Vec<usize> = (0..k).map(|i| (k - i) % k).collect();
        vec![p(k, &[&rot[..]]), Permutation::from_images(refl).unwrap()]
    };
    let list: Vec<(&'static str, usize, Vec<Permutation>)> = vec![
        ("S3", 3, dihedral(3)),
        ("D4", 4, dihedral(4)),
        ("Q8", 8, vec![p(8, &[&[0, 1, 2, 3], &[4, 5, 6, 7]]), p(8, &[&[0, 4, 2, 6], &[1, 7, 3, 5]])]),
        ("D5", 5, dihedral(5)),
        ("A4", 4, vec![p(4, &[&[0, 1, 2]]), p(4, &[&[0, 1], &[2, 3]])]),
        ("D6", 6, dihedral(6)),
    ];
    list.into_iter()
        .map(|(name, d, gens)| (name, PermGroup::generated(d, &gens, 1 << 12).unwrap()))
        .collect()
}

/// Elements of `Sym(d)` normalizing `group`, one per induced automorphism.
fn normalizing_elements(group: &PermGroup) -> Result<Vec<Permutation>> {
    let d = group.degree();
    let elems = group.require_elements()?;
    let candidates: Vec<Permutation> = if d <= 6 {
        permutations(d).into_iter().map(|im| Permutation::from_images(im.into_iter().map(usize::from).collect())).collect::<Result<_>>()?
    } else {
        elems.to_vec()
    };
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for g in candidates {
        let ginv = g.inverse();
        let images: Option<Vec<usize>> =
            elems.iter().map(|e| elems.iter().position(|x| *x == g.compose(e).compose(&ginv))).collect();
        if let Some(images) = images {
            if !seen.contains(&images) {
                seen.push(images);
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// First witness found over [`small_groups`] up to the given order.
pub fn mine_non_closure_witness(max_order: usize) -> Result<Option<NonClosureWitness>> {
    for (name, group) in small_groups() {
        if group.order() > max_order {
            continue;
        }
        for g in normalizing_elements(&group)? {
            let q = principal_quandle(&group, &g)?;
            if !is_semiregular(&q)? {
                continue;
            }
            let lattice = CongruenceLattice::build(&q, 1 << 16)?;
            for alpha in lattice.congruences() {
                if alpha.is_discrete() || alpha.is_full() {
                    continue;
                }
                let (quotient, _) = congruence::quotient(&q, alpha)?;
                if !is_semiregular(&quotient)? {
                    let source = format!("{name}, f = conjugation by {:?}", g.cycles());
                    return Ok(Some(NonClosureWitness { quandle: q, congruence: alpha.clone(), quotient, source }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_quandles_are_semiregular_quandles() {
        for (_, group) in small_groups() {
            for g in normalizing_elements(&group).unwrap().iter().take(4) {
                let q = principal_quandle(&group, g).unwrap();
                assert!(q.is_rack() && q.is_idempotent());
                assert!(is_semiregular(&q).unwrap());
            }
        }
    }

    #[test]
    fn identity_automorphism_gives_projection() {
        let (_, s3) = &small_groups()[0];
        let q = principal_quandle(s3, &Permutation::identity(3)).unwrap();
        assert!(q.is_projection());
    }
}
