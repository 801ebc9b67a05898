use std::collections::HashSet;

use serde::Serialize;

use super::{Permutation, StabChain};
use crate::congruence::{Partition, UnionFind};
use crate::error::{Error, Result};

/// Groups up to this order are stored as a full element list.
pub const DEFAULT_ENUMERATION_CAP: usize = 200_000;

/// A permutation group given by generators, backed either by a sorted list
/// of all elements or, past the enumeration cap, by a stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    order: usize,
    elements: Option<Vec<Permutation>>,
    chain: Option<StabChain>,
}

fn enumerate(degree: usize, gens: &[Permutation], cap: usize) -> Option<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(id.clone());
    let mut elems = vec![id];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h = g.compose(&elems[i]);
            if !seen.contains(&h) {
                if elems.len() >= cap {
                    return None;
                }
                seen.insert(h.clone());
                elems.push(h);
            }
        }
        i += 1;
    }
    elems.sort_unstable();
    Some(elems)
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            gens: Vec::new(),
            order: 1,
            elements: Some(vec![Permutation::identity(degree)]),
            chain: None,
        }
    }

    /// The group generated by `gens`; enumerated when its order is at most `cap`.
    pub fn generated(degree: usize, gens: &[Permutation], cap: usize) -> Result<Self> {
        let mut uniq: Vec<Permutation> = Vec::new();
        for g in gens {
            if g.degree() != degree {
                return Err(Error::MalformedInput(format!(
                    "generator of degree {} in a group of degree {degree}",
                    g.degree()
                )));
            }
            if !g.is_identity() && !uniq.contains(g) {
                uniq.push(g.clone());
            }
        }
        if let Some(elements) = enumerate(degree, &uniq, cap) {
            return Ok(Self { degree, order: elements.len(), gens: uniq, elements: Some(elements), chain: None });
        }
        let chain = StabChain::new(degree, &uniq);
        let order = chain
            .order()
            .ok_or(Error::CapExceeded { what: "group order", limit: usize::MAX })?;
        Ok(Self { degree, gens: uniq, order, elements: None, chain: Some(chain) })
    }

    /// Wraps a set of elements already known to form a subgroup.
    pub fn from_elements(degree: usize, mut elems: Vec<Permutation>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        let mut gens: Vec<Permutation> = Vec::new();
        let mut current: Vec<Permutation> = vec![Permutation::identity(degree)];
        for e in &elems {
            if current.binary_search(e).is_err() {
                gens.push(e.clone());
                current = enumerate(degree, &gens, usize::MAX).expect("uncapped");
            }
        }
        debug_assert_eq!(current.len(), elems.len(), "element set is not closed");
        Self { degree, order: elems.len(), gens, elements: Some(elems), chain: None }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn elements(&self) -> Option<&[Permutation]> {
        self.elements.as_deref()
    }

    pub fn require_elements(&self) -> Result<&[Permutation]> {
        self.elements().ok_or(Error::CapExceeded {
            what: "group order for element enumeration",
            limit: DEFAULT_ENUMERATION_CAP,
        })
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        match (&self.elements, &self.chain) {
            (Some(el), _) => el.binary_search(g).is_ok(),
            (None, Some(chain)) => chain.contains(g),
            (None, None) => unreachable!("group has a representation"),
        }
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.order <= other.order && self.gens.iter().all(|g| other.contains(g))
    }

    /// Subgroup equality by mutual generator membership.
    pub fn same_as(&self, other: &Self) -> bool {
        self.order == other.order && self.is_subgroup_of(other)
    }

    pub fn orbits(&self) -> Partition {
        let mut uf = UnionFind::new(self.degree);
        for g in &self.gens {
            for x in 0..self.degree {
                uf.union(x, g.apply(x));
            }
        }
        uf.into_partition()
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut out = vec![x];
        let mut i = 0;
        while i < out.len() {
            for g in &self.gens {
                let y = g.apply(out[i]);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// The subgroup of elements satisfying `keep`, which must define a subgroup.
    pub fn filter(&self, keep: impl Fn(&Permutation) -> bool) -> Result<Self> {
        let elems: Vec<Permutation> = self.require_elements()?.iter().filter(|g| keep(g)).cloned().collect();
        Ok(Self::from_elements(self.degree, elems))
    }

    /// Point stabilizer `G_x`.
    pub fn stabilizer(&self, x: usize) -> Result<Self> {
        if x >= self.degree {
            return Err(Error::MalformedInput(format!("point {x} out of range")));
        }
        if self.elements.is_some() {
            return self.filter(|g| g.apply(x) == x);
        }
        let chain = StabChain::with_base_prefix(self.degree, &self.gens, &[x]);
        Self::generated(self.degree, &chain.stabilizer_generators(1), DEFAULT_ENUMERATION_CAP)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        let (small, big) = if self.elements.is_some() && (other.elements.is_none() || self.order <= other.order) {
            (self, other)
        } else {
            (other, self)
        };
        small.filter(|g| big.contains(g))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        let gens: Vec<Permutation> = self.gens.iter().chain(other.gens.iter()).cloned().collect();
        Self::generated(self.degree, &gens, DEFAULT_ENUMERATION_CAP)
    }

    /// Normal in `ambient`: closed under conjugation by its generators.
    pub fn is_normal_in(&self, ambient: &Self) -> bool {
        self.is_subgroup_of(ambient)
            && ambient
                .gens
                .iter()
                .all(|a| self.gens.iter().all(|g| self.contains(&g.conjugate_by(a))))
    }

    pub fn center(&self) -> Result<Self> {
        self.filter(|z| self.gens.iter().all(|g| z.compose(g) == g.compose(z)))
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .enumerate()
            .all(|(i, a)| self.gens[..i].iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// All point stabilizers are trivial, i.e. every orbit has size `|G|`.
    pub fn is_semiregular(&self) -> bool {
        let orbits = self.orbits();
        orbits.blocks().iter().all(|b| b.len() == self.order)
    }

    /// `γ₁ = G`, `γᵢ₊₁ = [γᵢ, G]`, until trivial or stable.
    pub fn lower_central_series(&self) -> Result<Vec<Self>> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                return Ok(series);
            }
            let seeds: Vec<Permutation> = last
                .gens
                .iter()
                .flat_map(|a| self.gens.iter().map(move |g| Permutation::commutator(a, g)))
                .collect();
            let next = normal_closure(self.degree, &self.gens, &seeds, DEFAULT_ENUMERATION_CAP)?;
            if next.order == last.order {
                return Ok(series);
            }
            series.push(next);
        }
    }

    /// `G⁽⁰⁾ = G`, `G⁽ⁱ⁺¹⁾ = [G⁽ⁱ⁾, G⁽ⁱ⁾]`, until trivial or stable.
    pub fn derived_series(&self) -> Result<Vec<Self>> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                return Ok(series);
            }
            let seeds: Vec<Permutation> = last
                .gens
                .iter()
                .enumerate()
                .flat_map(|(i, a)| last.gens[..i].iter().map(move |b| Permutation::commutator(a, b)))
                .collect();
            let next = normal_closure(self.degree, &last.gens, &seeds, DEFAULT_ENUMERATION_CAP)?;
            if next.order == last.order {
                return Ok(series);
            }
            series.push(next);
        }
    }

    pub fn report(&self) -> GroupReport {
        let transitive = self.is_transitive();
        let semiregular = self.is_semiregular();
        let lower = self.lower_central_series().ok();
        let derived = self.derived_series().ok();
        let nilpotent = lower.as_ref().map(|s| s.last().unwrap().is_trivial());
        let solvable = derived.as_ref().map(|s| s.last().unwrap().is_trivial());
        GroupReport {
            order: self.order,
            transitive,
            semiregular,
            regular: transitive && semiregular,
            abelian: self.is_abelian(),
            nilpotent,
            nilpotency_class: lower.filter(|s| s.last().unwrap().is_trivial()).map(|s| s.len() - 1),
            solvable,
            derived_length: derived.filter(|s| s.last().unwrap().is_trivial()).map(|s| s.len() - 1),
            center_order: self.center().ok().map(|z| z.order()),
        }
    }
}

/// Group-theoretic flags. `None` marks a value that needs an element
/// enumeration the group does not have.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub order: usize,
    pub transitive: bool,
    pub semiregular: bool,
    pub regular: bool,
    pub abelian: bool,
    pub nilpotent: Option<bool>,
    pub nilpotency_class: Option<usize>,
    pub solvable: Option<bool>,
    pub derived_length: Option<usize>,
    pub center_order: Option<usize>,
}

/// Smallest subgroup containing `seed` and closed under conjugation by `ambient_gens`.
pub fn normal_closure(
    degree: usize,
    ambient_gens: &[Permutation],
    seed: &[Permutation],
    cap: usize,
) -> Result<PermGroup> {
    let mut gens: Vec<Permutation> = Vec::new();
    for s in seed {
        if !s.is_identity() && !gens.contains(s) {
            gens.push(s.clone());
        }
    }
    let mut group = PermGroup::generated(degree, &gens, cap)?;
    loop {
        let mut added = false;
        for a in ambient_gens {
            for g in group.gens.clone() {
                let c = g.conjugate_by(a);
                if !group.contains(&c) {
                    gens.push(c);
                    group = PermGroup::generated(degree, &gens, cap)?;
                    added = true;
                }
            }
        }
        if !added {
            return Ok(group);
        }
    }
}

/// `N_G(H) = {g ∈ G : gHg⁻¹ = H}`.
pub fn normalizer(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    g.filter(|x| h.gens.iter().all(|y| h.contains(&y.conjugate_by(x))))
}

/// `G` is the internal direct product of `N` and `H`: they meet trivially,
/// commute elementwise, and `|N|·|H| = |G|`.
pub fn internal_direct_product(g: &PermGroup, n: &PermGroup, h: &PermGroup) -> Result<bool> {
    if !n.is_subgroup_of(g) || !h.is_subgroup_of(g) {
        return Ok(false);
    }
    if !n.intersection(h)?.is_trivial() {
        return Ok(false);
    }
    let commute = n.gens.iter().all(|a| h.gens.iter().all(|b| a.compose(b) == b.compose(a)));
    Ok(commute && n.order.checked_mul(h.order) == Some(g.order))
}
