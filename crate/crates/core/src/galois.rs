//! Displacement groups relative to an equivalence, the operators `O_*`,
//! `Con_*`, `σ_*`, admissible subgroups, and the Galois connection between
//! `Con(Q)` and `Norm′(Q)`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::congruence::{self, CongruenceLattice, Partition};
use crate::error::{Error, Result};
use crate::perm::{normal_closure, PermGroup, Permutation, DEFAULT_ENUMERATION_CAP};
use crate::table::LeftQuasigroup;

/// The named subgroups of `LMlt(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    LMlt,
    Dis,
    /// `Dis_α`.
    DisSub(Partition),
    /// `Dis^α`.
    DisKer(Partition),
    /// `LMlt^α`.
    LMltKer(Partition),
    /// `Dis(Q)_{[x]_α}`.
    BlockStab(Partition, usize),
    /// `Z(Dis(Q))`.
    Center,
    Custom(String),
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::LMlt => write!(f, "LMlt"),
            GroupKind::Dis => write!(f, "Dis"),
            GroupKind::DisSub(a) => write!(f, "Dis_[{a}]"),
            GroupKind::DisKer(a) => write!(f, "Dis^[{a}]"),
            GroupKind::LMltKer(a) => write!(f, "LMlt^[{a}]"),
            GroupKind::BlockStab(a, x) => write!(f, "Dis_[{x}]_[{a}]"),
            GroupKind::Center => write!(f, "Z(Dis)"),
            GroupKind::Custom(s) => write!(f, "{s}"),
        }
    }
}

/// A subgroup together with the operator that produced it.
#[derive(Clone, Debug)]
pub struct GroupTag {
    pub kind: GroupKind,
    pub group: PermGroup,
}

/// Membership of a subgroup in `Norm(Q)` and `Norm′(Q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub normal: bool,
    /// `N ∈ Norm(Q)`.
    pub admissible: bool,
    /// `N ∈ Norm′(Q)`.
    pub below_dis: bool,
}

/// Left translations, `LMlt(Q)` and `Dis(Q)` of one left quasigroup, with
/// the operators that are defined relative to them.
#[derive(Clone, Debug)]
pub struct Groups {
    q: LeftQuasigroup,
    translations: Vec<Permutation>,
    inverses: Vec<Permutation>,
    lmlt: PermGroup,
    dis: PermGroup,
}

impl Groups {
    pub fn new(q: &LeftQuasigroup) -> Result<Self> {
        Self::with_cap(q, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(q: &LeftQuasigroup, cap: usize) -> Result<Self> {
        let n = q.order();
        let translations = q.left_translations();
        let inverses: Vec<Permutation> = translations.iter().map(Permutation::inverse).collect();
        let lmlt = PermGroup::generated(n, &translations, cap)?;
        let seeds: Vec<Permutation> = (1..n).map(|x| translations[x].compose(&inverses[0])).collect();
        let dis = normal_closure(n, &translations, &seeds, cap)?;
        Ok(Self { q: q.clone(), translations, inverses, lmlt, dis })
    }

    pub fn algebra(&self) -> &LeftQuasigroup {
        &self.q
    }

    pub fn degree(&self) -> usize {
        self.q.order()
    }

    pub fn translation(&self, x: usize) -> &Permutation {
        &self.translations[x]
    }

    /// `L_x L_y⁻¹`.
    pub fn displacement(&self, x: usize, y: usize) -> Permutation {
        self.translations[x].compose(&self.inverses[y])
    }

    pub fn lmlt(&self) -> &PermGroup {
        &self.lmlt
    }

    pub fn dis(&self) -> &PermGroup {
        &self.dis
    }

    /// `Dis_α`: normal closure in `LMlt(Q)` of `{L_x L_y⁻¹ : x α y}`.
    ///
    /// Within a block with least element `r`, `L_x L_y⁻¹ = (L_x L_r⁻¹)(L_y L_r⁻¹)⁻¹`,
    /// so the displacements against `r` suffice as seeds.
    pub fn dis_sub(&self, alpha: &Partition) -> Result<PermGroup> {
        let n = self.degree();
        let reps = alpha.representatives();
        let seeds: Vec<Permutation> = (0..n)
            .filter_map(|x| {
                let r = reps[alpha.block_of(x)];
                (r != x).then(|| self.displacement(x, r))
            })
            .collect();
        normal_closure(n, &self.translations, &seeds, DEFAULT_ENUMERATION_CAP)
    }

    /// `Dis^α = {h ∈ Dis(Q) : h(x) α x for all x}`.
    pub fn dis_ker(&self, alpha: &Partition) -> Result<PermGroup> {
        self.dis.filter(|h| moves_within(h, alpha))
    }

    /// `LMlt^α = {h ∈ LMlt(Q) : h(x) α x for all x}`, the kernel of `π_α`.
    pub fn lmlt_ker(&self, alpha: &Partition) -> Result<PermGroup> {
        self.lmlt.filter(|h| moves_within(h, alpha))
    }

    /// `Dis(Q)_{[x]_α} = {h ∈ Dis(Q) : h(x) α x}`.
    pub fn block_stabilizer(&self, alpha: &Partition, x: usize) -> Result<PermGroup> {
        self.dis.filter(|h| alpha.related(h.apply(x), x))
    }

    pub fn tagged(&self, kind: GroupKind) -> Result<GroupTag> {
        let group = match &kind {
            GroupKind::LMlt => self.lmlt.clone(),
            GroupKind::Dis => self.dis.clone(),
            GroupKind::DisSub(a) => self.dis_sub(a)?,
            GroupKind::DisKer(a) => self.dis_ker(a)?,
            GroupKind::LMltKer(a) => self.lmlt_ker(a)?,
            GroupKind::BlockStab(a, x) => self.block_stabilizer(a, *x)?,
            GroupKind::Center => self.dis.center()?,
            GroupKind::Custom(name) => {
                return Err(Error::MalformedInput(format!("custom group {name:?} has no generator")))
            }
        };
        Ok(GroupTag { kind, group })
    }

    /// `Con_N`: `x ~ y` iff `L_x L_y⁻¹ ∈ N`.
    pub fn con_of_group(&self, n: &PermGroup) -> Partition {
        let size = self.degree();
        let mut uf = congruence::UnionFind::new(size);
        for x in 0..size {
            for y in (x + 1)..size {
                if n.contains(&self.displacement(x, y)) {
                    uf.union(x, y);
                }
            }
        }
        uf.into_partition()
    }

    /// `σ_N`: `x ~ y` iff `N_x = N_y`. Requires `N ⊴ LMlt(Q)`.
    pub fn sigma(&self, n: &PermGroup) -> Result<Partition> {
        if !n.is_normal_in(&self.lmlt) {
            return Err(Error::NotNormal);
        }
        let elems = n.require_elements()?;
        let words = elems.len().div_ceil(64);
        let stabilizers: Vec<Vec<u64>> = (0..self.degree())
            .map(|x| {
                let mut bits = vec![0u64; words];
                for (i, g) in elems.iter().enumerate() {
                    if g.apply(x) == x {
                        bits[i / 64] |= 1 << (i % 64);
                    }
                }
                bits
            })
            .collect();
        Ok(Partition::from_labels(&stabilizers.iter().collect::<Vec<_>>()))
    }

    /// `σ_Q = σ_{Dis(Q)}`.
    pub fn sigma_q(&self) -> Result<Partition> {
        self.sigma(&self.dis)
    }

    pub fn admissibility(&self, n: &PermGroup) -> Result<Admissibility> {
        let normal = n.is_normal_in(&self.lmlt);
        let admissible = normal && self.dis_sub(&n.orbits())?.is_subgroup_of(n);
        Ok(Admissibility { normal, admissible, below_dis: admissible && n.is_subgroup_of(&self.dis) })
    }

    pub fn is_admissible(&self, n: &PermGroup) -> Result<bool> {
        Ok(self.admissibility(n)?.admissible)
    }

    /// `π_α(h)` on the block indices of `Q/α`.
    pub fn pi_push(&self, alpha: &Partition, h: &Permutation) -> Result<Permutation> {
        let k = alpha.num_blocks();
        let mut img = vec![usize::MAX; k];
        for x in 0..self.degree() {
            let (b, c) = (alpha.block_of(x), alpha.block_of(h.apply(x)));
            if img[b] == usize::MAX {
                img[b] = c;
            } else if img[b] != c {
                return Err(Error::NotWellDefined);
            }
        }
        Permutation::from_images(img).map_err(|_| Error::NotWellDefined)
    }

    /// `π_α(N) ≤ LMlt(Q/α)`, generated by the images of the generators of `N`.
    pub fn pi_image(&self, alpha: &Partition, n: &PermGroup) -> Result<PermGroup> {
        let gens = n.generators().iter().map(|h| self.pi_push(alpha, h)).collect::<Result<Vec<_>>>()?;
        PermGroup::generated(alpha.num_blocks(), &gens, DEFAULT_ENUMERATION_CAP)
    }

    /// `π_α⁻¹(K) ≤ LMlt(Q)`.
    pub fn pi_preimage(&self, alpha: &Partition, k: &PermGroup) -> Result<PermGroup> {
        let elems = self.lmlt.require_elements()?;
        let mut keep = Vec::new();
        for h in elems {
            if k.contains(&self.pi_push(alpha, h)?) {
                keep.push(h.clone());
            }
        }
        Ok(PermGroup::from_elements(self.degree(), keep))
    }

    /// The pool standing in for `Norm(Q)`: operator images over `Con(Q)` and
    /// `Z(Dis(Q))`, deduplicated and filtered to admissible subgroups.
    pub fn admissible_pool(&self, lattice: &CongruenceLattice) -> Result<Vec<GroupTag>> {
        let mut candidates = Vec::new();
        for a in lattice.congruences() {
            candidates.push(GroupKind::DisSub(a.clone()));
            candidates.push(GroupKind::DisKer(a.clone()));
            candidates.push(GroupKind::LMltKer(a.clone()));
        }
        candidates.push(GroupKind::Center);
        let mut seen: HashMap<Vec<Permutation>, ()> = HashMap::new();
        let mut pool = Vec::new();
        for kind in candidates {
            let tag = self.tagged(kind)?;
            let key = tag.group.require_elements()?.to_vec();
            if seen.insert(key, ()).is_some() {
                continue;
            }
            if self.is_admissible(&tag.group)? {
                pool.push(tag);
            }
        }
        Ok(pool)
    }
}

fn moves_within(h: &Permutation, alpha: &Partition) -> bool {
    (0..h.degree()).all(|x| alpha.related(h.apply(x), x))
}

/// `O_N`, the orbit partition.
pub fn orbit_equivalence(n: &PermGroup) -> Partition {
    n.orbits()
}

/// `λ_Q`: `x ~ y` iff `L_x = L_y`.
pub fn cayley_kernel(q: &LeftQuasigroup) -> Partition {
    Partition::from_labels(&(0..q.order()).map(|x| q.row(x)).collect::<Vec<_>>())
}

/// `λ_Q` is a congruence.
pub fn is_cayley(q: &LeftQuasigroup) -> bool {
    congruence::is_congruence(q, &cayley_kernel(q))
}

pub fn lmlt(q: &LeftQuasigroup) -> Result<PermGroup> {
    Ok(Groups::new(q)?.lmlt)
}

pub fn dis(q: &LeftQuasigroup) -> Result<PermGroup> {
    Ok(Groups::new(q)?.dis)
}

/// Per-congruence operator values, as reported by [`galois_verify`].
#[derive(Clone, Debug, Serialize)]
pub struct CongruenceRecord {
    pub alpha: Partition,
    pub dis_sub_order: usize,
    pub dis_ker_order: usize,
    pub lmlt_ker_order: usize,
    pub o_dis_sub: Partition,
    pub o_dis_ker: Partition,
    pub con_dis_sub: Partition,
    pub admissible_pool_checks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisReport {
    pub pool_size: usize,
    pub records: Vec<CongruenceRecord>,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl GaloisReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `O_N ≤ α ⟺ N ≤ Dis^α` for every congruence and every pool member
/// of `Norm′(Q)`, monotonicity of both operators, and the chain
/// `O_{Dis_α} ≤ O_{Dis^α} ≤ O_{LMlt^α} ≤ α ≤ Con_{Dis_α} ≤ Con_{Dis^α}`.
pub fn galois_verify(q: &LeftQuasigroup) -> Result<GaloisReport> {
    let g = Groups::new(q)?;
    let lattice = CongruenceLattice::build(q, congruence::DEFAULT_LATTICE_CAP)?;
    galois_verify_with(&g, &lattice)
}

pub fn galois_verify_with(g: &Groups, lattice: &CongruenceLattice) -> Result<GaloisReport> {
    let mut violations = Vec::new();
    let mut checks = 0usize;
    let cons = lattice.congruences();

    let dis_sub: Vec<PermGroup> = cons.iter().map(|a| g.dis_sub(a)).collect::<Result<_>>()?;
    let dis_ker: Vec<PermGroup> = cons.iter().map(|a| g.dis_ker(a)).collect::<Result<_>>()?;
    let lmlt_ker: Vec<PermGroup> = cons.iter().map(|a| g.lmlt_ker(a)).collect::<Result<_>>()?;

    // the operator images must themselves be admissible
    for (i, a) in cons.iter().enumerate() {
        for (name, n) in [("Dis_a", &dis_sub[i]), ("Dis^a", &dis_ker[i]), ("LMlt^a", &lmlt_ker[i])] {
            checks += 1;
            if !g.is_admissible(n)? {
                violations.push(format!("{name} not admissible for a = {a}"));
            }
        }
    }

    let mut pool: Vec<GroupTag> = Vec::new();
    for tag in g.admissible_pool(lattice)? {
        if tag.group.is_subgroup_of(g.dis()) {
            pool.push(tag);
        }
    }
    let orbits: Vec<Partition> = pool.iter().map(|t| t.group.orbits()).collect();

    let mut records = Vec::new();
    for (i, a) in cons.iter().enumerate() {
        let mut local = 0;
        for (t, o) in pool.iter().zip(&orbits) {
            local += 1;
            let left = o.leq(a);
            let right = t.group.is_subgroup_of(&dis_ker[i]);
            if left != right {
                violations.push(format!(
                    "O_N <= a is {left} but N <= Dis^a is {right} for N = {}, a = {a}",
                    t.kind
                ));
            }
        }
        checks += local;

        let o_sub = dis_sub[i].orbits();
        let o_ker = dis_ker[i].orbits();
        let o_lmlt = lmlt_ker[i].orbits();
        let con_sub = g.con_of_group(&dis_sub[i]);
        let con_ker = g.con_of_group(&dis_ker[i]);
        let chain = [&o_sub, &o_ker, &o_lmlt, a, &con_sub, &con_ker];
        for w in chain.windows(2) {
            checks += 1;
            if !w[0].leq(w[1]) {
                violations.push(format!("closure chain breaks at [{}] <= [{}] for a = {a}", w[0], w[1]));
            }
        }
        checks += 1;
        if !dis_sub[i].is_subgroup_of(&dis_ker[i]) {
            violations.push(format!("Dis_a not below Dis^a for a = {a}"));
        }

        records.push(CongruenceRecord {
            alpha: a.clone(),
            dis_sub_order: dis_sub[i].order(),
            dis_ker_order: dis_ker[i].order(),
            lmlt_ker_order: lmlt_ker[i].order(),
            o_dis_sub: o_sub,
            o_dis_ker: o_ker,
            con_dis_sub: con_sub,
            admissible_pool_checks: local,
        });
    }

    for i in 0..cons.len() {
        for j in 0..cons.len() {
            if lattice.leq(i, j) {
                checks += 1;
                if !dis_ker[i].is_subgroup_of(&dis_ker[j]) {
                    violations.push(format!("Dis^* not monotone on [{}] <= [{}]", cons[i], cons[j]));
                }
            }
        }
    }
    for (s, os) in pool.iter().zip(&orbits) {
        for (t, ot) in pool.iter().zip(&orbits) {
            if s.group.is_subgroup_of(&t.group) {
                checks += 1;
                if !os.leq(ot) {
                    violations.push(format!("O_* not monotone on {} <= {}", s.kind, t.kind));
                }
            }
        }
    }

    Ok(GaloisReport { pool_size: pool.len(), records, checks, violations })
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub alpha: Partition,
    pub betas_checked: usize,
    pub pool_above: usize,
    pub quotient_pool: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl CorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For `β ≥ α`: `π_α(Dis_β) = Dis_{β/α}`, `π_α(Dis^β) = Dis^{β/α}`,
/// `π_α(LMlt^β) = LMlt^{β/α}`; and `N ↦ π_α(N)` is a lattice bijection
/// between the pool above `LMlt^α` and the pool of `Q/α`, restricting to
/// the `Norm′` members above `Dis^α`.
pub fn correspondence_verify(q: &LeftQuasigroup, alpha: &Partition) -> Result<CorrespondenceReport> {
    let g = Groups::new(q)?;
    let lattice = CongruenceLattice::build(q, congruence::DEFAULT_LATTICE_CAP)?;
    correspondence_verify_with(&g, &lattice, alpha)
}

pub fn correspondence_verify_with(
    g: &Groups,
    lattice: &CongruenceLattice,
    alpha: &Partition,
) -> Result<CorrespondenceReport> {
    let (quot, _) = congruence::quotient(g.algebra(), alpha)?;
    let gq = Groups::new(&quot)?;
    let lq = CongruenceLattice::build(&quot, congruence::DEFAULT_LATTICE_CAP)?;
    let mut violations = Vec::new();
    let mut checks = 0usize;
    let mut betas = 0usize;

    for beta in lattice.congruences().iter().filter(|b| alpha.leq(b)) {
        betas += 1;
        let bq = congruence::quotient_congruence(alpha, beta)?;
        let pairs = [
            ("Dis_b", g.dis_sub(beta)?, gq.dis_sub(&bq)?),
            ("Dis^b", g.dis_ker(beta)?, gq.dis_ker(&bq)?),
            ("LMlt^b", g.lmlt_ker(beta)?, gq.lmlt_ker(&bq)?),
        ];
        for (name, up, down) in pairs {
            checks += 1;
            if !g.pi_image(alpha, &up)?.same_as(&down) {
                violations.push(format!("pi({name}) differs from its quotient counterpart for b = {beta}"));
            }
        }
    }

    let lmlt_ker = g.lmlt_ker(alpha)?;
    let dis_ker = g.dis_ker(alpha)?;
    let pool = g.admissible_pool(lattice)?;
    let above: Vec<&GroupTag> = pool.iter().filter(|t| lmlt_ker.is_subgroup_of(&t.group)).collect();
    let images: Vec<PermGroup> = above.iter().map(|t| g.pi_image(alpha, &t.group)).collect::<Result<_>>()?;
    for (t, k) in above.iter().zip(&images) {
        checks += 2;
        if !gq.is_admissible(k)? {
            violations.push(format!("pi({}) not admissible in the quotient", t.kind));
        }
        if !g.pi_preimage(alpha, k)?.same_as(&t.group) {
            violations.push(format!("pi^-1(pi({})) differs from it", t.kind));
        }
    }
    for i in 0..above.len() {
        for j in 0..i {
            let (n, m) = (&above[i].group, &above[j].group);
            let meet = n.intersection(m)?;
            let join = n.join(m)?;
            checks += 3;
            if !g.pi_image(alpha, &meet)?.same_as(&images[i].intersection(&images[j])?) {
                violations.push(format!("pi does not preserve {} meet {}", above[i].kind, above[j].kind));
            }
            if !g.pi_image(alpha, &join)?.same_as(&images[i].join(&images[j])?) {
                violations.push(format!("pi does not preserve {} join {}", above[i].kind, above[j].kind));
            }
            if !g.is_admissible(&join)? {
                violations.push(format!("{} join {} not admissible", above[i].kind, above[j].kind));
            }
        }
    }

    let quotient_pool = gq.admissible_pool(&lq)?;
    for t in &quotient_pool {
        let h = g.pi_preimage(alpha, &t.group)?;
        checks += 3;
        if !g.is_admissible(&h)? {
            violations.push(format!("preimage of quotient {} not admissible", t.kind));
        }
        if !lmlt_ker.is_subgroup_of(&h) {
            violations.push(format!("preimage of quotient {} misses LMlt^a", t.kind));
        }
        if !g.pi_image(alpha, &h)?.same_as(&t.group) {
            violations.push(format!("pi(pi^-1({})) differs from it", t.kind));
        }

        // the restriction to Norm′
        if t.group.is_subgroup_of(gq.dis()) {
            let h_dis = h.intersection(g.dis())?;
            checks += 3;
            if !g.admissibility(&h_dis)?.below_dis {
                violations.push(format!("Dis-preimage of quotient {} not in Norm'", t.kind));
            }
            if !dis_ker.is_subgroup_of(&h_dis) {
                violations.push(format!("Dis-preimage of quotient {} misses Dis^a", t.kind));
            }
            if !g.pi_image(alpha, &h_dis)?.same_as(&t.group) {
                violations.push(format!("pi of the Dis-preimage of quotient {} differs from it", t.kind));
            }
        }
    }
    for t in pool.iter().filter(|t| dis_ker.is_subgroup_of(&t.group) && t.group.is_subgroup_of(g.dis())) {
        let k = g.pi_image(alpha, &t.group)?;
        checks += 2;
        if !gq.admissibility(&k)?.below_dis {
            violations.push(format!("pi({}) not in Norm' of the quotient", t.kind));
        }
        if !g.pi_preimage(alpha, &k)?.intersection(g.dis())?.same_as(&t.group) {
            violations.push(format!("Dis-preimage of pi({}) differs from it", t.kind));
        }
    }

    Ok(CorrespondenceReport {
        alpha: alpha.clone(),
        betas_checked: betas,
        pool_above: above.len(),
        quotient_pool: quotient_pool.len(),
        checks,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> LeftQuasigroup {
        LeftQuasigroup::from_fn(3, |x, y| (6 + 2 * x - y) % 3).unwrap()
    }

    /// Dihedral-3 × P_2; the kernel of the projection onto P_2 relates
    /// elements with the same second coordinate.
    fn d3_p2() -> (LeftQuasigroup, Partition) {
        let q = d3().direct_product(&LeftQuasigroup::projection(2), 12).unwrap();
        let labels: Vec<usize> = (0..6).map(|i| i % 2).collect();
        (q, Partition::from_labels(&labels))
    }

    #[test]
    fn lmlt_and_dis_examples() {
        for n in 1..=4 {
            let g = Groups::new(&LeftQuasigroup::projection(n)).unwrap();
            assert!(g.lmlt().is_trivial() && g.dis().is_trivial());
        }
        let g = Groups::new(&d3()).unwrap();
        assert_eq!(g.lmlt().order(), 6);
        assert_eq!(g.dis().order(), 3);
        assert_eq!(orbit_equivalence(g.dis()), Partition::full(3));
    }

    #[test]
    fn dis_of_order_four_affine_quandles() {
        // Over Z_4 with f = -1 the Cayley kernel is nontrivial and Dis = {x ↦ x + 2k}.
        let r4 = LeftQuasigroup::from_fn(4, |x, y| (8 + 2 * x - y) % 4).unwrap();
        assert!(!r4.is_faithful());
        assert_eq!(dis(&r4).unwrap().order(), 2);
        // The faithful latin one lives over Z_2², with f of order 3: Dis is the translation group.
        let f = |v: usize| ((v & 1) << 1 | ((v >> 1) ^ (v & 1))) & 3;
        let g = |v: usize| v ^ f(v);
        let t = LeftQuasigroup::from_fn(4, |x, y| g(x) ^ f(y)).unwrap();
        let c = t.classify();
        assert!(c.quandle && c.latin && c.faithful);
        let d = dis(&t).unwrap();
        assert_eq!(d.order(), 4);
        assert!(d.report().regular);
    }

    #[test]
    fn dis_sub_examples() {
        let q = d3();
        let g = Groups::new(&q).unwrap();
        assert!(g.dis_sub(&Partition::discrete(3)).unwrap().is_trivial());
        assert!(g.dis_sub(&Partition::full(3)).unwrap().same_as(g.dis()));
        let (q, kernel) = d3_p2();
        let g = Groups::new(&q).unwrap();
        assert_eq!(g.dis_sub(&kernel).unwrap().order(), 3);
    }

    #[test]
    fn dis_ker_and_lmlt_ker_examples() {
        let g = Groups::new(&d3()).unwrap();
        assert!(g.dis_ker(&Partition::full(3)).unwrap().same_as(g.dis()));
        assert!(g.dis_ker(&Partition::discrete(3)).unwrap().is_trivial());
        assert!(g.lmlt_ker(&Partition::discrete(3)).unwrap().is_trivial());
        assert!(g.lmlt_ker(&Partition::full(3)).unwrap().same_as(g.lmlt()));
        let p4 = Groups::new(&LeftQuasigroup::projection(4)).unwrap();
        assert!(p4.lmlt_ker(&Partition::parse(4, "0 1 | 2 3").unwrap()).unwrap().is_trivial());
    }

    #[test]
    fn lmlt_ker_is_the_kernel_of_pi() {
        let (q, kernel) = d3_p2();
        let g = Groups::new(&q).unwrap();
        let ker = g.lmlt_ker(&kernel).unwrap();
        for h in g.lmlt().elements().unwrap() {
            assert_eq!(g.pi_push(&kernel, h).unwrap().is_identity(), ker.contains(h));
        }
    }

    #[test]
    fn pi_push_examples() {
        let (q, kernel) = d3_p2();
        let g = Groups::new(&q).unwrap();
        let id = Permutation::identity(6);
        assert!(g.pi_push(&kernel, &id).unwrap().is_identity());
        assert_eq!(g.pi_push(&Partition::full(6), g.translation(3)).unwrap().degree(), 1);
        assert!(g.pi_push(&kernel, g.translation(0)).unwrap().is_identity());
        let swap = Permutation::from_cycles(6, &[&[0, 1]]).unwrap();
        assert_eq!(g.pi_push(&Partition::parse(6, "0 2 | 1 3 | 4 5").unwrap(), &swap), Err(Error::NotWellDefined));
    }

    #[test]
    fn con_of_group_and_cayley_kernel() {
        let g = Groups::new(&d3()).unwrap();
        assert_eq!(g.con_of_group(g.lmlt()), Partition::full(3));
        assert_eq!(g.con_of_group(&PermGroup::trivial(3)), Partition::discrete(3));
        let p2 = Groups::new(&LeftQuasigroup::projection(2)).unwrap();
        assert_eq!(p2.con_of_group(&PermGroup::trivial(2)), Partition::full(2));
        assert_eq!(cayley_kernel(&LeftQuasigroup::projection(3)), Partition::full(3));
        assert_eq!(cayley_kernel(&d3()), Partition::discrete(3));
        let aff = LeftQuasigroup::from_fn(4, |x, y| (2 * x + 3 * y) % 4).unwrap();
        assert_eq!(cayley_kernel(&aff), Partition::parse(4, "0 2 | 1 3").unwrap());
        assert!(is_cayley(&aff));
    }

    #[test]
    fn sigma_examples() {
        let g = Groups::new(&d3()).unwrap();
        // Dis(dihedral-3) is regular
        assert_eq!(g.sigma_q().unwrap(), Partition::full(3));
        assert_eq!(g.sigma(&PermGroup::trivial(3)).unwrap(), Partition::full(3));
        // S_3 on three points has three distinct point stabilizers
        assert_eq!(g.sigma(g.lmlt()).unwrap(), Partition::discrete(3));
        let t = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let not_normal = PermGroup::generated(3, &[t], 10).unwrap();
        assert_eq!(g.sigma(&not_normal), Err(Error::NotNormal));
    }

    #[test]
    fn admissibility_examples() {
        let (q, kernel) = d3_p2();
        let g = Groups::new(&q).unwrap();
        assert!(g.is_admissible(g.lmlt()).unwrap());
        assert!(g.is_admissible(&PermGroup::trivial(6)).unwrap());
        for a in [&kernel, &Partition::full(6), &Partition::discrete(6)] {
            assert!(g.admissibility(&g.dis_sub(a).unwrap()).unwrap().below_dis);
            assert!(g.admissibility(&g.dis_ker(a).unwrap()).unwrap().below_dis);
            assert!(g.is_admissible(&g.lmlt_ker(a).unwrap()).unwrap());
        }
    }

    #[test]
    fn galois_examples() {
        for q in [LeftQuasigroup::projection(3), d3(), d3_p2().0] {
            let r = galois_verify(&q).unwrap();
            assert!(r.holds(), "{:?}", r.violations);
        }
        let r = galois_verify(&d3()).unwrap();
        let top = r.records.last().unwrap();
        assert_eq!(top.dis_ker_order, 3);
        assert_eq!(top.o_dis_ker, Partition::full(3));
    }

    #[test]
    fn correspondence_examples() {
        let (q, kernel) = d3_p2();
        for a in [Partition::discrete(6), Partition::full(6), kernel] {
            let r = correspondence_verify(&q, &a).unwrap();
            assert!(r.holds(), "{:?}", r.violations);
            assert!(r.betas_checked >= 1);
        }
    }
}
