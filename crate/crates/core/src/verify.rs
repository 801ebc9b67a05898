//! Lemma checks over single instances, with per-instance caching and
//! replayable counterexamples.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::census;
use crate::commutator::{self, definitional, CentralSeries};
use crate::congruence::{self, CongruenceLattice, Partition};
use crate::error::{Error, Result};
use crate::extension;
use crate::galois::{self, GroupTag, Groups};
use crate::maltsev::{self, MaltsevResult, MaltsevStatus};
use crate::perm::{internal_direct_product, normalizer, PermGroup, Permutation};
use crate::table::LeftQuasigroup;

/// Result of one check on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    /// `table` is the instance in `.lq` form; `witness` names what broke.
    Fail { table: String, witness: String },
    Skipped { reason: String },
    Unknown { reason: String },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail { .. } => "fail",
            Verdict::Skipped { .. } => "skipped",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub id: &'static str,
    /// Predicates an instance must satisfy for the check to apply.
    pub scope: &'static str,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// What a check function reports before the table is attached.
enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
    Unknown(String),
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Ok(Outcome::Fail(format!($($fmt)+)));
        }
    };
}

macro_rules! scope {
    ($cond:expr, $why:expr) => {
        if !$cond {
            return Ok(Outcome::Skip($why.to_string()));
        }
    };
}

fn cached<T>(cell: &OnceCell<T>, init: impl FnOnce() -> Result<T>) -> Result<&T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = init()?;
    Ok(cell.get_or_init(|| v))
}

/// One instance with its derived structure computed on demand and shared
/// between checks.
pub struct Context {
    q: LeftQuasigroup,
    budget: usize,
    groups: OnceCell<Groups>,
    lattice: OnceCell<CongruenceLattice>,
    dis_sub: OnceCell<Vec<PermGroup>>,
    dis_ker: OnceCell<Vec<PermGroup>>,
    pool: OnceCell<Vec<GroupTag>>,
    center: OnceCell<Partition>,
    series: OnceCell<CentralSeries>,
    maltsev: OnceCell<MaltsevResult>,
    superconnected: OnceCell<bool>,
    connected_by_dis: OnceCell<bool>,
}

impl Context {
    pub fn new(q: LeftQuasigroup) -> Self {
        Self::with_budget(q, maltsev::DEFAULT_BUDGET)
    }

    pub fn with_budget(q: LeftQuasigroup, budget: usize) -> Self {
        Self {
            q,
            budget,
            groups: OnceCell::new(),
            lattice: OnceCell::new(),
            dis_sub: OnceCell::new(),
            dis_ker: OnceCell::new(),
            pool: OnceCell::new(),
            center: OnceCell::new(),
            series: OnceCell::new(),
            maltsev: OnceCell::new(),
            superconnected: OnceCell::new(),
            connected_by_dis: OnceCell::new(),
        }
    }

    pub fn algebra(&self) -> &LeftQuasigroup {
        &self.q
    }

    pub fn groups(&self) -> Result<&Groups> {
        cached(&self.groups, || Groups::new(&self.q))
    }

    pub fn lattice(&self) -> Result<&CongruenceLattice> {
        cached(&self.lattice, || CongruenceLattice::build(&self.q, congruence::DEFAULT_LATTICE_CAP))
    }

    /// `Dis_α` for every congruence, in lattice order.
    pub fn dis_subs(&self) -> Result<&[PermGroup]> {
        cached(&self.dis_sub, || {
            let g = self.groups()?;
            self.lattice()?.congruences().iter().map(|a| g.dis_sub(a)).collect()
        })
        .map(Vec::as_slice)
    }

    /// `Dis^α` for every congruence, in lattice order.
    pub fn dis_kers(&self) -> Result<&[PermGroup]> {
        cached(&self.dis_ker, || {
            let g = self.groups()?;
            self.lattice()?.congruences().iter().map(|a| g.dis_ker(a)).collect()
        })
        .map(Vec::as_slice)
    }

    pub fn pool(&self) -> Result<&[GroupTag]> {
        cached(&self.pool, || self.groups()?.admissible_pool(self.lattice()?)).map(Vec::as_slice)
    }

    pub fn center(&self) -> Result<&Partition> {
        cached(&self.center, || commutator::center(&self.q))
    }

    pub fn central_series(&self) -> Result<&CentralSeries> {
        cached(&self.series, || commutator::central_series(&self.q))
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.central_series()?.is_nilpotent())
    }

    pub fn maltsev(&self) -> &MaltsevResult {
        self.maltsev.get_or_init(|| maltsev::maltsev_search(&self.q, self.budget))
    }

    pub fn is_superconnected(&self) -> Result<bool> {
        cached(&self.superconnected, || maltsev::is_superconnected(&self.q)).copied()
    }

    pub fn is_connected_by_dis(&self) -> Result<bool> {
        cached(&self.connected_by_dis, || maltsev::is_connected_by_dis(&self.q)).copied()
    }

    fn central_congruences(&self) -> Result<Vec<usize>> {
        let zeta = self.center()?;
        let lattice = self.lattice()?;
        Ok((0..lattice.len()).filter(|&i| lattice.get(i).leq(zeta)).collect())
    }
}

type CheckFn = fn(&Context) -> Result<Outcome>;

/// A named check with the module it belongs to.
pub struct Lemma {
    pub id: &'static str,
    pub module: &'static str,
    pub scope: &'static str,
    check: CheckFn,
}

impl Lemma {
    pub fn run(&self, ctx: &Context) -> LemmaCheck {
        let verdict = match (self.check)(ctx) {
            Ok(Outcome::Pass) => Verdict::Pass,
            Ok(Outcome::Fail(witness)) => Verdict::Fail { table: ctx.q.to_lq(), witness },
            Ok(Outcome::Skip(reason)) => Verdict::Skipped { reason },
            Ok(Outcome::Unknown(reason)) => Verdict::Unknown { reason },
            Err(e @ Error::CapExceeded { .. }) => Verdict::Unknown { reason: e.to_string() },
            // any other error inside a check is itself a failure to replay
            Err(e) => Verdict::Fail { table: ctx.q.to_lq(), witness: format!("error: {e}") },
        };
        LemmaCheck { id: self.id, scope: self.scope, verdict }
    }
}

impl fmt::Debug for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)
    }
}

fn congruence_pairs(ctx: &Context) -> Result<impl Iterator<Item = (usize, usize)>> {
    let k = ctx.lattice()?.len();
    Ok((0..k).flat_map(move |i| (0..k).map(move |j| (i, j))))
}

// table

fn check_axioms(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let n = q.order();
    for x in 0..n {
        for y in 0..n {
            ensure!(q.mul(x, q.ldiv(x, y)) == y, "x·(x\\y) ≠ y at x={x}, y={y}");
            ensure!(q.ldiv(x, q.mul(x, y)) == y, "x\\(x·y) ≠ y at x={x}, y={y}");
        }
    }
    Ok(Outcome::Pass)
}

fn check_quandle_flag(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.classify().quandle, "not a quandle");
    let n = q.order();
    for x in 0..n {
        ensure!(q.mul(x, x) == x, "{x}·{x} ≠ {x}");
        for y in 0..n {
            for z in 0..n {
                ensure!(q.mul(x, q.mul(y, z)) == q.mul(q.mul(x, y), q.mul(x, z)), "not distributive at {x},{y},{z}");
            }
        }
    }
    Ok(Outcome::Pass)
}

fn check_superfaithful_pairs(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    let n = q.order();
    let no_pair = (0..n).all(|x| (0..n).all(|y| x == y || !(q.mul(x, y) == y && q.mul(y, x) == x)));
    ensure!(q.is_superfaithful() == no_pair, "superfaithful={} but pair criterion={no_pair}", q.is_superfaithful());
    Ok(Outcome::Pass)
}

fn check_latin_fix_superfaithful(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    let r = q.classify();
    ensure!(!r.latin || r.fix_property, "latin without the fixed-point property");
    ensure!(!r.fix_property || r.superfaithful, "fixed-point property without superfaithfulness");
    Ok(Outcome::Pass)
}

fn check_subuniverses(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let n = q.order();
    let subs = q.subuniverses(crate::table::DEFAULT_ORDER_CAP)?;
    for s in &subs {
        let mut inside = vec![false; n];
        s.iter().for_each(|&x| inside[x] = true);
        for &a in s {
            for &b in s {
                ensure!(inside[q.mul(a, b)] && inside[q.ldiv(a, b)], "{s:?} not closed at {a},{b}");
            }
        }
    }
    // every closed subset is reported
    if n <= 8 {
        let mut count = 0;
        for mask in 1u32..(1 << n) {
            let closed = (0..n).filter(|&a| mask >> a & 1 == 1).all(|a| {
                (0..n).filter(|&b| mask >> b & 1 == 1).all(|b| mask >> q.mul(a, b) & 1 == 1 && mask >> q.ldiv(a, b) & 1 == 1)
            });
            count += closed as usize;
        }
        ensure!(count == subs.len(), "{} closed subsets but {} reported", count, subs.len());
    }
    Ok(Outcome::Pass)
}

// perm

fn check_orbit_stabilizer(ctx: &Context) -> Result<Outcome> {
    let g = ctx.groups()?;
    for (name, group) in [("LMlt", g.lmlt()), ("Dis", g.dis())] {
        for x in 0..ctx.q.order() {
            let orbit = group.orbit(x).len();
            let stab = group.stabilizer(x)?.order();
            ensure!(orbit * stab == group.order(), "{name}: |orbit of {x}|·|stab| = {orbit}·{stab} ≠ {}", group.order());
        }
    }
    Ok(Outcome::Pass)
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    census::permutations(n)
        .into_iter()
        .map(|p| Permutation::from_images(p.into_iter().map(usize::from).collect()).expect("bijection"))
        .collect()
}

fn check_membership(ctx: &Context) -> Result<Outcome> {
    let n = ctx.q.order();
    scope!(n <= 6, "symmetric group too large to scan");
    let g = ctx.groups()?;
    for group in [g.lmlt(), g.dis()] {
        let elems = group.require_elements()?;
        for p in all_permutations(n) {
            ensure!(group.contains(&p) == elems.contains(&p), "membership of {p:?} disagrees with the element list");
        }
    }
    Ok(Outcome::Pass)
}

fn check_normal_closure(ctx: &Context) -> Result<Outcome> {
    let g = ctx.groups()?;
    for x in 0..ctx.q.order() {
        let l = g.translation(x);
        for h in g.dis().generators() {
            ensure!(g.dis().contains(&h.conjugate_by(l)), "Dis not invariant under conjugation by L_{x}");
        }
    }
    Ok(Outcome::Pass)
}

fn check_regular(ctx: &Context) -> Result<Outcome> {
    let g = ctx.groups()?;
    let n = ctx.q.order();
    for group in [g.lmlt(), g.dis()] {
        let a = group.is_semiregular() && group.is_transitive();
        let b = group.is_transitive() && group.order() == n;
        ensure!(a == b, "semiregular ∧ transitive = {a} but transitive ∧ |G| = n is {b}");
    }
    Ok(Outcome::Pass)
}

// congruence

fn check_principal_least(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let lattice = ctx.lattice()?;
    for a in 0..q.order() {
        for b in (a + 1)..q.order() {
            let c = congruence::principal_congruence(q, a, b);
            ensure!(congruence::is_congruence(q, &c), "Cg({a},{b}) is not a congruence");
            for d in lattice.congruences() {
                ensure!(!d.related(a, b) || c.leq(d), "Cg({a},{b}) = [{c}] not below [{d}]");
            }
        }
    }
    Ok(Outcome::Pass)
}

/// Every partition of `0..n` as restricted growth strings.
fn all_partitions(n: usize) -> Vec<Partition> {
    fn fill(i: usize, max: u8, labels: &mut Vec<u8>, out: &mut Vec<Partition>) {
        if i == labels.len() {
            out.push(Partition::from_labels(labels));
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            fill(i + 1, max.max(l), labels, out);
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        fill(1, 0, &mut vec![0u8; n], &mut out);
    }
    out
}

fn check_lattice_closed(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let lattice = ctx.lattice()?;
    ensure!(lattice.is_closed(q), "lattice not closed under meet and join");
    if q.order() <= 7 {
        let found = all_partitions(q.order()).into_iter().filter(|p| congruence::is_congruence(q, p)).count();
        ensure!(found == lattice.len(), "{found} congruences by brute force, {} in the lattice", lattice.len());
    }
    Ok(Outcome::Pass)
}

fn check_second_isomorphism(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let lattice = ctx.lattice()?;
    for alpha in lattice.congruences() {
        let (qa, _) = congruence::quotient(q, alpha)?;
        for beta in lattice.congruences().iter().filter(|b| alpha.leq(b)) {
            let ba = congruence::quotient_congruence(alpha, beta)?;
            let (twice, _) = congruence::quotient(&qa, &ba)?;
            let (once, _) = congruence::quotient(q, beta)?;
            ensure!(
                census::canonical_form(&twice) == census::canonical_form(&once),
                "(Q/[{alpha}])/(β/α) ≇ Q/[{beta}]"
            );
        }
    }
    Ok(Outcome::Pass)
}

fn check_blocks_subalgebras(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    for alpha in ctx.lattice()?.congruences() {
        for block in alpha.blocks() {
            ensure!(q.generated_subalgebra(&block) == block, "block {block:?} of [{alpha}] is not a subuniverse");
        }
    }
    Ok(Outcome::Pass)
}

// galois

fn check_galois_connection(ctx: &Context) -> Result<Outcome> {
    let report = galois::galois_verify_with(ctx.groups()?, ctx.lattice()?)?;
    ensure!(report.holds(), "{}", report.violations.first().cloned().unwrap_or_default());
    Ok(Outcome::Pass)
}

fn check_dis_alpha_chain(ctx: &Context) -> Result<Outcome> {
    let g = ctx.groups()?;
    let lattice = ctx.lattice()?;
    let (subs, kers) = (ctx.dis_subs()?, ctx.dis_kers()?);
    for (i, alpha) in lattice.congruences().iter().enumerate() {
        ensure!(subs[i].is_subgroup_of(&kers[i]), "Dis_α ≰ Dis^α for [{alpha}]");
        let mut meet = g.dis().clone();
        for x in alpha.representatives() {
            meet = meet.intersection(&g.block_stabilizer(alpha, x)?)?;
        }
        ensure!(meet.same_as(&kers[i]), "Dis^α ≠ ⋂ block stabilizers for [{alpha}]");
    }
    Ok(Outcome::Pass)
}

fn check_dis_alpha_meets_joins(ctx: &Context) -> Result<Outcome> {
    let lattice = ctx.lattice()?;
    let (subs, kers) = (ctx.dis_subs()?, ctx.dis_kers()?);
    for (i, j) in congruence_pairs(ctx)? {
        let (m, jn) = (lattice.meet(i, j), lattice.join(i, j));
        ensure!(
            kers[m].same_as(&kers[i].intersection(&kers[j])?),
            "Dis^(α∧β) ≠ Dis^α ∩ Dis^β for α=[{}], β=[{}]",
            lattice.get(i),
            lattice.get(j)
        );
        ensure!(
            subs[jn].same_as(&subs[i].join(&subs[j])?),
            "Dis_(α∨β) ≠ ⟨Dis_α, Dis_β⟩ for α=[{}], β=[{}]",
            lattice.get(i),
            lattice.get(j)
        );
    }
    Ok(Outcome::Pass)
}

fn check_lambda_remark(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let g = ctx.groups()?;
    let lambda = galois::cayley_kernel(q);
    let lattice = ctx.lattice()?;
    let (subs, kers) = (ctx.dis_subs()?, ctx.dis_kers()?);
    for (i, alpha) in lattice.congruences().iter().enumerate() {
        ensure!(alpha.leq(&lambda) == subs[i].is_trivial(), "α ≤ λ disagrees with Dis_α = 1 for [{alpha}]");
        let (qa, _) = congruence::quotient(q, alpha)?;
        let con = g.con_of_group(&kers[i]);
        let expected = congruence::quotient_congruence(alpha, &con)?;
        ensure!(galois::cayley_kernel(&qa) == expected, "λ of Q/[{alpha}] ≠ Con_(Dis^α)/α");
    }
    Ok(Outcome::Pass)
}

fn blocks_connected(q: &LeftQuasigroup, alpha: &Partition) -> Result<bool> {
    for block in alpha.blocks() {
        if !maltsev::is_connected(&q.subalgebra(&block)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_blocks_connected(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    let lattice = ctx.lattice()?;
    let (subs, kers) = (ctx.dis_subs()?, ctx.dis_kers()?);
    for (i, alpha) in lattice.congruences().iter().enumerate() {
        if !blocks_connected(q, alpha)? {
            continue;
        }
        ensure!(&subs[i].orbits() == alpha, "O_(Dis_α) ≠ α = [{alpha}] with connected blocks");
        ensure!(&kers[i].orbits() == alpha, "O_(Dis^α) ≠ α = [{alpha}] with connected blocks");
    }
    Ok(Outcome::Pass)
}

fn check_factor_of_lambda(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let lambda = galois::cayley_kernel(q);
    let lattice = ctx.lattice()?;
    let faithful: Vec<bool> = lattice
        .congruences()
        .iter()
        .map(|a| Ok(congruence::quotient(q, a)?.0.is_faithful()))
        .collect::<Result<_>>()?;
    for (i, alpha) in lattice.congruences().iter().enumerate() {
        ensure!(!faithful[i] || lambda.leq(alpha), "Q/[{alpha}] faithful but λ ≰ α");
    }
    for (i, j) in congruence_pairs(ctx)? {
        if faithful[i] && faithful[j] {
            let m = lattice.meet(i, j);
            ensure!(faithful[m], "faithful quotients by [{}] and [{}] but not by their meet", lattice.get(i), lattice.get(j));
        }
    }
    Ok(Outcome::Pass)
}

fn check_below_lambda(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let g = ctx.groups()?;
    let lattice = ctx.lattice()?;
    let (subs, kers) = (ctx.dis_subs()?, ctx.dis_kers()?);
    for (i, alpha) in lattice.congruences().iter().enumerate() {
        let beta = kers[i].orbits();
        ensure!(g.dis_ker(&beta)?.same_as(&kers[i]), "Dis^α ≠ Dis^β for α=[{alpha}], β=[{beta}]");
        for (name, below) in [("β", beta), ("γ", subs[i].orbits())] {
            let (qb, _) = congruence::quotient(q, &below)?;
            let rel = congruence::quotient_congruence(&below, alpha)?;
            ensure!(rel.leq(&galois::cayley_kernel(&qb)), "α/{name} ≰ λ of Q/{name} for α=[{alpha}], {name}=[{below}]");
        }
    }
    Ok(Outcome::Pass)
}

fn check_strongly_abelian_sublattice(ctx: &Context) -> Result<Outcome> {
    let lambda = galois::cayley_kernel(&ctx.q);
    let lattice = ctx.lattice()?;
    for (i, j) in congruence_pairs(ctx)? {
        if lattice.get(i).leq(&lambda) && lattice.get(j).leq(&lambda) {
            ensure!(lattice.get(lattice.join(i, j)).leq(&lambda), "join of [{}] and [{}] leaves λ", lattice.get(i), lattice.get(j));
            ensure!(lattice.get(lattice.meet(i, j)).leq(&lambda), "meet leaves λ");
        }
    }
    Ok(Outcome::Pass)
}

fn check_semiregular_factor(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let g = ctx.groups()?;
    let lattice = ctx.lattice()?;
    let kers = ctx.dis_kers()?;
    for (i, alpha) in lattice.congruences().iter().enumerate() {
        let (qa, _) = congruence::quotient(q, alpha)?;
        let semiregular = Groups::new(&qa)?.dis().is_semiregular();
        let mut all_equal = true;
        for x in 0..q.order() {
            all_equal &= kers[i].same_as(&g.block_stabilizer(alpha, x)?);
        }
        ensure!(semiregular == all_equal, "Q/[{alpha}] semiregular={semiregular} but Dis^α = all block stabilizers is {all_equal}");
    }
    Ok(Outcome::Pass)
}

/// Semiregular members of the pool inside `Dis(Q)`.
fn semiregular_norm_prime(ctx: &Context) -> Result<Vec<&PermGroup>> {
    let g = ctx.groups()?;
    Ok(ctx
        .pool()?
        .iter()
        .map(|t| &t.group)
        .filter(|n| n.is_semiregular() && n.is_subgroup_of(g.dis()))
        .collect())
}

fn check_semiregular_groups(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_faithful(), "not faithful");
    let g = ctx.groups()?;
    for n in semiregular_norm_prime(ctx)? {
        let alpha = n.orbits();
        ensure!(g.con_of_group(n) == alpha, "O_N ≠ Con_N for semiregular N of order {}", n.order());
        ensure!(g.dis_sub(&alpha)?.same_as(n), "N ≠ Dis_(O_N) for semiregular N of order {}", n.order());
        let elems = n.require_elements()?;
        for x in 0..q.order() {
            let mut disp: Vec<Permutation> = (0..q.order()).filter(|&y| alpha.related(x, y)).map(|y| g.displacement(y, x)).collect();
            disp.sort();
            disp.dedup();
            ensure!(disp.len() == elems.len() && disp.iter().all(|d| n.contains(d)), "N ≠ {{L_y L_{x}⁻¹ : y ∈ [{x}]}}");
        }
    }
    Ok(Outcome::Pass)
}

fn check_semiregular_groups_0(ctx: &Context) -> Result<Outcome> {
    let g = ctx.groups()?;
    for n in semiregular_norm_prime(ctx)? {
        let alpha = n.orbits();
        let ker = g.dis_ker(&alpha)?;
        for x in 0..ctx.q.order() {
            let block = g.block_stabilizer(&alpha, x)?;
            let stab = g.dis().stabilizer(x)?;
            ensure!(n.is_normal_in(&block), "N not normal in the block stabilizer of {x}");
            ensure!(n.intersection(&stab)?.is_trivial(), "N ∩ Dis(Q)_{x} ≠ 1");
            ensure!(n.order() * stab.order() == block.order(), "|N|·|Dis(Q)_{x}| ≠ |Dis(Q)_[{x}]|");
            let ker_stab = ker.stabilizer(x)?;
            ensure!(n.order() * ker_stab.order() == ker.order(), "|N|·|Dis^α_{x}| ≠ |Dis^α|");
        }
    }
    Ok(Outcome::Pass)
}

fn check_semiregular_decomposition(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    let g = ctx.groups()?;
    let sigma = g.sigma_q()?;
    for block in sigma.blocks() {
        ensure!(q.generated_subalgebra(&block) == block, "σ_Q block {block:?} is not a subalgebra");
        let sub = q.subalgebra(&block)?;
        ensure!(Groups::new(&sub)?.dis().is_semiregular(), "σ_Q block {block:?} is not semiregular");
        ensure!(sub.is_rack() && sub.is_idempotent(), "σ_Q block {block:?} is not a quandle");
    }
    if maltsev::is_connected(q)? {
        for tag in ctx.pool()? {
            let n = &tag.group;
            let sigma_n = g.sigma(n)?;
            for x in 0..q.order() {
                let nx = n.stabilizer(x)?;
                let tilde = normalizer(g.dis(), &nx)?;
                let mut orbit = tilde.orbit(x);
                orbit.sort_unstable();
                let block = sigma_n.blocks()[sigma_n.block_of(x)].clone();
                ensure!(orbit == block, "[{x}] of σ_N ≠ orbit of the normalizer of N_{x}, N = {}", tag.kind);
            }
        }
    }
    Ok(Outcome::Pass)
}

fn check_semiregular_idempotent_quandle(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    scope!(ctx.groups()?.dis().is_semiregular(), "not semiregular");
    ensure!(q.is_rack(), "semiregular idempotent but not a quandle");
    Ok(Outcome::Pass)
}

fn check_pi_correspondence(ctx: &Context) -> Result<Outcome> {
    for alpha in ctx.lattice()?.congruences() {
        let report = galois::correspondence_verify_with(ctx.groups()?, ctx.lattice()?, alpha)?;
        ensure!(report.holds(), "α=[{alpha}]: {}", report.violations.first().cloned().unwrap_or_default());
    }
    Ok(Outcome::Pass)
}

// commutator

fn check_tc_monotone(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let lattice = ctx.lattice()?;
    for (i, j) in congruence_pairs(ctx)? {
        let ms = commutator::tc_matrices(q, lattice.get(i), lattice.get(j))?;
        let holds: Vec<bool> = lattice.congruences().iter().map(|d| commutator::centralizes_on(&ms, d)).collect();
        for (a, da) in lattice.congruences().iter().enumerate() {
            for (b, db) in lattice.congruences().iter().enumerate() {
                ensure!(!(da.leq(db) && holds[a]) || holds[b], "C(α,β;[{da}]) but not C(α,β;[{db}])");
            }
        }
    }
    Ok(Outcome::Pass)
}

fn check_commutator_minimality(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let lattice = ctx.lattice()?;
    for (i, j) in congruence_pairs(ctx)? {
        let (alpha, beta) = (lattice.get(i), lattice.get(j));
        let c = commutator::commutator(q, alpha, beta)?;
        ensure!(c.leq(&alpha.meet(beta)), "[α,β] = [{c}] ≰ α∧β for α=[{alpha}], β=[{beta}]");
        let ms = commutator::tc_matrices(q, alpha, beta)?;
        ensure!(commutator::centralizes_on(&ms, &c), "C(α,β;[α,β]) fails for α=[{alpha}], β=[{beta}]");
        for delta in lattice.congruences() {
            let direct = commutator::centralizes(q, alpha, beta, delta)?;
            let listed = commutator::centralizes_on(&ms, delta);
            ensure!(direct == listed, "early-exit and listed checks disagree at δ=[{delta}]");
            ensure!(!direct || c.leq(delta), "C(α,β;δ) holds but [α,β] = [{c}] ≰ δ (α=[{alpha}], β=[{beta}], δ=[{delta}])");
        }
    }
    Ok(Outcome::Pass)
}

fn check_commutator_definitional(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.order() <= 3, "order above 3");
    let lattice = ctx.lattice()?;
    for (i, j) in congruence_pairs(ctx)? {
        let (alpha, beta) = (lattice.get(i), lattice.get(j));
        let fix = commutator::commutator(q, alpha, beta)?;
        let by_terms = definitional::commutator_by_terms(q, lattice, alpha, beta);
        ensure!(fix == by_terms, "fixpoint [{fix}] ≠ term enumeration [{by_terms}] at α=[{alpha}], β=[{beta}]");
    }
    Ok(Outcome::Pass)
}

fn check_cp_lemma(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    let g = ctx.groups()?;
    let lattice = ctx.lattice()?;
    let subs = ctx.dis_subs()?;
    let zero = Partition::discrete(q.order());
    for (i, j) in congruence_pairs(ctx)? {
        let (alpha, beta) = (lattice.get(i), lattice.get(j));
        if !commutator::centralizes(q, alpha, beta, &zero)? {
            continue;
        }
        for a in subs[i].generators() {
            for b in subs[j].generators() {
                ensure!(a.compose(b) == b.compose(a), "C(α,β;0) but Dis_α, Dis_β do not commute (α=[{alpha}], β=[{beta}])");
            }
        }
        ensure!(alpha.leq(&g.sigma(&subs[j])?), "C(α,β;0) but α ≰ σ_(Dis_β) (α=[{alpha}], β=[{beta}])");
    }
    Ok(Outcome::Pass)
}

fn check_cp_corollary(ctx: &Context) -> Result<Outcome> {
    let g = ctx.groups()?;
    let lattice = ctx.lattice()?;
    let subs = ctx.dis_subs()?;
    let z = g.dis().center()?;
    let sigma = g.sigma_q()?;
    for i in ctx.central_congruences()? {
        let alpha = lattice.get(i);
        ensure!(subs[i].is_subgroup_of(&z), "α=[{alpha}] ≤ ζ but Dis_α ≰ Z(Dis)");
        ensure!(alpha.leq(&sigma), "α=[{alpha}] ≤ ζ but α ≰ σ_Q");
    }
    Ok(Outcome::Pass)
}

fn check_abelian_corollary(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(ctx.center()?.is_full(), "not abelian");
    ensure!(!q.is_idempotent() || q.is_rack(), "abelian idempotent but not a quandle");
    ensure!(!q.is_faithful() || q.is_latin(), "abelian faithful but not latin");
    Ok(Outcome::Pass)
}

/// `d | base^exp`, compared prime by prime.
fn divides_power(d: usize, base: usize, exp: usize) -> bool {
    let mut rest = d;
    let mut p = 2;
    while p * p <= rest {
        let mut k = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        if k > 0 && multiplicity(base, p) * exp < k {
            return false;
        }
        p += 1;
    }
    rest == 1 || multiplicity(base, rest) * exp >= 1
}

fn multiplicity(mut m: usize, p: usize) -> usize {
    let mut k = 0;
    while m > 0 && m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    k
}

fn check_central_orbits(ctx: &Context) -> Result<Outcome> {
    scope!(ctx.is_connected_by_dis()?, "not connected by Dis");
    let g = ctx.groups()?;
    let lattice = ctx.lattice()?;
    let subs = ctx.dis_subs()?;
    for i in ctx.central_congruences()? {
        let alpha = lattice.get(i);
        let beta = subs[i].orbits();
        let ker = g.dis_ker(&beta)?;
        for x in 0..ctx.q.order() {
            let block = g.block_stabilizer(&beta, x)?;
            let stab = g.dis().stabilizer(x)?;
            ensure!(
                internal_direct_product(&block, &subs[i], &stab)?,
                "Dis(Q)_[{x}]_β is not Dis_α × Dis(Q)_{x} (α=[{alpha}], β=[{beta}])"
            );
            ensure!(
                internal_direct_product(&ker, &subs[i], &ker.stabilizer(x)?)?,
                "Dis^β is not Dis_α × Dis^β_{x} (α=[{alpha}])"
            );
        }
        ensure!(ker.is_abelian(), "Dis^β is not abelian (α=[{alpha}], β=[{beta}])");
        let size = beta.blocks()[0].len();
        ensure!(
            divides_power(ker.order(), size, beta.num_blocks()),
            "|Dis^β| = {} does not divide {size}^{}",
            ker.order(),
            beta.num_blocks()
        );
    }
    Ok(Outcome::Pass)
}

fn check_structure_kn(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_faithful(), "not faithful");
    scope!(ctx.is_connected_by_dis()?, "not connected by Dis");
    let g = ctx.groups()?;
    let lattice = ctx.lattice()?;
    let (subs, kers) = (ctx.dis_subs()?, ctx.dis_kers()?);
    for i in ctx.central_congruences()? {
        let alpha = lattice.get(i);
        ensure!(&subs[i].orbits() == alpha, "O_(Dis_α) ≠ α = [{alpha}]");
        ensure!(&g.con_of_group(&subs[i]) == alpha, "Con_(Dis_α) ≠ α = [{alpha}]");
        for x in 0..q.order() {
            let block = g.block_stabilizer(alpha, x)?;
            let stab = g.dis().stabilizer(x)?;
            ensure!(
                internal_direct_product(&block, &subs[i], &stab)?,
                "Dis(Q)_[{x}] is not Dis_α × Dis(Q)_{x} for α=[{alpha}]"
            );
        }
        ensure!(kers[i].is_abelian(), "Dis^α not abelian for central α=[{alpha}]");
        let size = alpha.blocks()[0].len();
        ensure!(divides_power(kers[i].order(), size, alpha.num_blocks()), "|Dis^α| ∤ |[x]|^|Q/α|");
    }
    Ok(Outcome::Pass)
}

fn fix_property(q: &LeftQuasigroup) -> bool {
    (0..q.order()).all(|x| q.fixed_points(x) == [x])
}

fn check_structure_kn_2(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent() && q.is_faithful(), "not faithful idempotent");
    scope!(maltsev::is_connected(q)?, "not connected");
    let lattice = ctx.lattice()?;
    for i in ctx.central_congruences()? {
        let alpha = lattice.get(i);
        for block in alpha.blocks() {
            let sub = q.subalgebra(&block)?;
            ensure!(sub.is_latin() && sub.is_rack(), "block {block:?} of central [{alpha}] is not a latin quandle");
        }
        let (qa, _) = congruence::quotient(q, alpha)?;
        ensure!(!qa.is_superfaithful() || q.is_superfaithful(), "superfaithfulness does not lift along [{alpha}]");
        ensure!(!maltsev::is_superconnected(&qa)? || ctx.is_superconnected()?, "superconnectedness does not lift along [{alpha}]");
        ensure!(!fix_property(&qa) || fix_property(q), "the fixed-point property does not lift along [{alpha}]");
    }
    Ok(Outcome::Pass)
}

fn check_solvable(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    scope!(ctx.is_superconnected()?, "not superconnected");
    let Some(len) = ctx.central_series()?.nilpotency_length else {
        return Ok(Outcome::Skip("not nilpotent".into()));
    };
    let series = ctx.groups()?.dis().derived_series()?;
    ensure!(series.last().unwrap().is_trivial(), "Dis(Q) is not solvable");
    ensure!(series.len() - 1 <= len, "derived length {} exceeds nilpotency length {len}", series.len() - 1);
    Ok(Outcome::Pass)
}

fn check_divisors(ctx: &Context) -> Result<Outcome> {
    match maltsev::prime_divisor_check(&ctx.q, ctx.budget) {
        Ok(r) => {
            ensure!(r.holds(), "primes of |Q| {:?} vs |Dis| {:?}, p-group {:?}", r.order_primes, r.dis_primes, r.p_group);
            Ok(Outcome::Pass)
        }
        Err(Error::PreconditionFailed(why)) => Ok(Outcome::Skip(why)),
        Err(e) => Err(e),
    }
}

// maltsev

fn check_o_onto_maltsev(ctx: &Context) -> Result<Outcome> {
    match ctx.maltsev().status {
        MaltsevStatus::Found => {}
        MaltsevStatus::NotFound => return Ok(Outcome::Skip("no Mal'tsev term".into())),
        MaltsevStatus::Unknown => return Ok(Outcome::Unknown("Mal'tsev search budget exhausted".into())),
    }
    let lattice = ctx.lattice()?;
    let (subs, kers) = (ctx.dis_subs()?, ctx.dis_kers()?);
    for (i, alpha) in lattice.congruences().iter().enumerate() {
        ensure!(&subs[i].orbits() == alpha && &kers[i].orbits() == alpha, "O_(Dis_α) or O_(Dis^α) ≠ α = [{alpha}]");
    }
    Ok(Outcome::Pass)
}

fn check_o_onto_super(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    scope!(ctx.is_superconnected()?, "not superconnected");
    let g = ctx.groups()?;
    let lattice = ctx.lattice()?;
    let (subs, kers) = (ctx.dis_subs()?, ctx.dis_kers()?);
    for (i, alpha) in lattice.congruences().iter().enumerate() {
        ensure!(&subs[i].orbits() == alpha, "O_(Dis_α) ≠ α = [{alpha}]");
        ensure!(&kers[i].orbits() == alpha, "O_(Dis^α) ≠ α = [{alpha}]");
        ensure!(&g.con_of_group(&subs[i]) == alpha, "Con_(Dis_α) ≠ α = [{alpha}]");
        ensure!(&g.con_of_group(&kers[i]) == alpha, "Con_(Dis^α) ≠ α = [{alpha}]");
    }
    Ok(Outcome::Pass)
}

fn check_nilpotent_latin(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    scope!(ctx.is_nilpotent()?, "not nilpotent");
    match ctx.maltsev().status {
        MaltsevStatus::Found => {}
        MaltsevStatus::NotFound => return Ok(Outcome::Skip("no Mal'tsev term".into())),
        MaltsevStatus::Unknown => return Ok(Outcome::Unknown("Mal'tsev search budget exhausted".into())),
    }
    ensure!(q.is_latin(), "idempotent nilpotent Mal'tsev but not latin");
    if ctx.center()?.is_full() {
        ensure!(q.is_rack(), "abelian idempotent Mal'tsev but not a quandle");
    }
    Ok(Outcome::Pass)
}

fn check_nilpotent_latin_equivalence(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    scope!(ctx.is_nilpotent()?, "not nilpotent");
    let connected = maltsev::is_connected(q)? && fix_property(q);
    let superconnected = ctx.is_superconnected()?;
    let latin = q.is_latin();
    let status = ctx.maltsev().status;
    ensure!(
        connected == superconnected && superconnected == latin && status.as_bool().is_none_or(|m| m == latin),
        "connected∧fix={connected}, superconnected={superconnected}, maltsev={}, latin={latin}",
        status.name()
    );
    if status == MaltsevStatus::Unknown {
        return Ok(Outcome::Unknown("Mal'tsev search budget exhausted; other three agree".into()));
    }
    Ok(Outcome::Pass)
}

fn check_proj_sub(ctx: &Context) -> Result<Outcome> {
    let q = &ctx.q;
    scope!(q.is_idempotent(), "not idempotent");
    scope!(maltsev::is_connected(q)?, "not connected");
    scope!(fix_property(q), "fixed-point property fails");
    let lattice = ctx.lattice()?;
    for i in ctx.central_congruences()? {
        let (qa, _) = congruence::quotient(q, lattice.get(i))?;
        ensure!(fix_property(&qa), "Q/[{}] loses the fixed-point property", lattice.get(i));
    }
    Ok(Outcome::Pass)
}

fn check_latin_superconnected(ctx: &Context) -> Result<Outcome> {
    scope!(ctx.q.is_latin(), "not latin");
    ensure!(ctx.is_superconnected()?, "latin but not superconnected");
    Ok(Outcome::Pass)
}

fn check_maltsev_witness(ctx: &Context) -> Result<Outcome> {
    let r = ctx.maltsev();
    match (&r.status, &r.witness) {
        (MaltsevStatus::Found, Some(m)) => {
            ensure!(maltsev::is_maltsev_operation(ctx.q.order(), m), "witness fails m(a,b,b)=a=m(b,b,a)");
            Ok(Outcome::Pass)
        }
        (MaltsevStatus::Found, None) => Ok(Outcome::Fail("found without a witness".into())),
        (MaltsevStatus::NotFound, _) => Ok(Outcome::Skip("no Mal'tsev term".into())),
        (MaltsevStatus::Unknown, _) => Ok(Outcome::Unknown("budget exhausted".into())),
    }
}

macro_rules! lemma {
    ($id:expr, $module:expr, $scope:expr, $f:expr) => {
        Lemma { id: $id, module: $module, scope: $scope, check: $f }
    };
}

/// Every instance-level check, grouped by module.
pub static LEMMAS: &[Lemma] = &[
    lemma!("axioms", "table", "all", check_axioms),
    lemma!("quandle-flag", "table", "quandle", check_quandle_flag),
    lemma!("superfaithful-pairs", "table", "idempotent", check_superfaithful_pairs),
    lemma!("latin-fix-superfaithful", "table", "idempotent", check_latin_fix_superfaithful),
    lemma!("subuniverses-closed", "table", "all", check_subuniverses),
    lemma!("orbit-stabilizer", "perm", "all", check_orbit_stabilizer),
    lemma!("membership-scan", "perm", "order ≤ 6", check_membership),
    lemma!("normal-closure-invariant", "perm", "all", check_normal_closure),
    lemma!("regular-equivalence", "perm", "all", check_regular),
    lemma!("principal-least", "congruence", "all", check_principal_least),
    lemma!("lattice-closed", "congruence", "all", check_lattice_closed),
    lemma!("second-isomorphism", "congruence", "all", check_second_isomorphism),
    lemma!("blocks-subalgebras", "congruence", "idempotent", check_blocks_subalgebras),
    lemma!("galois_connection", "galois", "all", check_galois_connection),
    lemma!("dis-alpha-chain", "galois", "all", check_dis_alpha_chain),
    lemma!("p:dis_alpha1", "galois", "all", check_dis_alpha_meets_joins),
    lemma!("lambda-remark", "galois", "all", check_lambda_remark),
    lemma!("blocks-connected", "galois", "idempotent", check_blocks_connected),
    lemma!("factor-of-lambda", "galois", "all", check_factor_of_lambda),
    lemma!("below-lambda", "galois", "all", check_below_lambda),
    lemma!("strongly-abelian-sublattice", "galois", "all", check_strongly_abelian_sublattice),
    lemma!("semiregular-factor", "galois", "all", check_semiregular_factor),
    lemma!("semiregular-groups", "galois", "faithful", check_semiregular_groups),
    lemma!("semiregular-groups-0", "galois", "all", check_semiregular_groups_0),
    lemma!("semiregular-decomposition", "galois", "idempotent", check_semiregular_decomposition),
    lemma!("semiregular-idempotent-quandle", "galois", "idempotent ∧ semiregular", check_semiregular_idempotent_quandle),
    lemma!("pi-correspondence", "galois", "all", check_pi_correspondence),
    lemma!("tc-monotone", "commutator", "all", check_tc_monotone),
    lemma!("commutator-minimality", "commutator", "all", check_commutator_minimality),
    lemma!("commutator-definitional", "commutator", "order ≤ 3", check_commutator_definitional),
    lemma!("cp-lemma", "commutator", "all", check_cp_lemma),
    lemma!("cp-corollary", "commutator", "all", check_cp_corollary),
    lemma!("abelian-corollary", "commutator", "abelian", check_abelian_corollary),
    lemma!("central-orbits", "commutator", "connected by Dis", check_central_orbits),
    lemma!("structure-kn", "commutator", "faithful ∧ connected by Dis", check_structure_kn),
    lemma!("structure-kn-2", "commutator", "connected ∧ faithful ∧ idempotent", check_structure_kn_2),
    lemma!("solvable", "commutator", "superconnected ∧ idempotent ∧ nilpotent", check_solvable),
    lemma!("divisors", "commutator", "idempotent ∧ nilpotent ∧ (superconnected ∨ Mal'tsev)", check_divisors),
    lemma!("o-onto-maltsev", "maltsev", "Mal'tsev", check_o_onto_maltsev),
    lemma!("o-onto-super", "maltsev", "superconnected ∧ idempotent", check_o_onto_super),
    lemma!("nilpotent-latin", "maltsev", "idempotent ∧ nilpotent ∧ Mal'tsev", check_nilpotent_latin),
    lemma!("nilpotent-latin-equivalence", "maltsev", "idempotent ∧ nilpotent", check_nilpotent_latin_equivalence),
    lemma!("proj-sub", "maltsev", "connected ∧ idempotent ∧ fixed-point property", check_proj_sub),
    lemma!("latin-superconnected", "maltsev", "latin", check_latin_superconnected),
    lemma!("maltsev-witness", "maltsev", "Mal'tsev", check_maltsev_witness),
];

pub fn lemma(id: &str) -> Option<&'static Lemma> {
    LEMMAS.iter().find(|l| l.id == id)
}

/// Lemmas selected by a suite name: `all`, a module name, or a lemma id.
pub fn select(suite: &str) -> Result<Vec<&'static Lemma>> {
    let chosen: Vec<&Lemma> = match suite {
        "all" => LEMMAS.iter().collect(),
        _ => LEMMAS.iter().filter(|l| l.module == suite || l.id == suite).collect(),
    };
    if chosen.is_empty() {
        return Err(Error::MalformedInput(format!("unknown suite {suite:?}")));
    }
    Ok(chosen)
}

/// Runs lemmas on one instance, sharing cached structure between them.
pub fn run_on(lemmas: &[&Lemma], q: &LeftQuasigroup, budget: usize) -> Vec<LemmaCheck> {
    let ctx = Context::with_budget(q.clone(), budget);
    lemmas.iter().map(|l| l.run(&ctx)).collect()
}

/// Re-runs a single named check, for replaying a reported failure.
pub fn replay(id: &str, table: &str) -> Result<Verdict> {
    let l = lemma(id).ok_or_else(|| Error::MalformedInput(format!("unknown lemma {id:?}")))?;
    let q = LeftQuasigroup::parse(table)?;
    Ok(l.run(&Context::new(q)).verdict)
}

/// Per-lemma tallies over a corpus, keeping the first failure.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Tally {
    pub id: &'static str,
    pub scope: &'static str,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub unknown: usize,
    pub first_failure: Option<Verdict>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub instances: usize,
    pub lemmas: Vec<Tally>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.lemmas.iter().map(|t| t.fail).sum()
    }

    pub fn unknowns(&self) -> usize {
        self.lemmas.iter().map(|t| t.unknown).sum()
    }

    pub fn tally(&self, id: &str) -> Option<&Tally> {
        self.lemmas.iter().find(|t| t.id == id)
    }
}

pub fn run_suite<'a>(lemmas: &[&Lemma], corpus: impl IntoIterator<Item = &'a LeftQuasigroup>, budget: usize) -> SuiteReport {
    let mut tallies: BTreeMap<usize, Tally> = lemmas
        .iter()
        .enumerate()
        .map(|(i, l)| (i, Tally { id: l.id, scope: l.scope, ..Default::default() }))
        .collect();
    let mut instances = 0;
    for q in corpus {
        instances += 1;
        for (i, check) in run_on(lemmas, q, budget).into_iter().enumerate() {
            let t = tallies.get_mut(&i).unwrap();
            match &check.verdict {
                Verdict::Pass => t.pass += 1,
                Verdict::Fail { .. } => {
                    t.fail += 1;
                    t.first_failure.get_or_insert(check.verdict.clone());
                }
                Verdict::Skipped { .. } => t.skipped += 1,
                Verdict::Unknown { .. } => t.unknown += 1,
            }
        }
    }
    SuiteReport { instances, lemmas: tallies.into_values().collect() }
}

/// Checks on seeded random extension data rather than on instances.
pub fn extension_suite(seed: u64, count: usize) -> Result<SuiteReport> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let bases = [
        LeftQuasigroup::trivial(),
        LeftQuasigroup::projection(2),
        LeftQuasigroup::from_fn(3, |x, y| (6 + 2 * x - y) % 3).expect("dihedral"),
    ];
    let mut morphism = Tally { id: "extension-morphism", scope: "valid spec", ..Default::default() };
    let mut abelian = Tally { id: "affine-abelian", scope: "affine spec, |A| ≤ 8", ..Default::default() };
    let mut remark = Tally { id: "extension-remark", scope: "valid spec", ..Default::default() };
    let mut idem = Tally { id: "idempotent-extension", scope: "idempotent base, g = 1 − f, θ(x,x) = 0", ..Default::default() };
    let record = |t: &mut Tally, ok: bool, spec: &extension::ExtensionSpec, what: &str| {
        if ok {
            t.pass += 1;
        } else {
            t.fail += 1;
            t.first_failure.get_or_insert(Verdict::Fail { table: spec.to_json(), witness: what.to_string() });
        }
    };
    for _ in 0..count {
        let spec = extension::random_affine(&mut rng, 8);
        let q = extension::central_extension(&spec)?.algebra;
        record(&mut abelian, commutator::center(&q)?.is_full(), &spec, "ζ ≠ 1 on an affine left quasigroup");

        let idempotent = rand::Rng::gen_bool(&mut rng, 0.5);
        let base = bases.choose(&mut rng).expect("nonempty");
        let spec = extension::random_extension(&mut rng, base, 4, idempotent);
        let e = extension::central_extension(&spec)?;
        let sizes_ok = e.kernel.num_blocks() == base.order()
            && e.kernel.blocks().iter().all(|b| b.len() == spec.group.order())
            && congruence::is_congruence(&e.algebra, &e.kernel);
        record(&mut morphism, sizes_ok, &spec, "ker p₁ is not a congruence with blocks of size |A|");
        let agree = extension::idempotence_check(&spec)?.agrees() && extension::latin_check(&spec)?.agrees();
        record(&mut remark, agree, &spec, "predicted flags disagree with the table");
        if idempotent && base.is_idempotent() {
            record(&mut idem, e.algebra.is_idempotent(), &spec, "extension is not idempotent");
        } else {
            idem.skipped += 1;
        }
    }
    Ok(SuiteReport { instances: count, lemmas: vec![morphism, abelian, remark, idem] })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dihedral(n: usize) -> LeftQuasigroup {
        LeftQuasigroup::from_fn(n, |x, y| (2 * n + 2 * x - y) % n).unwrap()
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<&str> = LEMMAS.iter().map(|l| l.id).collect();
        ids.sort_unstable();
        let len = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), len);
    }

    #[test]
    fn everything_passes_on_small_fixtures() {
        let all: Vec<&Lemma> = LEMMAS.iter().collect();
        for q in [LeftQuasigroup::trivial(), LeftQuasigroup::projection(3), dihedral(3), dihedral(5)] {
            for c in run_on(&all, &q, maltsev::DEFAULT_BUDGET) {
                assert!(!c.verdict.is_fail(), "{} failed: {:?}", c.id, c.verdict);
            }
        }
    }

    #[test]
    fn nilpotent_latin_on_dihedral() {
        let checks = run_on(&select("nilpotent-latin").unwrap(), &dihedral(3), maltsev::DEFAULT_BUDGET);
        assert_eq!(checks.len(), 1);
        assert_eq!(checks[0].verdict, Verdict::Pass);
    }

    #[test]
    fn failures_carry_a_replayable_table() {
        let always = Lemma { id: "always-fails", module: "test", scope: "all", check: |_| Ok(Outcome::Fail("forced".into())) };
        let q = dihedral(3);
        let check = always.run(&Context::new(q.clone()));
        let Verdict::Fail { table, witness } = check.verdict else { panic!("expected a failure") };
        assert_eq!(witness, "forced");
        assert_eq!(LeftQuasigroup::parse(&table).unwrap(), q);
        assert_eq!(replay("nilpotent-latin", &table).unwrap(), Verdict::Pass);
        assert_eq!(replay("quandle-flag", "2\n1 0\n1 0\n").unwrap().name(), "skipped");
        assert!(replay("no-such-lemma", "1\n0\n").is_err());
    }

    #[test]
    fn monotonicity_fails_on_the_counterexample_and_replays() {
        let table = crate::fixtures::NON_MONOTONE;
        let Verdict::Fail { table: emitted, .. } = replay("tc-monotone", table).unwrap() else {
            panic!("tc-monotone should fail here")
        };
        assert!(matches!(replay("tc-monotone", &emitted).unwrap(), Verdict::Fail { .. }));
        assert_eq!(replay("commutator-minimality", table).unwrap(), Verdict::Pass);
    }

    #[test]
    fn divides_power_cases() {
        assert!(divides_power(8, 2, 3));
        assert!(!divides_power(16, 2, 3));
        assert!(!divides_power(3, 2, 10));
        assert!(divides_power(4, 6, 2));
        assert!(!divides_power(9, 6, 1));
        assert!(divides_power(1, 1, 0));
        assert_eq!(all_partitions(4).len(), 15);
    }

    #[test]
    fn suites_select() {
        assert!(select("galois").unwrap().iter().all(|l| l.module == "galois"));
        assert_eq!(select("p:dis_alpha1").unwrap().len(), 1);
        assert!(select("nonsense").is_err());
    }

    #[test]
    fn extension_suite_passes() {
        let r = extension_suite(3, 20).unwrap();
        assert_eq!(r.failures(), 0);
        assert_eq!(r.tally("affine-abelian").unwrap().pass, 20);
    }
}
