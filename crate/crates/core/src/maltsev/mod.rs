//! Connectivity, Mal'tsev term search, and the equivalences that hold for
//! idempotent nilpotent left quasigroups.

mod group;

use std::collections::HashMap;

use serde::Serialize;

use crate::commutator;
use crate::congruence::{self, CongruenceLattice};
use crate::error::{Error, Result};
use crate::galois::Groups;
use crate::table::LeftQuasigroup;
use crate::UnionFind;

/// Default cap on the number of distinct term vectors.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Orbits of `LMlt(Q)` are the components of the graph joining `y` and `x·y`.
pub fn is_connected(q: &LeftQuasigroup) -> Result<bool> {
    let n = q.order();
    let mut uf = UnionFind::new(n);
    for x in 0..n {
        for y in 0..n {
            uf.union(y, q.mul(x, y));
        }
    }
    Ok(uf.into_partition().num_blocks() <= 1)
}

pub fn is_connected_by_dis(q: &LeftQuasigroup) -> Result<bool> {
    if q.order() <= 1 {
        return Ok(true);
    }
    Ok(Groups::new(q)?.dis().is_transitive())
}

/// Every subalgebra is connected.
pub fn is_superconnected(q: &LeftQuasigroup) -> Result<bool> {
    for s in q.subuniverses(crate::table::DEFAULT_ORDER_CAP)? {
        if !is_connected(&q.subalgebra(&s)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MaltsevStatus {
    Found,
    NotFound,
    Unknown,
}

impl MaltsevStatus {
    /// `None` for `Unknown`.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            MaltsevStatus::Found => Some(true),
            MaltsevStatus::NotFound => Some(false),
            MaltsevStatus::Unknown => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MaltsevStatus::Found => "found",
            MaltsevStatus::NotFound => "notfound",
            MaltsevStatus::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MaltsevResult {
    pub status: MaltsevStatus,
    /// `m(a,b,c)` at index `a·n² + b·n + c`.
    pub witness: Option<Vec<u8>>,
    /// Distinct vectors generated before stopping.
    pub explored: usize,
}

#[derive(Clone, Copy)]
enum Origin {
    Projection(usize),
    Mul(u32, u32),
    Ldiv(u32, u32),
}

/// Searches the ternary term operations for `m(a,b,b) = a = m(b,b,a)`.
///
/// A term operation is recorded only on the coordinates `(a,b,b)` and
/// `(b,b,a)`. Operations act coordinatewise, so the restricted vectors
/// form exactly the subuniverse generated by the restricted projections,
/// and deduplicating on them loses nothing. Each vector remembers how it
/// was made, which rebuilds the full `n³` table of a witness.
///
/// Once the closure reaches a few thousand vectors the search tries two
/// exact shortcuts before grinding on toward the budget: a refutation on
/// small coordinate projections, and a witness through the translation
/// group. Both leave `explored` at the size reached so far.
pub fn maltsev_search(q: &LeftQuasigroup, budget: usize) -> MaltsevResult {
    let n = q.order();
    // coordinate list and target vector
    let mut coords: Vec<[usize; 3]> = Vec::new();
    let mut seen_coord = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in [[a, b, b], [b, b, a]] {
                if let std::collections::hash_map::Entry::Vacant(e) = seen_coord.entry(c) {
                    e.insert(coords.len());
                    coords.push(c);
                }
            }
        }
    }
    let target: Vec<u8> = coords.iter().map(|c| if c[0] == c[1] { c[2] } else { c[0] } as u8).collect();

    let mut vectors: Vec<Vec<u8>> = Vec::new();
    let mut origins: Vec<Origin> = Vec::new();
    let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut found = None;

    let mut push = |v: Vec<u8>, o: Origin, vectors: &mut Vec<Vec<u8>>, origins: &mut Vec<Origin>| -> Option<u32> {
        if index.contains_key(&v) {
            return None;
        }
        let id = vectors.len() as u32;
        index.insert(v.clone(), id);
        vectors.push(v);
        origins.push(o);
        Some(id)
    };
    for p in 0..3 {
        let v: Vec<u8> = coords.iter().map(|c| c[p] as u8).collect();
        if let Some(id) = push(v, Origin::Projection(p), &mut vectors, &mut origins) {
            if vectors[id as usize] == target {
                found = Some(id);
            }
        }
    }

    let mut k = 0;
    'outer: while found.is_none() && k < vectors.len() {
        for j in 0..=k {
            for (a, b) in [(k, j), (j, k)] {
                for is_mul in [true, false] {
                    let v: Vec<u8> = vectors[a]
                        .iter()
                        .zip(&vectors[b])
                        .map(|(&x, &y)| {
                            if is_mul {
                                q.mul(x as usize, y as usize) as u8
                            } else {
                                q.ldiv(x as usize, y as usize) as u8
                            }
                        })
                        .collect();
                    let o = if is_mul { Origin::Mul(a as u32, b as u32) } else { Origin::Ldiv(a as u32, b as u32) };
                    let hit = v == target;
                    if let Some(id) = push(v, o, &mut vectors, &mut origins) {
                        if hit {
                            found = Some(id);
                            break 'outer;
                        }
                        if vectors.len() == REFUTE_AFTER {
                            let explored = vectors.len();
                            if projection_refutes(q, &coords, &target) {
                                return MaltsevResult { status: MaltsevStatus::NotFound, witness: None, explored };
                            }
                            if let Some(w) = group::search(q, &coords, &target, GROUP_SEED) {
                                debug_assert!(is_maltsev_operation(n, &w));
                                return MaltsevResult { status: MaltsevStatus::Found, witness: Some(w), explored };
                            }
                        }
                        if vectors.len() >= budget {
                            return MaltsevResult { status: MaltsevStatus::Unknown, witness: None, explored: vectors.len() };
                        }
                    }
                }
                if j == k {
                    break;
                }
            }
        }
        k += 1;
    }
    let explored = vectors.len();
    match found {
        Some(id) => {
            MaltsevResult { status: MaltsevStatus::Found, witness: Some(rebuild(q, &origins, id)), explored }
        }
        None => MaltsevResult { status: MaltsevStatus::NotFound, witness: None, explored },
    }
}

const GROUP_SEED: u64 = 0x6d61_6c74;

/// Closure size at which the search pauses to try a projection refutation.
const REFUTE_AFTER: usize = 4096;

/// Projecting the closure onto a few coordinates gives the subuniverse of
/// `Q^k` generated by the projected generators. If that small subuniverse
/// misses the projected target then no term reaches the target.
fn projection_refutes(q: &LeftQuasigroup, coords: &[[usize; 3]], target: &[u8]) -> bool {
    let n = q.order();
    let m = coords.len();
    let mut subsets: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    for i in 0..m {
        for j in i + 1..m {
            subsets.push(vec![i, j]);
        }
    }
    if n.pow(3) <= 125 {
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    subsets.push(vec![i, j, k]);
                }
            }
        }
    }
    subsets.iter().any(|s| !small_closure_contains(q, coords, target, s))
}

fn small_closure_contains(q: &LeftQuasigroup, coords: &[[usize; 3]], target: &[u8], s: &[usize]) -> bool {
    let n = q.order();
    let encode = |f: &dyn Fn(usize) -> usize| s.iter().fold(0, |acc, &i| acc * n + f(i));
    let goal = encode(&|i| target[i] as usize);
    let size = n.pow(s.len() as u32);
    let mut seen = vec![false; size];
    let mut list: Vec<usize> = Vec::new();
    for v in (0..3).map(|p| encode(&|i| coords[i][p])) {
        if !seen[v] {
            seen[v] = true;
            list.push(v);
        }
    }
    let decode = |mut v: usize| {
        let mut d = vec![0; s.len()];
        for slot in d.iter_mut().rev() {
            *slot = v % n;
            v /= n;
        }
        d
    };
    let mut k = 0;
    while k < list.len() {
        if seen[goal] {
            return true;
        }
        let a = decode(list[k]);
        for j in 0..=k {
            let b = decode(list[j]);
            for (x, y) in [(&a, &b), (&b, &a)] {
                for v in [
                    x.iter().zip(y).fold(0, |acc, (&u, &w)| acc * n + q.mul(u, w)),
                    x.iter().zip(y).fold(0, |acc, (&u, &w)| acc * n + q.ldiv(u, w)),
                ] {
                    if !seen[v] {
                        seen[v] = true;
                        list.push(v);
                    }
                }
            }
        }
        k += 1;
    }
    seen[goal]
}

/// Evaluates the derivation of vector `id` on all of `Q³`.
fn rebuild(q: &LeftQuasigroup, origins: &[Origin], id: u32) -> Vec<u8> {
    let n = q.order();
    let mut memo: HashMap<u32, Vec<u8>> = HashMap::new();
    let mut stack = vec![id];
    while let Some(&top) = stack.last() {
        if memo.contains_key(&top) {
            stack.pop();
            continue;
        }
        let full = match origins[top as usize] {
            Origin::Projection(p) => Some(
                (0..n * n * n)
                    .map(|i| [i / (n * n), i / n % n, i % n][p] as u8)
                    .collect::<Vec<u8>>(),
            ),
            Origin::Mul(a, b) | Origin::Ldiv(a, b) => match (memo.get(&a), memo.get(&b)) {
                (Some(va), Some(vb)) => {
                    let is_mul = matches!(origins[top as usize], Origin::Mul(..));
                    Some(
                        va.iter()
                            .zip(vb)
                            .map(|(&x, &y)| {
                                let (x, y) = (x as usize, y as usize);
                                (if is_mul { q.mul(x, y) } else { q.ldiv(x, y) }) as u8
                            })
                            .collect(),
                    )
                }
                _ => {
                    stack.push(a);
                    stack.push(b);
                    None
                }
            },
        };
        if let Some(v) = full {
            memo.insert(top, v);
            stack.pop();
        }
    }
    memo.remove(&id).unwrap()
}

/// Checks `m(a,b,b) = a = m(b,b,a)` on a full ternary table.
pub fn is_maltsev_operation(n: usize, m: &[u8]) -> bool {
    let at = |a: usize, b: usize, c: usize| m[a * n * n + b * n + c] as usize;
    (0..n).all(|a| (0..n).all(|b| at(a, b, b) == a && at(b, b, a) == a))
}

fn require_idempotent_nilpotent(q: &LeftQuasigroup) -> Result<commutator::CentralSeries> {
    if !q.is_idempotent() {
        return Err(Error::PreconditionFailed("not idempotent".into()));
    }
    let series = commutator::central_series(q)?;
    if !series.is_nilpotent() {
        return Err(Error::PreconditionFailed("not nilpotent".into()));
    }
    Ok(series)
}

#[derive(Clone, Debug, Serialize)]
pub struct NilpotentLatinReport {
    /// Connected with `Fix(L_x) = {x}` for every `x`.
    pub connected: bool,
    pub superconnected: bool,
    pub maltsev: MaltsevStatus,
    pub latin: bool,
    /// All decided conditions agree.
    pub equivalence_holds: bool,
}

/// The four conditions that coincide on finite idempotent nilpotent left
/// quasigroups. An `Unknown` search result is left out of the comparison.
pub fn nilpotent_latin_suite(q: &LeftQuasigroup, budget: usize) -> Result<NilpotentLatinReport> {
    require_idempotent_nilpotent(q)?;
    let connected = is_connected(q)? && (0..q.order()).all(|x| q.fixed_points(x) == [x]);
    let superconnected = is_superconnected(q)?;
    let maltsev = maltsev_search(q, budget).status;
    let latin = q.is_latin();
    let mut decided = vec![connected, superconnected, latin];
    decided.extend(maltsev.as_bool());
    let equivalence_holds = decided.iter().all(|&v| v == decided[0]);
    Ok(NilpotentLatinReport { connected, superconnected, maltsev, latin, equivalence_holds })
}

fn prime_divisors(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeDivisorReport {
    pub order: usize,
    pub dis_order: usize,
    pub order_primes: Vec<usize>,
    pub dis_primes: Vec<usize>,
    pub primes_agree: bool,
    /// For `|Q| = pᵏ`: whether `Dis(Q)` is a `p`-group.
    pub p_group: Option<bool>,
}

impl PrimeDivisorReport {
    pub fn holds(&self) -> bool {
        self.primes_agree && self.p_group != Some(false)
    }
}

/// Compares the primes dividing `|Q|` and `|Dis(Q)|`. Requires `Q`
/// idempotent, nilpotent, and superconnected or with a Mal'tsev term.
pub fn prime_divisor_check(q: &LeftQuasigroup, budget: usize) -> Result<PrimeDivisorReport> {
    require_idempotent_nilpotent(q)?;
    if !is_superconnected(q)? && maltsev_search(q, budget).status != MaltsevStatus::Found {
        return Err(Error::PreconditionFailed("neither superconnected nor Mal'tsev".into()));
    }
    let dis_order = if q.order() <= 1 { 1 } else { Groups::new(q)?.dis().order() };
    let order_primes = prime_divisors(q.order());
    let dis_primes = prime_divisors(dis_order);
    let p_group = (order_primes.len() == 1).then(|| dis_primes.iter().all(|&p| p == order_primes[0]));
    Ok(PrimeDivisorReport {
        order: q.order(),
        dis_order,
        primes_agree: order_primes == dis_primes,
        order_primes,
        dis_primes,
        p_group,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DistributivityReport {
    pub distributive: bool,
    /// Where a quandle was first seen among `Q`, its subalgebras and its
    /// quotients, if anywhere.
    pub quandle_witness: Option<String>,
}

/// Evidence about congruence distributivity versus quandles. Only the
/// algebra itself, its subalgebras and its quotients are inspected; nothing
/// is concluded about the generated variety.
pub fn distributivity_probe(q: &LeftQuasigroup) -> Result<DistributivityReport> {
    let lattice = CongruenceLattice::build(q, congruence::DEFAULT_LATTICE_CAP)?;
    let is_quandle = |a: &LeftQuasigroup| a.is_idempotent() && a.is_rack();
    let mut quandle_witness = None;
    if is_quandle(q) {
        quandle_witness = Some("self".to_string());
    }
    if quandle_witness.is_none() {
        for s in q.subuniverses(crate::table::DEFAULT_ORDER_CAP)? {
            if is_quandle(&q.subalgebra(&s)?) {
                quandle_witness = Some(format!("subalgebra {s:?}"));
                break;
            }
        }
    }
    if quandle_witness.is_none() {
        for a in lattice.congruences() {
            if is_quandle(&congruence::quotient(q, a)?.0) {
                quandle_witness = Some(format!("quotient by {a}"));
                break;
            }
        }
    }
    Ok(DistributivityReport { distributive: lattice.is_distributive(), quandle_witness })
}

#[derive(Clone, Debug, Serialize)]
pub struct MaltsevReport {
    pub connected: bool,
    pub superconnected: bool,
    pub maltsev: MaltsevStatus,
    pub latin: bool,
    /// `None` when the suite does not apply (not idempotent nilpotent).
    pub equivalence_holds: Option<bool>,
}

pub fn maltsev_report(q: &LeftQuasigroup, budget: usize) -> Result<MaltsevReport> {
    let suite = match nilpotent_latin_suite(q, budget) {
        Ok(s) => Some(s),
        Err(Error::PreconditionFailed(_)) => None,
        Err(e) => return Err(e),
    };
    let maltsev = match &suite {
        Some(s) => s.maltsev,
        None => maltsev_search(q, budget).status,
    };
    Ok(MaltsevReport {
        connected: is_connected(q)?,
        superconnected: is_superconnected(q)?,
        maltsev,
        latin: q.is_latin(),
        equivalence_holds: suite.map(|s| s.equivalence_holds),
    })
}
