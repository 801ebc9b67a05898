//! The term condition `C(α,β;δ)`, the commutator `[α,β]`, the center and
//! the upper central series, and abelianness/nilpotency/solvability.
//!
//! A term condition matrix `(p, q, r, s)` stands for
//!
//! ```text
//!     t(x, z̄)  t(x, ū)        p  q
//!     t(y, z̄)  t(y, ū)   =    r  s
//! ```
//!
//! with `x α y` changing the row and `z̄ β ū` changing the column. The set of
//! all such matrices is the subuniverse of `Q⁴` generated by `(a, a, b, b)`
//! for `a α b` and `(c, d, c, d)` for `c β d`. `C(α,β;δ)` holds iff every
//! matrix with `p δ q` also has `r δ s`.

pub mod definitional;

use serde::Serialize;

use crate::congruence::{self, CongruenceLattice, Partition};
use crate::error::{Error, Result};
use crate::table::LeftQuasigroup;

/// `|Q|⁴` must stay addressable by a dense bitset.
pub const MAX_TC_ORDER: usize = 16;

/// A term condition matrix `[[p, q], [r, s]]`.
pub type TcMatrix = [u8; 4];

fn check_order(q: &LeftQuasigroup) -> Result<()> {
    if q.order() > MAX_TC_ORDER {
        return Err(Error::CapExceeded { what: "order for term condition matrices", limit: MAX_TC_ORDER });
    }
    Ok(())
}

/// Size of `{(p,q,r,s) : p α r, q α s, p β q, r β s}`, which contains every
/// matrix; reaching it ends a closure early.
fn ambient_size(alpha: &Partition, beta: &Partition) -> usize {
    let n = alpha.size();
    let mut count = 0;
    for p in 0..n {
        for q in (0..n).filter(|&q| beta.related(p, q)) {
            for r in (0..n).filter(|&r| alpha.related(p, r)) {
                count += (0..n).filter(|&s| alpha.related(q, s) && beta.related(r, s)).count();
            }
        }
    }
    count
}

/// Worklist closure under coordinatewise `·` and `\`. `visit` sees every new
/// matrix and may abort the closure by returning `false`; the return value
/// is `false` iff it did.
fn close(
    q: &LeftQuasigroup,
    alpha: &Partition,
    beta: &Partition,
    mut visit: impl FnMut(TcMatrix) -> bool,
) -> (Vec<TcMatrix>, bool) {
    let n = q.order();
    let index = |m: &TcMatrix| ((m[0] as usize * n + m[1] as usize) * n + m[2] as usize) * n + m[3] as usize;
    let mut seen = vec![false; n * n * n * n];
    let mut list: Vec<TcMatrix> = Vec::new();
    let full = ambient_size(alpha, beta);

    let mut gens = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if alpha.related(a, b) {
                gens.push([a as u8, a as u8, b as u8, b as u8]);
            }
            if beta.related(a, b) {
                gens.push([a as u8, b as u8, a as u8, b as u8]);
            }
        }
    }
    for m in gens {
        let k = index(&m);
        if !seen[k] {
            seen[k] = true;
            if !visit(m) {
                return (list, false);
            }
            list.push(m);
        }
    }

    let (mul, ldiv) = (q.mul_table(), q.ldiv_table());
    let op = |t: &[u8], a: &TcMatrix, b: &TcMatrix| -> TcMatrix {
        std::array::from_fn(|i| t[a[i] as usize * n + b[i] as usize])
    };
    let mut i = 0;
    while i < list.len() && list.len() < full {
        let a = list[i];
        let mut j = 0;
        while j <= i {
            let b = list[j];
            for c in [op(mul, &a, &b), op(mul, &b, &a), op(ldiv, &a, &b), op(ldiv, &b, &a)] {
                let k = index(&c);
                if !seen[k] {
                    seen[k] = true;
                    if !visit(c) {
                        return (list, false);
                    }
                    list.push(c);
                }
            }
            j += 1;
        }
        i += 1;
    }
    (list, true)
}

/// The subuniverse of `Q⁴` generated by the `α`-row and `β`-column generators.
pub fn tc_matrices(q: &LeftQuasigroup, alpha: &Partition, beta: &Partition) -> Result<Vec<TcMatrix>> {
    check_order(q)?;
    Ok(close(q, alpha, beta, |_| true).0)
}

/// `C(α,β;δ)`, stopping at the first matrix that breaks it.
pub fn centralizes(q: &LeftQuasigroup, alpha: &Partition, beta: &Partition, delta: &Partition) -> Result<bool> {
    check_order(q)?;
    let ok = |m: TcMatrix| {
        !delta.related(m[0] as usize, m[1] as usize) || delta.related(m[2] as usize, m[3] as usize)
    };
    Ok(close(q, alpha, beta, ok).1)
}

/// `C(α,β;δ)` against a precomputed matrix set.
pub fn centralizes_on(matrices: &[TcMatrix], delta: &Partition) -> bool {
    matrices
        .iter()
        .all(|m| !delta.related(m[0] as usize, m[1] as usize) || delta.related(m[2] as usize, m[3] as usize))
}

/// Least `δ` with `C(α,β;δ)` among congruences containing `floor`, by the
/// fixpoint `δ ← Cg(δ ∪ {(r, s) : p δ q})`.
fn least_over(q: &LeftQuasigroup, matrices: &[TcMatrix], floor: Partition) -> Partition {
    let mut delta = floor;
    loop {
        let forced: Vec<(usize, usize)> = matrices
            .iter()
            .filter(|m| delta.related(m[0] as usize, m[1] as usize) && !delta.related(m[2] as usize, m[3] as usize))
            .map(|m| (m[2] as usize, m[3] as usize))
            .collect();
        if forced.is_empty() {
            return delta;
        }
        delta = congruence::generate(q, delta.pairs().chain(forced));
    }
}

/// `[α, β]`, the least congruence `δ` with `C(α,β;δ)`.
pub fn commutator(q: &LeftQuasigroup, alpha: &Partition, beta: &Partition) -> Result<Partition> {
    let matrices = tc_matrices(q, alpha, beta)?;
    Ok(least_over(q, &matrices, Partition::discrete(q.order())))
}

/// `α` is central: `C(α, 1; 0)`.
pub fn is_central(q: &LeftQuasigroup, alpha: &Partition) -> Result<bool> {
    let n = q.order();
    centralizes(q, alpha, &Partition::full(n), &Partition::discrete(n))
}

/// `ζ_Q`, the largest `α` with `C(α, 1; 0)`.
///
/// Built as the join of the central principal congruences, then re-checked
/// independently: `ζ` is central, and `ζ ∨ Cg(a, b)` is not for any pair
/// outside `ζ` (every congruence strictly above `ζ` contains such a join).
pub fn center(q: &LeftQuasigroup) -> Result<Partition> {
    let n = q.order();
    let full = Partition::full(n);
    if is_central(q, &full)? {
        return Ok(full);
    }
    let mut zeta = Partition::discrete(n);
    for a in 0..n {
        for b in (a + 1)..n {
            if zeta.related(a, b) {
                continue;
            }
            let c = congruence::principal_congruence(q, a, b);
            if is_central(q, &c)? {
                zeta = congruence::join(q, &zeta, &c);
            }
        }
    }
    if !is_central(q, &zeta)? {
        return Err(Error::SpecViolation(format!("join of central congruences [{zeta}] is not central")));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if !zeta.related(a, b) {
                let above = congruence::join(q, &zeta, &congruence::principal_congruence(q, a, b));
                if is_central(q, &above)? {
                    return Err(Error::SpecViolation(format!("[{above}] is central and above the center")));
                }
            }
        }
    }
    Ok(zeta)
}

/// The upper central series `ζ_1 ≤ ζ_2 ≤ …`.
#[derive(Clone, Debug, Serialize)]
pub struct CentralSeries {
    pub chain: Vec<Partition>,
    /// Least `k ≥ 1` with `ζ_k = 1_Q`, if the series reaches the top.
    pub nilpotency_length: Option<usize>,
}

impl CentralSeries {
    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_length.is_some()
    }
}

/// Iterates the center on successive quotients and pulls each back.
pub fn central_series(q: &LeftQuasigroup) -> Result<CentralSeries> {
    let mut chain = vec![center(q)?];
    loop {
        let last = chain.last().unwrap();
        if last.is_full() {
            return Ok(CentralSeries { nilpotency_length: Some(chain.len()), chain });
        }
        let (quot, _) = congruence::quotient(q, last)?;
        let z = center(&quot)?;
        if z.is_discrete() {
            return Ok(CentralSeries { chain, nilpotency_length: None });
        }
        let next = congruence::lift(last, &z);
        chain.push(next);
    }
}

/// `δ₀ = 1_Q`, `δ_{k+1} = [δ_k, δ_k]`, until `0_Q` or stable.
pub fn derived_series(q: &LeftQuasigroup) -> Result<Vec<Partition>> {
    let mut chain = vec![Partition::full(q.order())];
    loop {
        let last = chain.last().unwrap();
        if last.is_discrete() {
            return Ok(chain);
        }
        let next = commutator(q, last, last)?;
        if &next == last {
            return Ok(chain);
        }
        chain.push(next);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceFlags {
    pub alpha: Partition,
    /// `[α, α] = 0`.
    pub abelian: bool,
    /// `[α, 1] = 0`.
    pub central: bool,
    /// `α ≤ λ_Q`.
    pub strongly_abelian: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbelianReport {
    pub abelian: bool,
    pub nilpotent: bool,
    pub nilpotency_length: Option<usize>,
    /// Solvability through the term-condition derived series.
    pub solvable: bool,
    pub solvable_length: Option<usize>,
    pub center_blocks: Partition,
    pub per_congruence: Vec<CongruenceFlags>,
}

pub fn classify_abelianness(q: &LeftQuasigroup) -> Result<AbelianReport> {
    let lattice = CongruenceLattice::build(q, congruence::DEFAULT_LATTICE_CAP)?;
    classify_abelianness_with(q, &lattice)
}

pub fn classify_abelianness_with(q: &LeftQuasigroup, lattice: &CongruenceLattice) -> Result<AbelianReport> {
    let n = q.order();
    let series = central_series(q)?;
    let derived = derived_series(q)?;
    let solvable = derived.last().unwrap().is_discrete();
    let lambda = crate::galois::cayley_kernel(q);
    let zero = Partition::discrete(n);
    let per_congruence = lattice
        .congruences()
        .iter()
        .map(|a| {
            Ok(CongruenceFlags {
                alpha: a.clone(),
                abelian: centralizes(q, a, a, &zero)?,
                central: is_central(q, a)?,
                strongly_abelian: a.leq(&lambda),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AbelianReport {
        abelian: series.chain[0].is_full(),
        nilpotent: series.is_nilpotent(),
        nilpotency_length: series.nilpotency_length,
        solvable,
        solvable_length: solvable.then(|| derived.len() - 1),
        center_blocks: series.chain[0].clone(),
        per_congruence,
    })
}
