//! Enumeration of small left quasigroups, isomorphism reduction, seeded
//! sampling, and the named predicates used to filter a census.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::galois::Groups;
use crate::table::LeftQuasigroup;

/// Largest order enumerated exhaustively.
pub const MAX_EXHAUSTIVE_ORDER: usize = 4;
/// Largest order accepted at all by census commands.
pub const MAX_CENSUS_ORDER: usize = 5;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Iterator over every table whose row `x` is drawn from `choices[x]`.
pub struct Tables {
    n: usize,
    choices: Vec<Vec<Vec<u8>>>,
    counter: Vec<usize>,
    done: bool,
}

impl Tables {
    fn new(n: usize, choices: Vec<Vec<Vec<u8>>>) -> Self {
        let done = choices.iter().any(|c| c.is_empty());
        Self { n, counter: vec![0; n], choices, done }
    }

    /// Number of tables the iterator yields in total.
    pub fn total(&self) -> usize {
        self.choices.iter().map(|c| c.len()).product()
    }
}

impl Iterator for Tables {
    type Item = LeftQuasigroup;

    fn next(&mut self) -> Option<LeftQuasigroup> {
        if self.done {
            return None;
        }
        let mut mul = Vec::with_capacity(self.n * self.n);
        for (x, &c) in self.counter.iter().enumerate() {
            mul.extend_from_slice(&self.choices[x][c]);
        }
        // odometer, last row fastest
        self.done = true;
        for x in (0..self.n).rev() {
            self.counter[x] += 1;
            if self.counter[x] < self.choices[x].len() {
                self.done = false;
                break;
            }
            self.counter[x] = 0;
        }
        if self.n == 0 {
            self.done = true;
        }
        Some(LeftQuasigroup::from_table(self.n, mul).expect("rows are permutations"))
    }
}

fn check_exhaustive(n: usize) -> Result<()> {
    if n == 0 || n > MAX_EXHAUSTIVE_ORDER {
        return Err(Error::CapExceeded { what: "order for exhaustive census", limit: MAX_EXHAUSTIVE_ORDER });
    }
    Ok(())
}

/// All `(n!)^n` left quasigroups on `0..n`.
pub fn all_tables(n: usize) -> Result<Tables> {
    check_exhaustive(n)?;
    let perms = permutations(n);
    Ok(Tables::new(n, vec![perms; n]))
}

/// All `((n-1)!)^n` idempotent left quasigroups on `0..n`.
pub fn idempotent_tables(n: usize) -> Result<Tables> {
    check_exhaustive(n)?;
    let perms = permutations(n);
    let choices = (0..n)
        .map(|x| perms.iter().filter(|p| p[x] as usize == x).cloned().collect())
        .collect();
    Ok(Tables::new(n, choices))
}

/// The lexicographically least table among all relabelings.
pub fn canonical_form(q: &LeftQuasigroup) -> LeftQuasigroup {
    canonical_form_with(q, &permutations(q.order()))
}

/// [`canonical_form`] with the relabelings supplied, for census loops.
pub fn canonical_form_with(q: &LeftQuasigroup, perms: &[Vec<u8>]) -> LeftQuasigroup {
    let n = q.order();
    let mul = q.mul_table();
    let mut best: Option<Vec<u8>> = None;
    let mut cand = vec![0u8; n * n];
    for phi in perms {
        for x in 0..n {
            for y in 0..n {
                cand[phi[x] as usize * n + phi[y] as usize] = phi[mul[x * n + y] as usize];
            }
        }
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand.clone());
        }
    }
    LeftQuasigroup::from_table(n, best.expect("n! ≥ 1")).expect("relabeling keeps the axioms")
}

/// Relabeling-invariant data of one element, used to prune the search.
fn element_signature(q: &LeftQuasigroup, x: usize) -> (Vec<usize>, bool, usize) {
    let mut cycle_type: Vec<usize> = q.left_translation(x).cycles().iter().map(Vec::len).collect();
    cycle_type.sort_unstable();
    let column: std::collections::HashSet<usize> = (0..q.order()).map(|y| q.mul(y, x)).collect();
    (cycle_type, q.mul(x, x) == x, column.len())
}

/// An isomorphism `a → b` as an image array, found by backtracking over
/// bijections that respect the element signatures.
pub fn find_isomorphism(a: &LeftQuasigroup, b: &LeftQuasigroup) -> Option<Vec<usize>> {
    let n = a.order();
    if n != b.order() {
        return None;
    }
    let sa: Vec<_> = (0..n).map(|x| element_signature(a, x)).collect();
    let sb: Vec<_> = (0..n).map(|x| element_signature(b, x)).collect();
    let mut ma = sa.clone();
    let mut mb = sb.clone();
    ma.sort();
    mb.sort();
    if ma != mb {
        return None;
    }
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        x: usize,
        a: &LeftQuasigroup,
        b: &LeftQuasigroup,
        sa: &[(Vec<usize>, bool, usize)],
        sb: &[(Vec<usize>, bool, usize)],
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.order();
        if x == n {
            return (0..n).all(|u| (0..n).all(|v| phi[a.mul(u, v)] == b.mul(phi[u], phi[v])));
        }
        for t in 0..n {
            if used[t] || sa[x] != sb[t] {
                continue;
            }
            phi[x] = t;
            used[t] = true;
            let consistent = (0..=x).all(|u| {
                (0..=x).all(|v| {
                    let w = a.mul(u, v);
                    w > x || phi[w] == b.mul(phi[u], phi[v])
                })
            });
            if consistent && extend(x + 1, a, b, sa, sb, phi, used) {
                return true;
            }
            used[t] = false;
            phi[x] = usize::MAX;
        }
        false
    }
    extend(0, a, b, &sa, &sb, &mut phi, &mut used).then_some(phi)
}

pub fn is_isomorphic(a: &LeftQuasigroup, b: &LeftQuasigroup) -> bool {
    find_isomorphism(a, b).is_some()
}

/// One isomorphism class of a census.
#[derive(Clone, Debug)]
pub struct IsoClass {
    /// The canonical form of the class.
    pub representative: LeftQuasigroup,
    /// Number of census tables in the class.
    pub size: usize,
}

/// Groups tables by canonical form, in order of first appearance.
pub fn iso_classes(tables: impl IntoIterator<Item = LeftQuasigroup>) -> Vec<IsoClass> {
    let mut index: HashMap<LeftQuasigroup, usize> = HashMap::new();
    let mut classes: Vec<IsoClass> = Vec::new();
    let mut perms: HashMap<usize, Vec<Vec<u8>>> = HashMap::new();
    for q in tables {
        let p = perms.entry(q.order()).or_insert_with(|| permutations(q.order()));
        let c = canonical_form_with(&q, p);
        match index.get(&c) {
            Some(&i) => classes[i].size += 1,
            None => {
                index.insert(c.clone(), classes.len());
                classes.push(IsoClass { representative: c, size: 1 });
            }
        }
    }
    classes
}

fn random_table(n: usize, idempotent: bool, rng: &mut ChaCha8Rng) -> LeftQuasigroup {
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        let mut row: Vec<u8> = (0..n as u8).filter(|&v| !idempotent || v as usize != x).collect();
        row.shuffle(rng);
        if idempotent {
            row.insert(x, x as u8);
        }
        mul.extend(row);
    }
    LeftQuasigroup::from_table(n, mul).expect("rows are permutations")
}

/// `count` tables drawn uniformly (with replacement) from the census of
/// order `n`; reproducible from `seed`.
pub fn sample(n: usize, count: usize, idempotent: bool, seed: u64) -> Result<Vec<LeftQuasigroup>> {
    if n == 0 || n > crate::table::DEFAULT_ORDER_CAP {
        return Err(Error::CapExceeded { what: "order for sampling", limit: crate::table::DEFAULT_ORDER_CAP });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| random_table(n, idempotent, &mut rng)).collect())
}

/// A named property usable as a census filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Idempotent,
    Projection,
    Rack,
    Quandle,
    Latin,
    Faithful,
    Superfaithful,
    FixProperty,
    Cayley,
    Connected,
    ConnectedByDis,
    Superconnected,
    Semiregular,
    Abelian,
    Nilpotent,
    Solvable,
    Maltsev,
}

const PROPERTY_NAMES: &[(&str, Property)] = &[
    ("idempotent", Property::Idempotent),
    ("projection", Property::Projection),
    ("rack", Property::Rack),
    ("quandle", Property::Quandle),
    ("latin", Property::Latin),
    ("faithful", Property::Faithful),
    ("superfaithful", Property::Superfaithful),
    ("fix", Property::FixProperty),
    ("cayley", Property::Cayley),
    ("connected", Property::Connected),
    ("connected-by-dis", Property::ConnectedByDis),
    ("superconnected", Property::Superconnected),
    ("semiregular", Property::Semiregular),
    ("abelian", Property::Abelian),
    ("nilpotent", Property::Nilpotent),
    ("solvable", Property::Solvable),
    ("maltsev", Property::Maltsev),
];

impl Property {
    pub fn name(self) -> &'static str {
        PROPERTY_NAMES.iter().find(|(_, p)| *p == self).unwrap().0
    }

    /// Evaluates the property. `Ok(None)` means undecided within the
    /// default budget (only possible for `Maltsev`).
    pub fn eval(self, q: &LeftQuasigroup) -> Result<Option<bool>> {
        use crate::{commutator, galois, maltsev};
        Ok(Some(match self {
            Property::Idempotent => q.is_idempotent(),
            Property::Projection => q.is_projection(),
            Property::Rack => q.is_rack(),
            Property::Quandle => q.is_rack() && q.is_idempotent(),
            Property::Latin => q.is_latin(),
            Property::Faithful => q.is_faithful(),
            Property::Superfaithful => q.is_superfaithful(),
            Property::FixProperty => (0..q.order()).all(|x| q.fixed_points(x) == [x]),
            Property::Cayley => galois::is_cayley(q),
            Property::Connected => maltsev::is_connected(q)?,
            Property::ConnectedByDis => maltsev::is_connected_by_dis(q)?,
            Property::Superconnected => maltsev::is_superconnected(q)?,
            Property::Semiregular => Groups::new(q)?.dis().is_semiregular(),
            Property::Abelian => commutator::center(q)?.is_full(),
            Property::Nilpotent => commutator::central_series(q)?.is_nilpotent(),
            Property::Solvable => commutator::derived_series(q)?.last().unwrap().is_discrete(),
            Property::Maltsev => {
                return Ok(maltsev::maltsev_search(q, maltsev::DEFAULT_BUDGET).status.as_bool());
            }
        }))
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PROPERTY_NAMES
            .iter()
            .find(|(name, _)| *name == s)
            .map(|(_, p)| *p)
            .ok_or_else(|| Error::MalformedInput(format!("unknown property {s:?}")))
    }
}

/// A conjunction of possibly negated properties, written `a,b,not-c`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Filter {
    pub terms: Vec<(Property, bool)>,
}

impl Filter {
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match part.strip_prefix("not-") {
                Some(rest) => terms.push((rest.parse()?, false)),
                None => terms.push((part.parse()?, true)),
            }
        }
        Ok(Self { terms })
    }

    /// `Ok(None)` when some property was undecided and no other term failed.
    pub fn matches(&self, q: &LeftQuasigroup) -> Result<Option<bool>> {
        let mut undecided = false;
        for &(p, want) in &self.terms {
            match p.eval(q)? {
                Some(v) if v != want => return Ok(Some(false)),
                Some(_) => {}
                None => undecided = true,
            }
        }
        Ok(if undecided { None } else { Some(true) })
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, want)| if *want { p.to_string() } else { format!("not-{p}") })
            .collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(1).len(), 1);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn census_sizes() {
        assert_eq!(all_tables(2).unwrap().count(), 4);
        assert_eq!(all_tables(3).unwrap().count(), 216);
        assert_eq!(idempotent_tables(3).unwrap().count(), 8);
        assert_eq!(idempotent_tables(4).unwrap().total(), 1296);
        assert!(all_tables(5).is_err());
    }

    #[test]
    fn classes_partition_the_census() {
        for n in 1..=3 {
            let classes = iso_classes(all_tables(n).unwrap());
            let total: usize = classes.iter().map(|c| c.size).sum();
            assert_eq!(total, all_tables(n).unwrap().total());
            // class size is n! / |Aut|
            for c in &classes {
                let fact: usize = (1..=n).product();
                assert_eq!(fact % c.size, 0);
            }
        }
    }

    #[test]
    fn canonical_forms_agree_with_backtracking() {
        let tables: Vec<LeftQuasigroup> = idempotent_tables(4).unwrap().step_by(7).collect();
        for a in tables.iter().take(40) {
            for b in tables.iter().take(40) {
                assert_eq!(canonical_form(a) == canonical_form(b), is_isomorphic(a, b));
            }
        }
        let q = LeftQuasigroup::from_fn(3, |x, y| (6 + 2 * x - y) % 3).unwrap();
        let phi = [2, 0, 1];
        let r = q.relabel(&phi);
        let found = find_isomorphism(&q, &r).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(found[q.mul(x, y)], r.mul(found[x], found[y]));
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample(5, 20, true, 7).unwrap();
        let b = sample(5, 20, true, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(LeftQuasigroup::is_idempotent));
        assert_ne!(a, sample(5, 20, true, 8).unwrap());
    }

    #[test]
    fn filters() {
        let f = Filter::parse("semiregular,idempotent,not-quandle").unwrap();
        assert_eq!(f.to_string(), "semiregular,idempotent,not-quandle");
        for q in idempotent_tables(3).unwrap() {
            assert_eq!(f.matches(&q).unwrap(), Some(false));
        }
        assert!(Filter::parse("bogus").is_err());
    }
}
