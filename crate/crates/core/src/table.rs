//! Finite left quasigroups given by Cayley tables.
//!
//! Elements are the dense indices `0..n`. The multiplication table is stored
//! row-major (`mul[x * n + y] = x·y`) and the left division table is
//! materialized alongside it, so every row of `ldiv` is the inverse
//! permutation of the corresponding row of `mul`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Elements are stored as bytes, so orders are limited to 256.
pub const MAX_ORDER: usize = 256;
/// Default cap on orders for operations that enumerate subsets or build products.
pub const DEFAULT_ORDER_CAP: usize = 12;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LeftQuasigroup {
    n: usize,
    mul: Vec<u8>,
    ldiv: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    mul: Vec<Vec<usize>>,
}

impl LeftQuasigroup {
    /// Builds a left quasigroup from a row-major table, validating that every
    /// row is a permutation.
    pub fn from_table(n: usize, mul: Vec<u8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedInput("order must be positive".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::CapExceeded { what: "order", limit: MAX_ORDER });
        }
        if mul.len() != n * n {
            return Err(Error::MalformedInput(format!(
                "expected {} entries, found {}",
                n * n,
                mul.len()
            )));
        }
        if let Some(bad) = mul.iter().find(|&&v| v as usize >= n) {
            return Err(Error::MalformedInput(format!("entry {bad} out of range 0..{n}")));
        }
        let mut ldiv = vec![0u8; n * n];
        for x in 0..n {
            let mut seen = vec![false; n];
            for y in 0..n {
                let v = mul[x * n + y] as usize;
                if seen[v] {
                    return Err(Error::NotLeftQuasigroup { row: x });
                }
                seen[v] = true;
                ldiv[x * n + v] = y as u8;
            }
        }
        Ok(Self { n, mul, ldiv })
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        let mut mul = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedInput(format!(
                    "row {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::MalformedInput(format!("entry {v} out of range 0..{n}")));
                }
                mul.push(v as u8);
            }
        }
        Self::from_table(n, mul)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let rows: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// The projection left quasigroup `P_n` with `x·y = y`.
    pub fn projection(n: usize) -> Self {
        Self::from_fn(n, |_, y| y).expect("projection table is valid")
    }

    pub fn trivial() -> Self {
        Self::projection(1)
    }

    /// Parses either the `.lq` text format or the JSON form `{"n": .., "mul": [[..]]}`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let json: TableJson = serde_json::from_str(text)
                .map_err(|e| Error::MalformedInput(format!("json: {e}")))?;
            if json.mul.len() != json.n {
                return Err(Error::MalformedInput(format!(
                    "declared order {} but {} rows",
                    json.n,
                    json.mul.len()
                )));
            }
            return Self::from_rows(&json.mul);
        }
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedInput("empty input".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::MalformedInput(format!("bad order line {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for line in lines {
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| Error::MalformedInput(format!("bad entry {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::MalformedInput(format!(
                "declared order {n} but {} rows",
                rows.len()
            )));
        }
        Self::from_rows(&rows)
    }

    /// Serializes to the `.lq` text format.
    pub fn to_lq(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TableJson { n: self.n, mul: self.rows() }).expect("serializable")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.n + y] as usize
    }

    #[inline]
    pub fn ldiv(&self, x: usize, y: usize) -> usize {
        self.ldiv[x * self.n + y] as usize
    }

    /// Raw row-major multiplication table.
    pub fn mul_table(&self) -> &[u8] {
        &self.mul
    }

    pub fn ldiv_table(&self) -> &[u8] {
        &self.ldiv
    }

    pub fn row(&self, x: usize) -> &[u8] {
        &self.mul[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|x| self.row(x).iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// The left translation `L_x : y ↦ x·y`.
    pub fn left_translation(&self, x: usize) -> Permutation {
        Permutation::from_bytes_unchecked(self.row(x).to_vec())
    }

    pub fn left_translations(&self) -> Vec<Permutation> {
        (0..self.n).map(|x| self.left_translation(x)).collect()
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.n).all(|x| self.mul(x, x) == x)
    }

    pub fn is_projection(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.mul(x, y) == y))
    }

    pub fn is_rack(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = self.mul(x, y);
                (0..n).all(|z| self.mul(x, self.mul(y, z)) == self.mul(xy, self.mul(x, z)))
            })
        })
    }

    /// All right translations are bijective.
    pub fn is_latin(&self) -> bool {
        let n = self.n;
        (0..n).all(|y| {
            let mut seen = vec![false; n];
            (0..n).all(|x| !std::mem::replace(&mut seen[self.mul(x, y)], true))
        })
    }

    /// Distinct elements have distinct left translations.
    pub fn is_faithful(&self) -> bool {
        let mut rows: Vec<&[u8]> = (0..self.n).map(|x| self.row(x)).collect();
        rows.sort_unstable();
        rows.windows(2).all(|w| w[0] != w[1])
    }

    /// `Fix(L_x)`.
    pub fn fixed_points(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.mul(x, y) == y).collect()
    }

    /// Every subalgebra is faithful.
    ///
    /// A subalgebra `S` fails to be faithful exactly when some `x ≠ y` in `S`
    /// have translations agreeing on `S`, and then they already agree on the
    /// subalgebra generated by `{x, y}`. So only 2-generated subalgebras need
    /// to be inspected.
    pub fn is_superfaithful(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in (x + 1)..n {
                let sub = self.generated_subalgebra(&[x, y]);
                if sub.iter().all(|&z| self.mul(x, z) == self.mul(y, z)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn classify(&self) -> PropertyReport {
        let idempotents: Vec<usize> = (0..self.n).filter(|&x| self.mul(x, x) == x).collect();
        let idempotent = idempotents.len() == self.n;
        let fix_sets: Vec<Vec<usize>> = (0..self.n).map(|x| self.fixed_points(x)).collect();
        let fix_property = fix_sets.iter().enumerate().all(|(x, f)| f == &[x]);
        let rack = self.is_rack();
        PropertyReport {
            idempotent,
            projection: self.is_projection(),
            rack,
            quandle: rack && idempotent,
            latin: self.is_latin(),
            faithful: self.is_faithful(),
            superfaithful: self.is_superfaithful(),
            fix_property,
            idempotents,
            fix_sets,
        }
    }

    /// Least subset containing `seed` closed under `·` and `\`, sorted.
    pub fn generated_subalgebra(&self, seed: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        let mut members = Vec::with_capacity(self.n);
        for &s in seed {
            if !inside[s] {
                inside[s] = true;
                members.push(s);
            }
        }
        let mut i = 0;
        while i < members.len() {
            let a = members[i];
            let mut j = 0;
            while j <= i {
                let b = members[j];
                for v in [self.mul(a, b), self.mul(b, a), self.ldiv(a, b), self.ldiv(b, a)] {
                    if !inside[v] {
                        inside[v] = true;
                        members.push(v);
                    }
                }
                j += 1;
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }

    /// All nonempty subuniverses, sorted by size and then lexicographically.
    pub fn subuniverses(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        if self.n > cap || self.n > 24 {
            return Err(Error::CapExceeded { what: "order for subuniverse enumeration", limit: cap.min(24) });
        }
        let n = self.n;
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for mask in 1u32..(1u32 << n) {
            let seed: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let closed = self.generated_subalgebra(&seed);
            let key: u32 = closed.iter().fold(0, |acc, &i| acc | 1 << i);
            if seen.insert(key) {
                out.push(closed);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    /// The subalgebra on a closed subset, relabelled to `0..k` in increasing order.
    pub fn subalgebra(&self, subset: &[usize]) -> Result<Self> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &s) in subset.iter().enumerate() {
            index[s] = i;
        }
        let k = subset.len();
        let mut mul = Vec::with_capacity(k * k);
        for &a in subset {
            for &b in subset {
                let v = index[self.mul(a, b)];
                if v == usize::MAX {
                    return Err(Error::PreconditionFailed("subset is not closed".into()));
                }
                mul.push(v as u8);
            }
        }
        Self::from_table(k, mul)
    }

    pub fn direct_product(&self, other: &Self, cap: usize) -> Result<Self> {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        if n > cap || n > MAX_ORDER {
            return Err(Error::CapExceeded { what: "product order", limit: cap.min(MAX_ORDER) });
        }
        Self::from_fn(n, |a, b| {
            let (x1, x2) = (a / n2, a % n2);
            let (y1, y2) = (b / n2, b % n2);
            self.mul(x1, y1) * n2 + other.mul(x2, y2)
        })
    }

    /// The isomorphic copy obtained by renaming `x` to `phi[x]`.
    pub fn relabel(&self, phi: &[usize]) -> Self {
        let n = self.n;
        let mut mul = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[phi[x] * n + phi[y]] = phi[self.mul(x, y)] as u8;
            }
        }
        Self::from_table(n, mul).expect("relabelling preserves validity")
    }
}

impl fmt::Display for LeftQuasigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for x in 0..self.n {
            let row: Vec<String> = self.row(x).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Structural flags of a left quasigroup, all computed exhaustively.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub idempotent: bool,
    pub projection: bool,
    pub rack: bool,
    pub quandle: bool,
    pub latin: bool,
    pub faithful: bool,
    pub superfaithful: bool,
    /// `Fix(L_x) = {x}` for every `x`.
    pub fix_property: bool,
    pub idempotents: Vec<usize>,
    pub fix_sets: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dihedral3() -> LeftQuasigroup {
        LeftQuasigroup::parse("3\n0 2 1\n2 1 0\n1 0 2").unwrap()
    }

    #[test]
    fn parse_projection_and_dihedral() {
        let p2 = LeftQuasigroup::parse("2\n0 1\n0 1").unwrap();
        assert_eq!(p2, LeftQuasigroup::projection(2));
        let d3 = dihedral3();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(d3.mul(x, y), (6 + 2 * x - y) % 3);
            }
        }
    }

    #[test]
    fn parse_rejects_repeated_row_entry() {
        assert_eq!(
            LeftQuasigroup::parse("2\n0 0\n0 1"),
            Err(Error::NotLeftQuasigroup { row: 0 })
        );
    }

    #[test]
    fn parse_errors_on_shape() {
        assert!(matches!(LeftQuasigroup::parse("2\n0 1"), Err(Error::MalformedInput(_))));
        assert!(matches!(LeftQuasigroup::parse("2\n0 2\n0 1"), Err(Error::MalformedInput(_))));
        assert!(matches!(LeftQuasigroup::parse("x"), Err(Error::MalformedInput(_))));
        assert!(matches!(LeftQuasigroup::parse(""), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn comments_and_json() {
        let q = LeftQuasigroup::parse("# P2\n2 # order\n0 1\n\n0 1 # last\n").unwrap();
        assert!(q.is_projection());
        let j = LeftQuasigroup::parse(r#"{"n": 3, "mul": [[0,2,1],[2,1,0],[1,0,2]]}"#).unwrap();
        assert_eq!(j, dihedral3());
        assert_eq!(LeftQuasigroup::parse(&j.to_json()).unwrap(), j);
    }

    #[test]
    fn classify_examples() {
        let p2 = LeftQuasigroup::projection(2).classify();
        assert!(p2.projection && p2.idempotent && p2.quandle);
        assert!(!p2.faithful && !p2.superfaithful);

        let d3 = dihedral3().classify();
        assert!(d3.quandle && d3.latin && d3.faithful && d3.superfaithful && d3.fix_property);
        assert_eq!(d3.idempotents, vec![0, 1, 2]);
    }

    #[test]
    fn subuniverse_examples() {
        let p2 = LeftQuasigroup::projection(2);
        assert_eq!(p2.subuniverses(12).unwrap(), vec![vec![0], vec![1], vec![0, 1]]);
        assert_eq!(
            dihedral3().subuniverses(12).unwrap(),
            vec![vec![0], vec![1], vec![2], vec![0, 1, 2]]
        );
        assert_eq!(dihedral3().generated_subalgebra(&[0, 1]), vec![0, 1, 2]);
        assert_eq!(p2.generated_subalgebra(&[0]), vec![0]);
        assert!(p2.generated_subalgebra(&[]).is_empty());
        let big = LeftQuasigroup::projection(13);
        assert!(matches!(big.subuniverses(12), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn products() {
        let p2 = LeftQuasigroup::projection(2);
        assert_eq!(p2.direct_product(&p2, 12).unwrap(), LeftQuasigroup::projection(4));
        let d3p2 = dihedral3().direct_product(&p2, 12).unwrap();
        let r = d3p2.classify();
        assert_eq!(d3p2.order(), 6);
        assert!(r.idempotent && !r.latin);
        assert_eq!(dihedral3().direct_product(&LeftQuasigroup::trivial(), 12).unwrap(), dihedral3());
        assert!(d3p2.direct_product(&d3p2, 12).is_err());
    }

    #[test]
    fn superfaithful_matches_subalgebra_enumeration() {
        // Non-idempotent table: L_0 = L_1 restricted to {0,1}? check both routes.
        let q = LeftQuasigroup::parse("3\n1 0 2\n1 0 2\n0 1 2").unwrap();
        let by_subalgebras = q
            .subuniverses(12)
            .unwrap()
            .iter()
            .all(|s| q.subalgebra(s).unwrap().is_faithful());
        assert_eq!(q.is_superfaithful(), by_subalgebras);
        assert!(!q.is_superfaithful());
    }
}
