//! Finite abelian groups, their endomorphisms, and central extensions
//! `(x,a)·(y,b) = (x·y, g(a) + f(b) + θ(x,y))` of a left quasigroup.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::Value;

use crate::congruence::{self, Partition};
use crate::error::{Error, Result};
use crate::table::LeftQuasigroup;

/// `Z_{n₁} × … × Z_{n_k}`. Elements are indexed in mixed radix with the
/// last factor varying fastest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbGroup {
    factors: Vec<usize>,
}

impl AbGroup {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::SpecViolation("cyclic factor of order 0".into()));
        }
        let order: usize = factors.iter().product();
        if order > crate::table::MAX_ORDER {
            return Err(Error::CapExceeded { what: "group order", limit: crate::table::MAX_ORDER });
        }
        Ok(Self { factors })
    }

    pub fn cyclic(n: usize) -> Self {
        Self::new(vec![n]).expect("positive order")
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn to_tuple(&self, mut a: usize) -> Vec<usize> {
        let mut t = vec![0; self.factors.len()];
        for (i, &m) in self.factors.iter().enumerate().rev() {
            t[i] = a % m;
            a /= m;
        }
        t
    }

    pub fn from_tuple(&self, t: &[usize]) -> usize {
        self.factors.iter().zip(t).fold(0, |acc, (&m, &c)| acc * m + c % m)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ta, tb) = (self.to_tuple(a), self.to_tuple(b));
        let s: Vec<usize> = ta.iter().zip(&tb).zip(&self.factors).map(|((x, y), m)| (x + y) % m).collect();
        self.from_tuple(&s)
    }

    pub fn neg(&self, a: usize) -> usize {
        let t: Vec<usize> = self.to_tuple(a).iter().zip(&self.factors).map(|(x, m)| (m - x) % m).collect();
        self.from_tuple(&t)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Element `k·a`.
    pub fn scale(&self, k: usize, a: usize) -> usize {
        let t: Vec<usize> = self.to_tuple(a).iter().zip(&self.factors).map(|(x, m)| k * x % m).collect();
        self.from_tuple(&t)
    }

    /// Addition table, `a·|A| + b ↦ a + b`.
    fn addition_table(&self) -> Vec<usize> {
        let n = self.order();
        (0..n * n).map(|i| self.add(i / n, i % n)).collect()
    }

    /// Every endomorphism, from all admissible images of the unit vectors.
    pub fn endomorphisms(&self) -> Vec<EndoMap> {
        let n = self.order();
        let k = self.factors.len();
        // images of unit i must be killed by factors[i]
        let options: Vec<Vec<usize>> = self
            .factors
            .iter()
            .map(|&m| (0..n).filter(|&h| self.scale(m, h) == 0).collect())
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; k];
        loop {
            let images: Vec<usize> = (0..k).map(|i| options[i][choice[i]]).collect();
            let table = (0..n)
                .map(|a| {
                    self.to_tuple(a)
                        .iter()
                        .zip(&images)
                        .fold(0, |acc, (&c, &h)| self.add(acc, self.scale(c, h)))
                })
                .collect();
            out.push(EndoMap { table });
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }
}

/// A map `A → A` given by its table of images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoMap {
    pub table: Vec<usize>,
}

impl EndoMap {
    pub fn identity(a: &AbGroup) -> Self {
        Self { table: (0..a.order()).collect() }
    }

    pub fn zero(a: &AbGroup) -> Self {
        Self { table: vec![0; a.order()] }
    }

    /// Multiplication by `k`.
    pub fn scalar(a: &AbGroup, k: usize) -> Self {
        Self { table: (0..a.order()).map(|x| a.scale(k, x)).collect() }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.table[a]
    }

    /// `g(a+b) = g(a) + g(b)` for all pairs, on a table of the right size.
    pub fn is_endomorphism_of(&self, a: &AbGroup) -> bool {
        let n = a.order();
        if self.table.len() != n || self.table.iter().any(|&v| v >= n) {
            return false;
        }
        let add = a.addition_table();
        (0..n).all(|x| (0..n).all(|y| self.table[add[x * n + y]] == add[self.table[x] * n + self.table[y]]))
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        self.table.iter().all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.table.len()];
        for (a, &b) in self.table.iter().enumerate() {
            table[b] = a;
        }
        Some(Self { table })
    }

    /// `a ↦ a − f(a)`.
    pub fn one_minus(&self, a: &AbGroup) -> Self {
        Self { table: (0..a.order()).map(|x| a.sub(x, self.table[x])).collect() }
    }
}

/// The data `(Q, A, g, f, θ)` of a central extension.
#[derive(Clone, Debug)]
pub struct ExtensionSpec {
    pub base: LeftQuasigroup,
    pub group: AbGroup,
    pub g: EndoMap,
    /// Must be an automorphism.
    pub f: EndoMap,
    /// `θ(x,y)` at index `x·|Q| + y`.
    pub theta: Vec<usize>,
}

impl ExtensionSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.base.order();
        if !self.g.is_endomorphism_of(&self.group) {
            return Err(Error::SpecViolation("g is not additive".into()));
        }
        if !self.f.is_endomorphism_of(&self.group) {
            return Err(Error::SpecViolation("f is not additive".into()));
        }
        if !self.f.is_bijective() {
            return Err(Error::SpecViolation("f is not bijective".into()));
        }
        if self.theta.len() != n * n || self.theta.iter().any(|&t| t >= self.group.order()) {
            return Err(Error::SpecViolation(format!("theta needs {} entries of A", n * n)));
        }
        if n * self.group.order() > crate::table::MAX_ORDER {
            return Err(Error::CapExceeded { what: "extension order", limit: crate::table::MAX_ORDER });
        }
        Ok(())
    }

    /// The affine case over a one-point base.
    pub fn affine(group: AbGroup, g: EndoMap, f: EndoMap, c: usize) -> Self {
        Self { base: LeftQuasigroup::trivial(), group, g, f, theta: vec![c] }
    }

    /// Parses `{"base", "factors", "g", "f", "c" | "theta"}`. The base may be
    /// `.lq` text or a list of rows and defaults to the one-point algebra.
    /// Group elements are indices or component lists.
    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::MalformedInput(m.to_string());
        let v: Value = serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("json: {e}")))?;
        let base = match v.get("base") {
            None | Some(Value::Null) => LeftQuasigroup::trivial(),
            Some(Value::String(s)) => LeftQuasigroup::parse(s)?,
            Some(other) => {
                let rows: Vec<Vec<usize>> =
                    serde_json::from_value(other.clone()).map_err(|e| Error::MalformedInput(format!("base: {e}")))?;
                LeftQuasigroup::from_rows(&rows)?
            }
        };
        let factors: Vec<usize> = serde_json::from_value(v.get("factors").cloned().ok_or_else(|| bad("missing factors"))?)
            .map_err(|e| Error::MalformedInput(format!("factors: {e}")))?;
        let group = AbGroup::new(factors)?;
        let element = |e: &Value| -> Result<usize> {
            match e {
                Value::Number(num) => num
                    .as_u64()
                    .map(|x| x as usize)
                    .filter(|&x| x < group.order())
                    .ok_or_else(|| bad("group element out of range")),
                Value::Array(parts) if parts.len() == group.factors().len() => {
                    let t = parts
                        .iter()
                        .map(|p| p.as_u64().map(|x| x as usize).ok_or_else(|| bad("bad component")))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(group.from_tuple(&t))
                }
                _ => Err(bad("group element must be an index or a component list")),
            }
        };
        let list = |key: &str| -> Result<Vec<usize>> {
            let arr = v.get(key).and_then(Value::as_array).ok_or_else(|| bad(&format!("missing {key}")))?;
            arr.iter().map(element).collect()
        };
        let g = EndoMap { table: list("g")? };
        let f = EndoMap { table: list("f")? };
        let theta = match (v.get("c"), v.get("theta")) {
            (Some(c), None) => vec![element(c)?; base.order() * base.order()],
            // n² entries flat, or n rows of n entries
            (None, Some(Value::Array(rows))) if rows.len() == base.order() * base.order() => {
                rows.iter().map(element).collect::<Result<Vec<_>>>()?
            }
            (None, Some(Value::Array(rows))) if rows.len() == base.order() => {
                let mut flat = Vec::new();
                for r in rows {
                    let inner = r.as_array().filter(|i| i.len() == base.order()).ok_or_else(|| bad("theta row"))?;
                    for e in inner {
                        flat.push(element(e)?);
                    }
                }
                flat
            }
            _ => return Err(bad("exactly one of c and theta is required")),
        };
        if g.table.len() != group.order() || f.table.len() != group.order() {
            return Err(Error::SpecViolation(format!("g and f need {} entries", group.order())));
        }
        let spec = Self { base, group, g, f, theta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "base": self.base.rows(),
            "factors": self.group.factors(),
            "g": self.g.table,
            "f": self.f.table,
            "theta": self.theta,
        })
        .to_string()
    }

    fn theta_at(&self, x: usize, y: usize) -> usize {
        self.theta[x * self.base.order() + y]
    }
}

/// A constructed extension with the kernel of the projection onto the base.
#[derive(Clone, Debug)]
pub struct Extension {
    pub algebra: LeftQuasigroup,
    /// `ker p₁`; blocks are contiguous runs of length `|A|`.
    pub kernel: Partition,
}

/// Builds `Q × A` in base-major order, `(x,a) ↦ x·|A| + a`.
pub fn central_extension(spec: &ExtensionSpec) -> Result<Extension> {
    spec.validate()?;
    let (n, m) = (spec.base.order(), spec.group.order());
    let a = &spec.group;
    let algebra = LeftQuasigroup::from_fn(n * m, |u, v| {
        let (x, ea) = (u / m, u % m);
        let (y, eb) = (v / m, v % m);
        let fiber = a.add(a.add(spec.g.apply(ea), spec.f.apply(eb)), spec.theta_at(x, y));
        spec.base.mul(x, y) * m + fiber
    })?;
    // left division through the inverse of f
    let f_inv = spec.f.inverse().expect("validated");
    for u in 0..n * m {
        for w in 0..n * m {
            let (x, ea) = (u / m, u % m);
            let (z, c) = (w / m, w % m);
            let y = spec.base.ldiv(x, z);
            let b = f_inv.apply(a.sub(a.sub(c, spec.g.apply(ea)), spec.theta_at(x, y)));
            if algebra.ldiv(u, w) != y * m + b {
                return Err(Error::SpecViolation("left division disagrees with the closed form".into()));
            }
        }
    }
    let kernel = Partition::from_labels(&(0..n * m).map(|u| u / m).collect::<Vec<_>>());
    // p₁ is a morphism exactly when ker p₁ is a congruence with quotient Q
    if !congruence::is_congruence(&algebra, &kernel) {
        return Err(Error::SpecViolation("projection onto the base is not a morphism".into()));
    }
    Ok(Extension { algebra, kernel })
}

/// `Aff(A, g, f, c)`: `a·b = g(a) + f(b) + c`.
pub fn affine(group: &AbGroup, g: &EndoMap, f: &EndoMap, c: usize) -> Result<LeftQuasigroup> {
    Ok(central_extension(&ExtensionSpec::affine(group.clone(), g.clone(), f.clone(), c))?.algebra)
}

/// A predicted flag next to what the constructed table shows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub predicted: bool,
    pub observed: bool,
}

impl Prediction {
    pub fn agrees(self) -> bool {
        self.predicted == self.observed
    }
}

/// Idempotent iff `Q` is idempotent, `g = 1 − f` and `θ(x,x) = 0`.
pub fn idempotence_check(spec: &ExtensionSpec) -> Result<Prediction> {
    let n = spec.base.order();
    let predicted = spec.base.is_idempotent()
        && spec.g == spec.f.one_minus(&spec.group)
        && (0..n).all(|x| spec.theta_at(x, x) == 0);
    let observed = central_extension(spec)?.algebra.is_idempotent();
    Ok(Prediction { predicted, observed })
}

/// Latin iff `Q` is latin and `g` is an automorphism.
pub fn latin_check(spec: &ExtensionSpec) -> Result<Prediction> {
    let predicted = spec.base.is_latin() && spec.g.is_bijective();
    let observed = central_extension(spec)?.algebra.is_latin();
    Ok(Prediction { predicted, observed })
}

/// Cyclic decompositions of every abelian group of order at most 8.
const SMALL_GROUPS: &[&[usize]] =
    &[&[1], &[2], &[3], &[4], &[2, 2], &[5], &[6], &[7], &[8], &[2, 4], &[2, 2, 2]];

/// A random group of order at most `max_order` (up to 8) with random
/// endomorphism `g` and automorphism `f`.
pub fn random_group_data<R: Rng>(rng: &mut R, max_order: usize) -> (AbGroup, EndoMap, EndoMap) {
    let choices: Vec<&&[usize]> = SMALL_GROUPS.iter().filter(|f| f.iter().product::<usize>() <= max_order).collect();
    let group = AbGroup::new(choices.choose(rng).expect("order 1 always fits").to_vec()).unwrap();
    let endos = group.endomorphisms();
    let autos: Vec<&EndoMap> = endos.iter().filter(|e| e.is_bijective()).collect();
    let g = endos.choose(rng).unwrap().clone();
    let f = (*autos.choose(rng).unwrap()).clone();
    (group, g, f)
}

/// A random affine spec with `|A| ≤ max_order`.
pub fn random_affine<R: Rng>(rng: &mut R, max_order: usize) -> ExtensionSpec {
    let (group, g, f) = random_group_data(rng, max_order);
    let c = rng.gen_range(0..group.order());
    ExtensionSpec::affine(group, g, f, c)
}

/// A random extension of `base` with `|A| ≤ max_order`. With `idempotent`,
/// `g = 1 − f` and `θ` vanishes on the diagonal.
pub fn random_extension<R: Rng>(rng: &mut R, base: &LeftQuasigroup, max_order: usize, idempotent: bool) -> ExtensionSpec {
    let (group, mut g, f) = random_group_data(rng, max_order);
    if idempotent {
        g = f.one_minus(&group);
    }
    let n = base.order();
    let theta = (0..n * n)
        .map(|i| if idempotent && i / n == i % n { 0 } else { rng.gen_range(0..group.order()) })
        .collect();
    ExtensionSpec { base: base.clone(), group, g, f, theta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(n: usize) -> AbGroup {
        AbGroup::cyclic(n)
    }

    #[test]
    fn group_arithmetic() {
        let a = AbGroup::new(vec![2, 4]).unwrap();
        assert_eq!(a.order(), 8);
        assert_eq!(a.to_tuple(7), vec![1, 3]);
        assert_eq!(a.add(7, 7), a.from_tuple(&[0, 2]));
        for x in 0..8 {
            assert_eq!(a.add(x, a.neg(x)), 0);
        }
        assert_eq!(z(4).endomorphisms().len(), 4);
        assert_eq!(AbGroup::new(vec![2, 2]).unwrap().endomorphisms().len(), 16);
        // |Hom(Z_2,Z_2)|·|Hom(Z_2,Z_4)|·|Hom(Z_4,Z_2)|·|Hom(Z_4,Z_4)|
        assert_eq!(a.endomorphisms().len(), 2 * 2 * 2 * 4);
        for e in a.endomorphisms() {
            assert!(e.is_endomorphism_of(&a));
        }
        let autos = AbGroup::new(vec![2, 2]).unwrap().endomorphisms().into_iter().filter(EndoMap::is_bijective).count();
        assert_eq!(autos, 6);
    }

    #[test]
    fn affine_examples() {
        let a = z(3);
        let q = affine(&a, &EndoMap::scalar(&a, 2), &EndoMap::scalar(&a, 2), 0).unwrap();
        assert_eq!(q.order(), 3);
        assert_eq!(q.mul(0, 1), 2);
        assert!(q.is_latin());
        // 2x + 2y = 2x − y mod 3
        assert_eq!(q, LeftQuasigroup::from_fn(3, |x, y| (6 + 2 * x - y) % 3).unwrap());

        let p = affine(&z(4), &EndoMap::zero(&z(4)), &EndoMap::identity(&z(4)), 0).unwrap();
        assert_eq!(p, LeftQuasigroup::projection(4));

        let b = z(2);
        let q = affine(&b, &EndoMap::identity(&b), &EndoMap::identity(&b), 1).unwrap();
        assert_eq!(q.mul(0, 0), 1);
    }

    #[test]
    fn extension_examples() {
        let base = LeftQuasigroup::from_fn(3, |x, y| (6 + 2 * x - y) % 3).unwrap();
        let spec = ExtensionSpec {
            base: base.clone(),
            group: z(1),
            g: EndoMap::zero(&z(1)),
            f: EndoMap::identity(&z(1)),
            theta: vec![0; 9],
        };
        assert_eq!(central_extension(&spec).unwrap().algebra, base);

        let b = z(2);
        let spec = ExtensionSpec {
            base: LeftQuasigroup::projection(2),
            group: b.clone(),
            g: EndoMap::zero(&b),
            f: EndoMap::identity(&b),
            theta: vec![0, 1, 1, 0],
        };
        let e = central_extension(&spec).unwrap();
        assert_eq!(e.algebra.order(), 4);
        assert_eq!(e.kernel.to_string(), "0 1 | 2 3");
        // brute-force congruence check of the kernel
        let q = &e.algebra;
        for (u, v) in e.kernel.pairs() {
            for w in 0..4 {
                assert!(e.kernel.related(q.mul(w, u), q.mul(w, v)));
                assert!(e.kernel.related(q.mul(u, w), q.mul(v, w)));
                assert!(e.kernel.related(q.ldiv(w, u), q.ldiv(w, v)));
                assert!(e.kernel.related(q.ldiv(u, w), q.ldiv(v, w)));
            }
        }
    }

    #[test]
    fn remark_examples() {
        let a = z(3);
        let spec = ExtensionSpec::affine(a.clone(), EndoMap::scalar(&a, 2), EndoMap::scalar(&a, 2), 0);
        assert_eq!(idempotence_check(&spec).unwrap(), Prediction { predicted: true, observed: true });
        assert_eq!(latin_check(&spec).unwrap(), Prediction { predicted: true, observed: true });

        let b = z(2);
        let spec = ExtensionSpec::affine(b.clone(), EndoMap::identity(&b), EndoMap::identity(&b), 0);
        assert_eq!(idempotence_check(&spec).unwrap(), Prediction { predicted: false, observed: false });
        assert_eq!(central_extension(&spec).unwrap().algebra.mul(1, 1), 0);

        let spec = ExtensionSpec::affine(a.clone(), EndoMap::zero(&a), EndoMap::identity(&a), 0);
        assert_eq!(latin_check(&spec).unwrap(), Prediction { predicted: false, observed: false });

        let spec = ExtensionSpec {
            base: LeftQuasigroup::projection(2),
            group: a.clone(),
            g: EndoMap::scalar(&a, 2),
            f: EndoMap::scalar(&a, 2),
            theta: vec![1, 0, 0, 0],
        };
        assert!(!idempotence_check(&spec).unwrap().predicted);
        assert!(!latin_check(&spec).unwrap().predicted);
    }

    #[test]
    fn invalid_specs() {
        let a = z(3);
        let bad_g = EndoMap { table: vec![0, 2, 2] };
        let spec = ExtensionSpec::affine(a.clone(), bad_g, EndoMap::identity(&a), 0);
        assert!(matches!(central_extension(&spec), Err(Error::SpecViolation(_))));
        let spec = ExtensionSpec::affine(a.clone(), EndoMap::identity(&a), EndoMap::zero(&a), 0);
        assert!(matches!(central_extension(&spec), Err(Error::SpecViolation(_))));
    }

    #[test]
    fn json_round_trip() {
        let spec = ExtensionSpec::from_json(r#"{"factors":[3],"g":[0,2,1],"f":[0,2,1],"c":0}"#).unwrap();
        assert_eq!(central_extension(&spec).unwrap().algebra.mul(0, 1), 2);
        let again = ExtensionSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(central_extension(&again).unwrap().algebra, central_extension(&spec).unwrap().algebra);
        let tuples = ExtensionSpec::from_json(
            r#"{"base":"2\n0 1\n0 1\n","factors":[2,2],"g":[[0,0],[0,0],[0,0],[0,0]],"f":[0,1,2,3],"theta":[[0,[0,1]],[[1,0],0]]}"#,
        )
        .unwrap();
        assert_eq!(tuples.theta, vec![0, 1, 2, 0]);
        assert!(ExtensionSpec::from_json(r#"{"factors":[3],"g":[0,2,2],"f":[0,1,2],"c":0}"#).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn predictions_match_tables(seed in any::<u64>(), idem in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bases = [
                LeftQuasigroup::trivial(),
                LeftQuasigroup::projection(2),
                LeftQuasigroup::from_fn(3, |x, y| (6 + 2 * x - y) % 3).unwrap(),
            ];
            let base = bases.choose(&mut rng).unwrap();
            let spec = random_extension(&mut rng, base, 6, idem);
            let e = central_extension(&spec).unwrap();
            prop_assert_eq!(e.kernel.num_blocks(), base.order());
            prop_assert!(e.kernel.blocks().iter().all(|b| b.len() == spec.group.order()));
            prop_assert!(idempotence_check(&spec).unwrap().agrees());
            prop_assert!(latin_check(&spec).unwrap().agrees());
            if idem && base.is_idempotent() {
                prop_assert!(e.algebra.is_idempotent());
            }
        }
    }
}
