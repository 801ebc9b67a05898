//! A sound shortcut for finding Mal'tsev witnesses in large closures.
//!
//! Both basic operations are left translations, `x·y = L_x(y)` and
//! `x\y = L_x⁻¹(y)`. Term vectors are therefore the orbits of the three
//! projections under the group generated by the coordinatewise translations
//! `L_u`, where `u` runs over term vectors. Every element built here is a
//! product of such translations, so any witness it produces is a genuine
//! term operation. The stabilizer chain is randomized and may describe only
//! a subgroup, which can hide a witness but never invent one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::table::LeftQuasigroup;

/// Consecutive uneventful samples before a chain or generator set is
/// considered complete.
const QUIET: usize = 24;

/// Coordinatewise permutation of `Q`. Entry `c·n + x` is the image of `x`
/// at coordinate `c`. The first `m` coordinates are the restricted ones
/// the search works with, the rest are the `n³` cells of a full table.
type Elem = Vec<u8>;

struct Space {
    n: usize,
    width: usize,
}

impl Space {
    fn identity(&self) -> Elem {
        (0..self.width * self.n).map(|i| (i % self.n) as u8).collect()
    }

    /// Applies `b` then `a`.
    fn compose(&self, a: &Elem, b: &Elem) -> Elem {
        let n = self.n;
        b.iter().enumerate().map(|(i, &y)| a[i / n * n + y as usize]).collect()
    }

    fn inverse(&self, a: &Elem) -> Elem {
        let n = self.n;
        let mut out = vec![0; a.len()];
        for (i, &y) in a.iter().enumerate() {
            out[i / n * n + y as usize] = (i % n) as u8;
        }
        out
    }

    fn act(&self, g: &Elem, v: &[u8]) -> Vec<u8> {
        v.iter().enumerate().map(|(c, &x)| g[c * self.n + x as usize]).collect()
    }

    fn translation(&self, q: &LeftQuasigroup, u: &[u8]) -> Elem {
        let n = self.n;
        (0..self.width * n).map(|i| q.mul(u[i / n] as usize, i % n) as u8).collect()
    }
}

struct Level {
    coord: usize,
    point: u8,
    /// `trans[y]` maps the base point to `y`, paired with its inverse.
    trans: Vec<Option<(Elem, Elem)>>,
}

/// Stabilizer chain on the restricted coordinates. Every restricted point
/// is a base point, with `(c, p[c])` first, so sifting is exact on those
/// coordinates and mapping `p` onto a target is a greedy walk.
struct Chain {
    levels: Vec<Level>,
    strong: Vec<(Elem, usize)>,
    m: usize,
}

impl Chain {
    fn new(space: &Space, m: usize, p: &[u8]) -> Self {
        let n = space.n;
        let mut base: Vec<(usize, u8)> = (0..m).map(|c| (c, p[c])).collect();
        for (c, &pc) in p.iter().enumerate().take(m) {
            base.extend((0..n as u8).filter(|&x| x != pc).map(|x| (c, x)));
        }
        let levels = base
            .into_iter()
            .map(|(coord, point)| {
                let mut trans = vec![None; n];
                let id = space.identity();
                trans[point as usize] = Some((id.clone(), id));
                Level { coord, point, trans }
            })
            .collect();
        Self { levels, strong: Vec::new(), m }
    }

    /// Residue and level where `g` falls out, or `None` if it sifts through.
    fn sift(&self, space: &Space, mut g: Elem) -> Option<(Elem, usize)> {
        let n = space.n;
        for (k, level) in self.levels.iter().enumerate() {
            let y = g[level.coord * n + level.point as usize] as usize;
            match &level.trans[y] {
                None => return Some((g, k)),
                Some((_, inv)) => {
                    if y != level.point as usize {
                        g = space.compose(inv, &g);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, space: &Space, h: Elem, k: usize) {
        self.strong.push((h, k));
        let n = space.n;
        for j in (0..=k).rev() {
            let (coord, _) = (self.levels[j].coord, self.levels[j].point);
            loop {
                let mut grown = false;
                for y in 0..n {
                    let Some((u, _)) = self.levels[j].trans[y].clone() else { continue };
                    for (s, lvl) in &self.strong {
                        if *lvl < j {
                            continue;
                        }
                        let z = s[coord * n + y] as usize;
                        if self.levels[j].trans[z].is_none() {
                            let su = space.compose(s, &u);
                            let inv = space.inverse(&su);
                            self.levels[j].trans[z] = Some((su, inv));
                            grown = true;
                        }
                    }
                }
                if !grown {
                    break;
                }
            }
        }
    }

    fn random(&self, space: &Space, rng: &mut ChaCha8Rng) -> Elem {
        let mut g = space.identity();
        for level in &self.levels {
            let reps: Vec<&Elem> = level.trans.iter().flatten().map(|(u, _)| u).collect();
            if reps.len() > 1 {
                g = space.compose(&g, reps[rng.gen_range(0..reps.len())]);
            }
        }
        g
    }

    /// Adds `g` if it sifts out; reports whether the chain grew.
    fn absorb(&mut self, space: &Space, g: Elem) -> bool {
        match self.sift(space, g) {
            Some((h, k)) => {
                self.insert(space, h, k);
                true
            }
            None => false,
        }
    }

    /// Randomized completion against a generating list.
    fn complete(&mut self, space: &Space, gens: &[Elem], rng: &mut ChaCha8Rng) {
        for g in gens {
            self.absorb(space, g.clone());
        }
        let mut quiet = 0;
        while quiet < QUIET {
            let r = self.random(space, rng);
            let s = &gens[rng.gen_range(0..gens.len())];
            if self.absorb(space, space.compose(&r, s)) {
                quiet = 0;
            } else {
                quiet += 1;
            }
        }
    }

    /// An element sending `p` to `target` on the restricted coordinates.
    fn map_to(&self, space: &Space, target: &[u8]) -> Option<Elem> {
        let n = space.n;
        let mut h = space.identity();
        for (c, level) in self.levels[..self.m].iter().enumerate() {
            let hinv_target = (0..n).find(|&y| h[c * n + y] == target[c])?;
            let (u, _) = level.trans[hinv_target].as_ref()?;
            h = space.compose(&h, u);
        }
        Some(h)
    }
}

/// Looks for a Mal'tsev term through the translation group. Returns the
/// full `n³` table of a witness.
pub(super) fn search(q: &LeftQuasigroup, coords: &[[usize; 3]], target: &[u8], seed: u64) -> Option<Vec<u8>> {
    let n = q.order();
    let m = coords.len();
    let space = Space { n, width: m + n * n * n };
    let projections: Vec<Vec<u8>> = (0..3)
        .map(|p| {
            let restricted = coords.iter().map(|c| c[p] as u8);
            let full = (0..n * n * n).map(|i| [i / (n * n), i / n % n, i % n][p] as u8);
            restricted.chain(full).collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens: Vec<Elem> = projections.iter().map(|p| space.translation(q, p)).collect();

    let witness = |chain: &Chain, p: &[u8]| {
        let g = chain.map_to(&space, target)?;
        Some(space.act(&g, p)[m..].to_vec())
    };

    let mut chain = Chain::new(&space, m, &projections[0]);
    chain.complete(&space, &gens, &mut rng);
    let mut quiet = 0;
    while quiet < QUIET {
        if let Some(w) = witness(&chain, &projections[0]) {
            return Some(w);
        }
        let g = chain.random(&space, &mut rng);
        let u = space.act(&g, &projections[rng.gen_range(0..3)]);
        let t = space.translation(q, &u);
        if chain.sift(&space, t.clone()).is_some() {
            gens.push(t);
            chain.complete(&space, &gens, &mut rng);
            quiet = 0;
        } else {
            quiet += 1;
        }
    }
    for p in &projections[1..] {
        let mut other = Chain::new(&space, m, p);
        other.complete(&space, &gens, &mut rng);
        if let Some(w) = witness(&other, p) {
            return Some(w);
        }
    }
    None
}
