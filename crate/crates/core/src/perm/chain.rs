//! Deterministic Schreier–Sims.

use super::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    /// `transversal[b]` maps the base point to `b`, for `b` in the basic orbit.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Permutation::identity(degree));
        Self { base, gens: Vec::new(), transversal, orbit: vec![base] }
    }

    /// Extends the basic orbit under the current generators.
    fn grow_orbit(&mut self) {
        let mut i = 0;
        // Re-scan the whole orbit: new generators may move old points somewhere new.
        while i < self.orbit.len() {
            let b = self.orbit[i];
            let u = self.transversal[b].clone().expect("orbit point has a transversal");
            for g in &self.gens {
                let c = g.apply(b);
                if self.transversal[c].is_none() {
                    self.transversal[c] = Some(g.compose(&u));
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        Self::with_base_prefix(degree, gens, &[])
    }

    /// Builds a chain whose base starts with `prefix`.
    pub fn with_base_prefix(degree: usize, gens: &[Permutation], prefix: &[usize]) -> Self {
        let mut chain = Self { degree, levels: Vec::new() };
        for &b in prefix {
            chain.levels.push(Level::new(degree, b));
        }
        let nontrivial: Vec<Permutation> =
            gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if nontrivial.is_empty() {
            return chain;
        }
        if chain.levels.is_empty() {
            let b = nontrivial[0].first_moved_point().expect("nontrivial");
            chain.levels.push(Level::new(degree, b));
        }
        chain.levels[0].gens = nontrivial;
        chain.levels[0].grow_orbit();
        chain.complete();
        chain
    }

    /// Sifts `g` starting at `from`; returns the residue and the level where sifting stopped.
    fn strip(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let b = h.apply(level.base);
            match &level.transversal[b] {
                Some(u) => h = u.inverse().compose(&h),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    fn complete(&mut self) {
        'restart: loop {
            for i in 0..self.levels.len() {
                let orbit = self.levels[i].orbit.clone();
                let gens = self.levels[i].gens.clone();
                for &b in &orbit {
                    let ub = self.levels[i].transversal[b].clone().unwrap();
                    for s in &gens {
                        let sb = s.apply(b);
                        let usb = self.levels[i].transversal[sb].clone().unwrap();
                        let schreier = usb.inverse().compose(s).compose(&ub);
                        let (residue, j) = self.strip(&schreier, i + 1);
                        if residue.is_identity() {
                            continue;
                        }
                        if j == self.levels.len() {
                            let nb = residue.first_moved_point().expect("nontrivial residue");
                            self.levels.push(Level::new(self.degree, nb));
                        }
                        for l in (i + 1)..=j {
                            self.levels[l].gens.push(residue.clone());
                            self.levels[l].grow_orbit();
                        }
                        continue 'restart;
                    }
                }
            }
            break;
        }
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (h, _) = self.strip(g, 0);
        h.is_identity()
    }

    /// Group order, or `None` on overflow.
    pub fn order(&self) -> Option<usize> {
        self.levels.iter().try_fold(1usize, |acc, l| acc.checked_mul(l.orbit.len()))
    }

    /// Strong generators of the stabilizer of the first `k` base points.
    pub fn stabilizer_generators(&self, k: usize) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for level in self.levels.iter().skip(k) {
            for g in &level.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }
}
