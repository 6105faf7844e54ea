//! Deterministic Schreier–Sims stabilizer chains.
//!
//! Base points are taken from an optional caller prefix and then, whenever a
//! new level is needed, the smallest point moved by the element that forced
//! it. Schreier generators are processed in a fixed order, so the chain (and
//! everything derived from it) is reproducible.

use rand::Rng;

use crate::perm::Permutation;

/// One level of the chain: the fundamental orbit of `base_point` under the
/// strong generators that fix all earlier base points.
#[derive(Clone, Debug)]
pub struct Level {
    pub base_point: usize,
    pub generators: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[x] = Some((u, u^-1))` with `base_point^u == x`.
    transversal: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(degree: usize, base_point: usize, generators: Vec<Permutation>) -> Self {
        let mut level = Self {
            base_point,
            generators,
            orbit: Vec::new(),
            transversal: vec![None; degree],
        };
        level.rebuild_orbit();
        level
    }

    fn rebuild_orbit(&mut self) {
        let n = self.transversal.len();
        self.transversal = vec![None; n];
        let id = Permutation::identity(n);
        self.transversal[self.base_point] = Some((id.clone(), id));
        self.orbit = vec![self.base_point];
        let mut head = 0;
        while head < self.orbit.len() {
            let x = self.orbit[head];
            head += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if self.transversal[y].is_none() {
                    let u = self.transversal[x].as_ref().unwrap().0.then(g);
                    let inv = u.inverse();
                    self.transversal[y] = Some((u, inv));
                    self.orbit.push(y);
                }
            }
        }
    }

    pub fn orbit(&self) -> &[usize] {
        &self.orbit
    }

    /// Transversal element mapping the base point to `point`, if in the orbit.
    pub fn transversal(&self, point: usize) -> Option<&Permutation> {
        self.transversal[point].as_ref().map(|(u, _)| u)
    }

    fn transversal_inverse(&self, point: usize) -> Option<&Permutation> {
        self.transversal[point].as_ref().map(|(_, v)| v)
    }
}

#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Builds a chain for the group generated by `generators`, using
    /// `base_prefix` as the first base points.
    pub fn new(degree: usize, generators: &[Permutation], base_prefix: &[usize]) -> Self {
        let mut strong: Vec<Permutation> = Vec::new();
        for g in generators {
            debug_assert_eq!(g.degree(), degree);
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut base: Vec<usize> = base_prefix.to_vec();
        for s in &strong {
            if base.iter().all(|&b| s.fixes(b)) {
                base.push(s.smallest_moved_point().unwrap());
            }
        }
        let mut levels: Vec<Level> = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let gens = strong
                    .iter()
                    .filter(|s| base[..i].iter().all(|&p| s.fixes(p)))
                    .cloned()
                    .collect();
                Level::new(degree, b, gens)
            })
            .collect();

        let mut chain = Self {
            degree,
            levels: Vec::new(),
        };
        let mut i = levels.len();
        'outer: while i > 0 {
            let lvl = i - 1;
            let orbit = levels[lvl].orbit.clone();
            let gens = levels[lvl].generators.clone();
            for &beta in &orbit {
                for x in &gens {
                    let gamma = x.apply(beta);
                    let h = levels[lvl]
                        .transversal(beta)
                        .unwrap()
                        .then(x)
                        .then(levels[lvl].transversal_inverse(gamma).unwrap());
                    if h.is_identity() {
                        continue;
                    }
                    let (residue, stop) = sift_levels(&levels[lvl + 1..], h);
                    let stop = stop + lvl + 1;
                    if stop < levels.len() || !residue.is_identity() {
                        if stop == levels.len() {
                            let b = residue.smallest_moved_point().unwrap();
                            levels.push(Level::new(degree, b, Vec::new()));
                        }
                        for level in &mut levels[lvl + 1..=stop] {
                            level.generators.push(residue.clone());
                            level.rebuild_orbit();
                        }
                        i = stop + 1;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
        chain.levels = levels;
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Product of the fundamental orbit lengths (saturating).
    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.orbit.len() as u128))
    }

    /// Strong generators fixing the first `depth` base points.
    pub fn stabilizer_generators(&self, depth: usize) -> Vec<Permutation> {
        self.levels
            .get(depth)
            .map(|l| l.generators.clone())
            .unwrap_or_default()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.stabilizer_generators(0)
    }

    /// Sifts `g` through the chain, returning the residue and the level at
    /// which sifting stopped (`levels().len()` if it went all the way).
    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        sift_levels(&self.levels, g.clone())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, stop) = self.sift(g);
        stop == self.levels.len() && residue.is_identity()
    }

    /// Element whose transversal coordinates are `indices[l]` (an index into
    /// level `l`'s orbit); the deepest level is applied first.
    pub fn element_at(&self, indices: &[usize]) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for (level, &idx) in self.levels.iter().zip(indices).rev() {
            g = g.then(level.transversal(level.orbit[idx]).unwrap());
        }
        g
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let indices: Vec<usize> = self
            .levels
            .iter()
            .map(|l| rng.random_range(0..l.orbit.len()))
            .collect();
        self.element_at(&indices)
    }

    pub fn elements(&self) -> ElementIter<'_> {
        ElementIter::new(self)
    }
}

fn sift_levels(levels: &[Level], mut g: Permutation) -> (Permutation, usize) {
    for (i, level) in levels.iter().enumerate() {
        let beta = g.apply(level.base_point);
        match level.transversal_inverse(beta) {
            Some(inv) => g = g.then(inv),
            None => return (g, i),
        }
    }
    (g, levels.len())
}

/// Streams every group element exactly once, in transversal-product order
/// (level 0 coordinate varies fastest).
pub struct ElementIter<'a> {
    chain: &'a StabilizerChain,
    indices: Vec<usize>,
    /// `partial[l]` = product of the chosen transversal elements of levels
    /// `l..`, deepest first; `partial[len]` is the identity.
    partial: Vec<Permutation>,
    done: bool,
}

impl<'a> ElementIter<'a> {
    fn new(chain: &'a StabilizerChain) -> Self {
        let k = chain.levels.len();
        let id = Permutation::identity(chain.degree);
        let mut partial = vec![id; k + 1];
        for l in (0..k).rev() {
            let lvl = &chain.levels[l];
            partial[l] = partial[l + 1].then(lvl.transversal(lvl.orbit[0]).unwrap());
        }
        Self {
            chain,
            indices: vec![0; k],
            partial,
            done: false,
        }
    }
}

impl Iterator for ElementIter<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let current = self.partial[0].clone();
        let levels = &self.chain.levels;
        let mut l = 0;
        loop {
            if l == levels.len() {
                self.done = true;
                break;
            }
            self.indices[l] += 1;
            if self.indices[l] < levels[l].orbit.len() {
                break;
            }
            self.indices[l] = 0;
            l += 1;
        }
        if !self.done {
            for j in (0..=l).rev() {
                let lvl = &levels[j];
                let u = lvl.transversal(lvl.orbit[self.indices[j]]).unwrap();
                self.partial[j] = self.partial[j + 1].then(u);
            }
        }
        Some(current)
    }
}
