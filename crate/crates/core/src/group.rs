//! Permutation groups given by generators, with a deterministic
//! Schreier-Sims stabilizer chain for order and membership.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::system::{Point, TripleStructure};

#[derive(Clone, Debug)]
struct Level {
    base: Point,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Permutation>,
    /// `transversal[p]` maps `base` to `p`, for `p` in the basic orbit.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<Point>,
}

impl Level {
    fn new(n: usize, base: Point) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            transversal: vec![None; n],
            orbit: Vec::new(),
        };
        level.rebuild_orbit(n);
        level
    }

    fn rebuild_orbit(&mut self, n: usize) {
        self.transversal = vec![None; n];
        self.transversal[self.base as usize] = Some(Permutation::identity(n));
        self.orbit = vec![self.base];
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i];
            for g in &self.gens {
                let q = g.apply(p);
                if self.transversal[q as usize].is_none() {
                    let u = self.transversal[p as usize].as_ref().unwrap().then(g);
                    self.transversal[q as usize] = Some(u);
                    self.orbit.push(q);
                }
            }
            i += 1;
        }
    }
}

/// A permutation group on `0..degree` with a complete stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl PermutationGroup {
    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::with_base(degree, &[], generators)
    }

    /// Builds the chain with `base_prefix` as the first base points. Further
    /// base points are appended as needed.
    pub fn with_base(degree: usize, base_prefix: &[Point], generators: Vec<Permutation>) -> Result<Self> {
        let mut group = PermutationGroup::trivial(degree);
        for &b in base_prefix {
            if b as usize >= degree {
                return Err(Error::PointOutOfRange { point: b, n: degree });
            }
            group.levels.push(Level::new(degree, b));
        }
        for g in generators {
            group.add_generator(g)?;
        }
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<Point> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Sizes of the basic orbits; their product is the group order.
    pub fn basic_orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    /// Adds a generator unless the group already contains it. Returns whether
    /// the group grew.
    pub fn add_generator(&mut self, g: Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: g.degree(),
            });
        }
        if self.contains(&g) {
            return Ok(false);
        }
        self.generators.push(g.clone());
        self.ensure_moved(&g);
        self.levels[0].gens.push(g);
        self.levels[0].rebuild_orbit(self.degree);
        self.complete(0);
        Ok(true)
    }

    /// Makes sure some base point is moved by `g` (which is not the identity).
    fn ensure_moved(&mut self, g: &Permutation) {
        if self.levels.iter().any(|l| g.apply(l.base) != l.base) {
            return;
        }
        let p = (0..self.degree as Point).find(|&p| g.apply(p) != p).expect("non-identity");
        self.levels.push(Level::new(self.degree, p));
    }

    /// Sifts `g` starting at `level`. Returns the residue and the level where
    /// sifting stopped (`levels.len()` if it went all the way through).
    fn sift_from(&self, mut g: Permutation, level: usize) -> (Permutation, usize) {
        for (i, l) in self.levels.iter().enumerate().skip(level) {
            let b = g.apply(l.base);
            match &l.transversal[b as usize] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    /// Schreier-Sims from level `top` downwards to 0, assuming levels below
    /// `top` already form a complete chain for their generators.
    fn complete(&mut self, top: usize) {
        let mut i = self.levels.len().saturating_sub(1).max(top);
        loop {
            if let Some((h, j)) = self.find_failing_schreier(i) {
                if j == self.levels.len() {
                    self.ensure_moved(&h);
                }
                let depth = j.min(self.levels.len() - 1);
                for l in i + 1..=depth {
                    self.levels[l].gens.push(h.clone());
                    self.levels[l].rebuild_orbit(self.degree);
                }
                i = depth;
                continue;
            }
            if i == 0 {
                break;
            }
            i -= 1;
        }
    }

    fn find_failing_schreier(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        for &p in &level.orbit {
            let u = level.transversal[p as usize].as_ref().unwrap();
            for s in &level.gens {
                let q = s.apply(p);
                let uq = level.transversal[q as usize].as_ref().unwrap();
                let schreier = u.then(s).then(&uq.inverse());
                if schreier.is_identity() {
                    continue;
                }
                let (h, j) = self.sift_from(schreier, i + 1);
                if j < self.levels.len() || !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.sift_from(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    pub fn orbit(&self, p: Point) -> Vec<Point> {
        orbit_under(self.degree, &self.generators, p)
    }

    /// Orbit partition of `0..degree`, each orbit sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<Point>> {
        orbits_under(self.degree, &self.generators)
    }

    /// Orbit of `base[level]` under the stabilizer of the earlier base points.
    pub fn basic_orbit(&self, level: usize) -> &[Point] {
        &self.levels[level].orbit
    }

    /// Pointwise stabilizer of `points`, as a group with its own chain.
    pub fn pointwise_stabilizer(&self, points: &[Point]) -> PermutationGroup {
        let base = self.base();
        if base.len() >= points.len() && base[..points.len()] == *points {
            let levels = self.levels[points.len()..].to_vec();
            let generators = levels.first().map(|l| l.gens.clone()).unwrap_or_default();
            return PermutationGroup {
                degree: self.degree,
                generators,
                levels,
            };
        }
        let rebased = PermutationGroup::with_base(self.degree, points, self.generators.clone())
            .expect("points in range");
        rebased.pointwise_stabilizer(points)
    }

    /// All elements, if there are at most `limit` of them.
    pub fn elements(&self, limit: usize) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > BigUint::from(limit) {
            return Err(Error::GroupTooLarge {
                order: order.to_string(),
            });
        }
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &p in &level.orbit {
                let u = level.transversal[p as usize].as_ref().unwrap();
                for g in &out {
                    next.push(g.then(u));
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// A uniformly random element, one transversal pick per level.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let p = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.then(level.transversal[p as usize].as_ref().unwrap());
        }
        g
    }

    /// A generating set of random elements, as short as `tries` samples per
    /// size could find. Falls back to the stored generators.
    pub fn small_generating_set<R: Rng + ?Sized>(&self, tries: usize, rng: &mut R) -> Vec<Permutation> {
        if self.is_trivial() {
            return Vec::new();
        }
        let order = self.order();
        for size in 1..self.generators.len() {
            for _ in 0..tries {
                let gens: Vec<Permutation> = (0..size).map(|_| self.random_element(rng)).collect();
                let sub = PermutationGroup::new(self.degree, gens.clone()).expect("same degree");
                if sub.order() == order {
                    return gens;
                }
            }
        }
        self.generators.clone()
    }

    /// Whether every generator preserves the triples of `ts`.
    pub fn preserves<S: TripleStructure>(&self, ts: &S) -> bool {
        self.generators.iter().all(|g| crate::is_automorphism(ts, g))
    }
}

pub(crate) fn orbit_under(n: usize, gens: &[Permutation], p: Point) -> Vec<Point> {
    let mut seen = vec![false; n];
    seen[p as usize] = true;
    let mut queue = VecDeque::from([p]);
    let mut out = vec![p];
    while let Some(q) = queue.pop_front() {
        for g in gens {
            let r = g.apply(q);
            if !std::mem::replace(&mut seen[r as usize], true) {
                out.push(r);
                queue.push_back(r);
            }
        }
    }
    out.sort_unstable();
    out
}

pub(crate) fn orbits_under(n: usize, gens: &[Permutation]) -> Vec<Vec<Point>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for p in 0..n as Point {
        if seen[p as usize] {
            continue;
        }
        let orbit = orbit_under(n, gens, p);
        for &q in &orbit {
            seen[q as usize] = true;
        }
        out.push(orbit);
    }
    out
}
