//! The Boolean projective space on the subsets of an `n'`-set, and the STS
//! obtained from it by swapping four triples for every triple of a partial
//! system on the `n'` singletons.
//!
//! Point `i` is the subset with bit pattern `i + 1`. Neither structure stores
//! its triples: joins are computed from bit patterns, plus an override table
//! for the swapped triples.

use fixedbitset::FixedBitSet;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::system::{sorted_triple, validate_triples, PartialTripleSystem, Point, Triple, TripleStructure, TripleSystem, ValidationReport};

/// Default limit on `n'`; the space has `2^n' - 1` points.
pub const DEFAULT_NP_CAP: u32 = 20;

/// Largest `n'` whose triples [`BooleanReplacement::to_triple_system`] will
/// hold in memory (about 1.4 million triples).
pub const MATERIALIZE_MAX: u32 = 12;

/// Anything with a total join, i.e. a Steiner triple system.
pub trait JoinSystem {
    fn n_points(&self) -> usize;
    /// Third point of the triple through distinct points `a`, `b`.
    fn third_point(&self, a: Point, b: Point) -> Point;
}

impl JoinSystem for TripleSystem {
    fn n_points(&self) -> usize {
        TripleStructure::n_points(self)
    }

    fn third_point(&self, a: Point, b: Point) -> Point {
        self.third(a, b)
    }
}

/// Bit pattern of a point.
pub fn mask(p: Point) -> u32 {
    p + 1
}

/// Point with a given nonzero bit pattern.
pub fn point_of_mask(m: u32) -> Point {
    m - 1
}

/// Point `{i}`.
pub fn singleton(i: Point) -> Point {
    point_of_mask(1 << i)
}

/// Point `{i, j}`.
pub fn pair_point(i: Point, j: Point) -> Point {
    point_of_mask((1 << i) | (1 << j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BooleanSpace {
    n_prime: u32,
}

pub fn boolean_space(n_prime: u32) -> Result<BooleanSpace> {
    boolean_space_with_cap(n_prime, DEFAULT_NP_CAP)
}

pub fn boolean_space_with_cap(n_prime: u32, cap: u32) -> Result<BooleanSpace> {
    if n_prime > cap || n_prime > 31 {
        return Err(Error::CapExceeded {
            n_prime: n_prime as usize,
            cap: cap.min(31) as usize,
        });
    }
    if n_prime < 2 {
        return Err(Error::Construction(format!("need n' >= 2, got {n_prime}")));
    }
    Ok(BooleanSpace { n_prime })
}

impl BooleanSpace {
    pub fn n_prime(&self) -> u32 {
        self.n_prime
    }

    pub fn n_points(&self) -> usize {
        (1usize << self.n_prime) - 1
    }

    pub fn n_triples(&self) -> usize {
        let n = self.n_points();
        n * (n - 1) / 6
    }

    pub fn join(&self, a: Point, b: Point) -> Point {
        point_of_mask(mask(a) ^ mask(b))
    }

    /// All triples `{a, b, a ⊕ b}`, sorted, in lexicographic order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        let top = 1u32 << self.n_prime;
        (1..top).flat_map(move |a| {
            (a + 1..top).filter_map(move |b| {
                let c = a ^ b;
                (c > b).then(|| [a - 1, b - 1, c - 1])
            })
        })
    }

    /// The permutation of subsets induced by a permutation of the ground set.
    pub fn lift_permutation(&self, g: &Permutation) -> Result<Permutation> {
        if g.degree() != self.n_prime as usize {
            return Err(Error::DegreeMismatch {
                expected: self.n_prime as usize,
                found: g.degree(),
            });
        }
        let images = (0..self.n_points() as Point)
            .map(|p| {
                let m = mask(p);
                let image = (0..self.n_prime).filter(|&i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << g.apply(i));
                point_of_mask(image)
            })
            .collect();
        Permutation::from_images(images)
    }
}

fn pair_key(a: Point, b: Point) -> u64 {
    (a.min(b) as u64) << 32 | a.max(b) as u64
}

/// The STS `U`: the Boolean space with, for each triple `{a, b, c}` of `V'`,
///
/// ```text
/// ab ac bc,  a b ab,  a c ac,  b c bc      replaced by
/// a b c,     a ab ac, b ab bc, c ac bc
/// ```
#[derive(Debug, Clone)]
pub struct BooleanReplacement {
    space: BooleanSpace,
    vprime: PartialTripleSystem,
    overrides: FxHashMap<u64, Point>,
    touched: FixedBitSet,
    removed: FxHashSet<Triple>,
    added: Vec<Triple>,
}

pub fn replace_triples(space: &BooleanSpace, vprime: &PartialTripleSystem) -> Result<BooleanReplacement> {
    if vprime.n_points() != space.n_prime as usize {
        return Err(Error::Construction(format!(
            "partial system has {} points but the space has n' = {}",
            vprime.n_points(),
            space.n_prime
        )));
    }
    let report = crate::system::validate_pstss(vprime.n_points(), vprime.triples());
    if !report.is_ok() {
        return Err(Error::NotPartial(report));
    }
    let mut r = BooleanReplacement {
        space: *space,
        vprime: vprime.clone(),
        overrides: FxHashMap::default(),
        touched: FixedBitSet::with_capacity(space.n_points()),
        removed: FxHashSet::default(),
        added: Vec::with_capacity(4 * vprime.triples().len()),
    };
    for &[i, j, k] in vprime.triples() {
        let (a, b, c) = (singleton(i), singleton(j), singleton(k));
        let (ab, ac, bc) = (pair_point(i, j), pair_point(i, k), pair_point(j, k));
        r.removed.extend([[ab, ac, bc], [a, b, ab], [a, c, ac], [b, c, bc]].map(sorted_triple));
        for t in [[a, b, c], [a, ab, ac], [b, ab, bc], [c, ac, bc]] {
            for (x, y, z) in [(t[0], t[1], t[2]), (t[0], t[2], t[1]), (t[1], t[2], t[0])] {
                r.overrides.insert(pair_key(x, y), z);
                r.touched.insert(x as usize);
                r.touched.insert(y as usize);
            }
            r.added.push(sorted_triple(t));
        }
    }
    r.added.sort_unstable();
    Ok(r)
}

impl JoinSystem for BooleanReplacement {
    fn n_points(&self) -> usize {
        self.space.n_points()
    }

    fn third_point(&self, a: Point, b: Point) -> Point {
        if self.touched.contains(a as usize) && self.touched.contains(b as usize) {
            if let Some(&c) = self.overrides.get(&pair_key(a, b)) {
                return c;
            }
        }
        self.space.join(a, b)
    }
}

impl BooleanReplacement {
    pub fn space(&self) -> &BooleanSpace {
        &self.space
    }

    pub fn vprime(&self) -> &PartialTripleSystem {
        &self.vprime
    }

    /// Triples of the space that were swapped out.
    pub fn removed(&self) -> &FxHashSet<Triple> {
        &self.removed
    }

    /// Triples swapped in, sorted.
    pub fn added(&self) -> &[Triple] {
        &self.added
    }

    /// Every triple of `U`: the surviving space triples, then the added ones.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.space
            .triples()
            .filter(move |t| {
                !(t.iter().filter(|&&p| self.touched.contains(p as usize)).count() >= 2 && self.removed.contains(t))
            })
            .chain(self.added.iter().copied())
    }

    /// Full pair scan over the streamed triples.
    pub fn validate(&self) -> ValidationReport {
        validate_triples(self.space.n_points(), self.triples(), true)
    }

    pub fn to_triple_system(&self) -> Result<TripleSystem> {
        if self.space.n_prime > MATERIALIZE_MAX {
            return Err(Error::CapExceeded {
                n_prime: self.space.n_prime as usize,
                cap: MATERIALIZE_MAX as usize,
            });
        }
        let mut triples: Vec<Triple> = self.triples().collect();
        triples.sort_unstable();
        TripleSystem::new(self.space.n_points(), triples)
    }

    /// For each point, the number of triples of `U` through it that are not
    /// triples of the space, found by scanning every pair through [`JoinSystem`].
    pub fn non_space_degrees(&self) -> Vec<u32> {
        non_space_degrees(self)
    }
}

/// Per-point count of triples of `u` whose bit patterns do not cancel.
pub fn non_space_degrees<S: JoinSystem>(u: &S) -> Vec<u32> {
    let n = u.n_points();
    let mut deg = vec![0u32; n];
    for a in 0..n as Point {
        for b in a + 1..n as Point {
            let c = u.third_point(a, b);
            if c > b && mask(a) ^ mask(b) ^ mask(c) != 0 {
                deg[a as usize] += 1;
                deg[b as usize] += 1;
                deg[c as usize] += 1;
            }
        }
    }
    deg
}
