//! Recovering the space and the embedded partial system from `U` alone.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::error::{Error, Result};
use crate::system::{Point, PointSet};

use super::boolean::{mask, JoinSystem};

/// Outcome of reconstructing the space line through `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineReconstruction {
    pub x: Point,
    pub y: Point,
    /// Third point of the line.
    pub z: Point,
    pub samples: usize,
    /// Samples whose 7-set passed the closure test.
    pub valid: usize,
    /// Distinct sampled points `p` whose valid 7-set produced `z`.
    pub votes: usize,
    /// Distinct 7-sets behind those votes.
    pub distinct_sets: usize,
    /// Largest number of distinct points `p` producing the same 7-set.
    pub max_multiplicity: usize,
    /// Whether any two distinct 7-sets meet exactly in `{x, y, z}`.
    pub intersections_ok: bool,
}

impl LineReconstruction {
    pub fn line(&self) -> [Point; 3] {
        crate::system::sorted_triple([self.x, self.y, self.z])
    }
}

/// The 7-set `{p, x, y, x1, y1, z, q}` built from the triples `p x x1`,
/// `p y y1`, `x1 y1 z`, `p q z`, if its points are distinct and it passes the
/// closure test: every pair of it is joined inside it, unless the joining
/// triple contains two of `x`, `y`, `z`.
pub fn seven_set<S: JoinSystem>(u: &S, p: Point, x: Point, y: Point) -> Option<([Point; 7], Point)> {
    let x1 = u.third_point(p, x);
    let y1 = u.third_point(p, y);
    if x1 == y1 || x1 == y || y1 == x {
        return None;
    }
    let z = u.third_point(x1, y1);
    if z == p {
        return None;
    }
    let q = u.third_point(p, z);
    let mut set = [p, x, y, x1, y1, z, q];
    set.sort_unstable();
    if set.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let special = [x, y, z];
    for i in 0..7 {
        for j in i + 1..7 {
            let w = u.third_point(set[i], set[j]);
            let hits = [set[i], set[j], w].iter().filter(|s| special.contains(s)).count();
            if hits < 2 && set.binary_search(&w).is_err() {
                return None;
            }
        }
    }
    Some((set, z))
}

/// Reconstructs the space line through `x` and `y` from `samples` uniformly
/// chosen points `p`, by majority over the `z` of the valid 7-sets. A few
/// points `p` give no valid set; they are skipped.
pub fn reconstruct_line<S: JoinSystem, R: Rng>(u: &S, x: Point, y: Point, samples: usize, rng: &mut R) -> Result<LineReconstruction> {
    let n = u.n_points();
    if x == y || x as usize >= n || y as usize >= n || n < 7 {
        return Err(Error::Reconstruction(format!("need distinct points of a system on at least 7 points, got {x}, {y}")));
    }
    let mut sets: BTreeMap<Point, BTreeMap<[Point; 7], BTreeSet<Point>>> = BTreeMap::new();
    let mut valid = 0;
    for _ in 0..samples {
        let p = loop {
            let p = rng.gen_range(0..n as Point);
            if p != x && p != y {
                break p;
            }
        };
        if let Some((set, z)) = seven_set(u, p, x, y) {
            valid += 1;
            sets.entry(z).or_default().entry(set).or_default().insert(p);
        }
    }
    let Some((&z, winners)) = sets.iter().max_by_key(|(z, s)| (s.values().map(BTreeSet::len).sum::<usize>(), std::cmp::Reverse(**z))) else {
        return Err(Error::Reconstruction(format!(
            "no valid 7-set for ({x}, {y}) in {samples} samples; raise the sample count"
        )));
    };
    let votes: usize = winners.values().map(BTreeSet::len).sum();
    if 2 * votes <= valid {
        return Err(Error::Reconstruction(format!(
            "no majority for the line through ({x}, {y}): {votes} of {valid} valid samples"
        )));
    }
    let line = [x, y, z];
    let distinct: Vec<&[Point; 7]> = winners.keys().collect();
    let intersections_ok = distinct.iter().enumerate().all(|(i, a)| {
        distinct[i + 1..].iter().all(|b| {
            let common: Vec<Point> = a.iter().copied().filter(|p| b.contains(p)).collect();
            common.len() == 3 && common.iter().all(|p| line.contains(p))
        })
    });
    Ok(LineReconstruction {
        x,
        y,
        z,
        samples,
        valid,
        votes,
        distinct_sets: distinct.len(),
        max_multiplicity: winners.values().map(BTreeSet::len).max().unwrap_or(0),
        intersections_ok,
    })
}

/// Points of the embedded partial system, read off `U` with space triples
/// identified by bit patterns (point `i` is the subset `i + 1`). Among the
/// other triples: a point on more than two of them is in; a point on exactly
/// two is in when one of those two has both other points of the first kind.
pub fn recover_vprime<S: JoinSystem>(u: &S) -> PointSet {
    let n = u.n_points();
    let mut x_triples: Vec<Vec<[Point; 2]>> = vec![Vec::new(); n];
    for a in 0..n as Point {
        for b in a + 1..n as Point {
            let c = u.third_point(a, b);
            if c > b && mask(a) ^ mask(b) ^ mask(c) != 0 {
                x_triples[a as usize].push([b, c]);
                x_triples[b as usize].push([a, c]);
                x_triples[c as usize].push([a, b]);
            }
        }
    }
    let rule1 = PointSet::from_points(n, (0..n as Point).filter(|&p| x_triples[p as usize].len() > 2));
    let mut out = rule1.clone();
    for p in 0..n as Point {
        let ts = &x_triples[p as usize];
        if ts.len() == 2 && ts.iter().any(|o| rule1.contains(o[0]) && rule1.contains(o[1])) {
            out.insert(p);
        }
    }
    out
}
