//! Independent oracles shared by the integration tests. Everything here is
//! deliberately naive: brute force over permutations or subsets, fixed-point
//! loops over the triple list.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use sts_core::constructions::{embed_subsystem, label_anchored, standard_sts, CyclicLabeling, MooreInput};
use sts_core::system::sorted_triple;
use sts_core::{Permutation, Point, PointSet, Triple, TripleStructure, TripleSystem};

/// Closure by repeated passes over all triples.
pub fn naive_span(ts: &TripleSystem, seed: &[Point]) -> Vec<Point> {
    let mut inside = vec![false; ts.n_points()];
    for &p in seed {
        inside[p as usize] = true;
    }
    loop {
        let mut changed = false;
        for t in ts.triples() {
            let count = t.iter().filter(|&&p| inside[p as usize]).count();
            if count == 2 {
                for &p in t {
                    inside[p as usize] = true;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..ts.n_points() as Point).filter(|&p| inside[p as usize]).collect()
}

/// Number of permutations mapping the triple set onto itself, by trying all
/// `n!` of them.
pub fn brute_aut_count<S: TripleStructure>(ts: &S) -> u64 {
    let n = ts.n_points();
    let mut set: Vec<Triple> = ts.triples().to_vec();
    set.sort_unstable();
    let mut perm: Vec<Point> = (0..n as Point).collect();
    let mut count = 0;
    loop {
        if ts
            .triples()
            .iter()
            .all(|t| set.binary_search(&sorted_triple(t.map(|p| perm[p as usize]))).is_ok())
        {
            count += 1;
        }
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return count;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// `|GL(d, 2)| = ∏ (2^d - 2^i)`, the automorphism group order of PG(d - 1, 2).
pub fn gl2_order(d: u32) -> u128 {
    (0..d).map(|i| (1u128 << d) - (1u128 << i)).product()
}

pub fn random_relabel<R: Rng>(ts: &TripleSystem, rng: &mut R) -> (TripleSystem, Permutation) {
    let mut images: Vec<Point> = (0..ts.n_points() as Point).collect();
    images.shuffle(rng);
    let g = Permutation::from_images(images).unwrap();
    (ts.relabel(&g), g)
}

/// Whether the set is closed, by scanning all triples.
pub fn naive_closed(ts: &TripleSystem, set: &[Point]) -> bool {
    ts.triples()
        .iter()
        .all(|t| t.iter().filter(|p| set.contains(p)).count() != 2)
}

/// Every 7-subset that is closed and carries 7 triples, by scanning all
/// `C(n, 7)` subsets.
pub fn brute_fano(ts: &TripleSystem) -> Vec<Vec<Point>> {
    let n = ts.n_points();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..7).collect();
    if n < 7 {
        return out;
    }
    loop {
        let set: Vec<Point> = idx.iter().map(|&i| i as Point).collect();
        let closed = set
            .iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| set.contains(&ts.third(a, b))));
        if closed {
            out.push(set);
        }
        // next combination
        let Some(i) = (0..7).rev().find(|&i| idx[i] < n - 7 + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..7 {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A Moore input with `|X| = x`, `|Y| = y`, `|V| = v`, labeled with anchors
/// when the complement allows it.
pub fn moore_instance(x: usize, y: usize, v: usize) -> MooreInput {
    let (ys, xs) = embed_subsystem(x, y).unwrap();
    let labeling = label_anchored(&ys, &xs, false).or_else(|_| CyclicLabeling::ascending(&ys, &xs)).unwrap();
    MooreInput::new(ys, xs, standard_sts(v).unwrap(), labeling).unwrap()
}

pub fn point_set(n: usize, pts: &[Point]) -> PointSet {
    PointSet::from_points(n, pts.iter().copied())
}
