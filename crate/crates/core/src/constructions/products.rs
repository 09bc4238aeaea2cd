//! Doubling and direct products.

use crate::system::{Point, Triple, TripleStructure, TripleSystem};

/// The doubled system `2Y + 1` on `Y`, a mirror copy `Y_1` and a new point.
///
/// Point `y` of `Y` keeps index `y`, its mirror `y_1` is `|Y| + y`, and the
/// new point `*` is `2|Y|`.
pub fn double(y: &TripleSystem) -> TripleSystem {
    let n = y.n_points() as Point;
    let star = 2 * n;
    let mirror = |p: Point| p + n;
    let mut triples: Vec<Triple> = Vec::with_capacity(4 * y.triples().len() + n as usize);
    for p in 0..n {
        triples.push([star, p, mirror(p)]);
    }
    for &[a, b, c] in y.triples() {
        triples.push([a, b, c]);
        triples.push([mirror(a), mirror(b), c]);
        triples.push([mirror(a), b, mirror(c)]);
        triples.push([a, mirror(b), mirror(c)]);
    }
    TripleSystem::new(2 * n as usize + 1, triples).expect("doubling yields an STS")
}

/// Index of the new point of [`double`] for an input of `n` points.
pub fn double_star(n: usize) -> Point {
    (2 * n) as Point
}

pub fn double_names(n: usize) -> Vec<String> {
    let mut names: Vec<String> = (0..n).map(|p| format!("y{p}")).collect();
    names.extend((0..n).map(|p| format!("y{p}'")));
    names.push("*".into());
    names
}

/// Direct product `A x B`; point `(a, b)` has index `a * |B| + b`.
pub fn direct_product(a: &TripleSystem, b: &TripleSystem) -> TripleSystem {
    let nb = b.n_points() as Point;
    let idx = |x: Point, y: Point| x * nb + y;
    let mut triples: Vec<Triple> = Vec::new();
    for x in 0..a.n_points() as Point {
        for &[b1, b2, b3] in b.triples() {
            triples.push([idx(x, b1), idx(x, b2), idx(x, b3)]);
        }
    }
    for y in 0..nb {
        for &[a1, a2, a3] in a.triples() {
            triples.push([idx(a1, y), idx(a2, y), idx(a3, y)]);
        }
    }
    for &[a1, a2, a3] in a.triples() {
        for &[b1, b2, b3] in b.triples() {
            for [c1, c2, c3] in [
                [b1, b2, b3],
                [b1, b3, b2],
                [b2, b1, b3],
                [b2, b3, b1],
                [b3, b1, b2],
                [b3, b2, b1],
            ] {
                triples.push([idx(a1, c1), idx(a2, c2), idx(a3, c3)]);
            }
        }
    }
    TripleSystem::new(a.n_points() * b.n_points(), triples).expect("direct product yields an STS")
}

pub fn product_names(na: usize, nb: usize) -> Vec<String> {
    (0..na)
        .flat_map(|x| (0..nb).map(move |y| format!("({x},{y})")))
        .collect()
}
