//! Moore's product of `X ⊂ Y` and `V`, with cyclic labelings of `Y - X`.
//!
//! The cyclic group `A = Z_m` is written additively: the identity is `0`,
//! the involution is `m / 2`, `-a` is `a + m / 2`, and an element of order
//! dividing 3 is a multiple of `m / 3`. A product of group elements equal to
//! the identity becomes a sum divisible by `m`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::system::{Point, PointSet, Triple, TripleStructure, TripleSystem, NO_POINT};

/// A bijection between `Z_m` and the points of `Y - X`, with anchor triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicLabeling {
    m: u32,
    point_of: Vec<Point>,
    residue_of: Vec<u32>,
    y_bullet: Option<u32>,
    anchors: Vec<Triple>,
    generator_condition: bool,
}

impl CyclicLabeling {
    /// `Y - X` labeled in increasing point order, without anchors.
    pub fn ascending(y: &TripleSystem, x: &PointSet) -> Result<Self> {
        let complement: Vec<Point> = (0..y.n_points() as Point).filter(|&p| !x.contains(p)).collect();
        Self::from_points(y, x, complement, None, Vec::new())
    }

    /// Labels `Y - X` by listing its points in residue order.
    pub fn from_points(
        y: &TripleSystem,
        x: &PointSet,
        point_of: Vec<Point>,
        y_bullet: Option<u32>,
        anchors: Vec<Triple>,
    ) -> Result<Self> {
        let n = y.n_points();
        if x.universe() != n {
            return Err(Error::Labeling("X is over a different point set".into()));
        }
        let m = point_of.len();
        if m + x.len() != n {
            return Err(Error::Labeling(format!("{m} labels for {} points of Y - X", n - x.len())));
        }
        let mut residue_of = vec![NO_POINT; n];
        for (a, &p) in point_of.iter().enumerate() {
            if p as usize >= n || x.contains(p) || residue_of[p as usize] != NO_POINT {
                return Err(Error::Labeling(format!("point {p} cannot take label {a}")));
            }
            residue_of[p as usize] = a as u32;
        }
        let m = m as u32;
        Ok(CyclicLabeling {
            m,
            point_of,
            residue_of,
            y_bullet,
            anchors,
            generator_condition: generator_condition_holds(m),
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn point_of(&self, a: u32) -> Point {
        self.point_of[a as usize]
    }

    /// Residue of a point of `Y - X`, or `None` for points of `X`.
    pub fn residue_of(&self, p: Point) -> Option<u32> {
        let r = self.residue_of[p as usize];
        (r != NO_POINT).then_some(r)
    }

    pub fn y_bullet(&self) -> Option<u32> {
        self.y_bullet
    }

    /// The anchor triples, as points of `Y`: first `{0, -0, y•}`, then the
    /// `ω` triples when `3 | m`.
    pub fn anchors(&self) -> &[Triple] {
        &self.anchors
    }

    /// Whether no nontrivial automorphism of `Z_m` moves `y•` into `y• + A₆`.
    /// This depends only on `m`.
    pub fn generator_condition(&self) -> bool {
        self.generator_condition
    }

    pub fn neg(&self, a: u32) -> u32 {
        (a + self.m / 2) % self.m
    }

    /// The subgroup `A₆ = {a : 6a = 0}`.
    pub fn a6(&self) -> Vec<u32> {
        a6(self.m)
    }
}

pub fn a6(m: u32) -> Vec<u32> {
    (0..m).filter(|&a| (6 * a as u64) % m as u64 == 0).collect()
}

/// Units of `Z_m`, which act as its automorphisms by multiplication.
pub fn units(m: u32) -> Vec<u32> {
    (1..m.max(2)).filter(|&u| u.gcd(&m) == 1).collect()
}

/// For every unit `u != 1`, `u y - y` must avoid `A₆` for a generator `y`.
/// As `y` is a unit this means `6 (u - 1) != 0 (mod m)`, independent of `y`.
pub fn generator_condition_holds(m: u32) -> bool {
    units(m)
        .into_iter()
        .filter(|&u| u != 1)
        .all(|u| (6 * (u as u64 - 1)) % m as u64 != 0)
}

/// The triples of `Y` lying inside `Y - X` that contain `p`.
fn triples_inside(y: &TripleSystem, x: &PointSet, p: Point) -> Vec<Triple> {
    y.incidence()[p as usize]
        .iter()
        .map(|&i| y.triples()[i as usize])
        .filter(|t| t.iter().all(|&q| !x.contains(q)))
        .collect()
}

fn others(t: &Triple, p: Point) -> [Point; 2] {
    let mut it = t.iter().copied().filter(|&q| q != p);
    [it.next().unwrap(), it.next().unwrap()]
}

/// Labels `Y - X` with the anchor triples `{0, -0, y•}` and, when `3 | m`,
/// `{ω, -ω, y•}` and `{2ω, -2ω, y•}` if `require_omega`.
///
/// The generator condition is recorded, not enforced. Candidates are tried in
/// a fixed order (triples, then the role of each point, then generators in
/// ascending order), so the result is deterministic.
pub fn label_anchored(y: &TripleSystem, x: &PointSet, require_omega: bool) -> Result<CyclicLabeling> {
    label_search(y, x, require_omega, false)
}

/// Labels `Y - X` satisfying every labeling condition, including the
/// generator condition on `m` and both `ω` triples when `3 | m`.
pub fn label_per_p7(y: &TripleSystem, x: &PointSet) -> Result<CyclicLabeling> {
    label_search(y, x, true, true)
}

fn label_search(y: &TripleSystem, x: &PointSet, require_omega: bool, strict: bool) -> Result<CyclicLabeling> {
    if !y.is_closed(x) {
        return Err(Error::NotClosed);
    }
    let m = (y.n_points() - x.len()) as u32;
    if m % 2 != 0 || m < 4 {
        return Err(Error::Labeling(format!("|Y - X| = {m} must be even and at least 4")));
    }
    if strict && !generator_condition_holds(m) {
        let bad = units(m)
            .into_iter()
            .find(|&u| u != 1 && (6 * (u as u64 - 1)) % m as u64 == 0)
            .unwrap();
        return Err(Error::Labeling(format!(
            "no generator of Z_{m} works: the automorphism a -> {bad}a moves every generator y into y + A6"
        )));
    }
    let half = m / 2;
    let omega = (m % 3 == 0).then_some(m / 3);
    let need_omega = omega.is_some() && require_omega;
    let generators: Vec<u32> = units(m)
        .into_iter()
        .filter(|&g| g != 0 && g != half && Some(g) != omega && Some(g) != omega.map(|w| 2 * w))
        .collect();

    let complement: Vec<Point> = (0..y.n_points() as Point).filter(|&p| !x.contains(p)).collect();
    for &yb in &complement {
        let through = triples_inside(y, x, yb);
        if through.is_empty() || (need_omega && through.len() < 3) {
            continue;
        }
        for (ti, t) in through.iter().enumerate() {
            for [one, minus_one] in [others(t, yb), { let [a, b] = others(t, yb); [b, a] }] {
                for &g in &generators {
                    let mut assigned: Vec<(u32, Point)> = vec![(0, one), (half, minus_one), (g, yb)];
                    let mut anchors = vec![*t];
                    if need_omega {
                        let w = omega.unwrap();
                        let rest: Vec<&Triple> = through.iter().enumerate().filter(|&(j, _)| j != ti).map(|(_, s)| s).collect();
                        let s1 = rest[0];
                        let s2 = rest[1];
                        let [p1, q1] = others(s1, yb);
                        let [p2, q2] = others(s2, yb);
                        assigned.extend([(w, p1), ((w + half) % m, q1), (2 * w, p2), ((2 * w + half) % m, q2)]);
                        anchors.push(*s1);
                        anchors.push(*s2);
                    }
                    let mut residues: Vec<u32> = assigned.iter().map(|&(a, _)| a).collect();
                    residues.sort_unstable();
                    residues.dedup();
                    if residues.len() != assigned.len() {
                        continue;
                    }
                    let mut point_of = vec![NO_POINT; m as usize];
                    let mut used = PointSet::new(y.n_points());
                    for &(a, p) in &assigned {
                        point_of[a as usize] = p;
                        used.insert(p);
                    }
                    let mut free = complement.iter().copied().filter(|&p| !used.contains(p));
                    for slot in point_of.iter_mut() {
                        if *slot == NO_POINT {
                            *slot = free.next().unwrap();
                        }
                    }
                    return CyclicLabeling::from_points(y, x, point_of, Some(g), anchors);
                }
            }
        }
    }
    Err(Error::Labeling(if need_omega {
        "no point of Y - X lies on three triples inside Y - X".into()
    } else {
        "no triple of Y lies inside Y - X".into()
    }))
}

/// Inputs of Moore's construction.
#[derive(Debug, Clone)]
pub struct MooreInput {
    pub y: TripleSystem,
    pub x: PointSet,
    pub v: TripleSystem,
    pub labeling: CyclicLabeling,
}

impl MooreInput {
    pub fn new(y: TripleSystem, x: PointSet, v: TripleSystem, labeling: CyclicLabeling) -> Result<Self> {
        if x.universe() != y.n_points() || !y.is_closed(&x) {
            return Err(Error::NotClosed);
        }
        if labeling.m() as usize != y.n_points() - x.len() {
            return Err(Error::Labeling("labeling does not cover Y - X".into()));
        }
        for a in 0..labeling.m() {
            if x.contains(labeling.point_of(a)) || labeling.residue_of(labeling.point_of(a)) != Some(a) {
                return Err(Error::Labeling("labeling is not a bijection onto Y - X".into()));
            }
        }
        Ok(MooreInput { y, x, v, labeling })
    }

    pub fn layout(&self) -> MooreLayout {
        MooreLayout {
            x_points: self.x.to_vec(),
            m: self.labeling.m(),
            v_size: self.v.n_points() as u32,
        }
    }
}

/// A point of the product, in construction coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoorePoint {
    /// A point of `X`, given by its index in `Y`.
    X(Point),
    /// `(v, a)` with `v` a point of `V` and `a` a residue mod `m`.
    Pair(Point, u32),
}

/// Point numbering of the product: `X` first (in increasing order of `Y`
/// labels), then `(v, a)` at `|X| + v m + a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreLayout {
    pub x_points: Vec<Point>,
    pub m: u32,
    pub v_size: u32,
}

impl MooreLayout {
    pub fn n_points(&self) -> usize {
        self.x_points.len() + (self.v_size * self.m) as usize
    }

    pub fn x_size(&self) -> usize {
        self.x_points.len()
    }

    pub fn pair(&self, v: Point, a: u32) -> Point {
        self.x_points.len() as Point + v * self.m + a
    }

    /// Index of the `X` point with `Y` label `p`.
    pub fn x_index(&self, p: Point) -> Option<Point> {
        self.x_points.binary_search(&p).ok().map(|i| i as Point)
    }

    pub fn decode(&self, p: Point) -> MoorePoint {
        let nx = self.x_points.len() as Point;
        if p < nx {
            MoorePoint::X(self.x_points[p as usize])
        } else {
            let q = p - nx;
            MoorePoint::Pair(q / self.m, q % self.m)
        }
    }

    /// `Y_v = X ∪ (v × A)`.
    pub fn yv(&self, v: Point) -> PointSet {
        let nx = self.x_points.len() as Point;
        PointSet::from_points(self.n_points(), (0..nx).chain((0..self.m).map(|a| self.pair(v, a))))
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.n_points() as Point)
            .map(|p| match self.decode(p) {
                MoorePoint::X(y) => format!("x{y}"),
                MoorePoint::Pair(v, a) => format!("({v},{a})"),
            })
            .collect()
    }
}

/// Moore's product on `X ∪ (V × A)`.
pub fn moore(input: &MooreInput) -> TripleSystem {
    build(input, |a| a)
}

/// The variant in which the cross triples over triples of `V` use `σ(a_i)`
/// instead of `a_i`. `sigma` is a permutation of the residues `0..m` and
/// must fix `y•` and every element of `A₆`.
pub fn moore_variant_sigma(input: &MooreInput, sigma: &Permutation) -> Result<TripleSystem> {
    let lab = &input.labeling;
    if sigma.degree() != lab.m() as usize {
        return Err(Error::DegreeMismatch {
            expected: lab.m() as usize,
            found: sigma.degree(),
        });
    }
    let y_bullet = lab
        .y_bullet()
        .ok_or_else(|| Error::Labeling("the labeling has no distinguished generator".into()))?;
    for a in std::iter::once(y_bullet).chain(lab.a6()) {
        if sigma.apply(a) != a {
            return Err(Error::Construction(format!("sigma moves the fixed residue {a}")));
        }
    }
    Ok(build(input, |a| sigma.apply(a)))
}

fn build(input: &MooreInput, sigma: impl Fn(u32) -> u32) -> TripleSystem {
    let layout = input.layout();
    let lab = &input.labeling;
    let m = lab.m();
    let mut triples: Vec<Triple> = Vec::new();
    // (M1) and (M2)
    for t in input.y.triples() {
        let inside: Vec<Point> = t.iter().copied().filter(|&p| input.x.contains(p)).collect();
        match inside.len() {
            3 => triples.push([
                layout.x_index(t[0]).unwrap(),
                layout.x_index(t[1]).unwrap(),
                layout.x_index(t[2]).unwrap(),
            ]),
            1 => {
                let xi = layout.x_index(inside[0]).unwrap();
                let rs: Vec<u32> = t.iter().filter_map(|&p| lab.residue_of(p)).collect();
                for v in 0..layout.v_size {
                    triples.push([xi, layout.pair(v, rs[0]), layout.pair(v, rs[1])]);
                }
            }
            0 => {
                let rs: Vec<u32> = t.iter().map(|&p| lab.residue_of(p).unwrap()).collect();
                for v in 0..layout.v_size {
                    triples.push([layout.pair(v, rs[0]), layout.pair(v, rs[1]), layout.pair(v, rs[2])]);
                }
            }
            _ => unreachable!("X is closed"),
        }
    }
    // (M3)
    for &[v1, v2, v3] in input.v.triples() {
        for a1 in 0..m {
            for a2 in 0..m {
                let a3 = (2 * m - a1 - a2) % m;
                triples.push([
                    layout.pair(v1, sigma(a1)),
                    layout.pair(v2, sigma(a2)),
                    layout.pair(v3, sigma(a3)),
                ]);
            }
        }
    }
    TripleSystem::new(layout.n_points(), triples).expect("Moore's construction yields an STS")
}

/// Lifts `g ∈ Aut V` to the product: identity on `X`, `(v, a) -> (g(v), a)`.
pub fn lift_automorphism(layout: &MooreLayout, g: &Permutation) -> Permutation {
    let image = (0..layout.n_points() as Point)
        .map(|p| match layout.decode(p) {
            MoorePoint::X(_) => p,
            MoorePoint::Pair(v, a) => layout.pair(g.apply(v), a),
        })
        .collect();
    Permutation::from_images(image).expect("lift is a bijection")
}

/// The isomorphism `Y -> Y_v`: `x -> x`, `y -> (v, label(y))`, as a map
/// from points of `Y` to points of the product.
pub fn yv_embedding(input: &MooreInput, v: Point) -> Vec<Point> {
    let layout = input.layout();
    (0..input.y.n_points() as Point)
        .map(|p| match input.labeling.residue_of(p) {
            None => layout.x_index(p).unwrap(),
            Some(a) => layout.pair(v, a),
        })
        .collect()
}
