//! Fano subsystems of a Moore product and their classification.
//!
//! Every Fano subsystem of `U = X ∪ (V × A)` with `|A|` even is of one of
//! three kinds: it lies in some `Y_v = X ∪ (v × A)`; it is a twisted copy
//! `V_{S,f} = {(v, f(v)) : v ∈ S}` of a Fano subsystem `S` of `V` with
//! `f: S -> A₆` summing to zero on triples; or it consists of one point `x` of
//! `X` and the six points `(v_i, ±a_i)` over a triple `v_1 v_2 v_3` of `V`.

use std::collections::BTreeSet;

use crate::constructions::moore::{a6, MooreInput, MoorePoint};
use crate::error::{Error, Result};
use crate::system::{Point, PointSet, TripleStructure, TripleSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FanoClassification {
    /// All points lie in `Y_v`. If they all lie in `X`, `v` is 0.
    InYv { v: Point },
    /// `{(v, f(v)) : v ∈ S}`; `s` lists the points of `S` in increasing
    /// order and `f` their values.
    VSf { s: Vec<Point>, f: Vec<u32> },
    /// The point `x` (a label of `Y`) and `(v_i, ±a_i)` with `a_1 + a_2 + a_3 = 0`.
    Type31 { x: Point, v: [Point; 3], a: [u32; 3] },
}

impl FanoClassification {
    pub fn kind(&self) -> &'static str {
        match self {
            FanoClassification::InYv { .. } => "in-yv",
            FanoClassification::VSf { .. } => "vsf",
            FanoClassification::Type31 { .. } => "type31",
        }
    }
}

/// All Fano subsystems, each as a sorted 7-point set, in increasing order.
///
/// Every Fano plane is spanned by two of its triples meeting in a point, so
/// closing each such pair and keeping the 7-point closures is exhaustive.
pub fn enumerate_fano(ts: &TripleSystem) -> Vec<PointSet> {
    let n = ts.n_points();
    let mut found: BTreeSet<PointSet> = BTreeSet::new();
    for p in 0..n {
        let through = &ts.incidence()[p];
        for (i, &s) in through.iter().enumerate() {
            let ts1 = ts.triples()[s as usize];
            for &t in &through[i + 1..] {
                let ts2 = ts.triples()[t as usize];
                let seed = PointSet::from_points(n, ts1.iter().chain(ts2.iter()).copied());
                if let Some(span) = ts.span_bounded(&seed, 7) {
                    if span.len() == 7 {
                        found.insert(span);
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

fn unclassifiable(points: &PointSet, reason: impl Into<String>) -> Error {
    Error::Unclassifiable {
        points: points.to_vec(),
        reason: reason.into(),
    }
}

/// Classifies a Fano subsystem of `moore(input)`.
pub fn classify_fano(u: &TripleSystem, input: &MooreInput, fano: &PointSet) -> Result<FanoClassification> {
    let lab = &input.labeling;
    let m = lab.m();
    if m % 2 != 0 {
        return Err(unclassifiable(fano, format!("|A| = {m} is odd")));
    }
    if fano.len() != 7 || !u.is_closed(fano) {
        return Err(unclassifiable(fano, "not a 7-point subsystem"));
    }
    let layout = input.layout();
    let mut xs: Vec<Point> = Vec::new();
    let mut pairs: Vec<(Point, u32)> = Vec::new();
    for p in fano.iter() {
        match layout.decode(p) {
            MoorePoint::X(y) => xs.push(y),
            MoorePoint::Pair(v, a) => pairs.push((v, a)),
        }
    }
    let mut vs: Vec<Point> = pairs.iter().map(|&(v, _)| v).collect();
    vs.sort_unstable();
    vs.dedup();

    if vs.len() <= 1 {
        return Ok(FanoClassification::InYv {
            v: vs.first().copied().unwrap_or(0),
        });
    }

    let sums_to_zero = |a: &[u32]| a.iter().map(|&x| x as u64).sum::<u64>() % m as u64 == 0;
    let a6 = a6(m);

    if xs.is_empty() && vs.len() == 7 {
        let f: Vec<u32> = {
            let mut sorted = pairs.clone();
            sorted.sort_unstable();
            sorted.iter().map(|&(_, a)| a).collect()
        };
        for t in u.triples().iter().filter(|t| t.iter().all(|&p| fano.contains(p))) {
            let decoded: Vec<(Point, u32)> = t
                .iter()
                .map(|&p| match layout.decode(p) {
                    MoorePoint::Pair(v, a) => (v, a),
                    MoorePoint::X(_) => unreachable!(),
                })
                .collect();
            if !input.v.contains_triple([decoded[0].0, decoded[1].0, decoded[2].0]) {
                return Err(unclassifiable(fano, "first coordinates of a triple are not a triple of V"));
            }
            if !sums_to_zero(&[decoded[0].1, decoded[1].1, decoded[2].1]) {
                return Err(unclassifiable(fano, "second coordinates of a triple do not sum to 0"));
            }
        }
        if let Some(bad) = f.iter().find(|a| !a6.contains(a)) {
            return Err(unclassifiable(fano, format!("value {bad} is not in A6")));
        }
        return Ok(FanoClassification::VSf { s: vs, f });
    }

    if xs.len() == 1 && vs.len() == 3 {
        let x = xs[0];
        let mut a = [0u32; 3];
        for (i, &v) in vs.iter().enumerate() {
            let here: Vec<u32> = pairs.iter().filter(|&&(w, _)| w == v).map(|&(_, a)| a).collect();
            if here.len() != 2 || here[1] != lab.neg(here[0]) {
                return Err(unclassifiable(fano, format!("points over {v} are not a pair a, -a")));
            }
            if !input.y.contains_triple([lab.point_of(here[0]), lab.point_of(here[1]), x]) {
                return Err(unclassifiable(fano, format!("labels over {v} do not form a triple with x")));
            }
            a[i] = here[0];
        }
        let v = [vs[0], vs[1], vs[2]];
        if !input.v.contains_triple(v) {
            return Err(unclassifiable(fano, "first coordinates are not a triple of V"));
        }
        // pick signs so that a_1 + a_2 + a_3 = 0
        let choices = [(false, false), (true, false), (false, true), (true, true)];
        let Some(&(s2, s3)) = choices.iter().find(|&&(s2, s3)| {
            let a2 = if s2 { lab.neg(a[1]) } else { a[1] };
            let a3 = if s3 { lab.neg(a[2]) } else { a[2] };
            sums_to_zero(&[a[0], a2, a3])
        }) else {
            return Err(unclassifiable(fano, "no choice of signs sums to 0"));
        };
        if s2 {
            a[1] = lab.neg(a[1]);
        }
        if s3 {
            a[2] = lab.neg(a[2]);
        }
        for [e1, e2, e3] in [[false; 3], [true, true, false], [true, false, true], [false, true, true]] {
            let b = [
                if e1 { lab.neg(a[0]) } else { a[0] },
                if e2 { lab.neg(a[1]) } else { a[1] },
                if e3 { lab.neg(a[2]) } else { a[2] },
            ];
            let t = [layout.pair(v[0], b[0]), layout.pair(v[1], b[1]), layout.pair(v[2], b[2])];
            if !u.contains_triple(t) {
                return Err(unclassifiable(fano, "a sign triple is missing"));
            }
        }
        return Ok(FanoClassification::Type31 { x, v, a });
    }

    Err(unclassifiable(
        fano,
        format!("{} points of X over {} points of V", xs.len(), vs.len()),
    ))
}

/// `Y_v = X ∪ (v × A)` as a point set of the product.
pub fn yv_subsystem(input: &MooreInput, v: Point) -> PointSet {
    input.layout().yv(v)
}

/// All nonempty subsystems of `ts`.
pub fn all_subsystems(ts: &TripleSystem) -> Vec<PointSet> {
    let n = ts.n_points();
    let mut found: BTreeSet<PointSet> = (0..n as Point).map(|p| PointSet::from_points(n, [p])).collect();
    let mut frontier: Vec<PointSet> = found.iter().cloned().collect();
    while let Some(s) = frontier.pop() {
        for p in 0..n as Point {
            if s.contains(p) {
                continue;
            }
            let mut seed = s.clone();
            seed.insert(p);
            let span = ts.span(&seed);
            if found.insert(span.clone()) {
                frontier.push(span);
            }
        }
    }
    found.into_iter().collect()
}

/// A twisted copy `V_{S,f}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedCopy {
    /// Points of the subsystem `S` of `V`, increasing.
    pub s: Vec<Point>,
    /// `f(s[i])`.
    pub f: Vec<u32>,
}

impl TwistedCopy {
    pub fn points(&self, input: &MooreInput) -> PointSet {
        let layout = input.layout();
        PointSet::from_points(
            layout.n_points(),
            self.s.iter().zip(&self.f).map(|(&v, &a)| layout.pair(v, a)),
        )
    }
}

/// Every `(S, f)` with `S` a nonempty subsystem of `V` and `f: S -> A₆`
/// summing to zero on each triple of `S`.
pub fn all_vsf(input: &MooreInput) -> Vec<TwistedCopy> {
    let m = input.labeling.m();
    let values = a6(m);
    let mut out = Vec::new();
    for s in all_subsystems(&input.v) {
        let pts = s.to_vec();
        let mut pos = vec![usize::MAX; input.v.n_points()];
        for (i, &p) in pts.iter().enumerate() {
            pos[p as usize] = i;
        }
        let triples: Vec<[usize; 3]> = input
            .v
            .triples()
            .iter()
            .filter(|t| t.iter().all(|&p| s.contains(p)))
            .map(|t| t.map(|p| pos[p as usize]))
            .collect();
        let mut f = vec![0u32; pts.len()];
        extend_f(0, &mut f, &values, &triples, m, &mut |f| {
            out.push(TwistedCopy {
                s: pts.clone(),
                f: f.to_vec(),
            })
        });
    }
    out
}

fn extend_f(i: usize, f: &mut Vec<u32>, values: &[u32], triples: &[[usize; 3]], m: u32, emit: &mut dyn FnMut(&[u32])) {
    if i == f.len() {
        emit(f);
        return;
    }
    for &a in values {
        f[i] = a;
        let ok = triples
            .iter()
            .filter(|t| t.iter().all(|&j| j <= i) && t.contains(&i))
            .all(|t| (f[t[0]] + f[t[1]] + f[t[2]]) % m == 0);
        if ok {
            extend_f(i + 1, f, values, triples, m, emit);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recognition {
    IsYv(Point),
    /// `W = {(v, f(v)) : v ∈ V}`; `f` is indexed by the points of `V`.
    IsVVf(Vec<u32>),
    Other(String),
}

/// Checks whether a closed set of the product has the form `Y_v` (when it
/// has `|Y|` points) or `V_{V,f}` (when it has `|V|` points and meets every
/// `Y_v` in at most one point).
pub fn recognize_subsystem(u: &TripleSystem, input: &MooreInput, w: &PointSet) -> Recognition {
    if !u.is_closed(w) {
        return Recognition::Other("not closed".into());
    }
    let layout = input.layout();
    let nv = input.v.n_points() as Point;
    if w.len() == input.y.n_points() {
        if let Some(v) = (0..nv).find(|&v| layout.yv(v) == *w) {
            return Recognition::IsYv(v);
        }
    }
    if w.len() == input.v.n_points() {
        let meets_once = (0..nv).all(|v| layout.yv(v).intersection_len(w) <= 1);
        if meets_once {
            let mut f = vec![u32::MAX; nv as usize];
            for p in w.iter() {
                match layout.decode(p) {
                    MoorePoint::Pair(v, a) if f[v as usize] == u32::MAX => f[v as usize] = a,
                    _ => return Recognition::Other("meets every Y_v at most once but is not a section over V".into()),
                }
            }
            let values = a6(input.labeling.m());
            let m = input.labeling.m();
            let is_vf = f.iter().all(|a| values.contains(a))
                && input
                    .v
                    .triples()
                    .iter()
                    .all(|t| t.iter().map(|&v| f[v as usize]).sum::<u32>() % m == 0);
            if is_vf {
                return Recognition::IsVVf(f);
            }
            return Recognition::Other("a section over V that is not of the form V_{V,f}".into());
        }
    }
    Recognition::Other(format!("{} points, neither a Y_v nor a twisted copy of V", w.len()))
}
