//! Triple systems, partial triple systems, point sets and their validation.
//!
//! Points are dense indices `0..n`. Every triple is stored sorted, and the
//! triple list of a system is kept in lexicographic order, so two systems on
//! the same labels compare equal exactly when they have the same triples.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type Point = u32;
pub type Triple = [Point; 3];

pub(crate) const NO_POINT: Point = Point::MAX;

/// Sorts the three points of a triple.
pub fn sorted_triple(mut t: Triple) -> Triple {
    t.sort_unstable();
    t
}

/// Whether `n` is the order of some Steiner triple system.
///
/// Orders 0 and 1 count as admissible; they carry no triples.
pub fn is_admissible(n: usize) -> bool {
    n <= 1 || n % 6 == 1 || n % 6 == 3
}

/// Index of the unordered pair `{a, b}` (with `a != b`) in a triangular table.
#[inline]
pub(crate) fn pair_index(a: Point, b: Point) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let hi = hi as usize;
    hi * (hi - 1) / 2 + lo as usize
}

// ---------------------------------------------------------------------------
// Point sets

/// Bit-packed set of points over a fixed universe `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    bits: FixedBitSet,
}

impl PointSet {
    pub fn new(n: usize) -> Self {
        PointSet {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        PointSet { bits }
    }

    pub fn from_points<I: IntoIterator<Item = Point>>(n: usize, points: I) -> Self {
        let mut s = PointSet::new(n);
        for p in points {
            s.insert(p);
        }
        s
    }

    /// Size of the ambient point universe.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, p: Point) -> bool {
        let was = self.bits.contains(p as usize);
        self.bits.insert(p as usize);
        !was
    }

    pub fn remove(&mut self, p: Point) {
        self.bits.set(p as usize, false);
    }

    pub fn contains(&self, p: Point) -> bool {
        self.bits.contains(p as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.bits.ones().map(|p| p as Point)
    }

    pub fn to_vec(&self) -> Vec<Point> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.bits.union_with(&other.bits);
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.universe()
            .cmp(&other.universe())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    InadmissibleOrder { n: usize },
    PointOutOfRange { triple: usize, point: Point },
    RepeatedPoint { triple: usize },
    PairCoveredTwice { pair: (Point, Point), triple: usize },
    PairUncovered { pair: (Point, Point) },
    WrongTripleCount { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InadmissibleOrder { n } => write!(f, "order {n} is not 1 or 3 mod 6"),
            Violation::PointOutOfRange { triple, point } => {
                write!(f, "triple {triple} uses out-of-range point {point}")
            }
            Violation::RepeatedPoint { triple } => write!(f, "triple {triple} repeats a point"),
            Violation::PairCoveredTwice { pair, triple } => {
                write!(f, "pair ({},{}) covered twice (again by triple {triple})", pair.0, pair.1)
            }
            Violation::PairUncovered { pair } => write!(f, "pair ({},{}) not covered", pair.0, pair.1),
            Violation::WrongTripleCount { expected, found } => {
                write!(f, "expected {expected} triples, found {found}")
            }
        }
    }
}

/// Outcome of a validation pass: empty means the axioms hold.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
    omitted: usize,
}

impl ValidationReport {
    const CAP: usize = 64;

    fn push(&mut self, v: Violation) {
        if self.violations.len() < Self::CAP {
            self.violations.push(v);
        } else {
            self.omitted += 1;
        }
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    /// Violations found but not listed.
    pub fn omitted(&self) -> usize {
        self.omitted
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        if self.omitted > 0 {
            write!(f, "; and {} more", self.omitted)?;
        }
        Ok(())
    }
}

/// Streaming validator over a triangular pair bitset, so it scales to systems
/// whose triple list is never held in memory at once.
pub fn validate_triples<I>(n: usize, triples: I, complete: bool) -> ValidationReport
where
    I: IntoIterator<Item = Triple>,
{
    let mut report = ValidationReport::default();
    if complete && !is_admissible(n) {
        report.push(Violation::InadmissibleOrder { n });
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let mut covered = FixedBitSet::with_capacity(pairs);
    let mut count = 0usize;
    for (i, t) in triples.into_iter().enumerate() {
        count += 1;
        if let Some(&p) = t.iter().find(|&&p| p as usize >= n) {
            report.push(Violation::PointOutOfRange { triple: i, point: p });
            continue;
        }
        if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
            report.push(Violation::RepeatedPoint { triple: i });
            continue;
        }
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let idx = pair_index(a, b);
            if covered.put(idx) {
                report.push(Violation::PairCoveredTwice {
                    pair: (a.min(b), a.max(b)),
                    triple: i,
                });
            }
        }
    }
    if complete {
        let expected = pairs / 3;
        if count != expected {
            report.push(Violation::WrongTripleCount { expected, found: count });
        }
        for idx in covered.zeroes() {
            // invert the triangular index
            let mut hi = ((((8 * idx + 1) as f64).sqrt() + 1.0) / 2.0) as usize;
            while hi * (hi - 1) / 2 > idx {
                hi -= 1;
            }
            while (hi + 1) * hi / 2 <= idx {
                hi += 1;
            }
            let lo = idx - hi * (hi - 1) / 2;
            report.push(Violation::PairUncovered {
                pair: (lo as Point, hi as Point),
            });
        }
    }
    report
}

/// Checks the Steiner triple system axioms on raw triples.
pub fn validate_sts(n: usize, triples: &[Triple]) -> ValidationReport {
    validate_triples(n, triples.iter().copied(), true)
}

/// Checks that no pair is covered more than once.
pub fn validate_pstss(n: usize, triples: &[Triple]) -> ValidationReport {
    validate_triples(n, triples.iter().copied(), false)
}

// ---------------------------------------------------------------------------
// Systems

/// Common read access to complete and partial triple systems.
pub trait TripleStructure {
    fn n_points(&self) -> usize;
    fn triples(&self) -> &[Triple];
    /// Third point of the triple through `a` and `b`, if any.
    fn join(&self, a: Point, b: Point) -> Option<Point>;
    /// Whether every pair is covered.
    fn is_steiner(&self) -> bool;
    /// Indices of the triples through each point.
    fn incidence(&self) -> &[Vec<u32>];

    fn contains_triple(&self, t: Triple) -> bool {
        self.join(t[0], t[1]) == Some(t[2])
    }
}

#[derive(Default)]
struct Caches {
    join: OnceLock<Vec<Point>>,
    incidence: OnceLock<Vec<Vec<u32>>>,
}

impl Clone for Caches {
    fn clone(&self) -> Self {
        Caches::default()
    }
}

/// Triples covering every pair of points at most once.
#[derive(Clone)]
pub struct PartialTripleSystem {
    n: usize,
    triples: Vec<Triple>,
    caches: Caches,
}

impl PartialTripleSystem {
    pub fn new(n: usize, triples: Vec<Triple>) -> Result<Self> {
        let triples = normalize(triples);
        let report = validate_pstss(n, &triples);
        if !report.is_ok() {
            return Err(Error::NotPartial(report));
        }
        Ok(Self::from_normalized(n, triples))
    }

    pub fn empty(n: usize) -> Self {
        Self::from_normalized(n, Vec::new())
    }

    fn from_normalized(n: usize, triples: Vec<Triple>) -> Self {
        PartialTripleSystem {
            n,
            triples,
            caches: Caches::default(),
        }
    }

    pub fn degree(&self, p: Point) -> usize {
        self.incidence()[p as usize].len()
    }

    /// Image of the system under a relabeling.
    pub fn relabel(&self, perm: &crate::perm::Permutation) -> Self {
        let triples = self
            .triples
            .iter()
            .map(|t| [perm.apply(t[0]), perm.apply(t[1]), perm.apply(t[2])])
            .collect();
        Self::from_normalized(self.n, normalize(triples))
    }

    /// The triples lying inside `set`, relabeled onto `0..set.len()` in
    /// increasing point order. Also returns the old label of each new point.
    pub fn restrict(&self, set: &PointSet) -> (PartialTripleSystem, Vec<Point>) {
        let (triples, old) = restrict_triples(self.n, &self.triples, set);
        (Self::from_normalized(old.len(), triples), old)
    }
}

impl PartialEq for PartialTripleSystem {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.triples == other.triples
    }
}

impl Eq for PartialTripleSystem {}

impl fmt::Debug for PartialTripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialTripleSystem")
            .field("n", &self.n)
            .field("triples", &self.triples)
            .finish()
    }
}

impl TripleStructure for PartialTripleSystem {
    fn n_points(&self) -> usize {
        self.n
    }
    fn triples(&self) -> &[Triple] {
        &self.triples
    }
    fn join(&self, a: Point, b: Point) -> Option<Point> {
        join_lookup(&self.caches, self.n, &self.triples, a, b)
    }
    fn is_steiner(&self) -> bool {
        self.triples.len() * 6 == self.n * self.n.saturating_sub(1)
    }
    fn incidence(&self) -> &[Vec<u32>] {
        self.caches
            .incidence
            .get_or_init(|| build_incidence(self.n, &self.triples))
    }
}

/// A Steiner triple system: every pair of points lies in exactly one triple.
#[derive(Clone, PartialEq, Eq)]
pub struct TripleSystem {
    inner: PartialTripleSystem,
}

impl TripleSystem {
    pub fn new(n: usize, triples: Vec<Triple>) -> Result<Self> {
        let triples = normalize(triples);
        let report = validate_sts(n, &triples);
        if !report.is_ok() {
            return Err(Error::NotSteiner(report));
        }
        Ok(TripleSystem {
            inner: PartialTripleSystem::from_normalized(n, triples),
        })
    }

    /// Re-checks the axioms (they hold by construction).
    pub fn validate(&self) -> ValidationReport {
        validate_sts(self.inner.n, &self.inner.triples)
    }

    pub fn as_partial(&self) -> &PartialTripleSystem {
        &self.inner
    }

    pub fn into_partial(self) -> PartialTripleSystem {
        self.inner
    }

    /// Third point of the triple through two distinct points.
    pub fn third(&self, a: Point, b: Point) -> Point {
        self.join(a, b).expect("distinct points of a Steiner triple system")
    }

    pub fn relabel(&self, perm: &crate::perm::Permutation) -> Self {
        TripleSystem {
            inner: self.inner.relabel(perm),
        }
    }

    /// Induced subsystem on a closed set, relabeled onto `0..set.len()`.
    pub fn restrict(&self, set: &PointSet) -> Result<(TripleSystem, Vec<Point>)> {
        if !self.is_closed(set) {
            return Err(Error::NotClosed);
        }
        let (triples, old) = restrict_triples(self.inner.n, &self.inner.triples, set);
        Ok((TripleSystem::new(old.len(), triples)?, old))
    }

    /// Smallest closed superset of `seed`.
    pub fn span(&self, seed: &PointSet) -> PointSet {
        self.span_bounded(seed, usize::MAX)
            .expect("unbounded span always completes")
    }

    pub fn span_of(&self, seed: &[Point]) -> PointSet {
        self.span(&PointSet::from_points(self.n_points(), seed.iter().copied()))
    }

    /// Like [`span`](Self::span) but gives up once the closure exceeds `limit` points.
    pub fn span_bounded(&self, seed: &PointSet, limit: usize) -> Option<PointSet> {
        let mut set = seed.clone();
        let mut members: Vec<Point> = seed.to_vec();
        if members.len() > limit {
            return None;
        }
        let mut queue: VecDeque<usize> = (0..members.len()).collect();
        // every pair (members[i], members[j]) with j < i is joined when i is dequeued
        while let Some(i) = queue.pop_front() {
            let p = members[i];
            for j in 0..i {
                let r = self.third(p, members[j]);
                if set.insert(r) {
                    members.push(r);
                    if members.len() > limit {
                        return None;
                    }
                    queue.push_back(members.len() - 1);
                }
            }
        }
        Some(set)
    }

    pub fn is_closed(&self, set: &PointSet) -> bool {
        let pts = set.to_vec();
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                if !set.contains(self.third(a, b)) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for TripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TripleSystem")
            .field("n", &self.inner.n)
            .field("triples", &self.inner.triples)
            .finish()
    }
}

impl TripleStructure for TripleSystem {
    fn n_points(&self) -> usize {
        self.inner.n
    }
    fn triples(&self) -> &[Triple] {
        &self.inner.triples
    }
    fn join(&self, a: Point, b: Point) -> Option<Point> {
        self.inner.join(a, b)
    }
    fn is_steiner(&self) -> bool {
        true
    }
    fn incidence(&self) -> &[Vec<u32>] {
        self.inner.incidence()
    }
}

/// Whether `perm` maps every triple of `ts` onto a triple of `ts`.
pub fn is_automorphism<S: TripleStructure + ?Sized>(ts: &S, perm: &crate::perm::Permutation) -> bool {
    perm.degree() == ts.n_points()
        && ts
            .triples()
            .iter()
            .all(|t| ts.contains_triple([perm.apply(t[0]), perm.apply(t[1]), perm.apply(t[2])]))
}

fn normalize(mut triples: Vec<Triple>) -> Vec<Triple> {
    for t in &mut triples {
        t.sort_unstable();
    }
    triples.sort_unstable();
    triples
}

fn join_lookup(caches: &Caches, n: usize, triples: &[Triple], a: Point, b: Point) -> Option<Point> {
    if a == b || a as usize >= n || b as usize >= n {
        return None;
    }
    let table = caches.join.get_or_init(|| {
        let mut table = vec![NO_POINT; n * n];
        for t in triples {
            let [x, y, z] = *t;
            for (p, q, r) in [(x, y, z), (x, z, y), (y, z, x)] {
                table[p as usize * n + q as usize] = r;
                table[q as usize * n + p as usize] = r;
            }
        }
        table
    });
    let r = table[a as usize * n + b as usize];
    (r != NO_POINT).then_some(r)
}

fn build_incidence(n: usize, triples: &[Triple]) -> Vec<Vec<u32>> {
    let mut inc = vec![Vec::new(); n];
    for (i, t) in triples.iter().enumerate() {
        for &p in t {
            inc[p as usize].push(i as u32);
        }
    }
    inc
}

fn restrict_triples(n: usize, triples: &[Triple], set: &PointSet) -> (Vec<Triple>, Vec<Point>) {
    let old = set.to_vec();
    let mut new_of = vec![NO_POINT; n];
    for (i, &p) in old.iter().enumerate() {
        new_of[p as usize] = i as Point;
    }
    let inside = triples
        .iter()
        .filter(|t| t.iter().all(|&p| set.contains(p)))
        .map(|t| [new_of[t[0] as usize], new_of[t[1] as usize], new_of[t[2] as usize]])
        .collect();
    (normalize(inside), old)
}
