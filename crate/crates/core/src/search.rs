//! Exact automorphism groups, canonical forms and isomorphism tests by
//! individualization and refinement.
//!
//! A search node is an ordered partition of the points that is stable under
//! refinement by triple counts: a point's signature is the multiset of cell
//! pairs of the other two points over all triples through it. Each node
//! carries a trace hash of the refinement, which depends only on the
//! isomorphism type of (system, individualized sequence), so nodes with
//! different traces can never be matched by an isomorphism.
//!
//! For Steiner systems up to [`PAIR_INVARIANT_MAX_POINTS`] points, each newly
//! individualized point `v` also splits cells by the cycle type of the pair
//! `{v, p}`: the two matchings `x -> join(v, x)` and `x -> join(p, x)` on the
//! remaining points form disjoint even cycles whose lengths are invariant.

use std::cmp::Ordering;
use std::hash::Hasher;

use fixedbitset::FixedBitSet;
use rustc_hash::FxHasher;

use crate::error::{Error, Result};
use crate::group::PermutationGroup;
use crate::perm::Permutation;
use crate::system::{is_automorphism, Point, Triple, TripleStructure};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const PAIR_INVARIANT_MAX_POINTS: usize = 128;

/// Whether to use the pair cycle-type invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairInvariant {
    /// On for Steiner systems with at most [`PAIR_INVARIANT_MAX_POINTS`] points.
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub pair_invariant: PairInvariant,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            pair_invariant: PairInvariant::Auto,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(node_budget: u64) -> Self {
        SearchConfig {
            node_budget,
            ..Self::default()
        }
    }
}

/// Sorted triple list of the canonical relabeling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n_points: usize,
    pub triples: Vec<Triple>,
}

#[derive(Debug, Clone)]
pub struct CanonicalLabeling {
    /// Sends each point to its canonical label.
    pub labeling: Permutation,
    pub form: CanonicalForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonIsomorphism {
    PointCount { a: usize, b: usize },
    TripleCount { a: usize, b: usize },
    CanonicalForms { a: CanonicalForm, b: CanonicalForm },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoCertificate {
    /// A verified map sending the triples of the first system onto the second.
    Isomorphic(Permutation),
    NotIsomorphic(NonIsomorphism),
}

impl IsoCertificate {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoCertificate::Isomorphic(_))
    }
}

pub fn automorphism_group<S: TripleStructure>(ts: &S) -> Result<PermutationGroup> {
    automorphism_group_with(ts, &SearchConfig::default())
}

pub fn automorphism_group_with<S: TripleStructure>(ts: &S, config: &SearchConfig) -> Result<PermutationGroup> {
    Search::new(ts, config).automorphisms()
}

pub fn canonical_form<S: TripleStructure>(ts: &S) -> Result<CanonicalForm> {
    Ok(canonical_labeling(ts, &SearchConfig::default())?.form)
}

pub fn canonical_labeling<S: TripleStructure>(ts: &S, config: &SearchConfig) -> Result<CanonicalLabeling> {
    let mut search = Search::new(ts, config);
    let group = search.automorphisms()?;
    search.canonical(&group)
}

pub fn are_isomorphic<A: TripleStructure, B: TripleStructure>(a: &A, b: &B) -> Result<IsoCertificate> {
    are_isomorphic_with(a, b, &SearchConfig::default())
}

pub fn are_isomorphic_with<A: TripleStructure, B: TripleStructure>(
    a: &A,
    b: &B,
    config: &SearchConfig,
) -> Result<IsoCertificate> {
    let (na, nb) = (a.n_points(), b.n_points());
    if na != nb {
        return Ok(IsoCertificate::NotIsomorphic(NonIsomorphism::PointCount { a: na, b: nb }));
    }
    let (ta, tb) = (a.triples().len(), b.triples().len());
    if ta != tb {
        return Ok(IsoCertificate::NotIsomorphic(NonIsomorphism::TripleCount { a: ta, b: tb }));
    }
    let ca = canonical_labeling(a, config)?;
    let cb = canonical_labeling(b, config)?;
    if ca.form != cb.form {
        return Ok(IsoCertificate::NotIsomorphic(NonIsomorphism::CanonicalForms {
            a: ca.form,
            b: cb.form,
        }));
    }
    let map = ca.labeling.then(&cb.labeling.inverse());
    let maps_onto = a
        .triples()
        .iter()
        .all(|t| b.contains_triple([map.apply(t[0]), map.apply(t[1]), map.apply(t[2])]));
    assert!(maps_onto, "equal canonical forms must give an isomorphism");
    Ok(IsoCertificate::Isomorphic(map))
}

// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Node {
    cells: Vec<Vec<Point>>,
    cell_of: Vec<u32>,
    trace: u64,
}

impl Node {
    fn is_discrete(&self) -> bool {
        self.cells.len() == self.cell_of.len()
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> usize {
        let mut best: Option<(usize, usize)> = None;
        for (i, c) in self.cells.iter().enumerate() {
            if c.len() > 1 && best.map_or(true, |(len, _)| c.len() < len) {
                best = Some((c.len(), i));
            }
        }
        best.expect("node is not discrete").1
    }

    fn reindex(&mut self) {
        for (i, c) in self.cells.iter().enumerate() {
            for &p in c {
                self.cell_of[p as usize] = i as u32;
            }
        }
    }

    /// The leaf labeling: point to cell index.
    fn labeling(&self) -> Vec<Point> {
        self.cell_of.clone()
    }
}

struct Best {
    traces: Vec<u64>,
    form: Vec<Triple>,
    labeling: Vec<Point>,
}

struct Search<'a, S: TripleStructure> {
    ts: &'a S,
    n: usize,
    budget: u64,
    nodes: u64,
    pair_invariant: bool,
    first_traces: Vec<u64>,
    first_leaf: Vec<Point>,
    best: Option<Best>,
}

impl<'a, S: TripleStructure> Search<'a, S> {
    fn new(ts: &'a S, config: &SearchConfig) -> Self {
        let n = ts.n_points();
        let pair_invariant = match config.pair_invariant {
            PairInvariant::Auto => ts.is_steiner() && n <= PAIR_INVARIANT_MAX_POINTS,
            PairInvariant::On => ts.is_steiner(),
            PairInvariant::Off => false,
        };
        Search {
            ts,
            n,
            budget: config.node_budget,
            nodes: 0,
            pair_invariant,
            first_traces: Vec::new(),
            first_leaf: Vec::new(),
            best: None,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { limit: self.budget });
        }
        Ok(())
    }

    fn root(&self) -> Node {
        let mut node = Node {
            cells: if self.n == 0 {
                Vec::new()
            } else {
                vec![(0..self.n as Point).collect()]
            },
            cell_of: vec![0; self.n],
            trace: 0,
        };
        let mut h = FxHasher::default();
        h.write_usize(self.n);
        h.write_usize(self.ts.triples().len());
        self.refine(&mut node, &mut h);
        node.trace = h.finish();
        node
    }

    fn child(&self, parent: &Node, target: usize, v: Point) -> Node {
        let mut node = parent.clone();
        let rest: Vec<Point> = node.cells[target].iter().copied().filter(|&p| p != v).collect();
        node.cells[target] = vec![v];
        node.cells.insert(target + 1, rest);
        node.reindex();
        let mut h = FxHasher::default();
        h.write_usize(target);
        h.write_usize(parent.cells[target].len());
        if self.pair_invariant {
            self.split_by_pairs(&mut node, v, &mut h);
        }
        self.refine(&mut node, &mut h);
        node.trace = h.finish();
        node
    }

    /// Splits every cell by a key function, keeping subcells in key order.
    fn split_cells<F>(&self, node: &mut Node, h: &mut FxHasher, mut key: F) -> bool
    where
        F: FnMut(Point, &Node) -> u64,
    {
        let mut changed = false;
        let mut cells = Vec::with_capacity(node.cells.len());
        for (ci, cell) in node.cells.iter().enumerate() {
            if cell.len() == 1 {
                cells.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(u64, Point)> = cell.iter().map(|&p| (key(p, node), p)).collect();
            keyed.sort_unstable();
            let mut start = 0;
            let before = cells.len();
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    h.write_usize(ci);
                    h.write_u64(keyed[start].0);
                    h.write_usize(i - start);
                    cells.push(keyed[start..i].iter().map(|&(_, p)| p).collect());
                    start = i;
                }
            }
            if cells.len() - before > 1 {
                changed = true;
            }
        }
        if changed {
            node.cells = cells;
            node.reindex();
        }
        changed
    }

    fn refine(&self, node: &mut Node, h: &mut FxHasher) {
        let inc = self.ts.incidence();
        let triples = self.ts.triples();
        let mut scratch: Vec<u64> = Vec::new();
        loop {
            let changed = self.split_cells(node, h, |p, node| {
                scratch.clear();
                for &ti in &inc[p as usize] {
                    let t = triples[ti as usize];
                    let mut others = t.iter().filter(|&&q| q != p).map(|&q| node.cell_of[q as usize] as u64);
                    let (a, b) = (others.next().unwrap(), others.next().unwrap());
                    scratch.push(a.min(b) << 32 | a.max(b));
                }
                scratch.sort_unstable();
                let mut sh = FxHasher::default();
                sh.write_usize(scratch.len());
                for &s in &scratch {
                    sh.write_u64(s);
                }
                sh.finish()
            });
            if !changed {
                break;
            }
        }
        h.write_usize(node.cells.len());
    }

    fn split_by_pairs(&self, node: &mut Node, v: Point, h: &mut FxHasher) {
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut lengths = Vec::new();
        self.split_cells(node, h, |p, _| {
            cycle_type(self.ts, v, p, &mut seen, &mut lengths)
        });
    }

    fn leaf_map(&self, leaf: &[Point]) -> Permutation {
        // first-leaf point with label i goes to this leaf's point with label i
        let mut point_of = vec![0; self.n];
        for (p, &l) in leaf.iter().enumerate() {
            point_of[l as usize] = p as Point;
        }
        let image = self.first_leaf.iter().map(|&l| point_of[l as usize]).collect();
        Permutation::from_images(image).expect("leaf labelings are bijections")
    }

    fn automorphisms(&mut self) -> Result<PermutationGroup> {
        self.tick()?;
        let mut node = self.root();
        let mut path_nodes = Vec::new();
        let mut path = Vec::new();
        self.first_traces = vec![node.trace];
        while !node.is_discrete() {
            self.tick()?;
            let target = node.target_cell();
            let v = node.cells[target][0];
            let child = self.child(&node, target, v);
            self.first_traces.push(child.trace);
            path.push(v);
            path_nodes.push(node);
            node = child;
        }
        self.first_leaf = node.labeling();

        let mut group = PermutationGroup::with_base(self.n, &path, Vec::new())?;
        for level in (0..path.len()).rev() {
            let parent = &path_nodes[level];
            let target = parent.target_cell();
            for &c in &parent.cells[target] {
                if group.basic_orbit(level).contains(&c) {
                    continue;
                }
                self.tick()?;
                let child = self.child(parent, target, c);
                if child.trace != self.first_traces[level + 1] {
                    continue;
                }
                if let Some(g) = self.find_map(&child, level + 1)? {
                    if path[..level].iter().all(|&b| g.apply(b) == b) && g.apply(path[level]) == c {
                        group.add_generator(g)?;
                    }
                }
            }
        }
        debug_assert!(group.preserves(self.ts));
        Ok(group)
    }

    /// Looks below `node` for a leaf whose map from the first leaf is an automorphism.
    fn find_map(&mut self, node: &Node, depth: usize) -> Result<Option<Permutation>> {
        if node.is_discrete() {
            let g = self.leaf_map(&node.labeling());
            return Ok(is_automorphism(self.ts, &g).then_some(g));
        }
        let target = node.target_cell();
        for &v in &node.cells[target] {
            self.tick()?;
            let child = self.child(node, target, v);
            if self.first_traces.get(depth + 1) != Some(&child.trace) {
                continue;
            }
            if let Some(g) = self.find_map(&child, depth + 1)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    fn canonical(&mut self, group: &PermutationGroup) -> Result<CanonicalLabeling> {
        let root = self.root();
        let mut traces = vec![root.trace];
        self.canon_dfs(&root, &mut traces, group.clone())?;
        let best = self.best.take().expect("the tree has at least one leaf");
        Ok(CanonicalLabeling {
            labeling: Permutation::from_images(best.labeling).expect("leaf labeling"),
            form: CanonicalForm {
                n_points: self.n,
                triples: best.form,
            },
        })
    }

    fn canon_dfs(&mut self, node: &Node, traces: &mut Vec<u64>, stab: PermutationGroup) -> Result<()> {
        self.tick()?;
        if let Some(best) = &self.best {
            let depth = traces.len();
            if traces[..] > best.traces[..depth.min(best.traces.len())] {
                return Ok(());
            }
        }
        if node.is_discrete() {
            let labeling = node.labeling();
            let mut form: Vec<Triple> = self
                .ts
                .triples()
                .iter()
                .map(|t| {
                    let mut r = [labeling[t[0] as usize], labeling[t[1] as usize], labeling[t[2] as usize]];
                    r.sort_unstable();
                    r
                })
                .collect();
            form.sort_unstable();
            let better = match &self.best {
                None => true,
                Some(best) => match traces[..].cmp(&best.traces[..]) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => form < best.form,
                },
            };
            if better {
                self.best = Some(Best {
                    traces: traces.clone(),
                    form,
                    labeling,
                });
            }
            return Ok(());
        }
        let target = node.target_cell();
        let cell = &node.cells[target];
        let reps: Vec<Point> = if stab.is_trivial() {
            cell.clone()
        } else {
            let orbits = stab.orbits();
            let mut min_of = vec![0; self.n];
            for o in &orbits {
                for &p in o {
                    min_of[p as usize] = o[0];
                }
            }
            cell.iter().copied().filter(|&p| min_of[p as usize] == p).collect()
        };
        for v in reps {
            let child = self.child(node, target, v);
            traces.push(child.trace);
            let child_stab = if stab.is_trivial() {
                stab.clone()
            } else {
                stab.pointwise_stabilizer(&[v])
            };
            let r = self.canon_dfs(&child, traces, child_stab);
            traces.pop();
            r?;
        }
        Ok(())
    }
}

/// Hash of the sorted cycle lengths of the two matchings through `a` and `b`.
fn cycle_type<S: TripleStructure>(ts: &S, a: Point, b: Point, seen: &mut FixedBitSet, lengths: &mut Vec<u32>) -> u64 {
    let Some(c) = ts.join(a, b) else {
        return 0;
    };
    seen.clear();
    for p in [a, b, c] {
        seen.insert(p as usize);
    }
    lengths.clear();
    for start in 0..ts.n_points() as Point {
        if seen.contains(start as usize) {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        loop {
            seen.insert(x as usize);
            let y = ts.join(a, x).expect("Steiner");
            seen.insert(y as usize);
            len += 2;
            x = ts.join(b, y).expect("Steiner");
            if x == start {
                break;
            }
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    let mut h = FxHasher::default();
    h.write_u64(1);
    for &l in lengths.iter() {
        h.write_u32(l);
    }
    h.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{ag23, pg_sts, standard_sts};
    use num_bigint::BigUint;

    #[test]
    fn classical_orders() {
        assert_eq!(automorphism_group(&pg_sts(2).unwrap()).unwrap().order(), BigUint::from(168u32));
        assert_eq!(automorphism_group(&ag23()).unwrap().order(), BigUint::from(432u32));
        assert_eq!(automorphism_group(&pg_sts(3).unwrap()).unwrap().order(), BigUint::from(20160u32));
    }

    #[test]
    fn orders_without_pair_invariant() {
        let config = SearchConfig {
            pair_invariant: PairInvariant::Off,
            ..SearchConfig::default()
        };
        let g = automorphism_group_with(&pg_sts(3).unwrap(), &config).unwrap();
        assert_eq!(g.order(), BigUint::from(20160u32));
    }

    #[test]
    fn relabeled_systems_share_forms() {
        let ts = standard_sts(13).unwrap();
        let p = Permutation::from_cycles(13, &[&[0, 5, 9, 12], &[2, 3]]).unwrap();
        let other = ts.relabel(&p);
        assert_eq!(canonical_form(&ts).unwrap(), canonical_form(&other).unwrap());
        assert!(are_isomorphic(&ts, &other).unwrap().is_isomorphic());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let cert = are_isomorphic(&ag23(), &pg_sts(2).unwrap()).unwrap();
        assert_eq!(
            cert,
            IsoCertificate::NotIsomorphic(NonIsomorphism::PointCount { a: 9, b: 7 })
        );
    }

    #[test]
    fn budget_is_enforced() {
        let r = automorphism_group_with(&pg_sts(3).unwrap(), &SearchConfig::with_budget(3));
        assert!(matches!(r, Err(Error::BudgetExceeded { limit: 3 })));
    }

    #[test]
    fn degenerate_systems() {
        let empty = crate::system::TripleSystem::new(0, vec![]).unwrap();
        assert_eq!(automorphism_group(&empty).unwrap().order(), BigUint::from(1u32));
        let three = crate::system::TripleSystem::new(3, vec![[0, 1, 2]]).unwrap();
        assert_eq!(automorphism_group(&three).unwrap().order(), BigUint::from(6u32));
    }
}
