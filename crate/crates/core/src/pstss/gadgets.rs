//! Cyclic partial systems, the rigid gadget built from two of them, and
//! attaching a gadget to every point of a partial system.

use crate::error::{Error, Result};
use crate::system::{Point, PartialTripleSystem, Triple, TripleStructure};

/// A partial system whose triples, joined when they meet, form a cycle.
#[derive(Debug, Clone)]
pub struct CyclicPstss {
    t: usize,
    system: PartialTripleSystem,
}

impl CyclicPstss {
    pub fn triple_count(&self) -> usize {
        self.t
    }

    pub fn system(&self) -> &PartialTripleSystem {
        &self.system
    }

    /// Triple `j` of the cycle, `{2j, 2j + 1, 2j + 2 mod 2t}` in cycle order.
    pub fn triple(&self, j: usize) -> [Point; 3] {
        cycle_triple(self.t, j)
    }
}

fn cycle_triple(t: usize, j: usize) -> [Point; 3] {
    [2 * j as Point, 2 * j as Point + 1, ((2 * j + 2) % (2 * t)) as Point]
}

/// The cyclic partial system with `t` triples on `2t` points. Even points lie
/// on two consecutive triples, odd points on one.
pub fn cyclic_pstss(t: usize) -> Result<CyclicPstss> {
    if t < 3 {
        return Err(Error::Construction(format!("a cyclic partial system needs t >= 3 triples, got {t}")));
    }
    let triples = (0..t).map(|j| cycle_triple(t, j)).collect();
    Ok(CyclicPstss {
        t,
        system: PartialTripleSystem::new(2 * t, triples)?,
    })
}

/// The rigid gadget on `4n + 10` points: cycles `C1`, `C2` with `2n + 4` and
/// `2n + 6` points sharing `z`, and one extra triple `{z'1, z', z'2}`.
#[derive(Debug, Clone)]
pub struct GadgetQ {
    pub n: usize,
    pub system: PartialTripleSystem,
    pub z: Point,
    pub z_prime: Point,
    /// `z_i`: the point on the triple through `z` and `z'_i` lying on one triple.
    pub z_leaf: [Point; 2],
    /// `z'_i`: the point on that triple lying on two triples of `C_i`.
    pub z_joint: [Point; 2],
    pub c1: Vec<Point>,
    pub c2: Vec<Point>,
}

/// Layout: `z = 0`, then the other points of `C1` in cycle order, then those
/// of `C2`, then `z'`.
pub fn build_q(n: usize) -> Result<GadgetQ> {
    if n == 0 {
        return Err(Error::Construction("gadget parameter must be at least 1".into()));
    }
    let t1 = n + 2;
    let t2 = n + 3;
    // cycle point k (k > 0) of C_i gets label offset_i + k - 1; cycle point 0 is z
    let offsets = [1, 2 * t1];
    let mut triples: Vec<Triple> = Vec::new();
    let mut cycles = [Vec::new(), Vec::new()];
    for (i, &t) in [t1, t2].iter().enumerate() {
        let label = |k: Point| if k == 0 { 0 } else { offsets[i] as Point + k - 1 };
        for j in 0..t {
            triples.push(cycle_triple(t, j).map(label));
        }
        cycles[i] = (0..2 * t as Point).map(label).collect();
    }
    let z_prime = (2 * t1 + 2 * t2 - 1) as Point;
    let z_leaf = [cycles[0][1], cycles[1][1]];
    let z_joint = [cycles[0][2], cycles[1][2]];
    triples.push([z_joint[0], z_prime, z_joint[1]]);
    let system = PartialTripleSystem::new(4 * n + 10, triples)?;
    let [c1, c2] = cycles;
    Ok(GadgetQ {
        n,
        system,
        z: 0,
        z_prime,
        z_leaf,
        z_joint,
        c1,
        c2,
    })
}

/// The variant with cycles of `2r + 4` and `2r + 6` points. It has the same
/// shape as [`build_q`] with `n = r`.
pub fn build_qr(r: usize) -> Result<GadgetQ> {
    build_q(r)
}

/// Where the points of an extended partial system came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    /// Number of points of the original system; they keep their labels.
    pub base_points: usize,
    /// For each point, the base point whose gadget it belongs to (`None` for
    /// base points).
    pub gadget_of: Vec<Option<Point>>,
    /// Gadget parameter used at each base point.
    pub gadget_params: Vec<usize>,
}

/// Attaches a copy of the gadget with parameter `n = |V|` to every point.
/// Result has `4n² + 10n` points: `V` first, then each gadget minus its
/// anchor, in order of the anchor.
pub fn attach_gadgets(v: &PartialTripleSystem) -> Result<(PartialTripleSystem, Attachment)> {
    let n = v.n_points();
    attach_gadgets_with(v, &vec![n; n])
}

/// Attaches the gadget with parameter `params[x]` to each point `x`.
pub fn attach_gadgets_with(v: &PartialTripleSystem, params: &[usize]) -> Result<(PartialTripleSystem, Attachment)> {
    let n = v.n_points();
    if n == 0 {
        return Err(Error::Construction("cannot attach gadgets to an empty point set".into()));
    }
    if params.len() != n {
        return Err(Error::Construction(format!("{} gadget parameters for {n} points", params.len())));
    }
    let mut triples: Vec<Triple> = v.triples().to_vec();
    let mut gadget_of = vec![None; n];
    let mut next = n as Point;
    for (x, &param) in params.iter().enumerate() {
        let q = build_q(param)?;
        let base = next - 1;
        // gadget point 0 is z, sent to x; the rest are shifted past `next`
        let relabel = |p: Point| if p == 0 { x as Point } else { base + p };
        triples.extend(q.system.triples().iter().map(|t| t.map(relabel)));
        let size = q.system.n_points() - 1;
        gadget_of.extend(std::iter::repeat(Some(x as Point)).take(size));
        next += size as Point;
    }
    let system = PartialTripleSystem::new(next as usize, triples)?;
    Ok((
        system,
        Attachment {
            base_points: n,
            gadget_of,
            gadget_params: params.to_vec(),
        },
    ))
}
