//! Partial systems used to embed with a prescribed group: a rigid enlargement
//! of one system beside another, and a system whose group is a set-stabilizer.

use crate::error::{Error, Result};
use crate::system::{Point, PointSet, PartialTripleSystem, Triple, TripleStructure, TripleSystem};

use super::gadgets::{attach_gadgets_with, Attachment};

/// A rigid enlargement `W'` of `W` and the disjoint union of `W'` with `V`.
#[derive(Debug, Clone)]
pub struct RigidPair {
    pub w_prime: PartialTripleSystem,
    /// `W'` on its own labels, then `V` shifted by `|W'|`.
    pub combined: PartialTripleSystem,
    /// One entry per attachment round.
    pub rounds: Vec<Attachment>,
}

/// Attaches the gadget with parameter `k n` to the `k`-th point of `W`
/// (`k = 1..n`), so gadget sizes `4kn + 10` are pairwise distinct. Rounds
/// repeat on the result until it has more points than `V`.
pub fn rigid_enlargement(v: &TripleSystem, w: &TripleSystem) -> Result<RigidPair> {
    let mut current = w.as_partial().clone();
    let mut rounds = Vec::new();
    loop {
        let n = current.n_points();
        let params: Vec<usize> = (1..=n).map(|k| k * n).collect();
        let (next, attachment) = attach_gadgets_with(&current, &params)?;
        current = next;
        rounds.push(attachment);
        if current.n_points() > v.n_points() {
            break;
        }
    }
    let shift = current.n_points() as Point;
    let mut triples: Vec<Triple> = current.triples().to_vec();
    triples.extend(v.triples().iter().map(|t| t.map(|p| p + shift)));
    let combined = PartialTripleSystem::new(current.n_points() + v.n_points(), triples)?;
    Ok(RigidPair {
        w_prime: current,
        combined,
        rounds,
    })
}

/// `V`, then a new point `x'` for each `x` of `V1` in increasing order, then
/// `z`, with the extra triples `{x, x', z}`.
pub fn set_stabilizer_system(v: &TripleSystem, v1: &PointSet) -> Result<PartialTripleSystem> {
    let n = v.n_points();
    if v1.universe() != n {
        return Err(Error::Construction(format!("subset of {} points for a system on {n}", v1.universe())));
    }
    if !v.is_closed(v1) {
        return Err(Error::NotClosed);
    }
    if v1.len() == n {
        return Err(Error::Construction("the subsystem must be proper".into()));
    }
    let z = (n + v1.len()) as Point;
    let mut triples: Vec<Triple> = v.triples().to_vec();
    for (i, x) in v1.iter().enumerate() {
        triples.push([x, n as Point + i as Point, z]);
    }
    PartialTripleSystem::new(n + v1.len() + 1, triples)
}
