//! Paired systems from a 2-(w, k, 1) design and a paired STS(2k + 1).

use super::base::BlockDesign;
use crate::error::{Error, Result};
use crate::system::{Point, Triple, TripleStructure, TripleSystem};

/// Builds an STS on `{∞} ∪ ({1, 2} × W)` with a copy of `s` on
/// `{∞} ∪ ({1, 2} × B)` for every block `B`, in which `{∞, (1, b), (2, b)}`
/// is a triple for each `b ∈ B`.
///
/// `∞` is point 0, `(1, b)` is `1 + b` and `(2, b)` is `1 + w + b`. The copy
/// of `s` is placed directly: point 0 of `s` goes to `∞`, and the `j`-th
/// triple `{0, p, q}` of `s` (with `p < q`) sends `p` to `(1, b_j)` and `q` to
/// `(2, b_j)`, where `b_j` is the `j`-th point of `B` in increasing order.
pub fn paired_via_design(s: &TripleSystem, w: &BlockDesign) -> Result<TripleSystem> {
    let k = w.block_size();
    if s.n_points() != 2 * k + 1 {
        return Err(Error::Construction(format!(
            "system has {} points but blocks have size {k}; need 2k + 1",
            s.n_points()
        )));
    }
    let wn = w.n_points as Point;
    let through_inf: Vec<Triple> = s.incidence()[0]
        .iter()
        .map(|&i| s.triples()[i as usize])
        .collect();
    let mut triples: Vec<Triple> = (0..wn).map(|b| [0, 1 + b, 1 + wn + b]).collect();
    for block in &w.blocks {
        let mut image = vec![0 as Point; s.n_points()];
        for (j, t) in through_inf.iter().enumerate() {
            image[t[1] as usize] = 1 + block[j];
            image[t[2] as usize] = 1 + wn + block[j];
        }
        for t in s.triples() {
            if t[0] != 0 {
                triples.push(t.map(|p| image[p as usize]));
            }
        }
    }
    TripleSystem::new(2 * w.n_points + 1, triples)
}

pub fn paired_names(w: usize) -> Vec<String> {
    let mut names = vec!["inf".to_string()];
    names.extend((0..w).map(|b| format!("(1,{b})")));
    names.extend((0..w).map(|b| format!("(2,{b})")));
    names
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::base::pg_sts;

    #[test]
    fn fano_over_fano() {
        let fano = pg_sts(2).unwrap();
        let u = paired_via_design(&fano, &BlockDesign::from_sts(&fano)).unwrap();
        assert_eq!(u.n_points(), 15);
        assert!(u.validate().is_ok());
    }

    #[test]
    fn size_mismatch() {
        let fano = pg_sts(2).unwrap();
        let pg3 = pg_sts(3).unwrap();
        assert!(paired_via_design(&pg3, &BlockDesign::from_sts(&fano)).is_err());
    }
}
