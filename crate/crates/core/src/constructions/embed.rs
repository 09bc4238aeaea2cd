//! A finite toolbox of embeddings of an STS(x) as a subsystem of an STS(y0).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::base::standard_sts;
use super::products::{direct_product, double};
use super::random::complete_frozen;
use crate::error::{Error, Result};
use crate::system::{is_admissible, Point, PointSet, TripleStructure, TripleSystem};

/// Largest `y0` handled by the frozen hill-climbing fallback.
pub const COMPLETION_MAX: usize = 99;

const REACH: &str = "reachable: x in {0, 1, 3} with any admissible y0 >= 2x + 1; \
y0 = 2x + 1 or 4x + 3 (doubling); y0 = x w for admissible w >= 3 (direct product); \
otherwise y0 <= 99 (hill-climbing completion around STS(x))";

/// An STS on `y0_size` points with a closed subsystem of `x_size` points.
pub fn embed_subsystem(x_size: usize, y0_size: usize) -> Result<(TripleSystem, PointSet)> {
    let unsupported = || Error::UnsupportedEmbedding {
        x_size,
        y0_size,
        reach: REACH.into(),
    };
    if !is_admissible(x_size) || !is_admissible(y0_size) || y0_size < 2 * x_size + 1 {
        return Err(unsupported());
    }
    let y0 = y0_size as Point;
    match x_size {
        0 => return Ok((standard_sts(y0_size)?, PointSet::new(y0_size))),
        1 => return Ok((standard_sts(y0_size)?, PointSet::from_points(y0_size, [0]))),
        3 => {
            let ts = standard_sts(y0_size)?;
            let t = ts.triples()[0];
            return Ok((ts, PointSet::from_points(y0_size, t)));
        }
        _ => {}
    }
    let x = standard_sts(x_size)?;
    let first = |n: usize| PointSet::from_points(y0_size, 0..n as Point);
    if y0_size == 2 * x_size + 1 {
        return Ok((double(&x), first(x_size)));
    }
    if y0_size == 4 * x_size + 3 {
        return Ok((double(&double(&x)), first(x_size)));
    }
    if y0_size % x_size == 0 && is_admissible(y0_size / x_size) {
        let w = y0_size / x_size;
        let ts = direct_product(&x, &standard_sts(w)?);
        // X x {0}
        let set = PointSet::from_points(y0_size, (0..x_size as Point).map(|a| a * w as Point));
        return Ok((ts, set));
    }
    if y0_size <= COMPLETION_MAX {
        let mut rng = ChaCha8Rng::seed_from_u64(((x_size as u64) << 32) | y0 as u64);
        let ts = complete_frozen(y0_size, x.triples(), &mut rng)?;
        return Ok((ts, first(x_size)));
    }
    Err(unsupported())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toolbox_cases() {
        for (x, y0) in [(0, 7), (1, 3), (1, 9), (3, 7), (3, 9), (7, 15), (7, 31), (9, 19), (9, 27), (7, 19), (13, 27)] {
            let (ts, set) = embed_subsystem(x, y0).unwrap();
            assert_eq!(ts.n_points(), y0);
            assert_eq!(set.len(), x);
            assert!(ts.is_closed(&set), "({x}, {y0})");
            assert!(ts.validate().is_ok());
        }
    }

    #[test]
    fn out_of_reach() {
        assert!(matches!(embed_subsystem(7, 13), Err(Error::UnsupportedEmbedding { .. })));
        assert!(matches!(embed_subsystem(13, 103), Err(Error::UnsupportedEmbedding { .. })));
        assert!(embed_subsystem(5, 15).is_err());
    }
}
