//! Base systems: projective spaces over GF(2) and the Bose and Skolem
//! quasigroup constructions.

use crate::error::{Error, Result};
use crate::system::{Point, Triple, TripleSystem};

/// Points and lines of PG(d, 2). Point `i` is the nonzero vector with bit
/// pattern `i + 1`.
pub fn pg_sts(d: u32) -> Result<TripleSystem> {
    if d == 0 || d > 20 {
        return Err(Error::Construction(format!("PG({d},2) needs 1 <= d <= 20")));
    }
    let q: u32 = (1 << (d + 1)) - 1;
    let mut triples = Vec::with_capacity((q as usize) * (q as usize - 1) / 6);
    for a in 1..=q {
        for b in a + 1..=q {
            let c = a ^ b;
            if c > b {
                triples.push([a - 1, b - 1, c - 1]);
            }
        }
    }
    TripleSystem::new(q as usize, triples)
}

/// Bose construction of an STS(n) for `n = 3 mod 6`, over the idempotent
/// commutative quasigroup `x o y = (x + y) / 2` on `Z_q`, `q = n / 3`.
/// Point `(x, i)` has index `i * q + x`.
pub fn bose(n: usize) -> Result<TripleSystem> {
    if n % 6 != 3 {
        return Err(Error::Inadmissible { n });
    }
    let q = (n / 3) as u64;
    let half = (q + 1) / 2;
    let idx = |x: u64, i: u64| (i % 3 * q + x) as Point;
    let mut triples: Vec<Triple> = Vec::with_capacity(n * (n - 1) / 6);
    for x in 0..q {
        triples.push([idx(x, 0), idx(x, 1), idx(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..q {
            for y in x + 1..q {
                let z = (x + y) * half % q;
                triples.push([idx(x, i), idx(y, i), idx(z, i + 1)]);
            }
        }
    }
    TripleSystem::new(n, triples)
}

/// Skolem construction of an STS(n) for `n = 1 mod 6`, over the
/// half-idempotent commutative quasigroup on `Z_2k`, `k = (n - 1) / 6`.
/// Point `(x, i)` has index `i * 2k + x`; the extra point is `n - 1`.
pub fn skolem(n: usize) -> Result<TripleSystem> {
    if n % 6 != 1 {
        return Err(Error::Inadmissible { n });
    }
    if n == 1 {
        return TripleSystem::new(1, Vec::new());
    }
    let k = ((n - 1) / 6) as u64;
    let q = 2 * k;
    let op = |x: u64, y: u64| {
        let s = (x + y) % q;
        if s % 2 == 0 {
            s / 2
        } else {
            k + (s - 1) / 2
        }
    };
    let idx = |x: u64, i: u64| (i % 3 * q + x) as Point;
    let inf = (n - 1) as Point;
    let mut triples: Vec<Triple> = Vec::with_capacity(n * (n - 1) / 6);
    for x in 0..k {
        triples.push([idx(x, 0), idx(x, 1), idx(x, 2)]);
        for i in 0..3 {
            triples.push([inf, idx(x + k, i), idx(x, i + 1)]);
        }
    }
    for i in 0..3 {
        for x in 0..q {
            for y in x + 1..q {
                triples.push([idx(x, i), idx(y, i), idx(op(x, y), i + 1)]);
            }
        }
    }
    TripleSystem::new(n, triples)
}

/// Some STS(n) for any admissible `n`: the trivial systems, Bose or Skolem.
pub fn standard_sts(n: usize) -> Result<TripleSystem> {
    match n {
        0 | 1 => TripleSystem::new(n, Vec::new()),
        _ if n % 6 == 3 => bose(n),
        _ if n % 6 == 1 => skolem(n),
        _ => Err(Error::Inadmissible { n }),
    }
}

/// Lines of the affine plane AG(2, 3), the unique STS(9).
pub fn ag23() -> TripleSystem {
    let mut triples = Vec::new();
    for b in affine_plane(3).expect("3 is prime").blocks {
        triples.push([b[0], b[1], b[2]]);
    }
    TripleSystem::new(9, triples).expect("AG(2,3) is an STS(9)")
}

/// A 2-(w, k, 1) design given by its blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDesign {
    pub n_points: usize,
    pub blocks: Vec<Vec<Point>>,
}

impl BlockDesign {
    /// Checks that all blocks have size `k` and every pair lies in exactly one block.
    pub fn new(n_points: usize, mut blocks: Vec<Vec<Point>>) -> Result<Self> {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let k = blocks.first().map_or(0, Vec::len);
        let mut seen = vec![false; n_points * n_points];
        for b in &blocks {
            if b.len() != k || k < 2 {
                return Err(Error::Construction("blocks must share one size >= 2".into()));
            }
            for (i, &p) in b.iter().enumerate() {
                if p as usize >= n_points {
                    return Err(Error::PointOutOfRange { point: p, n: n_points });
                }
                for &q in &b[i + 1..] {
                    let slot = &mut seen[p as usize * n_points + q as usize];
                    if *slot || p == q {
                        return Err(Error::Construction(format!("pair ({p},{q}) in two blocks")));
                    }
                    *slot = true;
                }
            }
        }
        for p in 0..n_points {
            for q in p + 1..n_points {
                if !seen[p * n_points + q] {
                    return Err(Error::Construction(format!("pair ({p},{q}) in no block")));
                }
            }
        }
        Ok(BlockDesign { n_points, blocks })
    }

    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, Vec::len)
    }

    pub fn from_sts(ts: &TripleSystem) -> Self {
        use crate::system::TripleStructure;
        BlockDesign {
            n_points: ts.n_points(),
            blocks: ts.triples().iter().map(|t| t.to_vec()).collect(),
        }
    }
}

/// Lines of AG(2, q) for prime `q`; point `(x, y)` has index `x * q + y`.
pub fn affine_plane(q: u32) -> Result<BlockDesign> {
    if q < 2 || (2..q).any(|d| q % d == 0) {
        return Err(Error::Construction(format!("affine plane needs a prime order, got {q}")));
    }
    let mut blocks = Vec::new();
    for slope in 0..q {
        for c in 0..q {
            blocks.push((0..q).map(|x| x * q + (slope * x + c) % q).collect());
        }
    }
    for c in 0..q {
        blocks.push((0..q).map(|y| c * q + y).collect());
    }
    BlockDesign::new((q * q) as usize, blocks)
}
