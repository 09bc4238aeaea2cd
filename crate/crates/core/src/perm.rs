use std::fmt;

use crate::error::{Error, Result};
use crate::system::Point;

/// A bijection of `0..n`, stored as its image array.
///
/// Composition is left to right: `a.then(&b)` maps `p` to `b(a(p))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<Point>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n as Point).collect(),
        }
    }

    pub fn from_images(image: Vec<Point>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &p in &image {
            let i = p as usize;
            if i >= n {
                return Err(Error::NotAPermutation(format!("image {p} out of range for degree {n}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPermutation(format!("image {p} repeated")));
            }
        }
        Ok(Permutation { image })
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[Point]]) -> Result<Self> {
        let mut image: Vec<Point> = (0..n as Point).collect();
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                let q = cycle[(i + 1) % cycle.len()];
                if p as usize >= n || q as usize >= n {
                    return Err(Error::PointOutOfRange { point: p.max(q), n });
                }
                image[p as usize] = q;
            }
        }
        Self::from_images(image)
    }

    pub fn transposition(n: usize, a: Point, b: Point) -> Self {
        let mut image: Vec<Point> = (0..n as Point).collect();
        image.swap(a as usize, b as usize);
        Permutation { image }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        self.image[p as usize]
    }

    pub fn images(&self) -> &[Point] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &p)| i as Point == p)
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: self.image.iter().map(|&p| other.apply(p)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (i, &p) in self.image.iter().enumerate() {
            image[p as usize] = i as Point;
        }
        Permutation { image }
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.image.len()];
        let mut out = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] || self.image[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as Point);
                p = self.image[p] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_left_to_right() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![2, 0]).is_err());
    }

    #[test]
    fn display_cycles() {
        let p = Permutation::from_cycles(5, &[&[3, 1, 4]]).unwrap();
        assert_eq!(p.to_string(), "(1 4 3)");
        assert_eq!(Permutation::identity(4).to_string(), "()");
    }
}
