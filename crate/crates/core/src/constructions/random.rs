//! Randomized STS generation by Stinson's hill-climbing, optionally around
//! a frozen partial system.

use rand::Rng;

use crate::error::{Error, Result};
use crate::search::{automorphism_group_with, SearchConfig};
use crate::system::{is_admissible, Point, Triple, TripleSystem, NO_POINT};

struct Climber {
    n: usize,
    /// `third[p * n + q]` is the third point of the triple on `p, q`.
    third: Vec<Point>,
    frozen: Vec<bool>,
    /// Uncovered pairs through each point.
    deficiency: Vec<usize>,
    count: usize,
}

impl Climber {
    fn new(n: usize) -> Self {
        Climber {
            n,
            third: vec![NO_POINT; n * n],
            frozen: vec![false; n * n],
            deficiency: vec![n - 1; n],
            count: 0,
        }
    }

    fn set(&mut self, t: Triple, on: bool, frozen: bool) {
        let [a, b, c] = t.map(|p| p as usize);
        let n = self.n;
        for (p, q, r) in [(a, b, c), (a, c, b), (b, c, a)] {
            let v = if on { r as Point } else { NO_POINT };
            self.third[p * n + q] = v;
            self.third[q * n + p] = v;
            self.frozen[p * n + q] = frozen;
            self.frozen[q * n + p] = frozen;
        }
        for p in [a, b, c] {
            if on {
                self.deficiency[p] -= 2;
            } else {
                self.deficiency[p] += 2;
            }
        }
        if on {
            self.count += 1;
        } else {
            self.count -= 1;
        }
    }

    fn uncovered(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&q| q != p && self.third[p * self.n + q] == NO_POINT)
    }

    fn run<R: Rng>(&mut self, rng: &mut R, max_steps: u64) -> bool {
        let target = self.n * (self.n - 1) / 6;
        let mut partners: Vec<usize> = Vec::new();
        for _ in 0..max_steps {
            if self.count == target {
                return true;
            }
            // rejection sampling gives a uniform live point
            let p = loop {
                let p = rng.gen_range(0..self.n);
                if self.deficiency[p] > 0 {
                    break p;
                }
            };
            partners.clear();
            partners.extend(self.uncovered(p));
            if partners.len() < 2 {
                continue;
            }
            let i = rng.gen_range(0..partners.len());
            let mut j = rng.gen_range(0..partners.len() - 1);
            if j >= i {
                j += 1;
            }
            let (q, r) = (partners[i], partners[j]);
            let s = self.third[q * self.n + r];
            if s != NO_POINT {
                if self.frozen[q * self.n + r] {
                    continue;
                }
                self.set([q as Point, r as Point, s], false, false);
            }
            self.set([p as Point, q as Point, r as Point], true, false);
        }
        self.count == target
    }

    fn triples(&self) -> Vec<Triple> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.count);
        for p in 0..n {
            for q in p + 1..n {
                let r = self.third[p * n + q];
                if r != NO_POINT && r as usize > q {
                    out.push([p as Point, q as Point, r]);
                }
            }
        }
        out
    }
}

fn step_budget(n: usize) -> u64 {
    (200 * n * n) as u64 + 100_000
}

/// A random STS(n) by hill-climbing.
pub fn random_sts<R: Rng>(n: usize, rng: &mut R) -> Result<TripleSystem> {
    complete_frozen(n, &[], rng)
}

/// Completes the partial system `frozen` on `0..n` to an STS(n) whose extra
/// triples never cover a pair inside the frozen triples. Restarts a few times
/// before giving up.
pub fn complete_frozen<R: Rng>(n: usize, frozen: &[Triple], rng: &mut R) -> Result<TripleSystem> {
    if !is_admissible(n) {
        return Err(Error::Inadmissible { n });
    }
    if n <= 1 {
        return TripleSystem::new(n, Vec::new());
    }
    const RESTARTS: usize = 20;
    for _ in 0..RESTARTS {
        let mut c = Climber::new(n);
        for &t in frozen {
            if t.iter().any(|&p| p as usize >= n) {
                return Err(Error::PointOutOfRange { point: *t.iter().max().unwrap(), n });
            }
            c.set(t, true, true);
        }
        if c.run(rng, step_budget(n)) {
            return TripleSystem::new(n, c.triples());
        }
    }
    Err(Error::SearchExhausted {
        attempts: RESTARTS,
        detail: format!("hill-climbing did not complete an STS({n})"),
    })
}

/// Draws random STS(n) until one has trivial automorphism group.
pub fn rigid_sts_search<R: Rng>(n: usize, attempts: usize, rng: &mut R) -> Result<TripleSystem> {
    let config = SearchConfig::default();
    for _ in 0..attempts {
        let ts = random_sts(n, rng)?;
        if automorphism_group_with(&ts, &config)?.is_trivial() {
            return Ok(ts);
        }
    }
    Err(Error::SearchExhausted {
        attempts,
        detail: format!("no STS({n}) with trivial automorphism group found"),
    })
}
