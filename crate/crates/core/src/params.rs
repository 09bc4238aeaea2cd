//! Order arithmetic: which orders `u = x + v (y - x)` are reachable, and the
//! parameters that reach a given `u`.
//!
//! With `δ ≡ 1, 3 (mod 6)` a residue mod 24, `0 <= r < K` and `a > t >= 0`:
//!
//! ```text
//! x = δ + 24 r + 24 K t
//! y = K (-1 + 192 K a + 24 t)
//! Δ = δ (1 - v) - v K + 24 r (1 - v)
//! u = x + v (y - x) = Δ + 192 K² v a + 24 K t
//! ```
//!
//! `K` is 1 (then `y ≡ 7 mod 8`, and `Y` comes from doubling twice) or a
//! Mersenne number `2^k - 1 ≡ 7 (mod 24)` (then `y ≡ 1 mod 8`, and `Y` is a
//! product with PG(k - 1, 2)). All arithmetic is exact; the scalar type is
//! generic so the same code runs on `i128` and on arbitrary precision.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Integer types the order arithmetic runs on.
pub trait Scalar: Integer + Signed + Clone + FromPrimitive + ToPrimitive + fmt::Display + fmt::Debug + FromStr {}

impl<T> Scalar for T where T: Integer + Signed + Clone + FromPrimitive + ToPrimitive + fmt::Display + fmt::Debug + FromStr {}

/// Residues mod 24 that are 1 or 3 mod 6.
pub const DELTAS: [u32; 8] = [1, 3, 7, 9, 13, 15, 19, 21];

fn c<T: Scalar>(x: i64) -> T {
    T::from_i64(x).expect("small constants fit every scalar type")
}

fn mod24<T: Scalar>(x: &T) -> u32 {
    x.mod_floor(&c(24)).to_u32().unwrap()
}

/// `2^k - 1`.
pub fn mersenne<T: Scalar>(k: u32) -> T {
    let mut p: T = T::one();
    for _ in 0..k {
        p = p * c(2);
    }
    p - T::one()
}

fn is_prime(k: u32) -> bool {
    k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| k % d != 0)
}

/// How to pick `k` for `K = 2^k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KStrategy {
    /// Smallest prime `k >= 5` with `gcd(K, v_i - 1) = 1` for both `i`.
    SmallestPrime,
    /// Smallest prime `k >= 5` coprime to the multiplicative order of 2
    /// modulo every odd prime dividing `(v_1 - 1)(v_2 - 1)`. This is a
    /// sufficient condition for the gcd condition.
    OrderOfTwo,
}

/// Picks `(k, K)` with the default strategy.
pub fn choose_k<T: Scalar>(v1: &T, v2: &T) -> Result<(u32, T)> {
    choose_k_with(v1, v2, KStrategy::SmallestPrime)
}

pub fn choose_k_with<T: Scalar>(v1: &T, v2: &T, strategy: KStrategy) -> Result<(u32, T)> {
    for v in [v1, v2] {
        if v < &c(3) || v.is_even() {
            return Err(Error::Parameter(format!("|V| = {v} must be odd and at least 3")));
        }
    }
    let orders: Vec<u64> = match strategy {
        KStrategy::SmallestPrime => Vec::new(),
        KStrategy::OrderOfTwo => {
            let mut primes = BTreeSet::new();
            for v in [v1, v2] {
                let w = (v.clone() - T::one())
                    .to_u64()
                    .ok_or_else(|| Error::Parameter("order-of-two strategy needs |V| < 2^64".into()))?;
                primes.extend(odd_prime_factors(w));
            }
            primes.into_iter().map(order_of_two).collect()
        }
    };
    let mut k = 5;
    loop {
        if is_prime(k) {
            let big_k: T = mersenne(k);
            let ok = match strategy {
                KStrategy::SmallestPrime => [v1, v2]
                    .iter()
                    .all(|v| big_k.gcd(&((*v).clone() - T::one())).is_one()),
                KStrategy::OrderOfTwo => orders.iter().all(|&s| (k as u64).gcd(&s) == 1),
            };
            if ok {
                return Ok((k, big_k));
            }
        }
        k += 2;
    }
}

fn odd_prime_factors(mut w: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while w > 0 && w % 2 == 0 {
        w /= 2;
    }
    let mut d = 3;
    while d * d <= w {
        if w % d == 0 {
            out.push(d);
            while w % d == 0 {
                w /= d;
            }
        }
        d += 2;
    }
    if w > 1 {
        out.push(w);
    }
    out
}

/// Multiplicative order of 2 modulo an odd prime.
pub fn order_of_two(p: u64) -> u64 {
    let mut x = 2 % p;
    let mut s = 1;
    while x != 1 {
        x = (x as u128 * 2 % p as u128) as u64;
        s += 1;
    }
    s
}

/// `Δ = δ (1 - v) - v K + 24 r (1 - v)`.
pub fn delta_of<T: Scalar>(delta: u32, r: &T, big_k: &T, v: &T) -> T {
    let one_minus_v = T::one() - v.clone();
    c::<T>(delta as i64) * one_minus_v.clone() - v.clone() * big_k.clone() + c::<T>(24) * r.clone() * one_minus_v
}

/// Values of `(v - 1)(-δ - K) - K` mod 24 over all `δ`: the residues of `Δ`
/// mod 24, independent of `r`.
pub fn residues_mod24<T: Scalar>(big_k: &T, v: &T) -> BTreeSet<u32> {
    DELTAS
        .iter()
        .map(|&d| mod24(&delta_of(d, &T::zero(), big_k, v)))
        .collect()
}

/// All residues of `Δ` mod `24 K` over `δ`, `0 <= r < K` and `v ∈ {v1, v2}`.
pub fn residue_coverage<T: Scalar>(big_k: &T, v1: &T, v2: &T) -> Result<BTreeSet<T>> {
    let modulus = c::<T>(24) * big_k.clone();
    for v in [v1, v2] {
        let g = (c::<T>(24) * (v.clone() - T::one())).gcd(big_k);
        if !g.is_one() {
            return Err(Error::Parameter(format!("gcd(24 (v - 1), K) = {g} for v = {v}")));
        }
    }
    let mut out = BTreeSet::new();
    for v in [v1, v2] {
        for &d in &DELTAS {
            let mut r = T::zero();
            while &r < big_k {
                out.insert(delta_of(d, &r, big_k, v).mod_floor(&modulus));
                r = r + T::one();
            }
        }
    }
    Ok(out)
}

/// `Δ + 1536 K³ v2²`: from here on every order `≡ Δ (mod 24 K)` is reached.
pub fn threshold<T: Scalar>(v2: &T, big_k: &T, big_delta: &T) -> T {
    big_delta.clone() + c::<T>(1536) * big_k.clone() * big_k.clone() * big_k.clone() * v2.clone() * v2.clone()
}

/// Smallest order from which every admissible `u` is solved, given that the
/// residues of both branches together cover all admissible classes mod 24:
/// the largest [`threshold`] over both branches and all `δ`, `r`, `v`.
pub fn order_threshold<T: Scalar>(v1: &T, v2: &T, big_k: &T) -> T {
    // Δ is largest for δ = 1, r = 0 and the smaller |V|
    let v_small = if v1 < v2 { v1 } else { v2 };
    let v_big = if v1 < v2 { v2 } else { v1 };
    [T::one(), big_k.clone()]
        .iter()
        .map(|kk| threshold(v_big, kk, &delta_of(1, &T::zero(), kk, v_small)))
        .max()
        .unwrap()
}

/// Bounds `(2^24 v*^5, 2^144 v*^25)` on the sizes of the two enlarged systems.
pub fn enlarged_size_bounds(v_star: u64) -> (BigUint, BigUint) {
    let v = BigUint::from(v_star);
    let two = BigUint::from(2u32);
    (two.pow(24) * v.pow(5), two.pow(144) * v.pow(25))
}

/// The interval `[2^168 v*^30, 2^169 v*^30]` holding a prime `k` that works
/// for every pair of enlarged systems.
pub fn prime_interval(v_star: u64) -> (BigUint, BigUint) {
    let v30 = BigUint::from(v_star).pow(30);
    let two = BigUint::from(2u32);
    (two.pow(168) * v30.clone(), two.pow(169) * v30)
}

/// The bound on `K` for that choice, `2^(2^169 v*^30)`, as an expression; it
/// is far too large to evaluate.
pub fn k_bound_expression(v_star: u64) -> String {
    format!("2^(2^169 * {v_star}^30)")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VChoice {
    V1,
    V2,
}

/// How `Y` is obtained from `Y_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YBranch {
    /// `K = 1`, `y ≡ 7 (mod 8)`: `Y = 2(2 Y_0 + 1) + 1`.
    Doubling,
    /// `K = 2^k - 1`, `y ≡ 1 (mod 8)`: `Y = Y_1 × PG(k - 1, 2)`.
    Product,
}

/// A certified solution of `u = x + v (y - x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSolution<T> {
    pub v1: T,
    pub v2: T,
    pub delta: u32,
    pub r: T,
    /// `None` when `K = 1`.
    pub k: Option<u32>,
    pub big_k: T,
    pub t: T,
    pub a: T,
    pub v_choice: VChoice,
    pub v: T,
    pub big_delta: T,
    pub x: T,
    pub y: T,
    pub u: T,
    pub branch: YBranch,
}

impl<T: Scalar> ParameterSolution<T> {
    /// Re-derives every quantity and checks every constraint.
    pub fn check(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Parameter(format!("certificate check failed: {what}")));
        let (k24, k8, k6) = (c::<T>(24), c::<T>(8), c::<T>(6));
        let bk = &self.big_k;
        if !DELTAS.contains(&self.delta) {
            return fail("delta is not 1 or 3 mod 6");
        }
        if self.r.is_negative() || &self.r >= bk {
            return fail("r is not in [0, K)");
        }
        match self.k {
            None if bk.is_one() => {}
            Some(k) if *bk == mersenne::<T>(k) && mod24(bk) == 7 && k > 3 && k % 2 == 1 => {}
            _ => return fail("K is neither 1 nor 2^k - 1 = 7 mod 24 with odd k > 3"),
        }
        let v_expected = match self.v_choice {
            VChoice::V1 => &self.v1,
            VChoice::V2 => &self.v2,
        };
        if &self.v != v_expected {
            return fail("v does not match the chosen system");
        }
        if self.t.is_negative() || self.a <= self.t {
            return fail("need a > t >= 0");
        }
        if self.a < k8.clone() * bk.clone() * self.v2.clone() {
            return fail("need a >= 8 K v2");
        }
        let delta = c::<T>(self.delta as i64);
        let x = delta + k24.clone() * self.r.clone() + k24.clone() * bk.clone() * self.t.clone();
        let y = bk.clone() * (c::<T>(-1) + c::<T>(192) * bk.clone() * self.a.clone() + k24.clone() * self.t.clone());
        let big_delta = delta_of(self.delta, &self.r, bk, &self.v);
        let u = x.clone() + self.v.clone() * (y.clone() - x.clone());
        let u_alt = big_delta.clone()
            + c::<T>(192) * bk.clone() * bk.clone() * self.v.clone() * self.a.clone()
            + k24 * bk.clone() * self.t.clone();
        if x != self.x || y != self.y || u != self.u || big_delta != self.big_delta {
            return fail("derived x, y, u or Delta differ");
        }
        if u != u_alt {
            return fail("u = x + v (y - x) disagrees with Delta + 192 K^2 v a + 24 K t");
        }
        if y.clone() - x.clone() <= k6 * self.v2.clone() {
            return fail("need y - x > 6 v2");
        }
        if y < (k8.clone() * x + c::<T>(7)) * bk.clone() {
            return fail("need y >= (8 x + 7) K");
        }
        let branch = match y.mod_floor(&k8).to_u32() {
            Some(7) => YBranch::Doubling,
            Some(1) => YBranch::Product,
            _ => return fail("y is not +-1 mod 8"),
        };
        if branch != self.branch || (branch == YBranch::Doubling) != bk.is_one() {
            return fail("branch does not match y mod 8 and K");
        }
        Ok(())
    }

    /// `key = value` lines.
    pub fn to_certificate(&self) -> String {
        let k = self.k.map_or("none".to_string(), |k| k.to_string());
        let v_choice = match self.v_choice {
            VChoice::V1 => "v1",
            VChoice::V2 => "v2",
        };
        let branch = match self.branch {
            YBranch::Doubling => "doubling",
            YBranch::Product => "product",
        };
        format!(
            "u = {}\nv1 = {}\nv2 = {}\ndelta = {}\nr = {}\nk = {k}\nK = {}\nt = {}\na = {}\nv_choice = {v_choice}\nv = {}\nDelta = {}\nx = {}\ny = {}\nbranch = {branch}\n",
            self.u, self.v1, self.v2, self.delta, self.r, self.big_k, self.t, self.a, self.v, self.big_delta, self.x, self.y
        )
    }

    /// Parses [`to_certificate`](Self::to_certificate) output. Does not check it.
    pub fn parse_certificate(text: &str) -> Result<Self> {
        let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: i + 1,
                    column: 1,
                    message: "expected `key = value`".into(),
                });
            };
            fields.insert(key.trim(), (i + 1, value.trim()));
        }
        fn get<'a>(fields: &BTreeMap<&str, (usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
            fields.get(key).copied().ok_or_else(|| Error::Parse {
                line: 0,
                column: 0,
                message: format!("missing key `{key}`"),
            })
        }
        fn num<T: FromStr>(fields: &BTreeMap<&str, (usize, &str)>, key: &str) -> Result<T> {
            let (line, value) = get(fields, key)?;
            value.parse().map_err(|_| Error::Parse {
                line,
                column: 1,
                message: format!("`{key}` is not an integer"),
            })
        }
        let k = match get(&fields, "k")?.1 {
            "none" => None,
            _ => Some(num::<u32>(&fields, "k")?),
        };
        let v_choice = match get(&fields, "v_choice")? {
            (_, "v1") => VChoice::V1,
            (_, "v2") => VChoice::V2,
            (line, _) => {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: "v_choice must be v1 or v2".into(),
                })
            }
        };
        let branch = match get(&fields, "branch")? {
            (_, "doubling") => YBranch::Doubling,
            (_, "product") => YBranch::Product,
            (line, _) => {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: "branch must be doubling or product".into(),
                })
            }
        };
        Ok(ParameterSolution {
            v1: num(&fields, "v1")?,
            v2: num(&fields, "v2")?,
            delta: num(&fields, "delta")?,
            r: num(&fields, "r")?,
            k,
            big_k: num(&fields, "K")?,
            t: num(&fields, "t")?,
            a: num(&fields, "a")?,
            v_choice,
            v: num(&fields, "v")?,
            big_delta: num(&fields, "Delta")?,
            x: num(&fields, "x")?,
            y: num(&fields, "y")?,
            u: num(&fields, "u")?,
            branch,
        })
    }
}

fn mod_inverse<T: Scalar>(a: &T, m: &T) -> Option<T> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Finds parameters realizing `u`, trying `K' ∈ {1, K}`, `v ∈ {v1, v2}` and
/// every `δ`, and keeping the solution with the smallest `y` (then the
/// smallest `K'`, `v`, `δ`).
pub fn solve_order<T: Scalar>(u: &T, v1: &T, v2: &T, big_k: &T, k: u32) -> Result<ParameterSolution<T>> {
    let m6 = u.mod_floor(&c(6));
    if m6 != T::one() && m6 != c(3) {
        return Err(Error::InadmissibleTarget(u.to_string()));
    }
    if *big_k != mersenne::<T>(k) {
        return Err(Error::Parameter(format!("K = {big_k} is not 2^{k} - 1")));
    }
    let mut best: Option<ParameterSolution<T>> = None;
    let mut covered = false;
    for (kk, k_opt) in [(T::one(), None), (big_k.clone(), Some(k))] {
        let modulus = c::<T>(24) * kk.clone();
        for (v, v_choice) in [(v1, VChoice::V1), (v2, VChoice::V2)] {
            let one_minus_v = T::one() - v.clone();
            let Some(inv) = mod_inverse(&(c::<T>(24) * one_minus_v.clone()), &kk) else {
                continue;
            };
            for &d in &DELTAS {
                if mod24(&delta_of(d, &T::zero(), &kk, v)) != mod24(u) {
                    continue;
                }
                covered = true;
                // 24 r (1 - v) = u - δ (1 - v) (mod K')
                let rhs = u.clone() - c::<T>(d as i64) * one_minus_v.clone();
                let r = (rhs * inv.clone()).mod_floor(&kk);
                let big_delta = delta_of(d, &r, &kk, v);
                let diff = u.clone() - big_delta.clone();
                debug_assert!(diff.mod_floor(&modulus).is_zero());
                if diff.is_negative() {
                    continue;
                }
                let n = diff / modulus.clone();
                let step = c::<T>(8) * kk.clone() * v.clone();
                let (a, t) = n.div_mod_floor(&step);
                if a < c::<T>(8) * kk.clone() * v2.clone() {
                    continue;
                }
                let x = c::<T>(d as i64) + c::<T>(24) * r.clone() + c::<T>(24) * kk.clone() * t.clone();
                let y = kk.clone() * (c::<T>(-1) + c::<T>(192) * kk.clone() * a.clone() + c::<T>(24) * t.clone());
                let cand = ParameterSolution {
                    v1: v1.clone(),
                    v2: v2.clone(),
                    delta: d,
                    r,
                    k: k_opt,
                    big_k: kk.clone(),
                    t,
                    a,
                    v_choice,
                    v: v.clone(),
                    big_delta,
                    x,
                    y,
                    u: u.clone(),
                    branch: if kk.is_one() { YBranch::Doubling } else { YBranch::Product },
                };
                if best.as_ref().map_or(true, |b| cand.y < b.y) {
                    best = Some(cand);
                }
            }
        }
    }
    match best {
        Some(sol) => {
            sol.check()?;
            Ok(sol)
        }
        None if !covered => {
            let mut reachable: BTreeSet<u32> = residues_mod24(&T::one(), v1);
            for (kk, v) in [(T::one(), v2), (big_k.clone(), v1), (big_k.clone(), v2)] {
                reachable.extend(residues_mod24(&kk, v));
            }
            Err(Error::Parameter(format!(
                "u = {} (mod 24) is not reached by these |V| values; reachable residues: {reachable:?}",
                mod24(u)
            )))
        }
        None => Err(Error::BelowThreshold {
            u: u.to_string(),
            threshold: order_threshold(v1, v2, big_k).to_string(),
        }),
    }
}
