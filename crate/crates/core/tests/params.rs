use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sts_core::params::*;
use sts_core::Error;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn residue(x: &BigInt, m: i64) -> i64 {
    i64::try_from(x.mod_floor(&big(m))).unwrap()
}

#[test]
fn residue_rows() {
    let row: Vec<i64> = [1, 3, 7, 9].iter().map(|&d| residue(&delta_of(d, &big(0), &big(1), &big(3)), 24)).collect();
    assert_eq!(row, vec![19, 15, 7, 3]);
    // any K = 7 (mod 24) gives the same residues
    for big_k in [7, 31, 127] {
        let row: BTreeSet<i64> =
            [1, 3, 7, 9].iter().map(|&d| residue(&delta_of(d, &big(0), &big(big_k), &big(3)), 24)).collect();
        assert_eq!(row, BTreeSet::from([1, 9, 13, 21]));
    }
}

#[test]
fn residues_depend_on_v_mod_12() {
    for big_k in [1i64, 7, 31] {
        assert_eq!(residues_mod24(&big_k, &3), residues_mod24(&big_k, &15));
        assert_eq!(residues_mod24(&big_k, &9), residues_mod24(&big_k, &21));
        // r does not change Δ mod 24
        for r in 0..5 {
            for &d in &DELTAS {
                assert_eq!(
                    delta_of(d, &r, &big_k, &27).mod_floor(&24),
                    delta_of(d, &0, &big_k, &27).mod_floor(&24)
                );
            }
        }
    }
}

#[test]
fn both_branches_cover_every_admissible_residue() {
    let admissible: BTreeSet<u32> = (0..24).filter(|r| r % 6 == 1 || r % 6 == 3).collect();
    for (v1, v2) in [(3i64, 21i64), (9, 15), (27, 45), (33, 63)] {
        let (_, big_k) = choose_k(&v1, &v2).unwrap();
        let mut union = BTreeSet::new();
        for kk in [1, big_k] {
            for v in [v1, v2] {
                union.extend(residues_mod24(&kk, &v));
            }
        }
        assert_eq!(union, admissible, "({v1}, {v2})");

        // modulo 24 K every class reachable mod 24 is reached for each r
        let cov = residue_coverage(&big_k, &v1, &v2).unwrap();
        let reduced: BTreeSet<u32> = cov.iter().map(|c| (c % 24) as u32).collect();
        let from_k: BTreeSet<u32> = [v1, v2].iter().flat_map(|v| residues_mod24(&big_k, v)).collect();
        assert_eq!(reduced, from_k);
        assert_eq!(cov.len() as i64, from_k.len() as i64 * big_k);
    }
    assert!(matches!(residue_coverage(&7i64, &15, &9), Err(Error::Parameter(_))));
}

#[test]
fn choosing_k() {
    assert_eq!(choose_k(&15i64, &87).unwrap(), (5, 31));
    assert_eq!(choose_k(&BigInt::from(15), &BigInt::from(87)).unwrap(), (5, BigInt::from(31)));
    for (v1, v2) in [(15i64, 87i64), (15, 63), (9, 15), (43, 129), (63, 255)] {
        for strategy in [KStrategy::SmallestPrime, KStrategy::OrderOfTwo] {
            let (k, big_k) = choose_k_with(&v1, &v2, strategy).unwrap();
            assert_eq!(big_k, (1i64 << k) - 1);
            assert_eq!(big_k % 24, 7);
            assert!(k >= 5 && (2..k).all(|d| k % d != 0));
            assert_eq!(big_k.gcd(&(v1 - 1)), 1);
            assert_eq!(big_k.gcd(&(v2 - 1)), 1);
        }
    }
    assert!(choose_k(&4i64, &9).is_err());
}

#[test]
fn order_of_two_by_definition() {
    for p in [3u64, 5, 7, 11, 13, 17, 31, 43, 127, 8191] {
        let s = order_of_two(p);
        assert_eq!(num_bigint::BigUint::from(2u32).modpow(&s.into(), &p.into()), 1u32.into());
        for d in 1..s {
            assert_ne!(num_bigint::BigUint::from(2u32).modpow(&d.into(), &p.into()), 1u32.into());
        }
    }
}

/// Recomputes everything the certificate claims from its free parameters.
fn assert_solution(sol: &ParameterSolution<BigInt>, u: &BigInt) {
    let bk = &sol.big_k;
    let d = big(sol.delta as i64);
    let x = &d + big(24) * &sol.r + big(24) * bk * &sol.t;
    let y = bk * (big(-1) + big(192) * bk * &sol.a + big(24) * &sol.t);
    assert_eq!(&x + &sol.v * (&y - &x), *u);
    assert_eq!((&sol.x, &sol.y, &sol.u), (&x, &y, u));
    assert!(sol.a > sol.t && sol.t >= big(0));
    assert!(sol.r >= big(0) && &sol.r < bk);
    assert!(&y - &x > big(6) * &sol.v2);
    assert_eq!(residue(&y, 8), if bk == &big(1) { 7 } else { 1 });
    sol.check().unwrap();
}

#[test]
fn every_admissible_order_in_a_window_is_solved() {
    let (v1, v2) = (big(9), big(15));
    let (k, big_k) = choose_k(&v1, &v2).unwrap();
    let start = order_threshold(&v1, &v2, &big_k);
    let window = i64::try_from(big(48) * &big_k).unwrap();
    let mut branches = BTreeSet::new();
    for i in 0..window {
        let u = &start + big(i);
        if !matches!(residue(&u, 6), 1 | 3) {
            assert!(matches!(solve_order(&u, &v1, &v2, &big_k, k), Err(Error::InadmissibleTarget(_))));
            continue;
        }
        let sol = solve_order(&u, &v1, &v2, &big_k, k).unwrap_or_else(|e| panic!("u = {u}: {e}"));
        assert_solution(&sol, &u);
        branches.insert(format!("{:?}", sol.branch));
    }
    assert_eq!(branches.len(), 2);
}

#[test]
fn solving_exactly_at_a_threshold() {
    let (v1, v2) = (big(3), big(21));
    let (k, big_k) = choose_k(&v1, &v2).unwrap();
    // K' = 1, v = v1, δ = 1, r = 0 and the smallest allowed a: t = 0
    let big_delta = delta_of(1, &big(0), &big(1), &v1);
    let a = big(8) * &v2;
    let u = &big_delta + big(192) * &v1 * &a;
    let sol = solve_order(&u, &v1, &v2, &big_k, k).unwrap();
    assert_solution(&sol, &u);
    assert_eq!(sol.t, big(0));
    assert!(threshold(&v2, &big(1), &big_delta) > u);
    // one step below the smallest allowed a there is no doubling solution
    let below = &u - big(192) * &v1;
    if let Ok(sol) = solve_order(&below, &v1, &v2, &big_k, k) {
        assert_eq!(sol.branch, YBranch::Product);
    }
}

#[test]
fn i128_and_bigint_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (v1, v2) in [(9i128, 15i128), (3, 21), (15, 87)] {
        let (k, bk) = choose_k(&v1, &v2).unwrap();
        let start = order_threshold(&v1, &v2, &bk);
        for _ in 0..200 {
            let u = start + rng.gen_range(0..10_000_000i128);
            let small = solve_order(&u, &v1, &v2, &bk, k);
            let large = solve_order(&BigInt::from(u), &BigInt::from(v1), &BigInt::from(v2), &BigInt::from(bk), k);
            match (small, large) {
                (Ok(a), Ok(b)) => assert_eq!(a.to_certificate(), b.to_certificate()),
                (Err(_), Err(_)) => assert!(!matches!(u % 6, 1 | 3)),
                (a, b) => panic!("u = {u}: {a:?} vs {b:?}"),
            }
        }
    }
}

#[test]
fn below_threshold_and_bad_inputs() {
    let (v1, v2) = (big(9), big(15));
    let (k, big_k) = choose_k(&v1, &v2).unwrap();
    assert!(matches!(solve_order(&big(1003), &v1, &v2, &big_k, k), Err(Error::BelowThreshold { .. })));
    assert!(solve_order(&big(1001), &v1, &v2, &big(30), k).is_err());
    // both systems ≡ 9 (mod 24) reach only some classes
    let (k, big_k) = choose_k(&big(9), &big(33)).unwrap();
    let u = order_threshold(&big(9), &big(33), &big_k) * big(2);
    let reachable: BTreeSet<i64> = [big(1), big_k.clone()]
        .iter()
        .flat_map(|kk| residues_mod24(kk, &big(9)))
        .map(i64::from)
        .collect();
    for i in 0..24 {
        let u = &u + big(i);
        if !matches!(residue(&u, 6), 1 | 3) {
            continue;
        }
        let result = solve_order(&u, &big(9), &big(33), &big_k, k);
        assert_eq!(result.is_ok(), reachable.contains(&residue(&u, 24)), "u = {u}");
        if let Err(e) = result {
            assert!(matches!(e, Error::Parameter(_)), "{e}");
        }
    }
}

#[test]
fn size_bounds() {
    let (lo, hi) = enlarged_size_bounds(7);
    assert_eq!(lo, BigUint::from(16_777_216u64 * 16_807));
    assert_eq!(hi, BigUint::from(2u32).pow(144) * BigUint::from(7u32).pow(25));
    let (a, b) = prime_interval(7);
    assert_eq!(&b, &(&a * 2u32));
    assert_eq!(k_bound_expression(7), "2^(2^169 * 7^30)");
}

#[test]
fn certificates_round_trip() {
    let (v1, v2) = (big(9), big(15));
    let (k, big_k) = choose_k(&v1, &v2).unwrap();
    let base = order_threshold(&v1, &v2, &big_k);
    for i in 0..60 {
        let u = &base + big(i);
        let Ok(sol) = solve_order(&u, &v1, &v2, &big_k, k) else { continue };
        let text = sol.to_certificate();
        let parsed = ParameterSolution::<BigInt>::parse_certificate(&text).unwrap();
        assert_eq!(parsed, sol);
        let mut tampered = parsed.clone();
        tampered.x += 24;
        assert!(tampered.check().is_err());
    }
    assert!(matches!(
        ParameterSolution::<BigInt>::parse_certificate("u 5"),
        Err(Error::Parse { line: 1, .. })
    ));
}

#[test]
fn order_identity_on_random_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10_000 {
        let d = DELTAS[rng.gen_range(0..8)];
        let big_k = big([1, 7, 31, 127, 8191][rng.gen_range(0..5)]);
        // |V| is a multiple of 3
        let v = big(rng.gen_range(0..500) * 6 + 3);
        let r = big(rng.gen_range(0..i64::try_from(&big_k).unwrap()));
        let t = big(rng.gen_range(0..1_000_000));
        let a = &t + big(rng.gen_range(1..1_000_000));
        let x = big(d as i64) + big(24) * &r + big(24) * &big_k * &t;
        let y = &big_k * (big(-1) + big(192) * &big_k * &a + big(24) * &t);
        let u = &x + &v * (&y - &x);
        let big_delta = delta_of(d, &r, &big_k, &v);
        assert_eq!(u, &big_delta + big(192) * &big_k * &big_k * &v * &a + big(24) * &big_k * &t);
        assert!(matches!(residue(&u, 6), 1 | 3));
    }
}
