use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sts_core::constructions::{ag23, pg_sts};
use sts_core::pstss::boolean::{mask, non_space_degrees, pair_point, singleton};
use sts_core::pstss::*;
use sts_core::system::sorted_triple;
use sts_core::{automorphism_group, PartialTripleSystem, Permutation, PointSet, TripleStructure, TripleSystem};

fn order<S: TripleStructure>(s: &S) -> BigUint {
    automorphism_group(s).unwrap().order()
}

/// Brute force over all permutations of a tiny system.
fn brute_order(s: &PartialTripleSystem) -> usize {
    let n = s.n_points();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut count = 0;
    loop {
        if s.triples().iter().all(|t| s.contains_triple(sorted_triple(t.map(|p| perm[p as usize])))) {
            count += 1;
        }
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return count;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

#[test]
fn cyclic_intersection_graph_is_a_cycle() {
    for t in 3..10 {
        let c = cyclic_pstss(t).unwrap();
        let triples = c.system().triples();
        assert_eq!(c.system().n_points(), 2 * t);
        for (i, a) in triples.iter().enumerate() {
            let neighbours = triples
                .iter()
                .enumerate()
                .filter(|&(j, b)| j != i && a.iter().any(|p| b.contains(p)))
                .count();
            assert_eq!(neighbours, 2, "t = {t}");
        }
        // connected: walking the cycle order visits every triple
        for j in 0..t {
            let (a, b) = (c.triple(j), c.triple((j + 1) % t));
            assert!(a.iter().any(|p| b.contains(p)));
        }
    }
}

#[test]
fn gadgets_are_rigid() {
    for n in 1..=4 {
        let q = build_q(n).unwrap();
        assert_eq!(q.system.n_points(), 4 * n + 10);
        assert_eq!(order(&q.system), BigUint::from(1u32), "n = {n}");
    }
    assert_eq!(build_qr(7).unwrap().system.n_points(), 38);
}

#[test]
fn attaching_gadgets_keeps_the_group() {
    let cases = [
        PartialTripleSystem::empty(1),
        PartialTripleSystem::empty(2),
        PartialTripleSystem::empty(3),
        PartialTripleSystem::new(3, vec![[0, 1, 2]]).unwrap(),
    ];
    for v in &cases {
        let (w, _) = attach_gadgets(v).unwrap();
        let n = v.n_points();
        assert_eq!(w.n_points(), 4 * n * n + 10 * n);
        assert_eq!(order(&w), BigUint::from(brute_order(v)), "{v:?}");
    }
}

fn vprime_points(u: &BooleanReplacement) -> PointSet {
    let n_prime = u.space().n_prime();
    PointSet::from_points(u.space().n_points(), (0..n_prime).map(singleton))
}

fn corpus() -> Vec<PartialTripleSystem> {
    let (gadget_point, _) = attach_gadgets(&PartialTripleSystem::empty(1)).unwrap();
    vec![
        cyclic_pstss(3).unwrap().system().clone(),
        cyclic_pstss(5).unwrap().system().clone(),
        gadget_point,
    ]
}

#[test]
fn replacement_is_a_steiner_system() {
    for v in corpus() {
        let n_prime = v.n_points() as u32;
        let p = boolean_space(n_prime).unwrap();
        let u = replace_triples(&p, &v).unwrap();
        let report = u.validate();
        assert!(report.is_ok(), "n' = {n_prime}: {report}");
        assert_eq!(u.added().len(), 4 * v.triples().len());
        assert_eq!(u.removed().len(), 4 * v.triples().len());
        // removed and added triples cover the same pairs
        let pairs = |ts: &mut dyn Iterator<Item = [u32; 3]>| {
            let mut out: Vec<(u32, u32)> = ts.flat_map(|t| [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]).collect();
            out.sort_unstable();
            out
        };
        assert_eq!(pairs(&mut u.removed().iter().copied()), pairs(&mut u.added().iter().copied()));
    }
}

#[test]
fn materialized_replacement_agrees() {
    let v = cyclic_pstss(3).unwrap().system().clone();
    let p = boolean_space(6).unwrap();
    let u = replace_triples(&p, &v).unwrap();
    let ts = u.to_triple_system().unwrap();
    assert!(ts.validate().is_ok());
    for a in 0..63 {
        for b in a + 1..63 {
            assert_eq!(ts.third(a, b), u.third_point(a, b));
        }
    }
    assert!(replace_triples(&boolean_space(14).unwrap(), &corpus()[2]).unwrap().to_triple_system().is_err());
}

#[test]
fn empty_replacement_is_the_space() {
    let p = boolean_space(5).unwrap();
    let u = replace_triples(&p, &PartialTripleSystem::empty(5)).unwrap();
    assert_eq!(u.to_triple_system().unwrap(), pg_sts(4).unwrap());
    assert!(recover_vprime(&u).is_empty());
}

#[test]
fn pair_points_lie_on_two_new_triples() {
    for v in corpus().into_iter().take(2) {
        let u = replace_triples(&boolean_space(v.n_points() as u32).unwrap(), &v).unwrap();
        let deg = non_space_degrees(&u);
        for &[i, j, k] in v.triples() {
            for pp in [pair_point(i, j), pair_point(i, k), pair_point(j, k)] {
                assert_eq!(deg[pp as usize], 2);
            }
        }
    }
}

#[test]
fn lines_are_reconstructed() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for v in corpus().into_iter().take(2) {
        let u = replace_triples(&boolean_space(v.n_points() as u32).unwrap(), &v).unwrap();
        let n = u.space().n_points() as u32;
        for _ in 0..200 {
            let x = rng.gen_range(0..n);
            let y = (x + rng.gen_range(1..n)) % n;
            let line = reconstruct_line(&u, x, y, 48, &mut rng).unwrap();
            assert_eq!(mask(line.z), mask(x) ^ mask(y));
            assert!(line.intersections_ok);
            assert!(line.max_multiplicity <= 4);
        }
    }
}

#[test]
fn pure_space_line() {
    let p = boolean_space(8).unwrap();
    let u = replace_triples(&p, &PartialTripleSystem::empty(8)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let line = reconstruct_line(&u, singleton(1), singleton(2), 32, &mut rng).unwrap();
    assert_eq!(line.z, pair_point(1, 2));
}

#[test]
fn embedded_points_are_recovered() {
    for v in corpus().into_iter().take(2) {
        let u = replace_triples(&boolean_space(v.n_points() as u32).unwrap(), &v).unwrap();
        assert_eq!(recover_vprime(&u), vprime_points(&u));
    }
}

#[test]
fn subset_action_lifts_to_the_replacement() {
    let v = cyclic_pstss(3).unwrap().system().clone();
    let p = boolean_space(6).unwrap();
    let u = replace_triples(&p, &v).unwrap().to_triple_system().unwrap();
    let aut_v = automorphism_group(&v).unwrap();
    assert_eq!(aut_v.order(), BigUint::from(brute_order(&v)));
    for g in aut_v.generators() {
        let lifted = p.lift_permutation(g).unwrap();
        assert!(sts_core::is_automorphism(&u, &lifted));
    }
    // a permutation outside the group does not lift
    let bad = Permutation::transposition(6, 0, 1);
    assert!(!sts_core::is_automorphism(&u, &p.lift_permutation(&bad).unwrap()));
}

fn stabilizer_order(v: &TripleSystem, v1: &PointSet) -> usize {
    let g = automorphism_group(v).unwrap();
    g.elements(1 << 20)
        .unwrap()
        .iter()
        .filter(|h| v1.iter().all(|p| v1.contains(h.apply(p))))
        .count()
}

#[test]
fn set_stabilizer_build() {
    let v = ag23();
    let v1 = PointSet::from_points(9, v.triples()[0]);
    let w = set_stabilizer_system(&v, &v1).unwrap();
    assert_eq!(w.n_points(), 13);
    let expected = stabilizer_order(&v, &v1);
    assert_eq!(expected, 432 / 12);
    assert_eq!(order(&w), BigUint::from(expected));

    let fano = pg_sts(2).unwrap();
    let point = PointSet::from_points(7, [0]);
    let w = set_stabilizer_system(&fano, &point).unwrap();
    assert_eq!(w.n_points(), 9);
    // with a single point, x' and z are interchangeable, so the group is the
    // stabilizer times a swap; the group induced on V is still the stabilizer
    let g = automorphism_group(&w).unwrap();
    assert_eq!(g.order(), BigUint::from(48u32));
    let induced: Vec<Permutation> = g
        .generators()
        .iter()
        .map(|h| Permutation::from_images(h.images()[..7].to_vec()).unwrap())
        .collect();
    let induced = sts_core::PermutationGroup::new(7, induced).unwrap();
    assert_eq!(induced.order(), BigUint::from(stabilizer_order(&fano, &point) as u32));
    assert_eq!(induced.order(), BigUint::from(24u32));

    let not_closed = PointSet::from_points(9, [0, 1]);
    assert!(set_stabilizer_system(&v, &not_closed).is_err());
}

#[test]
fn rigid_enlargement_is_rigid_and_larger() {
    let triple = TripleSystem::new(3, vec![[0, 1, 2]]).unwrap();
    let fano = pg_sts(2).unwrap();
    let pair = rigid_enlargement(&fano, &triple).unwrap();
    let n = 3;
    let expected = n + (1..=n).map(|k| 4 * k * n + 10 - 1).sum::<usize>();
    assert_eq!(pair.w_prime.n_points(), expected);
    assert_eq!(pair.rounds.len(), 1);
    assert_eq!(order(&pair.w_prime), BigUint::from(1u32));
    assert_eq!(order(&pair.combined), BigUint::from(168u32));
}
