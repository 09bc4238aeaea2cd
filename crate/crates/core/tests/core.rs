mod common;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use sts_core::constructions::{ag23, pg_sts, rigid_sts_search};
use sts_core::search::NonIsomorphism;
use sts_core::system::sorted_triple;
use sts_core::*;

fn cyclic13() -> TripleSystem {
    let mut triples = Vec::new();
    for base in [[0, 1, 4], [0, 2, 7]] {
        for s in 0..13 {
            triples.push(sorted_triple(base.map(|x| (x + s) % 13)));
        }
    }
    TripleSystem::new(13, triples).unwrap()
}

/// Quadrilaterals `{a,b,c} {a,d,e} {f,b,d} {f,c,e}` as labels `[a, b, c, d, e, f]`,
/// one per set of four triples.
fn pasch_configurations(ts: &TripleSystem) -> Vec<[Point; 6]> {
    let mut seen = std::collections::BTreeMap::new();
    let triples = ts.triples();
    for (i, t1) in triples.iter().enumerate() {
        for t2 in &triples[i + 1..] {
            let Some(&a) = t1.iter().find(|p| t2.contains(p)) else { continue };
            let bc: Vec<Point> = t1.iter().copied().filter(|&p| p != a).collect();
            let de: Vec<Point> = t2.iter().copied().filter(|&p| p != a).collect();
            for (d, e) in [(de[0], de[1]), (de[1], de[0])] {
                let (b, c) = (bc[0], bc[1]);
                let f = ts.third(b, d);
                if ts.third(c, e) == f {
                    let mut key = [*t1, *t2, sorted_triple([f, b, d]), sorted_triple([f, c, e])];
                    key.sort_unstable();
                    seen.entry(key).or_insert([a, b, c, d, e, f]);
                }
            }
        }
    }
    seen.into_values().collect()
}

/// Replaces the quadrilateral by the other one on the same six points.
fn pasch_switch(ts: &TripleSystem, [a, b, c, d, e, f]: [Point; 6]) -> TripleSystem {
    let old = [[a, b, c], [a, d, e], [f, b, d], [f, c, e]].map(sorted_triple);
    let mut triples: Vec<Triple> = ts.triples().iter().copied().filter(|t| !old.contains(t)).collect();
    triples.extend([[a, b, d], [a, c, e], [f, b, c], [f, d, e]]);
    TripleSystem::new(ts.n_points(), triples).unwrap()
}

#[test]
fn validation_reports() {
    assert!(pg_sts(2).unwrap().validate().is_ok());
    let report = validate_sts(7, &[[0, 1, 2], [0, 1, 3]]);
    assert!(!report.is_ok());
    assert!(report.to_string().contains("pair (0,1) covered twice"), "{report}");
    assert!(validate_pstss(5, &[]).is_ok());
    assert!(validate_pstss(4, &[[0, 1, 2]]).is_ok());
    assert!(!validate_sts(8, &[]).is_ok());
    assert!(TripleSystem::new(0, vec![]).is_ok());
    assert!(TripleSystem::new(1, vec![]).is_ok());
    assert!(TripleSystem::new(3, vec![[0, 1, 2]]).is_ok());
}

#[test]
fn span_examples() {
    let pg3 = pg_sts(3).unwrap();
    assert_eq!(pg3.span_of(&[4]).to_vec(), vec![4]);
    assert_eq!(pg3.span_of(&[0, 1]).to_vec(), vec![0, 1, 2]);
    // bit patterns 1, 2, 4, 8 are independent
    let general = [0, 1, 3, 7];
    assert_eq!(pg3.span_of(&general).len(), 15);
    assert_eq!(naive_span(&pg3, &general).len(), 15);
    for seed in [[0, 1, 3], [2, 5, 9], [3, 6, 12]] {
        assert_eq!(pg3.span_of(&seed).to_vec(), naive_span(&pg3, &seed));
    }
}

#[test]
fn automorphisms_against_brute_force() {
    let fano = pg_sts(2).unwrap();
    let g = automorphism_group(&fano).unwrap();
    assert_eq!(brute_aut_count(&fano), 168);
    assert_eq!(g.order(), BigUint::from(168u32));
    assert!(g.preserves(&fano));
    assert_eq!(g.elements(200).unwrap().len(), 168);
    for h in g.elements(200).unwrap() {
        assert!(is_automorphism(&fano, &h));
    }
    let ag = ag23();
    assert_eq!(brute_aut_count(&ag), 432);
    assert_eq!(automorphism_group(&ag).unwrap().order(), BigUint::from(432u32));

    let tiny = PartialTripleSystem::new(6, vec![[0, 1, 2], [2, 3, 4]]).unwrap();
    assert_eq!(automorphism_group(&tiny).unwrap().order(), BigUint::from(brute_aut_count(&tiny)));
}

#[test]
fn is_automorphism_examples() {
    let fano = pg_sts(2).unwrap();
    assert!(is_automorphism(&fano, &Permutation::identity(7)));
    assert!(!is_automorphism(&fano, &Permutation::transposition(7, 0, 1)));
}

#[test]
fn steiner_thirteen_classes() {
    let cyclic = cyclic13();
    assert!(cyclic.validate().is_ok());
    let g = automorphism_group(&cyclic).unwrap();
    assert_eq!(g.order(), BigUint::from(39u32));
    let shift = Permutation::from_images((0..13).map(|x| (x + 1) % 13).collect()).unwrap();
    let triple = Permutation::from_images((0..13).map(|x| (3 * x) % 13).collect()).unwrap();
    assert!(g.contains(&shift) && g.contains(&triple));

    let quads = pasch_configurations(&cyclic);
    assert!(!quads.is_empty());
    let other = pasch_switch(&cyclic, quads[0]);
    assert!(other.validate().is_ok());
    assert_ne!(pasch_configurations(&other).len(), quads.len());
    assert_eq!(automorphism_group(&other).unwrap().order(), BigUint::from(6u32));
    assert_ne!(canonical_form(&cyclic).unwrap(), canonical_form(&other).unwrap());
    match are_isomorphic(&cyclic, &other).unwrap() {
        IsoCertificate::NotIsomorphic(NonIsomorphism::CanonicalForms { .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn isomorphism_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fano = pg_sts(2).unwrap();
    let (relabeled, _) = random_relabel(&fano, &mut rng);
    match are_isomorphic(&fano, &relabeled).unwrap() {
        IsoCertificate::Isomorphic(map) => assert_eq!(fano.relabel(&map), relabeled),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        are_isomorphic(&ag23(), &fano).unwrap(),
        IsoCertificate::NotIsomorphic(NonIsomorphism::PointCount { .. })
    ));
    assert_eq!(canonical_form(&fano).unwrap(), canonical_form(&fano).unwrap());
}

#[test]
fn rigid_fifteen() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let ts = rigid_sts_search(15, 200, &mut rng).unwrap();
    let g = automorphism_group(&ts).unwrap();
    assert!(g.is_trivial());
    // a relabeled copy is still recognized
    let (relabeled, _) = random_relabel(&ts, &mut rng);
    assert!(are_isomorphic(&ts, &relabeled).unwrap().is_isomorphic());
}

#[test]
fn budget_is_enforced() {
    let pg4 = pg_sts(4).unwrap();
    let err = automorphism_group_with(&pg4, &SearchConfig::with_budget(5)).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded { limit: 5 }));
}
