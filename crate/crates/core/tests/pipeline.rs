use std::collections::{BTreeMap, BTreeSet};

use mellin_core::bgg::{check_resolution, resolution_of_k, rhom_kk_check};
use mellin_core::commalg::{curated_duality_suite, ext_self_k, verify_duality_lemma};
use mellin_core::corpus::random_curated_object;
use mellin_core::exactlin::Field;
use mellin_core::laurent::CharacterPoint;
use mellin_core::lattice::IntMatrix;
use mellin_core::linearity::{corrupted_linearity_check, cup_module, linearity_check, CompletionRequest};
use mellin_core::mellin::{
    duality_checks, euler_check, euler_characteristic, fiber_dims, fm, generic_vanishing_check, support_loci,
    verify_codim_bounds,
};
use mellin_core::purity::{curated_algebras, impure_counterexample, multiplicative_split_check, negative_ext_check};
use mellin_core::sampling::rng_for;
use mellin_core::toric::{make_curated_atom, skyscraper, ToricObject, TorusData};

fn diagonal_plus_point(field: Field) -> ToricObject {
    let t = TorusData::new(2).unwrap();
    let m = IntMatrix::from_rows(&[vec![1], vec![1]], 1).unwrap();
    let diag = make_curated_atom(field, t, &m, vec![field.one(); 2], 0).unwrap();
    ToricObject::new(field, t, vec![skyscraper(field, t, 0), diag]).unwrap()
}

#[test]
fn diagonal_object_end_to_end() {
    let f = Field::default_prime();
    let obj = diagonal_plus_point(f);
    let gv = generic_vanishing_check(&obj, 20, 42).unwrap();
    assert!(gv.passed() && gv.unexplained.is_empty());
    assert_eq!(gv.samples, 20);

    // on the diagonal subtorus the atom contributes H^*(T^2)
    let (a, b) = (f.from_i64(2), f.from_i64(3));
    let on = CharacterPoint::new(f, vec![a.clone(), b.clone(), a.inv().unwrap(), b.inv().unwrap()]).unwrap();
    assert_eq!(fiber_dims(&fm(&obj), &on), BTreeMap::from([(-1, 1), (0, 3), (1, 1)]));

    let loci = support_loci(&obj);
    assert_eq!(loci.codim(1), Some(2));
    assert_eq!(loci.codim(0), Some(0));
    assert!(verify_codim_bounds(&obj).unwrap().passed());
    assert!(duality_checks(&obj, 10, 1).passed());
    assert_eq!(euler_characteristic(&obj), 1);
    assert!(euler_check(&obj, 10, 3).passed());
}

#[test]
fn small_corpus_passes_every_mellin_check() {
    let f = Field::default_prime();
    let mut equality_seen = false;
    for i in 0..15 {
        let obj = random_curated_object(f, 3, &mut rng_for(100, i));
        assert!(generic_vanishing_check(&obj, 5, i).unwrap().passed());
        let codim = verify_codim_bounds(&obj).unwrap();
        assert!(codim.passed());
        equality_seen |= codim.equality_witnesses().next().is_some();
        assert!(duality_checks(&obj, 3, i).passed());
        let e = euler_check(&obj, 5, i);
        assert!(e.passed() && e.closed_form >= 0);
    }
    assert!(equality_seen);
}

#[test]
fn commalg_and_bgg_tables() {
    let q = Field::Rationals;
    for n in 1..=4 {
        let expect: Vec<usize> = (0..=n).map(|i| binom(n, i)).collect();
        assert_eq!(ext_self_k(q, n).unwrap(), expect);
    }
    let truth: BTreeSet<bool> = curated_duality_suite(q)
        .iter()
        .map(|(_, c)| {
            let r = verify_duality_lemma(c).unwrap();
            assert!(r.passed());
            r.support_side
        })
        .collect();
    assert_eq!(truth.len(), 2);
    for n in 1..=3 {
        assert!(check_resolution(&resolution_of_k(q, n, 4).unwrap()).passed());
        for order in 1..=4 {
            assert!(rhom_kk_check(q, n, order).unwrap().passed());
        }
    }
}

#[test]
fn purity_suite() {
    for (name, a) in curated_algebras(3) {
        let u = a.underlying();
        assert!(negative_ext_check(u, u).negative_vanishes(), "{name}");
        assert!(multiplicative_split_check(&a).unwrap().passed(), "{name}");
    }
    let bad = impure_counterexample();
    assert!(!negative_ext_check(&bad, &bad).negative_vanishes());
}

#[test]
fn linearity_on_diagonal() {
    let f = Field::default_prime();
    let t = TorusData::new(2).unwrap();
    let m = IntMatrix::from_rows(&[vec![1], vec![1]], 1).unwrap();
    let diag = make_curated_atom(f, t, &m, vec![f.one(); 2], 0).unwrap();
    let obj = ToricObject::new(f, t, vec![diag]).unwrap();
    let chi0 = CharacterPoint::trivial(f, 4);
    assert_eq!(cup_module(&obj, &chi0).dims(), &[1, 2, 1]);
    for order in 1..=3 {
        let req = CompletionRequest::new(obj.clone(), chi0.clone(), order).unwrap();
        assert!(linearity_check(&req).unwrap().passed());
        assert!(!corrupted_linearity_check(&req).unwrap().passed());
    }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
