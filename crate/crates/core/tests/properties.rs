use std::collections::BTreeMap;

use mellin_core::bgg::{check_bgg_equivalence, random_module, validate_module};
use mellin_core::commalg::{buchberger, Poly, PolyIdeal};
use mellin_core::corpus::{random_curated_object, random_linearity_case};
use mellin_core::exactlin::{is_quasi_isomorphism, mapping_cone, ChainMap, Field, FinComplex, Matrix};
use mellin_core::laurent::{CharacterPoint, LaurentPoly};
use mellin_core::lattice::IntMatrix;
use mellin_core::linearity::{linearity_check, CompletionRequest};
use mellin_core::mellin::{cohomology_modules, fiber_dims, fm, support_loci};
use mellin_core::purity::{purity_check, random_pure_complex, split_pure, verify_split};
use mellin_core::sampling::rng_for;
use proptest::prelude::*;

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |e| Matrix::from_i64(Field::Rationals, rows, cols, &e))
}

fn laurent(nvars: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, nvars), -3i64..=3), 1..4).prop_map(move |terms| {
        let q = Field::Rationals;
        LaurentPoly::from_terms(q, nvars, terms.into_iter().map(|(e, c)| (e, q.from_i64(c)))).unwrap()
    })
}

fn character(nvars: usize) -> impl Strategy<Value = CharacterPoint> {
    prop::collection::vec(prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), nvars)
        .prop_map(|c| CharacterPoint::from_i64(Field::Rationals, &c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_equals_transposed_rank(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| small_matrix(r, c))) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn euler_characteristic_matches_cohomology(a in small_matrix(3, 2), b in small_matrix(2, 3)) {
        // k^2 → k^3 → k^2, with b composed with a map killing the image of a
        let q = Field::Rationals;
        let ker_rows: Vec<Vec<_>> = a.transpose().kernel();
        let proj = Matrix::from_columns(q, 3, &ker_rows).transpose();
        let d1 = b.mul(&Matrix::from_columns(q, 3, &ker_rows)).mul(&proj);
        let c = FinComplex::new(q, 0, vec![2, 3, 2], vec![a, d1]).unwrap();
        let h: i64 = c.cohomology_dims().iter().map(|(&i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        prop_assert_eq!(h, c.euler_characteristic());
    }

    #[test]
    fn cone_of_identity_is_acyclic(a in small_matrix(2, 3)) {
        let q = Field::Rationals;
        // any two-term complex k^3 → k^2
        let c = FinComplex::new(q, 0, vec![3, 2], vec![a]).unwrap();
        let id: ChainMap = BTreeMap::from([(0, Matrix::identity(q, 3)), (1, Matrix::identity(q, 2))]);
        prop_assert!(mapping_cone(&c, &c, &id).nonzero_cohomology().is_empty());
        prop_assert!(is_quasi_isomorphism(&c, &c, &id));
    }

    #[test]
    fn completion_is_multiplicative(f in laurent(2), g in laurent(2), chi in character(2), n in 1usize..4) {
        let lhs = f.mul(&g).complete_at(&chi, n);
        let rhs = f.complete_at(&chi, n).mul(&g.complete_at(&chi, n));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.complete_at(&chi, n).constant_term(), f.eval(&chi));
    }

    #[test]
    fn pullback_matches_pulled_character(f in laurent(2), chi in character(3), e in prop::collection::vec(-2i64..=2, 6)) {
        let m = IntMatrix::new(3, 2, e).unwrap();
        prop_assert_eq!(f.monomial_pullback(&m).eval(&chi), f.eval(&chi.pullback(&m)));
    }

    #[test]
    fn buchberger_is_idempotent(cs in prop::collection::vec(-2i64..=2, 6)) {
        let q = Field::Rationals;
        let x = Poly::var(q, 2, 0);
        let y = Poly::var(q, 2, 1);
        let c = |i: usize| q.from_i64(cs[i]);
        let f = x.mul(&x).scale(&c(0)).add(&x.mul(&y).scale(&c(1))).add(&y.mul(&y).scale(&c(2)));
        let g = x.mul(&y).scale(&c(3)).add(&y.mul(&y).scale(&c(4))).add(&x.scale(&c(5)));
        let ideal = PolyIdeal::new(q, 2, vec![f.clone(), g.clone()]).unwrap();
        let gb = buchberger(&ideal);
        let again = buchberger(&PolyIdeal::new(q, 2, gb.clone()).unwrap());
        prop_assert_eq!(&gb, &again);
        prop_assert!(ideal.contains(&f) && ideal.contains(&g));
        prop_assert!(ideal.contains(&f.mul(&g).add(&g)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fibers_match_closed_form(seed in 0u64..10_000) {
        let f = Field::default_prime();
        let mut rng = rng_for(seed, 0);
        let obj = random_curated_object(f, 2, &mut rng);
        let table = cohomology_modules(&fm(&obj)).unwrap();
        let loci = support_loci(&obj);
        let chi = CharacterPoint::random(f, obj.torus().rank(), &mut rng);
        let dims = fiber_dims(&fm(&obj), &chi);
        prop_assert_eq!(&dims, &table.derived_fiber_prediction(&chi));
        for &i in dims.keys() {
            prop_assert!(loci.contains(i, &chi));
        }
        // the dual's loci are the inverted loci of the object
        prop_assert_eq!(support_loci(&obj.verdier_dual()).inverse().negate_degrees(), loci);
    }

    #[test]
    fn random_modules_are_valid_and_bgg_agrees(seed in 0u64..10_000, n in 1usize..=3, order in 1usize..=3) {
        let m = random_module(Field::Rationals, n, 5, &mut rng_for(seed, 0));
        prop_assert!(validate_module(&m).is_empty());
        prop_assert!(check_bgg_equivalence(&m, order).unwrap().passed());
    }

    #[test]
    fn pure_complexes_split(seed in 0u64..10_000) {
        let k = random_pure_complex(3, 6, &mut rng_for(seed, 0));
        prop_assert!(purity_check(&k).pure());
        prop_assert!(verify_split(&k, &split_pure(&k).unwrap()).passed());
    }

    #[test]
    fn tensor_of_pure_is_pure(seed in 0u64..10_000) {
        let mut rng = rng_for(seed, 0);
        let a = random_pure_complex(3, 3, &mut rng);
        let b = random_pure_complex(3, 3, &mut rng);
        let t = a.tensor(&b).unwrap();
        prop_assert!(purity_check(&t).pure());
        prop_assert_eq!(t.complex().euler_characteristic(), a.complex().euler_characteristic() * b.complex().euler_characteristic());
    }

    #[test]
    fn linearity_on_small_cases(seed in 0u64..10_000, order in 1usize..=3) {
        let f = Field::default_prime();
        let (obj, chi0) = random_linearity_case(f, 2, &mut rng_for(seed, 0));
        let req = CompletionRequest::new(obj, chi0, order).unwrap();
        let r = linearity_check(&req).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }
}
