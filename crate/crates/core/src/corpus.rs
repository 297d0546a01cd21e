//! Random curated perverse objects with torsion monodromy, and base points
//! for the linearity comparison.

use rand::Rng;

use crate::exactlin::{Field, FieldElem};
use crate::laurent::CharacterPoint;
use crate::lattice::IntMatrix;
use crate::toric::{make_curated_atom, Atom, ToricObject, TorusData};

/// Orders of the roots of unity used for monodromy: the divisors of 6 that
/// the field supports (only `±1` over `Q`).
pub fn torsion_orders(field: Field) -> Vec<u64> {
    match field {
        Field::Rationals => vec![1, 2],
        Field::Prime(p) => [1, 2, 3, 6].into_iter().filter(|n| (p - 1) % n == 0).collect(),
    }
}

pub fn random_root_of_unity<R: Rng + ?Sized>(field: Field, rng: &mut R) -> FieldElem {
    let orders = torsion_orders(field);
    let n = orders[rng.gen_range(0..orders.len())];
    field.root_of_unity(rng.gen_range(0..n as i64), n).expect("order divides the unit group")
}

pub fn random_torsion_point<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> CharacterPoint {
    CharacterPoint::new(field, (0..n).map(|_| random_root_of_unity(field, rng)).collect()).unwrap()
}

/// `M` of shape `g × m`, entries in `[−2, 2]`, of rank `m`.
pub fn random_full_rank<R: Rng + ?Sized>(g: usize, m: usize, rng: &mut R) -> IntMatrix {
    loop {
        let data = (0..g * m).map(|_| rng.gen_range(-2..=2)).collect();
        let mm = IntMatrix::new(g, m, data).unwrap();
        if mm.rank_over(Field::Rationals) == m {
            return mm;
        }
    }
}

pub fn random_curated_atom<R: Rng + ?Sized>(field: Field, torus: TorusData, rng: &mut R) -> Atom {
    loop {
        let m = rng.gen_range(0..=torus.g());
        let mm = random_full_rank(torus.g(), m, rng);
        let eta = (0..2 * m).map(|_| random_root_of_unity(field, rng)).collect();
        // over F_p an elementary divisor may vanish; draw again
        if let Ok(a) = make_curated_atom(field, torus, &mm, eta, 0) {
            return a;
        }
    }
}

/// One to three curated atoms with torsion monodromy on `E^g`, `1 ≤ g ≤ gmax`.
pub fn random_curated_object<R: Rng + ?Sized>(field: Field, gmax: usize, rng: &mut R) -> ToricObject {
    let g = rng.gen_range(1..=gmax.max(1));
    let torus = TorusData::new(g).unwrap();
    let count = rng.gen_range(1..=3);
    let atoms = (0..count).map(|_| random_curated_atom(field, torus, rng)).collect();
    ToricObject::new(field, torus, atoms).unwrap()
}

/// A random curated object with a random torsion base point. With
/// probability 3/4 one atom's monodromy is redrawn so that its support passes
/// through the base point; the monodromy stays torsion.
pub fn random_linearity_case<R: Rng + ?Sized>(field: Field, gmax: usize, rng: &mut R) -> (ToricObject, CharacterPoint) {
    let obj = random_curated_object(field, gmax, rng);
    let chi0 = random_torsion_point(field, obj.torus().rank(), rng);
    if !rng.gen_bool(0.75) {
        return (obj, chi0);
    }
    let k = rng.gen_range(0..obj.atoms().len());
    let atoms = obj
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if i != k {
                return a.clone();
            }
            let f = a.lattice_map();
            let eta = (0..f.cols()).map(|j| chi0.monomial(&f.column(j)).inv().unwrap()).collect();
            Atom::new(field, obj.torus(), f.clone(), eta, a.shift()).unwrap()
        })
        .collect();
    (ToricObject::new(field, obj.torus(), atoms).unwrap(), chi0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearity::on_support;
    use crate::sampling::rng_for;

    #[test]
    fn generated_objects_are_curated_perverse_torsion() {
        let f = Field::default_prime();
        for i in 0..20 {
            let obj = random_curated_object(f, 3, &mut rng_for(3, i));
            assert!(obj.is_perverse() && obj.all_curated());
            assert!(obj.atoms().iter().all(Atom::is_torsion));
            assert!(obj.torus().g() <= 3);
        }
        assert_eq!(random_curated_object(f, 2, &mut rng_for(5, 0)), random_curated_object(f, 2, &mut rng_for(5, 0)));
    }

    #[test]
    fn linearity_cases_often_hit_a_support() {
        let f = Field::default_prime();
        let hits = (0..40)
            .filter(|&i| {
                let (obj, chi0) = random_linearity_case(f, 2, &mut rng_for(1, i));
                assert!(chi0.is_torsion());
                obj.atoms().iter().any(|a| on_support(a, &chi0))
            })
            .count();
        assert!(hits >= 20, "{hits}");
    }
}
