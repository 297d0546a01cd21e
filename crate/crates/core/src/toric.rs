//! The implementable sheaf class: finite direct sums of shifted pushforwards
//! `f_*(L_η)[m + s]` along finite maps of subtori `f: B → A`.
//!
//! An atom records the lattice map `F: π₁(B) = Z^{2m} → π₁(A) = Z^{2g}`, the
//! rank-one monodromy `η` of `L_η` on `B`, and an extra shift `s`. With
//! `s = 0` the atom is a perverse sheaf. Translations by points of `A` are not
//! recorded: they do not change any twisted cohomology dimension.

use std::fmt;

use crate::error::{malformed, precondition, Result};
use crate::exactlin::{Field, FieldElem};
use crate::laurent::CharacterPoint;
use crate::lattice::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusData {
    g: usize,
}

impl TorusData {
    pub fn new(g: usize) -> Result<TorusData> {
        if g == 0 {
            return Err(malformed("torus dimension g must be at least 1"));
        }
        Ok(TorusData { g })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// Rank of `π₁(A)`, i.e. the number of character coordinates.
    pub fn rank(&self) -> usize {
        2 * self.g
    }
}

/// Whether the lattice map is known to come from a subtorus of a product of
/// elliptic curves (`F = M ⊗ I₂`), or was merely asserted to be analytic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Analytic {
    Curated,
    Asserted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    m: usize,
    f: IntMatrix,
    eta: Vec<FieldElem>,
    shift: i32,
    analytic: Analytic,
}

/// Recovers `M` when `f = M ⊗ I₂`.
fn kronecker_factor(f: &IntMatrix) -> Option<IntMatrix> {
    if !f.rows().is_multiple_of(2) || !f.cols().is_multiple_of(2) {
        return None;
    }
    let (g, m) = (f.rows() / 2, f.cols() / 2);
    let mut out = IntMatrix::zeros(g, m);
    for a in 0..g {
        for b in 0..m {
            let x = f.get(2 * a, 2 * b);
            if f.get(2 * a + 1, 2 * b + 1) != x || f.get(2 * a, 2 * b + 1) != 0 || f.get(2 * a + 1, 2 * b) != 0 {
                return None;
            }
            out.set(a, b, x);
        }
    }
    Some(out)
}

impl Atom {
    /// General constructor from a raw lattice map `F` (shape `2g × 2m`).
    ///
    /// `F` must be injective over the rationals and stay injective over `field`
    /// (for `F_p`: no elementary divisor divisible by `p`). The atom is marked
    /// curated exactly when `F` has the Kronecker shape `M ⊗ I₂`.
    pub fn new(field: Field, torus: TorusData, f: IntMatrix, eta: Vec<FieldElem>, shift: i32) -> Result<Atom> {
        if f.rows() != torus.rank() {
            return Err(malformed(format!("lattice map has {} rows, expected 2g = {}", f.rows(), torus.rank())));
        }
        if !f.cols().is_multiple_of(2) {
            return Err(malformed("lattice map must have an even number 2m of columns"));
        }
        let m = f.cols() / 2;
        if m > torus.g() {
            return Err(malformed(format!("subtorus dimension {m} exceeds g = {}", torus.g())));
        }
        if eta.len() != 2 * m {
            return Err(malformed(format!("monodromy needs {} entries, got {}", 2 * m, eta.len())));
        }
        if eta.iter().any(|e| e.is_zero() || e.field() != field) {
            return Err(malformed("monodromy entries must be nonzero elements of the active field"));
        }
        if f.rank_over(Field::Rationals) != 2 * m {
            return Err(malformed("lattice map is not injective"));
        }
        if f.rank_over(field) != 2 * m {
            return Err(precondition(format!(
                "lattice map {f} loses rank over {field}: an elementary divisor is divisible by the characteristic"
            )));
        }
        let analytic = match kronecker_factor(&f) {
            Some(mm) if mm.rank_over(Field::Rationals) == m => Analytic::Curated,
            _ => Analytic::Asserted,
        };
        Ok(Atom { m, f, eta, shift, analytic })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lattice_map(&self) -> &IntMatrix {
        &self.f
    }

    pub fn eta(&self) -> &[FieldElem] {
        &self.eta
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn analytic(&self) -> Analytic {
        self.analytic
    }

    pub fn is_curated(&self) -> bool {
        self.analytic == Analytic::Curated
    }

    /// `(m, F, η^{-1}, −s)`.
    pub fn dual(&self) -> Atom {
        Atom {
            m: self.m,
            f: self.f.clone(),
            eta: self.eta.iter().map(|e| e.inv().unwrap()).collect(),
            shift: -self.shift,
            analytic: self.analytic,
        }
    }

    /// `f_*(L_η) ⊗ L_ψ = f_*(L_{η · (ψ∘F)})`.
    pub fn twist(&self, psi: &CharacterPoint) -> Atom {
        let pulled = psi.pullback(&self.f);
        Atom { eta: self.eta.iter().zip(pulled.coords()).map(|(a, b)| a * b).collect(), ..self.clone() }
    }

    pub fn shifted(&self, k: i32) -> Atom {
        Atom { shift: self.shift + k, ..self.clone() }
    }

    /// Degree window `[−m−s, m−s]` of the Koszul model.
    pub fn window(&self) -> (i32, i32) {
        let m = self.m as i32;
        (-m - self.shift, m - self.shift)
    }

    pub fn is_torsion(&self) -> bool {
        self.eta.iter().all(|e| e.multiplicative_order().is_some())
    }
}

/// Constructor for the curated class: `F = M ⊗ I₂` for an integer `g × m` matrix `M` of rank `m`.
pub fn make_curated_atom(field: Field, torus: TorusData, mm: &IntMatrix, eta: Vec<FieldElem>, shift: i32) -> Result<Atom> {
    if mm.rows() != torus.g() {
        return Err(malformed(format!("M must have g = {} rows, got {}", torus.g(), mm.rows())));
    }
    if mm.rank_over(Field::Rationals) != mm.cols() {
        return Err(malformed(format!("M = {mm} is rank-deficient")));
    }
    let atom = Atom::new(field, torus, mm.kron_identity(2), eta, shift)?;
    debug_assert!(atom.is_curated());
    Ok(atom)
}

/// The skyscraper `δ₀[s]`.
pub fn skyscraper(field: Field, torus: TorusData, shift: i32) -> Atom {
    Atom::new(field, torus, IntMatrix::zeros(torus.rank(), 0), vec![], shift).expect("skyscraper is always valid")
}

/// The constant perverse sheaf `k[g]`, twisted by the monodromy `η`.
pub fn constant_sheaf(field: Field, torus: TorusData, eta: Vec<FieldElem>) -> Result<Atom> {
    make_curated_atom(field, torus, &IntMatrix::identity(torus.g()), eta, 0)
}

/// A finite direct sum of atoms on a fixed torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricObject {
    field: Field,
    torus: TorusData,
    atoms: Vec<Atom>,
}

impl ToricObject {
    pub fn new(field: Field, torus: TorusData, atoms: Vec<Atom>) -> Result<ToricObject> {
        for (i, a) in atoms.iter().enumerate() {
            if a.f.rows() != torus.rank() {
                return Err(malformed(format!("atom {i} lives on a torus of a different dimension")));
            }
            if a.eta.iter().any(|e| e.field() != field) {
                return Err(malformed(format!("atom {i} has monodromy over a different field")));
            }
        }
        Ok(ToricObject { field, torus, atoms })
    }

    pub fn zero(field: Field, torus: TorusData) -> ToricObject {
        ToricObject { field, torus, atoms: vec![] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn torus(&self) -> TorusData {
        self.torus
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// True iff every atom has `s = 0`; the zero object is perverse.
    pub fn is_perverse(&self) -> bool {
        self.atoms.iter().all(|a| a.shift == 0)
    }

    pub fn all_curated(&self) -> bool {
        self.atoms.iter().all(Atom::is_curated)
    }

    pub fn verdier_dual(&self) -> ToricObject {
        ToricObject { atoms: self.atoms.iter().map(Atom::dual).collect(), ..self.clone() }
    }

    pub fn direct_sum(&self, other: &ToricObject) -> Result<ToricObject> {
        if self.torus != other.torus || self.field != other.field {
            return Err(malformed("direct sum of objects on different tori or fields"));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Ok(ToricObject { atoms, ..self.clone() })
    }

    pub fn shifted(&self, k: i32) -> ToricObject {
        ToricObject { atoms: self.atoms.iter().map(|a| a.shifted(k)).collect(), ..self.clone() }
    }

    /// `M ⊗ L_ψ`.
    pub fn twist(&self, psi: &CharacterPoint) -> ToricObject {
        assert_eq!(psi.len(), self.torus.rank());
        ToricObject { atoms: self.atoms.iter().map(|a| a.twist(psi)).collect(), ..self.clone() }
    }

    pub fn push(&mut self, atom: Atom) -> Result<()> {
        if atom.f.rows() != self.torus.rank() {
            return Err(malformed("atom lives on a torus of a different dimension"));
        }
        self.atoms.push(atom);
        Ok(())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eta: Vec<String> = self.eta.iter().map(|e| e.to_string()).collect();
        write!(f, "atom(m={}, F={}, eta=({}), s={})", self.m, self.f, eta.join(","), self.shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(field: Field, n: usize) -> Vec<FieldElem> {
        vec![field.one(); n]
    }

    #[test]
    fn curated_constructor_examples() {
        let q = Field::Rationals;
        let e = TorusData::new(1).unwrap();
        let k1 = make_curated_atom(q, e, &IntMatrix::identity(1), ones(q, 2), 0).unwrap();
        assert_eq!(k1.m(), 1);
        assert_eq!(k1.window(), (-1, 1));
        assert!(k1.is_curated());

        let e2 = TorusData::new(2).unwrap();
        let diag = IntMatrix::from_rows(&[vec![1], vec![1]], 1).unwrap();
        let a = make_curated_atom(q, e2, &diag, ones(q, 2), 0).unwrap();
        assert_eq!(a.lattice_map().column(0), vec![1, 0, 1, 0]);
        assert_eq!(a.lattice_map().column(1), vec![0, 1, 0, 1]);

        let d = make_curated_atom(q, e, &IntMatrix::zeros(1, 0), vec![], 0).unwrap();
        assert_eq!(d.m(), 0);
        assert_eq!(d.window(), (0, 0));
    }

    #[test]
    fn rank_deficient_rejected() {
        let q = Field::Rationals;
        let e2 = TorusData::new(2).unwrap();
        let mm = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]], 2).unwrap();
        assert!(make_curated_atom(q, e2, &mm, ones(q, 4), 0).is_err());
    }

    #[test]
    fn bad_prime_detected() {
        let f = Field::prime(3).unwrap();
        let e = TorusData::new(1).unwrap();
        let mm = IntMatrix::from_rows(&[vec![3]], 1).unwrap();
        let err = make_curated_atom(f, e, &mm, ones(f, 2), 0).unwrap_err();
        assert!(matches!(err, crate::error::Error::Precondition(_)));
    }

    #[test]
    fn asserted_classification() {
        let q = Field::Rationals;
        let e2 = TorusData::new(2).unwrap();
        // a lattice map mixing real directions: not of Kronecker shape
        let f = IntMatrix::from_columns(4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 0]]);
        let a = Atom::new(q, e2, f, ones(q, 2), 0).unwrap();
        assert_eq!(a.analytic(), Analytic::Asserted);
    }

    #[test]
    fn perversity_and_duality() {
        let q = Field::Rationals;
        let e = TorusData::new(1).unwrap();
        let eta = vec![q.from_i64(2), q.from_i64(3)];
        let a = constant_sheaf(q, e, eta).unwrap();
        let obj = ToricObject::new(q, e, vec![a.clone()]).unwrap();
        assert!(obj.is_perverse());
        assert!(!ToricObject::new(q, e, vec![a.shifted(1)]).unwrap().is_perverse());
        assert!(ToricObject::zero(q, e).is_perverse());

        let d = obj.verdier_dual();
        assert_eq!(d.atoms()[0].eta(), &[q.parse_elem("1/2").unwrap(), q.parse_elem("1/3").unwrap()]);
        assert!(d.is_perverse());
        assert_eq!(d.verdier_dual(), obj);

        let sky = ToricObject::new(q, e, vec![skyscraper(q, e, 0)]).unwrap();
        assert_eq!(sky.verdier_dual(), sky);
    }

    #[test]
    fn twist_multiplies_monodromy() {
        let q = Field::Rationals;
        let e2 = TorusData::new(2).unwrap();
        let diag = IntMatrix::from_rows(&[vec![1], vec![1]], 1).unwrap();
        let a = make_curated_atom(q, e2, &diag, ones(q, 2), 0).unwrap();
        let psi = CharacterPoint::from_i64(q, &[2, 3, 5, 7]).unwrap();
        assert_eq!(a.twist(&psi).eta(), &[q.from_i64(10), q.from_i64(21)]);
    }
}
