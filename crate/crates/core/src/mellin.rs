//! The Fourier–Mellin transform of toric objects and the checks built on it.
//!
//! For an atom `f_*(L_η)[m+s]` the transform is the Koszul complex over the
//! Laurent ring `R = k[x_1^{±1}, …, x_{2g}^{±1}]` on the elements `u_j − 1`,
//! `u_j = η_j x^{F_j}`, placed in degrees `[−m−s, m−s]`. Since `F` is injective
//! the `u_j − 1` form a regular sequence, so the complex has a single
//! cohomology module `R/(u_j − 1)` in degree `m − s`, supported on the
//! translated subtorus `Z = {x^{F_j} = η_j^{-1}}`.
//!
//! Derived fibres at a character `χ` are scalar Koszul complexes on
//! `u_j(χ) − 1`. The closed form is never trusted on its own: the cross-checks
//! below compare it against those fibres.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{malformed, precondition, Result};
use crate::exactlin::{sign, Field, FieldElem, FinComplex, Matrix};
use crate::exterior;
use crate::laurent::{CharacterPoint, LaurentPoly, MonomialUnit};
use crate::lattice::{hermite_with_targets, IntMatrix};
use crate::sampling::sample_characters;
use crate::toric::{Atom, ToricObject};

/// Koszul datum of one atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomKoszul {
    f: IntMatrix,
    eta: Vec<FieldElem>,
    lo: i32,
}

impl AtomKoszul {
    pub fn units(&self) -> Vec<MonomialUnit> {
        (0..self.f.cols()).map(|j| MonomialUnit::new(self.eta[j].clone(), self.f.column(j)).unwrap()).collect()
    }

    /// The Koszul elements `u_j − 1`.
    pub fn elements(&self) -> Vec<LaurentPoly> {
        self.units().iter().map(MonomialUnit::minus_one).collect()
    }

    pub fn len(&self) -> usize {
        self.f.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.f.cols() == 0
    }

    /// `[lo, hi]`, of width `2m`.
    pub fn window(&self) -> (i32, i32) {
        (self.lo, self.lo + self.f.cols() as i32)
    }

    pub fn lattice_map(&self) -> &IntMatrix {
        &self.f
    }

    /// The support `{x^{F_j} = η_j^{-1}}` of the unique cohomology module.
    pub fn support(&self) -> TranslatedSubtorus {
        let targets = self.eta.iter().map(|e| e.inv().unwrap()).collect();
        TranslatedSubtorus::new(self.f.clone(), targets).expect("atom lattice maps are injective")
    }
}

/// Koszul model of `FM_A(M)`: the direct sum of the atoms' Koszul complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMComplex {
    field: Field,
    nvars: usize,
    atoms: Vec<AtomKoszul>,
}

impl FMComplex {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn atoms(&self) -> &[AtomKoszul] {
        &self.atoms
    }

    /// `FM_A(M) ⊗^L_R κ(χ)` as a finite complex of `k`-vector spaces.
    pub fn fiber_complex(&self, chi: &CharacterPoint) -> FinComplex {
        assert_eq!(chi.len(), self.nvars, "character has the wrong number of coordinates");
        self.atoms.iter().fold(FinComplex::zero(self.field), |acc, a| {
            let scalars: Vec<FieldElem> = a.elements().iter().map(|u| u.eval(chi)).collect();
            acc.direct_sum(&scalar_koszul(self.field, &scalars, a.lo))
        })
    }
}

/// Koszul cochain complex `Λ^0 → Λ^1 → … → Λ^r` on scalars `a_1..a_r`,
/// `e_I ↦ Σ_j a_j e_j ∧ e_I`, with `Λ^0` in degree `lo`.
pub fn scalar_koszul(field: Field, scalars: &[FieldElem], lo: i32) -> FinComplex {
    let r = scalars.len();
    let dims: Vec<usize> = (0..=r).map(|p| exterior::basis(r, p).len()).collect();
    let diffs = (0..r).map(|p| exterior::left_mult_linear(field, r, p, scalars)).collect();
    FinComplex::new_unchecked(field, lo, dims, diffs).expect("Koszul shapes are consistent")
}

pub fn fm(obj: &ToricObject) -> FMComplex {
    let atoms = obj
        .atoms()
        .iter()
        .map(|a| AtomKoszul { f: a.lattice_map().clone(), eta: a.eta().to_vec(), lo: a.window().0 })
        .collect();
    FMComplex { field: obj.field(), nvars: obj.torus().rank(), atoms }
}

/// `dim H^i(A, M ⊗ L_χ)` for every degree with nonzero cohomology.
pub fn fiber_dims(c: &FMComplex, chi: &CharacterPoint) -> BTreeMap<i32, usize> {
    c.fiber_complex(chi).nonzero_cohomology()
}

/// Translated subtorus `{χ : χ^{F_j} = t_j}` with `F` injective.
///
/// Stored in Hermite normal form so that two descriptions of the same locus
/// compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TranslatedSubtorus {
    f: IntMatrix,
    targets: Vec<FieldElem>,
}

impl TranslatedSubtorus {
    pub fn new(f: IntMatrix, targets: Vec<FieldElem>) -> Result<TranslatedSubtorus> {
        if f.cols() != targets.len() {
            return Err(malformed("one target per equation required"));
        }
        if targets.iter().any(FieldElem::is_zero) {
            return Err(malformed("subtorus targets must be nonzero"));
        }
        if f.rank_over(Field::Rationals) != f.cols() {
            return Err(malformed("subtorus equations must be independent"));
        }
        let (f, targets) = hermite_with_targets(&f, &targets);
        Ok(TranslatedSubtorus { f, targets })
    }

    /// The whole character torus of rank `n` (no equations).
    pub fn full(n: usize) -> TranslatedSubtorus {
        TranslatedSubtorus { f: IntMatrix::zeros(n, 0), targets: vec![] }
    }

    pub fn codim(&self) -> usize {
        self.f.cols()
    }

    pub fn ambient_rank(&self) -> usize {
        self.f.rows()
    }

    pub fn equations(&self) -> &IntMatrix {
        &self.f
    }

    pub fn targets(&self) -> &[FieldElem] {
        &self.targets
    }

    /// `χ ∈ Z` iff `χ^{F_j} = t_j` for all `j`; vacuous without equations.
    pub fn contains(&self, chi: &CharacterPoint) -> bool {
        assert_eq!(chi.len(), self.f.rows());
        (0..self.f.cols()).all(|j| chi.monomial(&self.f.column(j)) == self.targets[j])
    }

    /// `inv^* Z = {χ : χ^{-1} ∈ Z} = {χ^{F_j} = t_j^{-1}}`.
    pub fn inverse(&self) -> TranslatedSubtorus {
        TranslatedSubtorus::new(self.f.clone(), self.targets.iter().map(|t| t.inv().unwrap()).collect()).unwrap()
    }
}

/// `subtorus_membership`.
pub fn subtorus_membership(z: &TranslatedSubtorus, chi: &CharacterPoint) -> bool {
    z.contains(chi)
}

impl fmt::Display for TranslatedSubtorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.cols() == 0 {
            return write!(f, "Char(A)");
        }
        let eqs: Vec<String> = (0..self.f.cols())
            .map(|j| {
                let mono: Vec<String> = self
                    .f
                    .column(j)
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(i, &a)| if a == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, a) })
                    .collect();
                format!("{}={}", mono.join("*"), self.targets[j])
            })
            .collect();
        write!(f, "{{{}}}", eqs.join(", "))
    }
}

/// `S^i` for every degree, as sets of translated subtori.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportLoci {
    by_degree: BTreeMap<i32, BTreeSet<TranslatedSubtorus>>,
}

impl SupportLoci {
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn components(&self, i: i32) -> Vec<&TranslatedSubtorus> {
        self.by_degree.get(&i).map(|s| s.iter().collect()).unwrap_or_default()
    }

    /// Codimension of `S^i`; `None` for the empty locus.
    pub fn codim(&self, i: i32) -> Option<usize> {
        self.by_degree.get(&i).and_then(|s| s.iter().map(|z| z.codim()).min())
    }

    pub fn contains(&self, i: i32, chi: &CharacterPoint) -> bool {
        self.by_degree.get(&i).is_some_and(|s| s.iter().any(|z| z.contains(chi)))
    }

    /// Componentwise image under `χ ↦ χ^{-1}`.
    pub fn inverse(&self) -> SupportLoci {
        SupportLoci {
            by_degree: self.by_degree.iter().map(|(&i, s)| (i, s.iter().map(|z| z.inverse()).collect())).collect(),
        }
    }

    /// Reindexes `i ↦ −i`.
    pub fn negate_degrees(&self) -> SupportLoci {
        SupportLoci { by_degree: self.by_degree.iter().map(|(&i, s)| (-i, s.clone())).collect() }
    }
}

impl fmt::Display for SupportLoci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in &self.by_degree {
            let comps: Vec<String> = s.iter().map(|z| z.to_string()).collect();
            writeln!(f, "S^{i}: {}", comps.join(" ∪ "))?;
        }
        Ok(())
    }
}

/// `H^i(FM)` as a list of cyclic modules `R/I_Z` per degree (direct sums concatenate).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CohomologyModuleTable {
    entries: BTreeMap<i32, Vec<TranslatedSubtorus>>,
}

impl CohomologyModuleTable {
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.entries.keys().copied()
    }

    pub fn modules(&self, i: i32) -> &[TranslatedSubtorus] {
        self.entries.get(&i).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Codimension of `Supp H^i`; `None` when `H^i = 0`.
    pub fn support_codim(&self, i: i32) -> Option<usize> {
        self.entries.get(&i).and_then(|v| v.iter().map(|z| z.codim()).min())
    }

    pub fn inverse(&self) -> CohomologyModuleTable {
        CohomologyModuleTable {
            entries: self.entries.iter().map(|(&i, v)| (i, v.iter().map(|z| z.inverse()).collect())).collect(),
        }
    }

    /// Dimensions of `H^*(H ⊗^L_R κ(χ))` predicted from the module list alone.
    ///
    /// `R/I_Z` is a complete intersection of codimension `c`, so
    /// `Tor_j(R/I_Z, κ(χ))` has dimension `binom(c, j)` when `χ ∈ Z` and
    /// vanishes otherwise; `Tor_j` contributes to degree `i − j`.
    pub fn derived_fiber_prediction(&self, chi: &CharacterPoint) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (&i, zs) in &self.entries {
            for z in zs {
                if !z.contains(chi) {
                    continue;
                }
                let c = z.codim();
                let mut b = 1usize;
                for j in 0..=c {
                    *out.entry(i - j as i32).or_insert(0) += b;
                    b = b * (c - j) / (j + 1);
                }
            }
        }
        out
    }
}

/// Closed-form cohomology modules of `FM`.
///
/// Fails when an atom's lattice map is not injective over `k`, where the
/// Koszul elements stop being a regular sequence.
pub fn cohomology_modules(c: &FMComplex) -> Result<CohomologyModuleTable> {
    let mut entries: BTreeMap<i32, Vec<TranslatedSubtorus>> = BTreeMap::new();
    for (idx, a) in c.atoms.iter().enumerate() {
        if a.f.rank_over(c.field) != a.f.cols() {
            return Err(precondition(format!("atom {idx}: lattice map is not injective over {}", c.field)));
        }
        entries.entry(a.window().1).or_default().push(a.support());
    }
    Ok(CohomologyModuleTable { entries })
}

/// `S^i = ⋃ Z_atom` over atoms whose window contains `i`.
pub fn support_loci(obj: &ToricObject) -> SupportLoci {
    let c = fm(obj);
    let mut by_degree: BTreeMap<i32, BTreeSet<TranslatedSubtorus>> = BTreeMap::new();
    for a in &c.atoms {
        let (lo, hi) = a.window();
        let z = a.support();
        for i in lo..=hi {
            by_degree.entry(i).or_default().insert(z.clone());
        }
    }
    SupportLoci { by_degree }
}

/// A character together with a degree where its fibre cohomology is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberWitness {
    pub chi: CharacterPoint,
    pub degree: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericVanishingReport {
    pub samples: usize,
    /// Nonzero `H^{i≠0}` at characters lying in `S^i`.
    pub explained: Vec<FiberWitness>,
    /// Nonzero `H^{i≠0}` at characters outside `S^i`; must be empty.
    pub unexplained: Vec<FiberWitness>,
}

impl GenericVanishingReport {
    pub fn passed(&self) -> bool {
        self.unexplained.is_empty()
    }
}

/// Samples `samples` characters (seeds `seed + index`) and checks that every
/// nonvanishing `H^{i≠0}` of the fibre lies in `S^i`.
pub fn generic_vanishing_check(obj: &ToricObject, samples: usize, seed: u64) -> Result<GenericVanishingReport> {
    let chis = sample_characters(obj.field(), obj.torus().rank(), samples, seed);
    generic_vanishing_at(obj, &chis)
}

/// [`generic_vanishing_check`] at explicitly given characters.
pub fn generic_vanishing_at(obj: &ToricObject, chis: &[CharacterPoint]) -> Result<GenericVanishingReport> {
    if !obj.is_perverse() {
        return Err(precondition("generic vanishing requires a perverse object (all shifts 0)"));
    }
    let c = fm(obj);
    let loci = support_loci(obj);
    let mut report = GenericVanishingReport { samples: chis.len(), explained: vec![], unexplained: vec![] };
    for chi in chis {
        for (i, d) in fiber_dims(&c, chi) {
            if i == 0 {
                continue;
            }
            let w = FiberWitness { chi: chi.clone(), degree: i, dim: d };
            if loci.contains(i, chi) {
                report.explained.push(w);
            } else {
                report.unexplained.push(w);
            }
        }
    }
    Ok(report)
}

/// One inequality `codim ≥ bound` at one degree. An empty locus has infinite
/// codimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimCheck {
    pub name: &'static str,
    pub degree: i32,
    pub codim: Option<usize>,
    pub bound: i64,
}

impl CodimCheck {
    pub fn holds(&self) -> bool {
        self.codim.is_none_or(|c| c as i64 >= self.bound)
    }

    pub fn is_equality(&self) -> bool {
        self.codim.is_some_and(|c| c as i64 == self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimReport {
    pub checks: Vec<CodimCheck>,
    /// Degrees `i < 0` with `H^i(FM) ≠ 0`.
    pub negative_degrees: Vec<i32>,
}

impl CodimReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CodimCheck::holds) && self.negative_degrees.is_empty()
    }

    pub fn equality_witnesses(&self) -> impl Iterator<Item = &CodimCheck> {
        self.checks.iter().filter(|c| c.is_equality())
    }
}

/// `D_R FM(M) ≃ inv^* FM(D M)`: cohomology modules of the `R`-dual transform.
pub fn dual_cohomology_modules(obj: &ToricObject) -> Result<CohomologyModuleTable> {
    Ok(cohomology_modules(&fm(&obj.verdier_dual()))?.inverse())
}

/// Codimension bounds for perverse objects built from curated atoms:
/// `codim S^i ≥ |2i|`, `codim Supp H^i(FM) ≥ 2i` and `≥ i`,
/// `codim Supp H^i(D_R FM) ≥ 2i`, and `H^{<0}(FM) = 0`.
pub fn verify_codim_bounds(obj: &ToricObject) -> Result<CodimReport> {
    if let Some((i, _)) = obj.atoms().iter().enumerate().find(|(_, a)| !a.is_curated()) {
        return Err(precondition(format!(
            "atom {i} is only asserted to be analytic; codimension bounds need the abelian-variety class"
        )));
    }
    if !obj.is_perverse() {
        return Err(precondition("codimension bounds require a perverse object"));
    }
    let loci = support_loci(obj);
    let table = cohomology_modules(&fm(obj))?;
    let dual = dual_cohomology_modules(obj)?;
    let mut checks = Vec::new();
    for i in loci.degrees() {
        checks.push(CodimCheck { name: "S^i", degree: i, codim: loci.codim(i), bound: 2 * (i as i64).abs() });
    }
    for i in table.degrees() {
        checks.push(CodimCheck { name: "Supp H^i(FM)", degree: i, codim: table.support_codim(i), bound: 2 * i as i64 });
        checks.push(CodimCheck { name: "Supp H^i(FM) weak", degree: i, codim: table.support_codim(i), bound: i as i64 });
    }
    for i in dual.degrees() {
        checks.push(CodimCheck { name: "Supp H^i(D_R FM)", degree: i, codim: dual.support_codim(i), bound: 2 * i as i64 });
    }
    let negative_degrees = table.degrees().filter(|&i| i < 0).collect();
    Ok(CodimReport { checks, negative_degrees })
}

/// `χ(A, M) = Σ_atoms (−1)^s [m = 0]`: only skyscrapers have nonzero Euler characteristic.
pub fn euler_characteristic(obj: &ToricObject) -> i64 {
    obj.atoms().iter().filter(|a| a.m() == 0).map(|a| sign(a.shift())).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub closed_form: i64,
    pub sampled: Vec<(CharacterPoint, i64)>,
    /// Some sampled fibre has no cohomology at all.
    pub some_fiber_vanishes: bool,
    pub perverse: bool,
}

impl EulerReport {
    pub fn constant(&self) -> bool {
        self.sampled.iter().all(|(_, e)| *e == self.closed_form)
    }

    /// `χ ≥ 0`, only asserted for perverse objects.
    pub fn nonnegative(&self) -> bool {
        !self.perverse || self.closed_form >= 0
    }

    /// `χ = 0 ⟺ some sampled generic fibre vanishes`, for perverse objects.
    pub fn zero_iff_vanishing(&self) -> bool {
        !self.perverse || (self.closed_form == 0) == self.some_fiber_vanishes
    }

    pub fn passed(&self) -> bool {
        self.constant() && self.nonnegative() && self.zero_iff_vanishing()
    }
}

pub fn euler_check(obj: &ToricObject, samples: usize, seed: u64) -> EulerReport {
    let c = fm(obj);
    let mut sampled = Vec::new();
    let mut some_fiber_vanishes = false;
    for chi in sample_characters(obj.field(), obj.torus().rank(), samples, seed) {
        let fc = c.fiber_complex(&chi);
        let h = fc.nonzero_cohomology();
        some_fiber_vanishes |= h.is_empty();
        let e = h.iter().map(|(&i, &d)| sign(i) * d as i64).sum();
        sampled.push((chi, e));
    }
    EulerReport { closed_form: euler_characteristic(obj), sampled, some_fiber_vanishes, perverse: obj.is_perverse() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDualityMismatch {
    pub chi: CharacterPoint,
    pub degree: i32,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    /// Degrees where `S^i(M) ≠ inv^* S^{−i}(D M)`.
    pub locus_mismatches: Vec<i32>,
    pub fiber_mismatches: Vec<FiberDualityMismatch>,
    pub samples: usize,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.locus_mismatches.is_empty() && self.fiber_mismatches.is_empty()
    }
}

/// `S^i(M) = inv^* S^{−i}(D M)` componentwise, and
/// `dim H^i(M ⊗ L_χ) = dim H^{−i}(D M ⊗ L_{χ^{-1}})` at sampled characters.
pub fn duality_checks(obj: &ToricObject, samples: usize, seed: u64) -> DualityReport {
    let dual = obj.verdier_dual();
    let lhs = support_loci(obj);
    let rhs = support_loci(&dual).negate_degrees().inverse();
    let degrees: BTreeSet<i32> = lhs.degrees().chain(rhs.degrees()).collect();
    let locus_mismatches = degrees.into_iter().filter(|&i| lhs.components(i) != rhs.components(i)).collect();

    let c = fm(obj);
    let cd = fm(&dual);
    let mut fiber_mismatches = Vec::new();
    for chi in sample_characters(obj.field(), obj.torus().rank(), samples, seed) {
        let a = fiber_dims(&c, &chi);
        let b = fiber_dims(&cd, &chi.inverse());
        let degrees: BTreeSet<i32> = a.keys().copied().chain(b.keys().map(|i| -i)).collect();
        for i in degrees {
            let (l, r) = (a.get(&i).copied().unwrap_or(0), b.get(&-i).copied().unwrap_or(0));
            if l != r {
                fiber_mismatches.push(FiberDualityMismatch { chi: chi.clone(), degree: i, lhs: l, rhs: r });
            }
        }
    }
    DualityReport { locus_mismatches, fiber_mismatches, samples }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzReport {
    pub m: usize,
    /// `(i, rank of ω^i : Λ^{m−i} → Λ^{m+i}, dimension of Λ^{m−i})`.
    pub ranks: Vec<(usize, usize, usize)>,
}

impl LefschetzReport {
    pub fn passed(&self) -> bool {
        self.ranks.iter().all(|&(_, r, d)| r == d)
    }
}

/// `ω^i` for `ω = Σ_k e_{2k} ∧ e_{2k+1}` in `Λ(k^{2m})`.
pub fn symplectic_power(field: Field, m: usize, i: usize) -> Vec<(u32, FieldElem)> {
    let omega: Vec<(u32, FieldElem)> = (0..m).map(|k| (0b11u32 << (2 * k), field.one())).collect();
    let mut acc = vec![(0u32, field.one())];
    for _ in 0..i {
        acc = exterior::product(field, &acc, &omega);
    }
    acc
}

/// Matrix of `∧ω^i : Λ^{m−i} W_B → Λ^{m+i} W_B`.
pub fn lefschetz_matrix(field: Field, m: usize, i: usize) -> Matrix {
    exterior::left_mult(field, 2 * m, m - i, 2 * i, &symplectic_power(field, m, i))
}

/// Hard Lefschetz on the fibre cohomology `Λ(W_B)` of a curated atom at a
/// character of its support.
pub fn hard_lefschetz_check(field: Field, atom: &Atom, chi: &CharacterPoint) -> Result<LefschetzReport> {
    if !atom.is_curated() {
        return Err(precondition("hard Lefschetz is checked on curated atoms only"));
    }
    let z = TranslatedSubtorus::new(atom.lattice_map().clone(), atom.eta().iter().map(|e| e.inv().unwrap()).collect())?;
    if !z.contains(chi) {
        return Err(precondition(format!("character {chi} is not on the support {z}")));
    }
    let m = atom.m();
    let ranks = (0..=m)
        .map(|i| {
            let mat = lefschetz_matrix(field, m, i);
            (i, mat.rank(), mat.cols())
        })
        .collect();
    Ok(LefschetzReport { m, ranks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::{constant_sheaf, make_curated_atom, skyscraper, TorusData};

    fn q() -> Field {
        Field::Rationals
    }

    fn ones(f: Field, n: usize) -> Vec<FieldElem> {
        vec![f.one(); n]
    }

    fn k1_on_e(f: Field) -> ToricObject {
        let e = TorusData::new(1).unwrap();
        ToricObject::new(f, e, vec![constant_sheaf(f, e, ones(f, 2)).unwrap()]).unwrap()
    }

    fn diagonal(f: Field) -> ToricObject {
        let e2 = TorusData::new(2).unwrap();
        let mm = IntMatrix::from_rows(&[vec![1], vec![1]], 1).unwrap();
        ToricObject::new(f, e2, vec![make_curated_atom(f, e2, &mm, ones(f, 2), 0).unwrap()]).unwrap()
    }

    #[test]
    fn fm_examples() {
        let c = fm(&k1_on_e(q()));
        let el = c.atoms()[0].elements();
        assert_eq!(el[0].to_string(), "x1 + -1");
        assert_eq!(el[1].to_string(), "x2 + -1");
        assert_eq!(c.atoms()[0].window(), (-1, 1));

        let d = fm(&diagonal(q()));
        assert_eq!(d.atoms()[0].elements()[0].to_string(), "x1*x3 + -1");
        assert_eq!(d.atoms()[0].elements()[1].to_string(), "x2*x4 + -1");

        let e = TorusData::new(1).unwrap();
        let sky = ToricObject::new(q(), e, vec![skyscraper(q(), e, 0)]).unwrap();
        let s = fm(&sky);
        assert!(s.atoms()[0].is_empty());
        assert_eq!(s.atoms()[0].window(), (0, 0));
    }

    #[test]
    fn fiber_dims_examples() {
        let c = fm(&k1_on_e(q()));
        let triv = CharacterPoint::trivial(q(), 2);
        assert_eq!(fiber_dims(&c, &triv), BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
        let chi = CharacterPoint::from_i64(q(), &[2, 1]).unwrap();
        assert!(fiber_dims(&c, &chi).is_empty());
    }

    #[test]
    fn cohomology_module_examples() {
        let t = cohomology_modules(&fm(&k1_on_e(q()))).unwrap();
        assert_eq!(t.degrees().collect::<Vec<_>>(), vec![1]);
        assert_eq!(t.support_codim(1), Some(2));

        let e = TorusData::new(1).unwrap();
        let sky = ToricObject::new(q(), e, vec![skyscraper(q(), e, 0)]).unwrap();
        let t = cohomology_modules(&fm(&sky)).unwrap();
        assert_eq!(t.support_codim(0), Some(0));

        let shifted = k1_on_e(q()).shifted(1);
        let t = cohomology_modules(&fm(&shifted)).unwrap();
        assert_eq!(t.degrees().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn support_loci_of_twisted_constant_sheaf() {
        let f = Field::default_prime();
        let e = TorusData::new(1).unwrap();
        let obj = ToricObject::new(f, e, vec![constant_sheaf(f, e, vec![f.from_i64(3), f.from_i64(5)]).unwrap()]).unwrap();
        let loci = support_loci(&obj);
        let point = CharacterPoint::new(f, vec![f.from_i64(3).inv().unwrap(), f.from_i64(5).inv().unwrap()]).unwrap();
        for i in -1..=1 {
            let comps = loci.components(i);
            assert_eq!(comps.len(), 1);
            assert_eq!(comps[0].codim(), 2);
            assert!(comps[0].contains(&point));
        }
        assert!(loci.components(2).is_empty());
    }

    #[test]
    fn membership_examples() {
        let z = diagonal(q()).atoms()[0].clone();
        let z = TranslatedSubtorus::new(z.lattice_map().clone(), ones(q(), 2)).unwrap();
        assert!(z.contains(&CharacterPoint::trivial(q(), 4)));
        assert!(!z.contains(&CharacterPoint::from_i64(q(), &[2, 1, 1, 1]).unwrap()));
        assert!(TranslatedSubtorus::full(4).contains(&CharacterPoint::from_i64(q(), &[2, 1, 1, 1]).unwrap()));
    }

    #[test]
    fn euler_examples() {
        let e = TorusData::new(1).unwrap();
        let f = q();
        let obj = ToricObject::new(
            f,
            e,
            vec![skyscraper(f, e, 0), skyscraper(f, e, 0), constant_sheaf(f, e, ones(f, 2)).unwrap()],
        )
        .unwrap();
        assert_eq!(euler_characteristic(&obj), 2);
        assert_eq!(euler_characteristic(&k1_on_e(f)), 0);
        let r = euler_check(&k1_on_e(f), 5, 1);
        assert!(r.passed() && r.some_fiber_vanishes);
        let sky1 = ToricObject::new(f, e, vec![skyscraper(f, e, 1)]).unwrap();
        assert_eq!(euler_characteristic(&sky1), -1);
    }

    #[test]
    fn generic_vanishing_rejects_non_perverse() {
        let obj = k1_on_e(q()).shifted(1);
        assert!(generic_vanishing_check(&obj, 3, 0).is_err());
    }

    #[test]
    fn lefschetz_examples() {
        let f = q();
        let m1 = lefschetz_matrix(f, 1, 1);
        assert_eq!(m1.shape(), (1, 1));
        assert!(m1[(0, 0)].is_one());
        let m22 = lefschetz_matrix(f, 2, 2);
        assert_eq!((m22.shape(), m22.rank()), ((1, 1), 1));
        let m21 = lefschetz_matrix(f, 2, 1);
        assert_eq!((m21.shape(), m21.rank()), ((4, 4), 4));
    }

    #[test]
    fn lefschetz_rejects_off_support() {
        let f = q();
        let obj = k1_on_e(f);
        let chi = CharacterPoint::from_i64(f, &[2, 1]).unwrap();
        assert!(hard_lefschetz_check(f, &obj.atoms()[0], &chi).is_err());
        let triv = CharacterPoint::trivial(f, 2);
        assert!(hard_lefschetz_check(f, &obj.atoms()[0], &triv).unwrap().passed());
    }
}
