//! Both sides of the duality criterion for complexes `⊕_j M_j[−d_j]` over a
//! polynomial ring: `RHom(C, S) ∈ D^{≥0}` iff `codim Supp H^i(C) ≥ i` for all `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{malformed, Result};
use crate::exactlin::Field;

use super::ideal::PolyIdeal;
use super::module::GradedModulePresentation;
use super::resolution::ext_modules;

/// `⊕_j M_j[−d_j]`: module `M_j` placed in cohomological degree `d_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedModuleComplex {
    nvars: usize,
    pieces: Vec<(GradedModulePresentation, i32)>,
}

impl ShiftedModuleComplex {
    pub fn new(nvars: usize, pieces: Vec<(GradedModulePresentation, i32)>) -> Result<ShiftedModuleComplex> {
        if pieces.iter().any(|(m, _)| m.nvars() != nvars) {
            return Err(malformed("all modules of a complex must live over the same ring"));
        }
        Ok(ShiftedModuleComplex { nvars, pieces })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn pieces(&self) -> &[(GradedModulePresentation, i32)] {
        &self.pieces
    }
}

impl fmt::Display for ShiftedModuleComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pieces.iter().map(|(m, d)| format!("{m} in degree {d}")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityLemmaReport {
    /// `codim Supp H^i(C)` per degree with `H^i ≠ 0`.
    pub support_codims: BTreeMap<i32, usize>,
    /// Degrees in which `RHom(C, S)` has cohomology.
    pub dual_degrees: BTreeSet<i32>,
    /// `codim Supp H^i ≥ i` for every `i`.
    pub support_side: bool,
    /// `RHom(C, S) ∈ D^{≥0}`.
    pub dual_side: bool,
    /// Fitting-ideal and initial-module dimensions agree for every piece.
    pub dimensions_agree: bool,
}

impl DualityLemmaReport {
    pub fn biconditional_holds(&self) -> bool {
        self.support_side == self.dual_side
    }

    pub fn passed(&self) -> bool {
        self.biconditional_holds() && self.dimensions_agree
    }
}

pub fn verify_duality_lemma(c: &ShiftedModuleComplex) -> Result<DualityLemmaReport> {
    let n = c.nvars;
    let mut support_codims: BTreeMap<i32, usize> = BTreeMap::new();
    let mut dual_degrees = BTreeSet::new();
    let mut dimensions_agree = true;
    for (m, d) in &c.pieces {
        let codim = m.support_codim();
        let dim = m.initial_module_dim();
        dimensions_agree &= codim.map(|c| n - c) == dim;
        if let Some(cd) = codim {
            let e = support_codims.entry(*d).or_insert(cd);
            *e = (*e).min(cd);
        }
        // Ext^e(M_j, S) sits in degree e − d_j of RHom(M_j[−d_j], S)
        for e in ext_modules(m)?.nonzero() {
            dual_degrees.insert(e as i32 - d);
        }
    }
    let support_side = support_codims.iter().all(|(&i, &cd)| cd as i64 >= i as i64);
    let dual_side = dual_degrees.iter().all(|&e| e >= 0);
    Ok(DualityLemmaReport { support_codims, dual_degrees, support_side, dual_side, dimensions_agree })
}

/// Named complexes over `k[x,y]` and `k[x,y,z]` exercising both truth values
/// of the criterion.
pub fn curated_duality_suite(field: Field) -> Vec<(String, ShiftedModuleComplex)> {
    let xy = ["x", "y"];
    let xyz = ["x", "y", "z"];
    let cyc = |vars: &[&str], gens: &[&str]| {
        GradedModulePresentation::cyclic(&PolyIdeal::parse(field, vars, gens).unwrap()).unwrap()
    };
    let free = |n: usize| GradedModulePresentation::free(field, n, 1);
    let res = |n: usize| GradedModulePresentation::residue_field(field, n);
    let one = |name: &str, n: usize, m: GradedModulePresentation, d: i32| {
        (name.to_string(), ShiftedModuleComplex::new(n, vec![(m, d)]).unwrap())
    };
    vec![
        one("S/(x) in degree 0", 2, cyc(&xy, &["x"]), 0),
        one("S in degree 1", 2, free(2), 1),
        one("k in degree 0", 2, res(2), 0),
        one("k in degree 2", 2, res(2), 2),
        one("k in degree 3", 2, res(2), 3),
        one("S/(x) in degree 2", 2, cyc(&xy, &["x"]), 2),
        one("S/(xy) in degree 1", 2, cyc(&xy, &["x*y"]), 1),
        one("S/(x^2,xy) in degree 1", 2, cyc(&xy, &["x^2", "x*y"]), 1),
        one("S/(x^2,xy) in degree 2", 2, cyc(&xy, &["x^2", "x*y"]), 2),
        one("S/(x,y) in degree 2 over k[x,y,z]", 3, cyc(&xyz, &["x", "y"]), 2),
        one("S/(x,y) in degree 3 over k[x,y,z]", 3, cyc(&xyz, &["x", "y"]), 3),
        one("k in degree 3 over k[x,y,z]", 3, res(3), 3),
        (
            "S in degree 0 plus k in degree 1".to_string(),
            ShiftedModuleComplex::new(2, vec![(free(2), 0), (res(2), 1)]).unwrap(),
        ),
        (
            "S/(x) in degree 1 plus S/(x,y) in degree 3 over k[x,y,z]".to_string(),
            ShiftedModuleComplex::new(3, vec![(cyc(&xyz, &["x"]), 1), (cyc(&xyz, &["x", "y"]), 3)]).unwrap(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_covers_both_truth_values() {
        let q = Field::Rationals;
        let mut seen = BTreeSet::new();
        for (name, c) in curated_duality_suite(q) {
            let r = verify_duality_lemma(&c).unwrap();
            assert!(r.passed(), "{name}: {r:?}");
            seen.insert(r.support_side);
        }
        assert_eq!(seen.len(), 2);
    }

    #[test]
    fn documented_cases() {
        let q = Field::Rationals;
        let suite = curated_duality_suite(q);
        let get = |n: &str| verify_duality_lemma(&suite.iter().find(|(m, _)| m == n).unwrap().1).unwrap();
        let r = get("S/(x) in degree 0");
        assert!(r.support_side && r.dual_side);
        assert_eq!(r.dual_degrees, BTreeSet::from([1]));
        let r = get("S in degree 1");
        assert!(!r.support_side && !r.dual_side);
        assert_eq!(r.dual_degrees, BTreeSet::from([-1]));
        let r = get("k in degree 0");
        assert_eq!(r.dual_degrees, BTreeSet::from([2]));
    }
}
