//! The completed stalk of the Fourier–Mellin transform at a torsion
//! character against the BGG complex of the cup-product module.
//!
//! Near `χ0` write `x_a = χ0_a (1 + v_a)`. Each Koszul element `u_j − 1`
//! becomes a power series in `v` whose constant term vanishes exactly when
//! `χ0` lies on the atom's support, and whose linear part is then
//! `Σ_a F_{aj} v_a`. The BGG side uses only those linear parts, so the two
//! complexes differ by a formal change of coordinates and have the same
//! cohomology modulo `m^N`.

use std::collections::{BTreeMap, HashMap};

use crate::bgg::{bgg_linear_complex, ExtAlgModule};
use crate::error::{malformed, precondition, Result};
use crate::exactlin::{Field, FieldElem, FinComplex, Matrix};
use crate::exterior;
use crate::laurent::{monomials_below, CharacterPoint, TruncatedSeries};
use crate::toric::{Atom, ToricObject};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionRequest {
    obj: ToricObject,
    chi0: CharacterPoint,
    order: usize,
}

impl CompletionRequest {
    pub fn new(obj: ToricObject, chi0: CharacterPoint, order: usize) -> Result<CompletionRequest> {
        if order == 0 {
            return Err(malformed("truncation order must be at least 1"));
        }
        if chi0.len() != obj.torus().rank() || chi0.field() != obj.field() {
            return Err(malformed(format!(
                "base point has {} coordinates over {}, expected {} over {}",
                chi0.len(),
                chi0.field(),
                obj.torus().rank(),
                obj.field()
            )));
        }
        if !obj.is_perverse() {
            return Err(precondition("object is not perverse: some atom has a nonzero shift"));
        }
        if let Some(i) = obj.atoms().iter().position(|a| !a.is_torsion()) {
            return Err(precondition(format!("atom {i} has non-torsion monodromy")));
        }
        if !chi0.is_torsion() {
            return Err(precondition(format!("base point {chi0} is not torsion")));
        }
        Ok(CompletionRequest { obj, chi0, order })
    }

    pub fn object(&self) -> &ToricObject {
        &self.obj
    }

    pub fn base_point(&self) -> &CharacterPoint {
        &self.chi0
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn with_order(&self, order: usize) -> CompletionRequest {
        CompletionRequest { order, ..self.clone() }
    }
}

/// `u_j − 1` expanded at `χ0`, modulo `m^N`.
pub fn completed_elements(atom: &Atom, chi0: &CharacterPoint, order: usize) -> Vec<TruncatedSeries> {
    let f = atom.lattice_map();
    (0..f.cols())
        .map(|j| {
            let unit = crate::laurent::MonomialUnit::new(atom.eta()[j].clone(), f.column(j)).unwrap();
            unit.minus_one().complete_at(chi0, order)
        })
        .collect()
}

/// Koszul cochain complex on `a_1..a_r ∈ S/m^N`, expanded over `k` with basis
/// `e_I ⊗ v^α` (index `I · #α + α`).
pub fn series_koszul(field: Field, nvars: usize, elements: &[TruncatedSeries], order: usize, lo: i32) -> FinComplex {
    let r = elements.len();
    let monos = monomials_below(nvars, order);
    let pos: HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let na = monos.len();
    let dims: Vec<usize> = (0..=r).map(|p| exterior::basis(r, p).len() * na).collect();
    let diffs = (0..r)
        .map(|p| {
            let src = exterior::basis(r, p);
            let dst = exterior::basis(r, p + 1);
            let mut d = Matrix::zeros(field, dst.len() * na, src.len() * na);
            for (si, &mask) in src.iter().enumerate() {
                for (j, a) in elements.iter().enumerate() {
                    let Some((s, out)) = exterior::wedge(1 << j, mask) else { continue };
                    let sgn = field.from_i64(s);
                    let di = exterior::index_of(&dst, out);
                    for (ai, alpha) in monos.iter().enumerate() {
                        for (e, c) in a.terms() {
                            let beta: Vec<u32> = alpha.iter().zip(e).map(|(x, y)| x + y).collect();
                            let Some(&bi) = pos.get(&beta) else { continue };
                            let (rr, cc) = (di * na + bi, si * na + ai);
                            d[(rr, cc)] = &d[(rr, cc)] + &(c * &sgn);
                        }
                    }
                }
            }
            d
        })
        .collect();
    FinComplex::new_unchecked(field, lo, dims, diffs).expect("Koszul shapes are consistent")
}

/// The completed stalk of `FM(obj)` at `χ0`, modulo `m^N`, as a finite complex over `k`.
pub fn completed_fm(req: &CompletionRequest) -> FinComplex {
    req.obj.atoms().iter().fold(FinComplex::zero(req.obj.field()), |acc, a| {
        acc.direct_sum(&completed_atom(a, req, req.order, false))
    })
}

fn completed_atom(atom: &Atom, req: &CompletionRequest, order: usize, linearize: bool) -> FinComplex {
    let mut els = completed_elements(atom, &req.chi0, order);
    if linearize {
        els = els.iter().map(TruncatedSeries::linear_truncation).collect();
    }
    series_koszul(req.obj.field(), req.obj.torus().rank(), &els, order, atom.window().0)
}

fn empty_module(field: Field, n: usize) -> ExtAlgModule {
    ExtAlgModule::new(field, n, 0, vec![], vec![vec![]; n]).unwrap()
}

/// `χ0 ∈ Z_atom`: every `u_j(χ0) = 1`.
pub fn on_support(atom: &Atom, chi0: &CharacterPoint) -> bool {
    let f = atom.lattice_map();
    (0..f.cols()).all(|j| (&atom.eta()[j] * &chi0.monomial(&f.column(j))).is_one())
}

/// `Λ(k^{2m})` in degrees `[−m−s, m−s]` with `w_a` acting by `Σ_j F_{aj} e_j ∧`,
/// or the zero module when `χ0 ∉ Z_atom`.
pub fn atom_cup_module(atom: &Atom, chi0: &CharacterPoint) -> ExtAlgModule {
    let field = chi0.field();
    let f = atom.lattice_map();
    let n = f.rows();
    if !on_support(atom, chi0) {
        return empty_module(field, n);
    }
    let r = f.cols();
    let dims = (0..=r).map(|p| exterior::basis(r, p).len()).collect();
    let actions = (0..n)
        .map(|a| {
            let row: Vec<FieldElem> = f.row(a).iter().map(|&x| field.from_i64(x)).collect();
            (0..r).map(|p| exterior::left_mult_linear(field, r, p, &row)).collect()
        })
        .collect();
    ExtAlgModule::new(field, n, atom.window().0, dims, actions).expect("exterior action shapes")
}

pub fn cup_module(obj: &ToricObject, chi0: &CharacterPoint) -> ExtAlgModule {
    let n = obj.torus().rank();
    obj.atoms().iter().fold(empty_module(obj.field(), n), |acc, a| acc.direct_sum(&atom_cup_module(a, chi0)))
}

fn bgg_dims(m: &ExtAlgModule, order: usize) -> Result<BTreeMap<i32, usize>> {
    if m.total_dim() == 0 {
        return Ok(BTreeMap::new());
    }
    Ok(bgg_linear_complex(m)?.truncate(order).complex().nonzero_cohomology())
}

fn add_dims(acc: &mut BTreeMap<i32, usize>, d: &BTreeMap<i32, usize>) {
    for (&i, &x) in d {
        *acc.entry(i).or_insert(0) += x;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomLinearity {
    pub index: usize,
    pub on_support: bool,
    /// On the support: constant terms vanish and each linear part equals the
    /// BGG coefficient column. Off it: some constant term is nonzero.
    pub linear_parts_agree: bool,
    pub completed_dims: BTreeMap<i32, usize>,
    pub bgg_dims: BTreeMap<i32, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearityReport {
    pub order: usize,
    pub atoms: Vec<AtomLinearity>,
    pub completed_dims: BTreeMap<i32, usize>,
    pub bgg_dims: BTreeMap<i32, usize>,
}

impl LinearityReport {
    pub fn dims_agree(&self) -> bool {
        self.completed_dims == self.bgg_dims
    }

    pub fn linear_parts_agree(&self) -> bool {
        self.atoms.iter().all(|a| a.linear_parts_agree)
    }

    pub fn passed(&self) -> bool {
        self.dims_agree() && self.linear_parts_agree()
    }
}

fn linear_parts_match(atom: &Atom, chi0: &CharacterPoint, els: &[TruncatedSeries], cup: &ExtAlgModule) -> bool {
    if !on_support(atom, chi0) {
        return els.iter().any(|e| !e.constant_term().is_zero());
    }
    let lo = atom.window().0;
    els.iter().enumerate().all(|(j, e)| {
        if !e.constant_term().is_zero() {
            return false;
        }
        // column of d on e_∅: the coefficient of e_j is the linear form for u_j
        let lin = e.linear_part();
        (0..cup.n()).all(|a| lin[a] == cup.action(a, lo)[(j, 0)])
    })
}

fn run(req: &CompletionRequest, completed_order: usize, bgg_order: usize, linearize: bool) -> Result<LinearityReport> {
    let mut atoms = Vec::new();
    let (mut total_c, mut total_b) = (BTreeMap::new(), BTreeMap::new());
    for (index, atom) in req.obj.atoms().iter().enumerate() {
        let cup = atom_cup_module(atom, &req.chi0);
        // order 2 keeps the linear parts even when N = 1
        let els = completed_elements(atom, &req.chi0, completed_order.max(2));
        let linear_parts_agree = linear_parts_match(atom, &req.chi0, &els, &cup);
        let completed_dims = completed_atom(atom, req, completed_order, linearize).nonzero_cohomology();
        let bgg = bgg_dims(&cup, bgg_order)?;
        add_dims(&mut total_c, &completed_dims);
        add_dims(&mut total_b, &bgg);
        atoms.push(AtomLinearity {
            index,
            on_support: on_support(atom, &req.chi0),
            linear_parts_agree,
            completed_dims,
            bgg_dims: bgg,
        });
    }
    Ok(LinearityReport { order: req.order, atoms, completed_dims: total_c, bgg_dims: total_b })
}

/// Degreewise comparison of the cohomology of `completed_fm(req)` and of the
/// BGG complex of `cup_module` modulo `m^N`, atom by atom, plus the symbolic
/// comparison of linear parts.
pub fn linearity_check(req: &CompletionRequest) -> Result<LinearityReport> {
    run(req, req.order, req.order, false)
}

/// A deliberately broken pipeline: the completed side loses its higher-order
/// terms and the two sides are truncated at orders `N` and `N + 1`. A sound
/// comparison must report a mismatch whenever `χ0` lies on some support.
pub fn corrupted_linearity_check(req: &CompletionRequest) -> Result<LinearityReport> {
    run(req, req.order, req.order + 1, true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistReport {
    pub series_agree: bool,
    pub twisted: LinearityReport,
    pub moved: LinearityReport,
}

impl TwistReport {
    pub fn passed(&self) -> bool {
        self.series_agree && self.twisted == self.moved && self.twisted.passed()
    }
}

/// `obj ⊗ L_ψ` at `χ0` against `obj` at `χ0 · ψ`.
pub fn twist_invariance_check(req: &CompletionRequest, psi: &CharacterPoint) -> Result<TwistReport> {
    let twisted = CompletionRequest::new(req.obj.twist(psi), req.chi0.clone(), req.order)?;
    let moved = CompletionRequest::new(req.obj.clone(), req.chi0.mul(psi), req.order)?;
    let series_agree = twisted.obj.atoms().iter().zip(moved.obj.atoms()).all(|(a, b)| {
        completed_elements(a, &twisted.chi0, req.order) == completed_elements(b, &moved.chi0, req.order)
    });
    Ok(TwistReport { series_agree, twisted: linearity_check(&twisted)?, moved: linearity_check(&moved)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IntMatrix;
    use crate::toric::{constant_sheaf, make_curated_atom, TorusData};

    fn elliptic(field: Field) -> ToricObject {
        let t = TorusData::new(1).unwrap();
        ToricObject::new(field, t, vec![constant_sheaf(field, t, vec![field.one(); 2]).unwrap()]).unwrap()
    }

    fn diagonal(field: Field, eta: Vec<FieldElem>) -> ToricObject {
        let t = TorusData::new(2).unwrap();
        let m = IntMatrix::from_rows(&[vec![1], vec![1]], 1).unwrap();
        ToricObject::new(field, t, vec![make_curated_atom(field, t, &m, eta, 0).unwrap()]).unwrap()
    }

    #[test]
    fn elliptic_curve_is_already_linear() {
        let q = Field::Rationals;
        let obj = elliptic(q);
        for n in 1..=4 {
            let req = CompletionRequest::new(obj.clone(), CharacterPoint::trivial(q, 2), n).unwrap();
            let c = completed_fm(&req);
            assert_eq!((c.lo(), c.dims().len()), (-1, 3));
            let r = linearity_check(&req).unwrap();
            assert!(r.passed(), "{r:?}");
            // socle of S/m^N in degree −1, k in degree 1
            assert_eq!(r.completed_dims.get(&-1), Some(&n));
            assert_eq!(r.completed_dims.get(&1), Some(&1));
        }
    }

    #[test]
    fn diagonal_atom_has_quadratic_corrections() {
        let q = Field::Rationals;
        let obj = diagonal(q, vec![q.one(); 2]);
        let chi0 = CharacterPoint::trivial(q, 4);
        let els = completed_elements(&obj.atoms()[0], &chi0, 3);
        // (1+v1)(1+v3) − 1 = v1 + v3 + v1 v3
        assert_eq!(els[0].linear_part(), vec![q.one(), q.zero(), q.one(), q.zero()]);
        assert!(els[0].coeff(&[1, 0, 1, 0]).is_one());
        assert!(els[1].coeff(&[0, 1, 0, 1]).is_one());
        let req = CompletionRequest::new(obj, chi0, 3).unwrap();
        let r = linearity_check(&req).unwrap();
        assert!(r.passed(), "{r:?}");
        let cup = cup_module(req.object(), req.base_point());
        assert_eq!(cup.dims(), &[1, 2, 1]);
    }

    #[test]
    fn off_support_is_zero() {
        let q = Field::Rationals;
        let obj = diagonal(q, vec![q.from_i64(-1), q.one()]);
        let req = CompletionRequest::new(obj, CharacterPoint::trivial(q, 4), 2).unwrap();
        assert_eq!(cup_module(req.object(), req.base_point()).total_dim(), 0);
        let r = linearity_check(&req).unwrap();
        assert!(r.passed());
        assert!(r.completed_dims.is_empty());
        // nothing on the support, so even the broken pipeline agrees
        assert!(corrupted_linearity_check(&req).unwrap().dims_agree());
    }

    #[test]
    fn torsion_monodromy_over_fp() {
        let p = Field::prime(7).unwrap();
        let minus = p.from_i64(-1);
        let obj = diagonal(p, vec![minus.clone(), p.one()]);
        // x1 x3 = −1 on the support
        let chi0 = CharacterPoint::new(p, vec![minus, p.one(), p.one(), p.one()]).unwrap();
        let req = CompletionRequest::new(obj, chi0, 2).unwrap();
        let els = completed_elements(&req.object().atoms()[0], req.base_point(), 2);
        assert!(els.iter().all(|e| e.constant_term().is_zero()));
        let r = linearity_check(&req).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.atoms[0].on_support);
        assert!(!corrupted_linearity_check(&req).unwrap().dims_agree());
    }

    #[test]
    fn rejects_bad_requests() {
        let q = Field::Rationals;
        let obj = elliptic(q);
        assert!(CompletionRequest::new(obj.clone(), CharacterPoint::from_i64(q, &[2, 1]).unwrap(), 2).is_err());
        assert!(CompletionRequest::new(obj.shifted(1), CharacterPoint::trivial(q, 2), 2).is_err());
        assert!(CompletionRequest::new(obj, CharacterPoint::trivial(q, 2), 0).is_err());
    }

    #[test]
    fn twist_moves_base_point() {
        let p = Field::prime(7).unwrap();
        let obj = diagonal(p, vec![p.one(); 2]);
        let req = CompletionRequest::new(obj, CharacterPoint::trivial(p, 4), 2).unwrap();
        let psi = CharacterPoint::new(p, vec![p.from_i64(-1), p.one(), p.from_i64(-1), p.from_i64(2)]).unwrap();
        assert!(twist_invariance_check(&req, &psi).unwrap().passed());
    }
}
