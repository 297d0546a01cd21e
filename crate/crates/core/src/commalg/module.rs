//! Polynomial matrices and graded module presentations `coker(S^s → S^t)`.

use std::fmt;

use crate::error::{malformed, Result};
use crate::exactlin::{Field, FieldElem, Matrix};

use super::groebner::{is_zero_vec, leading_term, module_gb, reduces_to_zero, ModVec};
use super::ideal::{krull_dim, monomial_ideal_dim, PolyIdeal};
use super::poly::{Monomial, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    nvars: usize,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(field: Field, nvars: usize, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { field, nvars, rows, cols, data: vec![Poly::zero(field, nvars); rows * cols] }
    }

    pub fn identity(field: Field, nvars: usize, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(field, nvars, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(field, nvars));
        }
        m
    }

    pub fn from_columns(field: Field, nvars: usize, rows: usize, columns: &[ModVec]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(field, nvars, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, p) in col.iter().enumerate() {
                m.set(r, c, p.clone());
            }
        }
        m
    }

    pub fn from_rows(field: Field, nvars: usize, cols: usize, rows: &[Vec<Poly>]) -> Result<PolyMatrix> {
        let mut m = PolyMatrix::zeros(field, nvars, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(malformed("ragged polynomial matrix"));
            }
            for (c, p) in row.iter().enumerate() {
                if p.nvars() != nvars || p.field() != field {
                    return Err(malformed("matrix entry lives in a different ring"));
                }
                m.set(r, c, p.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.data[r * self.cols + c] = p;
    }

    pub fn column(&self, c: usize) -> ModVec {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<ModVec> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row(&self, r: usize) -> Vec<Poly> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zeros(self.field, self.nvars, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = PolyMatrix::zeros(self.field, self.nvars, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Poly::zero(self.field, self.nvars);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn eval(&self, point: &[FieldElem]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self.get(r, c).eval(point);
            }
        }
        m
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| format!("[{}]", self.row(r).iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Degree of a homogeneous vector whose position `i` carries degree `pos_deg[i]`;
/// `None` for the zero vector, `Err` if not homogeneous.
pub fn vector_degree(v: &[Poly], pos_deg: &[i32]) -> std::result::Result<Option<i32>, ()> {
    let mut deg = None;
    for (p, d) in v.iter().zip(pos_deg) {
        if p.is_zero() {
            continue;
        }
        if !p.is_homogeneous() {
            return Err(());
        }
        let e = p.degree().unwrap() as i32 + d;
        match deg {
            None => deg = Some(e),
            Some(x) if x != e => return Err(()),
            _ => {}
        }
    }
    Ok(deg)
}

/// Minimal homogeneous generators of the submodule spanned by `gens`.
pub fn minimal_generators(field: Field, nvars: usize, rank: usize, pos_deg: &[i32], gens: &[ModVec]) -> Vec<ModVec> {
    let mut with_deg: Vec<(i32, usize)> = gens
        .iter()
        .enumerate()
        .filter(|(_, g)| !is_zero_vec(g))
        .map(|(i, g)| (vector_degree(g, pos_deg).expect("generators must be homogeneous").unwrap(), i))
        .collect();
    with_deg.sort();
    let mut kept: Vec<ModVec> = Vec::new();
    for (_, i) in with_deg {
        let gb = module_gb(field, nvars, rank, &kept);
        if !reduces_to_zero(&gens[i], &gb) {
            kept.push(gens[i].clone());
        }
    }
    kept
}

/// `coker(φ : ⊕ S(−b_j) → ⊕ S(−a_i))` with homogeneous `φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModulePresentation {
    target_degrees: Vec<i32>,
    source_degrees: Vec<i32>,
    matrix: PolyMatrix,
}

impl GradedModulePresentation {
    /// Infers source degrees from homogeneity; zero columns are dropped.
    pub fn new(target_degrees: Vec<i32>, matrix: PolyMatrix) -> Result<GradedModulePresentation> {
        if target_degrees.len() != matrix.rows() {
            return Err(malformed(format!(
                "{} target degrees for a matrix with {} rows",
                target_degrees.len(),
                matrix.rows()
            )));
        }
        let mut cols = Vec::new();
        let mut source_degrees = Vec::new();
        for (j, col) in matrix.columns().into_iter().enumerate() {
            match vector_degree(&col, &target_degrees) {
                Err(()) => return Err(malformed(format!("column {j} of the presentation is not homogeneous"))),
                Ok(None) => {}
                Ok(Some(d)) => {
                    cols.push(col);
                    source_degrees.push(d);
                }
            }
        }
        let matrix = PolyMatrix::from_columns(matrix.field(), matrix.nvars(), target_degrees.len(), &cols);
        Ok(GradedModulePresentation { target_degrees, source_degrees, matrix })
    }

    /// `S^rank` generated in degree 0.
    pub fn free(field: Field, nvars: usize, rank: usize) -> GradedModulePresentation {
        GradedModulePresentation {
            target_degrees: vec![0; rank],
            source_degrees: vec![],
            matrix: PolyMatrix::zeros(field, nvars, rank, 0),
        }
    }

    /// `S/I` for a homogeneous ideal.
    pub fn cyclic(ideal: &PolyIdeal) -> Result<GradedModulePresentation> {
        let m = PolyMatrix::from_rows(ideal.field(), ideal.nvars(), ideal.gens().len(), &[ideal.gens().to_vec()])?;
        GradedModulePresentation::new(vec![0], m)
    }

    /// The residue field `S/(x_1..x_n)`.
    pub fn residue_field(field: Field, nvars: usize) -> GradedModulePresentation {
        let gens = (0..nvars).map(|i| Poly::var(field, nvars, i)).collect();
        GradedModulePresentation::cyclic(&PolyIdeal::new(field, nvars, gens).unwrap()).unwrap()
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn nvars(&self) -> usize {
        self.matrix.nvars()
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn target_degrees(&self) -> &[i32] {
        &self.target_degrees
    }

    pub fn source_degrees(&self) -> &[i32] {
        &self.source_degrees
    }

    pub fn num_generators(&self) -> usize {
        self.target_degrees.len()
    }

    pub fn relation_gb(&self) -> Vec<ModVec> {
        module_gb(self.field(), self.nvars(), self.num_generators(), &self.matrix.columns())
    }

    pub fn is_zero(&self) -> bool {
        let gb = self.relation_gb();
        let t = self.num_generators();
        (0..t).all(|i| {
            let e: ModVec = (0..t)
                .map(|k| if k == i { Poly::one(self.field(), self.nvars()) } else { Poly::zero(self.field(), self.nvars()) })
                .collect();
            reduces_to_zero(&e, &gb)
        })
    }

    /// Same module with a minimal set of relations.
    pub fn minimized(&self) -> GradedModulePresentation {
        let cols = minimal_generators(
            self.field(),
            self.nvars(),
            self.num_generators(),
            &self.target_degrees,
            &self.matrix.columns(),
        );
        let m = PolyMatrix::from_columns(self.field(), self.nvars(), self.num_generators(), &cols);
        GradedModulePresentation::new(self.target_degrees.clone(), m).unwrap()
    }

    /// Same module after cancelling generators against relations with a
    /// unit entry.
    pub fn pruned(&self) -> GradedModulePresentation {
        let (m, rows) = eliminate_units(&self.matrix);
        let degs = rows.iter().map(|&r| self.target_degrees[r]).collect();
        GradedModulePresentation::new(degs, m).unwrap()
    }

    /// `Fitt_0`, generated by the maximal minors after pruning.
    pub fn fitting_ideal(&self) -> PolyIdeal {
        let (f, n) = (self.field(), self.nvars());
        let (m, _) = eliminate_units(&self.matrix);
        let t = m.rows();
        if t == 0 {
            return PolyIdeal::new(f, n, vec![Poly::one(f, n)]).unwrap();
        }
        let mut minors = Vec::new();
        for cols in combinations(m.cols(), t) {
            let d = bareiss_det(&m, &cols);
            if !d.is_zero() {
                minors.push(d);
            }
        }
        PolyIdeal::new(f, n, minors).unwrap()
    }

    /// `codim Supp M` from the Fitting ideal; `None` for the zero module.
    pub fn support_codim(&self) -> Option<usize> {
        krull_dim(&self.fitting_ideal()).map(|d| self.nvars() - d)
    }

    /// `dim M` read off the initial module; `None` for the zero module.
    pub fn initial_module_dim(&self) -> Option<usize> {
        let gb = self.relation_gb();
        (0..self.num_generators())
            .filter_map(|i| {
                let leads: Vec<Monomial> = gb
                    .iter()
                    .filter_map(|v| leading_term(v).filter(|(p, _, _)| *p == i).map(|(_, m, _)| m.clone()))
                    .collect();
                monomial_ideal_dim(self.nvars(), &leads)
            })
            .max()
    }
}

impl fmt::Display for GradedModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coker {} (generator degrees {:?})", self.matrix, self.target_degrees)
    }
}

/// Repeatedly cancels a row and column through a nonzero constant entry.
/// Returns the remaining matrix and the original indices of its rows.
pub fn eliminate_units(m: &PolyMatrix) -> (PolyMatrix, Vec<usize>) {
    let mut m = m.clone();
    let mut rows: Vec<usize> = (0..m.rows()).collect();
    loop {
        let pivot = (0..m.rows()).flat_map(|r| (0..m.cols()).map(move |c| (r, c))).find(|&(r, c)| m.get(r, c).is_unit());
        let Some((pr, pc)) = pivot else {
            return (m, rows);
        };
        let c_inv = m.get(pr, pc).constant_value().unwrap().inv().unwrap();
        let keep_r: Vec<usize> = (0..m.rows()).filter(|&r| r != pr).collect();
        let keep_c: Vec<usize> = (0..m.cols()).filter(|&c| c != pc).collect();
        let mut out = PolyMatrix::zeros(m.field(), m.nvars(), keep_r.len(), keep_c.len());
        for (a, &r) in keep_r.iter().enumerate() {
            for (b, &c) in keep_c.iter().enumerate() {
                let corr = m.get(r, pc).mul(m.get(pr, c)).scale(&c_inv);
                out.set(a, b, m.get(r, c).sub(&corr));
            }
        }
        rows = keep_r.iter().map(|&r| rows[r]).collect();
        m = out;
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant of the square submatrix on `cols` by fraction-free elimination.
pub fn bareiss_det(m: &PolyMatrix, cols: &[usize]) -> Poly {
    let n = cols.len();
    assert_eq!(n, m.rows());
    let (f, nv) = (m.field(), m.nvars());
    if n == 0 {
        return Poly::one(f, nv);
    }
    let mut a: Vec<Vec<Poly>> = (0..n).map(|r| cols.iter().map(|&c| m.get(r, c).clone()).collect()).collect();
    let mut prev = Poly::one(f, nv);
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                None => return Poly::zero(f, nv),
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Poly::zero(f, nv);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(Field::Rationals, &["x", "y"], s).unwrap()
    }

    #[test]
    fn bareiss_matches_expansion() {
        let m = PolyMatrix::from_rows(
            Field::Rationals,
            2,
            3,
            &[vec![p("x"), p("y"), p("1")], vec![p("y"), p("x"), p("x")], vec![p("1"), p("x*y"), p("y")]],
        )
        .unwrap();
        // x(xy − x²y) − y(y² − x) + (xy² − x)
        let expect = p("x^2*y - x^3*y - y^3 + x*y + x*y^2 - x");
        assert_eq!(bareiss_det(&m, &[0, 1, 2]), expect);
    }

    #[test]
    fn support_of_cyclic_modules() {
        let q = Field::Rationals;
        let sx = GradedModulePresentation::cyclic(&PolyIdeal::parse(q, &["x", "y"], &["x"]).unwrap()).unwrap();
        assert_eq!(sx.support_codim(), Some(1));
        assert_eq!(sx.initial_module_dim(), Some(1));
        let k = GradedModulePresentation::residue_field(q, 2);
        assert_eq!(k.support_codim(), Some(2));
        assert!(!k.is_zero());
        let s = GradedModulePresentation::free(q, 2, 1);
        assert_eq!(s.support_codim(), Some(0));
        let zero = GradedModulePresentation::cyclic(&PolyIdeal::parse(q, &["x", "y"], &["1"]).unwrap()).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.support_codim(), None);
        assert_eq!(zero.initial_module_dim(), None);
    }

    #[test]
    fn rejects_inhomogeneous() {
        let q = Field::Rationals;
        let i = PolyIdeal::parse(q, &["x", "y"], &["x^2 - y"]).unwrap();
        assert!(GradedModulePresentation::cyclic(&i).is_err());
    }

    #[test]
    fn minimal_generators_drop_redundant() {
        let q = Field::Rationals;
        let i = PolyIdeal::parse(q, &["x", "y"], &["x", "x*y", "y^2", "x^2"]).unwrap();
        let m = GradedModulePresentation::cyclic(&i).unwrap().minimized();
        assert_eq!(m.source_degrees(), &[1, 2]);
    }
}
