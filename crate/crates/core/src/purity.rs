//! Finite complexes of `k[t, t^{-1}]`-modules with declared weights: purity,
//! the canonical splitting `K ≃ ⊕ H^i(K)[−i]`, vanishing of negative Ext,
//! and compatibility of the splitting with products.
//!
//! `t` acts on each `V^i` by an operator `T^i`. Every eigenvalue of `T` lies
//! in `k` and has a declared integer weight; `K` is pure when `T` acts on
//! `H^i(K)` with eigenvalues of weight `i` only.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{malformed, precondition, Result};
use crate::exactlin::{is_quasi_isomorphism, ChainMap, Field, FieldElem, FinComplex, Matrix};

fn zero_diff(field: Field, c: &[usize], i: usize) -> Matrix {
    Matrix::zeros(field, c[i + 1], c[i])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedComplex {
    complex: FinComplex,
    /// `t[j]` acts on the space in degree `lo + j`.
    t: Vec<Matrix>,
    table: BTreeMap<FieldElem, i32>,
    /// When set (over `Q` only), each eigenvalue `λ` of weight `w` must satisfy `λ² = q^w`.
    q: Option<FieldElem>,
}

impl WeightedComplex {
    pub fn new(complex: FinComplex, t: Vec<Matrix>, table: BTreeMap<FieldElem, i32>, q: Option<FieldElem>) -> Result<WeightedComplex> {
        let field = complex.field();
        if t.len() != complex.dims().len() {
            return Err(malformed(format!("{} Frobenius matrices for {} degrees", t.len(), complex.dims().len())));
        }
        for (j, m) in t.iter().enumerate() {
            let i = complex.lo() + j as i32;
            let d = complex.dims()[j];
            if m.shape() != (d, d) || m.field() != field {
                return Err(malformed(format!("Frobenius in degree {i} has shape {:?}, expected {:?}", m.shape(), (d, d))));
            }
            if m.inverse().is_none() && d > 0 {
                return Err(malformed(format!("Frobenius in degree {i} is not invertible")));
            }
        }
        for i in complex.degrees() {
            if let Some(d) = complex.differential(i) {
                let j = (i - complex.lo()) as usize;
                if d.mul(&t[j]) != t[j + 1].mul(d) {
                    return Err(malformed(format!("differential in degree {i} does not commute with the Frobenius")));
                }
            }
        }
        if table.keys().any(|l| l.field() != field || l.is_zero()) {
            return Err(malformed("weight table eigenvalues must be nonzero elements of the field"));
        }
        if let Some(q) = &q {
            if field != Field::Rationals {
                return Err(malformed("weight verification against q is only available over the rationals"));
            }
            for (l, &w) in &table {
                if (l * l) != q.pow(w as i64) {
                    return Err(malformed(format!("eigenvalue {l} does not have weight {w}: λ² ≠ q^{w}")));
                }
            }
        }
        let wc = WeightedComplex { complex, t, table, q };
        for i in wc.complex.degrees() {
            let spanned: usize = wc.table.keys().map(|l| wc.eigenspace(i, l).len()).sum();
            if spanned != wc.complex.dim(i) {
                return Err(malformed(format!(
                    "degree {i}: Frobenius has eigenvalues outside the weight table or outside the field"
                )));
            }
        }
        Ok(wc)
    }

    pub fn field(&self) -> Field {
        self.complex.field()
    }

    pub fn complex(&self) -> &FinComplex {
        &self.complex
    }

    pub fn table(&self) -> &BTreeMap<FieldElem, i32> {
        &self.table
    }

    pub fn q(&self) -> Option<&FieldElem> {
        self.q.as_ref()
    }

    pub fn frobenius(&self, i: i32) -> Matrix {
        let j = i - self.complex.lo();
        if j < 0 || j as usize >= self.t.len() {
            Matrix::zeros(self.field(), 0, 0)
        } else {
            self.t[j as usize].clone()
        }
    }

    fn diff(&self, i: i32) -> Matrix {
        self.complex
            .differential(i)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.field(), self.complex.dim(i + 1), self.complex.dim(i)))
    }

    /// Basis of the generalized `λ`-eigenspace in degree `i`.
    pub fn eigenspace(&self, i: i32, lambda: &FieldElem) -> Vec<Vec<FieldElem>> {
        let d = self.complex.dim(i);
        if d == 0 {
            return vec![];
        }
        let shifted = self.frobenius(i).sub(&Matrix::identity(self.field(), d).scale(lambda));
        shifted.pow(d).kernel()
    }

    /// Columns: the generalized eigenspaces in table order.
    fn eigenbasis(&self, i: i32) -> (Matrix, Vec<(FieldElem, std::ops::Range<usize>)>) {
        let mut cols = Vec::new();
        let mut ranges = Vec::new();
        for l in self.table.keys() {
            let e = self.eigenspace(i, l);
            ranges.push((l.clone(), cols.len()..cols.len() + e.len()));
            cols.extend(e);
        }
        (Matrix::from_columns(self.field(), self.complex.dim(i), &cols), ranges)
    }

    /// The summand `K_λ`, with the inclusion `K_λ → K` per degree.
    pub fn eigen_summand(&self, lambda: &FieldElem) -> (FinComplex, ChainMap) {
        let c = &self.complex;
        let bases: Vec<Matrix> = c
            .degrees()
            .map(|i| Matrix::from_columns(self.field(), c.dim(i), &self.eigenspace(i, lambda)))
            .collect();
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let diffs = (0..dims.len().saturating_sub(1))
            .map(|j| {
                let i = c.lo() + j as i32;
                let (full, _) = self.eigenbasis(i + 1);
                let inv = full.inverse().expect("eigenspaces span");
                let (_, ranges) = self.eigenbasis(i + 1);
                let range = ranges.into_iter().find(|(l, _)| l == lambda).unwrap().1;
                let img = inv.mul(&self.diff(i)).mul(&bases[j]);
                let mut d = Matrix::zeros(self.field(), dims[j + 1], dims[j]);
                for (a, r) in range.enumerate() {
                    for col in 0..dims[j] {
                        d[(a, col)] = img[(r, col)].clone();
                    }
                }
                d
            })
            .collect();
        let k = FinComplex::new_unchecked(self.field(), c.lo(), dims, diffs).unwrap();
        let incl = c.degrees().zip(bases).collect();
        (k, incl)
    }

    /// `K ⊗ L` with `T ⊗ T`; weights add.
    pub fn tensor(&self, other: &WeightedComplex) -> Result<WeightedComplex> {
        let field = self.field();
        let (a, b) = (&self.complex, &other.complex);
        if a.dims().is_empty() || b.dims().is_empty() {
            return WeightedComplex::new(FinComplex::zero(field), vec![], BTreeMap::new(), None);
        }
        let lo = a.lo() + b.lo();
        let hi = a.lo() + a.dims().len() as i32 + b.lo() + b.dims().len() as i32 - 1;
        // summands (i, j) with i + j = n, laid out by increasing i
        let summands = |n: i32| -> Vec<(i32, i32)> { a.degrees().filter(|&i| b.degrees().contains(&(n - i))).map(|i| (i, n - i)).collect() };
        let offset = |n: i32, i: i32| -> usize { summands(n).iter().take_while(|&&(x, _)| x < i).map(|&(x, y)| a.dim(x) * b.dim(y)).sum() };
        let dims: Vec<usize> = (lo..hi).map(|n| summands(n).iter().map(|&(i, j)| a.dim(i) * b.dim(j)).sum()).collect();
        let mut t = Vec::new();
        for n in lo..hi {
            let mut m = Matrix::zeros(field, dims[(n - lo) as usize], dims[(n - lo) as usize]);
            for (i, j) in summands(n) {
                let blk = self.frobenius(i).kronecker(&other.frobenius(j));
                let o = offset(n, i);
                for r in 0..blk.rows() {
                    for c in 0..blk.cols() {
                        m[(o + r, o + c)] = blk[(r, c)].clone();
                    }
                }
            }
            t.push(m);
        }
        let mut diffs = Vec::new();
        for n in lo..hi - 1 {
            let mut d = Matrix::zeros(field, dims[(n + 1 - lo) as usize], dims[(n - lo) as usize]);
            for (i, j) in summands(n) {
                let src = offset(n, i);
                // d(x ⊗ y) = dx ⊗ y + (−1)^i x ⊗ dy
                let mut place = |blk: Matrix, ti: i32| {
                    let dst = offset(n + 1, ti);
                    for r in 0..blk.rows() {
                        for c in 0..blk.cols() {
                            d[(dst + r, src + c)] = &d[(dst + r, src + c)] + &blk[(r, c)];
                        }
                    }
                };
                if b.degrees().contains(&j) && a.degrees().contains(&(i + 1)) {
                    place(self.diff(i).kronecker(&Matrix::identity(field, b.dim(j))), i + 1);
                }
                if a.degrees().contains(&i) && b.degrees().contains(&(j + 1)) {
                    let s = field.from_i64(crate::exactlin::sign(i));
                    place(Matrix::identity(field, a.dim(i)).kronecker(&other.diff(j)).scale(&s), i);
                }
            }
            diffs.push(d);
        }
        let mut table = BTreeMap::new();
        for (l, &w) in &self.table {
            for (m, &v) in &other.table {
                let p = l * m;
                if let Some(&old) = table.get(&p) {
                    if old != w + v {
                        return Err(precondition(format!("eigenvalue {p} would carry weights {old} and {}", w + v)));
                    }
                }
                table.insert(p, w + v);
            }
        }
        let q = match (&self.q, &other.q) {
            (Some(a), Some(b)) if a == b => Some(a.clone()),
            _ => None,
        };
        let complex = FinComplex::new(field, lo, dims, diffs)?;
        WeightedComplex::new(complex, t, table, q)
    }
}

impl fmt::Display for WeightedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let table: Vec<String> = self.table.iter().map(|(l, w)| format!("{l}↦{w}")).collect();
        write!(f, "weighted complex, dims {:?} from degree {}, weights {{{}}}", self.complex.dims(), self.complex.lo(), table.join(", "))
    }
}

/// Cohomology of `K_λ` in a degree other than its weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImpureClass {
    pub eigenvalue: FieldElem,
    pub weight: i32,
    pub degree: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityReport {
    pub offenders: Vec<ImpureClass>,
}

impl PurityReport {
    pub fn pure(&self) -> bool {
        self.offenders.is_empty()
    }
}

pub fn purity_check(k: &WeightedComplex) -> PurityReport {
    let mut offenders = Vec::new();
    for (l, &w) in &k.table {
        let (kl, _) = k.eigen_summand(l);
        for (i, d) in kl.nonzero_cohomology() {
            if i != w {
                offenders.push(ImpureClass { eigenvalue: l.clone(), weight: w, degree: i, dim: d });
            }
        }
    }
    PurityReport { offenders }
}

/// The zigzag `K ← K' → ⊕ H^i(K)[−i]` with `K' = ⊕_λ τ^{≤w(λ)} K_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureSplitting {
    pub k_prime: FinComplex,
    pub cohomology: FinComplex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
    /// Frobenius on `K'` and on `H`.
    pub t_prime: BTreeMap<i32, Matrix>,
    pub t_h: BTreeMap<i32, Matrix>,
    /// For each degree of `H`, a section `H^i → Z^i(K') ⊂ K'^i`.
    pub section: BTreeMap<i32, Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub inclusion_qis: bool,
    pub projection_qis: bool,
    pub equivariant: bool,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.inclusion_qis && self.projection_qis && self.equivariant
    }
}

fn coords(basis: &Matrix, v: &Matrix) -> Matrix {
    // basis has full column rank and v's columns lie in its span
    let cols: Vec<Vec<FieldElem>> = (0..v.cols()).map(|c| basis.solve(&v.column(c)).expect("vector in span")).collect();
    Matrix::from_columns(basis.field(), basis.cols(), &cols)
}

fn stack_blocks(field: Field, blocks: &[Matrix], rows: usize, cols: usize, row_off: &[usize], col_off: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for (b, blk) in blocks.iter().enumerate() {
        for r in 0..blk.rows() {
            for c in 0..blk.cols() {
                m[(row_off[b] + r, col_off[b] + c)] = blk[(r, c)].clone();
            }
        }
    }
    m
}

pub fn split_pure(k: &WeightedComplex) -> Result<PureSplitting> {
    if let Some(o) = purity_check(k).offenders.first() {
        return Err(precondition(format!(
            "impure: eigenvalue {} of weight {} has {}-dimensional cohomology in degree {}",
            o.eigenvalue, o.weight, o.dim, o.degree
        )));
    }
    let field = k.field();
    let c = &k.complex;
    let degs: Vec<i32> = c.degrees().collect();
    // per eigenvalue: basis of τ^{≤w} K_λ inside K (columns), per degree
    struct Piece {
        basis: BTreeMap<i32, Matrix>,
        h_section: Option<(i32, Matrix)>,
    }
    let mut pieces = Vec::new();
    for (l, &w) in &k.table {
        let mut basis = BTreeMap::new();
        let mut h_section = None;
        for &i in &degs {
            let e = Matrix::from_columns(field, c.dim(i), &k.eigenspace(i, l));
            if i < w {
                basis.insert(i, e);
            } else if i == w {
                // cycles of K_λ in degree w
                let z_coords = k.diff(i).mul(&e).kernel();
                let z = e.mul(&Matrix::from_columns(field, e.cols(), &z_coords));
                // boundaries of K_λ: image of the λ-part of degree w − 1
                let prev = Matrix::from_columns(field, c.dim(i - 1), &k.eigenspace(i - 1, l));
                let b = k.diff(i - 1).mul(&prev);
                let b_cols = b.column_space();
                // extend a basis of B to one of Z; the added vectors span H
                let mut chosen = b_cols.clone();
                let mut extra = Vec::new();
                for col in 0..z.cols() {
                    let v = z.column(col);
                    let mut trial = chosen.clone();
                    trial.push(v.clone());
                    if Matrix::from_columns(field, c.dim(i), &trial).rank() == trial.len() {
                        chosen = trial;
                        extra.push(v);
                    }
                }
                // order Z's basis as [B | extra] so coordinates split
                let zb: Vec<Vec<FieldElem>> = b_cols.into_iter().chain(extra.iter().cloned()).collect();
                basis.insert(i, Matrix::from_columns(field, c.dim(i), &zb));
                h_section = Some((i, Matrix::from_columns(field, c.dim(i), &extra)));
            }
        }
        pieces.push(Piece { basis, h_section });
    }
    // assemble K' and the inclusion
    let dims_p: Vec<usize> = degs.iter().map(|i| pieces.iter().map(|p| p.basis.get(i).map_or(0, Matrix::cols)).sum()).collect();
    let mut incl: ChainMap = BTreeMap::new();
    for (j, &i) in degs.iter().enumerate() {
        let cols: Vec<Vec<FieldElem>> =
            pieces.iter().filter_map(|p| p.basis.get(&i)).flat_map(|m| (0..m.cols()).map(move |cc| m.column(cc))).collect();
        incl.insert(i, Matrix::from_columns(field, c.dim(i), &cols));
        debug_assert_eq!(cols.len(), dims_p[j]);
    }
    let diffs_p: Vec<Matrix> = (0..degs.len().saturating_sub(1))
        .map(|j| {
            let i = degs[j];
            if dims_p[j] == 0 || dims_p[j + 1] == 0 {
                return zero_diff(field, &dims_p, j);
            }
            coords(&incl[&(i + 1)], &k.diff(i).mul(&incl[&i]))
        })
        .collect();
    let k_prime = FinComplex::new(field, c.lo(), dims_p.clone(), diffs_p)?;
    let t_prime: BTreeMap<i32, Matrix> = degs
        .iter()
        .map(|&i| {
            let m = &incl[&i];
            let t = if m.cols() == 0 { Matrix::zeros(field, 0, 0) } else { coords(m, &k.frobenius(i).mul(m)) };
            (i, t)
        })
        .collect();
    // cohomology H = ⊕ H^i[−i] and the projection K' → H
    let h_dims: Vec<usize> =
        degs.iter().map(|&i| pieces.iter().filter_map(|p| p.h_section.as_ref()).filter(|(d, _)| *d == i).map(|(_, m)| m.cols()).sum()).collect();
    let cohomology = FinComplex::with_zero_differentials(field, c.lo(), h_dims.clone());
    let mut projection: ChainMap = BTreeMap::new();
    let mut section = BTreeMap::new();
    for (j, &i) in degs.iter().enumerate() {
        // K'^i coordinates: blocks per eigenvalue; in degree w the block is [B | extra]
        let mut row_off = Vec::new();
        let mut col_off = Vec::new();
        let mut blocks = Vec::new();
        let (mut ro, mut co) = (0, 0);
        let mut sec_cols: Vec<Vec<FieldElem>> = Vec::new();
        for p in &pieces {
            let width = p.basis.get(&i).map_or(0, Matrix::cols);
            if let Some((d, ext)) = &p.h_section {
                if *d == i {
                    let nb = width - ext.cols();
                    let mut blk = Matrix::zeros(field, ext.cols(), width);
                    for a in 0..ext.cols() {
                        blk[(a, nb + a)] = field.one();
                        let mut v = vec![field.zero(); dims_p[j]];
                        v[co + nb + a] = field.one();
                        sec_cols.push(v);
                    }
                    blocks.push(blk);
                    row_off.push(ro);
                    col_off.push(co);
                    ro += ext.cols();
                }
            }
            co += width;
        }
        projection.insert(i, stack_blocks(field, &blocks, h_dims[j], dims_p[j], &row_off, &col_off));
        section.insert(i, Matrix::from_columns(field, dims_p[j], &sec_cols));
    }
    let t_h = degs
        .iter()
        .map(|&i| {
            let t = projection[&i].mul(&t_prime[&i]).mul(&section[&i]);
            (i, t)
        })
        .collect();
    Ok(PureSplitting { k_prime, cohomology, inclusion: incl, projection, t_prime, t_h, section })
}

pub fn verify_split(k: &WeightedComplex, s: &PureSplitting) -> SplitReport {
    let inclusion_qis = is_quasi_isomorphism(&s.k_prime, &k.complex, &s.inclusion);
    let projection_qis = is_quasi_isomorphism(&s.k_prime, &s.cohomology, &s.projection);
    let equivariant = k.complex.degrees().all(|i| {
        let inc = &s.inclusion[&i];
        let pr = &s.projection[&i];
        inc.mul(&s.t_prime[&i]) == k.frobenius(i).mul(inc) && pr.mul(&s.t_prime[&i]) == s.t_h[&i].mul(pr)
    });
    SplitReport { inclusion_qis, projection_qis, equivariant }
}

/// `Hom^n(K, L) = ⊕_i Hom(K^i, L^{i+n})`, vectorized column-major, with
/// `D f = d_L f − (−1)^n f d_K`.
struct HomComplex {
    lo: i32,
    /// per degree n: list of (i, offset) blocks
    blocks: Vec<Vec<(i32, usize)>>,
    dims: Vec<usize>,
}

fn hom_layout(k: &FinComplex, l: &FinComplex) -> HomComplex {
    let (klo, khi) = (k.lo(), k.lo() + k.dims().len() as i32);
    let (llo, lhi) = (l.lo(), l.lo() + l.dims().len() as i32);
    let lo = llo - (khi - 1);
    let hi = (lhi - 1) - klo + 1;
    let mut blocks = Vec::new();
    let mut dims = Vec::new();
    for n in lo..hi {
        let mut off = 0;
        let mut b = Vec::new();
        for i in klo..khi {
            let size = k.dim(i) * l.dim(i + n);
            if size > 0 {
                b.push((i, off));
                off += size;
            }
        }
        blocks.push(b);
        dims.push(off);
    }
    HomComplex { lo, blocks, dims }
}

fn diff_or_zero(c: &FinComplex, i: i32) -> Matrix {
    c.differential(i).cloned().unwrap_or_else(|| Matrix::zeros(c.field(), c.dim(i + 1), c.dim(i)))
}

fn frob_or_id(w: &WeightedComplex, i: i32) -> Matrix {
    w.frobenius(i)
}

/// Matrix of `D : Hom^n → Hom^{n+1}`.
fn hom_differential(k: &FinComplex, l: &FinComplex, h: &HomComplex, n: i32) -> Matrix {
    let field = k.field();
    let j = (n - h.lo) as usize;
    let mut d = Matrix::zeros(field, h.dims[j + 1], h.dims[j]);
    let s = field.from_i64(-crate::exactlin::sign(n));
    let find = |deg: usize, i: i32| h.blocks[deg].iter().find(|(x, _)| *x == i).map(|&(_, o)| o);
    for &(i, src) in &h.blocks[j] {
        // f : K^i → L^{i+n}
        // d_L f lands in Hom(K^i, L^{i+n+1})
        if let Some(dst) = find(j + 1, i) {
            let blk = Matrix::identity(field, k.dim(i)).kronecker(&diff_or_zero(l, i + n));
            add_block(&mut d, &blk, dst, src);
        }
        // f d_K lands in Hom(K^{i−1}, L^{i+n}) = Hom^{n+1} block i − 1
        if let Some(dst) = find(j + 1, i - 1) {
            let blk = diff_or_zero(k, i - 1).transpose().kronecker(&Matrix::identity(field, l.dim(i + n))).scale(&s);
            add_block(&mut d, &blk, dst, src);
        }
    }
    d
}

fn add_block(d: &mut Matrix, blk: &Matrix, r0: usize, c0: usize) {
    for r in 0..blk.rows() {
        for c in 0..blk.cols() {
            if !blk[(r, c)].is_zero() {
                d[(r0 + r, c0 + c)] = &d[(r0 + r, c0 + c)] + &blk[(r, c)];
            }
        }
    }
}

/// `Φ f = T_L f − f T_K` on `Hom^n`.
fn hom_frobenius(k: &WeightedComplex, l: &WeightedComplex, h: &HomComplex, n: i32) -> Matrix {
    let field = k.field();
    let j = (n - h.lo) as usize;
    let mut m = Matrix::zeros(field, h.dims[j], h.dims[j]);
    for &(i, off) in &h.blocks[j] {
        let (a, b) = (k.complex.dim(i), l.complex.dim(i + n));
        let left = Matrix::identity(field, a).kronecker(&frob_or_id(l, i + n));
        let right = frob_or_id(k, i).transpose().kronecker(&Matrix::identity(field, b));
        add_block(&mut m, &left.sub(&right), off, off);
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeExtReport {
    /// `dim Ext^n_{k[t,t^{-1}]}(K, L)` for every `n` with nonzero Ext.
    pub ext_dims: BTreeMap<i32, usize>,
    /// Cohomology of the subcomplex of strictly `T`-equivariant maps.
    pub equivariant_hom_dims: BTreeMap<i32, usize>,
    pub both_pure: bool,
}

impl NegativeExtReport {
    pub fn negative_vanishes(&self) -> bool {
        self.ext_dims.keys().all(|&n| n >= 0)
    }
}

/// `RHom_{k[t,t^{-1}]}(K, L)` as the fibre of `Φ` on `Hom^•_k(K, L)`:
/// degree `n` is `Hom^n ⊕ Hom^{n−1}` with `(f, g) ↦ (D f, Φ f − D g)`.
pub fn derived_hom(k: &WeightedComplex, l: &WeightedComplex) -> FinComplex {
    let field = k.field();
    let (kc, lc) = (&k.complex, &l.complex);
    if kc.dims().is_empty() || lc.dims().is_empty() {
        return FinComplex::zero(field);
    }
    let h = hom_layout(kc, lc);
    let nh = h.dims.len() as i32;
    let hdim = |n: i32| if n < h.lo || n >= h.lo + nh { 0 } else { h.dims[(n - h.lo) as usize] };
    let dmat = |n: i32| -> Matrix {
        if n < h.lo || n + 1 >= h.lo + nh {
            Matrix::zeros(field, hdim(n + 1), hdim(n))
        } else {
            hom_differential(kc, lc, &h, n)
        }
    };
    let phi = |n: i32| -> Matrix {
        if n < h.lo || n >= h.lo + nh {
            Matrix::zeros(field, 0, 0)
        } else {
            hom_frobenius(k, l, &h, n)
        }
    };
    let lo = h.lo;
    let hi = h.lo + nh + 1;
    let dims: Vec<usize> = (lo..hi).map(|n| hdim(n) + hdim(n - 1)).collect();
    let minus = field.from_i64(-1);
    let diffs = (lo..hi - 1)
        .map(|n| {
            let (a0, b0) = (hdim(n), hdim(n - 1));
            let (a1, b1) = (hdim(n + 1), hdim(n));
            let mut d = Matrix::zeros(field, a1 + b1, a0 + b0);
            add_block(&mut d, &dmat(n), 0, 0);
            if a0 > 0 {
                add_block(&mut d, &phi(n), a1, 0);
            }
            add_block(&mut d, &dmat(n - 1).scale(&minus), a1, a0);
            d
        })
        .collect();
    FinComplex::new(field, lo, dims, diffs).expect("fibre of a chain map is a complex")
}

pub fn negative_ext_check(k: &WeightedComplex, l: &WeightedComplex) -> NegativeExtReport {
    let field = k.field();
    let ext_dims = derived_hom(k, l).nonzero_cohomology();
    let (kc, lc) = (&k.complex, &l.complex);
    let equivariant_hom_dims = if kc.dims().is_empty() || lc.dims().is_empty() {
        BTreeMap::new()
    } else {
        let h = hom_layout(kc, lc);
        let n = h.dims.len();
        let kernels: Vec<Matrix> = (0..n)
            .map(|j| {
                let deg = h.lo + j as i32;
                Matrix::from_columns(field, h.dims[j], &hom_frobenius(k, l, &h, deg).kernel())
            })
            .collect();
        let diffs = (0..n.saturating_sub(1))
            .map(|j| {
                let deg = h.lo + j as i32;
                let img = hom_differential(kc, lc, &h, deg).mul(&kernels[j]);
                if kernels[j + 1].cols() == 0 || kernels[j].cols() == 0 {
                    Matrix::zeros(field, kernels[j + 1].cols(), kernels[j].cols())
                } else {
                    coords(&kernels[j + 1], &img)
                }
            })
            .collect();
        let dims = kernels.iter().map(Matrix::cols).collect();
        FinComplex::new(field, h.lo, dims, diffs).unwrap().nonzero_cohomology()
    };
    let both_pure = purity_check(k).pure() && purity_check(l).pure();
    NegativeExtReport { ext_dims, equivariant_hom_dims, both_pure }
}

/// `K = L = k ⊕ k[1]` with `T = 1`: both cohomology groups have weight 0,
/// so `H^{−1}` is impure, and a degree `−1` map `K → L` survives.
pub fn impure_counterexample() -> WeightedComplex {
    let f = Field::Rationals;
    let c = FinComplex::with_zero_differentials(f, -1, vec![1, 1]);
    let id = Matrix::identity(f, 1);
    WeightedComplex::new(c, vec![id.clone(), id], BTreeMap::from([(f.one(), 0)]), None).unwrap()
}

/// `A` with unit and product `μ_{i,j} : A^i ⊗ A^j → A^{i+j}` (column index
/// `a · dim A^j + b` for basis vectors `a ∈ A^i`, `b ∈ A^j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureAlgebra {
    underlying: WeightedComplex,
    unit: Vec<FieldElem>,
    mult: BTreeMap<(i32, i32), Matrix>,
}

impl PureAlgebra {
    pub fn new(underlying: WeightedComplex, unit: Vec<FieldElem>, mult: BTreeMap<(i32, i32), Matrix>) -> Result<PureAlgebra> {
        let c = underlying.complex.clone();
        let field = c.field();
        if unit.len() != c.dim(0) {
            return Err(malformed("unit must live in degree 0"));
        }
        let degs: Vec<i32> = c.degrees().collect();
        let mut full = BTreeMap::new();
        for &i in &degs {
            for &j in &degs {
                let shape = (c.dim(i + j), c.dim(i) * c.dim(j));
                let m = mult.get(&(i, j)).cloned().unwrap_or_else(|| Matrix::zeros(field, shape.0, shape.1));
                if m.shape() != shape {
                    return Err(malformed(format!("product on degrees ({i}, {j}) has shape {:?}, expected {shape:?}", m.shape())));
                }
                full.insert((i, j), m);
            }
        }
        let a = PureAlgebra { underlying, unit, mult: full };
        a.check_laws()?;
        Ok(a)
    }

    pub fn underlying(&self) -> &WeightedComplex {
        &self.underlying
    }

    fn basis_vec(&self, i: i32, a: usize) -> Vec<FieldElem> {
        let f = self.underlying.field();
        let mut v = vec![f.zero(); self.underlying.complex.dim(i)];
        v[a] = f.one();
        v
    }

    /// `x · y` for `x ∈ A^i`, `y ∈ A^j`.
    pub fn product(&self, i: i32, x: &[FieldElem], j: i32, y: &[FieldElem]) -> Vec<FieldElem> {
        let f = self.underlying.field();
        let Some(m) = self.mult.get(&(i, j)) else {
            return vec![f.zero(); self.underlying.complex.dim(i + j)];
        };
        let mut xy = Vec::with_capacity(x.len() * y.len());
        for a in x {
            for b in y {
                xy.push(a * b);
            }
        }
        m.mul_vec(&xy)
    }

    fn check_laws(&self) -> Result<()> {
        let w = &self.underlying;
        let c = &w.complex;
        let f = c.field();
        let degs: Vec<i32> = c.degrees().collect();
        for &i in &degs {
            for a in 0..c.dim(i) {
                let x = self.basis_vec(i, a);
                if self.product(0, &self.unit, i, &x) != x || self.product(i, &x, 0, &self.unit) != x {
                    return Err(malformed(format!("unit law fails on basis vector {a} of degree {i}")));
                }
                for &j in &degs {
                    for b in 0..c.dim(j) {
                        let y = self.basis_vec(j, b);
                        let xy = self.product(i, &x, j, &y);
                        // Leibniz: d(xy) = dx·y + (−1)^i x·dy
                        let dxy = w.diff(i + j).mul_vec(&xy);
                        let dx = w.diff(i).mul_vec(&x);
                        let dy = w.diff(j).mul_vec(&y);
                        let s = f.from_i64(crate::exactlin::sign(i));
                        let rhs: Vec<FieldElem> = self
                            .product(i + 1, &dx, j, &y)
                            .iter()
                            .zip(self.product(i, &x, j + 1, &dy))
                            .map(|(p, q)| p + &(&q * &s))
                            .collect();
                        if c.dim(i + j + 1) > 0 && dxy != rhs {
                            return Err(malformed(format!("Leibniz rule fails on degrees ({i}, {j})")));
                        }
                        // T(xy) = Tx · Ty
                        let txy = w.frobenius(i + j).mul_vec(&xy);
                        let tx = w.frobenius(i).mul_vec(&x);
                        let ty = w.frobenius(j).mul_vec(&y);
                        if !xy.is_empty() && txy != self.product(i, &tx, j, &ty) {
                            return Err(malformed(format!("product on degrees ({i}, {j}) does not commute with the Frobenius")));
                        }
                        for &l in &degs {
                            for e in 0..c.dim(l) {
                                let z = self.basis_vec(l, e);
                                let left = self.product(i + j, &xy, l, &z);
                                let right = self.product(i, &x, j + l, &self.product(j, &y, l, &z));
                                if left != right {
                                    return Err(malformed(format!("associativity fails on degrees ({i}, {j}, {l})")));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativeReport {
    pub checked_pairs: usize,
    /// Pairs of basis vectors of `K'` whose product leaves `K'`.
    pub not_closed: Vec<(i32, usize, i32, usize)>,
    /// Pairs where `α(xy) ≠ α(x)·α(y)`.
    pub mismatches: Vec<(i32, usize, i32, usize)>,
}

impl MultiplicativeReport {
    pub fn passed(&self) -> bool {
        self.not_closed.is_empty() && self.mismatches.is_empty()
    }
}

/// Checks that the projection `α : K' → H` is multiplicative, where `H`
/// carries the product induced on cohomology.
pub fn multiplicative_split_check(a: &PureAlgebra) -> Result<MultiplicativeReport> {
    let w = &a.underlying;
    let s = split_pure(w)?;
    let f = w.field();
    let degs: Vec<i32> = w.complex.degrees().collect();
    let incl = |i: i32| s.inclusion.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(f, 0, 0));
    let mut report = MultiplicativeReport { checked_pairs: 0, not_closed: vec![], mismatches: vec![] };
    for &i in &degs {
        for x in 0..s.k_prime.dim(i) {
            let xk = incl(i).column(x);
            let ax = s.projection[&i].column(x);
            for &j in &degs {
                for y in 0..s.k_prime.dim(j) {
                    report.checked_pairs += 1;
                    let yk = incl(j).column(y);
                    let ay = s.projection[&j].column(y);
                    let xy = a.product(i, &xk, j, &yk);
                    if xy.is_empty() {
                        continue;
                    }
                    let Some(xy_p) = incl(i + j).solve(&xy) else {
                        report.not_closed.push((i, x, j, y));
                        continue;
                    };
                    let lhs = s.projection[&(i + j)].mul_vec(&xy_p);
                    // α(x)·α(y) in H via the section into cycles of K'
                    let sx = incl(i).mul_vec(&s.section[&i].mul_vec(&ax));
                    let sy = incl(j).mul_vec(&s.section[&j].mul_vec(&ay));
                    let prod = a.product(i, &sx, j, &sy);
                    let rhs = match incl(i + j).solve(&prod) {
                        Some(p) => s.projection[&(i + j)].mul_vec(&p),
                        None => {
                            report.not_closed.push((i, x, j, y));
                            continue;
                        }
                    };
                    if lhs != rhs {
                        report.mismatches.push((i, x, j, y));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn diag(f: Field, vals: &[FieldElem]) -> Matrix {
    let mut m = Matrix::zeros(f, vals.len(), vals.len());
    for (i, v) in vals.iter().enumerate() {
        m[(i, i)] = v.clone();
    }
    m
}

/// Named algebras: a point, exterior algebras on one and two generators with
/// Frobenius of weight 1, and the latter with an extra acyclic pair.
pub fn curated_algebras(p: i64) -> Vec<(String, PureAlgebra)> {
    let f = Field::Rationals;
    let e = |x: i64| f.from_i64(x);
    let q = e(p * p);
    let mut out = Vec::new();

    let point = WeightedComplex::new(
        FinComplex::with_zero_differentials(f, 0, vec![1]),
        vec![Matrix::identity(f, 1)],
        BTreeMap::from([(e(1), 0)]),
        Some(q.clone()),
    )
    .unwrap();
    let mult = BTreeMap::from([((0, 0), Matrix::identity(f, 1))]);
    out.push(("point".to_string(), PureAlgebra::new(point, vec![e(1)], mult).unwrap()));

    let one_gen = WeightedComplex::new(
        FinComplex::with_zero_differentials(f, 0, vec![1, 1]),
        vec![Matrix::identity(f, 1), diag(f, &[e(p)])],
        BTreeMap::from([(e(1), 0), (e(p), 1)]),
        Some(q.clone()),
    )
    .unwrap();
    let mult = BTreeMap::from([((0, 0), Matrix::identity(f, 1)), ((0, 1), Matrix::identity(f, 1)), ((1, 0), Matrix::identity(f, 1))]);
    out.push(("exterior algebra on one generator".to_string(), PureAlgebra::new(one_gen, vec![e(1)], mult).unwrap()));

    let table2 = BTreeMap::from([(e(1), 0), (e(p), 1), (e(-p), 1), (e(-p * p), 2)]);
    let two_gen = WeightedComplex::new(
        FinComplex::with_zero_differentials(f, 0, vec![1, 2, 1]),
        vec![Matrix::identity(f, 1), diag(f, &[e(p), e(-p)]), diag(f, &[e(-p * p)])],
        table2.clone(),
        Some(q.clone()),
    )
    .unwrap();
    let ext_mult = |extra0: usize, extra1: usize| -> BTreeMap<(i32, i32), Matrix> {
        // basis: A^0 = [1, u…], A^1 = [e1, e2, v…], A^2 = [e1e2]
        let (d0, d1) = (1 + extra0, 2 + extra1);
        let mut m00 = Matrix::zeros(f, d0, d0 * d0);
        for a in 0..d0 {
            // 1·x = x and x·1 = x
            m00[(a, a)] = e(1);
            m00[(a, a * d0)] = e(1);
        }
        let mut m01 = Matrix::zeros(f, d1, d0 * d1);
        let mut m10 = Matrix::zeros(f, d1, d1 * d0);
        for b in 0..d1 {
            m01[(b, b)] = e(1);
            m10[(b, b * d0)] = e(1);
        }
        let mut m11 = Matrix::zeros(f, 1, d1 * d1);
        m11[(0, 1)] = e(1); // e1·e2
        m11[(0, d1)] = e(-1); // e2·e1
        let m02 = {
            let mut m = Matrix::zeros(f, 1, d0);
            m[(0, 0)] = e(1);
            m
        };
        BTreeMap::from([((0, 0), m00), ((0, 1), m01), ((1, 0), m10), ((1, 1), m11), ((0, 2), m02.clone()), ((2, 0), m02)])
    };
    out.push(("exterior algebra on two generators".to_string(), PureAlgebra::new(two_gen, vec![e(1)], ext_mult(0, 0)).unwrap()));

    // extra pair u ↦ v with Frobenius p: u in degree 0, v in degree 1
    let mut d0 = Matrix::zeros(f, 3, 2);
    d0[(2, 1)] = e(1);
    let d1 = Matrix::zeros(f, 1, 3);
    let with_pair = WeightedComplex::new(
        FinComplex::new(f, 0, vec![2, 3, 1], vec![d0, d1]).unwrap(),
        vec![diag(f, &[e(1), e(p)]), diag(f, &[e(p), e(-p), e(p)]), diag(f, &[e(-p * p)])],
        table2,
        Some(q),
    )
    .unwrap();
    out.push((
        "exterior algebra on two generators plus an acyclic pair".to_string(),
        PureAlgebra::new(with_pair, vec![e(1), e(0)], ext_mult(1, 1)).unwrap(),
    ));
    out
}

/// Weight table over `Q` for `q = p²`: `±1 ↦ 0`, `±p ↦ 1`, `±p² ↦ 2`, `±1/p ↦ −1`.
pub fn standard_table(p: i64) -> BTreeMap<FieldElem, i32> {
    let f = Field::Rationals;
    let mut t = BTreeMap::new();
    for s in [1, -1] {
        t.insert(f.from_i64(s), 0);
        t.insert(f.from_i64(s * p), 1);
        t.insert(f.from_i64(s * p * p), 2);
        t.insert(f.from_ratio(&s.into(), &p.into()).unwrap(), -1);
    }
    t
}

fn jordan(f: Field, l: &FieldElem, size: usize) -> Matrix {
    let mut m = Matrix::identity(f, size).scale(l);
    for i in 0..size.saturating_sub(1) {
        m[(i, i + 1)] = f.one();
    }
    m
}

/// A random pure complex over `Q` of total dimension at most `max_dim`:
/// Jordan blocks placed in their weight degree plus acyclic pairs `id : V → V`,
/// conjugated by random invertible matrices.
pub fn random_pure_complex<R: Rng + ?Sized>(p: i64, max_dim: usize, rng: &mut R) -> WeightedComplex {
    let f = Field::Rationals;
    let table = standard_table(p);
    let eigs: Vec<(FieldElem, i32)> = table.iter().map(|(l, &w)| (l.clone(), w)).collect();
    let (lo, hi) = (-2i32, 3i32);
    let nd = (hi - lo) as usize;
    // per degree: list of (eigenvalue, size) blocks; pairs stored separately
    let mut blocks: Vec<Vec<(FieldElem, usize)>> = vec![vec![]; nd];
    let mut pairs: Vec<(i32, FieldElem, usize)> = Vec::new();
    let mut total = 0;
    let target = rng.gen_range(1..=max_dim);
    while total < target {
        let (l, w) = eigs[rng.gen_range(0..eigs.len())].clone();
        let room = target - total;
        if rng.gen_bool(0.6) || room < 2 {
            let size = rng.gen_range(1..=room.min(2));
            blocks[(w - lo) as usize].push((l, size));
            total += size;
        } else {
            let size = rng.gen_range(1..=(room / 2).min(2));
            let deg = rng.gen_range(lo..hi - 1);
            pairs.push((deg, l, size));
            total += 2 * size;
        }
    }
    // assemble: each degree's space = cohomology blocks ++ pair tops (from deg−1) ++ pair bottoms
    let mut dims = vec![0usize; nd];
    let mut t_blocks: Vec<Vec<Matrix>> = vec![vec![]; nd];
    for (j, bl) in blocks.iter().enumerate() {
        for (l, s) in bl {
            t_blocks[j].push(jordan(f, l, *s));
            dims[j] += s;
        }
    }
    let mut pair_pos = Vec::new();
    for (deg, l, s) in &pairs {
        let j = (deg - lo) as usize;
        let src = dims[j];
        t_blocks[j].push(jordan(f, l, *s));
        dims[j] += s;
        let dst = dims[j + 1];
        t_blocks[j + 1].push(jordan(f, l, *s));
        dims[j + 1] += s;
        pair_pos.push((j, src, dst, *s));
    }
    let t: Vec<Matrix> = t_blocks
        .iter()
        .map(|bs| bs.iter().fold(Matrix::zeros(f, 0, 0), |acc, b| acc.direct_sum(b)))
        .collect();
    let mut diffs: Vec<Matrix> = (0..nd - 1).map(|j| Matrix::zeros(f, dims[j + 1], dims[j])).collect();
    for (j, src, dst, s) in pair_pos {
        for a in 0..s {
            diffs[j][(dst + a, src + a)] = f.one();
        }
    }
    // random conjugation
    let ps: Vec<Matrix> = dims
        .iter()
        .map(|&d| loop {
            let mut m = Matrix::zeros(f, d, d);
            for r in 0..d {
                for c in 0..d {
                    m[(r, c)] = f.from_i64(rng.gen_range(-2..=2));
                }
            }
            if m.rank() == d {
                break m;
            }
        })
        .collect();
    let inv: Vec<Matrix> = ps.iter().map(|p| p.inverse().unwrap()).collect();
    let t: Vec<Matrix> = t.iter().enumerate().map(|(j, m)| ps[j].mul(m).mul(&inv[j])).collect();
    let diffs: Vec<Matrix> = diffs.iter().enumerate().map(|(j, d)| ps[j + 1].mul(d).mul(&inv[j])).collect();
    let complex = FinComplex::new(f, lo, dims, diffs).unwrap();
    WeightedComplex::new(complex, t, table, Some(f.from_i64(p * p))).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn q() -> Field {
        Field::Rationals
    }

    fn single(deg: i32, t: i64, table: &[(i64, i32)], qq: Option<i64>) -> Result<WeightedComplex> {
        let f = q();
        WeightedComplex::new(
            FinComplex::with_zero_differentials(f, deg, vec![1]),
            vec![diag(f, &[f.from_i64(t)])],
            table.iter().map(|&(l, w)| (f.from_i64(l), w)).collect(),
            qq.map(|x| f.from_i64(x)),
        )
    }

    #[test]
    fn purity_examples() {
        assert!(purity_check(&single(0, 1, &[(1, 0)], None).unwrap()).pure());
        assert!(purity_check(&single(1, 3, &[(3, 1)], Some(9)).unwrap()).pure());
        assert!(!purity_check(&single(0, 3, &[(3, 1)], None).unwrap()).pure());
        // 3 cannot have weight 2 for q = 9
        assert!(single(1, 3, &[(3, 2)], Some(9)).is_err());
        // eigenvalue missing from the table
        assert!(single(0, 2, &[(1, 0)], None).is_err());
    }

    #[test]
    fn split_acyclic_and_zero_differential() {
        let f = q();
        let mut d = Matrix::zeros(f, 1, 1);
        d[(0, 0)] = f.one();
        let acyclic = WeightedComplex::new(
            FinComplex::new(f, 0, vec![1, 1], vec![d]).unwrap(),
            vec![diag(f, &[f.from_i64(3)]), diag(f, &[f.from_i64(3)])],
            BTreeMap::from([(f.from_i64(3), 1)]),
            None,
        )
        .unwrap();
        let s = split_pure(&acyclic).unwrap();
        assert!(verify_split(&acyclic, &s).passed());
        assert_eq!(s.cohomology.total_dim(), 0);

        let zero = single(1, 3, &[(3, 1)], None).unwrap();
        let s = split_pure(&zero).unwrap();
        assert!(verify_split(&zero, &s).passed());
        assert!(s.projection[&1][(0, 0)].is_one());
    }

    #[test]
    fn random_pure_complexes_split() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let k = random_pure_complex(3, 8, &mut rng);
            assert!(k.complex().total_dim() <= 8);
            assert!(purity_check(&k).pure());
            let s = split_pure(&k).unwrap();
            assert!(verify_split(&k, &s).passed());
        }
    }

    #[test]
    fn negative_ext() {
        let k = single(0, 1, &[(1, 0)], None).unwrap();
        let r = negative_ext_check(&k, &k);
        assert_eq!(r.ext_dims, BTreeMap::from([(0, 1), (1, 1)]));
        assert!(r.negative_vanishes());
        let bad = impure_counterexample();
        let r = negative_ext_check(&bad, &bad);
        assert!(!r.both_pure);
        assert!(!r.negative_vanishes());
        assert!(r.equivariant_hom_dims.contains_key(&-1));
    }

    #[test]
    fn curated_algebras_split_multiplicatively() {
        for (name, a) in curated_algebras(3) {
            let r = multiplicative_split_check(&a).unwrap();
            assert!(r.passed(), "{name}: {r:?}");
            assert!(r.checked_pairs > 0);
        }
    }

    #[test]
    fn tensor_preserves_purity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..4 {
            let a = random_pure_complex(3, 3, &mut rng);
            let b = random_pure_complex(3, 3, &mut rng);
            let t = a.tensor(&b).unwrap();
            assert_eq!(t.complex().total_dim(), a.complex().total_dim() * b.complex().total_dim());
            assert!(purity_check(&t).pure());
        }
    }
}
