//! Graded modules over the exterior algebra `E = Λ(W)`, the resolution of `k`
//! over `E`, and the BGG linear complex over `S = Sym(V)`, `V = W^*`.
//!
//! Everything is truncated modulo `m^N` and expanded over `k`. Each truncated
//! basis vector carries an internal weight that the differentials preserve,
//! so cohomology can be compared weight by weight.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{malformed, precondition, Result};
use crate::exactlin::{Field, FieldElem, FinComplex, Matrix};
use crate::exterior;
use crate::laurent::{monomials_below, monomials_of_degree};

/// A finite graded `Λ(k^n)`-module: pieces `M^lo … M^{lo+len−1}` and, for each
/// basis vector `w_k`, maps `A_k^{(i)} : M^i → M^{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtAlgModule {
    field: Field,
    n: usize,
    lo: i32,
    dims: Vec<usize>,
    /// `actions[k][j]` maps piece `j` to piece `j + 1`.
    actions: Vec<Vec<Matrix>>,
}

impl ExtAlgModule {
    /// Checks shapes only; see [`validate_module`] for the algebra relations.
    pub fn new(field: Field, n: usize, lo: i32, dims: Vec<usize>, actions: Vec<Vec<Matrix>>) -> Result<ExtAlgModule> {
        if actions.len() != n {
            return Err(malformed(format!("need one action per generator: {n} expected, {} given", actions.len())));
        }
        for (k, a) in actions.iter().enumerate() {
            if a.len() != dims.len().saturating_sub(1) {
                return Err(malformed(format!("action of w_{} has {} maps for {} pieces", k + 1, a.len(), dims.len())));
            }
            for (j, m) in a.iter().enumerate() {
                if m.shape() != (dims[j + 1], dims[j]) || m.field() != field {
                    return Err(malformed(format!(
                        "action of w_{} on degree {} has shape {:?}, expected {:?}",
                        k + 1,
                        lo + j as i32,
                        m.shape(),
                        (dims[j + 1], dims[j])
                    )));
                }
            }
        }
        Ok(ExtAlgModule { field, n, lo, dims, actions })
    }

    /// `Λ(k^n)` itself, with `Λ^p` in degree `p`.
    pub fn free(field: Field, n: usize) -> ExtAlgModule {
        let dims = (0..=n).map(|p| exterior::basis(n, p).len()).collect();
        let actions = (0..n)
            .map(|k| {
                let mut coeffs = vec![field.zero(); n];
                coeffs[k] = field.one();
                (0..n).map(|p| exterior::left_mult_linear(field, n, p, &coeffs)).collect()
            })
            .collect();
        ExtAlgModule { field, n, lo: 0, dims, actions }
    }

    /// `k` in degree `deg` with zero action.
    pub fn trivial(field: Field, n: usize, deg: i32) -> ExtAlgModule {
        ExtAlgModule { field, n, lo: deg, dims: vec![1], actions: vec![vec![]; n] }
    }

    /// `E/J` for a monomial ideal `J`, given by the surviving masks (a set
    /// closed under taking subsets), with `Λ^p` in degree `p`.
    pub fn monomial_quotient(field: Field, n: usize, masks: &[u32]) -> Result<ExtAlgModule> {
        let mut sorted: Vec<u32> = masks.to_vec();
        sorted.sort_by_key(|m| (m.count_ones(), *m));
        sorted.dedup();
        for &m in &sorted {
            if m >> n != 0 {
                return Err(malformed(format!("mask {m:#b} uses more than {n} generators")));
            }
            if (0..n).any(|k| m & (1 << k) != 0 && !sorted.contains(&(m & !(1 << k)))) {
                return Err(malformed(format!("mask {m:#b} is not closed under subsets")));
            }
        }
        let top = sorted.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0);
        let by_deg: Vec<Vec<u32>> =
            (0..=top).map(|p| sorted.iter().copied().filter(|m| m.count_ones() as usize == p).collect()).collect();
        let dims: Vec<usize> = by_deg.iter().map(Vec::len).collect();
        let actions = (0..n)
            .map(|k| {
                (0..top)
                    .map(|p| {
                        let mut a = Matrix::zeros(field, dims[p + 1], dims[p]);
                        for (c, &m) in by_deg[p].iter().enumerate() {
                            if let Some((s, out)) = exterior::wedge(1 << k, m) {
                                if let Some(r) = by_deg[p + 1].iter().position(|&x| x == out) {
                                    a[(r, c)] = field.from_i64(s);
                                }
                            }
                        }
                        a
                    })
                    .collect()
            })
            .collect();
        Ok(ExtAlgModule { field, n, lo: 0, dims, actions })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// One past the top degree.
    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32
    }

    pub fn dim(&self, i: i32) -> usize {
        if i < self.lo || i >= self.hi() {
            0
        } else {
            self.dims[(i - self.lo) as usize]
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `A_k^{(i)} : M^i → M^{i+1}`, zero outside the stored range.
    pub fn action(&self, k: usize, i: i32) -> Matrix {
        if i >= self.lo && i + 1 < self.hi() {
            self.actions[k][(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(i + 1), self.dim(i))
        }
    }

    /// `M[s]`: degrees move down by `s`. The action is unchanged.
    pub fn shifted(&self, s: i32) -> ExtAlgModule {
        ExtAlgModule { lo: self.lo - s, ..self.clone() }
    }

    pub fn direct_sum(&self, other: &ExtAlgModule) -> ExtAlgModule {
        assert_eq!((self.field, self.n), (other.field, other.n));
        if self.dims.is_empty() {
            return other.clone();
        }
        if other.dims.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let dims = (lo..hi).map(|i| self.dim(i) + other.dim(i)).collect();
        let actions = (0..self.n)
            .map(|k| (lo..hi - 1).map(|i| self.action(k, i).direct_sum(&other.action(k, i))).collect())
            .collect();
        ExtAlgModule { field: self.field, n: self.n, lo, dims, actions }
    }

    /// Replaces the action of `w_k` by `Σ_l g_{kl} A_l`, i.e. changes basis of `W`.
    pub fn mix_generators(&self, g: &Matrix) -> ExtAlgModule {
        assert_eq!(g.shape(), (self.n, self.n));
        let actions = (0..self.n)
            .map(|k| {
                (0..self.dims.len().saturating_sub(1))
                    .map(|j| {
                        (0..self.n).fold(Matrix::zeros(self.field, self.dims[j + 1], self.dims[j]), |acc, l| {
                            acc.add(&self.actions[l][j].scale(&g[(k, l)]))
                        })
                    })
                    .collect()
            })
            .collect();
        ExtAlgModule { actions, ..self.clone() }
    }

    /// Conjugates the action by invertible `P_i` on each piece.
    pub fn change_basis(&self, ps: &[Matrix]) -> ExtAlgModule {
        assert_eq!(ps.len(), self.dims.len());
        let inv: Vec<Matrix> = ps.iter().map(|p| p.inverse().expect("basis change must be invertible")).collect();
        let actions = self
            .actions
            .iter()
            .map(|a| a.iter().enumerate().map(|(j, m)| ps[j + 1].mul(m).mul(&inv[j])).collect())
            .collect();
        ExtAlgModule { actions, ..self.clone() }
    }
}

impl fmt::Display for ExtAlgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "module over Λ(k^{}) with dims {:?} from degree {}", self.n, self.dims, self.lo)
    }
}

/// A violated exterior-algebra relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleViolation {
    /// `A_k A_k ≠ 0` starting in degree `i`.
    Square { k: usize, degree: i32 },
    /// `A_k A_j + A_j A_k ≠ 0` starting in degree `i`.
    Anticommute { k: usize, j: usize, degree: i32 },
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleViolation::Square { k, degree } => write!(f, "w_{}^2 acts nontrivially on degree {}", k + 1, degree),
            ModuleViolation::Anticommute { k, j, degree } => {
                write!(f, "w_{} and w_{} fail to anticommute on degree {}", k + 1, j + 1, degree)
            }
        }
    }
}

/// All violated relations; empty for a valid module.
pub fn validate_module(m: &ExtAlgModule) -> Vec<ModuleViolation> {
    let mut out = Vec::new();
    for i in m.lo..m.hi() - 1 {
        for k in 0..m.n {
            if !m.action(k, i + 1).mul(&m.action(k, i)).is_zero() {
                out.push(ModuleViolation::Square { k, degree: i });
            }
            for j in k + 1..m.n {
                let s = m.action(k, i + 1).mul(&m.action(j, i)).add(&m.action(j, i + 1).mul(&m.action(k, i)));
                if !s.is_zero() {
                    out.push(ModuleViolation::Anticommute { k, j, degree: i });
                }
            }
        }
    }
    out
}

fn require_valid(m: &ExtAlgModule) -> Result<()> {
    match validate_module(m).first() {
        None => Ok(()),
        Some(v) => Err(precondition(format!("invalid exterior-algebra module: {v}"))),
    }
}

/// A finite complex over `k` whose basis vectors carry weights preserved by
/// the differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedComplex {
    complex: FinComplex,
    weights: Vec<Vec<i32>>,
}

impl TruncatedComplex {
    pub fn new(complex: FinComplex, weights: Vec<Vec<i32>>) -> Result<TruncatedComplex> {
        if weights.len() != complex.dims().len() || weights.iter().zip(complex.dims()).any(|(w, &d)| w.len() != d) {
            return Err(malformed("one weight per basis vector required"));
        }
        for i in complex.degrees() {
            if let Some(d) = complex.differential(i) {
                let (src, dst) = (&weights[(i - complex.lo()) as usize], &weights[(i + 1 - complex.lo()) as usize]);
                for r in 0..d.rows() {
                    for c in 0..d.cols() {
                        if !d[(r, c)].is_zero() && src[c] != dst[r] {
                            return Err(malformed(format!("differential in degree {i} does not preserve weight")));
                        }
                    }
                }
            }
        }
        Ok(TruncatedComplex { complex, weights })
    }

    pub fn complex(&self) -> &FinComplex {
        &self.complex
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        self.complex.nonzero_cohomology()
    }

    /// Weight-graded piece as a complex of its own.
    pub fn weight_piece(&self, w: i32) -> FinComplex {
        let c = &self.complex;
        let idx: Vec<Vec<usize>> =
            self.weights.iter().map(|ws| (0..ws.len()).filter(|&b| ws[b] == w).collect()).collect();
        let dims = idx.iter().map(Vec::len).collect();
        let diffs = (0..idx.len().saturating_sub(1))
            .map(|j| submatrix(c.differential(c.lo() + j as i32).unwrap(), &idx[j + 1], &idx[j]))
            .collect();
        FinComplex::new_unchecked(c.field(), c.lo(), dims, diffs).unwrap()
    }

    pub fn weights(&self) -> Vec<i32> {
        let mut ws: Vec<i32> = self.weights.iter().flatten().copied().collect();
        ws.sort();
        ws.dedup();
        ws
    }

    /// Nonzero `dim H^i` of the weight-`w` piece, keyed by `(w, i)`.
    pub fn cohomology_by_weight(&self) -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for w in self.weights() {
            for (i, d) in self.weight_piece(w).nonzero_cohomology() {
                out.insert((w, i), d);
            }
        }
        out
    }
}

pub(crate) fn submatrix(m: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(m.field(), rows.len(), cols.len());
    for (a, &r) in rows.iter().enumerate() {
        for (b, &c) in cols.iter().enumerate() {
            out[(a, b)] = m[(r, c)].clone();
        }
    }
    out
}

/// `Γ^j(W) ⊗ E` for `j ≤ L`, with `w^{[a]} ⊗ λ ↦ Σ_k w^{[a − e_k]} ⊗ w_k ∧ λ`.
#[derive(Clone, Debug)]
pub struct ResolutionOfK {
    field: Field,
    n: usize,
    len: usize,
    /// `gamma[j]`: divided-power monomials of degree `j`.
    gamma: Vec<Vec<Vec<u32>>>,
}

impl ResolutionOfK {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Rank over `E` of the `j`-th term.
    pub fn rank(&self, j: usize) -> usize {
        self.gamma.get(j).map_or(0, Vec::len)
    }

    pub fn gamma_basis(&self, j: usize) -> &[Vec<u32>] {
        &self.gamma[j]
    }

    /// `d : Γ^j ⊗ Λ^q → Γ^{j−1} ⊗ Λ^{q+1}`; basis index `a · dim Λ^q + m`.
    pub fn differential(&self, j: usize, q: usize) -> Matrix {
        assert!(j >= 1 && j <= self.len);
        let (n, field) = (self.n, self.field);
        let src_l = exterior::basis(n, q);
        let dst_l = exterior::basis(n, q + 1);
        let dst_g: HashMap<&Vec<u32>, usize> = self.gamma[j - 1].iter().enumerate().map(|(i, a)| (a, i)).collect();
        let mut d = Matrix::zeros(field, self.gamma[j - 1].len() * dst_l.len(), self.gamma[j].len() * src_l.len());
        for (ai, a) in self.gamma[j].iter().enumerate() {
            for (mi, &mask) in src_l.iter().enumerate() {
                for k in 0..n {
                    if a[k] == 0 {
                        continue;
                    }
                    let Some((s, out)) = exterior::wedge(1 << k, mask) else { continue };
                    let mut b = a.clone();
                    b[k] -= 1;
                    let r = dst_g[&b] * dst_l.len() + exterior::index_of(&dst_l, out);
                    let c = ai * src_l.len() + mi;
                    d[(r, c)] = &d[(r, c)] + &field.from_i64(s);
                }
            }
        }
        d
    }

    /// Weight-`w` strand: `Γ^j ⊗ Λ^{w−j}` in cohomological degree `−j`.
    pub fn weight_complex(&self, w: usize) -> FinComplex {
        let top = w.min(self.len);
        let dims: Vec<usize> =
            (0..=top).rev().map(|j| self.rank(j) * exterior::basis(self.n, w - j).len()).collect();
        let diffs = (1..=top).rev().map(|j| self.differential(j, w - j)).collect();
        FinComplex::new_unchecked(self.field, -(top as i32), dims, diffs).unwrap()
    }
}

pub fn resolution_of_k(field: Field, n: usize, len: usize) -> Result<ResolutionOfK> {
    if len == 0 {
        return Err(precondition("resolution length must be at least 1"));
    }
    if n == 0 || n > 8 {
        return Err(precondition("exterior algebra needs 1 to 8 generators"));
    }
    let gamma = (0..=len).map(|j| monomials_of_degree(n, j)).collect();
    Ok(ResolutionOfK { field, n, len, gamma })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionReport {
    pub d_squared_zero: bool,
    /// Weight-0 strand is `k` in degree 0.
    pub weight_zero_is_k: bool,
    /// `(weight, exact)` for weights `1..=L`.
    pub exact_weights: Vec<(usize, bool)>,
}

impl ResolutionReport {
    pub fn passed(&self) -> bool {
        self.d_squared_zero && self.weight_zero_is_k && self.exact_weights.iter().all(|e| e.1)
    }
}

pub fn check_resolution(res: &ResolutionOfK) -> ResolutionReport {
    let n = res.n;
    let d_squared_zero = (2..=res.len).all(|j| {
        (0..n.saturating_sub(1)).all(|q| res.differential(j - 1, q + 1).mul(&res.differential(j, q)).is_zero())
    });
    let weight_zero_is_k = res.weight_complex(0).nonzero_cohomology() == BTreeMap::from([(0, 1)]);
    let exact_weights = (1..=res.len).map(|w| (w, res.weight_complex(w).nonzero_cohomology().is_empty())).collect();
    ResolutionReport { d_squared_zero, weight_zero_is_k, exact_weights }
}

/// `⊕ M^i ⊗ S` with `d = Σ_k v_k A_k`, stored through the coefficient matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearComplex {
    module: ExtAlgModule,
}

impl LinearComplex {
    pub fn nvars(&self) -> usize {
        self.module.n
    }

    /// Coefficient of `v_k` in the differential leaving degree `i`.
    pub fn coefficient(&self, k: usize, i: i32) -> Matrix {
        self.module.action(k, i)
    }

    /// Ranks of the free `S`-modules, from the lowest degree.
    pub fn ranks(&self) -> (i32, &[usize]) {
        (self.module.lo, &self.module.dims)
    }

    /// `d ∘ d = 0` as an identity of quadratic forms.
    pub fn squares_to_zero(&self) -> bool {
        validate_module(&self.module).is_empty()
    }

    /// Differential leaving degree `i` as a matrix of linear forms, each entry
    /// given by its `n` coefficients.
    pub fn linear_forms(&self, i: i32) -> Vec<Vec<Vec<FieldElem>>> {
        let m = &self.module;
        let coeff: Vec<Matrix> = (0..m.n).map(|k| m.action(k, i)).collect();
        (0..m.dim(i + 1))
            .map(|r| (0..m.dim(i)).map(|c| coeff.iter().map(|a| a[(r, c)].clone()).collect()).collect())
            .collect()
    }

    /// Reduction mod `m^N`, expanded over `k`: basis `b ⊗ v^α`, `|α| < N`,
    /// in degree `i` and weight `|α| − i`.
    pub fn truncate(&self, order: usize) -> TruncatedComplex {
        let m = &self.module;
        let (field, n) = (m.field, m.n);
        let monos = monomials_below(n, order);
        let pos: HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let na = monos.len();
        let dims: Vec<usize> = m.dims.iter().map(|d| d * na).collect();
        let weights: Vec<Vec<i32>> = (m.lo..m.hi())
            .map(|i| {
                (0..m.dim(i))
                    .flat_map(|_| monos.iter().map(move |a| a.iter().sum::<u32>() as i32 - i))
                    .collect()
            })
            .collect();
        let diffs = (m.lo..m.hi() - 1)
            .map(|i| {
                let mut d = Matrix::zeros(field, m.dim(i + 1) * na, m.dim(i) * na);
                for k in 0..n {
                    let a = m.action(k, i);
                    for (ai, alpha) in monos.iter().enumerate() {
                        let mut beta = alpha.clone();
                        beta[k] += 1;
                        let Some(&bi) = pos.get(&beta) else { continue };
                        for c in 0..a.cols() {
                            for r in 0..a.rows() {
                                if !a[(r, c)].is_zero() {
                                    let (rr, cc) = (r * na + bi, c * na + ai);
                                    d[(rr, cc)] = &d[(rr, cc)] + &a[(r, c)];
                                }
                            }
                        }
                    }
                }
                d
            })
            .collect();
        let complex = FinComplex::new(field, m.lo, dims, diffs).expect("BGG differential squares to zero");
        TruncatedComplex::new(complex, weights).unwrap()
    }
}

pub fn bgg_linear_complex(m: &ExtAlgModule) -> Result<LinearComplex> {
    require_valid(m)?;
    Ok(LinearComplex { module: m.clone() })
}

/// `Hom_E(P_•, M)` for the resolution `P_•` of `k`, keeping `Γ^p` for `p < N`.
///
/// A homomorphism out of `Γ^p ⊗ E` is determined on generators, so the piece
/// is `Hom_k(Γ^p, M^i) = Sym^p(V) ⊗ M^i` in total degree `i` and weight `p − i`.
/// The differential is precomposition with the resolution's differential.
pub fn rhom_k(m: &ExtAlgModule, order: usize) -> Result<TruncatedComplex> {
    require_valid(m)?;
    if order == 0 {
        return Err(precondition("truncation order must be at least 1"));
    }
    let (field, n) = (m.field, m.n);
    let res = resolution_of_k(field, n, order)?;
    // basis of degree i: (p, generator a of Γ^p, b of M^i)
    let basis_at = |i: i32| -> Vec<(usize, usize, usize)> {
        (0..order).flat_map(|p| (0..res.rank(p)).flat_map(move |a| (0..m.dim(i)).map(move |b| (p, a, b)))).collect()
    };
    let bases: Vec<Vec<(usize, usize, usize)>> = (m.lo..m.hi()).map(basis_at).collect();
    let index: Vec<HashMap<(usize, usize, usize), usize>> =
        bases.iter().map(|bs| bs.iter().enumerate().map(|(i, &t)| (t, i)).collect()).collect();
    let dims = bases.iter().map(Vec::len).collect();
    let weights = (m.lo..m.hi())
        .zip(&bases)
        .map(|(i, bs)| bs.iter().map(|&(p, _, _)| p as i32 - i).collect())
        .collect();
    // generator parts of d : Γ^{p+1} ⊗ Λ^0 → Γ^p ⊗ Λ^1, entry at (a·n + k, β)
    let comult: Vec<Matrix> = (1..order).map(|p| res.differential(p, 0)).collect();
    let diffs = (m.lo..m.hi() - 1)
        .map(|i| {
            let j = (i - m.lo) as usize;
            let actions: Vec<Matrix> = (0..n).map(|k| m.action(k, i)).collect();
            let mut d = Matrix::zeros(field, bases[j + 1].len(), bases[j].len());
            for (col, &(p, a, b)) in bases[j].iter().enumerate() {
                if p + 1 >= order {
                    continue;
                }
                let dm = &comult[p];
                for beta in 0..res.rank(p + 1) {
                    for (k, act) in actions.iter().enumerate() {
                        let c = &dm[(a * n + k, beta)];
                        if c.is_zero() {
                            continue;
                        }
                        for b2 in 0..act.rows() {
                            let x = &act[(b2, b)];
                            if !x.is_zero() {
                                let row = index[j + 1][&(p + 1, beta, b2)];
                                d[(row, col)] = &d[(row, col)] + &(c * x);
                            }
                        }
                    }
                }
            }
            d
        })
        .collect();
    let complex = FinComplex::new(field, m.lo, dims, diffs)?;
    TruncatedComplex::new(complex, weights)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub bgg: BTreeMap<(i32, i32), usize>,
    pub rhom: BTreeMap<(i32, i32), usize>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.bgg == self.rhom
    }

    pub fn totals(map: &BTreeMap<(i32, i32), usize>) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (&(_, i), &d) in map {
            *out.entry(i).or_insert(0) += d;
        }
        out
    }
}

/// Weight- and degreewise cohomology of the truncated BGG complex against
/// the truncated `RHom_E(k, M)`.
pub fn check_bgg_equivalence(m: &ExtAlgModule, order: usize) -> Result<EquivalenceReport> {
    let bgg = bgg_linear_complex(m)?.truncate(order).cohomology_by_weight();
    let rhom = rhom_k(m, order)?.cohomology_by_weight();
    Ok(EquivalenceReport { bgg, rhom })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhomKkReport {
    /// Total cohomology dimension per weight.
    pub graded_dims: Vec<usize>,
    pub expected: Vec<usize>,
    /// Each weight's cohomology sits in a single degree, namely 0.
    pub concentrated: bool,
}

impl RhomKkReport {
    pub fn passed(&self) -> bool {
        self.graded_dims == self.expected && self.concentrated
    }
}

pub fn rhom_kk_check(field: Field, n: usize, order: usize) -> Result<RhomKkReport> {
    if n == 0 {
        return Err(precondition("need at least one generator"));
    }
    let c = rhom_k(&ExtAlgModule::trivial(field, n, 0), order)?;
    let by_w = c.cohomology_by_weight();
    let graded_dims = (0..order as i32).map(|w| by_w.iter().filter(|((x, _), _)| *x == w).map(|(_, d)| d).sum()).collect();
    let expected = (0..order).map(|p| monomials_of_degree(n, p).len()).collect();
    let concentrated = by_w.keys().all(|&(_, i)| i == 0);
    Ok(RhomKkReport { graded_dims, expected, concentrated })
}

fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let mut m = Matrix::zeros(field, n, n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = field.from_i64(rng.gen_range(-2..=2));
            }
        }
        if m.rank() == n {
            return m;
        }
    }
}

fn random_downset<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Vec<u32> {
    let mut set = vec![0u32];
    while set.len() < size {
        let mut cands: Vec<u32> = (0u32..1 << n)
            .filter(|m| !set.contains(m) && (0..n).all(|k| m & (1 << k) == 0 || set.contains(&(m & !(1 << k)))))
            .collect();
        if cands.is_empty() {
            break;
        }
        cands.sort();
        set.push(*cands.choose(rng).unwrap());
    }
    set
}

/// A random valid module of total dimension at most `max_dim`: a monomial
/// quotient of `E`, possibly plus a trivial summand, shifted, with random
/// changes of basis on each piece and on `W`.
pub fn random_module<R: Rng + ?Sized>(field: Field, n: usize, max_dim: usize, rng: &mut R) -> ExtAlgModule {
    assert!(max_dim >= 1);
    let size = rng.gen_range(1..=max_dim);
    let masks = random_downset(n, size, rng);
    let mut m = ExtAlgModule::monomial_quotient(field, n, &masks).unwrap();
    if m.total_dim() < max_dim && rng.gen_bool(0.4) {
        let d = rng.gen_range(m.lo()..=m.hi());
        m = m.direct_sum(&ExtAlgModule::trivial(field, n, d));
    }
    m = m.shifted(rng.gen_range(-1..=1));
    let ps: Vec<Matrix> = m.dims().iter().map(|&d| random_invertible(field, d, rng)).collect();
    m = m.change_basis(&ps);
    m.mix_generators(&random_invertible(field, n, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn validation_examples() {
        assert!(validate_module(&ExtAlgModule::free(q(), 2)).is_empty());
        assert!(validate_module(&ExtAlgModule::trivial(q(), 3, 0)).is_empty());
        let id = Matrix::identity(q(), 1);
        let bad = ExtAlgModule::new(q(), 2, 0, vec![1, 1, 1], vec![vec![id.clone(), id.clone()], vec![id.clone(), id]]).unwrap();
        let v = validate_module(&bad);
        assert!(v.contains(&ModuleViolation::Square { k: 0, degree: 0 }));
        assert!(bgg_linear_complex(&bad).is_err());
    }

    #[test]
    fn resolution_examples() {
        let r = resolution_of_k(q(), 1, 3).unwrap();
        assert_eq!((0..=3).map(|j| r.rank(j)).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        assert!(check_resolution(&r).passed());
        let r = resolution_of_k(q(), 2, 2).unwrap();
        assert!(check_resolution(&r).passed());
        assert_eq!(r.weight_complex(0).nonzero_cohomology(), BTreeMap::from([(0, 1)]));
        for n in 1..=3 {
            assert!(check_resolution(&resolution_of_k(q(), n, 4).unwrap()).passed());
        }
    }

    #[test]
    fn bgg_of_free_module_is_koszul() {
        let l = bgg_linear_complex(&ExtAlgModule::free(q(), 1)).unwrap();
        let t = l.truncate(4);
        // S --v--> S mod m^4: cokernel k in the top degree, plus the truncation class v^3
        assert_eq!(t.cohomology_by_weight(), BTreeMap::from([((-1, 1), 1), ((3, 0), 1)]));
        assert!(check_bgg_equivalence(&ExtAlgModule::free(q(), 2), 3).unwrap().passed());
        let forms = bgg_linear_complex(&ExtAlgModule::free(q(), 2)).unwrap().linear_forms(0);
        // 1 ↦ v_1 e_1 + v_2 e_2
        assert!(forms[0][0][0].is_one() && forms[0][0][1].is_zero());
        assert!(forms[1][0][1].is_one() && forms[1][0][0].is_zero());
    }

    #[test]
    fn rhom_kk_examples() {
        assert_eq!(rhom_kk_check(q(), 2, 3).unwrap().graded_dims, vec![1, 2, 3]);
        assert_eq!(rhom_kk_check(q(), 1, 5).unwrap().graded_dims, vec![1; 5]);
        let r = rhom_kk_check(q(), 3, 3).unwrap();
        assert_eq!(r.graded_dims, vec![1, 3, 6]);
        assert!(r.passed());
    }

    #[test]
    fn random_modules_are_valid_and_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let n = rng.gen_range(1..=3);
            let m = random_module(q(), n, 6, &mut rng);
            assert!(m.total_dim() <= 6);
            assert!(validate_module(&m).is_empty());
            assert!(check_bgg_equivalence(&m, 3).unwrap().passed());
        }
    }
}
