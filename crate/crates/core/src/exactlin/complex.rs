use std::collections::BTreeMap;

use crate::error::{malformed, Result};

use super::field::Field;
use super::matrix::Matrix;

/// A bounded cochain complex of finite-dimensional `k`-vector spaces.
///
/// Degrees run over `lo..lo + dims.len()`; `diffs[j]` is the differential from
/// degree `lo + j` to `lo + j + 1`, of shape `dims[j + 1] × dims[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinComplex {
    field: Field,
    lo: i32,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl FinComplex {
    /// Validates shapes and `d ∘ d = 0`.
    pub fn new(field: Field, lo: i32, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<FinComplex> {
        let c = FinComplex::new_unchecked(field, lo, dims, diffs)?;
        for j in 0..c.diffs.len().saturating_sub(1) {
            if !c.diffs[j + 1].mul(&c.diffs[j]).is_zero() {
                return Err(malformed(format!("d∘d ≠ 0 at degree {}", lo + j as i32)));
            }
        }
        Ok(c)
    }

    /// Validates shapes only; the caller vouches for `d ∘ d = 0`.
    pub fn new_unchecked(field: Field, lo: i32, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<FinComplex> {
        if dims.is_empty() {
            if !diffs.is_empty() {
                return Err(malformed("differentials without spaces"));
            }
        } else if diffs.len() != dims.len() - 1 {
            return Err(malformed(format!(
                "{} spaces need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (j, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[j + 1], dims[j]) {
                return Err(malformed(format!(
                    "differential at degree {} has shape {:?}, expected {:?}",
                    lo + j as i32,
                    d.shape(),
                    (dims[j + 1], dims[j])
                )));
            }
            if d.field() != field {
                return Err(malformed("differential over a different field"));
            }
        }
        Ok(FinComplex { field, lo, dims, diffs })
    }

    /// The complex with the given spaces and zero differentials.
    pub fn with_zero_differentials(field: Field, lo: i32, dims: Vec<usize>) -> FinComplex {
        let diffs = dims.windows(2).map(|w| Matrix::zeros(field, w[1], w[0])).collect();
        FinComplex { field, lo, dims, diffs }
    }

    pub fn zero(field: Field) -> FinComplex {
        FinComplex { field, lo: 0, dims: vec![], diffs: vec![] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn degrees(&self) -> std::ops::Range<i32> {
        self.lo..self.lo + self.dims.len() as i32
    }

    pub fn dim(&self, deg: i32) -> usize {
        let j = deg - self.lo;
        if j < 0 || j as usize >= self.dims.len() {
            0
        } else {
            self.dims[j as usize]
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Differential leaving degree `deg`, if both ends are in range.
    pub fn differential(&self, deg: i32) -> Option<&Matrix> {
        let j = deg - self.lo;
        if j < 0 {
            None
        } else {
            self.diffs.get(j as usize)
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `dim H^i = dim ker d^i − rank d^{i−1}` for every degree in range.
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        let ranks: Vec<usize> = self.diffs.iter().map(Matrix::rank).collect();
        self.dims
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let out = if j < ranks.len() { ranks[j] } else { 0 };
                let inc = if j > 0 { ranks[j - 1] } else { 0 };
                (self.lo + j as i32, d - out - inc)
            })
            .collect()
    }

    /// Same as [`cohomology_dims`](Self::cohomology_dims) with zero entries dropped.
    pub fn nonzero_cohomology(&self) -> BTreeMap<i32, usize> {
        self.cohomology_dims().into_iter().filter(|&(_, d)| d > 0).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|i| sign(i) * self.dim(i) as i64).sum()
    }

    /// Direct sum of two complexes over the same field, with degree ranges merged.
    pub fn direct_sum(&self, other: &FinComplex) -> FinComplex {
        if self.dims.is_empty() {
            return other.clone();
        }
        if other.dims.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = (self.lo + self.dims.len() as i32).max(other.lo + other.dims.len() as i32);
        let dims: Vec<usize> = (lo..hi).map(|i| self.dim(i) + other.dim(i)).collect();
        let diffs = (lo..hi - 1)
            .map(|i| {
                let a = self.differential(i).cloned().unwrap_or_else(|| Matrix::zeros(self.field, self.dim(i + 1), self.dim(i)));
                let b = other.differential(i).cloned().unwrap_or_else(|| Matrix::zeros(self.field, other.dim(i + 1), other.dim(i)));
                a.direct_sum(&b)
            })
            .collect();
        FinComplex { field: self.field, lo, dims, diffs }
    }

    /// `C[k]`: the space in degree `i` is `C^{i+k}`; differentials change sign for odd `k`.
    pub fn shift(&self, k: i32) -> FinComplex {
        let s = self.field.from_i64(sign(k));
        FinComplex {
            field: self.field,
            lo: self.lo - k,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&s)).collect(),
        }
    }
}

/// Degreewise maps `f^i : A^i → B^i`; degrees not listed are zero maps.
pub type ChainMap = BTreeMap<i32, Matrix>;

fn map_at(a: &FinComplex, b: &FinComplex, f: &ChainMap, i: i32) -> Matrix {
    f.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(a.field, b.dim(i), a.dim(i)))
}

fn diff_or_zero(c: &FinComplex, i: i32) -> Matrix {
    c.differential(i).cloned().unwrap_or_else(|| Matrix::zeros(c.field, c.dim(i + 1), c.dim(i)))
}

fn degree_span(a: &FinComplex, b: &FinComplex) -> (i32, i32) {
    let ends = [a, b].into_iter().filter(|c| !c.dims.is_empty());
    let lo = ends.clone().map(|c| c.lo).min().unwrap_or(0);
    let hi = ends.map(|c| c.lo + c.dims.len() as i32).max().unwrap_or(0);
    (lo, hi)
}

/// Shapes agree and `d_B f = f d_A` in every degree.
pub fn is_chain_map(a: &FinComplex, b: &FinComplex, f: &ChainMap) -> bool {
    let (lo, hi) = degree_span(a, b);
    if f.iter().any(|(&i, m)| m.shape() != (b.dim(i), a.dim(i))) {
        return false;
    }
    (lo - 1..hi).all(|i| diff_or_zero(b, i).mul(&map_at(a, b, f, i)) == map_at(a, b, f, i + 1).mul(&diff_or_zero(a, i)))
}

/// `Cone(f)^i = A^{i+1} ⊕ B^i` with `d(a, b) = (−d_A a, f a + d_B b)`.
pub fn mapping_cone(a: &FinComplex, b: &FinComplex, f: &ChainMap) -> FinComplex {
    let (lo, hi) = degree_span(a, b);
    let (lo, hi) = (lo - 1, hi);
    let field = a.field;
    let dims: Vec<usize> = (lo..hi).map(|i| a.dim(i + 1) + b.dim(i)).collect();
    let minus = field.from_i64(-1);
    let diffs = (lo..hi - 1)
        .map(|i| {
            let (na1, nb0) = (a.dim(i + 1), b.dim(i));
            let (na2, nb1) = (a.dim(i + 2), b.dim(i + 1));
            let mut d = Matrix::zeros(field, na2 + nb1, na1 + nb0);
            let da = diff_or_zero(a, i + 1).scale(&minus);
            let fa = map_at(a, b, f, i + 1);
            let db = diff_or_zero(b, i);
            for r in 0..na2 {
                for c in 0..na1 {
                    d[(r, c)] = da[(r, c)].clone();
                }
            }
            for r in 0..nb1 {
                for c in 0..na1 {
                    d[(na2 + r, c)] = fa[(r, c)].clone();
                }
                for c in 0..nb0 {
                    d[(na2 + r, na1 + c)] = db[(r, c)].clone();
                }
            }
            d
        })
        .collect();
    FinComplex { field, lo, dims, diffs }
}

/// A chain map whose cone is acyclic.
pub fn is_quasi_isomorphism(a: &FinComplex, b: &FinComplex, f: &ChainMap) -> bool {
    is_chain_map(a, b, f) && mapping_cone(a, b, f).nonzero_cohomology().is_empty()
}

pub(crate) fn sign(i: i32) -> i64 {
    if i.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differentials() {
        let q = Field::Rationals;
        let c = FinComplex::with_zero_differentials(q, -1, vec![1, 2, 1]);
        assert_eq!(c.cohomology_dims(), BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
    }

    #[test]
    fn acyclic_identity() {
        let q = Field::Rationals;
        let c = FinComplex::new(q, 0, vec![1, 1], vec![Matrix::identity(q, 1)]).unwrap();
        assert!(c.nonzero_cohomology().is_empty());
    }

    #[test]
    fn koszul_of_unit_pair_is_acyclic() {
        let q = Field::Rationals;
        let d0 = Matrix::from_i64(q, 2, 1, &[1, 0]);
        let d1 = Matrix::from_i64(q, 1, 2, &[0, 1]);
        let c = FinComplex::new(q, -1, vec![1, 2, 1], vec![d0, d1]).unwrap();
        assert!(c.nonzero_cohomology().is_empty());
    }

    #[test]
    fn rejects_malformed() {
        let q = Field::Rationals;
        let bad_shape = FinComplex::new(q, 0, vec![1, 2], vec![Matrix::zeros(q, 1, 1)]);
        assert!(bad_shape.is_err());
        let d = Matrix::identity(q, 1);
        let not_complex = FinComplex::new(q, 0, vec![1, 1, 1], vec![d.clone(), d]);
        assert!(not_complex.is_err());
    }

    #[test]
    fn shift_moves_degrees() {
        let q = Field::Rationals;
        let c = FinComplex::with_zero_differentials(q, 0, vec![3]);
        assert_eq!(c.shift(2).cohomology_dims(), BTreeMap::from([(-2, 3)]));
    }

    #[test]
    fn cone_detects_quasi_isomorphisms() {
        let q = Field::Rationals;
        let k = FinComplex::with_zero_differentials(q, 0, vec![1]);
        let id: ChainMap = BTreeMap::from([(0, Matrix::identity(q, 1))]);
        let zero: ChainMap = BTreeMap::from([(0, Matrix::zeros(q, 1, 1))]);
        assert!(is_chain_map(&k, &k, &id));
        assert!(is_quasi_isomorphism(&k, &k, &id));
        assert!(!is_quasi_isomorphism(&k, &k, &zero));
        let acyclic = FinComplex::new(q, 0, vec![1, 1], vec![Matrix::identity(q, 1)]).unwrap();
        let empty = FinComplex::zero(q);
        assert!(is_quasi_isomorphism(&acyclic, &empty, &BTreeMap::new()));
    }
}
