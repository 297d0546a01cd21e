//! Small integer matrices: exponent data for monomial maps and subtori.

use std::fmt;

use crate::error::{malformed, Result};
use crate::exactlin::{Field, FieldElem, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<IntMatrix> {
        if data.len() != rows * cols {
            return Err(malformed(format!("{}×{} integer matrix needs {} entries", rows, cols, rows * cols)));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// From row vectors; `cols` fixes the width when there are no rows.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<IntMatrix> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(malformed("ragged integer matrix"));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, &x) in col.iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: i64) {
        self.data[r * self.cols + c] = x;
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row(&self, r: usize) -> Vec<i64> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn to_matrix(&self, field: Field) -> Matrix {
        Matrix::from_i64(field, self.rows, self.cols, &self.data)
    }

    /// Rank over `field` (for `F_p`, the number of elementary divisors prime to `p`).
    pub fn rank_over(&self, field: Field) -> usize {
        self.to_matrix(field).rank()
    }

    /// Kronecker product `self ⊗ I_k`.
    pub fn kron_identity(&self, k: usize) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows * k, self.cols * k);
        for r in 0..self.rows {
            for c in 0..self.cols {
                for d in 0..k {
                    out.set(r * k + d, c * k + d, self.get(r, c));
                }
            }
        }
        out
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let s = (0..self.cols).map(|k| self.get(i, k) * rhs.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| format!("[{}]", self.row(r).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Column-style Hermite normal form of a full-column-rank exponent matrix,
/// carrying a multiplicative target per column.
///
/// The pair `(F, t)` describes `{χ : χ^{F_j} = t_j}`. Unimodular column
/// operations on `F` change the equations but not the locus, provided the
/// targets follow along multiplicatively. The normal form is unique for a
/// given lattice and character on it, so it decides equality of loci.
pub fn hermite_with_targets(f: &IntMatrix, targets: &[FieldElem]) -> (IntMatrix, Vec<FieldElem>) {
    assert_eq!(f.cols(), targets.len());
    let mut cols: Vec<Vec<i64>> = (0..f.cols()).map(|c| f.column(c)).collect();
    let mut t: Vec<FieldElem> = targets.to_vec();
    let n = f.rows();
    let mut next = 0usize;
    // col_a ← col_a − q·col_b  and  t_a ← t_a · t_b^{−q}
    fn axpy(cols: &mut [Vec<i64>], t: &mut [FieldElem], a: usize, b: usize, q: i64) {
        if q == 0 {
            return;
        }
        let cb = cols[b].clone();
        for (x, y) in cols[a].iter_mut().zip(cb) {
            *x -= q * y;
        }
        let tb = t[b].pow(-q);
        t[a] = &t[a] * &tb;
    }
    for row in 0..n {
        if next == cols.len() {
            break;
        }
        // gcd-combine the entries of columns next.. in this row into column `next`
        loop {
            let nz: Vec<usize> = (next..cols.len()).filter(|&c| cols[c][row] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&c) = nz.first() {
                    cols.swap(next, c);
                    t.swap(next, c);
                }
                break;
            }
            let piv = *nz.iter().min_by_key(|&&c| cols[c][row].abs()).unwrap();
            for &c in &nz {
                if c != piv {
                    let q = cols[c][row].div_euclid(cols[piv][row]);
                    axpy(&mut cols, &mut t, c, piv, q);
                }
            }
        }
        if cols[next][row] == 0 {
            continue;
        }
        if cols[next][row] < 0 {
            for x in cols[next].iter_mut() {
                *x = -*x;
            }
            t[next] = t[next].inv().expect("target must be nonzero");
        }
        let p = cols[next][row];
        for c in 0..next {
            let q = cols[c][row].div_euclid(p);
            axpy(&mut cols, &mut t, c, next, q);
        }
        next += 1;
    }
    (IntMatrix::from_columns(n, &cols), t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_identity_matches_curated_layout() {
        let m = IntMatrix::from_rows(&[vec![1], vec![1]], 1).unwrap();
        let f = m.kron_identity(2);
        assert_eq!(f.column(0), vec![1, 0, 1, 0]);
        assert_eq!(f.column(1), vec![0, 1, 0, 1]);
    }

    #[test]
    fn hermite_is_basis_independent() {
        let q = Field::Rationals;
        let f1 = IntMatrix::from_columns(3, &[vec![1, 0, 1], vec![0, 1, 1]]);
        // (c1 + c2, c2) spans the same lattice
        let f2 = IntMatrix::from_columns(3, &[vec![1, 1, 2], vec![0, 1, 1]]);
        let t1 = vec![q.from_i64(2), q.from_i64(3)];
        let t2 = vec![q.from_i64(6), q.from_i64(3)];
        assert_eq!(hermite_with_targets(&f1, &t1), hermite_with_targets(&f2, &t2));
        let t3 = vec![q.from_i64(5), q.from_i64(3)];
        assert_ne!(hermite_with_targets(&f1, &t1), hermite_with_targets(&f2, &t3));
    }

    #[test]
    fn hermite_negation_inverts_target() {
        let q = Field::Rationals;
        let f = IntMatrix::from_columns(1, &[vec![-1]]);
        let (h, t) = hermite_with_targets(&f, &[q.from_i64(4)]);
        assert_eq!(h.column(0), vec![1]);
        assert_eq!(t[0], q.parse_elem("1/4").unwrap());
    }
}
