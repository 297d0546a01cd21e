use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{malformed, Result};

use super::field::{Field, FieldElem};

/// Dense matrix over a [`Field`], row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(malformed("ragged matrix rows"));
        }
        let data: Vec<FieldElem> = rows.into_iter().flatten().collect();
        if data.iter().any(|x| x.field() != field) {
            return Err(malformed("matrix entry from a different field"));
        }
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    /// Convenience constructor for small integer matrices; `cols` disambiguates
    /// the empty case.
    pub fn from_i64(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count must equal rows × cols");
        Matrix { field, rows, cols, data: entries.iter().map(|&x| field.from_i64(x)).collect() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape());
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape());
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &FieldElem) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// Matrix with the given columns (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<FieldElem>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
            }
        }
        m
    }

    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..rhs.cols {
                m[(r, self.cols + c)] = rhs[(r, c)].clone();
            }
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m[(r, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else { continue };
            m.swap_rows(row, pr);
            let inv = m[(row, col)].inv().unwrap();
            for c in col..m.cols {
                m[(row, c)] = &m[(row, c)] * &inv;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.cols {
                        if !m[(row, c)].is_zero() {
                            let t = &factor * &m[(row, c)];
                            m[(r, c)] = &m[(r, c)] - &t;
                        }
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Exact rank over the matrix's field.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        match self.field {
            Field::Prime(p) => rank_mod_p(self.rows, self.cols, self.data.iter().map(|x| x.as_fp().unwrap()).collect(), p),
            Field::Rationals => self.rref().1.len(),
        }
    }

    /// Basis of the null space, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<FieldElem>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(i, f)];
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, chosen among the original columns.
    pub fn column_space(&self) -> Vec<Vec<FieldElem>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Solves `self · x = b` for one particular solution.
    pub fn solve(&self, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
        assert_eq!(b.len(), self.rows);
        let bm = Matrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let (r, pivots) = self.hstack(&bm).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn pow(&self, e: usize) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, rhs: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows + rhs.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
        }
        for r in 0..rhs.rows {
            for c in 0..rhs.cols {
                m[(self.rows + r, self.cols + c)] = rhs[(r, c)].clone();
            }
        }
        m
    }

    pub fn kronecker(&self, rhs: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)].is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        m[(i * rhs.rows + k, j * rhs.cols + l)] = &self[(i, j)] * &rhs[(k, l)];
                    }
                }
            }
        }
        m
    }
}

fn rank_mod_p(rows: usize, cols: usize, mut a: Vec<u64>, p: u64) -> usize {
    let inv = |x: u64| -> u64 {
        let (mut acc, mut b, mut e) = (1u64, x, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| a[r * cols + col] != 0) else { continue };
        if pr != rank {
            for c in col..cols {
                a.swap(pr * cols + c, rank * cols + c);
            }
        }
        let pinv = inv(a[rank * cols + col]);
        for c in col..cols {
            a[rank * cols + c] = a[rank * cols + c] * pinv % p;
        }
        for r in rank + 1..rows {
            let f = a[r * cols + col];
            if f == 0 {
                continue;
            }
            for c in col..cols {
                let t = a[rank * cols + c];
                if t != 0 {
                    a[r * cols + c] = (a[r * cols + c] + p - f * t % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElem;
    fn index(&self, (r, c): (usize, usize)) -> &FieldElem {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElem {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let q = Field::Rationals;
        assert_eq!(Matrix::identity(q, 2).rank(), 2);
        assert_eq!(Matrix::zeros(q, 2, 2).rank(), 0);
        assert_eq!(Matrix::from_i64(q, 2, 2, &[1, 2, 2, 4]).rank(), 1);
        let f = Field::prime(5).unwrap();
        // det = 5 vanishes mod 5
        assert_eq!(Matrix::from_i64(f, 2, 2, &[1, 2, 3, 11]).rank(), 1);
        assert_eq!(Matrix::from_i64(q, 2, 2, &[1, 2, 3, 11]).rank(), 2);
    }

    #[test]
    fn kernel_and_solve() {
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, 2, 3, &[1, 2, 3, 2, 4, 6]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let x = m.solve(&[q.from_i64(2), q.from_i64(4)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![q.from_i64(2), q.from_i64(4)]);
        assert!(m.solve(&[q.from_i64(1), q.from_i64(1)]).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, 2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(q, 2));
        assert!(Matrix::from_i64(q, 2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }
}
