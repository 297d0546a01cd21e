//! Exterior algebra `Λ(k^n)` in the monomial basis `e_I`, `I` encoded as a bitmask.

use crate::exactlin::{Field, FieldElem, Matrix};

/// Subsets of `{0..n}` of size `p`, in increasing numeric order of their masks.
pub fn basis(n: usize, p: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == p).collect()
}

pub fn index_of(basis: &[u32], mask: u32) -> usize {
    basis.binary_search(&mask).expect("mask not in basis")
}

/// `e_a ∧ e_b = sign · e_{a ∪ b}`, or `None` when the supports overlap.
pub fn wedge(a: u32, b: u32) -> Option<(i64, u32)> {
    if a & b != 0 {
        return None;
    }
    // sign = (-1)^{#{(i, j) : i ∈ a, j ∈ b, i > j}}
    let mut inversions = 0;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        inversions += (b & ((1u32 << i) - 1)).count_ones();
        rest &= rest - 1;
    }
    Some((if inversions % 2 == 0 { 1 } else { -1 }, a | b))
}

/// Matrix of `x ↦ (Σ_j c_j e_j) ∧ x` from `Λ^p` to `Λ^{p+1}`.
pub fn left_mult_linear(field: Field, n: usize, p: usize, coeffs: &[FieldElem]) -> Matrix {
    assert_eq!(coeffs.len(), n);
    let src = basis(n, p);
    let dst = basis(n, p + 1);
    let mut m = Matrix::zeros(field, dst.len(), src.len());
    for (c, &mask) in src.iter().enumerate() {
        for (j, cj) in coeffs.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            if let Some((s, out)) = wedge(1 << j, mask) {
                let r = index_of(&dst, out);
                m[(r, c)] = &m[(r, c)] + &(cj * &field.from_i64(s));
            }
        }
    }
    m
}

/// Matrix of `x ↦ ω ∧ x` from `Λ^p` to `Λ^{p+q}` for `ω ∈ Λ^q` given by
/// `(mask, coefficient)` pairs.
pub fn left_mult(field: Field, n: usize, p: usize, q: usize, omega: &[(u32, FieldElem)]) -> Matrix {
    let src = basis(n, p);
    let dst = basis(n, p + q);
    let mut m = Matrix::zeros(field, dst.len(), src.len());
    for (c, &mask) in src.iter().enumerate() {
        for (om, coeff) in omega {
            debug_assert_eq!(om.count_ones() as usize, q);
            if let Some((s, out)) = wedge(*om, mask) {
                let r = index_of(&dst, out);
                m[(r, c)] = &m[(r, c)] + &(coeff * &field.from_i64(s));
            }
        }
    }
    m
}

/// Product of two elements given in the monomial basis.
pub fn product(field: Field, a: &[(u32, FieldElem)], b: &[(u32, FieldElem)]) -> Vec<(u32, FieldElem)> {
    let mut acc: std::collections::BTreeMap<u32, FieldElem> = Default::default();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((s, m)) = wedge(*ma, *mb) {
                let e = acc.entry(m).or_insert_with(|| field.zero());
                *e = &*e + &(&(ca * cb) * &field.from_i64(s));
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge(0b01, 0b10), Some((1, 0b11)));
        assert_eq!(wedge(0b10, 0b01), Some((-1, 0b11)));
        assert_eq!(wedge(0b01, 0b01), None);
        // e_2 ∧ (e_0 ∧ e_1) = e_0 e_1 e_2
        assert_eq!(wedge(0b100, 0b011), Some((1, 0b111)));
        // e_1 ∧ (e_0 ∧ e_2) = -e_0 e_1 e_2
        assert_eq!(wedge(0b010, 0b101), Some((-1, 0b111)));
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis(4, 2).len(), 6);
        assert_eq!(basis(3, 0), vec![0]);
    }

    #[test]
    fn linear_multiplication_squares_to_zero() {
        let q = Field::Rationals;
        let c: Vec<FieldElem> = [1, -2, 3].iter().map(|&x| q.from_i64(x)).collect();
        for p in 0..2 {
            let a = left_mult_linear(q, 3, p, &c);
            let b = left_mult_linear(q, 3, p + 1, &c);
            assert!(b.mul(&a).is_zero());
        }
    }
}
