//! Laurent polynomials over `k`, characters, and truncated completions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{malformed, Result};
use crate::exactlin::{Field, FieldElem};
use crate::lattice::IntMatrix;

/// Element of `k[x_1^{±1}, …, x_n^{±1}]`. No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<i64>, FieldElem>,
}

impl LaurentPoly {
    pub fn zero(field: Field, nvars: usize) -> LaurentPoly {
        LaurentPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: FieldElem, nvars: usize) -> LaurentPoly {
        LaurentPoly::monomial(c, vec![0; nvars])
    }

    pub fn monomial(c: FieldElem, exps: Vec<i64>) -> LaurentPoly {
        let field = c.field();
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { field, nvars, terms }
    }

    /// `x_i`.
    pub fn var(field: Field, nvars: usize, i: usize) -> LaurentPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        LaurentPoly::monomial(field.one(), e)
    }

    pub fn from_terms(field: Field, nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, FieldElem)>) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(malformed(format!("exponent vector of length {} in {} variables", e.len(), nvars)));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<i64>, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &FieldElem)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { field: self.field, nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn mul(&self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = LaurentPoly::zero(self.field, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Exact value at a character; negative exponents use inverses.
    pub fn eval(&self, chi: &CharacterPoint) -> FieldElem {
        assert_eq!(chi.len(), self.nvars, "character has the wrong number of coordinates");
        self.terms.iter().fold(self.field.zero(), |acc, (e, c)| &acc + &(c * &chi.monomial(e)))
    }

    /// Substitutes `y_j ↦ x^{F_j}`, where `F_j` is the `j`-th column of `f`
    /// (shape: target variables × source variables).
    pub fn monomial_pullback(&self, f: &IntMatrix) -> LaurentPoly {
        assert_eq!(f.cols(), self.nvars, "pullback matrix must have one column per source variable");
        let mut out = LaurentPoly::zero(self.field, f.rows());
        for (e, c) in &self.terms {
            let img: Vec<i64> = (0..f.rows()).map(|i| (0..f.cols()).map(|j| f.get(i, j) * e[j]).sum()).collect();
            out.add_term(img, c.clone());
        }
        out
    }

    /// Taylor expansion at `χ0` in the coordinates `x_i = χ0_i (1 + v_i)`,
    /// truncated to total `v`-degree `< order`.
    pub fn complete_at(&self, chi0: &CharacterPoint, order: usize) -> TruncatedSeries {
        assert!(order >= 1, "truncation order must be positive");
        assert_eq!(chi0.len(), self.nvars);
        let monos = monomials_below(self.nvars, order);
        let mut out = TruncatedSeries::zero(self.field, self.nvars, order);
        for (e, c) in &self.terms {
            let scale = c * &chi0.monomial(e);
            // Π_i (1 + v_i)^{e_i}, coefficientwise a product of binomials
            let binoms: Vec<Vec<BigInt>> = e.iter().map(|&ei| binomial_series(ei, order)).collect();
            for a in &monos {
                let coeff: BigInt = a.iter().enumerate().map(|(i, &ai)| binoms[i][ai as usize].clone()).product();
                if !coeff.is_zero() {
                    out.add_term(a.clone(), &scale * &self.field.from_bigint(&coeff));
                }
            }
        }
        out
    }
}

/// `binom(e, k)` for `k < order`, valid for negative `e`.
fn binomial_series(e: i64, order: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(order);
    let mut c = BigInt::one();
    for k in 0..order {
        out.push(c.clone());
        c = c * BigInt::from(e - k as i64) / BigInt::from(k as i64 + 1);
    }
    out
}

/// All exponent vectors in `nvars` variables of total degree `< order`,
/// sorted by degree, then reverse-lexicographically within a degree.
pub fn monomials_below(nvars: usize, order: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d in 0..order {
        out.extend(monomials_of_degree(nvars, d));
    }
    out
}

pub fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
    }
    if nvars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(0, d as u32, &mut vec![0; nvars], &mut out);
    out
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(i, &a)| if a == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, a) })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{}*{}", c, mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A unit `c · x^e` of the Laurent ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialUnit {
    coeff: FieldElem,
    exps: Vec<i64>,
}

impl MonomialUnit {
    pub fn new(coeff: FieldElem, exps: Vec<i64>) -> Result<MonomialUnit> {
        if coeff.is_zero() {
            return Err(malformed("monomial unit with zero coefficient"));
        }
        Ok(MonomialUnit { coeff, exps })
    }

    pub fn coeff(&self) -> &FieldElem {
        &self.coeff
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn eval(&self, chi: &CharacterPoint) -> FieldElem {
        &self.coeff * &chi.monomial(&self.exps)
    }

    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::monomial(self.coeff.clone(), self.exps.clone())
    }

    /// `u − 1`, the Koszul element attached to this unit.
    pub fn minus_one(&self) -> LaurentPoly {
        let n = self.exps.len();
        self.to_poly().sub(&LaurentPoly::constant(self.coeff.field().one(), n))
    }
}

/// A point of the character torus `(k^*)^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterPoint {
    field: Field,
    coords: Vec<FieldElem>,
}

impl CharacterPoint {
    pub fn new(field: Field, coords: Vec<FieldElem>) -> Result<CharacterPoint> {
        if coords.iter().any(FieldElem::is_zero) {
            return Err(malformed("character coordinates must be nonzero"));
        }
        if coords.iter().any(|c| c.field() != field) {
            return Err(malformed("character coordinates from a different field"));
        }
        Ok(CharacterPoint { field, coords })
    }

    pub fn trivial(field: Field, n: usize) -> CharacterPoint {
        CharacterPoint { field, coords: vec![field.one(); n] }
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Result<CharacterPoint> {
        CharacterPoint::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn random<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> CharacterPoint {
        CharacterPoint { field, coords: (0..n).map(|_| field.random_nonzero(rng)).collect() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    /// `χ^e = Π_i χ_i^{e_i}`.
    pub fn monomial(&self, e: &[i64]) -> FieldElem {
        assert_eq!(e.len(), self.coords.len());
        e.iter()
            .zip(&self.coords)
            .filter(|(&a, _)| a != 0)
            .fold(self.field.one(), |acc, (&a, c)| &acc * &c.pow(a))
    }

    /// Coordinatewise inverse `χ^{-1}`.
    pub fn inverse(&self) -> CharacterPoint {
        CharacterPoint { field: self.field, coords: self.coords.iter().map(|c| c.inv().unwrap()).collect() }
    }

    pub fn mul(&self, rhs: &CharacterPoint) -> CharacterPoint {
        assert_eq!(self.len(), rhs.len());
        CharacterPoint { field: self.field, coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a * b).collect() }
    }

    /// `(χ∘F)_j = Π_i χ_i^{F_{ij}}`: the character restricted along the lattice map `F`.
    pub fn pullback(&self, f: &IntMatrix) -> CharacterPoint {
        assert_eq!(f.rows(), self.len());
        CharacterPoint { field: self.field, coords: (0..f.cols()).map(|j| self.monomial(&f.column(j))).collect() }
    }

    pub fn is_torsion(&self) -> bool {
        self.coords.iter().all(|c| c.multiplicative_order().is_some())
    }
}

impl fmt::Display for CharacterPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", c.join(","))
    }
}

/// Element of `k[[v_1..v_n]] / m^N`, terms of total degree `< order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: Field,
    nvars: usize,
    order: usize,
    terms: BTreeMap<Vec<u32>, FieldElem>,
}

impl TruncatedSeries {
    pub fn zero(field: Field, nvars: usize, order: usize) -> TruncatedSeries {
        assert!(order >= 1);
        TruncatedSeries { field, nvars, order, terms: BTreeMap::new() }
    }

    pub fn one(field: Field, nvars: usize, order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(field, nvars, order);
        s.add_term(vec![0; nvars], field.one());
        s
    }

    /// The coordinate `v_i`.
    pub fn var(field: Field, nvars: usize, order: usize, i: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(field, nvars, order);
        let mut e = vec![0; nvars];
        e[i] = 1;
        s.add_term(e, field.one());
        s
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: FieldElem) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() || e.iter().sum::<u32>() as usize >= self.order {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(&vec![0; self.nvars])
    }

    /// Coefficients of `v_1, …, v_n`.
    pub fn linear_part(&self) -> Vec<FieldElem> {
        (0..self.nvars)
            .map(|i| {
                let mut e = vec![0; self.nvars];
                e[i] = 1;
                self.coeff(&e)
            })
            .collect()
    }

    pub fn add(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!((self.nvars, self.order), (rhs.nvars, rhs.order));
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!((self.nvars, self.order), (rhs.nvars, rhs.order));
        let mut out = TruncatedSeries::zero(self.field, self.nvars, self.order);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.iter().zip(eb).map(|(a, b)| a + b).collect(), ca * cb);
            }
        }
        out
    }

    /// Drops every term of total degree ≥ 2.
    pub fn linear_truncation(&self) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.field, self.nvars, self.order);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() <= 1 {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(i, &a)| if a == 1 { format!("v{}", i + 1) } else { format!("v{}^{}", i + 1, a) })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{}*{}", c, mono.join("*")),
                }
            })
            .collect();
        write!(f, "{} + O(m^{})", parts.join(" + "), self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn x1x2_minus_1(n: usize, a: usize, b: usize) -> LaurentPoly {
        let f = q();
        LaurentPoly::var(f, n, a).mul(&LaurentPoly::var(f, n, b)).sub(&LaurentPoly::constant(f.one(), n))
    }

    #[test]
    fn eval_examples() {
        let f = q();
        let p = x1x2_minus_1(2, 0, 1);
        assert_eq!(p.eval(&CharacterPoint::from_i64(f, &[2, 3]).unwrap()), f.from_i64(5));
        let inv = LaurentPoly::monomial(f.one(), vec![-1]);
        assert_eq!(inv.eval(&CharacterPoint::from_i64(f, &[2]).unwrap()), f.parse_elem("1/2").unwrap());
        let p = x1x2_minus_1(4, 0, 2);
        assert!(p.eval(&CharacterPoint::trivial(f, 4)).is_zero());
    }

    #[test]
    fn complete_at_examples() {
        let f = q();
        let one = CharacterPoint::trivial(f, 1);
        let x_minus_1 = LaurentPoly::var(f, 1, 0).sub(&LaurentPoly::constant(f.one(), 1));
        assert_eq!(x_minus_1.complete_at(&one, 3), TruncatedSeries::var(f, 1, 3, 0));

        let p = x1x2_minus_1(4, 0, 2);
        let triv = CharacterPoint::trivial(f, 4);
        let lin = TruncatedSeries::var(f, 4, 2, 0).add(&TruncatedSeries::var(f, 4, 2, 2));
        assert_eq!(p.complete_at(&triv, 2), lin);
        let v1 = TruncatedSeries::var(f, 4, 3, 0);
        let v3 = TruncatedSeries::var(f, 4, 3, 2);
        let full = v1.add(&v3).add(&v1.mul(&v3));
        assert_eq!(p.complete_at(&triv, 3), full);
    }

    #[test]
    fn negative_exponent_expansion() {
        // x^{-1} at 1: 1 − v + v² − …
        let f = q();
        let p = LaurentPoly::monomial(f.one(), vec![-1]);
        let s = p.complete_at(&CharacterPoint::trivial(f, 1), 4);
        let coeffs: Vec<FieldElem> = (0..4).map(|k| s.coeff(&[k])).collect();
        assert_eq!(coeffs, vec![f.from_i64(1), f.from_i64(-1), f.from_i64(1), f.from_i64(-1)]);
    }

    #[test]
    fn pullback_examples() {
        let f = q();
        let y_minus_1 = LaurentPoly::var(f, 1, 0).sub(&LaurentPoly::constant(f.one(), 1));
        let col = IntMatrix::from_columns(4, &[vec![1, 0, 1, 0]]);
        assert_eq!(y_minus_1.monomial_pullback(&col), x1x2_minus_1(4, 0, 2));
        let y1y2 = LaurentPoly::var(f, 2, 0).mul(&LaurentPoly::var(f, 2, 1));
        assert_eq!(y1y2.monomial_pullback(&IntMatrix::identity(2)), y1y2);
        let sq = IntMatrix::from_columns(1, &[vec![2]]);
        let expect = LaurentPoly::monomial(f.one(), vec![2]).sub(&LaurentPoly::constant(f.one(), 1));
        assert_eq!(y_minus_1.monomial_pullback(&sq), expect);
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_below(2, 3).len(), 6);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_below(0, 2), vec![Vec::<u32>::new()]);
    }
}
