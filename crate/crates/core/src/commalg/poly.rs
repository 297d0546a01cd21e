//! Polynomials over a field with nonnegative exponents, ordered by
//! graded reverse lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{malformed, Result};
use crate::exactlin::{Field, FieldElem};

/// Exponent vector compared in grevlex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, rhs: &Monomial) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| a <= b)
    }

    /// `rhs / self`, assuming divisibility.
    pub fn quotient(&self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, rhs: &Monomial) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                // smaller exponent in the last differing variable wins
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl Poly {
    pub fn zero(field: Field, nvars: usize) -> Poly {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: FieldElem) -> Poly {
        Poly::term(field, c, Monomial::one(nvars))
    }

    pub fn one(field: Field, nvars: usize) -> Poly {
        Poly::constant(field, nvars, field.one())
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Poly {
        Poly::term(field, field.one(), Monomial::var(nvars, i))
    }

    pub fn term(field: Field, c: FieldElem, m: Monomial) -> Poly {
        let nvars = m.0.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { field, nvars, terms }
    }

    pub fn from_terms(field: Field, nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, FieldElem)>) -> Poly {
        let mut p = Poly::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial(e), &c);
        }
        p
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    /// Nonzero constant polynomial.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.leading_monomial().unwrap().is_one()
    }

    pub fn constant_value(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return Some(self.field.zero());
        }
        if self.is_unit() {
            return Some(self.leading().unwrap().1.clone());
        }
        None
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-&self.field.one())
    }

    pub fn scale(&self, s: &FieldElem) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(), ..self.clone() }
    }

    pub fn mul_term(&self, c: &FieldElem, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        Poly { terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect(), ..self.clone() }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.field, self.nvars);
        for (m, c) in &rhs.terms {
            for (a, b) in &self.terms {
                out.add_term(a.mul(m), &(b * c));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(self.field, self.nvars), |acc, _| acc.mul(self))
    }

    /// Scaled so that the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        assert_eq!(point.len(), self.nvars);
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e as i64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Exact quotient `self / d`; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (ld, lc) = d.leading()?;
        let lc_inv = lc.inv().unwrap();
        let mut rem = self.clone();
        let mut q = Poly::zero(self.field, self.nvars);
        while let Some((lm, c)) = rem.leading() {
            if !ld.divides(lm) {
                return None;
            }
            let m = ld.quotient(lm);
            let c = c * &lc_inv;
            rem = rem.sub(&d.mul_term(&c, &m));
            q.add_term(m, &c);
        }
        Some(q)
    }

    /// Parses expressions in `+ - * ^` and parentheses over the given
    /// variable names; coefficients are integers or fractions `a/b`.
    pub fn parse(field: Field, vars: &[&str], s: &str) -> Result<Poly> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0, field, vars };
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(malformed(format!("trailing input in polynomial {s:?}")));
        }
        Ok(out)
    }
}

/// Default variable names: `x, y, z, w` for up to four variables, else `x1..xn`.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    if nvars <= 4 {
        ["x", "y", "z", "w"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = default_var_names(self.nvars);
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    mono.join("*")
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(malformed(format!("unexpected character {c:?} in polynomial")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: Field,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let n = self.vars.len();
        let mut acc = Poly::zero(self.field, n);
        let mut first = true;
        loop {
            let negate = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else {
                break;
            };
            first = false;
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                let c = d.constant_value().filter(|c| !c.is_zero()).ok_or_else(|| malformed("division by a non-constant"))?;
                acc = acc.scale(&c.inv().unwrap());
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                // implicit multiplication, e.g. `2x`
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(s)) => {
                    self.pos += 1;
                    let e: u32 = s.parse().map_err(|_| malformed(format!("bad exponent {s}")))?;
                    Ok(base.pow(e))
                }
                _ => Err(malformed("exponent must be a nonnegative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let n = self.vars.len();
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let c = self.field.parse_elem(&s)?;
                Ok(Poly::constant(self.field, n, c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| malformed(format!("unknown variable {name:?}")))?;
                Ok(Poly::var(self.field, n, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(malformed("unbalanced parentheses"));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            _ => Err(malformed("unexpected end of polynomial")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn grevlex_order() {
        // x > y > z in degree 1; xz < y^2 in grevlex
        let x = Monomial(vec![1, 0, 0]);
        let y = Monomial(vec![0, 1, 0]);
        assert!(x > y);
        assert!(Monomial(vec![1, 0, 1]) < Monomial(vec![0, 2, 0]));
        assert!(Monomial(vec![0, 0, 2]) > Monomial(vec![1, 0, 0]));
    }

    #[test]
    fn parse_and_print() {
        let p = Poly::parse(q(), &["x", "y"], "x^2 - y + 1/2*x*y").unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.to_string(), "x^2 + 1/2*x*y + -1*y");
        let r = Poly::parse(q(), &["x", "y"], "(x+y)^2 - x^2 - 2x*y").unwrap();
        assert_eq!(r.to_string(), "y^2");
        assert!(Poly::parse(q(), &["x"], "x + z").is_err());
        assert!(Poly::parse(q(), &["x"], "(x").is_err());
    }

    #[test]
    fn exact_division() {
        let v = ["x", "y"];
        let a = Poly::parse(q(), &v, "x^2 - y^2").unwrap();
        let b = Poly::parse(q(), &v, "x - y").unwrap();
        assert_eq!(a.exact_div(&b).unwrap(), Poly::parse(q(), &v, "x + y").unwrap());
        assert!(a.exact_div(&Poly::parse(q(), &v, "x").unwrap()).is_none());
    }
}
