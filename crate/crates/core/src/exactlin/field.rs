//! The two coefficient fields: the rationals and prime fields `F_p`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{malformed, precondition, Error, Result};

/// Prime used for random character sampling unless configured otherwise.
pub const DEFAULT_PRIME: u64 = 1_000_003;

/// The active coefficient field `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// An element of a [`Field`]. Rationals are kept in lowest terms with positive
/// denominator (guaranteed by `BigRational`); `F_p` values live in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn factor(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(malformed(format!("{p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(malformed(format!("prime {p} exceeds the supported 32-bit range")));
        }
        Ok(Field::Prime(p))
    }

    pub fn default_prime() -> Field {
        Field::Prime(DEFAULT_PRIME)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match self {
            Field::Rationals => FieldElem::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElem::Fp { v: n.rem_euclid(*p as i64) as u64, p: *p },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        match self {
            Field::Rationals => FieldElem::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                FieldElem::Fp { v: r.to_u64().unwrap(), p: *p }
            }
        }
    }

    /// Maps `num/den` into the field; fails when `den` vanishes in `k`.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem> {
        if den.is_zero() {
            return Err(malformed("zero denominator"));
        }
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(precondition(format!("denominator {den} vanishes in {self}")));
        }
        Ok(&n / &d)
    }

    /// Parses `"7"`, `"-3/4"` into the field.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| malformed(format!("bad number '{s}'")))?;
        let den = BigInt::from_str(den).map_err(|_| malformed(format!("bad number '{s}'")))?;
        self.from_ratio(&num, &den)
    }

    /// Uniform element of `k^*`. Over the rationals: `±a/b` with `1 ≤ a, b ≤ 12`.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        match self {
            Field::Rationals => {
                let a: i64 = rng.gen_range(1..=12);
                let b: i64 = rng.gen_range(1..=12);
                let s = if rng.gen_bool(0.5) { -1 } else { 1 };
                FieldElem::Q(BigRational::new(BigInt::from(s * a), BigInt::from(b)))
            }
            Field::Prime(p) => FieldElem::Fp { v: rng.gen_range(1..*p), p: *p },
        }
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        match self {
            Field::Rationals => {
                let a: i64 = rng.gen_range(-12..=12);
                let b: i64 = rng.gen_range(1..=12);
                FieldElem::Q(BigRational::new(BigInt::from(a), BigInt::from(b)))
            }
            Field::Prime(p) => FieldElem::Fp { v: rng.gen_range(0..*p), p: *p },
        }
    }

    /// Smallest generator of `F_p^*`.
    pub fn primitive_root(&self) -> Option<FieldElem> {
        let p = match self {
            Field::Rationals => return None,
            Field::Prime(p) => *p,
        };
        if p == 2 {
            return Some(self.one());
        }
        let fs = factor(p - 1);
        (2..p)
            .find(|&g| fs.iter().all(|q| pow_mod(g, (p - 1) / q, p) != 1))
            .map(|g| FieldElem::Fp { v: g, p })
    }

    /// `ζ_n^k` where `ζ_n` is the distinguished primitive `n`-th root of unity
    /// (`g^((p-1)/n)` for the smallest primitive root `g`; `-1` over the rationals).
    pub fn root_of_unity(&self, k: i64, n: u64) -> Result<FieldElem> {
        if n == 0 {
            return Err(malformed("root of unity of order 0"));
        }
        match self {
            Field::Rationals => match n {
                1 => Ok(self.one()),
                2 => Ok(self.from_i64(if k.rem_euclid(2) == 0 { 1 } else { -1 })),
                _ => Err(precondition(format!(
                    "the rationals contain no primitive {n}-th root of unity"
                ))),
            },
            Field::Prime(p) => {
                if (p - 1) % n != 0 {
                    return Err(precondition(format!(
                        "order {n} does not divide p-1 = {}; use a prime p ≡ 1 mod {n}, e.g. {}",
                        p - 1,
                        suggest_primes(n, 3)
                            .iter()
                            .map(|q| q.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    )));
                }
                let g = self.primitive_root().unwrap();
                let zeta = g.pow(((p - 1) / n) as i64);
                Ok(zeta.pow(k))
            }
        }
    }

    pub fn spec(&self) -> String {
        match self {
            Field::Rationals => "rationals".to_string(),
            Field::Prime(p) => format!("fp:{p}"),
        }
    }
}

/// The first `count` primes `p ≡ 1 (mod n)` above 1000.
pub fn suggest_primes(n: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 1 + n * (1000 / n + 1);
    while out.len() < count {
        if is_prime(p) {
            out.push(p);
        }
        p += n;
    }
    out
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        match s.trim() {
            "rationals" | "Q" | "q" => Ok(Field::Rationals),
            other => match other.strip_prefix("fp:") {
                Some(p) => {
                    let p: u64 = p.parse().map_err(|_| malformed(format!("bad prime in '{s}'")))?;
                    Field::prime(p)
                }
                None => Err(malformed(format!(
                    "unknown field '{s}' (expected 'rationals' or 'fp:<prime>')"
                ))),
            },
        }
    }
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Q(_) => Field::Rationals,
            FieldElem::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(q) => q.is_zero(),
            FieldElem::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(q) => q.is_one(),
            FieldElem::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Q(q) => FieldElem::Q(q.recip()),
            FieldElem::Fp { v, p } => FieldElem::Fp { v: pow_mod(*v, p - 2, *p), p: *p },
        })
    }

    /// Integer power; negative exponents invert. Panics on `0^(-n)`.
    pub fn pow(&self, e: i64) -> FieldElem {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut e = e.unsigned_abs();
        match base {
            FieldElem::Fp { v, p } => FieldElem::Fp { v: pow_mod(v, e, p), p },
            FieldElem::Q(q) => {
                let mut acc = BigRational::one();
                let mut b = q;
                while e > 0 {
                    if e & 1 == 1 {
                        acc *= &b;
                    }
                    e >>= 1;
                    if e > 0 {
                        b = &b * &b;
                    }
                }
                FieldElem::Q(acc)
            }
        }
    }

    /// Multiplicative order, if finite. Over the rationals only `±1` are torsion.
    pub fn multiplicative_order(&self) -> Option<u64> {
        match self {
            FieldElem::Q(q) => {
                if q.is_one() {
                    Some(1)
                } else if (-q).is_one() {
                    Some(2)
                } else {
                    None
                }
            }
            FieldElem::Fp { v, p } => {
                if *v == 0 {
                    return None;
                }
                let n = p - 1;
                let mut order = n;
                for q in factor(n) {
                    while order % q == 0 && pow_mod(*v, order / q, *p) == 1 {
                        order /= q;
                    }
                }
                Some(order)
            }
        }
    }

    /// The `F_p` representative, if this is a prime-field element.
    pub fn as_fp(&self) -> Option<u64> {
        match self {
            FieldElem::Fp { v, .. } => Some(*v),
            FieldElem::Q(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Q(q) => Some(q),
            FieldElem::Fp { .. } => None,
        }
    }

    fn mismatch(a: &FieldElem, b: &FieldElem) -> ! {
        panic!("{}", Error::FieldMismatch(a.field().spec(), b.field().spec()))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElem::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for canonical sorting (not compatible with field structure).
impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => a.cmp(b),
            (FieldElem::Fp { v: a, p: pa }, FieldElem::Fp { v: b, p: pb }) => (pa, a).cmp(&(pb, b)),
            (FieldElem::Q(_), FieldElem::Fp { .. }) => std::cmp::Ordering::Less,
            (FieldElem::Fp { .. }, FieldElem::Q(_)) => std::cmp::Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, p: q }) if p == q => {
                let s = a + b;
                FieldElem::Fp { v: if s >= *p { s - p } else { s }, p: *p }
            }
            _ => FieldElem::mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a - b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, p: q }) if p == q => {
                FieldElem::Fp { v: if a >= b { a - b } else { a + p - b }, p: *p }
            }
            _ => FieldElem::mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, p: q }) if p == q => {
                FieldElem::Fp { v: ((*a as u128 * *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => FieldElem::mismatch(self, rhs),
        }
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: &FieldElem) -> FieldElem {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp { v, p } => FieldElem::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_lowest_terms() {
        let q = Field::Rationals;
        let a = q.parse_elem("6/-4").unwrap();
        assert_eq!(a.to_string(), "-3/2");
        assert_eq!((&a * &q.from_i64(2)).to_string(), "-3");
    }

    #[test]
    fn fp_canonical_representatives() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.from_i64(-1), FieldElem::Fp { v: 6, p: 7 });
        assert_eq!(f.parse_elem("1/3").unwrap(), FieldElem::Fp { v: 5, p: 7 });
        assert_eq!(f.from_i64(3).pow(-1), f.from_i64(5));
        assert!(f.parse_elem("1/7").is_err());
    }

    #[test]
    fn roots_of_unity_in_default_prime() {
        let f = Field::default_prime();
        let z6 = f.root_of_unity(1, 6).unwrap();
        assert_eq!(z6.multiplicative_order(), Some(6));
        assert!(z6.pow(6).is_one());
        let err = f.root_of_unity(1, 5).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert_eq!(Field::Rationals.root_of_unity(1, 2).unwrap(), Field::Rationals.from_i64(-1));
        assert!(Field::Rationals.root_of_unity(1, 3).is_err());
    }

    #[test]
    fn suggested_primes_are_congruent() {
        for p in suggest_primes(5, 3) {
            assert!(is_prime(p));
            assert_eq!(p % 5, 1);
        }
    }

    #[test]
    fn parse_field_specs() {
        assert_eq!("rationals".parse::<Field>().unwrap(), Field::Rationals);
        assert_eq!("fp:1000003".parse::<Field>().unwrap(), Field::Prime(1_000_003));
        assert!("fp:12".parse::<Field>().is_err());
        assert!("reals".parse::<Field>().is_err());
    }
}
