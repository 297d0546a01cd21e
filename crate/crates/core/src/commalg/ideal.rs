use std::fmt;

use crate::error::{malformed, Result};
use crate::exactlin::Field;

use super::groebner::{module_gb, reduces_to_zero, ModVec};
use super::poly::{default_var_names, Monomial, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyIdeal {
    field: Field,
    nvars: usize,
    gens: Vec<Poly>,
}

impl PolyIdeal {
    /// Zero generators are dropped.
    pub fn new(field: Field, nvars: usize, gens: Vec<Poly>) -> Result<PolyIdeal> {
        if gens.iter().any(|g| g.nvars() != nvars || g.field() != field) {
            return Err(malformed("ideal generators live in a different ring"));
        }
        Ok(PolyIdeal { field, nvars, gens: gens.into_iter().filter(|g| !g.is_zero()).collect() })
    }

    pub fn parse(field: Field, vars: &[&str], gens: &[&str]) -> Result<PolyIdeal> {
        let gens = gens.iter().map(|s| Poly::parse(field, vars, s)).collect::<Result<Vec<_>>>()?;
        PolyIdeal::new(field, vars.len(), gens)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn contains(&self, f: &Poly) -> bool {
        let gb: Vec<ModVec> = buchberger(self).into_iter().map(|g| vec![g]).collect();
        reduces_to_zero(std::slice::from_ref(f), &gb)
    }
}

impl fmt::Display for PolyIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|p| p.to_string()).collect();
        write!(f, "({}) in k[{}]", g.join(", "), default_var_names(self.nvars).join(","))
    }
}

/// Reduced grevlex Gröbner basis, sorted by decreasing leading monomial.
pub fn buchberger(ideal: &PolyIdeal) -> Vec<Poly> {
    let gens: Vec<ModVec> = ideal.gens.iter().map(|g| vec![g.clone()]).collect();
    module_gb(ideal.field, ideal.nvars, 1, &gens).into_iter().map(|mut v| v.pop().unwrap()).collect()
}

/// Dimension of `k[x]/J` for a monomial ideal `J` given by generators:
/// the largest set of variables supporting no generator. `None` when
/// `J` is the unit ideal.
pub fn monomial_ideal_dim(nvars: usize, gens: &[Monomial]) -> Option<usize> {
    if gens.iter().any(Monomial::is_one) {
        return None;
    }
    let supports: Vec<u32> = gens
        .iter()
        .map(|m| m.0.iter().enumerate().filter(|(_, &e)| e > 0).fold(0u32, |acc, (i, _)| acc | 1 << i))
        .collect();
    let best = (0u32..1 << nvars)
        .filter(|u| supports.iter().all(|s| s & !u != 0))
        .map(u32::count_ones)
        .max()
        .unwrap_or(0);
    Some(best as usize)
}

/// Krull dimension of `k[x]/I`, i.e. `dim V(I)`; `None` for the unit ideal.
pub fn krull_dim(ideal: &PolyIdeal) -> Option<usize> {
    let gb = buchberger(ideal);
    let leads: Vec<Monomial> = gb.iter().map(|g| g.leading_monomial().unwrap().clone()).collect();
    monomial_ideal_dim(ideal.nvars, &leads)
}

#[cfg(test)]
mod tests {
    use super::*;

    const XY: [&str; 2] = ["x", "y"];

    #[test]
    fn buchberger_examples() {
        let q = Field::Rationals;
        let i = PolyIdeal::parse(q, &XY, &["x"]).unwrap();
        assert_eq!(buchberger(&i), vec![Poly::var(q, 2, 0)]);

        let i = PolyIdeal::parse(q, &XY, &["x^2 - y", "x*y - 1"]).unwrap();
        let gb = buchberger(&i);
        let target = Poly::parse(q, &XY, "y^2 - x").unwrap();
        assert!(gb.contains(&target) || gb.contains(&target.neg()));
        // idempotent
        assert_eq!(buchberger(&PolyIdeal::new(q, 2, gb.clone()).unwrap()), gb);

        let unit = PolyIdeal::parse(q, &XY, &["1"]).unwrap();
        assert_eq!(buchberger(&unit), vec![Poly::one(q, 2)]);
    }

    #[test]
    fn krull_dim_examples() {
        let q = Field::Rationals;
        assert_eq!(krull_dim(&PolyIdeal::parse(q, &XY, &["x"]).unwrap()), Some(1));
        assert_eq!(krull_dim(&PolyIdeal::parse(q, &XY, &["x", "y"]).unwrap()), Some(0));
        assert_eq!(krull_dim(&PolyIdeal::parse(q, &XY, &["x*y"]).unwrap()), Some(1));
        assert_eq!(krull_dim(&PolyIdeal::parse(q, &XY, &["x+1", "x"]).unwrap()), None);
        assert_eq!(krull_dim(&PolyIdeal::new(q, 2, vec![]).unwrap()), Some(2));
    }
}
