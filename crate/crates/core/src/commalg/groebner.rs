//! Buchberger's algorithm for ideals and for submodules of free modules.
//!
//! Module elements are vectors of polynomials compared position-over-term,
//! with lower positions larger. That order eliminates leading positions,
//! which is what the syzygy computation relies on.

use std::collections::HashSet;

use crate::exactlin::{Field, FieldElem};

use super::poly::{Monomial, Poly};

pub type ModVec = Vec<Poly>;

/// `(position, monomial, coefficient)` of the leading term.
pub fn leading_term(v: &[Poly]) -> Option<(usize, &Monomial, &FieldElem)> {
    v.iter().enumerate().find_map(|(p, f)| f.leading().map(|(m, c)| (p, m, c)))
}

pub fn is_zero_vec(v: &[Poly]) -> bool {
    v.iter().all(Poly::is_zero)
}

fn axpy_term(v: &mut [Poly], c: &FieldElem, m: &Monomial, g: &[Poly]) {
    for (a, b) in v.iter_mut().zip(g) {
        if !b.is_zero() {
            *a = a.sub(&b.mul_term(c, m));
        }
    }
}

fn monic_vec(v: &[Poly]) -> ModVec {
    match leading_term(v) {
        None => v.to_vec(),
        Some((_, _, c)) => {
            let s = c.inv().unwrap();
            v.iter().map(|f| f.scale(&s)).collect()
        }
    }
}

/// Full normal form of `v` with respect to `basis`.
pub fn reduce(v: &[Poly], basis: &[ModVec]) -> ModVec {
    let mut v: ModVec = v.to_vec();
    let mut rem: ModVec = v.iter().map(|f| Poly::zero(f.field(), f.nvars())).collect();
    loop {
        let (p, m, c) = match leading_term(&v) {
            None => return rem,
            Some((p, m, c)) => (p, m.clone(), c.clone()),
        };
        let divisor = basis.iter().find(|g| {
            let (q, lm, _) = leading_term(g).expect("basis elements are nonzero");
            q == p && lm.divides(&m)
        });
        match divisor {
            Some(g) => {
                let (_, lm, lc) = leading_term(g).unwrap();
                let coeff = &c / lc;
                let mono = lm.quotient(&m);
                axpy_term(&mut v, &coeff, &mono, g);
            }
            None => {
                rem[p].add_term(m.clone(), &c);
                v[p].add_term(m, &-&c);
            }
        }
    }
}

pub fn reduces_to_zero(v: &[Poly], basis: &[ModVec]) -> bool {
    is_zero_vec(&reduce(v, basis))
}

fn s_vector(a: &[Poly], b: &[Poly]) -> ModVec {
    let (_, ma, ca) = leading_term(a).unwrap();
    let (_, mb, cb) = leading_term(b).unwrap();
    let l = ma.lcm(mb);
    let mut out: ModVec = a.iter().map(|f| f.mul_term(&ca.inv().unwrap(), &ma.quotient(&l))).collect();
    axpy_term(&mut out, &cb.inv().unwrap(), &mb.quotient(&l), b);
    out
}

/// Reduced Gröbner basis of the submodule of `k[x]^rank` generated by `gens`,
/// sorted by decreasing leading term.
pub fn module_gb(field: Field, nvars: usize, rank: usize, gens: &[ModVec]) -> Vec<ModVec> {
    let _ = field;
    let mut basis: Vec<ModVec> = Vec::new();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    let lead = |v: &ModVec| -> (usize, Monomial) {
        let (p, m, _) = leading_term(v).unwrap();
        (p, m.clone())
    };
    let add = |basis: &mut Vec<ModVec>, pending: &mut Vec<(usize, usize)>, v: ModVec| {
        let k = basis.len();
        let (pk, _) = lead(&v);
        for (i, b) in basis.iter().enumerate() {
            if lead(b).0 == pk {
                pending.push((i, k));
            }
        }
        basis.push(v);
    };
    for g in gens {
        assert_eq!(g.len(), rank);
        debug_assert!(g.iter().all(|f| f.nvars() == nvars));
        let r = reduce(g, &basis);
        if !is_zero_vec(&r) {
            add(&mut basis, &mut pending, monic_vec(&r));
        }
    }
    while !pending.is_empty() {
        // normal strategy: smallest lcm first
        let idx = (0..pending.len())
            .min_by(|&a, &b| {
                let la = pair_lcm(&basis, pending[a]);
                let lb = pair_lcm(&basis, pending[b]);
                la.cmp(&lb).then(pending[a].cmp(&pending[b]))
            })
            .unwrap();
        let (i, j) = pending.swap_remove(idx);
        done.insert((i, j));
        let (pi, mi) = lead(&basis[i]);
        let (_, mj) = lead(&basis[j]);
        if rank == 1 && mi.coprime(&mj) {
            continue;
        }
        let l = mi.lcm(&mj);
        let chain = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let (pk, mk) = lead(&basis[k]);
            let key = |a: usize, b: usize| (a.min(b), a.max(b));
            pk == pi
                && mk.divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
                && done.contains(&key(i, k))
                && done.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_vector(&basis[i], &basis[j]);
        let r = reduce(&s, &basis);
        if !is_zero_vec(&r) {
            add(&mut basis, &mut pending, monic_vec(&r));
        }
    }
    interreduce(basis)
}

fn pair_lcm(basis: &[ModVec], (i, j): (usize, usize)) -> Monomial {
    let (_, a, _) = leading_term(&basis[i]).unwrap();
    let (_, b, _) = leading_term(&basis[j]).unwrap();
    a.lcm(b)
}

fn interreduce(basis: Vec<ModVec>) -> Vec<ModVec> {
    // drop elements whose leading term is divisible by another's
    let leads: Vec<(usize, Monomial)> = basis
        .iter()
        .map(|v| {
            let (p, m, _) = leading_term(v).unwrap();
            (p, m.clone())
        })
        .collect();
    let mut keep: Vec<ModVec> = Vec::new();
    for (i, v) in basis.iter().enumerate() {
        let redundant = leads.iter().enumerate().any(|(j, (pj, mj))| {
            j != i && *pj == leads[i].0 && mj.divides(&leads[i].1) && (mj != &leads[i].1 || j < i)
        });
        if !redundant {
            keep.push(v.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<ModVec> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
        // the leading term survives since no other leading term divides it
        let r = reduce(&keep[i], &others);
        out.push(monic_vec(&r));
    }
    out.sort_by(|a, b| {
        let (pa, ma, _) = leading_term(a).unwrap();
        let (pb, mb, _) = leading_term(b).unwrap();
        pa.cmp(&pb).then(mb.cmp(ma))
    });
    out
}

/// Generators of the syzygy module of `gens ⊂ k[x]^rank`, as vectors in
/// `k[x]^{gens.len()}`.
pub fn syzygies(field: Field, nvars: usize, rank: usize, gens: &[ModVec]) -> Vec<ModVec> {
    let r = gens.len();
    let ext: Vec<ModVec> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut v = g.clone();
            v.extend((0..r).map(|k| if k == i { Poly::one(field, nvars) } else { Poly::zero(field, nvars) }));
            v
        })
        .collect();
    module_gb(field, nvars, rank + r, &ext)
        .into_iter()
        .filter(|v| leading_term(v).unwrap().0 >= rank)
        .map(|v| v[rank..].to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(Field::Rationals, &["x", "y"], s).unwrap()
    }

    #[test]
    fn syzygy_of_monomials() {
        let f = Field::Rationals;
        let syz = syzygies(f, 2, 1, &[vec![p("x^2")], vec![p("x*y")]]);
        assert_eq!(syz.len(), 1);
        // y·x² − x·xy = 0
        let s = &syz[0];
        assert!(p("x^2").mul(&s[0]).add(&p("x*y").mul(&s[1])).is_zero());
        assert_eq!(s[0].degree(), Some(1));
    }

    #[test]
    fn module_membership() {
        let f = Field::Rationals;
        let gens = vec![vec![p("x"), p("y")], vec![p("y"), p("0")]];
        let gb = module_gb(f, 2, 2, &gens);
        assert!(reduces_to_zero(&[p("x*y"), p("y^2")], &gb));
        assert!(reduces_to_zero(&[p("y^2"), p("0")], &gb));
        assert!(!reduces_to_zero(&[p("1"), p("0")], &gb));
    }
}
