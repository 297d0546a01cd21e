//! Minimal graded free resolutions and `Ext^i(M, S)`.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{precondition, Result};
use crate::exactlin::{Field, FinComplex, Matrix};

use super::groebner::{module_gb, reduces_to_zero, syzygies, ModVec};
use super::module::{minimal_generators, vector_degree, GradedModulePresentation, PolyMatrix};
use super::poly::Poly;

/// `0 ← F_0 ← F_1 ← … ← F_len`, with `maps[i-1] = d_i : F_i → F_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeResolution {
    field: Field,
    nvars: usize,
    degrees: Vec<Vec<i32>>,
    maps: Vec<PolyMatrix>,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn rank(&self, i: usize) -> usize {
        self.degrees.get(i).map_or(0, Vec::len)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(Vec::len).collect()
    }

    /// Generator degrees of `F_i`.
    pub fn degrees(&self, i: usize) -> &[i32] {
        self.degrees.get(i).map_or(&[], Vec::as_slice)
    }

    /// `d_i : F_i → F_{i−1}` for `1 ≤ i ≤ length`.
    pub fn map(&self, i: usize) -> Option<&PolyMatrix> {
        if i == 0 {
            None
        } else {
            self.maps.get(i - 1)
        }
    }

    pub fn maps(&self) -> &[PolyMatrix] {
        &self.maps
    }

    fn map_or_zero(&self, i: usize) -> PolyMatrix {
        self.map(i).cloned().unwrap_or_else(|| PolyMatrix::zeros(self.field, self.nvars, self.rank(i - 1), self.rank(i)))
    }
}

fn column_degrees(cols: &[ModVec], pos_deg: &[i32]) -> Vec<i32> {
    cols.iter().map(|c| vector_degree(c, pos_deg).unwrap().expect("nonzero column")).collect()
}

/// Minimal free resolution by iterated syzygies, computing at most
/// `max_len` maps. Fails if the resolution has not terminated by then.
pub fn free_resolution(m: &GradedModulePresentation, max_len: usize) -> Result<FreeResolution> {
    let (field, nvars) = (m.field(), m.nvars());
    if max_len > nvars + 1 {
        return Err(precondition(format!("resolution length {max_len} exceeds nvars + 1 = {}", nvars + 1)));
    }
    let mut degrees = vec![m.target_degrees().to_vec()];
    let mut maps = Vec::new();
    let first = minimal_generators(field, nvars, m.num_generators(), m.target_degrees(), &m.matrix().columns());
    let mut cols = first;
    while !cols.is_empty() {
        if maps.len() == max_len {
            return Err(precondition(format!("resolution did not terminate within {max_len} steps")));
        }
        let prev = degrees.last().unwrap().clone();
        let cur = column_degrees(&cols, &prev);
        maps.push(PolyMatrix::from_columns(field, nvars, prev.len(), &cols));
        let syz = syzygies(field, nvars, prev.len(), &cols);
        cols = minimal_generators(field, nvars, cur.len(), &cur, &syz);
        degrees.push(cur);
    }
    Ok(FreeResolution { field, nvars, degrees, maps })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionReport {
    pub composites_vanish: bool,
    /// Every syzygy of `d_i` lies in the image of `d_{i+1}`.
    pub syzygies_contained: bool,
    /// `rank d_i + rank d_{i+1} = rank F_i` at random points, `i ≥ 1`.
    pub generic_ranks_match: bool,
}

impl ResolutionReport {
    pub fn passed(&self) -> bool {
        self.composites_vanish && self.syzygies_contained && self.generic_ranks_match
    }
}

pub fn verify_resolution<R: Rng + ?Sized>(res: &FreeResolution, points: usize, rng: &mut R) -> ResolutionReport {
    let n = res.length();
    let composites_vanish = (1..n).all(|i| res.map_or_zero(i).mul(&res.map_or_zero(i + 1)).is_zero());
    let syzygies_contained = (1..=n).all(|i| {
        let d = res.map_or_zero(i);
        let next = res.map_or_zero(i + 1);
        let image = module_gb(res.field, res.nvars, next.rows(), &next.columns());
        syzygies(res.field, res.nvars, d.rows(), &d.columns()).iter().all(|s| reduces_to_zero(s, &image))
    });
    let generic_ranks_match = (0..points).all(|_| {
        let pt: Vec<_> = (0..res.nvars).map(|_| res.field.random_elem(rng)).collect();
        (1..=n).all(|i| res.map_or_zero(i).eval(&pt).rank() + res.map_or_zero(i + 1).eval(&pt).rank() == res.rank(i))
    });
    ResolutionReport { composites_vanish, syzygies_contained, generic_ranks_match }
}

/// `Ext^i(M, S)` for `0 ≤ i ≤ nvars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtTable {
    nvars: usize,
    entries: BTreeMap<usize, GradedModulePresentation>,
}

impl ExtTable {
    pub fn get(&self, i: i64) -> Option<&GradedModulePresentation> {
        usize::try_from(i).ok().and_then(|i| self.entries.get(&i))
    }

    pub fn entries(&self) -> &BTreeMap<usize, GradedModulePresentation> {
        &self.entries
    }

    /// Indices with `Ext^i ≠ 0`.
    pub fn nonzero(&self) -> Vec<usize> {
        self.entries.iter().filter(|(_, m)| !m.is_zero()).map(|(&i, _)| i).collect()
    }
}

fn unit_vectors(field: Field, nvars: usize, n: usize) -> Vec<ModVec> {
    (0..n)
        .map(|i| (0..n).map(|k| if k == i { Poly::one(field, nvars) } else { Poly::zero(field, nvars) }).collect())
        .collect()
}

/// Cohomology of `Hom_S(F_•, S)`, presented as `⟨ker d_{i+1}^T⟩ / ⟨im d_i^T⟩`.
pub fn ext_modules(m: &GradedModulePresentation) -> Result<ExtTable> {
    let (field, nvars) = (m.field(), m.nvars());
    let res = free_resolution(m, nvars + 1)?;
    let mut entries = BTreeMap::new();
    for i in 0..=nvars {
        let ri = res.rank(i);
        let dual_deg: Vec<i32> = res.degrees(i).iter().map(|d| -d).collect();
        // generators of ker(d_{i+1}^T) ⊂ F_i^*
        let kernel: Vec<ModVec> = if res.rank(i + 1) == 0 {
            unit_vectors(field, nvars, ri)
        } else {
            let dt = res.map_or_zero(i + 1).transpose();
            let syz = syzygies(field, nvars, dt.rows(), &dt.columns());
            minimal_generators(field, nvars, ri, &dual_deg, &syz)
        };
        let kdeg = column_degrees(&kernel, &dual_deg);
        // images of F_{i−1}^*: rows of d_i
        let image: Vec<ModVec> = if i == 0 { vec![] } else { res.map_or_zero(i).transpose().columns() };
        let k = kernel.len();
        let combined: Vec<ModVec> = kernel.iter().chain(image.iter()).cloned().collect();
        let relations: Vec<ModVec> = syzygies(field, nvars, ri, &combined).into_iter().map(|v| v[..k].to_vec()).collect();
        let rel = PolyMatrix::from_columns(field, nvars, k, &relations);
        let pres = GradedModulePresentation::new(kdeg, rel)?.minimized().pruned();
        entries.insert(i, pres);
    }
    Ok(ExtTable { nvars, entries })
}

/// `dim Ext^i_S(k, k)` for `S` in `n` variables, from the minimal resolution
/// of `k` with its differentials evaluated at the origin.
pub fn ext_self_k(field: Field, n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(precondition("ext_self_k needs at least one variable"));
    }
    let res = free_resolution(&GradedModulePresentation::residue_field(field, n), n + 1)?;
    let origin = vec![field.zero(); n];
    let dims: Vec<usize> = (0..=res.length()).map(|i| res.rank(i)).collect();
    let diffs: Vec<Matrix> = (1..=res.length()).map(|i| res.map_or_zero(i).eval(&origin).transpose()).collect();
    let hom = FinComplex::new(field, 0, dims, diffs)?;
    let coh = hom.cohomology_dims();
    Ok((0..=res.length() as i32).map(|i| coh.get(&i).copied().unwrap_or(0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commalg::ideal::PolyIdeal;
    use rand::SeedableRng;

    const XY: [&str; 2] = ["x", "y"];

    #[test]
    fn resolution_examples() {
        let q = Field::Rationals;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let k = GradedModulePresentation::residue_field(q, 2);
        let r = free_resolution(&k, 3).unwrap();
        assert_eq!(r.ranks(), vec![1, 2, 1]);
        assert!(verify_resolution(&r, 3, &mut rng).passed());

        let sx = GradedModulePresentation::cyclic(&PolyIdeal::parse(q, &XY, &["x"]).unwrap()).unwrap();
        assert_eq!(free_resolution(&sx, 3).unwrap().ranks(), vec![1, 1]);

        let m = GradedModulePresentation::cyclic(&PolyIdeal::parse(q, &XY, &["x^2", "x*y"]).unwrap()).unwrap();
        let r = free_resolution(&m, 3).unwrap();
        assert_eq!(r.ranks(), vec![1, 2, 1]);
        let d2 = r.map(2).unwrap();
        assert_eq!(d2.column(0)[0].degree(), Some(1));
        assert!(verify_resolution(&r, 3, &mut rng).passed());
    }

    #[test]
    fn ext_examples() {
        let q = Field::Rationals;
        let k = GradedModulePresentation::residue_field(q, 2);
        assert_eq!(ext_modules(&k).unwrap().nonzero(), vec![2]);
        let e2 = ext_modules(&k).unwrap().get(2).unwrap().clone();
        assert_eq!(e2.support_codim(), Some(2));

        let sx = GradedModulePresentation::cyclic(&PolyIdeal::parse(q, &XY, &["x"]).unwrap()).unwrap();
        let t = ext_modules(&sx).unwrap();
        assert_eq!(t.nonzero(), vec![1]);
        assert_eq!(t.get(1).unwrap().support_codim(), Some(1));

        let s = GradedModulePresentation::free(q, 2, 1);
        let t = ext_modules(&s).unwrap();
        assert_eq!(t.nonzero(), vec![0]);
        assert_eq!(t.get(0).unwrap().support_codim(), Some(0));
    }

    #[test]
    fn ext_self_k_binomials() {
        let q = Field::Rationals;
        assert_eq!(ext_self_k(q, 1).unwrap(), vec![1, 1]);
        assert_eq!(ext_self_k(q, 2).unwrap(), vec![1, 2, 1]);
        assert_eq!(ext_self_k(q, 3).unwrap(), vec![1, 3, 3, 1]);
    }
}
