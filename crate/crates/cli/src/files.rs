//! Input file formats: toric objects and weighted complexes, as JSON with
//! integers written plainly and rationals as `"num/den"` strings.

use std::collections::BTreeMap;
use std::path::Path;

use mellin_core::bgg::{validate_module, ExtAlgModule};
use mellin_core::commalg::PolyIdeal;
use mellin_core::exactlin::{Field, FieldElem, FinComplex, Matrix};
use mellin_core::lattice::IntMatrix;
use mellin_core::purity::WeightedComplex;
use mellin_core::toric::{make_curated_atom, Atom, ToricObject, TorusData};
use serde::{Deserialize, Serialize};

use crate::error::{input, CliError, CliResult};

/// An integer or a `"num/den"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn to_elem(&self, field: Field) -> CliResult<FieldElem> {
        match self {
            Scalar::Int(n) => Ok(field.from_i64(*n)),
            Scalar::Text(s) => Ok(field.parse_elem(s)?),
        }
    }

    pub fn from_elem(x: &FieldElem) -> Scalar {
        let s = x.to_string();
        s.parse::<i64>().map(Scalar::Int).unwrap_or(Scalar::Text(s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub m: usize,
    /// `g × m` integer matrix; the atom is curated with `F = M ⊗ I₂`.
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub curated: Option<Vec<Vec<i64>>>,
    /// Raw `2g × 2m` lattice map, asserted analytic.
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub eta: Vec<Scalar>,
    #[serde(default)]
    pub shift: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectFile {
    pub field: String,
    pub g: usize,
    pub atoms: Vec<AtomSpec>,
}

fn int_matrix(rows: &[Vec<i64>], nrows: usize, ncols: usize, what: &str) -> CliResult<IntMatrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(input(format!("{what} must be {nrows} × {ncols}")));
    }
    Ok(IntMatrix::from_rows(rows, ncols)?)
}

pub fn parse_field(spec: &str) -> CliResult<Field> {
    spec.parse::<Field>().map_err(CliError::from)
}

impl ObjectFile {
    pub fn field(&self) -> CliResult<Field> {
        parse_field(&self.field)
    }

    /// Builds the object over `field`, or over the file's own field when `None`.
    pub fn to_object(&self, field: Option<Field>) -> CliResult<ToricObject> {
        let field = match field {
            Some(f) => f,
            None => self.field()?,
        };
        let torus = TorusData::new(self.g)?;
        let mut atoms = Vec::new();
        for (i, a) in self.atoms.iter().enumerate() {
            let ctx = |e: CliError| input(format!("atom {i}: {e}"));
            let eta = a.eta.iter().map(|s| s.to_elem(field)).collect::<CliResult<Vec<_>>>().map_err(ctx)?;
            let atom = match (&a.curated, &a.raw) {
                (Some(_), Some(_)) => return Err(input(format!("atom {i}: give either M or F, not both"))),
                (Some(mm), None) => {
                    let mm = int_matrix(mm, self.g, a.m, "M").map_err(ctx)?;
                    make_curated_atom(field, torus, &mm, eta, a.shift).map_err(|e| ctx(e.into()))?
                }
                (None, Some(f)) => {
                    let f = int_matrix(f, 2 * self.g, 2 * a.m, "F").map_err(ctx)?;
                    Atom::new(field, torus, f, eta, a.shift).map_err(|e| ctx(e.into()))?
                }
                (None, None) if a.m == 0 => {
                    make_curated_atom(field, torus, &IntMatrix::zeros(self.g, 0), eta, a.shift).map_err(|e| ctx(e.into()))?
                }
                (None, None) => return Err(input(format!("atom {i}: m = {} needs M or F", a.m))),
            };
            atoms.push(atom);
        }
        Ok(ToricObject::new(field, torus, atoms)?)
    }

    /// Every atom is written through its raw lattice map.
    pub fn from_object(obj: &ToricObject) -> ObjectFile {
        let g = obj.torus().g();
        let atoms = obj
            .atoms()
            .iter()
            .map(|a| {
                let f = a.lattice_map();
                AtomSpec {
                    m: a.m(),
                    curated: None,
                    raw: Some((0..f.rows()).map(|r| f.row(r)).collect()),
                    eta: a.eta().iter().map(Scalar::from_elem).collect(),
                    shift: a.shift(),
                }
            })
            .collect();
        ObjectFile { field: obj.field().spec(), g, atoms }
    }
}

/// A complex with a Frobenius and weight table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub field: String,
    #[serde(default)]
    pub q: Option<Scalar>,
    pub lo: i32,
    pub dims: Vec<usize>,
    /// `d^i` as rows, from the lowest degree.
    #[serde(default)]
    pub differentials: Vec<Vec<Vec<Scalar>>>,
    pub frobenius: Vec<Vec<Vec<Scalar>>>,
    /// `[eigenvalue, weight]` pairs.
    pub weights: Vec<(Scalar, i32)>,
}

fn matrix(field: Field, rows: &[Vec<Scalar>], nrows: usize, ncols: usize, what: &str) -> CliResult<Matrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(input(format!("{what} must be {nrows} × {ncols}")));
    }
    let mut m = Matrix::zeros(field, nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            m[(r, c)] = x.to_elem(field)?;
        }
    }
    Ok(m)
}

impl ComplexFile {
    pub fn to_weighted(&self) -> CliResult<WeightedComplex> {
        let field = parse_field(&self.field)?;
        let n = self.dims.len();
        if self.differentials.len() != n.saturating_sub(1) {
            return Err(input(format!("{} degrees need {} differentials", n, n.saturating_sub(1))));
        }
        if self.frobenius.len() != n {
            return Err(input(format!("{n} degrees need {n} Frobenius matrices")));
        }
        let diffs = (0..n.saturating_sub(1))
            .map(|j| matrix(field, &self.differentials[j], self.dims[j + 1], self.dims[j], &format!("differential {j}")))
            .collect::<CliResult<Vec<_>>>()?;
        let t = (0..n)
            .map(|j| matrix(field, &self.frobenius[j], self.dims[j], self.dims[j], &format!("Frobenius {j}")))
            .collect::<CliResult<Vec<_>>>()?;
        let mut table = BTreeMap::new();
        for (l, w) in &self.weights {
            if table.insert(l.to_elem(field)?, *w).is_some() {
                return Err(input("an eigenvalue appears twice in the weight table"));
            }
        }
        let q = self.q.as_ref().map(|q| q.to_elem(field)).transpose()?;
        let complex = FinComplex::new(field, self.lo, self.dims.clone(), diffs)?;
        Ok(WeightedComplex::new(complex, t, table, q)?)
    }
}

/// A graded exterior-algebra module: `actions[k][j]` is the action of the
/// `k`-th generator from piece `j` to piece `j + 1`, as rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub field: String,
    pub n: usize,
    pub lo: i32,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub actions: Vec<Vec<Vec<Vec<Scalar>>>>,
}

impl ModuleFile {
    pub fn to_module(&self) -> CliResult<ExtAlgModule> {
        let field = parse_field(&self.field)?;
        let pieces = self.dims.len().saturating_sub(1);
        if self.actions.len() != self.n || self.actions.iter().any(|a| a.len() != pieces) {
            return Err(input(format!("need {} actions with {pieces} maps each", self.n)));
        }
        let actions = self
            .actions
            .iter()
            .enumerate()
            .map(|(k, a)| {
                (0..pieces)
                    .map(|j| matrix(field, &a[j], self.dims[j + 1], self.dims[j], &format!("action {k} on piece {j}")))
                    .collect::<CliResult<Vec<_>>>()
            })
            .collect::<CliResult<Vec<_>>>()?;
        let m = ExtAlgModule::new(field, self.n, self.lo, self.dims.clone(), actions)?;
        if let Some(v) = validate_module(&m).first() {
            return Err(input(format!("not a module: {v}")));
        }
        Ok(m)
    }
}

/// A quotient `S/I` of a polynomial ring, generators written over `vars`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealFile {
    pub field: String,
    pub vars: Vec<String>,
    pub generators: Vec<String>,
}

impl IdealFile {
    pub fn to_ideal(&self) -> CliResult<PolyIdeal> {
        let field = parse_field(&self.field)?;
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let gens: Vec<&str> = self.generators.iter().map(String::as_str).collect();
        Ok(PolyIdeal::parse(field, &vars, &gens)?)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn object_round_trip() {
        let text = r#"{"field": "fp:7", "g": 2, "atoms": [
            {"m": 1, "M": [[1], [1]], "eta": [1, "1/2"]},
            {"m": 0, "shift": 1}
        ]}"#;
        let file: ObjectFile = serde_json::from_str(text).unwrap();
        let obj = file.to_object(None).unwrap();
        assert_eq!(obj.atoms().len(), 2);
        assert!(obj.atoms()[0].is_curated());
        assert_eq!(obj.atoms()[0].eta()[1], Field::prime(7).unwrap().from_i64(4));
        let again = ObjectFile::from_object(&obj).to_object(None).unwrap();
        assert_eq!(again, obj);
    }

    #[test]
    fn object_errors() {
        let bad: ObjectFile = serde_json::from_str(r#"{"field": "rationals", "g": 1, "atoms": [{"m": 1, "M": [[0]], "eta": [1, 1]}]}"#).unwrap();
        assert!(bad.to_object(None).is_err());
        let zero_eta: ObjectFile = serde_json::from_str(r#"{"field": "rationals", "g": 1, "atoms": [{"m": 1, "M": [[1]], "eta": [0, 1]}]}"#).unwrap();
        assert!(zero_eta.to_object(None).is_err());
        assert!(serde_json::from_str::<ObjectFile>(r#"{"field": "rationals", "g": 1, "atoms": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn complex_file() {
        let text = r#"{"field": "rationals", "q": 9, "lo": 0, "dims": [1, 1],
            "differentials": [[[0]]], "frobenius": [[[1]], [[3]]], "weights": [[1, 0], [3, 1]]}"#;
        let c: ComplexFile = serde_json::from_str(text).unwrap();
        assert!(c.to_weighted().is_ok());
        let wrong: ComplexFile = serde_json::from_str(&text.replace("[[3]]", "[[2]]")).unwrap();
        assert!(wrong.to_weighted().is_err());
    }

    #[test]
    fn module_file() {
        let text = r#"{"field": "rationals", "n": 1, "lo": 0, "dims": [1, 1], "actions": [[[[1]]]]}"#;
        let m: ModuleFile = serde_json::from_str(text).unwrap();
        assert_eq!(m.to_module().unwrap().total_dim(), 2);
        let short: ModuleFile = serde_json::from_str(&text.replace(r#""n": 1"#, r#""n": 2"#)).unwrap();
        assert!(short.to_module().is_err());
    }
}
