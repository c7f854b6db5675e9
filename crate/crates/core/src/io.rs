//! File formats for algebras, modules and glued triples.
//!
//! An algebra document is a single JSON object:
//!
//! ```json
//! {
//!   "field": "rationals",
//!   "dim": 2,
//!   "labels": ["1", "x"],
//!   "structure_constants": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]],
//!   "unit": ["1", "0"]
//! }
//! ```
//!
//! `field` is either the string `"rationals"` or `{"prime": p}`. Indices
//! are 0-based; unspecified structure constants are zero; rational
//! literals are `"num/den"` strings, prime-field literals canonical
//! residues. A module document carries its algebra inline or as a file
//! reference, a side, a dimension, and one dim x dim action matrix per
//! algebra basis element.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::fiber::GluedTriple;
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::modules::{ModuleRep, Side};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FieldDoc {
    Name(String),
    Prime { prime: u64 },
}

impl FieldDoc {
    pub fn to_spec(&self) -> Result<FieldSpec> {
        match self {
            FieldDoc::Name(s) if s == "rationals" => Ok(FieldSpec::Rationals),
            FieldDoc::Name(s) => Err(Error::Parse(format!("unknown field {s:?} (expected \"rationals\" or {{\"prime\": p}})"))),
            FieldDoc::Prime { prime } => FieldSpec::prime(*prime),
        }
    }

    pub fn from_spec(field: FieldSpec) -> FieldDoc {
        match field {
            FieldSpec::Rationals => FieldDoc::Name("rationals".into()),
            FieldSpec::PrimeField(p) => FieldDoc::Prime { prime: p },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraDoc {
    pub field: FieldDoc,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub structure_constants: Vec<(usize, usize, usize, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<Algebra> {
    let field = doc.field.to_spec()?;
    let mut entries = Vec::with_capacity(doc.structure_constants.len());
    for (pos, (i, j, l, lit)) in doc.structure_constants.iter().enumerate() {
        if *i >= doc.dim || *j >= doc.dim || *l >= doc.dim {
            return Err(Error::Parse(format!(
                "structure_constants[{pos}]: index ({i},{j},{l}) out of range for dim {}",
                doc.dim
            )));
        }
        let c = field
            .parse_scalar(lit)
            .map_err(|e| Error::Parse(format!("structure_constants[{pos}]: {e}")))?;
        entries.push((*i, *j, *l, c));
    }
    let unit = match &doc.unit {
        None => None,
        Some(coords) => {
            let mut parsed = Vec::with_capacity(coords.len());
            for (pos, lit) in coords.iter().enumerate() {
                parsed.push(field.parse_scalar(lit).map_err(|e| Error::Parse(format!("unit[{pos}]: {e}")))?);
            }
            Some(parsed)
        }
    };
    Algebra::new(field, doc.dim, doc.labels.clone(), entries, unit)
        .map_err(|e| Error::Parse(format!("algebra document: {e}")))
}

pub fn algebra_to_doc(a: &Algebra) -> AlgebraDoc {
    AlgebraDoc {
        field: FieldDoc::from_spec(a.field()),
        dim: a.dim(),
        labels: Some(a.labels().to_vec()),
        structure_constants: a
            .structure_constants()
            .iter()
            .map(|(i, j, l, c)| (*i, *j, *l, c.literal()))
            .collect(),
        unit: a.unit().map(|u| u.literals()),
    }
}

pub fn parse_algebra_str(text: &str) -> Result<Algebra> {
    let doc: AlgebraDoc = serde_json::from_str(text)?;
    algebra_from_doc(&doc)
}

pub fn read_algebra_file(path: &Path) -> Result<Algebra> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_algebra_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_algebra_file(path: &Path, a: &Algebra) -> Result<()> {
    let doc = algebra_to_doc(a);
    std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(AlgebraDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModuleDoc {
    pub algebra: AlgebraRef,
    pub side: String,
    pub dim: usize,
    /// One dim x dim matrix (rows of scalar literals) per basis element.
    pub action: Vec<Vec<Vec<String>>>,
}

fn parse_side(side: &str) -> Result<Side> {
    match side {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(Error::Parse(format!("side must be \"left\" or \"right\", got {other:?}"))),
    }
}

fn matrix_from_lits(field: FieldSpec, rows: &[Vec<String>], what: &str) -> Result<Matrix> {
    let mut parsed = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (c, lit) in row.iter().enumerate() {
            out.push(
                field
                    .parse_scalar(lit)
                    .map_err(|e| Error::Parse(format!("{what}[{r}][{c}]: {e}")))?,
            );
        }
        parsed.push(out);
    }
    Matrix::from_rows(field, parsed)
}

fn matrix_to_lits(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(Scalar::literal).collect())
        .collect()
}

/// Resolves the module document; `base_dir` anchors a file reference.
pub fn module_from_doc(doc: &ModuleDoc, base_dir: Option<&Path>) -> Result<ModuleRep> {
    let algebra = match &doc.algebra {
        AlgebraRef::Inline(a) => algebra_from_doc(a)?,
        AlgebraRef::Path(p) => {
            let mut path = std::path::PathBuf::from(p);
            if path.is_relative() {
                if let Some(base) = base_dir {
                    path = base.join(path);
                }
            }
            read_algebra_file(&path)?
        }
    };
    let side = parse_side(&doc.side)?;
    if doc.action.len() != algebra.dim() {
        return Err(Error::Parse(format!(
            "module has {} action matrices for an algebra of dimension {}",
            doc.action.len(),
            algebra.dim()
        )));
    }
    let field = algebra.field();
    let mut action = Vec::with_capacity(doc.action.len());
    for (i, rows) in doc.action.iter().enumerate() {
        let m = matrix_from_lits(field, rows, &format!("action[{i}]"))?;
        if m.rows() != doc.dim || m.cols() != doc.dim {
            return Err(Error::Parse(format!(
                "action[{i}] is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                doc.dim,
                doc.dim
            )));
        }
        action.push(m);
    }
    ModuleRep::new(algebra, side, doc.dim, action).map_err(|e| Error::Parse(format!("module document: {e}")))
}

pub fn module_to_doc(m: &ModuleRep) -> ModuleDoc {
    ModuleDoc {
        algebra: AlgebraRef::Inline(algebra_to_doc(m.algebra())),
        side: match m.side() {
            Side::Left => "left".into(),
            Side::Right => "right".into(),
        },
        dim: m.dim(),
        action: (0..m.algebra().dim()).map(|i| matrix_to_lits(m.action(i))).collect(),
    }
}

pub fn read_module_file(path: &Path) -> Result<ModuleRep> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let doc: ModuleDoc = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    module_from_doc(&doc, path.parent())
}

pub fn write_module_file(path: &Path, m: &ModuleRep) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&module_to_doc(m))?)?;
    Ok(())
}

/// Document for a glued triple `(N, M', phi)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TripleDoc {
    pub n_dim: usize,
    pub m_prime: ModuleDoc,
    /// Matrix of `phi: (A/I) (x) N -> (A/I) (x) M'` as rows of literals.
    pub phi: Vec<Vec<String>>,
}

pub fn triple_from_doc(doc: &TripleDoc, base_dir: Option<&Path>) -> Result<GluedTriple> {
    let m_prime = module_from_doc(&doc.m_prime, base_dir)?;
    let phi = matrix_from_lits(m_prime.algebra().field(), &doc.phi, "phi")?;
    Ok(GluedTriple { n_dim: doc.n_dim, m_prime, phi })
}

pub fn triple_to_doc(t: &GluedTriple) -> TripleDoc {
    TripleDoc {
        n_dim: t.n_dim,
        m_prime: module_to_doc(&t.m_prime),
        phi: matrix_to_lits(&t.phi),
    }
}

pub fn read_triple_file(path: &Path) -> Result<GluedTriple> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let doc: TripleDoc = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    triple_from_doc(&doc, path.parent())
}

pub fn write_triple_file(path: &Path, t: &GluedTriple) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&triple_to_doc(t))?)?;
    Ok(())
}

/// Parses an element given as comma-separated coordinates or as a basis
/// label of the algebra.
pub fn parse_element(a: &Algebra, text: &str) -> Result<Element> {
    if let Some(idx) = a.label_index(text.trim()) {
        return Ok(a.basis_element(idx));
    }
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != a.dim() {
        return Err(Error::Parse(format!(
            "element {text:?} is neither a basis label nor {} comma-separated coordinates",
            a.dim()
        )));
    }
    let mut coords = Vec::with_capacity(parts.len());
    for (pos, part) in parts.iter().enumerate() {
        coords.push(
            a.field()
                .parse_scalar(part)
                .map_err(|e| Error::Parse(format!("coordinate {pos}: {e}")))?,
        );
    }
    a.element_from_coords(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{matrix_algebra, triangular_algebra};
    use crate::modules::regular_module;

    fn m2_doc() -> String {
        r#"{
            "field": "rationals",
            "dim": 4,
            "labels": ["e11", "e12", "e21", "e22"],
            "structure_constants": [
                [0, 0, 0, "1"], [0, 1, 1, "1"],
                [1, 2, 0, "1"], [1, 3, 1, "1"],
                [2, 0, 2, "1"], [2, 1, 3, "1"],
                [3, 2, 2, "1"], [3, 3, 3, "1"]
            ],
            "unit": ["1", "0", "0", "1"]
        }"#
        .to_string()
    }

    #[test]
    fn parse_matrix_algebra_fixture() {
        let a = parse_algebra_str(&m2_doc()).unwrap();
        assert_eq!(a, matrix_algebra(2, FieldSpec::Rationals));
        assert!(a.is_unital());
    }

    #[test]
    fn out_of_range_index_is_reported() {
        let text = r#"{"field": "rationals", "dim": 2, "structure_constants": [[0, 0, 2, "1"]]}"#;
        let err = parse_algebra_str(text).unwrap_err();
        assert!(err.to_string().contains("out of range"));
    }

    #[test]
    fn bad_unit_is_reported() {
        let text = r#"{"field": "rationals", "dim": 1, "structure_constants": [[0, 0, 0, "1"]], "unit": ["2"]}"#;
        let err = parse_algebra_str(text).unwrap_err();
        assert!(err.to_string().contains("unit"));
    }

    #[test]
    fn triangular_fixture_is_associative() {
        let t2 = triangular_algebra(FieldSpec::Rationals, &[1, 1]);
        let round = parse_algebra_str(&serde_json::to_string(&algebra_to_doc(&t2)).unwrap()).unwrap();
        assert!(round.is_associative());
        assert_eq!(round, t2);
    }

    #[test]
    fn prime_field_documents() {
        let text = r#"{"field": {"prime": 7}, "dim": 1, "structure_constants": [[0, 0, 0, "9"]]}"#;
        let a = parse_algebra_str(text).unwrap();
        assert_eq!(a.field(), FieldSpec::prime(7).unwrap());
        assert_eq!(a.structure_constants()[0].3.literal(), "2");

        let bad = r#"{"field": {"prime": 6}, "dim": 1, "structure_constants": []}"#;
        assert!(parse_algebra_str(bad).is_err());
    }

    #[test]
    fn module_documents_round_trip() {
        let m2 = matrix_algebra(2, FieldSpec::Rationals);
        let reg = regular_module(&m2, Side::Left).unwrap();
        let doc = module_to_doc(&reg);
        let parsed = module_from_doc(&doc, None).unwrap();
        assert_eq!(parsed.dim(), reg.dim());
        for i in 0..4 {
            assert_eq!(parsed.action(i), reg.action(i));
        }
        // Re-serialize: identical documents.
        assert_eq!(module_to_doc(&parsed), doc);
    }

    #[test]
    fn module_with_algebra_file_reference() {
        let dir = std::env::temp_dir().join(format!("tempered-io-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let m2 = matrix_algebra(2, FieldSpec::Rationals);
        write_algebra_file(&dir.join("m2.json"), &m2).unwrap();
        let reg = regular_module(&m2, Side::Left).unwrap();
        let mut doc = module_to_doc(&reg);
        doc.algebra = AlgebraRef::Path("m2.json".into());
        std::fs::write(dir.join("reg.json"), serde_json::to_string(&doc).unwrap()).unwrap();
        let parsed = read_module_file(&dir.join("reg.json")).unwrap();
        assert_eq!(parsed.dim(), 4);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn element_parsing() {
        let m2 = matrix_algebra(2, FieldSpec::Rationals);
        assert_eq!(parse_element(&m2, "e12").unwrap(), m2.basis_element(1));
        assert_eq!(parse_element(&m2, "0,1,0,0").unwrap(), m2.basis_element(1));
        assert_eq!(
            parse_element(&m2, "1/2,0,0,-3").unwrap().literals(),
            vec!["1/2", "0", "0", "-3"]
        );
        assert!(parse_element(&m2, "nope").is_err());
        assert!(parse_element(&m2, "1,2").is_err());
    }
}
