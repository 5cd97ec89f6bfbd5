use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::curvature::{validate_point, HermitianPoint};
use crate::error::{Error, Result};
use crate::multilinear::{curvature_symmetry_defects, CurvTensor};

use super::report::{to_canonical_json, SCHEMA_VERSION};

pub const INDEX_ORDER: &str = "g[i*dim+j] = g(e_i,e_j); j[k*dim+i] = (J e_i)^k; r[((i*dim+j)*dim+k)*dim+l] = R(e_i,e_j,e_k,e_l)";

/// Metric, complex structure and curvature at one point, as flat row-major
/// arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDocument {
    pub schema_version: u32,
    pub dim: usize,
    pub g: Vec<f64>,
    pub j: Vec<f64>,
    pub r: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default = "default_index_order")]
    pub index_order: String,
}

fn default_index_order() -> String {
    INDEX_ORDER.to_string()
}

fn flat(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    (0..n * n).map(|k| m[(k / n, k % n)]).collect()
}

impl TensorDocument {
    pub fn from_parts(point: &HermitianPoint, r: &CurvTensor, label: Option<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dim: point.dim(),
            g: flat(point.g()),
            j: flat(point.j()),
            r: r.as_slice().to_vec(),
            label,
            index_order: default_index_order(),
        }
    }

    /// Checks shapes, the Hermitian structure and the curvature symmetries.
    pub fn validate(&self, tol: f64) -> Result<(HermitianPoint, CurvTensor)> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Malformed(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let n = self.dim;
        if n == 0 {
            return Err(Error::Malformed("dim must be positive".into()));
        }
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        for (name, v, len) in [
            ("g", &self.g, n * n),
            ("j", &self.j, n * n),
            ("r", &self.r, n.pow(4)),
        ] {
            if v.len() != len {
                return Err(Error::DimensionMismatch {
                    expected: len,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(name_static(name)));
            }
        }
        let g = DMatrix::from_row_slice(n, n, &self.g);
        let j = DMatrix::from_row_slice(n, n, &self.j);
        let point = validate_point(g, j, tol)?.with_tol(tol);
        let r = CurvTensor::from_vec(n, self.r.clone())?;
        let defect = curvature_symmetry_defects(&r)?.max_defining();
        let bound = tol * (1.0 + r.max_abs());
        if defect > bound {
            return Err(Error::NotCurvatureClass { defect, tol: bound });
        }
        Ok((point, r))
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}

fn name_static(name: &str) -> &'static str {
    match name {
        "g" => "metric components",
        "j" => "complex structure components",
        _ => "curvature components",
    }
}

/// Writes the canonical JSON form of `doc`.
pub fn dump_tensor(doc: &TensorDocument, path: &Path) -> Result<()> {
    fs::write(path, doc.to_json()?)?;
    Ok(())
}

/// Reads and validates a document.
pub fn load_tensor(path: &Path, tol: f64) -> Result<TensorDocument> {
    let doc = TensorDocument::from_json(&fs::read_to_string(path)?)?;
    doc.validate(tol)?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::ModelSpec;
    use crate::error::PointInvariant;

    fn s6_doc() -> TensorDocument {
        let (p, r) = ModelSpec::Sphere6 { c: 1.0 }.algebraic().unwrap();
        TensorDocument::from_parts(&p, &r, Some("s6(1)".into()))
    }

    #[test]
    fn round_trip_is_bitwise() {
        let (p, r) = ModelSpec::ComplexProjective {
            m: 2,
            mu: 1.0 / 3.0,
        }
        .algebraic()
        .unwrap();
        let p = HermitianPoint::new(p.g() * 1.1, p.j().clone()).unwrap();
        let doc = TensorDocument::from_parts(&p, &(&r * 0.7), None);
        let back = TensorDocument::from_json(&doc.to_json().unwrap()).unwrap();
        assert_eq!(back, doc);
        for (a, b) in back.r.iter().zip(&doc.r) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s6.json");
        let doc = s6_doc();
        dump_tensor(&doc, &path).unwrap();
        assert_eq!(load_tensor(&path, 1e-12).unwrap(), doc);
    }

    #[test]
    fn bad_complex_structure_is_reported() {
        let mut doc = s6_doc();
        doc.j[1] *= 2.0;
        doc.j[6] *= 2.0;
        match doc.validate(1e-12) {
            Err(Error::InvalidPoint(v)) => {
                assert!(v
                    .iter()
                    .any(|x| x.invariant == PointInvariant::ComplexStructure && x.defect > 0.5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn odd_dimension_rejected() {
        let doc = TensorDocument {
            dim: 5,
            g: vec![0.0; 25],
            j: vec![0.0; 25],
            r: vec![0.0; 625],
            ..s6_doc()
        };
        assert!(matches!(doc.validate(1e-12), Err(Error::OddDimension(5))));
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(
            TensorDocument::from_json("{\"dim\": 2"),
            Err(Error::Malformed(_))
        ));
        let mut doc = s6_doc();
        doc.r.pop();
        assert!(matches!(
            doc.validate(1e-12),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut doc = s6_doc();
        doc.r[1] = 1.0;
        assert!(matches!(
            doc.validate(1e-12),
            Err(Error::NotCurvatureClass { .. })
        ));
    }
}
