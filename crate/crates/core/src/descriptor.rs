//! JSON algebra descriptors: a family selector or an explicit presentation
//! with exact rational strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cdg::{
    build_dual_numbers, build_exterior_with_degree, build_mf_algebra, build_truncated_polynomial_graded,
    AlgebraPresentation, CdgError, FamilyKind, Variable,
};
use crate::graded::{GradedSpace, Grading};
use crate::poly::Poly;
use crate::rational::{collect_sparse, format_q, parse_q, SparseVec, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{path}: {message}")]
pub struct DescriptorError {
    /// JSON path of the offending value, `$` for the document root.
    pub path: String,
    pub message: String,
}

fn err(path: impl Into<String>, message: impl Into<String>) -> DescriptorError {
    DescriptorError {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDoc {
    pub name: String,
    #[serde(default)]
    pub degree: i64,
    #[serde(default = "one")]
    pub weight: u32,
}

fn one() -> u32 {
    1
}

fn one_i64() -> i64 {
    1
}

fn integer() -> Grading {
    Grading::Integer
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDoc {
    pub label: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub left: String,
    pub right: String,
    /// Basis label to rational coefficient string.
    pub value: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialDoc {
    pub source: String,
    pub value: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncatedPolynomialDoc {
    pub variables: Vec<VariableDoc>,
    pub order: i64,
    #[serde(default = "integer")]
    pub grading: Grading,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExteriorDoc {
    pub generators: usize,
    #[serde(default = "one_i64")]
    pub generator_degree: i64,
    #[serde(default = "integer")]
    pub grading: Grading,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFactorizationDoc {
    pub variables: Vec<String>,
    pub potential: String,
    pub order: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualNumbersDoc {}

/// Products involving the unit may be omitted; they are filled in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitDoc {
    pub grading: Grading,
    pub basis: Vec<BasisDoc>,
    pub unit: String,
    #[serde(default)]
    pub structure_constants: Vec<ProductDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<DifferentialDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub curvature: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraDescriptor {
    TruncatedPolynomial(TruncatedPolynomialDoc),
    Exterior(ExteriorDoc),
    MatrixFactorization(MatrixFactorizationDoc),
    DualNumbers(DualNumbersDoc),
    Explicit(ExplicitDoc),
}

const KINDS: [&str; 5] = ["truncated_polynomial", "exterior", "matrix_factorization", "dual_numbers", "explicit"];

fn body<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T, DescriptorError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "$".to_string() } else { format!("$.{path}") };
        err(path, e.inner().to_string())
    })
}

/// Parses a descriptor document; schema errors carry the JSON path.
pub fn parse_descriptor(text: &str) -> Result<AlgebraDescriptor, DescriptorError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| err("$", e.to_string()))?;
    let serde_json::Value::Object(mut obj) = v else {
        return Err(err("$", "expected an object"));
    };
    let kind = match obj.remove("kind") {
        Some(serde_json::Value::String(k)) => k,
        Some(_) => return Err(err("$.kind", "expected a string")),
        None => return Err(err("$", "missing field `kind`")),
    };
    let rest = serde_json::Value::Object(obj);
    Ok(match kind.as_str() {
        "truncated_polynomial" => AlgebraDescriptor::TruncatedPolynomial(body(rest)?),
        "exterior" => AlgebraDescriptor::Exterior(body(rest)?),
        "matrix_factorization" => AlgebraDescriptor::MatrixFactorization(body(rest)?),
        "dual_numbers" => AlgebraDescriptor::DualNumbers(body(rest)?),
        "explicit" => AlgebraDescriptor::Explicit(body(rest)?),
        k => return Err(err("$.kind", format!("unknown kind {k:?}, expected one of {}", KINDS.join(", ")))),
    })
}

pub fn to_json(d: &AlgebraDescriptor) -> String {
    serde_json::to_string_pretty(d).expect("descriptors serialize")
}

fn cdg_err(path: &str, e: CdgError) -> DescriptorError {
    err(path, e.to_string())
}

fn vector(
    space: &GradedSpace,
    value: &BTreeMap<String, String>,
    path: &str,
) -> Result<SparseVec, DescriptorError> {
    let mut out = Vec::new();
    for (label, c) in value {
        let i = space
            .lookup(label)
            .ok_or_else(|| err(format!("{path}.{label}"), format!("unknown basis label {label:?}")))?;
        let c = parse_q(c).map_err(|e| err(format!("{path}.{label}"), e.to_string()))?;
        out.push((i, c));
    }
    Ok(collect_sparse(out))
}

impl AlgebraDescriptor {
    pub fn build(&self) -> Result<AlgebraPresentation, DescriptorError> {
        match self {
            AlgebraDescriptor::TruncatedPolynomial(TruncatedPolynomialDoc {
                variables,
                order,
                grading,
            }) => {
                if variables.is_empty() {
                    return Err(err("$.variables", "at least one variable is required"));
                }
                let vars: Vec<Variable> = variables.iter().map(|v| Variable::new(&v.name, v.degree, v.weight)).collect();
                build_truncated_polynomial_graded(&vars, *order, *grading).map_err(|e| match e {
                    CdgError::NonPositiveOrder(_) => cdg_err("$.order", e),
                    CdgError::NonPositiveWeight => cdg_err("$.variables", e),
                    e => cdg_err("$", e),
                })
            }
            AlgebraDescriptor::Exterior(ExteriorDoc {
                generators,
                generator_degree,
                grading,
            }) => {
                if *generators > 12 {
                    return Err(err("$.generators", "at most 12 generators are supported"));
                }
                Ok(build_exterior_with_degree(*generators, *generator_degree, *grading))
            }
            AlgebraDescriptor::MatrixFactorization(MatrixFactorizationDoc {
                variables,
                potential,
                order,
            }) => {
                if variables.is_empty() {
                    return Err(err("$.variables", "at least one variable is required"));
                }
                let f = Poly::parse(potential, variables).map_err(|e| err("$.potential", e.to_string()))?;
                build_mf_algebra(&f, variables, *order).map_err(|e| match e {
                    CdgError::ConstantTerm | CdgError::PotentialTooLarge { .. } => cdg_err("$.potential", e),
                    CdgError::NonPositiveOrder(_) => cdg_err("$.order", e),
                    e => cdg_err("$", e),
                })
            }
            AlgebraDescriptor::DualNumbers(_) => Ok(build_dual_numbers()),
            AlgebraDescriptor::Explicit(ExplicitDoc {
                grading,
                basis,
                unit,
                structure_constants,
                differential,
                curvature,
            }) => {
                let space = Arc::new(
                    GradedSpace::new(*grading, basis.iter().map(|b| (b.label.clone(), b.degree)).collect())
                        .map_err(|e| err("$.basis", e.to_string()))?,
                );
                let n = space.dim();
                let u = space
                    .lookup(unit)
                    .ok_or_else(|| err("$.unit", format!("unknown basis label {unit:?}")))?;
                let mut mult: Vec<Option<SparseVec>> = vec![None; n * n];
                for (k, p) in structure_constants.iter().enumerate() {
                    let path = format!("$.structure_constants[{k}]");
                    let i = space
                        .lookup(&p.left)
                        .ok_or_else(|| err(format!("{path}.left"), format!("unknown basis label {:?}", p.left)))?;
                    let j = space
                        .lookup(&p.right)
                        .ok_or_else(|| err(format!("{path}.right"), format!("unknown basis label {:?}", p.right)))?;
                    if mult[i * n + j].is_some() {
                        return Err(err(path, format!("product {}*{} given twice", p.left, p.right)));
                    }
                    mult[i * n + j] = Some(vector(&space, &p.value, &format!("{path}.value"))?);
                }
                for b in 0..n {
                    let e = vec![(b, Q::from_integer(1.into()))];
                    mult[u * n + b].get_or_insert_with(|| e.clone());
                    mult[b * n + u].get_or_insert(e);
                }
                let mult = mult.into_iter().map(|m| m.unwrap_or_default()).collect();
                let mut dcols = vec![SparseVec::new(); n];
                for (k, d) in differential.iter().enumerate() {
                    let path = format!("$.differential[{k}]");
                    let i = space
                        .lookup(&d.source)
                        .ok_or_else(|| err(format!("{path}.source"), format!("unknown basis label {:?}", d.source)))?;
                    dcols[i] = vector(&space, &d.value, &format!("{path}.value"))?;
                }
                let curv = vector(&space, curvature, "$.curvature")?;
                AlgebraPresentation::new(space, u, mult, dcols, curv, None).map_err(|e| cdg_err("$", e))
            }
        }
    }

    /// The explicit form of any presentation; unit products are left out.
    pub fn explicit_from(a: &AlgebraPresentation) -> Self {
        let sp = a.space();
        let n = a.dim();
        let u = a.unit();
        let value = |v: &SparseVec| -> BTreeMap<String, String> {
            v.iter().map(|(i, c)| (sp.label(*i).to_string(), format_q(c))).collect()
        };
        let mut structure_constants = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = a.mul_basis(i, j);
                if i == u || j == u || p.is_empty() {
                    continue;
                }
                structure_constants.push(ProductDoc {
                    left: sp.label(i).to_string(),
                    right: sp.label(j).to_string(),
                    value: value(p),
                });
            }
        }
        let differential = (0..n)
            .filter(|&i| !a.d_basis(i).is_empty())
            .map(|i| DifferentialDoc {
                source: sp.label(i).to_string(),
                value: value(a.d_basis(i)),
            })
            .collect();
        AlgebraDescriptor::Explicit(ExplicitDoc {
            grading: a.grading(),
            basis: sp
                .basis()
                .iter()
                .map(|b| BasisDoc {
                    label: b.label.clone(),
                    degree: b.degree,
                })
                .collect(),
            unit: sp.label(u).to_string(),
            structure_constants,
            differential,
            curvature: value(a.curvature()),
        })
    }

    pub fn is_matrix_factorization(&self) -> bool {
        matches!(self, AlgebraDescriptor::MatrixFactorization(_))
    }
}

/// Whether the family supports the Koszul pipeline.
pub fn supports_koszul(a: &AlgebraPresentation) -> bool {
    matches!(
        a.family().map(|f| f.kind),
        Some(FamilyKind::TruncatedPolynomial) | Some(FamilyKind::MatrixFactorization)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdg::{random_cdg, validate_cdg};

    #[test]
    fn family_documents_build() {
        let d = parse_descriptor(r#"{"kind": "exterior", "generators": 2}"#).unwrap();
        let a = d.build().unwrap();
        assert_eq!(a.dim(), 4);
        assert!(validate_cdg(&a).is_empty());
        let d = parse_descriptor(r#"{"kind": "dual_numbers"}"#).unwrap();
        assert_eq!(d.build().unwrap().dim(), 2);
    }

    #[test]
    fn constant_potential_is_refused_at_its_path() {
        let d = parse_descriptor(
            r#"{"kind": "matrix_factorization", "variables": ["x"], "potential": "1 + x^2", "order": 4}"#,
        )
        .unwrap();
        assert_eq!(d.build().unwrap_err().path, "$.potential");
    }

    #[test]
    fn schema_errors_carry_paths() {
        let e = parse_descriptor(r#"{"kind": "truncated_polynomial", "variables": [{"name": "x", "weight": -1}], "order": 3}"#)
            .unwrap_err();
        assert_eq!(e.path, "$.variables[0].weight");
        let e = parse_descriptor(r#"{"kind": "torus"}"#).unwrap_err();
        assert!(e.message.contains("torus"));
        let e = parse_descriptor(r#"{"kind": "dual_numbers", "extra": 1}"#).unwrap_err();
        assert!(e.message.contains("extra"));
    }

    #[test]
    fn explicit_round_trip_is_identical() {
        for seed in 0..25 {
            let a = random_cdg(seed);
            let doc = to_json(&AlgebraDescriptor::explicit_from(&a));
            let back = parse_descriptor(&doc).unwrap().build().unwrap();
            assert_eq!(back, a, "seed {seed}");
            let again = to_json(&parse_descriptor(&doc).unwrap());
            assert_eq!(again, doc);
        }
    }

    #[test]
    fn corrupted_constants_fail_associativity() {
        let a = crate::cdg::build_exterior(3);
        let mut doc = AlgebraDescriptor::explicit_from(&a);
        if let AlgebraDescriptor::Explicit(ExplicitDoc { structure_constants, .. }) = &mut doc {
            let p = structure_constants.iter_mut().find(|p| p.left == "t1" && p.right == "t2").unwrap();
            p.value = BTreeMap::from([("t1*t2".to_string(), "2".to_string())]);
        }
        let b = doc.build().unwrap();
        assert!(validate_cdg(&b).iter().any(|v| v.axiom == crate::cdg::Axiom::Associativity));
    }
}
