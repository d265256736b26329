//! JSON problem documents.
//!
//! ```json
//! {"p": 3, "f": 1, "precision": 20,
//!  "frobenius": [["0", "3"], ["1", "0"]],
//!  "filtration": [{"degree": 0, "basis": [["1","0"],["0","1"]]},
//!                 {"degree": 1, "basis": [["1","1"]]}]}
//! ```
//!
//! Scalars are rational literals `"a/b"` when f = 1 and arrays of f literals
//! (power-basis coordinates) otherwise.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtered::FilteredIsocrystal;
use crate::isocrystal::Isocrystal;
use crate::padic::{PadicScalar, UnramifiedField};
use crate::{Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarLiteral {
    Rational(String),
    Coordinates(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationEntry {
    pub degree: i64,
    pub basis: Vec<Vec<ScalarLiteral>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// "exact" or "mc".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub p: u64,
    pub f: usize,
    pub precision: u32,
    pub frobenius: Vec<Vec<ScalarLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<Vec<FiltrationEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Options>,
}

/// A parsed and validated document.
#[derive(Debug, Clone)]
pub struct Problem {
    pub field: UnramifiedField,
    pub isocrystal: Isocrystal,
    pub filtration: Option<FilteredIsocrystal>,
    pub options: Options,
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Build the objects, optionally overriding the precision.
    pub fn build(&self, precision: Option<u32>) -> Result<Problem> {
        let field = UnramifiedField::new(self.p, self.f, precision.unwrap_or(self.precision))?;
        let n = self.frobenius.len();
        let rows = self
            .frobenius
            .iter()
            .map(|row| {
                if row.len() != n {
                    return Err(Error::Parse(format!(
                        "Frobenius matrix is not square: row of length {} in a {n}-row matrix",
                        row.len()
                    )));
                }
                row.iter().map(|x| parse_scalar(&field, x)).collect()
            })
            .collect::<Result<Vec<Vec<PadicScalar>>>>()?;
        let isocrystal = Isocrystal::new(Matrix::from_rows(&field, rows)?)?;
        let filtration = match &self.filtration {
            None => None,
            Some(entries) => {
                let parsed = entries
                    .iter()
                    .map(|e| {
                        let vectors = e
                            .basis
                            .iter()
                            .map(|v| {
                                if v.len() != n {
                                    return Err(Error::Parse(format!(
                                        "basis vector of length {} in dimension {n}",
                                        v.len()
                                    )));
                                }
                                v.iter().map(|x| parse_scalar(&field, x)).collect()
                            })
                            .collect::<Result<Vec<Vec<PadicScalar>>>>()?;
                        Ok((e.degree, Subspace::span(&field, n, vectors)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(FilteredIsocrystal::new(isocrystal.clone(), parsed)?)
            }
        };
        Ok(Problem {
            field,
            isocrystal,
            filtration,
            options: self.options.clone().unwrap_or_default(),
        })
    }

    /// Document describing an isocrystal and optional filtration.
    pub fn from_objects(isocrystal: &Isocrystal, filtration: Option<&FilteredIsocrystal>) -> Self {
        let field = isocrystal.field();
        ProblemDocument {
            p: field.p(),
            f: field.degree(),
            precision: field.precision(),
            frobenius: isocrystal
                .matrix()
                .to_rows()
                .iter()
                .map(|r| r.iter().map(scalar_literal).collect())
                .collect(),
            filtration: filtration.map(|x| {
                x.steps()
                    .iter()
                    .map(|s| FiltrationEntry {
                        degree: s.degree,
                        basis: basis_literals(&s.subspace),
                    })
                    .collect()
            }),
            options: None,
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let q = BigRational::from_str(t).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(q)
}

pub fn parse_scalar(field: &UnramifiedField, x: &ScalarLiteral) -> Result<PadicScalar> {
    let coords = match x {
        ScalarLiteral::Rational(s) => {
            if field.degree() != 1 {
                return Err(Error::Parse(format!(
                    "scalar {s:?} must be an array of {} coordinates",
                    field.degree()
                )));
            }
            vec![parse_rational(s)?]
        }
        ScalarLiteral::Coordinates(cs) => {
            if cs.len() != field.degree() {
                return Err(Error::Parse(format!(
                    "scalar has {} coordinates, expected {}",
                    cs.len(),
                    field.degree()
                )));
            }
            cs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?
        }
    };
    field
        .element(&coords)
        .map_err(|e| Error::Parse(format!("scalar {x:?}: {e}")))
}

pub fn scalar_literal(x: &PadicScalar) -> ScalarLiteral {
    let coords = x.to_rational_coords();
    if coords.len() == 1 {
        ScalarLiteral::Rational(coords[0].to_string())
    } else {
        ScalarLiteral::Coordinates(coords.iter().map(|c| c.to_string()).collect())
    }
}

pub fn basis_literals(u: &Subspace) -> Vec<Vec<ScalarLiteral>> {
    u.basis()
        .iter()
        .map(|v| v.iter().map(scalar_literal).collect())
        .collect()
}

pub fn matrix_literals(m: &Matrix) -> Vec<Vec<ScalarLiteral>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(scalar_literal).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Scalar, ScalarField};

    #[test]
    fn parse_simple_document() {
        let doc = ProblemDocument::from_json(
            r#"{"p": 3, "f": 1, "precision": 20,
                "frobenius": [["0", "3"], ["1", "0"]],
                "filtration": [{"degree": 0, "basis": [["1","0"],["0","1"]]},
                               {"degree": 1, "basis": [["1","-1/2"]]}]}"#,
        )
        .unwrap();
        let pr = doc.build(None).unwrap();
        assert_eq!(pr.isocrystal.newton_number().unwrap(), 1);
        let x = pr.filtration.unwrap();
        assert_eq!(x.hodge_number(), 1);
        let doc2 = ProblemDocument::from_objects(&pr.isocrystal, Some(&x));
        let again = ProblemDocument::from_json(&doc2.to_json()).unwrap();
        assert_eq!(again, doc2);
        assert_eq!(again.filtration.as_ref().unwrap()[1].basis[0][1], ScalarLiteral::Rational("-1/2".into()));
    }

    #[test]
    fn extension_scalars() {
        let k = UnramifiedField::new(5, 2, 12).unwrap();
        let x = parse_scalar(&k, &ScalarLiteral::Coordinates(vec!["1/3".into(), "-2".into()])).unwrap();
        assert_eq!(x, k.rational(1, 3).unwrap().add(&k.generator().mul(&k.from_i64(-2))));
        assert_eq!(scalar_literal(&x), ScalarLiteral::Coordinates(vec!["1/3".into(), "-2".into()]));
        assert!(parse_scalar(&k, &ScalarLiteral::Rational("1".into())).is_err());
    }

    #[test]
    fn malformed_documents() {
        for bad in [
            r#"{"p": 3, "f": 1, "precision": 20, "frobenius": [["1", "0"]]}"#,
            r#"{"p": 3, "f": 1, "precision": 20, "frobenius": [["x"]]}"#,
            r#"{"p": 3, "f": 1, "precision": 20, "frobenius": [["1/0"]]}"#,
            r#"{"p": 3, "f": 1, "frobenius": [["1"]]}"#,
            r#"{"p": 3, "f": 1, "precision": 20, "frobenius": [["1"]], "extra": 1}"#,
        ] {
            let res = ProblemDocument::from_json(bad).and_then(|d| d.build(None));
            assert!(matches!(res, Err(Error::Parse(_))), "{bad}: {res:?}");
        }
        let not_prime = ProblemDocument::from_json(r#"{"p": 4, "f": 1, "precision": 20, "frobenius": [["1"]]}"#)
            .unwrap()
            .build(None);
        assert_eq!(not_prime.unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn precision_override() {
        let doc = ProblemDocument::from_json(r#"{"p": 2, "f": 1, "precision": 20, "frobenius": [["1"]]}"#).unwrap();
        assert_eq!(doc.build(Some(48)).unwrap().field.precision(), 48);
    }
}
