//! JSON documents read and written by the command-line tool.
//!
//! Every document is an object with a `"kind"` field: `path`, `subdivision`,
//! `polynomial`, `curve` or `count`. Parsers validate the same invariants
//! as the in-memory constructors.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, LatticeParallelogram, LatticePath, LatticePoint, LatticeTriangle};
use crate::gw::{GwElement, GwError};
use crate::path_count::CountResult;
use crate::subdivision::{DualSubdivision, SubdivisionError};
use crate::trop_poly::{TropError, TropicalCurve, TropicalPolynomial};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Tropical(#[from] TropError),
    #[error("bad quadratic form: {0}")]
    Gw(#[from] GwError),
    #[error("coefficient does not fit in 64 bits")]
    CoefficientRange,
    #[error("inconsistent document: {0}")]
    Inconsistent(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDoc {
    pub degree: u32,
    pub points: Vec<LatticePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionDoc {
    pub degree: u32,
    pub triangles: Vec<LatticeTriangle>,
    #[serde(default)]
    pub parallelograms: Vec<LatticeParallelogram>,
    /// The path the subdivision was traced from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<LatticePoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub i: i64,
    pub j: i64,
    pub num: i64,
    #[serde(default = "one")]
    pub den: i64,
}

fn one() -> i64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialDoc {
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRow {
    pub points: Vec<LatticePoint>,
    pub mu_plus: String,
    pub mu_minus: String,
    pub mu: String,
    pub irreducible: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountDoc {
    pub degree: u32,
    pub quadratic: String,
    pub rank: i64,
    pub signature: i64,
    pub including_reducible: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<PathRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Path(PathDoc),
    Subdivision(SubdivisionDoc),
    Polynomial(PolynomialDoc),
    Curve(TropicalCurve),
    Count(CountDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Path(_) => "path",
            Document::Subdivision(_) => "subdivision",
            Document::Polynomial(_) => "polynomial",
            Document::Curve(_) => "curve",
            Document::Count(_) => "count",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }
}

pub fn parse_document(text: &str) -> Result<Document, IoError> {
    Ok(serde_json::from_str(text)?)
}

fn wrong(expected: &'static str, doc: &Document) -> IoError {
    IoError::WrongKind { expected, found: doc.kind() }
}

pub fn path_doc(path: &LatticePath) -> Document {
    Document::Path(PathDoc { degree: path.degree(), points: path.points().to_vec() })
}

pub fn parse_path(text: &str) -> Result<LatticePath, IoError> {
    match parse_document(text)? {
        Document::Path(p) => Ok(LatticePath::new(p.degree, p.points)?),
        other => Err(wrong("path", &other)),
    }
}

pub fn subdivision_doc(
    s: &DualSubdivision,
    path: Option<&LatticePath>,
    multiplicity: Option<&GwElement>,
) -> Document {
    Document::Subdivision(SubdivisionDoc {
        degree: s.degree(),
        triangles: s.triangles().to_vec(),
        parallelograms: s.parallelograms().to_vec(),
        path: path.map(|p| p.points().to_vec()),
        multiplicity: multiplicity.map(|m| m.to_string()),
        irreducible: Some(s.dual_curve_connected()),
    })
}

pub fn parse_subdivision(text: &str) -> Result<DualSubdivision, IoError> {
    match parse_document(text)? {
        Document::Subdivision(s) => {
            if let Some(points) = s.path {
                LatticePath::new(s.degree, points)?;
            }
            if let Some(m) = &s.multiplicity {
                m.parse::<GwElement>()?;
            }
            Ok(DualSubdivision::new(s.degree, s.triangles, s.parallelograms)?)
        }
        other => Err(wrong("subdivision", &other)),
    }
}

pub fn polynomial_doc(p: &TropicalPolynomial) -> Result<Document, IoError> {
    let terms = p
        .terms()
        .iter()
        .map(|(e, c)| {
            let small = |x: &BigInt| i64::try_from(x).map_err(|_| IoError::CoefficientRange);
            Ok(Term { i: e.i, j: e.j, num: small(c.numer())?, den: small(c.denom())? })
        })
        .collect::<Result<_, IoError>>()?;
    Ok(Document::Polynomial(PolynomialDoc { terms }))
}

pub fn parse_polynomial(text: &str) -> Result<TropicalPolynomial, IoError> {
    match parse_document(text)? {
        Document::Polynomial(p) => {
            let mut terms = Vec::with_capacity(p.terms.len());
            for t in p.terms {
                if t.den == 0 {
                    return Err(TropError::ZeroDenominator.into());
                }
                terms.push((LatticePoint::new(t.i, t.j), BigRational::new(t.num.into(), t.den.into())));
            }
            Ok(TropicalPolynomial::new(terms)?)
        }
        other => Err(wrong("polynomial", &other)),
    }
}

pub fn parse_curve(text: &str) -> Result<TropicalCurve, IoError> {
    match parse_document(text)? {
        Document::Curve(c) => {
            c.validate()?;
            Ok(c)
        }
        other => Err(wrong("curve", &other)),
    }
}

pub fn count_doc(r: &CountResult) -> Document {
    let paths = r
        .per_path
        .iter()
        .map(|rec| PathRow {
            points: rec.path.points().to_vec(),
            mu_plus: rec.multiplicity.mu_plus.to_string(),
            mu_minus: rec.multiplicity.mu_minus.to_string(),
            mu: rec.multiplicity.mu.to_string(),
            irreducible: rec.multiplicity.irreducible.to_string(),
        })
        .collect();
    Document::Count(CountDoc {
        degree: r.degree,
        quadratic: r.quadratic.to_string(),
        rank: r.complex_count,
        signature: r.real_count,
        including_reducible: r.including_reducible.to_string(),
        paths,
    })
}

/// Reads a count document back, checking that every form parses and that
/// rank and signature agree with the stated form.
pub fn parse_count(text: &str) -> Result<CountDoc, IoError> {
    match parse_document(text)? {
        Document::Count(c) => {
            let q: GwElement = c.quadratic.parse()?;
            c.including_reducible.parse::<GwElement>()?;
            if q.rank() != c.rank || q.real_signature()? != c.signature {
                return Err(IoError::Inconsistent("rank or signature disagrees with the form"));
            }
            for row in &c.paths {
                LatticePath::new(c.degree, row.points.clone())?;
                for m in [&row.mu_plus, &row.mu_minus, &row.mu, &row.irreducible] {
                    m.parse::<GwElement>()?;
                }
            }
            Ok(c)
        }
        other => Err(wrong("count", &other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path_count::{count, possible_subdivisions};
    use crate::trop_poly::corner_locus;

    const LINE: &str = r#"{"kind":"polynomial","terms":[{"i":1,"j":0,"num":0},{"i":0,"j":1,"num":0},{"i":0,"j":0,"num":-1,"den":1}]}"#;

    #[test]
    fn path_round_trip() {
        let text = r#"{"kind":"path","degree":1,"points":[[0,1],[0,0],[1,0]]}"#;
        let p = parse_path(text).unwrap();
        assert_eq!(parse_path(&path_doc(&p).to_json()).unwrap(), p);
        let bad = r#"{"kind":"path","degree":1,"points":[[0,0],[0,1],[1,0]]}"#;
        assert!(matches!(parse_path(bad), Err(IoError::Geometry(_))));
        assert!(matches!(parse_path(LINE), Err(IoError::WrongKind { expected: "path", found: "polynomial" })));
    }

    #[test]
    fn polynomial_and_curve() {
        let p = parse_polynomial(LINE).unwrap();
        assert_eq!(parse_polynomial(&polynomial_doc(&p).unwrap().to_json()).unwrap(), p);
        let curve = corner_locus(&p).unwrap();
        let text = Document::Curve(curve.clone()).to_json();
        assert!(text.contains(r#""x": "-1""#));
        assert_eq!(parse_curve(&text).unwrap(), curve);
        let zero = r#"{"kind":"polynomial","terms":[{"i":0,"j":0,"num":1,"den":0}]}"#;
        assert!(matches!(parse_polynomial(zero), Err(IoError::Tropical(TropError::ZeroDenominator))));
    }

    #[test]
    fn subdivision_round_trip() {
        let path = crate::path_count::enumerate_paths(2).unwrap().next().unwrap();
        for (s, m) in possible_subdivisions(&path) {
            let text = subdivision_doc(&s, Some(&path), Some(&m)).to_json();
            assert_eq!(parse_subdivision(&text).unwrap(), s);
        }
        let broken = r#"{"kind":"subdivision","degree":1,"triangles":[]}"#;
        assert!(matches!(parse_subdivision(broken), Err(IoError::Subdivision(_))));
    }

    #[test]
    fn count_round_trip() {
        let r = count(3).unwrap();
        let doc = parse_count(&count_doc(&r).to_json()).unwrap();
        assert_eq!(doc.quadratic, "2ℍ + 8⟨1⟩");
        assert_eq!((doc.rank, doc.signature), (12, 8));
        let lying = count_doc(&r).to_json().replace("\"rank\": 12", "\"rank\": 13");
        assert!(matches!(parse_count(&lying), Err(IoError::Inconsistent(_))));
    }
}
