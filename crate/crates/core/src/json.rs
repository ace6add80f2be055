//! JSON documents exchanged by the command-line front end.
//!
//! Scalars are strings in the scalar grammar (`"3"`, `"-1/2"`,
//! `"1/2+3/2*sqrt(5)"`); fields are written as `"Q"`, `"Q(sqrt(d))"` or `"Fp"`.
//! Matrix input also accepts a bare array of rows and JSON integers.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analysis::{CheckOutcome, SpanReport};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::freealg::{HallDecomposition, MultilinearPoly};
use crate::linalg::Matrix;
use crate::scalar::{parse_scalar, parse_scalar_infer, FieldSpec, Scalar};
use crate::witness::WitnessCertificate;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub n: usize,
    pub field: String,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    /// One-based variable indices in word order.
    pub word: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub degree: usize,
    pub field: String,
    pub text: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub poly: PolyDoc,
    pub args: Vec<MatrixDoc>,
    pub target: MatrixDoc,
    pub verified: bool,
    pub field: String,
    pub conjugator: Option<MatrixDoc>,
    pub route: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallDoc {
    pub betas: Vec<String>,
    pub alphas: Vec<String>,
    pub basis: Vec<String>,
    pub standard_pattern: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanDoc {
    pub n: usize,
    pub dimension: usize,
    pub basis: Vec<MatrixDoc>,
    pub contains_sln: bool,
    pub contains_identity: bool,
    pub sample_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub holds: bool,
    pub certain: bool,
    pub mode: String,
    pub evaluations: u64,
    pub counterexample: Option<CounterexampleDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleDoc {
    pub args: Vec<MatrixDoc>,
    pub value: MatrixDoc,
}

fn join_fields<'a>(items: impl IntoIterator<Item = &'a Scalar>) -> Result<FieldSpec> {
    items.into_iter().try_fold(FieldSpec::Rationals, |acc, x| acc.join(&x.field_spec()))
}

pub fn matrix_doc<F: Field>(m: &Matrix<F>) -> MatrixDoc {
    let s = m.map(|x| x.to_scalar());
    let field = join_fields(s.entries()).map(|f| f.to_string()).unwrap_or_else(|_| "mixed".into());
    MatrixDoc { n: m.n(), field, rows: s.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect() }
}

pub fn poly_doc<F: Field>(f: &MultilinearPoly<F>) -> PolyDoc {
    let s = f.map(|c| c.to_scalar());
    let coeffs: Vec<&Scalar> = s.terms().map(|(_, c)| c).collect();
    let field = join_fields(coeffs).map(|f| f.to_string()).unwrap_or_else(|_| "mixed".into());
    PolyDoc {
        degree: f.degree(),
        field,
        text: f.to_text(),
        terms: s
            .terms()
            .map(|(w, c)| TermDoc { word: w.iter().map(|v| v + 1).collect(), coeff: c.to_string() })
            .collect(),
    }
}

pub fn certificate_doc<F: Field>(c: &WitnessCertificate<F>) -> CertificateDoc {
    let mut all: Vec<Scalar> = Vec::new();
    for a in &c.args {
        all.extend(a.entries().iter().map(|x| x.to_scalar()));
    }
    all.extend(c.poly.terms().map(|(_, x)| x.to_scalar()));
    all.extend(c.target.entries().iter().map(|x| x.to_scalar()));
    let field = join_fields(&all).map(|f| f.to_string()).unwrap_or_else(|_| "mixed".into());
    CertificateDoc {
        poly: poly_doc(&c.poly),
        args: c.args.iter().map(matrix_doc).collect(),
        target: matrix_doc(&c.target),
        verified: c.verified,
        field,
        conjugator: c.conjugator.as_ref().map(matrix_doc),
        route: c.route.clone(),
    }
}

pub fn hall_doc<F: Field>(h: &HallDecomposition<F>) -> HallDoc {
    HallDoc {
        betas: h.betas.iter().map(|x| x.to_scalar().to_string()).collect(),
        alphas: h.alphas.iter().map(|x| x.to_scalar().to_string()).collect(),
        basis: crate::freealg::hall_basis::<crate::Rational>().iter().map(|p| p.to_text()).collect(),
        standard_pattern: h.is_standard_pattern(),
    }
}

pub fn span_doc<F: Field>(r: &SpanReport<F>) -> SpanDoc {
    SpanDoc {
        n: r.n,
        dimension: r.dimension,
        basis: r.basis.iter().map(matrix_doc).collect(),
        contains_sln: r.contains_sln,
        contains_identity: r.contains_identity,
        sample_count: r.sample_count,
    }
}

pub fn check_doc<F: Field>(c: &CheckOutcome<F>) -> CheckDoc {
    CheckDoc {
        holds: c.holds,
        certain: c.certain,
        mode: serde_json::to_value(c.mode).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        evaluations: c.evaluations,
        counterexample: c
            .counterexample
            .as_ref()
            .map(|ce| CounterexampleDoc { args: ce.args.iter().map(matrix_doc).collect(), value: matrix_doc(&ce.value) }),
    }
}

fn parse_entry(v: &Value, field: Option<&FieldSpec>) -> Result<Scalar> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => return Err(Error::InvalidInput(format!("matrix entry must be a string or integer, got {other}"))),
    };
    match field {
        Some(f) => parse_scalar(&text, f),
        None => parse_scalar_infer(&text),
    }
}

/// Reads a matrix from a bare array of rows or a [`MatrixDoc`]-shaped object.
///
/// An explicit `field` wins over `field_hint`; without either, entries are
/// inferred and unified.
pub fn matrix_from_value(v: &Value, field_hint: Option<&FieldSpec>) -> Result<Matrix<Scalar>> {
    let (rows, field) = match v {
        Value::Array(_) => (v, field_hint.copied()),
        Value::Object(map) => {
            let rows = map.get("rows").ok_or_else(|| Error::InvalidInput("matrix object needs 'rows'".into()))?;
            let field = match map.get("field") {
                Some(Value::String(s)) => Some(s.parse::<FieldSpec>()?),
                Some(other) => return Err(Error::InvalidInput(format!("bad field {other}"))),
                None => field_hint.copied(),
            };
            (rows, field)
        }
        other => return Err(Error::InvalidInput(format!("expected a matrix, got {other}"))),
    };
    let rows = rows.as_array().ok_or_else(|| Error::InvalidInput("'rows' must be an array".into()))?;
    let mut parsed = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_array().ok_or_else(|| Error::InvalidInput("each row must be an array".into()))?;
        parsed.push(r.iter().map(|x| parse_entry(x, field.as_ref())).collect::<Result<Vec<_>>>()?);
    }
    let joined = match field {
        Some(f) => f,
        None => join_fields(parsed.iter().flatten())?,
    };
    let unified = parsed
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.in_field(&joined)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_rows(unified)?;
    if let Value::Object(map) = v {
        if let Some(n) = map.get("n").and_then(Value::as_u64) {
            if n as usize != m.n() {
                return Err(Error::DimensionMismatch(format!("declared n = {n}, rows give {}", m.n())));
            }
        }
    }
    Ok(m)
}

pub fn matrix_from_doc(d: &MatrixDoc) -> Result<Matrix<Scalar>> {
    matrix_from_value(&serde_json::to_value(d).expect("serializable"), None)
}

pub fn poly_from_doc(d: &PolyDoc) -> Result<MultilinearPoly<Scalar>> {
    let field: Option<FieldSpec> = d.field.parse().ok();
    let terms = d
        .terms
        .iter()
        .map(|t| {
            if t.word.contains(&0) {
                return Err(Error::InvalidInput("variable indices are one-based".into()));
            }
            let c = match &field {
                Some(f) => parse_scalar(&t.coeff, f)?,
                None => parse_scalar_infer(&t.coeff)?,
            };
            Ok((t.word.iter().map(|v| v - 1).collect(), c))
        })
        .collect::<Result<Vec<_>>>()?;
    MultilinearPoly::from_terms(d.degree, terms)
}

/// Rebuilds a certificate; `verified` is taken from the document, not recomputed.
pub fn certificate_from_doc(d: &CertificateDoc) -> Result<WitnessCertificate<Scalar>> {
    Ok(WitnessCertificate {
        poly: poly_from_doc(&d.poly)?,
        args: d.args.iter().map(matrix_from_doc).collect::<Result<Vec<_>>>()?,
        target: matrix_from_doc(&d.target)?,
        verified: d.verified,
        conjugator: d.conjugator.as_ref().map(matrix_from_doc).transpose()?,
        route: d.route.clone(),
    })
}

/// Error document printed on domain failures.
pub fn error_value(e: &Error) -> Value {
    serde_json::json!({ "error": { "code": e.code(), "message": e.to_string() } })
}
