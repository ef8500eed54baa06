//! The surface catalog: entries with equations, parameter samples, base
//! points, expected Levi classes and (where known) realizing frames, plus a
//! JSON document format and the batch verifier.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::expr::{parse_with, EvalPoint, ParseError, Params, RealCoord};
use crate::hypersurface::{DefiningFunction, LeviKind};
use crate::liealg::{is_known_algebra, known_algebras, table_algebra, AlgebraParams, LieError, StructureConstants};
use crate::vfield::{FieldError, VectorFieldFrame};
use crate::Point;

mod builtin;
mod verify;

pub use builtin::{builtin_catalog, companion_surfaces, full_catalog};
pub use verify::{
    verify_all, verify_entry, EntryReport, FlowConfig, SampleReport, SectionCount, Summary, Umbilicity, VerifyConfig,
};

/// Document format version written by [`save`].
pub const FORMAT_VERSION: u32 = 1;

/// Largest `|Φ|` accepted at a stored base point.
pub const BASE_POINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unknown algebra '{label}' at {path}; known labels: {}", known.join(", "))]
    UnknownAlgebra {
        path: String,
        label: String,
        known: Vec<String>,
    },
    #[error("entry {id}: {message}")]
    Invalid { id: String, message: String },
}

/// What the verifier expects from the Levi form at the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpectedLevi {
    Definite,
    Indefinite,
    /// Definite or indefinite; used for families whose signature depends on
    /// the parameters.
    Nondegenerate,
    Degenerate,
}

impl ExpectedLevi {
    pub fn accepts(self, k: LeviKind) -> bool {
        match self {
            ExpectedLevi::Definite => k == LeviKind::Definite,
            ExpectedLevi::Indefinite => k == LeviKind::Indefinite,
            ExpectedLevi::Nondegenerate => k != LeviKind::Degenerate,
            ExpectedLevi::Degenerate => k == LeviKind::Degenerate,
        }
    }
}

/// A named real parameter: range constraints such as `"alpha > 0"` or
/// `"alpha != 1"` (operators `<`, `<=`, `>`, `>=`, `!=`) and the sample
/// values. The
/// samples of all parameters of one entry are aligned: sample `i` uses the
/// `i`-th value of every parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub range: Vec<String>,
    pub samples: Vec<f64>,
}

/// `{z1: [re, im], z2: [re, im], w: [re, im]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasePoint {
    pub z1: [f64; 2],
    pub z2: [f64; 2],
    pub w: [f64; 2],
}

impl BasePoint {
    pub fn to_point(&self) -> Point {
        let c = |a: [f64; 2]| Complex64::new(a[0], a[1]);
        EvalPoint::new(c(self.z1), c(self.z2), c(self.w))
    }

    pub fn from_point(p: &Point) -> Self {
        let [a, b, c] = p.primaries();
        BasePoint {
            z1: [a.re, a.im],
            z2: [b.re, b.im],
            w: [c.re, c.im],
        }
    }
}

/// Extra fields that, together with the frame, realize a larger algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    pub algebra: String,
    pub fields: Vec<[String; 3]>,
}

fn default_solve_var() -> String {
    "v".into()
}

fn is_default_solve_var(s: &String) -> bool {
    s == "v"
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub section: String,
    /// `lhs = rhs` or a bare defining function `Φ` (meaning `Φ = 0`).
    pub equation: String,
    /// Real coordinate used by Newton's method when sampling the surface.
    #[serde(default = "default_solve_var", skip_serializing_if = "is_default_solve_var")]
    pub solve_var: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, ParamSpec>,
    #[serde(default)]
    pub domain: Vec<String>,
    pub base_point: BasePoint,
    /// Base points for samples `1..n`; when empty, each is found by Newton's
    /// method from `base_point`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sample_base_points: Vec<BasePoint>,
    pub expected_levi: ExpectedLevi,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    /// Algebra parameters as expressions in the entry parameters.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebra_params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<[String; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<Extension>,
    /// Known sphericity, checked against the umbilicity test when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spherical: Option<bool>,
    #[serde(default)]
    pub notes: String,
}

impl CatalogEntry {
    /// Number of parameter samples (1 for parameter-free entries).
    pub fn sample_count(&self) -> usize {
        self.parameters.values().map(|p| p.samples.len()).max().unwrap_or(1)
    }

    pub fn sample_params(&self, i: usize) -> Params {
        self.parameters.iter().map(|(k, p)| (k.clone(), p.samples[i])).collect()
    }

    /// Stored base point of sample `i`, if any.
    pub fn stored_base_point(&self, i: usize) -> Option<Point> {
        match i {
            0 => Some(self.base_point.to_point()),
            _ => self.sample_base_points.get(i - 1).map(BasePoint::to_point),
        }
    }

    pub fn solve_coord(&self) -> Result<RealCoord, CatalogError> {
        RealCoord::from_name(&self.solve_var).ok_or_else(|| self.invalid(format!("bad solve_var '{}'", self.solve_var)))
    }

    /// The defining function, `lhs − (rhs)` for an equation.
    pub fn phi_source(&self) -> String {
        match self.equation.split_once('=') {
            Some((l, r)) => format!("({}) - ({})", l.trim(), r.trim()),
            None => self.equation.clone(),
        }
    }

    pub fn defining_function(&self, params: &Params) -> Result<DefiningFunction, ParseError> {
        let dom: Vec<&str> = self.domain.iter().map(String::as_str).collect();
        DefiningFunction::parse(&self.phi_source(), &dom, params)
    }

    pub fn frame(&self, params: &Params) -> Result<Option<VectorFieldFrame>, FieldError> {
        self.frame.as_ref().map(|f| parse_frame(f, params)).transpose()
    }

    /// Frame followed by the extension fields.
    pub fn extended_frame(&self, params: &Params) -> Result<Option<VectorFieldFrame>, FieldError> {
        match (&self.frame, &self.extension) {
            (Some(f), Some(x)) => {
                let all: Vec<[String; 3]> = f.iter().chain(&x.fields).cloned().collect();
                parse_frame(&all, params).map(Some)
            }
            _ => Ok(None),
        }
    }

    pub fn algebra_values(&self, params: &Params) -> Result<AlgebraParams, CatalogError> {
        self.algebra_params
            .iter()
            .map(|(k, src)| {
                let v = parse_with(src, params)
                    .ok()
                    .and_then(|e| e.constant_value())
                    .filter(|c| c.im == 0.0)
                    .ok_or_else(|| self.invalid(format!("algebra parameter {k} = '{src}' is not a real constant")))?;
                Ok((k.clone(), v.re))
            })
            .collect()
    }

    pub fn algebra(&self, params: &Params) -> Result<Option<StructureConstants>, CatalogError> {
        let Some(label) = &self.algebra else { return Ok(None) };
        let ap = self.algebra_values(params)?;
        table_algebra(label, &ap).map(Some).map_err(|e| self.lie(e))
    }

    pub fn extension_algebra(&self, params: &Params) -> Result<Option<StructureConstants>, CatalogError> {
        let Some(x) = &self.extension else { return Ok(None) };
        let ap = self.algebra_values(params)?;
        table_algebra(&x.algebra, &ap).map(Some).map_err(|e| self.lie(e))
    }

    fn invalid(&self, message: String) -> CatalogError {
        CatalogError::Invalid {
            id: self.id.clone(),
            message,
        }
    }

    fn lie(&self, e: LieError) -> CatalogError {
        self.invalid(e.to_string())
    }

    /// Checks the entry invariants: aligned samples inside their ranges,
    /// parseable expressions, known algebras, and a base point on the
    /// surface (for the first sample) inside the domain.
    pub fn validate(&self) -> Result<(), CatalogError> {
        self.solve_coord()?;
        let n = self.sample_count();
        for (name, p) in &self.parameters {
            if p.samples.len() != n {
                return Err(self.invalid(format!("parameter {name} has {} samples, expected {n}", p.samples.len())));
            }
        }
        for i in 0..n {
            let params = self.sample_params(i);
            for (name, p) in &self.parameters {
                for r in &p.range {
                    match range_holds(r, &params) {
                        Some(true) => {}
                        Some(false) => return Err(self.invalid(format!("sample {i} violates range '{r}' of {name}"))),
                        None => return Err(self.invalid(format!("range '{r}' of {name} is not a comparison of constants"))),
                    }
                }
            }
            self.defining_function(&params)
                .map_err(|e| self.invalid(format!("equation: {e}")))?;
            self.frame(&params).map_err(|e| self.invalid(format!("frame: {e}")))?;
            self.extended_frame(&params).map_err(|e| self.invalid(format!("extension: {e}")))?;
            if let (Some(sc), Some(f)) = (self.algebra(&params)?, &self.frame) {
                if sc.dim() != f.len() {
                    return Err(self.invalid(format!("frame has {} fields, algebra has dimension {}", f.len(), sc.dim())));
                }
            }
            self.extension_algebra(&params)?;
        }
        if !self.sample_base_points.is_empty() && self.sample_base_points.len() + 1 != n {
            return Err(self.invalid(format!(
                "{} sample base points for {n} samples",
                self.sample_base_points.len()
            )));
        }
        for i in 0..n {
            let Some(p) = self.stored_base_point(i) else { break };
            let df = self
                .defining_function(&self.sample_params(i))
                .map_err(|e| self.invalid(e.to_string()))?;
            df.domain
                .check(&p, 0.0)
                .map_err(|e| self.invalid(format!("base point of sample {i}: {e}")))?;
            let f = df.value(&p).map_err(|e| self.invalid(format!("base point of sample {i}: {e}")))?;
            if !(f.abs() <= BASE_POINT_TOL) {
                return Err(self.invalid(format!(
                    "base point of sample {i} is off the surface (|Φ| = {:.3e})",
                    f.abs()
                )));
            }
        }
        Ok(())
    }
}

/// Evaluates `lhs op rhs` with both sides constant under `params`; `=` and
/// `==` are exact comparisons.
pub fn range_holds(r: &str, params: &Params) -> Option<bool> {
    let (i, op) = ["<=", ">=", "!=", "==", "<", ">", "="].iter().find_map(|op| r.find(op).map(|i| (i, *op)))?;
    let side = |s: &str| {
        parse_with(s, params)
            .ok()?
            .constant_value()
            .filter(|c| c.im == 0.0)
            .map(|c| c.re)
    };
    let (a, b) = (side(&r[..i])?, side(&r[i + op.len()..])?);
    Some(match op {
        "<=" => a <= b,
        ">=" => a >= b,
        "!=" => a != b,
        "<" => a < b,
        ">" => a > b,
        _ => a == b,
    })
}

fn parse_frame(src: &[[String; 3]], params: &Params) -> Result<VectorFieldFrame, FieldError> {
    let s: Vec<[&str; 3]> = src.iter().map(|c| [c[0].as_str(), c[1].as_str(), c[2].as_str()]).collect();
    VectorFieldFrame::parse(&s, params)
}

#[derive(Serialize, Deserialize)]
struct Document {
    version: u32,
    entries: Vec<CatalogEntry>,
}

const REQUIRED: [&str; 5] = ["id", "section", "equation", "base_point", "expected_levi"];

fn schema(path: String, message: impl Into<String>) -> CatalogError {
    CatalogError::Schema {
        path,
        message: message.into(),
    }
}

/// Parse and validate a catalog document.
pub fn from_json(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CatalogError::Json(e.to_string()))?;
    let obj = doc.as_object().ok_or_else(|| schema("$".into(), "top level must be an object"))?;
    match obj.get("version").and_then(Value::as_u64) {
        Some(v) if v == FORMAT_VERSION as u64 => {}
        Some(v) => return Err(schema("$.version".into(), format!("unsupported version {v}"))),
        None => return Err(schema("$.version".into(), "missing field \"version\"")),
    }
    let raw = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("$.entries".into(), "missing field \"entries\" (an array)"))?;
    let mut out = Vec::with_capacity(raw.len());
    for (i, v) in raw.iter().enumerate() {
        let path = format!("$.entries[{i}]");
        let o = v.as_object().ok_or_else(|| schema(path.clone(), "entry must be an object"))?;
        for f in REQUIRED {
            if !o.contains_key(f) {
                return Err(schema(format!("{path}.{f}"), format!("missing field \"{f}\"")));
            }
        }
        let e: CatalogEntry = serde_json::from_value(v.clone()).map_err(|err| schema(path.clone(), err.to_string()))?;
        let labels = e.algebra.iter().map(|a| (a, "algebra")).chain(e.extension.iter().map(|x| (&x.algebra, "extension.algebra")));
        for (label, field) in labels {
            if !is_known_algebra(label) {
                return Err(CatalogError::UnknownAlgebra {
                    path: format!("{path}.{field}"),
                    label: label.clone(),
                    known: known_algebras(),
                });
            }
        }
        e.validate()?;
        out.push(e);
    }
    Ok(out)
}

/// Pretty-printed catalog document.
pub fn to_json(entries: &[CatalogEntry]) -> String {
    let doc = Document {
        version: FORMAT_VERSION,
        entries: entries.to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("catalog entries serialize")
}

pub fn load(path: impl AsRef<Path>) -> Result<Vec<CatalogEntry>, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    from_json(&text)
}

pub fn save(entries: &[CatalogEntry], path: impl AsRef<Path>) -> Result<(), CatalogError> {
    let path = path.as_ref();
    std::fs::write(path, to_json(entries)).map_err(|e| CatalogError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests;
