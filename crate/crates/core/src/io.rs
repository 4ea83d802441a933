//! The `kakimizu-complex/1` JSON document.
//!
//! ```json
//! {"format": "kakimizu-complex/1", "n": 3, "twist_sequence": [2, 2, 2],
//!  "vertices": ["++", "+-", "-+", "--"], "facets": [[0, 1, 2], [1, 2, 3]],
//!  "cycles": [{"orientations": [...], "vertex_order": [...]}]}
//! ```
//!
//! `twist_sequence` and `cycles` are optional; `n` is present whenever the
//! vertices are orientations. Import accepts exactly the canonical documents
//! export writes.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::complex::{Face, SimplicialComplex};
use crate::cycle::{enumerate_cycles_capped, simplices_of, validate_cycle, Cycle};
use crate::knot::validate_twist_sequence;
use crate::orientation::{Orientation, MAX_TREE_SIZE};

pub const FORMAT: &str = "kakimizu-complex/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("unsupported format {0:?}")]
    BadFormatVersion(String),
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist_sequence: Option<Vec<i64>>,
    pub vertices: Vec<String>,
    pub facets: Vec<Face>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<Vec<Cycle>>,
}

/// Cycles whose vertex sets are exactly the facets of `k`, if `k` is a full
/// orientation complex.
fn cycles_spanning(k: &SimplicialComplex) -> Option<Vec<Cycle>> {
    let n = k.tree_size()?;
    let cycles = enumerate_cycles_capped(n, MAX_TREE_SIZE).ok()?;
    let facets: Vec<Vec<String>> = simplices_of(&cycles)
        .iter()
        .map(|s| s.vertices().iter().map(Orientation::to_sign_string).collect())
        .collect();
    let ours: Vec<Vec<String>> = k
        .facets()
        .iter()
        .map(|f| f.iter().map(|&v| k.labels()[v as usize].clone()).collect())
        .collect();
    (facets == ours).then_some(cycles)
}

pub fn complex_document(k: &SimplicialComplex, include_cycles: bool) -> ComplexDocument {
    ComplexDocument {
        format: FORMAT.to_owned(),
        n: k.tree_size(),
        twist_sequence: k.twist_sequence().map(|t| t.coefficients().to_vec()),
        vertices: k.labels().to_vec(),
        facets: k.facets().to_vec(),
        cycles: if include_cycles {
            cycles_spanning(k)
        } else {
            None
        },
    }
}

/// Canonical pretty-printed document with a trailing newline.
pub fn export_complex(k: &SimplicialComplex, include_cycles: bool) -> String {
    let mut s = serde_json::to_string_pretty(&complex_document(k, include_cycles))
        .expect("document serialises");
    s.push('\n');
    s
}

pub fn import_complex(text: &str) -> Result<SimplicialComplex, IoError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| IoError::MalformedDocument(e.to_string()))?;
    import_value(value)
}

pub fn import_value(value: Value) -> Result<SimplicialComplex, IoError> {
    match value.get("format") {
        Some(Value::String(f)) if f == FORMAT => {}
        Some(Value::String(f)) => return Err(IoError::BadFormatVersion(f.clone())),
        Some(_) => return Err(IoError::MalformedDocument("format is not a string".into())),
        None => return Err(IoError::MalformedDocument("missing format".into())),
    }
    let doc: ComplexDocument =
        serde_json::from_value(value).map_err(|e| IoError::MalformedDocument(e.to_string()))?;
    from_document(doc)
}

fn violation(msg: impl Into<String>) -> IoError {
    IoError::InvariantViolation(msg.into())
}

pub fn from_document(doc: ComplexDocument) -> Result<SimplicialComplex, IoError> {
    let mut k = SimplicialComplex::from_parts(doc.vertices, doc.facets)
        .map_err(|e| violation(e.to_string()))?;

    if let Some(n) = doc.n {
        if n == 0 || n > MAX_TREE_SIZE {
            return Err(violation(format!("tree size {n} out of range")));
        }
        for label in k.labels() {
            let ok = label
                .parse::<Orientation>()
                .is_ok_and(|o| o.tree_size() == n && o.to_sign_string() == *label);
            if !ok {
                return Err(violation(format!("vertex {label:?} is not an orientation for n={n}")));
            }
        }
        k = k.with_tree_size(n);
    }

    if let Some(raw) = doc.twist_sequence {
        let seq = validate_twist_sequence(&raw).map_err(|e| violation(e.to_string()))?;
        if Some(seq.len()) != doc.n {
            return Err(violation("twist sequence length differs from n"));
        }
        k = k.with_twist_sequence(seq);
    }

    if let Some(cycles) = doc.cycles {
        let expected = cycles_spanning(&k)
            .ok_or_else(|| violation("cycles given for a complex that is not spanned by cycles"))?;
        for (i, c) in cycles.iter().enumerate() {
            validate_cycle(c).map_err(|v| violation(format!("cycle {i}: {v}")))?;
        }
        if cycles != expected {
            return Err(violation("cycle list is not the canonical enumeration"));
        }
    }
    Ok(k)
}
