//! JSON documents for posets and complexes.
//!
//! Poset: `{"elements": ["a", ...], "covers": [["a", "b"], ...]}`.
//! Complex: `{"facets": [["v1", "v2"], ...]}`, with `{"facets": [[]]}` for `[∅]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, SimplicialComplex};
use crate::poset::{Poset, PosetError};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("document has neither `elements`/`covers` nor `facets`")]
    UnknownShape,
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: {
                let full = e.to_string();
                let suffix = format!(" at line {} column {}", e.line(), e.column());
                full.strip_suffix(&suffix).unwrap_or(&full).to_string()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl PosetDoc {
    pub fn from_poset(p: &Poset) -> Self {
        PosetDoc {
            elements: p.labels().to_vec(),
            covers: p
                .covers()
                .map(|(a, b)| (p.label(a).to_string(), p.label(b).to_string()))
                .collect(),
        }
    }

    pub fn to_poset(&self) -> Result<Poset, PosetError> {
        Poset::build(&self.elements, &self.covers)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub facets: Vec<Vec<String>>,
}

impl ComplexDoc {
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        ComplexDoc {
            facets: k.facet_labels(),
        }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex, ComplexError> {
        SimplicialComplex::from_faces(&self.facets)
    }
}

/// Either document kind, distinguished by its keys.
#[derive(Debug, Clone)]
pub enum Document {
    Poset(Poset),
    Complex(SimplicialComplex),
}

pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value.as_object().ok_or(DocumentError::UnknownShape)?;
    if obj.contains_key("facets") {
        let doc: ComplexDoc = serde_json::from_str(text)?;
        Ok(Document::Complex(doc.to_complex()?))
    } else if obj.contains_key("elements") {
        let doc: PosetDoc = serde_json::from_str(text)?;
        Ok(Document::Poset(doc.to_poset()?))
    } else {
        Err(DocumentError::UnknownShape)
    }
}

pub fn poset_to_json(p: &Poset) -> String {
    serde_json::to_string(&PosetDoc::from_poset(p)).expect("serializable")
}

pub fn complex_to_json(k: &SimplicialComplex) -> String {
    serde_json::to_string(&ComplexDoc::from_complex(k)).expect("serializable")
}
