//! Corpus file schema, ingestion and validation.
//!
//! A corpus is a JSON document with a version tag, a list of raw field
//! records and a list of algebra records referencing fields by label.
//! Ingestion validates every record through the library validators and
//! reports each violated invariant with its location. Unknown keys are
//! rejected under strict mode and warned about otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use covol_core::numfield::{validate_field, FieldSpec, NumberField};
use covol_core::quatalg::{validate_algebra, QuaternionAlgebra};

pub const CORPUS_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub label: String,
    pub field: String,
    #[serde(default)]
    pub ram_inf: Vec<u32>,
    #[serde(default)]
    pub ram_f: Vec<(u64, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusFile {
    pub version: String,
    pub fields: Vec<FieldSpec>,
    #[serde(default)]
    pub algebras: Vec<AlgebraSpec>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("corpus parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported corpus version {found:?}, expected {expected:?}")]
    Version { found: String, expected: String },
}

/// A named validation failure with its location in the corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationFailure {
    pub location: String,
    pub label: String,
    pub messages: Vec<String>,
}

#[derive(Debug)]
pub enum IngestError {
    /// IO, parse or version problems: a hard error.
    Hard(CorpusError),
    /// Structural or invariant violations, each with location.
    Validation(Vec<ValidationFailure>),
}

#[derive(Debug)]
pub struct ValidatedCorpus {
    pub fields: BTreeMap<String, NumberField>,
    pub algebras: BTreeMap<String, QuaternionAlgebra>,
    /// The corpus re-emitted with entries sorted by label.
    pub normalized: CorpusFile,
    /// Unknown-key warnings (lenient mode only).
    pub warnings: Vec<String>,
}

pub fn ingest_corpus(path: &Path, strict: bool) -> Result<ValidatedCorpus, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|source| {
        IngestError::Hard(CorpusError::Io {
            path: path.display().to_string(),
            source,
        })
    })?;
    ingest_corpus_str(&text, strict)
}

pub fn ingest_corpus_str(text: &str, strict: bool) -> Result<ValidatedCorpus, IngestError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| IngestError::Hard(e.into()))?;
    let unknown = unknown_keys(&raw);
    let mut failures: Vec<ValidationFailure> = Vec::new();
    let mut warnings = Vec::new();
    if !unknown.is_empty() {
        if strict {
            failures.push(ValidationFailure {
                location: "corpus".into(),
                label: String::new(),
                messages: unknown
                    .iter()
                    .map(|k| format!("unknown key {k}"))
                    .collect(),
            });
        } else {
            warnings.extend(unknown.iter().map(|k| format!("ignoring unknown key {k}")));
        }
    }

    let corpus: CorpusFile =
        serde_json::from_value(raw).map_err(|e| IngestError::Hard(e.into()))?;
    if corpus.version != CORPUS_VERSION {
        return Err(IngestError::Hard(CorpusError::Version {
            found: corpus.version,
            expected: CORPUS_VERSION.into(),
        }));
    }

    let mut fields = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for (i, spec) in corpus.fields.iter().enumerate() {
        let location = format!("fields[{i}]");
        if !seen.insert(spec.label.clone()) {
            failures.push(ValidationFailure {
                location,
                label: spec.label.clone(),
                messages: vec!["duplicate field label".into()],
            });
            continue;
        }
        match validate_field(spec) {
            Ok(f) => {
                fields.insert(spec.label.clone(), f);
            }
            Err(violations) => failures.push(ValidationFailure {
                location,
                label: spec.label.clone(),
                messages: violations.iter().map(|v| v.to_string()).collect(),
            }),
        }
    }

    let mut algebras = BTreeMap::new();
    let mut seen_alg = BTreeSet::new();
    for (i, spec) in corpus.algebras.iter().enumerate() {
        let location = format!("algebras[{i}]");
        if !seen_alg.insert(spec.label.clone()) {
            failures.push(ValidationFailure {
                location,
                label: spec.label.clone(),
                messages: vec!["duplicate algebra label".into()],
            });
            continue;
        }
        let Some(base) = fields.get(&spec.field) else {
            failures.push(ValidationFailure {
                location,
                label: spec.label.clone(),
                messages: vec![format!("references unknown field {:?}", spec.field)],
            });
            continue;
        };
        match validate_algebra(base, &spec.label, &spec.ram_inf, &spec.ram_f) {
            Ok(alg) => {
                algebras.insert(spec.label.clone(), alg);
            }
            Err(e) => failures.push(ValidationFailure {
                location,
                label: spec.label.clone(),
                messages: vec![e.to_string()],
            }),
        }
    }

    if !failures.is_empty() {
        return Err(IngestError::Validation(failures));
    }

    let mut normalized = corpus;
    normalized.fields.sort_by(|a, b| a.label.cmp(&b.label));
    normalized.algebras.sort_by(|a, b| a.label.cmp(&b.label));

    Ok(ValidatedCorpus {
        fields,
        algebras,
        normalized,
        warnings,
    })
}

const ROOT_KEYS: &[&str] = &["version", "fields", "algebras"];
const FIELD_KEYS: &[&str] = &[
    "label",
    "poly",
    "r1",
    "r2",
    "d_k",
    "h_k",
    "reg_k",
    "omega_k",
    "bad_prime_splittings",
];
const ALGEBRA_KEYS: &[&str] = &["label", "field", "ram_inf", "ram_f"];

/// Paths of keys outside the schema, e.g. `fields[2].typo`.
fn unknown_keys(root: &Value) -> Vec<String> {
    let mut out = Vec::new();
    let Some(obj) = root.as_object() else {
        return out;
    };
    for key in obj.keys() {
        if !ROOT_KEYS.contains(&key.as_str()) {
            out.push(key.clone());
        }
    }
    for (section, expected) in [("fields", FIELD_KEYS), ("algebras", ALGEBRA_KEYS)] {
        if let Some(entries) = obj.get(section).and_then(Value::as_array) {
            for (i, entry) in entries.iter().enumerate() {
                if let Some(entry) = entry.as_object() {
                    for key in entry.keys() {
                        if !expected.contains(&key.as_str()) {
                            out.push(format!("{section}[{i}].{key}"));
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_corpus() -> String {
        r#"{
            "version": "1",
            "fields": [
                {"label": "Qi", "poly": [1, 0, 1], "r1": 0, "r2": 1,
                 "d_k": 4, "h_k": 1, "reg_k": 1.0, "omega_k": 4},
                {"label": "Q", "poly": [0, 1], "r1": 1, "r2": 0,
                 "d_k": 1, "h_k": 1, "reg_k": 1.0, "omega_k": 2},
                {"label": "Qr5", "poly": [-1, -1, 1], "r1": 2, "r2": 0,
                 "d_k": 5, "h_k": 1, "reg_k": 0.4812118250596035, "omega_k": 2}
            ],
            "algebras": [
                {"label": "Qi-B23", "field": "Qi", "ram_inf": [], "ram_f": [[2, 0], [3, 0]]}
            ]
        }"#
        .to_string()
    }

    #[test]
    fn well_formed_corpus_validates() {
        let corpus = ingest_corpus_str(&minimal_corpus(), true).unwrap();
        assert_eq!(corpus.fields.len(), 3);
        assert_eq!(corpus.algebras.len(), 1);
        assert!(corpus.warnings.is_empty());
        // Normalization sorts by label.
        let labels: Vec<&str> = corpus
            .normalized
            .fields
            .iter()
            .map(|f| f.label.as_str())
            .collect();
        assert_eq!(labels, vec!["Q", "Qi", "Qr5"]);
    }

    #[test]
    fn signature_typo_is_named() {
        let text = minimal_corpus().replace(r#""r1": 0, "r2": 1"#, r#""r1": 1, "r2": 1"#);
        let err = ingest_corpus_str(&text, false).unwrap_err();
        let IngestError::Validation(failures) = err else {
            panic!("expected validation failure");
        };
        assert_eq!(failures[0].label, "Qi");
        assert!(failures[0]
            .messages
            .iter()
            .any(|m| m.contains("signature mismatch") || m.contains("degree mismatch")));
    }

    #[test]
    fn odd_ramification_is_named() {
        let text = minimal_corpus().replace("[[2, 0], [3, 0]]", "[[2, 0]]");
        let err = ingest_corpus_str(&text, false).unwrap_err();
        let IngestError::Validation(failures) = err else {
            panic!("expected validation failure");
        };
        assert_eq!(failures[0].label, "Qi-B23");
        assert!(failures[0].messages[0].contains("parity violation"));
    }

    #[test]
    fn unknown_keys_warn_or_reject() {
        let text = minimal_corpus().replace(r#""omega_k": 4"#, r#""omega_k": 4, "extra": 1"#);
        let lenient = ingest_corpus_str(&text, false).unwrap();
        assert_eq!(lenient.warnings.len(), 1);
        assert!(lenient.warnings[0].contains("fields[0].extra"));
        let err = ingest_corpus_str(&text, true).unwrap_err();
        assert!(matches!(err, IngestError::Validation(_)));
    }

    #[test]
    fn version_mismatch_is_hard() {
        let text = minimal_corpus().replace(r#""version": "1""#, r#""version": "2""#);
        let err = ingest_corpus_str(&text, false).unwrap_err();
        assert!(matches!(
            err,
            IngestError::Hard(CorpusError::Version { .. })
        ));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let text = minimal_corpus().replace(r#""label": "Q","#, r#""label": "Qi","#);
        let err = ingest_corpus_str(&text, false).unwrap_err();
        let IngestError::Validation(failures) = err else {
            panic!("expected validation failure");
        };
        assert!(failures[0].messages[0].contains("duplicate"));
    }

    #[test]
    fn unknown_field_reference_rejected() {
        let text = minimal_corpus().replace(r#""field": "Qi""#, r#""field": "Nope""#);
        let err = ingest_corpus_str(&text, false).unwrap_err();
        let IngestError::Validation(failures) = err else {
            panic!("expected validation failure");
        };
        assert!(failures[0].messages[0].contains("unknown field"));
    }
}
