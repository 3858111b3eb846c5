//! Instance files: the JSON input schema and its validation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Decompose,
    ClassifyGln,
    VerifyGset,
    VerifySlice,
    LambdaUnit,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Decompose => "decompose",
            Kind::ClassifyGln => "classify-gln",
            Kind::VerifyGset => "verify-gset",
            Kind::VerifySlice => "verify-slice",
            Kind::LambdaUnit => "lambda-unit",
        };
        f.write_str(s)
    }
}

/// A subgroup generator: a tuple of residues, or a bare integer for a
/// one-factor group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Generator {
    Scalar(u64),
    Tuple(Vec<u64>),
}

impl Generator {
    pub fn to_tuple(&self) -> Vec<u64> {
        match self {
            Generator::Scalar(a) => vec![*a],
            Generator::Tuple(t) => t.clone(),
        }
    }
}

/// Either a dense vector indexed by residue, or a map from residue to
/// multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weights {
    Dense(Vec<u64>),
    Sparse(BTreeMap<String, u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<Vec<Generator>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_kernel: Option<Vec<Generator>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Weights>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_override: Option<u64>,
}

impl Instance {
    pub fn new(kind: Kind) -> Self {
        Instance {
            kind,
            group: None,
            orbits: None,
            n: None,
            s: None,
            rank: None,
            sigma_kernel: None,
            weights: None,
            lambda_override: None,
        }
    }
}

/// A schema violation, located by a JSON pointer.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pointer}: {message}")]
pub struct InputError {
    pub pointer: String,
    pub message: String,
}

impl InputError {
    pub fn at(pointer: impl Into<String>, message: impl fmt::Display) -> Self {
        let pointer = pointer.into();
        let pointer = if pointer.is_empty() { "/".to_string() } else { pointer };
        InputError { pointer, message: message.to_string() }
    }
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

pub fn parse_instance(text: &str) -> Result<Instance, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_of(e.path());
        let inner = e.into_inner();
        // serde reports unknown keys at the parent; point at the key itself
        let msg = inner.to_string();
        let pointer = match msg.strip_prefix("unknown field `").and_then(|r| r.split('`').next()) {
            Some(key) if !pointer.ends_with(&format!("/{key}")) => format!("{pointer}/{key}"),
            _ => pointer,
        };
        InputError::at(pointer, msg)
    })
}
