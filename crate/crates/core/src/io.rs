//! JSON interchange format.
//!
//! ```text
//! system:    { "schema_version": 1, "labels": [..], "dims": [..], "vacuum": "1",
//!              "dual": { "a": "b", .. }?, "twist": { "a": "1/2", .. }? }
//! branching: { "schema_version": 1, "source": system, "condensed": system,
//!              "n": [[..], ..] }
//! state:     { "probs": [0.5, "1/3", ..] }
//! ```
//!
//! Systems nested inside a branching may omit `schema_version`. Unknown fields
//! are rejected. Errors name the JSON path of the first offending value.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_rational::Rational64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::branching::BranchingData;
use crate::catalog::ratio_to_f64;
use crate::channels::SectorState;
use crate::error::{Error, Result};
use crate::system::{AnyonSystem, Tolerance};

pub const SCHEMA_VERSION: u32 = 1;

/// Serde adapter writing rationals as `"p/q"` strings; integers are also
/// accepted on input.
pub mod rational_text {
    use num_rational::Rational64;
    use serde::{de, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub(crate) fn from_repr<E: de::Error>(r: RationalRepr) -> Result<Rational64, E> {
        match r.0 {
            Repr::Int(i) => Ok(Rational64::from_integer(i)),
            Repr::Text(s) => super::parse_rational(&s).map_err(E::custom),
        }
    }

    #[derive(Deserialize)]
    #[serde(transparent)]
    pub(crate) struct RationalRepr(Repr);

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        from_repr(RationalRepr::deserialize(d)?)
    }

    pub mod vec {
        use num_rational::Rational64;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational64], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|r| r.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational64>, D::Error> {
            Vec::<super::RationalRepr>::deserialize(d)?
                .into_iter()
                .map(super::from_repr)
                .collect()
        }
    }
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(text: &str) -> Result<Rational64> {
    let t = text.trim();
    let bad = || Error::ParseNumber(text.to_owned());
    match t.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => t
            .parse::<i64>()
            .map(Rational64::from_integer)
            .map_err(|_| bad()),
    }
}

/// Parses a probability given as `"p/q"` (converted exactly before rounding)
/// or as a decimal.
pub fn parse_probability(text: &str) -> Result<f64> {
    if text.contains('/') {
        return parse_rational(text).map(ratio_to_f64);
    }
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::ParseNumber(text.to_owned()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::ParseNumber(text.to_owned()))
    }
}

/// Comma-separated probabilities, e.g. `1/2,0,1/2`.
pub fn parse_probability_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_probability).collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema_version: Option<u32>,
    labels: Vec<String>,
    dims: Vec<f64>,
    vacuum: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dual: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    twist: Option<BTreeMap<String, TwistText>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(transparent)]
struct TwistText(#[serde(with = "rational_text")] Rational64);

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchingDoc {
    schema_version: Option<u32>,
    source: SystemDoc,
    condensed: SystemDoc,
    n: Vec<Vec<u32>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    #[serde(default)]
    schema_version: Option<u32>,
    probs: Vec<ProbText>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ProbText {
    Number(f64),
    Text(String),
}

/// Anything the loader can return.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    System(AnyonSystem),
    Branching(BranchingData),
}

fn at(prefix: &str, field: &str) -> String {
    if prefix.is_empty() {
        field.to_owned()
    } else {
        format!("{prefix}.{field}")
    }
}

fn check_version(found: Option<u32>, required: bool, path: &str) -> Result<()> {
    match found {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(v) => Err(Error::SchemaVersion {
            found: v,
            expected: SCHEMA_VERSION,
        }),
        None if required => Err(Error::Schema {
            path: at(path, "schema_version"),
            message: "missing field".into(),
        }),
        None => Ok(()),
    }
}

impl SystemDoc {
    fn from_system(s: &AnyonSystem, top_level: bool) -> Self {
        SystemDoc {
            schema_version: top_level.then_some(SCHEMA_VERSION),
            labels: s.label_names(),
            dims: s.dims().to_vec(),
            vacuum: s.vacuum_label().to_string(),
            dual: s.dual_pairs().map(|p| p.into_iter().collect()),
            twist: s
                .twist_pairs()
                .map(|p| p.into_iter().map(|(l, v)| (l, TwistText(v))).collect()),
        }
    }

    fn into_system(self, path: &str, top_level: bool) -> Result<AnyonSystem> {
        check_version(self.schema_version, top_level, path)?;
        let relabel = |e: Error| match e {
            Error::Malformed { field, reason } => Error::Schema {
                path: at(path, &field),
                message: reason,
            },
            other => other,
        };
        let mut sys = AnyonSystem::new(self.labels, self.dims, &self.vacuum).map_err(relabel)?;
        if let Some(dual) = &self.dual {
            sys = sys
                .with_dual(dual.iter().map(|(a, b)| (a.as_str(), b.as_str())))
                .map_err(relabel)?;
        }
        if let Some(twist) = &self.twist {
            sys = sys
                .with_twist(twist.iter().map(|(a, t)| (a.as_str(), t.0)))
                .map_err(relabel)?;
        }
        Ok(sys)
    }
}

fn from_value<T: DeserializeOwned>(value: Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema {
            path: if path == "." { String::new() } else { path },
            message: e.into_inner().to_string(),
        }
    })
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Schema {
        path: String::new(),
        message: e.to_string(),
    })
}

/// Parses a system or a branching; a top-level `"source"` key selects the latter.
pub fn parse(text: &str) -> Result<Document> {
    let value = parse_value(text)?;
    let is_branching = value.as_object().is_some_and(|o| o.contains_key("source"));
    if is_branching {
        let doc: BranchingDoc = from_value(value)?;
        check_version(doc.schema_version, true, "")?;
        let source = doc.source.into_system("source", false)?;
        let condensed = doc.condensed.into_system("condensed", false)?;
        let b = BranchingData::new(source, condensed, doc.n).map_err(|e| match e {
            Error::Malformed { field, reason } => Error::Schema {
                path: field,
                message: reason,
            },
            other => other,
        })?;
        Ok(Document::Branching(b))
    } else {
        let doc: SystemDoc = from_value(value)?;
        Ok(Document::System(doc.into_system("", true)?))
    }
}

pub fn to_value(doc: &Document) -> Value {
    match doc {
        Document::System(s) => serde_json::to_value(SystemDoc::from_system(s, true)),
        Document::Branching(b) => serde_json::to_value(BranchingDoc {
            schema_version: Some(SCHEMA_VERSION),
            source: SystemDoc::from_system(b.source(), false),
            condensed: SystemDoc::from_system(b.condensed(), false),
            n: b.n().to_vec(),
        }),
    }
    .expect("documents serialize")
}

pub fn to_json(doc: &Document) -> String {
    let mut text = serde_json::to_string_pretty(&to_value(doc)).expect("values serialize");
    text.push('\n');
    text
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load(path: impl AsRef<Path>) -> Result<Document> {
    parse(&read(path.as_ref())?)
}

pub fn save(doc: &Document, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(doc)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_branching(path: impl AsRef<Path>) -> Result<BranchingData> {
    match load(path.as_ref())? {
        Document::Branching(b) => Ok(b),
        Document::System(_) => Err(Error::Schema {
            path: "source".into(),
            message: "expected a branching document".into(),
        }),
    }
}

/// Parses a state document over `system`.
pub fn parse_state(text: &str, system: &Arc<AnyonSystem>, tol: Tolerance) -> Result<SectorState> {
    let doc: StateDoc = from_value(parse_value(text)?)?;
    check_version(doc.schema_version, false, "")?;
    let probs = doc
        .probs
        .into_iter()
        .enumerate()
        .map(|(i, p)| match p {
            ProbText::Number(x) => Ok(x),
            ProbText::Text(s) => parse_probability(&s).map_err(|e| Error::Schema {
                path: format!("probs[{i}]"),
                message: e.to_string(),
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    SectorState::with_tolerance(system.clone(), probs, tol)
}

pub fn load_state(
    path: impl AsRef<Path>,
    system: &Arc<AnyonSystem>,
    tol: Tolerance,
) -> Result<SectorState> {
    parse_state(&read(path.as_ref())?, system, tol)
}
