//! Document formats: `family/1`, `cert/1`, `report/1`, `trace/1`.
//!
//! Big integers are written as JSON strings of decimal digits so that no
//! consumer silently rounds them through a double.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactmath::ExactInt;
use crate::family::Family;
use crate::kset::{GroundSpec, KSet};
use crate::shifting::ShiftTrace;

pub const FAMILY_SCHEMA: &str = "family/1";
pub const REPORT_SCHEMA: &str = "report/1";
pub const TRACE_SCHEMA: &str = "trace/1";

pub(crate) fn ser_int<S: Serializer>(v: &ExactInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

/// `#[serde(with = ...)]` adapter writing an [`ExactInt`] as a decimal string.
pub mod int_string {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::exactmath::ExactInt;

    pub fn serialize<S: Serializer>(v: &ExactInt, s: S) -> Result<S::Ok, S::Error> {
        super::ser_int(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactInt, D::Error> {
        let s = String::deserialize(d)?;
        let digits = s.strip_prefix('-').unwrap_or(&s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(de::Error::custom(format!("not a decimal integer: {s:?}")));
        }
        s.parse().map_err(de::Error::custom)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    schema: String,
    lo: u32,
    n: u32,
    k: u32,
    sets: Vec<Vec<u32>>,
}

/// Serializable view of a family: ground plus ascending element lists.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyView {
    pub lo: u32,
    pub n: u32,
    pub k: u32,
    pub size: usize,
    pub sets: Vec<Vec<u32>>,
}

impl From<&Family> for FamilyView {
    fn from(f: &Family) -> Self {
        let g = f.ground();
        FamilyView {
            lo: g.lo(),
            n: g.n(),
            k: g.k(),
            size: f.len(),
            sets: f.iter().map(KSet::elems).collect(),
        }
    }
}

fn write_list(out: &mut String, xs: &[u32]) {
    out.push('[');
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&x.to_string());
    }
    out.push(']');
}

/// Canonical `family/1` text. One set per line, lex-sorted, trailing newline.
pub fn write_family(f: &Family) -> String {
    let g = f.ground();
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"schema\": \"{FAMILY_SCHEMA}\",\n"));
    out.push_str(&format!(
        "  \"lo\": {},\n  \"n\": {},\n  \"k\": {},\n",
        g.lo(),
        g.n(),
        g.k()
    ));
    if f.is_empty() {
        out.push_str("  \"sets\": []\n}\n");
        return out;
    }
    out.push_str("  \"sets\": [\n");
    for (i, s) in f.iter().enumerate() {
        out.push_str("    ");
        write_list(&mut out, &s.elems());
        out.push_str(if i + 1 < f.len() { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

/// Parses a `family/1` document. Sets must be ascending lists in strictly
/// ascending lexicographic order, so that reading and rewriting is bit-exact.
pub fn read_family(text: &str) -> Result<Family> {
    let doc: FamilyDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if doc.schema != FAMILY_SCHEMA {
        return Err(Error::Format(format!(
            "expected schema {FAMILY_SCHEMA}, got {}",
            doc.schema
        )));
    }
    let ground = GroundSpec::new(doc.lo, doc.n, doc.k)?;
    let mut members = Vec::with_capacity(doc.sets.len());
    for set in &doc.sets {
        if set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format(format!(
                "set {set:?} is not strictly ascending"
            )));
        }
        let s = KSet::from_elems(set)?;
        ground.check(s)?;
        members.push(s);
    }
    if members.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Format(
            "sets are not in strictly ascending lex order".into(),
        ));
    }
    Family::new(ground, members)
}

/// Envelope of every `report/1` document; `body` is flattened in.
#[derive(Debug, Serialize)]
pub struct ReportDoc<'a, T: Serialize> {
    pub schema: &'static str,
    pub kind: &'a str,
    pub tool_version: &'static str,
    pub produced_at: Option<String>,
    #[serde(flatten)]
    pub body: &'a T,
}

impl<'a, T: Serialize> ReportDoc<'a, T> {
    pub fn new(kind: &'a str, body: &'a T) -> Self {
        ReportDoc {
            schema: REPORT_SCHEMA,
            kind,
            tool_version: crate::TOOL_VERSION,
            produced_at: None,
            body,
        }
    }
}

/// `trace/1` document wrapping a [`ShiftTrace`].
#[derive(Debug, Serialize)]
pub struct TraceDoc<'a> {
    pub schema: &'static str,
    #[serde(flatten)]
    pub trace: &'a ShiftTrace,
}

impl<'a> TraceDoc<'a> {
    pub fn new(trace: &'a ShiftTrace) -> Self {
        TraceDoc {
            schema: TRACE_SCHEMA,
            trace,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents are always serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::hm_family;

    #[test]
    fn family_text_roundtrip() {
        let f = hm_family(5, 2).unwrap();
        let text = write_family(&f);
        assert_eq!(
            text,
            "{\n  \"schema\": \"family/1\",\n  \"lo\": 1,\n  \"n\": 5,\n  \"k\": 2,\n  \"sets\": [\n    [1,2],\n    [1,3],\n    [2,3]\n  ]\n}\n"
        );
        let back = read_family(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(write_family(&back), text);
    }

    #[test]
    fn empty_family_roundtrip() {
        let f = Family::empty(GroundSpec::new(2, 6, 3).unwrap());
        let text = write_family(&f);
        assert_eq!(write_family(&read_family(&text).unwrap()), text);
    }

    #[test]
    fn rejects_non_canonical() {
        let unsorted = r#"{"schema":"family/1","lo":1,"n":5,"k":2,"sets":[[1,3],[1,2]]}"#;
        assert!(read_family(unsorted).is_err());
        let bad_set = r#"{"schema":"family/1","lo":1,"n":5,"k":2,"sets":[[2,1]]}"#;
        assert!(read_family(bad_set).is_err());
        let wrong_k = r#"{"schema":"family/1","lo":1,"n":5,"k":2,"sets":[[1,2,3]]}"#;
        assert!(read_family(wrong_k).is_err());
        let schema = r#"{"schema":"family/2","lo":1,"n":5,"k":2,"sets":[]}"#;
        assert!(read_family(schema).is_err());
        let extra = r#"{"schema":"family/1","lo":1,"n":5,"k":2,"sets":[],"x":1}"#;
        assert!(read_family(extra).is_err());
    }
}
