//! JSON file formats: Cayley tables (optionally decorated), strong
//! semilattice specs, and corpus export directories.
//!
//! ```json
//! {"n": 2, "table": [[0, 1], [1, 0]], "labels": ["e", "a"],
//!  "decoration": {"class": [0, 0], "e": [0], "class_table": [[0]]}}
//! ```
//!
//! Keys are written in declaration order, so serializing the same value
//! always gives the same bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::clifford::{DecoratedGroupoid, Decoration, StrongSemilatticeSpec};
use crate::enumerate::Corpus;
use crate::error::{Error, Result};
use crate::groupoid::Groupoid;
use crate::report::{Report, Status};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecorationFile {
    pub class: Vec<usize>,
    pub e: Vec<usize>,
    pub class_table: Vec<Vec<usize>>,
}

impl DecorationFile {
    pub fn from_decoration(d: &Decoration) -> Self {
        DecorationFile {
            class: d.class_of().to_vec(),
            e: d.e_of_class().to_vec(),
            class_table: d.class_table().rows(),
        }
    }

    pub fn to_decoration(&self) -> Result<Decoration> {
        let y = Groupoid::new(self.class_table.clone())
            .map_err(|e| Error::InvalidDecoration(format!("class table: {e}")))?;
        Decoration::new(self.class.clone(), self.e.clone(), y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub decoration: Option<DecorationFile>,
}

impl TableFile {
    pub fn from_groupoid(g: &Groupoid) -> Self {
        TableFile {
            n: g.n(),
            table: g.rows(),
            labels: g.labels().map(<[String]>::to_vec),
            decoration: None,
        }
    }

    pub fn from_decorated(dg: &DecoratedGroupoid) -> Self {
        TableFile {
            decoration: Some(DecorationFile::from_decoration(dg.decoration())),
            ..TableFile::from_groupoid(dg.groupoid())
        }
    }

    pub fn groupoid(&self) -> Result<Groupoid> {
        if self.n != self.table.len() {
            return Err(Error::SizeMismatch {
                declared: self.n,
                rows: self.table.len(),
            });
        }
        let g = Groupoid::new(self.table.clone())?;
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }

    /// The table with its decoration, when the file has one.
    pub fn decorated(&self) -> Result<Option<DecoratedGroupoid>> {
        let g = self.groupoid()?;
        self.decoration
            .as_ref()
            .map(|d| DecoratedGroupoid::new(g, d.to_decoration()?))
            .transpose()
    }

    /// Compact JSON of the table and decoration without labels, suitable
    /// for content hashes.
    pub fn normalized(&self) -> String {
        let bare = TableFile {
            labels: None,
            ..self.clone()
        };
        serde_json::to_string(&bare).expect("table files serialize")
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// A table inside a spec file: bare rows or a full table object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableRef {
    Rows(Vec<Vec<usize>>),
    File(TableFile),
}

impl TableRef {
    pub fn groupoid(&self) -> Result<Groupoid> {
        match self {
            TableRef::Rows(r) => Groupoid::new(r.clone()),
            TableRef::File(f) => f.groupoid(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub from: usize,
    pub to: usize,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub semilattice: TableRef,
    pub groups: Vec<TableRef>,
    #[serde(default)]
    pub homs: Vec<HomFile>,
}

impl SpecFile {
    pub fn from_spec(spec: &StrongSemilatticeSpec) -> Self {
        SpecFile {
            semilattice: TableRef::Rows(spec.semilattice.rows()),
            groups: spec.groups.iter().map(|g| TableRef::Rows(g.rows())).collect(),
            homs: spec
                .homs
                .iter()
                .map(|(&(from, to), map)| HomFile {
                    from,
                    to,
                    map: map.clone(),
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<StrongSemilatticeSpec> {
        let mut homs = BTreeMap::new();
        for h in &self.homs {
            if homs.insert((h.from, h.to), h.map.clone()).is_some() {
                return Err(Error::InvalidHom {
                    from: h.from,
                    to: h.to,
                    reason: "listed twice".into(),
                });
            }
        }
        Ok(StrongSemilatticeSpec {
            semilattice: self.semilattice.groupoid()?,
            groups: self.groups.iter().map(TableRef::groupoid).collect::<Result<_>>()?,
            homs,
        })
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Json(e.to_string())
}

pub fn parse_table(text: &str) -> Result<TableFile> {
    serde_json::from_str(text).map_err(json_error)
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    serde_json::from_str(text).map_err(json_error)
}

/// Pretty JSON with a trailing newline. Arrays of numbers and strings stay
/// on one line, so table rows read as rows.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("values serialize");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCounts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestItem {
    pub id: String,
    pub file: String,
    pub n: usize,
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub source: Option<SpecFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub checks: Option<CheckCounts>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub suite: Option<String>,
    pub items: Vec<ManifestItem>,
}

/// Writes one table file per item plus `manifest.json` into `dir`. With a
/// report, each manifest entry counts the checks whose subject is the item.
pub fn export_corpus(corpus: &Corpus, dir: &Path, report: Option<&Report>) -> io::Result<Manifest> {
    fs::create_dir_all(dir)?;
    let mut items = Vec::with_capacity(corpus.len());
    for item in corpus.iter() {
        let file = format!("{}.json", item.id);
        let tf = match item.decorated() {
            Some(dg) => TableFile::from_decorated(&dg),
            None => TableFile::from_groupoid(&item.groupoid),
        };
        fs::write(dir.join(&file), tf.to_json())?;
        let checks = report.map(|r| {
            let mine: Vec<_> = r
                .checks
                .iter()
                .filter(|c| c.subject.as_deref() == Some(&item.id))
                .collect();
            let count = |s: Status| mine.iter().filter(|c| c.status == s).count();
            CheckCounts {
                pass: count(Status::Pass),
                fail: count(Status::Fail),
                skipped: count(Status::Skipped),
            }
        });
        items.push(ManifestItem {
            id: item.id.clone(),
            file,
            n: item.groupoid.n(),
            note: item.note.clone(),
            source: item.source.as_ref().map(SpecFile::from_spec),
            checks,
        });
    }
    let manifest = Manifest {
        count: items.len(),
        suite: report.map(|r| r.title.clone()),
        items,
    };
    fs::write(dir.join("manifest.json"), to_json(&manifest))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_clifford, decompose_slg};
    use crate::enumerate::enumerate_slgs;
    use crate::fixtures::*;

    #[test]
    fn table_round_trip() {
        let dg = decompose_slg(&t_slg4()).unwrap().decorated;
        let tf = TableFile::from_decorated(&dg);
        let text = tf.to_json();
        let back = parse_table(&text).unwrap();
        assert_eq!(back, tf);
        assert_eq!(back.decorated().unwrap().unwrap(), dg);
        assert!(
            text.starts_with("{\n  \"n\": 4,\n  \"table\": [\n    [0, 1, 2, 3],\n"),
            "{text}"
        );
    }

    #[test]
    fn labels_survive() {
        let text = r#"{"n": 2, "table": [[0, 1], [1, 0]], "labels": ["e", "a"]}"#;
        let tf = parse_table(text).unwrap();
        assert_eq!(tf.groupoid().unwrap().labels().unwrap(), ["e", "a"]);
        assert!(!tf.normalized().contains("labels"));
    }

    #[test]
    fn malformed_tables() {
        let bad = |s: &str| parse_table(s).and_then(|t| t.groupoid()).unwrap_err();
        assert!(matches!(
            bad(r#"{"n": 2, "table": [[0, 1], [1]]}"#),
            Error::NonSquareTable { .. }
        ));
        assert!(matches!(
            bad(r#"{"n": 2, "table": [[0, 1], [1, 2]]}"#),
            Error::EntryOutOfRange { .. }
        ));
        assert!(matches!(
            bad(r#"{"n": 3, "table": [[0, 1], [1, 0]]}"#),
            Error::SizeMismatch { .. }
        ));
        assert!(matches!(
            bad(r#"{"n": 2, "table": [[0, 1], [1, 0]], "extra": 1}"#),
            Error::Json(_)
        ));
        assert!(matches!(bad("not json"), Error::Json(_)));
    }

    #[test]
    fn bad_decoration_is_rejected() {
        let text = r#"{"n": 2, "table": [[0, 1], [1, 0]], "decoration": {"class": [0, 1], "e": [0, 1], "class_table": [[0, 1], [1, 1]]}}"#;
        assert!(parse_table(text).unwrap().decorated().is_err());
    }

    #[test]
    fn spec_round_trip() {
        let text = r#"{"semilattice": [[0, 1], [1, 1]], "groups": [[[0, 1], [1, 0]], {"n": 2, "table": [[0, 1], [1, 0]]}],
                       "homs": [{"from": 0, "to": 1, "map": [0, 1]}]}"#;
        let spec = parse_spec(text).unwrap().to_spec().unwrap();
        assert_eq!(build_clifford(&spec).unwrap().groupoid(), &t_slg4iso());
        let again = parse_spec(&to_json(&SpecFile::from_spec(&spec)))
            .unwrap()
            .to_spec()
            .unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn duplicate_hom_is_rejected() {
        let text = r#"{"semilattice": [[0, 1], [1, 1]], "groups": [[[0]], [[0]]],
                       "homs": [{"from": 0, "to": 1, "map": [0]}, {"from": 0, "to": 1, "map": [0]}]}"#;
        assert!(matches!(
            parse_spec(text).unwrap().to_spec(),
            Err(Error::InvalidHom { .. })
        ));
    }

    #[test]
    fn export_writes_manifest() {
        let dir = std::env::temp_dir().join(format!("cliffdiv-export-{}", std::process::id()));
        let c = enumerate_slgs(3, 3, 2).unwrap();
        let rep = crate::verify::verify_corpus(&c, crate::verify::Suite::Roundtrips);
        let m = export_corpus(&c, &dir, Some(&rep)).unwrap();
        assert_eq!(m.count, c.len());
        let text = fs::read_to_string(dir.join("manifest.json")).unwrap();
        let parsed: Manifest = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, m);
        for item in &m.items {
            let tf = parse_table(&fs::read_to_string(dir.join(&item.file)).unwrap()).unwrap();
            assert_eq!(tf.n, item.n);
            assert_eq!(item.checks.as_ref().unwrap().fail, 0);
            assert!(item.source.is_some());
        }
        fs::remove_dir_all(&dir).unwrap();
    }
}
