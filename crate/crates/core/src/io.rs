//! JSON documents for PMQs, pairs and groups.
//!
//! ```json
//! {"size": 2, "unit": 0, "conj": [[0,0],[1,1]], "prod": [[0,1],[1,null]],
//!  "norm": [0,1], "pair": {"group_mult": [[0,1],[1,0]], "e": [0,1], "r": [[0,1],[0,1]]}}
//! ```
//!
//! `null` marks an undefined product and `r[g][a]` is `a^g`. Unknown fields
//! are rejected. Output goes through [`canonical_json`], which sorts keys.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::pair::PMQGroupPair;
use crate::pmq::{FinitePMQ, PmqTables};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("JSON syntax error at byte {offset} (line {line}, column {column}): {message}")]
    Syntax {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDocument {
    pub group_mult: Vec<Vec<usize>>,
    pub e: Vec<usize>,
    pub r: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmqDocument {
    pub size: usize,
    pub unit: usize,
    pub conj: Vec<Vec<usize>>,
    pub prod: Vec<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDocument {
    pub mult: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A parsed and validated PMQ document.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub pmq: FinitePMQ,
    pub pair: Option<PMQGroupPair>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document(DocumentError::Schema {
        path: path.into(),
        message: message.into(),
    })
}

fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    let start: usize = bytes
        .split_inclusive(|&b| b == b'\n')
        .take(line.saturating_sub(1))
        .map(<[u8]>::len)
        .sum();
    (start + column.saturating_sub(1)).min(bytes.len())
}

fn deserialize<T: DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        if inner.is_data() {
            schema(path, inner.to_string())
        } else {
            syntax(bytes, &inner)
        }
    })?;
    de.end().map_err(|e| syntax(bytes, &e))?;
    Ok(value)
}

fn syntax(bytes: &[u8], e: &serde_json::Error) -> Error {
    let message = e.to_string();
    let message = match message.rfind(" at line ") {
        Some(k) => message[..k].to_string(),
        None => message,
    };
    let offset = if e.is_eof() {
        bytes.len()
    } else {
        byte_offset(bytes, e.line(), e.column())
    };
    Error::Document(DocumentError::Syntax {
        offset,
        line: e.line(),
        column: e.column(),
        message,
    })
}

fn check_square<T>(path: &str, table: &[Vec<T>], n: usize) -> Result<()> {
    if table.len() != n {
        return Err(schema(path, format!("expected {n} rows, found {}", table.len())));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(schema(format!("{path}[{i}]"), format!("expected {n} entries, found {}", row.len())));
        }
    }
    Ok(())
}

fn check_entries<I>(path: &str, rows: I, n: usize) -> Result<()>
where
    I: IntoIterator<Item = (usize, Vec<Option<usize>>)>,
{
    for (i, row) in rows {
        for (j, x) in row.into_iter().enumerate() {
            if let Some(x) = x.filter(|&x| x >= n) {
                return Err(schema(format!("{path}[{i}][{j}]"), format!("{x} is out of range 0..{n}")));
            }
        }
    }
    Ok(())
}

fn check_document(doc: &PmqDocument) -> Result<()> {
    let n = doc.size;
    if n == 0 {
        return Err(schema("size", "a PMQ has at least the unit"));
    }
    if doc.unit >= n {
        return Err(schema("unit", format!("{} is out of range 0..{n}", doc.unit)));
    }
    check_square("conj", &doc.conj, n)?;
    check_square("prod", &doc.prod, n)?;
    check_entries("conj", doc.conj.iter().map(|r| r.iter().copied().map(Some).collect()).enumerate(), n)?;
    check_entries("prod", doc.prod.iter().cloned().enumerate(), n)?;
    if let Some(norm) = &doc.norm {
        if norm.len() != n {
            return Err(schema("norm", format!("expected {n} entries, found {}", norm.len())));
        }
    }
    if let Some(pair) = &doc.pair {
        let order = pair.group_mult.len();
        if order == 0 {
            return Err(schema("pair.group_mult", "a group has at least one element"));
        }
        check_square("pair.group_mult", &pair.group_mult, order)?;
        check_entries(
            "pair.group_mult",
            pair.group_mult.iter().map(|r| r.iter().copied().map(Some).collect()).enumerate(),
            order,
        )?;
        if pair.e.len() != n {
            return Err(schema("pair.e", format!("expected {n} entries, found {}", pair.e.len())));
        }
        if let Some((i, &x)) = pair.e.iter().enumerate().find(|(_, &x)| x >= order) {
            return Err(schema(format!("pair.e[{i}]"), format!("{x} is out of range 0..{order}")));
        }
        if pair.r.len() != order {
            return Err(schema("pair.r", format!("expected {order} rows, found {}", pair.r.len())));
        }
        for (g, row) in pair.r.iter().enumerate() {
            if row.len() != n {
                return Err(schema(format!("pair.r[{g}]"), format!("expected {n} entries, found {}", row.len())));
            }
        }
        check_entries("pair.r", pair.r.iter().map(|r| r.iter().copied().map(Some).collect()).enumerate(), n)?;
    }
    Ok(())
}

/// Parses and validates a PMQ document, with its pair if present.
pub fn parse_pmq_document(bytes: &[u8]) -> Result<Parsed> {
    let doc: PmqDocument = deserialize(bytes)?;
    check_document(&doc)?;
    let pmq = FinitePMQ::validate(PmqTables {
        unit: doc.unit,
        conj: doc.conj,
        prod: doc.prod,
        norm: doc.norm,
    })?;
    let pair = match doc.pair {
        None => None,
        Some(p) => {
            let group = FiniteGroup::from_table(&p.group_mult).map_err(|e| match e {
                Error::Malformed(m) => schema("pair.group_mult", m),
                other => other,
            })?;
            Some(PMQGroupPair::validate(pmq.clone(), group, p.e, p.r)?)
        }
    };
    Ok(Parsed { pmq, pair })
}

pub fn parse_group_document(bytes: &[u8]) -> Result<FiniteGroup> {
    let doc: GroupDocument = deserialize(bytes)?;
    let order = doc.mult.len();
    if order == 0 {
        return Err(schema("mult", "a group has at least one element"));
    }
    check_square("mult", &doc.mult, order)?;
    check_entries("mult", doc.mult.iter().map(|r| r.iter().copied().map(Some).collect()).enumerate(), order)?;
    let group = FiniteGroup::from_table(&doc.mult).map_err(|e| match e {
        Error::Malformed(m) => schema("mult", m),
        other => other,
    })?;
    match doc.labels {
        Some(labels) if labels.len() != order => {
            Err(schema("labels", format!("expected {order} labels, found {}", labels.len())))
        }
        Some(labels) => Ok(group.with_labels(labels)),
        None => Ok(group),
    }
}

pub fn pmq_document(q: &FinitePMQ, pair: Option<&PMQGroupPair>) -> PmqDocument {
    PmqDocument {
        size: q.size(),
        unit: q.unit(),
        conj: q.conj_table(),
        prod: q.prod_table(),
        norm: q.norm().map(<[u32]>::to_vec),
        pair: pair.map(|p| PairDocument {
            group_mult: p.group().mult_table(),
            e: p.e_map().to_vec(),
            r: p.action_table().to_vec(),
        }),
    }
}

pub fn group_document(g: &FiniteGroup) -> GroupDocument {
    GroupDocument {
        mult: g.mult_table(),
        labels: g.labels().map(<[String]>::to_vec),
    }
}

/// Pretty JSON with keys sorted at every level, newline terminated.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("document types serialize to JSON");
    let mut out = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::pmq::Axiom;

    #[test]
    fn minimal_document() {
        let parsed = parse_pmq_document(br#"{"size":1,"unit":0,"conj":[[0]],"prod":[[0]]}"#).unwrap();
        assert_eq!((parsed.pmq.size(), parsed.pmq.is_normed()), (1, false));
        assert!(parsed.pair.is_none());
    }

    #[test]
    fn truncated_document() {
        let text = br#"{"size":1,"unit":0,"conj":[[0]"#;
        match parse_pmq_document(text) {
            Err(Error::Document(DocumentError::Syntax { offset, line, .. })) => {
                assert_eq!(line, 1);
                assert_eq!(offset, text.len());
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_pmq_document(b"{\n  \"size\": 1,\n  \"unit\": 0 0\n}") {
            Err(Error::Document(DocumentError::Syntax { offset, line, column, .. })) => {
                assert_eq!((line, column), (3, 13));
                assert_eq!(offset, 27);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn schema_errors_carry_paths() {
        let err = parse_pmq_document(br#"{"size":1,"unit":0,"conj":[[0]],"prod":[["x"]]}"#).unwrap_err();
        assert!(matches!(err, Error::Document(DocumentError::Schema { ref path, .. }) if path == "prod[0][0]"));
        let err = parse_pmq_document(br#"{"size":1,"unit":0,"conj":[[0]],"prod":[[0]],"extra":1}"#).unwrap_err();
        assert!(matches!(err, Error::Document(DocumentError::Schema { .. })));
        let err = parse_pmq_document(br#"{"size":2,"unit":0,"conj":[[0,0],[1,1]],"prod":[[0,1],[1,7]]}"#).unwrap_err();
        assert!(matches!(err, Error::Document(DocumentError::Schema { ref path, .. }) if path == "prod[1][1]"));
        let err = parse_pmq_document(br#"{"size":2,"unit":0,"conj":[[0,0]],"prod":[[0,1],[1,null]]}"#).unwrap_err();
        assert!(matches!(err, Error::Document(DocumentError::Schema { ref path, .. }) if path == "conj"));
    }

    #[test]
    fn associativity_violation_in_document() {
        // Z/3 with the single product 2·1 erased: (1·1)·1 is undefined
        // while 1·(1·1) is the unit
        let text = br#"{"size":3,"unit":0,
            "conj":[[0,0,0],[1,1,1],[2,2,2]],
            "prod":[[0,1,2],[1,2,0],[2,null,1]]}"#;
        match parse_pmq_document(text) {
            Err(Error::PmqAxioms(v)) => {
                let v = v.iter().find(|x| x.axiom == Axiom::AssociativeDefinedness).unwrap();
                assert_eq!(v.witness, vec![1, 1, 1]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip_is_idempotent() {
        for name in builtins::names() {
            let built = builtins::builtin(&name).unwrap();
            let pair = built.pair().unwrap();
            let first = canonical_json(&pmq_document(&built.pmq, Some(&pair)));
            let parsed = parse_pmq_document(first.as_bytes()).unwrap();
            let second = canonical_json(&pmq_document(&parsed.pmq, parsed.pair.as_ref()));
            assert_eq!(first, second, "{name}");
        }
    }

    #[test]
    fn group_documents() {
        let g = crate::group::builtin_group("S3").unwrap();
        let text = canonical_json(&group_document(&g));
        let back = parse_group_document(text.as_bytes()).unwrap();
        assert_eq!(back.mult_table(), g.mult_table());
        assert_eq!(back.labels(), g.labels());
        let err = parse_group_document(br#"{"mult":[[0,1],[1,1]]}"#).unwrap_err();
        assert!(matches!(err, Error::Document(DocumentError::Schema { ref path, .. }) if path == "mult"));
    }
}
