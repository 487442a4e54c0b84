//! Tab-separated snapshot files.
//!
//! * edges: `u<TAB>v<TAB>timestamp`
//! * attributes: `user<TAB>kind<TAB>value_id`
//! * interactions: `u<TAB>v<TAB>count`
//!
//! Blank lines and lines starting with `#` are skipped in all three.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use super::{AttrKind, AttrRecord, EdgeRecord, InteractionRecord, Snapshot, UserId};
use crate::error::{Error, Result};

/// Either stop at the first bad line or collect every error and keep going.
enum Mode<'a> {
    Strict,
    Collect(&'a mut Vec<Error>),
}

fn read_lines<T>(
    path: &Path,
    mut mode: Mode<'_>,
    parse: impl Fn(&[&str], usize) -> Result<T>,
) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let lineno = idx + 1;
        let parsed = if fields.len() != 3 {
            Err(malformed(
                path,
                lineno,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ))
        } else {
            parse(&fields, lineno)
        };
        match (parsed, &mut mode) {
            (Ok(rec), _) => out.push(rec),
            (Err(e), Mode::Strict) => return Err(e),
            (Err(e), Mode::Collect(errors)) => errors.push(e),
        }
    }
    Ok(out)
}

fn malformed(path: &Path, line: usize, message: String) -> Error {
    Error::Malformed {
        path: path.to_path_buf(),
        line,
        message,
    }
}

fn field<T: FromStr>(path: &Path, line: usize, raw: &str, what: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| malformed(path, line, format!("invalid {what} `{raw}`")))
}

fn parse_edge(path: &Path, f: &[&str], line: usize) -> Result<EdgeRecord> {
    let u: UserId = field(path, line, f[0], "user id")?;
    let v: UserId = field(path, line, f[1], "user id")?;
    let t = field(path, line, f[2], "timestamp")?;
    if u == v {
        return Err(Error::SelfLoop {
            path: path.to_path_buf(),
            line,
            user: u,
        });
    }
    Ok(EdgeRecord { u, v, t })
}

fn parse_attr(path: &Path, f: &[&str], line: usize) -> Result<AttrRecord> {
    let user = field(path, line, f[0], "user id")?;
    let token = f[1].trim();
    let kind = token.parse::<AttrKind>().map_err(|token| Error::UnknownAttrKind {
        path: path.to_path_buf(),
        line,
        token,
    })?;
    let value = field(path, line, f[2], "attribute value id")?;
    Ok(AttrRecord { user, kind, value })
}

fn parse_interaction(path: &Path, f: &[&str], line: usize) -> Result<InteractionRecord> {
    let u: UserId = field(path, line, f[0], "user id")?;
    let v: UserId = field(path, line, f[1], "user id")?;
    let count = field(path, line, f[2], "interaction count")?;
    if u == v {
        return Err(Error::SelfLoop {
            path: path.to_path_buf(),
            line,
            user: u,
        });
    }
    Ok(InteractionRecord { u, v, count })
}

pub fn read_edges(path: &Path) -> Result<Vec<EdgeRecord>> {
    read_lines(path, Mode::Strict, |f, l| parse_edge(path, f, l))
}

pub fn read_attributes(path: &Path) -> Result<Vec<AttrRecord>> {
    read_lines(path, Mode::Strict, |f, l| parse_attr(path, f, l))
}

pub fn read_interactions(path: &Path) -> Result<Vec<InteractionRecord>> {
    read_lines(path, Mode::Strict, |f, l| parse_interaction(path, f, l))
}

/// Loads a snapshot; absent optional files leave the attribute and
/// interaction maps empty.
pub fn load_snapshot(
    edges_path: &Path,
    attrs_path: Option<&Path>,
    interactions_path: Option<&Path>,
) -> Result<Snapshot> {
    let edges = read_edges(edges_path)?;
    let attrs = attrs_path.map(read_attributes).transpose()?.unwrap_or_default();
    let inter = interactions_path
        .map(read_interactions)
        .transpose()?
        .unwrap_or_default();
    Snapshot::from_records(&edges, &attrs, &inter)
}

#[derive(Debug, Default)]
pub struct ValidationReport {
    /// Line-level problems, one per rejected record.
    pub errors: Vec<Error>,
    /// Structural invariant violations of the snapshot built from the
    /// accepted records.
    pub violations: Vec<String>,
    pub users: usize,
    pub edges: usize,
    pub records_read: usize,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty() && self.violations.is_empty()
    }
}

/// Reads every file without stopping at the first bad line and reports all
/// problems found. I/O failures (missing file) are still returned as `Err`.
pub fn validate_files(
    edges_path: &Path,
    attrs_path: Option<&Path>,
    interactions_path: Option<&Path>,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    let edges = read_lines(edges_path, Mode::Collect(&mut report.errors), |f, l| {
        parse_edge(edges_path, f, l)
    })?;
    let attrs = match attrs_path {
        Some(p) => read_lines(p, Mode::Collect(&mut report.errors), |f, l| parse_attr(p, f, l))?,
        None => Vec::new(),
    };
    let inter = match interactions_path {
        Some(p) => read_lines(p, Mode::Collect(&mut report.errors), |f, l| {
            parse_interaction(p, f, l)
        })?,
        None => Vec::new(),
    };
    report.records_read = edges.len() + attrs.len() + inter.len();
    let snapshot = Snapshot::from_records(&edges, &attrs, &inter)?;
    report.violations = snapshot.check_invariants();
    report.users = snapshot.user_count();
    report.edges = snapshot.edge_count();
    Ok(report)
}

pub fn write_edge_records<W: Write>(mut w: W, edges: &[EdgeRecord]) -> io::Result<()> {
    for e in edges {
        writeln!(w, "{}\t{}\t{}", e.u, e.v, e.t)?;
    }
    w.flush()
}

pub fn write_attributes<W: Write>(mut w: W, attrs: &[AttrRecord]) -> io::Result<()> {
    for a in attrs {
        writeln!(w, "{}\t{}\t{}", a.user, a.kind, a.value)?;
    }
    w.flush()
}

pub fn write_interactions<W: Write>(mut w: W, records: &[InteractionRecord]) -> io::Result<()> {
    for r in records {
        writeln!(w, "{}\t{}\t{}", r.u, r.v, r.count)?;
    }
    w.flush()
}
