//! Dataset directories: `edges.tsv`, optional `attributes.tsv` and
//! `interactions.tsv`, and an optional `meta` file of `key = value` lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{
    apply_user_filter, read_attributes, read_edges, read_interactions, temporal_split,
    validate_files, AttrRecord, EdgeRecord, InteractionRecord, Snapshot, Timestamp, UserId,
    ValidationReport,
};

pub const EDGES_FILE: &str = "edges.tsv";
pub const ATTRIBUTES_FILE: &str = "attributes.tsv";
pub const INTERACTIONS_FILE: &str = "interactions.tsv";
pub const META_FILE: &str = "meta";

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub edges: Vec<EdgeRecord>,
    pub attributes: Vec<AttrRecord>,
    pub interactions: Vec<InteractionRecord>,
    pub meta: BTreeMap<String, String>,
}

/// Training snapshot after the user filter, plus the held-out friendships.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub snapshot: Snapshot,
    pub eligible: BTreeSet<UserId>,
    pub new_edges: Vec<EdgeRecord>,
    pub boundary: Timestamp,
}

fn optional(dir: &Path, name: &str) -> Option<PathBuf> {
    let p = dir.join(name);
    p.exists().then_some(p)
}

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_key_values(text: &str) -> std::result::Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(format!("line {}: empty key", i + 1));
        }
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(format!("line {}: duplicate key `{k}`", i + 1));
        }
    }
    Ok(out)
}

impl Dataset {
    pub fn open(dir: &Path) -> Result<Self> {
        let edges = read_edges(&dir.join(EDGES_FILE))?;
        let attributes = optional(dir, ATTRIBUTES_FILE)
            .map(|p| read_attributes(&p))
            .transpose()?
            .unwrap_or_default();
        let interactions = optional(dir, INTERACTIONS_FILE)
            .map(|p| read_interactions(&p))
            .transpose()?
            .unwrap_or_default();
        let meta = match optional(dir, META_FILE) {
            Some(p) => {
                let text = fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
                parse_key_values(&text).map_err(|message| Error::Malformed {
                    path: p,
                    line: 0,
                    message,
                })?
            }
            None => BTreeMap::new(),
        };
        Ok(Dataset {
            edges,
            attributes,
            interactions,
            meta,
        })
    }

    /// Line-level and structural problems in the directory's files.
    pub fn validate(dir: &Path) -> Result<ValidationReport> {
        validate_files(
            &dir.join(EDGES_FILE),
            optional(dir, ATTRIBUTES_FILE).as_deref(),
            optional(dir, INTERACTIONS_FILE).as_deref(),
        )
    }

    /// Split boundary recorded in `meta`, if any.
    pub fn meta_boundary(&self) -> Result<Option<Timestamp>> {
        self.meta
            .get("split_boundary")
            .map(|v| {
                v.parse().map_err(|_| {
                    Error::InvalidParams(format!("meta split_boundary `{v}` is not an integer"))
                })
            })
            .transpose()
    }

    /// Snapshot of every edge, or only of edges up to `boundary`.
    pub fn snapshot(&self, boundary: Option<Timestamp>) -> Result<Snapshot> {
        match boundary {
            Some(b) => {
                let (train, _) = temporal_split(&self.edges, b);
                Snapshot::from_records(&train, &self.attributes, &self.interactions)
            }
            None => Snapshot::from_records(&self.edges, &self.attributes, &self.interactions),
        }
    }

    /// Splits at `boundary`, builds the training snapshot, and keeps users
    /// with at least `min_new` held-out friendships.
    pub fn experiment(&self, boundary: Timestamp, min_new: usize) -> Result<Experiment> {
        let (train, new_edges) = temporal_split(&self.edges, boundary);
        let full = Snapshot::from_records(&train, &self.attributes, &self.interactions)?;
        let (snapshot, eligible) = apply_user_filter(&full, &new_edges, min_new);
        Ok(Experiment {
            snapshot,
            eligible,
            new_edges,
            boundary,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_values() {
        let kv = parse_key_values("# c\n a = 1 \nb=x y\n\n").unwrap();
        assert_eq!(kv["a"], "1");
        assert_eq!(kv["b"], "x y");
        assert!(parse_key_values("a 1").is_err());
        assert!(parse_key_values("a=1\na=2").is_err());
        assert!(parse_key_values(" = 2").is_err());
    }

    #[test]
    fn open_split_and_filter() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join(EDGES_FILE),
            "1\t2\t10\n2\t3\t10\n1\t3\t50\n3\t4\t60\n",
        )
        .unwrap();
        fs::write(dir.path().join(META_FILE), "split_boundary = 20\n").unwrap();
        let d = Dataset::open(dir.path()).unwrap();
        assert_eq!(d.meta_boundary().unwrap(), Some(20));
        assert_eq!(d.snapshot(None).unwrap().edge_count(), 4);
        assert_eq!(d.snapshot(Some(20)).unwrap().edge_count(), 2);
        let x = d.experiment(20, 1).unwrap();
        // 2 has no new friendship; 4 only appears after the boundary.
        let eligible: Vec<u32> = x.eligible.iter().map(|u| u.0).collect();
        assert_eq!(eligible, vec![1, 3, 4]);
        assert_eq!(x.snapshot.edge_count(), 0);
        assert_eq!(x.new_edges.len(), 2);
    }

    #[test]
    fn missing_edges_file_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(Dataset::open(dir.path()), Err(Error::Io { .. })));
    }
}
