//! Immutable friendship snapshots and the temporal/user filters applied before
//! evaluation.
//!
//! Friendships are stored once per unordered pair ([`EdgeKey`]); the per-user
//! neighbor lists are derived from that store at construction time, so the
//! symmetry invariant holds by construction.

mod load;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

pub use load::{
    load_snapshot, read_attributes, read_edges, read_interactions, validate_files,
    write_attributes, write_edge_records, write_interactions, ValidationReport,
};

use crate::error::{Error, Result};

/// Identifier of a user (a vertex of the friendship graph).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UserId(pub u32);

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for UserId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.parse().map(UserId)
    }
}

impl From<u32> for UserId {
    fn from(id: u32) -> Self {
        UserId(id)
    }
}

/// Seconds; only the ordering matters.
pub type Timestamp = i64;

/// Kinds of per-user attribute sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttrKind {
    School,
    Group,
    Ip,
    /// Only consumed by the legacy weighted-graph baseline.
    Company,
}

impl AttrKind {
    pub const ALL: [AttrKind; 4] = [
        AttrKind::School,
        AttrKind::Group,
        AttrKind::Ip,
        AttrKind::Company,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AttrKind::School => "school",
            AttrKind::Group => "group",
            AttrKind::Ip => "ip",
            AttrKind::Company => "company",
        }
    }
}

impl fmt::Display for AttrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AttrKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "school" => Ok(AttrKind::School),
            "group" => Ok(AttrKind::Group),
            "ip" => Ok(AttrKind::Ip),
            "company" => Ok(AttrKind::Company),
            other => Err(other.to_string()),
        }
    }
}

/// A timestamped friendship record as it appears in an edges file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeRecord {
    pub u: UserId,
    pub v: UserId,
    pub t: Timestamp,
}

impl EdgeRecord {
    pub fn new(u: impl Into<UserId>, v: impl Into<UserId>, t: Timestamp) -> Self {
        EdgeRecord {
            u: u.into(),
            v: v.into(),
            t,
        }
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey::new(self.u, self.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AttrRecord {
    pub user: UserId,
    pub kind: AttrKind,
    pub value: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InteractionRecord {
    pub u: UserId,
    pub v: UserId,
    pub count: u64,
}

/// Unordered pair of users, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(UserId, UserId);

impl EdgeKey {
    pub fn new(a: UserId, b: UserId) -> Self {
        if a <= b {
            EdgeKey(a, b)
        } else {
            EdgeKey(b, a)
        }
    }

    pub fn low(&self) -> UserId {
        self.0
    }

    pub fn high(&self) -> UserId {
        self.1
    }
}

/// Read-only view of the network at one point in time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Snapshot {
    users: Vec<UserId>,
    adjacency: HashMap<UserId, Vec<UserId>>,
    edge_time: HashMap<EdgeKey, Timestamp>,
    attributes: HashMap<(UserId, AttrKind), Vec<u32>>,
    interactions: HashMap<EdgeKey, u64>,
}

impl Snapshot {
    pub fn builder() -> SnapshotBuilder {
        SnapshotBuilder::default()
    }

    /// Builds a snapshot from already-parsed records.
    pub fn from_records(
        edges: &[EdgeRecord],
        attributes: &[AttrRecord],
        interactions: &[InteractionRecord],
    ) -> Result<Self> {
        let mut b = SnapshotBuilder::default();
        for e in edges {
            b.add_edge(e.u, e.v, e.t)?;
        }
        for a in attributes {
            b.add_attribute(a.user, a.kind, a.value);
        }
        for i in interactions {
            b.add_interaction(i.u, i.v, i.count)?;
        }
        Ok(b.build())
    }

    /// All users in ascending order.
    pub fn users(&self) -> &[UserId] {
        &self.users
    }

    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_time.len()
    }

    pub fn contains(&self, u: UserId) -> bool {
        self.adjacency.contains_key(&u)
    }

    /// Friends of `u` in ascending id order.
    pub fn neighborhood(&self, u: UserId) -> Result<&[UserId]> {
        self.adjacency
            .get(&u)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownUser(u))
    }

    /// Friends of a user known to be present; empty for unknown users.
    pub(crate) fn neighbors(&self, u: UserId) -> &[UserId] {
        self.adjacency.get(&u).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, u: UserId) -> Option<usize> {
        self.adjacency.get(&u).map(Vec::len)
    }

    pub fn are_friends(&self, u: UserId, v: UserId) -> bool {
        self.edge_time.contains_key(&EdgeKey::new(u, v))
    }

    pub fn edge_time(&self, u: UserId, v: UserId) -> Option<Timestamp> {
        self.edge_time.get(&EdgeKey::new(u, v)).copied()
    }

    /// Sorted, deduplicated attribute values of one kind; empty when absent.
    pub fn attributes(&self, u: UserId, kind: AttrKind) -> &[u32] {
        self.attributes
            .get(&(u, kind))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Interaction count of an unordered pair, 0 when absent.
    pub fn interactions(&self, u: UserId, v: UserId) -> u64 {
        self.interactions
            .get(&EdgeKey::new(u, v))
            .copied()
            .unwrap_or(0)
    }

    /// Every friendship once, as `u < v`, sorted.
    pub fn edges(&self) -> Vec<EdgeRecord> {
        let mut out: Vec<EdgeRecord> = self
            .edge_time
            .iter()
            .map(|(k, &t)| EdgeRecord::new(k.low(), k.high(), t))
            .collect();
        out.sort_by_key(|e| (e.u, e.v));
        out
    }

    pub fn attribute_records(&self) -> Vec<AttrRecord> {
        let mut out: Vec<AttrRecord> = self
            .attributes
            .iter()
            .flat_map(|(&(user, kind), values)| {
                values.iter().map(move |&value| AttrRecord { user, kind, value })
            })
            .collect();
        out.sort_by_key(|a| (a.user, a.kind, a.value));
        out
    }

    pub fn interaction_records(&self) -> Vec<InteractionRecord> {
        let mut out: Vec<InteractionRecord> = self
            .interactions
            .iter()
            .map(|(k, &count)| InteractionRecord {
                u: k.low(),
                v: k.high(),
                count,
            })
            .collect();
        out.sort_by_key(|r| (r.u, r.v));
        out
    }

    /// Checks the structural invariants and describes each violation found.
    ///
    /// Snapshots built through [`SnapshotBuilder`] always pass; this exists for
    /// the `validate` command and for tests.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if self.users.windows(2).any(|w| w[0] >= w[1]) {
            problems.push("user list is not strictly ascending".to_string());
        }
        for (&u, friends) in &self.adjacency {
            if friends.windows(2).any(|w| w[0] >= w[1]) {
                problems.push(format!("neighbors of {u} are not strictly ascending"));
            }
            for &v in friends {
                if v == u {
                    problems.push(format!("self-loop on {u}"));
                    continue;
                }
                match self.adjacency.get(&v) {
                    Some(back) if back.binary_search(&u).is_ok() => {}
                    _ => problems.push(format!("edge {u}->{v} has no reverse")),
                }
                if !self.edge_time.contains_key(&EdgeKey::new(u, v)) {
                    problems.push(format!("edge {u}-{v} has no timestamp"));
                }
            }
        }
        let listed: usize = self.adjacency.values().map(Vec::len).sum();
        if listed != 2 * self.edge_time.len() {
            problems.push(format!(
                "{} adjacency entries for {} stored edges",
                listed,
                self.edge_time.len()
            ));
        }
        problems
    }
}

/// Accumulates records into a [`Snapshot`].
#[derive(Debug, Default)]
pub struct SnapshotBuilder {
    users: BTreeSet<UserId>,
    edge_time: HashMap<EdgeKey, Timestamp>,
    attributes: HashMap<(UserId, AttrKind), Vec<u32>>,
    interactions: HashMap<EdgeKey, u64>,
}

impl SnapshotBuilder {
    pub fn add_user(&mut self, u: UserId) -> &mut Self {
        self.users.insert(u);
        self
    }

    /// Adds an undirected friendship; a repeated pair keeps the earliest timestamp.
    pub fn add_edge(&mut self, u: UserId, v: UserId, t: Timestamp) -> Result<&mut Self> {
        if u == v {
            return Err(Error::SelfPair(u));
        }
        self.users.insert(u);
        self.users.insert(v);
        self.edge_time
            .entry(EdgeKey::new(u, v))
            .and_modify(|old| *old = (*old).min(t))
            .or_insert(t);
        Ok(self)
    }

    pub fn add_attribute(&mut self, u: UserId, kind: AttrKind, value: u32) -> &mut Self {
        self.users.insert(u);
        self.attributes.entry((u, kind)).or_default().push(value);
        self
    }

    /// Adds to the interaction count of an unordered pair; duplicates are summed.
    pub fn add_interaction(&mut self, u: UserId, v: UserId, count: u64) -> Result<&mut Self> {
        if u == v {
            return Err(Error::SelfPair(u));
        }
        self.users.insert(u);
        self.users.insert(v);
        *self.interactions.entry(EdgeKey::new(u, v)).or_insert(0) += count;
        Ok(self)
    }

    pub fn build(self) -> Snapshot {
        let mut adjacency: HashMap<UserId, Vec<UserId>> =
            self.users.iter().map(|&u| (u, Vec::new())).collect();
        for k in self.edge_time.keys() {
            adjacency.get_mut(&k.low()).expect("endpoint registered").push(k.high());
            adjacency.get_mut(&k.high()).expect("endpoint registered").push(k.low());
        }
        for friends in adjacency.values_mut() {
            friends.sort_unstable();
        }
        let mut attributes = self.attributes;
        for values in attributes.values_mut() {
            values.sort_unstable();
            values.dedup();
        }
        Snapshot {
            users: self.users.into_iter().collect(),
            adjacency,
            edge_time: self.edge_time,
            attributes,
            interactions: self.interactions,
        }
    }
}

/// Splits records into `t <= boundary` (train) and `t > boundary` (test),
/// preserving input order within each side.
pub fn temporal_split(
    edges: &[EdgeRecord],
    boundary: Timestamp,
) -> (Vec<EdgeRecord>, Vec<EdgeRecord>) {
    edges.iter().partition(|e| e.t <= boundary)
}

/// Keeps only users with at least `min_new` incident records in `new_edges`
/// and drops every friendship that touches a removed user or that also
/// appears in `new_edges`.
///
/// The eligibility count is taken on the raw `new_edges` before any friendship
/// is removed. Returns the filtered snapshot and the eligible set.
pub fn apply_user_filter(
    snapshot: &Snapshot,
    new_edges: &[EdgeRecord],
    min_new: usize,
) -> (Snapshot, BTreeSet<UserId>) {
    // Repeated records of one pair count once.
    let new_pairs: HashSet<EdgeKey> = new_edges
        .iter()
        .filter(|e| e.u != e.v)
        .map(EdgeRecord::key)
        .collect();
    let mut new_count: HashMap<UserId, usize> = HashMap::new();
    for k in &new_pairs {
        *new_count.entry(k.low()).or_insert(0) += 1;
        *new_count.entry(k.high()).or_insert(0) += 1;
    }

    let mut candidates: BTreeSet<UserId> = snapshot.users.iter().copied().collect();
    candidates.extend(new_count.keys().copied());
    let eligible: BTreeSet<UserId> = candidates
        .into_iter()
        .filter(|u| new_count.get(u).copied().unwrap_or(0) >= min_new)
        .collect();

    let mut b = SnapshotBuilder::default();
    for &u in &eligible {
        b.add_user(u);
    }
    for (k, &t) in &snapshot.edge_time {
        if eligible.contains(&k.low()) && eligible.contains(&k.high()) && !new_pairs.contains(k)
        {
            b.edge_time.insert(*k, t);
        }
    }
    for (&(u, kind), values) in &snapshot.attributes {
        if eligible.contains(&u) {
            b.attributes.insert((u, kind), values.clone());
        }
    }
    for (k, &count) in &snapshot.interactions {
        if eligible.contains(&k.low()) && eligible.contains(&k.high()) {
            b.interactions.insert(*k, count);
        }
    }
    (b.build(), eligible)
}
