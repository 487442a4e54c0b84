//! Friends-of-friends candidate selection.

use std::collections::HashMap;

use crate::error::Result;
use crate::graph::{Snapshot, UserId};

/// Candidates for one target, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub target: UserId,
    /// Sorted by mutual-friend count descending, then by ascending id.
    pub members: Vec<UserId>,
    pub mutual_count: HashMap<UserId, usize>,
}

impl CandidateSet {
    pub fn empty(target: UserId) -> Self {
        CandidateSet {
            target,
            members: Vec::new(),
            mutual_count: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn mutual(&self, v: UserId) -> Option<usize> {
        self.mutual_count.get(&v).copied()
    }

    /// Members paired with their mutual-friend counts, in member order.
    pub fn iter(&self) -> impl Iterator<Item = (UserId, usize)> + '_ {
        self.members.iter().map(|v| (*v, self.mutual_count[v]))
    }
}

/// Every vertex at distance exactly two from `u`, with its number of common
/// friends, sorted by that count descending and id ascending.
pub fn friends_of_friends(snapshot: &Snapshot, u: UserId) -> Result<Vec<(UserId, usize)>> {
    let friends = snapshot.neighborhood(u)?;
    let mut counts: HashMap<UserId, usize> = HashMap::new();
    for &f in friends {
        for &w in snapshot.neighbors(f) {
            if w != u && friends.binary_search(&w).is_err() {
                *counts.entry(w).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(UserId, usize)> = counts.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(ranked)
}

/// Keeps at most `limit` friends-of-friends sharing at least `min_mutual`
/// friends with `u`.
///
/// Pass `usize::MAX` as `limit` for no cap.
pub fn select_candidates(
    snapshot: &Snapshot,
    u: UserId,
    limit: usize,
    min_mutual: usize,
) -> Result<CandidateSet> {
    let ranked = friends_of_friends(snapshot, u)?;
    // Descending order: the first count below the threshold ends the scan.
    let kept: Vec<(UserId, usize)> = ranked
        .into_iter()
        .take_while(|&(_, n)| n >= min_mutual)
        .take(limit)
        .collect();
    Ok(CandidateSet {
        target: u,
        members: kept.iter().map(|&(v, _)| v).collect(),
        mutual_count: kept.into_iter().collect(),
    })
}
