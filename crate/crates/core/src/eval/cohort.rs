//! Degree-stratified test cohorts and their future friendships.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, Snapshot, UserId};

/// Degree range and sample size for one cohort.
///
/// Text form: `name:min-max:size`, or `name:min+:size` for no upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohortSpec {
    pub name: String,
    pub min_degree: usize,
    pub max_degree: Option<usize>,
    pub sample_size: usize,
}

impl CohortSpec {
    pub fn new(name: &str, min_degree: usize, max_degree: Option<usize>, sample_size: usize) -> Self {
        CohortSpec {
            name: name.to_string(),
            min_degree,
            max_degree,
            sample_size,
        }
    }

    pub fn admits(&self, degree: usize) -> bool {
        degree >= self.min_degree && self.max_degree.is_none_or(|m| degree <= m)
    }

    /// About 1000 users each with 20–30, 50–60 and at least 100 friends.
    pub fn standard() -> Vec<CohortSpec> {
        vec![
            CohortSpec::new("T20", 20, Some(30), 1000),
            CohortSpec::new("T50", 50, Some(60), 1000),
            CohortSpec::new("T100", 100, None, 1000),
        ]
    }
}

impl fmt::Display for CohortSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max_degree {
            Some(max) => write!(f, "{}:{}-{}:{}", self.name, self.min_degree, max, self.sample_size),
            None => write!(f, "{}:{}+:{}", self.name, self.min_degree, self.sample_size),
        }
    }
}

impl FromStr for CohortSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || format!("invalid cohort spec `{s}` (expected name:min-max:size or name:min+:size)");
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [name, range, size] = parts[..] else {
            return Err(bad());
        };
        if name.is_empty() {
            return Err(bad());
        }
        let (min, max) = if let Some(min) = range.strip_suffix('+') {
            (min.parse().map_err(|_| bad())?, None)
        } else {
            let (lo, hi) = range.split_once('-').ok_or_else(bad)?;
            let (lo, hi): (usize, usize) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
            if hi < lo {
                return Err(bad());
            }
            (lo, Some(hi))
        };
        let size = size.parse().map_err(|_| bad())?;
        Ok(CohortSpec::new(name, min, max, size))
    }
}

/// Users sampled for evaluation and the friendships each will form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCohort {
    pub name: String,
    /// Ascending.
    pub users: Vec<UserId>,
    pub truth: BTreeMap<UserId, BTreeSet<UserId>>,
}

impl TestCohort {
    pub fn truth_of(&self, u: UserId) -> &BTreeSet<UserId> {
        static EMPTY: BTreeSet<UserId> = BTreeSet::new();
        self.truth.get(&u).unwrap_or(&EMPTY)
    }
}

/// Future partners of every user in `users`, excluding current friends.
pub fn truth_sets(
    snapshot: &Snapshot,
    truth_edges: &[EdgeRecord],
    users: &[UserId],
) -> BTreeMap<UserId, BTreeSet<UserId>> {
    let wanted: BTreeSet<UserId> = users.iter().copied().collect();
    let mut truth: BTreeMap<UserId, BTreeSet<UserId>> =
        users.iter().map(|&u| (u, BTreeSet::new())).collect();
    for e in truth_edges {
        if e.u == e.v || snapshot.are_friends(e.u, e.v) {
            continue;
        }
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if wanted.contains(&a) {
                truth.get_mut(&a).expect("seeded").insert(b);
            }
        }
    }
    truth
}

/// Samples each cohort uniformly without replacement from the users whose
/// degree fits the spec (all of them when fewer than `sample_size`).
///
/// One seeded generator is shared by the specs in order, so the result is a
/// pure function of the inputs.
pub fn build_test_cohorts(
    snapshot: &Snapshot,
    truth_edges: &[EdgeRecord],
    specs: &[CohortSpec],
    seed: u64,
) -> Result<Vec<TestCohort>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    specs
        .iter()
        .map(|spec| {
            if spec.sample_size == 0 {
                return Err(Error::InvalidParams(format!(
                    "cohort {} has sample size 0",
                    spec.name
                )));
            }
            let pool: Vec<UserId> = snapshot
                .users()
                .iter()
                .copied()
                .filter(|&u| spec.admits(snapshot.degree(u).unwrap_or(0)))
                .collect();
            if pool.is_empty() {
                log::warn!("cohort {}: no user has a degree in range", spec);
            }
            let mut users: Vec<UserId> = if pool.len() <= spec.sample_size {
                pool
            } else {
                sample(&mut rng, pool.len(), spec.sample_size)
                    .into_iter()
                    .map(|i| pool[i])
                    .collect()
            };
            users.sort_unstable();
            let truth = truth_sets(snapshot, truth_edges, &users);
            Ok(TestCohort {
                name: spec.name.clone(),
                users,
                truth,
            })
        })
        .collect()
}
