//! Comparison approaches: the legacy weighted feature graph, Adamic-Adar,
//! common-neighbor counts and unweighted RWR.

use std::fmt;
use std::str::FromStr;

use crate::candidates::{friends_of_friends, select_candidates};
use crate::error::{Error, Result};
use crate::features::{adamic_adar, shared_attributes};
use crate::graph::{AttrKind, Snapshot, UserId};
use crate::rwr::{build_unit_local_graph, rwr_distribution};
use crate::scalar::Real;
use crate::suggest::{suggest, SuggestionList, SuggestionParams};

/// Parameters of the legacy four-vertex feature graph.
///
/// Index order: mutual friends, schools, companies, IPs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentApproachParams<F> {
    /// Vertex weights, each ≥ 1.
    pub t: [F; 4],
    /// Symmetric edge weights with a zero diagonal.
    pub e: [[F; 4]; 4],
}

impl<F: Real> Default for CurrentApproachParams<F> {
    fn default() -> Self {
        Self::from_upper(
            [1.7, 1.5, 1.4, 1.1].map(F::lit),
            [2.0, 1.9, 1.6, 1.8, 1.7, 1.4].map(F::lit),
        )
    }
}

const UPPER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl<F: Real> CurrentApproachParams<F> {
    /// Builds the matrix from its upper triangle `e12, e13, e14, e23, e24, e34`.
    pub fn from_upper(t: [F; 4], upper: [F; 6]) -> Self {
        let mut e = [[F::zero(); 4]; 4];
        for (&(i, j), &x) in UPPER_PAIRS.iter().zip(&upper) {
            e[i][j] = x;
            e[j][i] = x;
        }
        CurrentApproachParams { t, e }
    }

    pub fn upper(&self) -> [F; 6] {
        UPPER_PAIRS.map(|(i, j)| self.e[i][j])
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.t.iter().find(|t| !(t.is_finite() && **t >= F::one())) {
            return Err(Error::InvalidParams(format!("vertex weight {t} is below 1")));
        }
        for i in 0..4 {
            if self.e[i][i] != F::zero() {
                return Err(Error::InvalidParams("edge weight diagonal must be zero".into()));
            }
            for j in 0..4 {
                if self.e[i][j] != self.e[j][i] || !self.e[i][j].is_finite() {
                    return Err(Error::InvalidParams(
                        "edge weights must be finite and symmetric".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Legacy score `n · Σ_{i≠j} ê_ij · t̂_i · t̂_j` for the pair.
///
/// The mutual-friends vertex is always on; the school, company and IP
/// vertices are on when the pair shares at least one such value. Off vertices
/// weigh 1, edges between two on vertices use `e`, every other off-diagonal
/// edge weighs 1, and `n` counts the on edges (unordered).
pub fn current_score<F: Real>(
    snapshot: &Snapshot,
    u: UserId,
    v: UserId,
    params: &CurrentApproachParams<F>,
) -> Result<F> {
    for x in [u, v] {
        if !snapshot.contains(x) {
            return Err(Error::UnknownUser(x));
        }
    }
    if u == v {
        return Err(Error::SelfPair(u));
    }
    let shares = |kind| shared_attributes(snapshot, u, v, kind) > 0;
    let on = [
        true,
        shares(AttrKind::School),
        shares(AttrKind::Company),
        shares(AttrKind::Ip),
    ];
    Ok(current_score_from_flags(on, params))
}

pub(crate) fn current_score_from_flags<F: Real>(
    on: [bool; 4],
    params: &CurrentApproachParams<F>,
) -> F {
    let t: Vec<F> = (0..4)
        .map(|i| if on[i] { params.t[i] } else { F::one() })
        .collect();
    let mut n = 0usize;
    let mut total = F::zero();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let both = on[i] && on[j];
            if both && i < j {
                n += 1;
            }
            let e = if both { params.e[i][j] } else { F::one() };
            total = total + e * t[i] * t[j];
        }
    }
    F::from_count(n) * total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaselineKind {
    Current,
    AdamicAdar,
    CommonNeighbors,
    PlainRwr,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 4] = [
        BaselineKind::Current,
        BaselineKind::AdamicAdar,
        BaselineKind::CommonNeighbors,
        BaselineKind::PlainRwr,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BaselineKind::Current => "current",
            BaselineKind::AdamicAdar => "adamic_adar",
            BaselineKind::CommonNeighbors => "common_neighbors",
            BaselineKind::PlainRwr => "plain_rwr",
        }
    }
}

/// Any approach the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Approach {
    Proposed,
    Baseline(BaselineKind),
}

impl Approach {
    pub const ALL: [Approach; 5] = [
        Approach::Proposed,
        Approach::Baseline(BaselineKind::Current),
        Approach::Baseline(BaselineKind::AdamicAdar),
        Approach::Baseline(BaselineKind::CommonNeighbors),
        Approach::Baseline(BaselineKind::PlainRwr),
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Approach::Proposed => "proposed",
            Approach::Baseline(k) => k.as_str(),
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BaselineKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        BaselineKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown baseline `{s}`"))
    }
}

impl FromStr for Approach {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "proposed" {
            Ok(Approach::Proposed)
        } else {
            s.parse().map(Approach::Baseline).map_err(|_| {
                format!(
                    "unknown approach `{s}` (expected proposed, current, adamic_adar, common_neighbors or plain_rwr)"
                )
            })
        }
    }
}

/// Ranked list for `u` under one baseline.
///
/// The three pairwise scorers rank every friend-of-friend; plain RWR runs the
/// proposed pipeline (same `L` and `μ`) with unit strengths and ranks by
/// proximity alone.
pub fn baseline_suggest<F: Real>(
    snapshot: &Snapshot,
    u: UserId,
    kind: BaselineKind,
    params: &SuggestionParams<F>,
    current_params: &CurrentApproachParams<F>,
) -> Result<SuggestionList<F>> {
    match kind {
        BaselineKind::PlainRwr => {
            params.validate()?;
            let cands = select_candidates(snapshot, u, params.max_candidates, params.min_mutual)?;
            if cands.is_empty() {
                return Ok(SuggestionList::empty(u));
            }
            let g = build_unit_local_graph(snapshot, u, &cands)?;
            let r = rwr_distribution(&g, u, &params.rwr)?;
            Ok(SuggestionList::from_scores(
                u,
                cands.members.iter().map(|&v| (v, r.get(v))),
            ))
        }
        BaselineKind::CommonNeighbors => {
            let fof = friends_of_friends(snapshot, u)?;
            Ok(SuggestionList::from_scores(
                u,
                fof.into_iter().map(|(v, n)| (v, F::from_count(n))),
            ))
        }
        BaselineKind::AdamicAdar => {
            let fof = friends_of_friends(snapshot, u)?;
            let scored = fof
                .into_iter()
                .map(|(v, _)| adamic_adar(snapshot, u, v).map(|s| (v, s)))
                .collect::<Result<Vec<_>>>()?;
            Ok(SuggestionList::from_scores(u, scored))
        }
        BaselineKind::Current => {
            current_params.validate()?;
            let fof = friends_of_friends(snapshot, u)?;
            let scored = fof
                .into_iter()
                .map(|(v, _)| current_score(snapshot, u, v, current_params).map(|s| (v, s)))
                .collect::<Result<Vec<_>>>()?;
            Ok(SuggestionList::from_scores(u, scored))
        }
    }
}

/// Dispatches to [`suggest`] or [`baseline_suggest`].
pub fn suggest_with<F: Real>(
    snapshot: &Snapshot,
    u: UserId,
    approach: Approach,
    params: &SuggestionParams<F>,
    current_params: &CurrentApproachParams<F>,
) -> Result<SuggestionList<F>> {
    match approach {
        Approach::Proposed => suggest(snapshot, u, params),
        Approach::Baseline(kind) => baseline_suggest(snapshot, u, kind, params, current_params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureWeights;
    use crate::graph::EdgeRecord;

    fn pair_with(shared: &[AttrKind]) -> Snapshot {
        let mut b = Snapshot::builder();
        b.add_edge(UserId(1), UserId(3), 0).unwrap();
        b.add_edge(UserId(2), UserId(3), 0).unwrap();
        for &k in shared {
            b.add_attribute(UserId(1), k, 7);
            b.add_attribute(UserId(2), k, 7);
        }
        // Unshared values never switch a vertex on.
        b.add_attribute(UserId(1), AttrKind::Ip, 100);
        b.add_attribute(UserId(2), AttrKind::Ip, 101);
        b.build()
    }

    // Frozen from an independent nested-loop evaluation over all eight
    // on/off configurations with the default table.
    const TABLE: [([bool; 4], f64); 8] = [
        ([true, false, false, false], 0.0),
        ([true, false, false, true], 19.184),
        ([true, false, true, false], 23.444),
        ([true, false, true, true], 83.22),
        ([true, true, false, false], 25.0),
        ([true, true, false, true], 91.182),
        ([true, true, true, false], 108.012),
        ([true, true, true, true], 256.26),
    ];

    #[test]
    fn legacy_score_table() {
        let p = CurrentApproachParams::<f64>::default();
        for (on, want) in TABLE {
            let got = current_score_from_flags(on, &p);
            assert!((got - want).abs() < 1e-9, "{on:?}: {got} vs {want}");
        }
        let all_on = current_score_from_flags([true; 4], &p);
        for (on, s) in TABLE.iter().take(7) {
            assert!(all_on > *s, "{on:?}");
        }
    }

    #[test]
    fn legacy_score_from_snapshot() {
        let p = CurrentApproachParams::<f64>::default();
        let s = pair_with(&[]);
        assert_eq!(current_score(&s, UserId(1), UserId(2), &p).unwrap(), 0.0);
        let s = pair_with(&[AttrKind::School]);
        assert!((current_score(&s, UserId(1), UserId(2), &p).unwrap() - 25.0).abs() < 1e-12);
        let s = pair_with(&AttrKind::ALL);
        let x = current_score(&s, UserId(2), UserId(1), &p).unwrap();
        assert!((x - 256.26).abs() < 1e-9);
        // Groups play no part in the legacy score.
        let s = pair_with(&[AttrKind::Group]);
        assert_eq!(current_score(&s, UserId(1), UserId(2), &p).unwrap(), 0.0);
    }

    #[test]
    fn default_table_round_trips() {
        let p = CurrentApproachParams::<f64>::default();
        p.validate().unwrap();
        assert_eq!(p.upper(), [2.0, 1.9, 1.6, 1.8, 1.7, 1.4]);
        assert_eq!(p.e[3][1], 1.7);
        let mut bad = p;
        bad.t[2] = 0.9;
        assert!(bad.validate().is_err());
        let mut bad = p;
        bad.e[0][1] = 3.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn approach_names() {
        for a in Approach::ALL {
            assert_eq!(a.as_str().parse::<Approach>().unwrap(), a);
        }
        assert!("jaccard".parse::<Approach>().is_err());
    }

    /// u=1 friends {a=2, b=3}; a friends {u, x=4, y=5}; b friends {u, x}.
    fn hand_graph() -> Snapshot {
        let e = [(1, 2), (1, 3), (2, 4), (2, 5), (3, 4)];
        let recs: Vec<_> = e.iter().map(|&(a, b)| EdgeRecord::new(a, b, 0)).collect();
        Snapshot::from_records(&recs, &[], &[]).unwrap()
    }

    #[test]
    fn common_neighbors_on_hand_graph() {
        let s = hand_graph();
        let p = SuggestionParams::<f64>::default();
        let c = CurrentApproachParams::default();
        let l = baseline_suggest(&s, UserId(1), BaselineKind::CommonNeighbors, &p, &c).unwrap();
        let got: Vec<(u32, f64)> = l.entries.iter().map(|e| (e.candidate.0, e.score)).collect();
        assert_eq!(got, vec![(4, 2.0), (5, 1.0)]);
    }

    #[test]
    fn isolated_user_gets_nothing() {
        let mut b = Snapshot::builder();
        b.add_user(UserId(1));
        b.add_edge(UserId(2), UserId(3), 0).unwrap();
        let s = b.build();
        let p = SuggestionParams::<f64> {
            min_mutual: 1,
            ..Default::default()
        };
        let c = CurrentApproachParams::default();
        for a in Approach::ALL {
            assert!(suggest_with(&s, UserId(1), a, &p, &c).unwrap().is_empty());
        }
    }

    #[test]
    fn plain_rwr_matches_zero_weight_pipeline() {
        let s = hand_graph();
        let p = SuggestionParams::<f64> {
            feature_weights: FeatureWeights::zero(),
            w_direct: 0.0,
            min_mutual: 1,
            ..Default::default()
        };
        let c = CurrentApproachParams::default();
        let plain = baseline_suggest(&s, UserId(1), BaselineKind::PlainRwr, &p, &c).unwrap();
        let proposed = suggest(&s, UserId(1), &p).unwrap();
        assert_eq!(
            plain.candidates().collect::<Vec<_>>(),
            proposed.candidates().collect::<Vec<_>>()
        );
    }
}
