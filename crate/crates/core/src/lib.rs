//! Friend suggestion for social graphs.
//!
//! The proposed pipeline scores each friend-of-friend candidate by combining
//! a direct affinity (a weighted log-sum of mutual friends, schools, groups,
//! IPs and interactions) with the proximity given by a random walk with
//! restart on the target's local graph. Four baselines and an evaluation
//! harness (precision at k, rank-sum AUC, weight sweep) ship alongside, plus a
//! planted-partition generator for synthetic data.
//!
//! Scoring code is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar for the common case.

pub mod baselines;
pub mod candidates;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod graph;
pub mod rwr;
pub mod scalar;
pub mod suggest;
pub mod synth;

pub use baselines::{
    baseline_suggest, current_score, suggest_with, Approach, BaselineKind, CurrentApproachParams,
};
pub use candidates::{select_candidates, CandidateSet};
pub use error::{Error, Result};
pub use features::{adamic_adar, affinity, feature_vector, FeatureVector, FeatureWeights};
pub use graph::{
    apply_user_filter, load_snapshot, temporal_split, AttrKind, EdgeRecord, Snapshot, Timestamp,
    UserId,
};
pub use rwr::{build_local_graph, rwr_distribution, LocalGraph, RwrDistribution, RwrParams};
pub use scalar::Real;
pub use suggest::{score_candidate, suggest, Suggestion, SuggestionList, SuggestionParams};

pub type Weights64 = FeatureWeights<f64>;
pub type Weights32 = FeatureWeights<f32>;
pub type Params64 = SuggestionParams<f64>;
pub type Params32 = SuggestionParams<f32>;
pub type CurrentParams64 = CurrentApproachParams<f64>;
pub type CurrentParams32 = CurrentApproachParams<f32>;
pub type Suggestions64 = SuggestionList<f64>;
pub type Suggestions32 = SuggestionList<f32>;
pub type LocalGraph64 = LocalGraph<f64>;
pub type Report64 = eval::EvalReport<f64>;
