//! Precision at k and rank-sum AUC for a single suggestion list.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::UserId;
use crate::scalar::Real;
use crate::suggest::SuggestionList;

/// Why a list has no defined AUC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum AucSkip {
    #[error("empty suggestion list")]
    EmptyList,
    #[error("no true suggestion in the list")]
    NoTrue,
    #[error("no false suggestion in the list")]
    NoFalse,
}

/// True suggestions among the first `k` entries, divided by `k` even when
/// the list is shorter. `k = 0` yields 0.
pub fn precision_at_k<F: Real>(list: &SuggestionList<F>, truth: &BTreeSet<UserId>, k: usize) -> F {
    if k == 0 {
        return F::zero();
    }
    let hits = list
        .candidates()
        .take(k)
        .filter(|c| truth.contains(c))
        .count();
    F::from_count(hits) / F::from_count(k)
}

/// `[P@1, ..., P@depth]` in one pass.
pub fn precision_curve<F: Real>(
    list: &SuggestionList<F>,
    truth: &BTreeSet<UserId>,
    depth: usize,
) -> Vec<F> {
    let mut hits = 0usize;
    let mut candidates = list.candidates();
    (1..=depth)
        .map(|k| {
            if let Some(c) = candidates.next() {
                if truth.contains(&c) {
                    hits += 1;
                }
            }
            F::from_count(hits) / F::from_count(k)
        })
        .collect()
}

/// `(S0 − n0(n0 + 1)/2) / (n0 · n1)` where `S0` sums the ranks of the true
/// suggestions, ranks ascend with score (lowest score has rank 1), and tied
/// scores share the average of their rank span.
pub fn auc<F: Real>(list: &SuggestionList<F>, truth: &BTreeSet<UserId>) -> Result<F, AucSkip> {
    if list.is_empty() {
        return Err(AucSkip::EmptyList);
    }
    let mut scored: Vec<(F, bool)> = list
        .entries
        .iter()
        .map(|e| (e.score, truth.contains(&e.candidate)))
        .collect();
    let n_true = scored.iter().filter(|(_, t)| *t).count();
    let n_false = scored.len() - n_true;
    if n_true == 0 {
        return Err(AucSkip::NoTrue);
    }
    if n_false == 0 {
        return Err(AucSkip::NoFalse);
    }
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

    let two = F::one() + F::one();
    let mut rank_sum = F::zero();
    let mut start = 0;
    while start < scored.len() {
        let mut end = start + 1;
        while end < scored.len() && scored[end].0 == scored[start].0 {
            end += 1;
        }
        // Positions start..end hold ranks start+1 ..= end.
        let avg_rank = F::from_count(start + 1 + end) / two;
        let trues = scored[start..end].iter().filter(|(_, t)| *t).count();
        rank_sum = rank_sum + avg_rank * F::from_count(trues);
        start = end;
    }
    let n0 = F::from_count(n_true);
    let n1 = F::from_count(n_false);
    Ok((rank_sum - n0 * (n0 + F::one()) / two) / (n0 * n1))
}
