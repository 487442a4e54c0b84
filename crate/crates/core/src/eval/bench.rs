//! Cohort × approach benchmark runs and the CSV report.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;

use super::cohort::TestCohort;
use super::metrics::{auc, precision_curve};
use crate::baselines::{suggest_with, Approach, CurrentApproachParams};
use crate::error::Result;
use crate::graph::{Snapshot, UserId};
use crate::scalar::Real;
use crate::suggest::{SuggestionList, SuggestionParams};

/// Precision is reported for k = 1..=PRECISION_DEPTH.
pub const PRECISION_DEPTH: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<F> {
    pub cohort: String,
    pub approach: Approach,
    /// Index `k - 1` holds the mean P@k over evaluated users.
    pub precision_curve: Vec<F>,
    pub auc_per_user: BTreeMap<UserId, F>,
    /// Mean of `auc_per_user`; zero when no user has a defined AUC.
    pub mean_auc: F,
    /// Users whose suggestion list was produced.
    pub users_evaluated: usize,
    /// Evaluated users left out of the AUC mean (no true or no false suggestion).
    pub auc_skipped: usize,
    /// Users whose suggestion list could not be produced.
    pub failed: usize,
}

/// Suggestion lists for every cohort user, in cohort order; failures are
/// logged and returned as `None`.
pub(crate) fn cohort_lists<F: Real>(
    snapshot: &Snapshot,
    cohort: &TestCohort,
    approach: Approach,
    params: &SuggestionParams<F>,
    current_params: &CurrentApproachParams<F>,
) -> Vec<Option<SuggestionList<F>>> {
    cohort
        .users
        .par_iter()
        .map(|&u| match suggest_with(snapshot, u, approach, params, current_params) {
            Ok(list) => Some(list),
            Err(e) => {
                log::warn!("{} / {approach}: skipping user {u}: {e}", cohort.name);
                None
            }
        })
        .collect()
}

/// Evaluates one approach on one cohort.
pub fn evaluate_cohort<F: Real>(
    snapshot: &Snapshot,
    cohort: &TestCohort,
    approach: Approach,
    params: &SuggestionParams<F>,
    current_params: &CurrentApproachParams<F>,
) -> EvalReport<F> {
    let lists = cohort_lists(snapshot, cohort, approach, params, current_params);

    let mut sums = vec![F::zero(); PRECISION_DEPTH];
    let mut auc_per_user = BTreeMap::new();
    let (mut evaluated, mut skipped, mut failed) = (0, 0, 0);
    for (&u, list) in cohort.users.iter().zip(&lists) {
        let Some(list) = list else {
            failed += 1;
            continue;
        };
        evaluated += 1;
        let truth = cohort.truth_of(u);
        for (s, p) in sums.iter_mut().zip(precision_curve(list, truth, PRECISION_DEPTH)) {
            *s = *s + p;
        }
        match auc(list, truth) {
            Ok(a) => {
                auc_per_user.insert(u, a);
            }
            Err(_) => skipped += 1,
        }
    }

    let precision_curve = if evaluated == 0 {
        sums
    } else {
        let n = F::from_count(evaluated);
        sums.into_iter().map(|s| s / n).collect()
    };
    let mean_auc = if auc_per_user.is_empty() {
        F::zero()
    } else {
        auc_per_user.values().copied().sum::<F>() / F::from_count(auc_per_user.len())
    };
    EvalReport {
        cohort: cohort.name.clone(),
        approach,
        precision_curve,
        auc_per_user,
        mean_auc,
        users_evaluated: evaluated,
        auc_skipped: skipped,
        failed,
    }
}

/// One report per (cohort, approach), cohorts outermost. Parameters are
/// validated up front; per-user failures are logged and skipped.
pub fn run_benchmark<F: Real>(
    snapshot: &Snapshot,
    cohorts: &[TestCohort],
    approaches: &[Approach],
    params: &SuggestionParams<F>,
    current_params: &CurrentApproachParams<F>,
) -> Result<Vec<EvalReport<F>>> {
    params.validate()?;
    current_params.validate()?;
    let mut reports = Vec::with_capacity(cohorts.len() * approaches.len());
    for cohort in cohorts {
        for &approach in approaches {
            log::info!("evaluating {approach} on {} ({} users)", cohort.name, cohort.users.len());
            reports.push(evaluate_cohort(snapshot, cohort, approach, params, current_params));
        }
    }
    Ok(reports)
}

/// Writes the precision block (`cohort,approach,k,precision`) followed by a
/// blank line and the summary block (`cohort,approach,mean_auc,users_evaluated`).
pub fn write_report<F: Real, W: Write>(mut w: W, reports: &[EvalReport<F>]) -> io::Result<()> {
    writeln!(w, "cohort,approach,k,precision")?;
    for r in reports {
        for (i, p) in r.precision_curve.iter().enumerate() {
            writeln!(w, "{},{},{},{:.6}", r.cohort, r.approach, i + 1, p.as_f64())?;
        }
    }
    writeln!(w)?;
    writeln!(w, "cohort,approach,mean_auc,users_evaluated")?;
    for r in reports {
        writeln!(
            w,
            "{},{},{:.6},{}",
            r.cohort,
            r.approach,
            r.mean_auc.as_f64(),
            r.users_evaluated
        )?;
    }
    w.flush()
}
