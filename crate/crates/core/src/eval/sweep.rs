//! Grid search over the friends/schools/groups feature weights.

use std::io::{self, Write};

use rayon::prelude::*;

use super::bench::cohort_lists;
use super::cohort::TestCohort;
use super::metrics::precision_at_k;
use crate::baselines::{Approach, CurrentApproachParams};
use crate::error::{Error, Result};
use crate::features::FeatureWeights;
use crate::graph::Snapshot;
use crate::scalar::Real;
use crate::suggest::SuggestionParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<F> {
    /// Friends, schools, groups.
    pub weights: [F; 3],
    pub mean_p10: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<F> {
    pub best: FeatureWeights<F>,
    pub best_row: SweepRow<F>,
    pub rows: Vec<SweepRow<F>>,
}

/// Integer grid points `(a, b, c)` with `a + b + c = 1/step` and the
/// mutual-friends component strictly greatest, in lexicographic order.
pub fn weight_grid(step: f64) -> Result<Vec<[usize; 3]>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParams(format!("sweep step must be positive, got {step}")));
    }
    let n = (1.0 / step).round();
    if n < 1.0 || (n * step - 1.0).abs() > 1e-9 {
        return Err(Error::EmptyGrid(step));
    }
    let n = n as usize;
    let mut grid = Vec::new();
    for a in 0..=n {
        for b in 0..=n - a {
            let c = n - a - b;
            if a > b && a > c {
                grid.push([a, b, c]);
            }
        }
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid(step));
    }
    Ok(grid)
}

/// Mean P@10 of the proposed approach on `cohort` for every grid point.
///
/// Weight triples are points of the simplex; the IP and interaction weights
/// are taken from `base`. Ties for the best score go to the lexicographically
/// smallest triple.
pub fn sweep_weights<F: Real>(
    snapshot: &Snapshot,
    cohort: &TestCohort,
    step: f64,
    base: &SuggestionParams<F>,
) -> Result<SweepResult<F>> {
    base.validate()?;
    let grid = weight_grid(step)?;
    let n = grid[0].iter().sum::<usize>() as f64;
    let current = CurrentApproachParams::default();

    let rows: Vec<SweepRow<F>> = grid
        .par_iter()
        .map(|units| {
            let weights = units.map(|x| F::lit(x as f64 / n));
            let mut params = *base;
            params.feature_weights.w[..3].copy_from_slice(&weights);
            let lists = cohort_lists(snapshot, cohort, Approach::Proposed, &params, &current);
            let (mut total, mut count) = (F::zero(), 0usize);
            for (u, list) in cohort.users.iter().zip(&lists) {
                if let Some(list) = list {
                    total = total + precision_at_k(list, cohort.truth_of(*u), 10);
                    count += 1;
                }
            }
            let mean_p10 = if count == 0 { F::zero() } else { total / F::from_count(count) };
            SweepRow { weights, mean_p10 }
        })
        .collect();

    let mut best_row = rows[0];
    for row in &rows[1..] {
        if row.mean_p10 > best_row.mean_p10 {
            best_row = *row;
        }
    }
    let mut best = base.feature_weights;
    best.w[..3].copy_from_slice(&best_row.weights);
    Ok(SweepResult { best, best_row, rows })
}

/// `w_friends,w_schools,w_groups,mean_p10` rows.
pub fn write_sweep_table<F: Real, W: Write>(mut w: W, rows: &[SweepRow<F>]) -> io::Result<()> {
    writeln!(w, "w_friends,w_schools,w_groups,mean_p10")?;
    for r in rows {
        writeln!(
            w,
            "{:.2},{:.2},{:.2},{:.6}",
            r.weights[0].as_f64(),
            r.weights[1].as_f64(),
            r.weights[2].as_f64(),
            r.mean_p10.as_f64()
        )?;
    }
    w.flush()
}
