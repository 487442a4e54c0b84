//! Evaluation protocol: cohorts, ranking metrics, benchmark runs and the
//! feature-weight sweep.

mod bench;
mod cohort;
mod metrics;
mod sweep;

pub use bench::{evaluate_cohort, run_benchmark, write_report, EvalReport, PRECISION_DEPTH};
pub use cohort::{build_test_cohorts, truth_sets, CohortSpec, TestCohort};
pub use metrics::{auc, precision_at_k, precision_curve, AucSkip};
pub use sweep::{sweep_weights, weight_grid, write_sweep_table, SweepResult, SweepRow};
