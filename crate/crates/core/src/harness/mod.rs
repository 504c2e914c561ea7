//! Experiment drivers: extraction sweeps, aggregator comparisons, the
//! peeling-order report and the theorem checks.

mod compare;
mod order;
mod stats;
mod sweep;
mod theorem;

pub use compare::{
    instance_config, run_comparison, run_synthetic_comparison, score_instance, write_comparison_csv, ComparisonRow,
};
pub use order::{run_order_report, write_order_csv, OrderRow};
pub use stats::{spearman, RunningStats};
pub use sweep::{run_extraction_sweep, write_sweep_csv, ExtractionMetrics, SweepConfig, SweepParam, SweepPoint};
pub use theorem::{
    run_theorem_check, t2_min_questions, t3_min_workers, t4_epsilon, Bound, Theorem, TheoremOutcome, TheoremParams,
};
