//! Accuracy of all seven aggregators on synthetic crowds of 100 workers and
//! 50 questions. Usage: `compare_aggregators [realizations] [p_ex,n_ex ...]`.

use expert_core::harness::{run_synthetic_comparison, write_comparison_csv, ComparisonRow};
use expert_core::{AggregationConfig, Algorithm, SyntheticSpec, TiePolicy};

fn main() -> expert_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let realizations = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let mut settings: Vec<(f64, usize)> = args
        .filter_map(|a| {
            let (p, n) = a.split_once(',')?;
            Some((p.parse().ok()?, n.parse().ok()?))
        })
        .collect();
    if settings.is_empty() {
        settings = vec![(0.7, 2), (0.8, 4), (0.9, 6)];
    }

    let config = AggregationConfig { tie: TiePolicy::SeededUniform { seed: 0 }, ..Default::default() };
    let rows = settings
        .iter()
        .map(|&(p_ex, n_ex)| {
            let spec = SyntheticSpec { n: 100, m: 50, s: 5, n_ex, p_ex, seed: 0 };
            Ok(ComparisonRow {
                label: format!("({p_ex}, {n_ex})"),
                stats: run_synthetic_comparison(&spec, realizations, &Algorithm::ALL, &config, 0)?,
            })
        })
        .collect::<expert_core::Result<Vec<_>>>()?;
    write_comparison_csv(&Algorithm::ALL, &rows, std::io::stdout())
}
