//! Workers listed in peeling order next to their true accuracy rates.

use expert_core::harness::{run_order_report, spearman, write_order_csv};
use expert_core::{generate, SyntheticSpec};

fn main() -> expert_core::Result<()> {
    let spec = SyntheticSpec { n: 40, m: 50, s: 5, n_ex: 6, p_ex: 0.85, seed: 11 };
    let (matrix, truth) = generate(&spec)?;
    let rows = run_order_report(&matrix, &truth, None)?;
    write_order_csv(&matrix, &rows, std::io::stdout())?;

    let ranks: Vec<f64> = rows.iter().map(|r| r.rank as f64).collect();
    let accuracy: Vec<f64> = rows.iter().map(|r| r.accuracy).collect();
    eprintln!("rank vs accuracy spearman: {:.3}", spearman(&ranks, &accuracy));
    Ok(())
}
