//! Precision and recall of the Top-2 pair and the expert core as the number
//! of questions grows. Prints CSV; pass a realization count to override 100.

use expert_core::harness::{run_extraction_sweep, write_sweep_csv, SweepConfig, SweepParam};
use expert_core::SyntheticSpec;

fn main() -> expert_core::Result<()> {
    let realizations = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    for (param, grid) in [
        (SweepParam::Questions, SweepConfig::grid_range(5.0, 50.0, 5.0)),
        (SweepParam::ExpertProbability, SweepConfig::grid_range(0.5, 1.0, 0.05)),
    ] {
        let config = SweepConfig {
            base: SyntheticSpec { n: 20, m: 25, s: 5, n_ex: 4, p_ex: 0.8, seed: 0 },
            param,
            grid,
            realizations,
            master_seed: 0,
        };
        write_sweep_csv(param, &run_extraction_sweep(&config)?, std::io::stdout())?;
        println!();
    }
    Ok(())
}
