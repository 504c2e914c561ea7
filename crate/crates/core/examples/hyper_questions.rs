//! Hyper-question majority voting for a few hyper-question sizes, against
//! plain and expert-core majority voting.

use expert_core::aggregate::{hyper_mv, majority_vote};
use expert_core::{accuracy, extract, generate, HyperParams, SyntheticSpec, TiePolicy};

fn main() -> expert_core::Result<()> {
    let spec = SyntheticSpec { n: 100, m: 50, s: 5, n_ex: 4, p_ex: 0.9, seed: 5 };
    let (matrix, truth) = generate(&spec)?;
    let tie = TiePolicy::SeededUniform { seed: 1 };
    let core = extract(&matrix, None)?.core;

    println!("MV     {:.3}", accuracy(&majority_vote(&matrix, None, tie)?, &truth)?);
    println!("Ex-MV  {:.3}", accuracy(&majority_vote(&matrix, Some(&core), tie)?, &truth)?);
    for k in [1, 2, 3, 5, 8] {
        let params = HyperParams { k, r: 100, seed: 7 };
        let all = accuracy(&hyper_mv(&matrix, None, &params, tie)?, &truth)?;
        let ex = accuracy(&hyper_mv(&matrix, Some(&core), &params, tie)?, &truth)?;
        println!("k = {k}: Hyper-MV {all:.3}, Ex-Hyper-MV {ex:.3}");
    }
    Ok(())
}
