//! Fits GLAD to the whole crowd and to the expert core and compares the
//! learned abilities of experts and non-experts.

use expert_core::{accuracy, extract, generate, glad_aggregate, glad_fit, GladConfig, SyntheticSpec};

fn main() -> expert_core::Result<()> {
    let spec = SyntheticSpec { n: 60, m: 50, s: 5, n_ex: 6, p_ex: 0.8, seed: 21 };
    let (matrix, truth) = generate(&spec)?;
    let config = GladConfig::default();

    let full = glad_fit(&matrix, None, &config)?;
    let trace = &full.objective_trace;
    println!(
        "GLAD: {} EM iterations, objective {:.3} -> {:.3}, accuracy {:.3}",
        full.iterations,
        trace[0],
        trace[trace.len() - 1],
        accuracy(&glad_aggregate(&full), &truth)?
    );
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    println!(
        "mean alpha: experts {:.3}, non-experts {:.3}",
        mean(&full.alpha[..spec.n_ex]),
        mean(&full.alpha[spec.n_ex..])
    );

    let core = extract(&matrix, None)?.core;
    let ex = glad_fit(&matrix, Some(&core), &config)?;
    println!(
        "Ex-GLAD on {} core workers: accuracy {:.3}",
        core.len(),
        accuracy(&glad_aggregate(&ex), &truth)?
    );
    ex.write_alpha_csv(&matrix, std::io::stdout())?;
    Ok(())
}
