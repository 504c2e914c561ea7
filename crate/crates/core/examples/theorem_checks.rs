//! Monte-Carlo checks of the expert-core and majority-voting guarantees,
//! alongside the sample sizes the analytic bounds would ask for.

use expert_core::harness::{
    run_theorem_check, t2_min_questions, t3_min_workers, t4_epsilon, Theorem, TheoremParams,
};

fn main() -> expert_core::Result<()> {
    println!("bound for the expert core at n = 20, s = 5, p_ex = 0.9, eps = 0.05: m >= {:.3e}", t2_min_questions(20, 5, 0.9, 0.05));
    println!("bound for all-expert MV at s = 5, p_ex = 0.8, eps = 0.1: n >= {:.1}", t3_min_workers(5, 0.8, 0.1));
    println!("flooding eps for 4 experts among 1100 non-experts: {:.4}", t4_epsilon(4, 1100));
    for t in [Theorem::T2, Theorem::T3, Theorem::T4] {
        println!("{}", run_theorem_check(t, &TheoremParams::default_for(t))?);
    }
    Ok(())
}
