use super::{resolve_subset, vote_winner, TiePolicy};
use crate::error::Result;
use crate::response::{AggregationResult, QuestionDiagnostics, ResponseMatrix};

/// Per-question plurality vote among `subset` (all workers when `None`).
///
/// With the expert core as `subset` this is Ex-MV.
pub fn majority_vote(
    matrix: &ResponseMatrix,
    subset: Option<&[usize]>,
    policy: TiePolicy,
) -> Result<AggregationResult> {
    let workers = resolve_subset(matrix, subset)?;
    let mut estimates = Vec::with_capacity(matrix.m());
    let mut diagnostics = Vec::with_capacity(matrix.m());
    let mut counts = Vec::new();
    for q in 0..matrix.m() {
        counts.clear();
        counts.resize(matrix.s(q), 0u32);
        for &w in &workers {
            counts[matrix.label(w, q)] += 1;
        }
        let (z, tie) = vote_winner(&counts, &policy, 0, q as u64);
        estimates.push(z);
        diagnostics.push(QuestionDiagnostics {
            tie_occurred: tie,
            top2_depth: None,
        });
    }
    Ok(AggregationResult::new(estimates, diagnostics))
}
