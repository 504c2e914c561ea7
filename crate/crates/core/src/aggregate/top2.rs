use crate::error::{Error, Result};
use crate::peeling::PeelingTrace;
use crate::response::{AggregationResult, QuestionDiagnostics, ResponseMatrix};

/// Top-2 aggregation.
///
/// Walks the peeling reliability order (`S_2, S_3, ..., S_n`) and adopts the
/// first answer that two workers of the current survivor set agree on. Each
/// step adds one worker and so raises one count by one, which makes the first
/// count of 2 unique. If no two workers ever agree, the answer of the last
/// survivor `S_1` is used.
pub fn top2(matrix: &ResponseMatrix, trace: &PeelingTrace) -> Result<AggregationResult> {
    let n = matrix.n();
    if n < 2 {
        return Err(Error::TooFewWorkers(n));
    }
    if trace.n() != n {
        return Err(Error::Domain(format!(
            "peeling trace covers {} workers, matrix has {n}",
            trace.n()
        )));
    }
    let order = trace.reliability_order();

    let mut estimates = Vec::with_capacity(matrix.m());
    let mut diagnostics = Vec::with_capacity(matrix.m());
    let mut counts = Vec::new();
    for q in 0..matrix.m() {
        counts.clear();
        counts.resize(matrix.s(q), 0u32);
        let mut hit = None;
        for (depth, &w) in order.iter().enumerate().map(|(i, w)| (i + 1, w)) {
            let c = matrix.label(w, q);
            counts[c] += 1;
            if counts[c] == 2 {
                hit = Some((c, depth));
                break;
            }
        }
        let (z, depth) = match hit {
            Some((c, depth)) => (c, Some(depth)),
            None => (matrix.label(order[0], q), None),
        };
        estimates.push(z);
        diagnostics.push(QuestionDiagnostics {
            tie_occurred: false,
            top2_depth: depth,
        });
    }
    Ok(AggregationResult::new(estimates, diagnostics))
}
