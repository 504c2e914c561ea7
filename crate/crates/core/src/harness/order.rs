use std::io;

use crate::error::Result;
use crate::graph::format_significant;
use crate::peeling::extract;
use crate::response::{worker_accuracy, GroundTruth, ResponseMatrix};

/// One worker's line in the peeling-order report.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderRow {
    /// 1 = last worker standing (most reliable).
    pub rank: usize,
    pub worker: usize,
    pub accuracy: f64,
    pub in_core: bool,
    pub min_degree: f64,
}

/// Workers in peeling reliability order with their accuracy rates and
/// expert-core membership.
pub fn run_order_report(
    matrix: &ResponseMatrix,
    truth: &GroundTruth,
    p_override: Option<f64>,
) -> Result<Vec<OrderRow>> {
    if matrix.n() == 1 {
        return Ok(vec![OrderRow {
            rank: 1,
            worker: 0,
            accuracy: worker_accuracy(matrix, truth, 0)?,
            in_core: true,
            min_degree: 0.0,
        }]);
    }
    let extraction = extract(matrix, p_override)?;
    let trace = &extraction.trace;
    (1..=matrix.n())
        .map(|rank| {
            let worker = trace.vertex(rank);
            Ok(OrderRow {
                rank,
                worker,
                accuracy: worker_accuracy(matrix, truth, worker)?,
                in_core: rank <= trace.best_size(),
                min_degree: trace.min_degree(rank),
            })
        })
        .collect()
}

pub fn write_order_csv<W: io::Write>(matrix: &ResponseMatrix, rows: &[OrderRow], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["rank", "worker", "accuracy", "in_expert_core", "min_degree_at_removal"])?;
    for row in rows {
        out.write_record([
            row.rank.to_string(),
            matrix.workers()[row.worker].clone(),
            format!("{:.6}", row.accuracy),
            row.in_core.to_string(),
            format_significant(row.min_degree, 12),
        ])?;
    }
    out.flush()?;
    Ok(())
}
