//! Weighted greedy peeling and the expert core.
//!
//! Peeling repeatedly deletes a vertex of minimum weighted degree from the
//! complete graph. Writing `S_i` for the surviving set of size `i` and `v_i`
//! for the vertex removed from it, the set `S_i` maximizing `d_{S_i}(v_i)` is
//! the k-core with maximum k, and for the agreement graph that set is the
//! expert core. The reverse removal order doubles as a reliability ranking of
//! workers.
//!
//! Degrees are kept incrementally, but every recorded degree is re-summed
//! from scratch in ascending vertex order (see [`induced_degree`]), so traces
//! compare exactly against brute-force recomputation.

use std::io;

use crate::error::{Error, Result};
use crate::graph::{build_graph, format_significant, AgreementGraph, SymMatrix};
use crate::response::ResponseMatrix;

/// Weighted degree of `v` inside `set`, summed over `set` in the order given.
/// `set` is expected sorted ascending; `v` itself is skipped.
pub fn induced_degree(weights: &SymMatrix<f64>, set: &[usize], v: usize) -> f64 {
    let row = weights.row(v);
    set.iter().filter(|&&u| u != v).map(|&u| row[u]).sum()
}

/// Record of one full peeling run.
#[derive(Debug, Clone, PartialEq)]
pub struct PeelingTrace {
    /// `v_n, v_{n-1}, ..., v_2`.
    removal_order: Vec<usize>,
    /// `v_1`, the last vertex standing.
    last: usize,
    /// `d_{S_i}(v_i)` for `i = n, ..., 1` (the final entry is 0).
    min_degrees: Vec<f64>,
    /// `i*`.
    best_size: usize,
}

impl PeelingTrace {
    pub fn n(&self) -> usize {
        self.min_degrees.len()
    }

    /// Removed vertices in removal order, `v_n` first, `v_2` last.
    pub fn removal_order(&self) -> &[usize] {
        &self.removal_order
    }

    /// Workers from most to least reliable: `v_1, v_2, ..., v_n`.
    pub fn reliability_order(&self) -> Vec<usize> {
        std::iter::once(self.last)
            .chain(self.removal_order.iter().rev().copied())
            .collect()
    }

    /// `v_i` for `1 <= i <= n`.
    pub fn vertex(&self, i: usize) -> usize {
        assert!((1..=self.n()).contains(&i));
        if i == 1 {
            self.last
        } else {
            self.removal_order[self.n() - i]
        }
    }

    /// `d_{S_i}(v_i)` for `1 <= i <= n`.
    pub fn min_degree(&self, i: usize) -> f64 {
        assert!((1..=self.n()).contains(&i));
        self.min_degrees[self.n() - i]
    }

    /// Survivor set `S_i`, sorted.
    pub fn survivors(&self, i: usize) -> Vec<usize> {
        assert!((1..=self.n()).contains(&i));
        let mut set: Vec<usize> = (1..=i).map(|j| self.vertex(j)).collect();
        set.sort_unstable();
        set
    }

    /// Size `i*` of the survivor set with the largest recorded min-degree;
    /// among equal maxima the largest set wins.
    pub fn best_size(&self) -> usize {
        self.best_size
    }

    /// The maximal min-degree `d_{S_{i*}}(v_{i*})`.
    pub fn best_min_degree(&self) -> f64 {
        self.min_degree(self.best_size)
    }

    /// `rank,worker,min_degree_at_removal,in_expert_core`, rank 1 = most reliable.
    pub fn write_csv<W: io::Write>(&self, matrix: &ResponseMatrix, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["rank", "worker", "min_degree_at_removal", "in_expert_core"])?;
        for i in 1..=self.n() {
            out.write_record([
                i.to_string(),
                matrix.workers()[self.vertex(i)].clone(),
                format_significant(self.min_degree(i), 12),
                (i <= self.best_size).to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Peels the complete graph given by `weights`.
///
/// Ties for the minimum degree go to the smallest vertex index. Runs in
/// O(n^2): each step scans the live vertices once and updates their degrees.
pub fn peel(weights: &SymMatrix<f64>) -> PeelingTrace {
    let n = weights.n();
    assert!(n >= 1, "cannot peel an empty graph");

    let mut alive: Vec<usize> = (0..n).collect();
    let mut degree: Vec<f64> = (0..n).map(|v| induced_degree(weights, &alive, v)).collect();
    let refresh_every = (n / 2).max(1);

    let mut removal_order = Vec::with_capacity(n - 1);
    let mut min_degrees = Vec::with_capacity(n);
    let mut candidates = Vec::new();

    for step in 0..n - 1 {
        if step > 0 && step % refresh_every == 0 {
            for &v in &alive {
                degree[v] = induced_degree(weights, &alive, v);
            }
        }

        let (lowest, highest) = alive.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| {
            (lo.min(degree[v]), hi.max(degree[v].abs()))
        });
        // Anything this close to the incremental minimum may be the exact one.
        let slack = 1e-9 * (1.0 + highest);
        candidates.clear();
        candidates.extend(alive.iter().copied().filter(|&v| degree[v] <= lowest + slack));

        let mut chosen = (f64::INFINITY, usize::MAX);
        for &v in &candidates {
            let exact = induced_degree(weights, &alive, v);
            degree[v] = exact;
            if exact < chosen.0 || (exact == chosen.0 && v < chosen.1) {
                chosen = (exact, v);
            }
        }
        let (d, v) = chosen;

        removal_order.push(v);
        min_degrees.push(d);
        alive.retain(|&u| u != v);
        let row = weights.row(v);
        for &u in &alive {
            degree[u] -= row[u];
        }
    }
    let last = alive[0];
    min_degrees.push(0.0);

    // min_degrees runs i = n..1, so the first strict maximum is the largest set.
    let mut best = 0;
    for (k, &d) in min_degrees.iter().enumerate() {
        if d > min_degrees[best] {
            best = k;
        }
    }

    PeelingTrace {
        removal_order,
        last,
        min_degrees,
        best_size: n - best,
    }
}

/// The survivor set `S_{i*}`: the k-core with maximum k.
pub fn max_core(trace: &PeelingTrace) -> Vec<usize> {
    trace.survivors(trace.best_size())
}

/// `ln theta(W) = -min_{u in W} sum_{v in W \ u} gamma(u, v)`.
pub fn theta(set: &[usize], weights: &SymMatrix<f64>) -> Result<f64> {
    Ok(-min_induced_degree(set, weights)?)
}

/// `min_{u in W} d_W(u)`, summed in ascending vertex order.
pub fn min_induced_degree(set: &[usize], weights: &SymMatrix<f64>) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(&bad) = set.iter().find(|&&v| v >= weights.n()) {
        return Err(Error::UnknownWorker(format!("#{bad}")));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted
        .iter()
        .map(|&u| induced_degree(weights, &sorted, u))
        .fold(f64::INFINITY, f64::min))
}

/// Everything produced on the way to the expert core.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub graph: AgreementGraph,
    pub trace: PeelingTrace,
    /// Sorted worker indices of the expert core.
    pub core: Vec<usize>,
}

impl Extraction {
    /// The pair left before the last peeling round.
    pub fn top2_pair(&self) -> Vec<usize> {
        self.trace.survivors(2.min(self.trace.n()))
    }
}

/// Builds the agreement graph, peels it and returns the full extraction.
pub fn extract(matrix: &ResponseMatrix, p_override: Option<f64>) -> Result<Extraction> {
    let graph = build_graph(matrix, p_override)?;
    let trace = peel(graph.gamma());
    let core = max_core(&trace);
    Ok(Extraction { graph, trace, core })
}

/// Sorted worker indices of the expert core of `matrix`.
pub fn expert_core(matrix: &ResponseMatrix, p_override: Option<f64>) -> Result<Vec<usize>> {
    Ok(extract(matrix, p_override)?.core)
}
