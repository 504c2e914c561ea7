use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::{resolve_subset, vote_winner, TiePolicy};
use crate::error::{Error, Result};
use crate::response::{AggregationResult, QuestionDiagnostics, ResponseMatrix};
use crate::seeding::{keyed_rng, DOMAIN_PERMUTATION};

/// Hyper-question sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperParams {
    /// Questions per hyper question.
    pub k: usize,
    /// Sampling rounds.
    pub r: usize,
    /// Seed for the per-round permutations.
    pub seed: u64,
}

impl Default for HyperParams {
    fn default() -> Self {
        Self { k: 5, r: 100, seed: 0 }
    }
}

/// Tie-break stage of the final per-question vote; rounds use their index.
const FINAL_STAGE: u64 = u64::MAX;

/// Hyper-question majority voting.
///
/// Each round shuffles the questions, cuts the permutation into `m / k`
/// groups of `k` (the remainder sits the round out) and takes a plurality
/// vote over the workers' answer tuples for each group. The winning tuple
/// casts one vote per component question. The final answer of a question is
/// the plurality of its accumulated votes.
pub fn hyper_mv(
    matrix: &ResponseMatrix,
    subset: Option<&[usize]>,
    params: &HyperParams,
    policy: TiePolicy,
) -> Result<AggregationResult> {
    let m = matrix.m();
    if params.k == 0 || params.k > m {
        return Err(Error::BadK { k: params.k, m });
    }
    if params.r == 0 {
        return Err(Error::Domain("hyper-question rounds must be >= 1".into()));
    }
    let workers = resolve_subset(matrix, subset)?;

    let rounds: Vec<Vec<(usize, usize)>> = (0..params.r)
        .into_par_iter()
        .map(|round| decode_round(matrix, &workers, params, &policy, round))
        .collect();

    let mut votes: Vec<Vec<u32>> = (0..m).map(|q| vec![0; matrix.s(q)]).collect();
    for (q, c) in rounds.into_iter().flatten() {
        votes[q][c] += 1;
    }

    let mut estimates = Vec::with_capacity(m);
    let mut diagnostics = Vec::with_capacity(m);
    for (q, counts) in votes.iter().enumerate() {
        let (z, tie) = vote_winner(counts, &policy, FINAL_STAGE, q as u64);
        estimates.push(z);
        diagnostics.push(QuestionDiagnostics {
            tie_occurred: tie,
            top2_depth: None,
        });
    }
    Ok(AggregationResult::new(estimates, diagnostics))
}

/// Decoded `(question, candidate)` votes of one sampling round.
pub(crate) fn decode_round(
    matrix: &ResponseMatrix,
    workers: &[usize],
    params: &HyperParams,
    policy: &TiePolicy,
    round: usize,
) -> Vec<(usize, usize)> {
    let k = params.k;
    let mut order: Vec<usize> = (0..matrix.m()).collect();
    order.shuffle(&mut keyed_rng(params.seed, &[DOMAIN_PERMUTATION, round as u64]));

    let mut decoded = Vec::with_capacity(order.len() / k * k);
    let mut tuples: Vec<Vec<u32>> = Vec::with_capacity(workers.len());
    for group in order.chunks_exact(k) {
        tuples.clear();
        tuples.extend(workers.iter().map(|&w| {
            let row = matrix.row(w);
            group.iter().map(|&q| row[q]).collect::<Vec<u32>>()
        }));
        tuples.sort_unstable();

        // Sorted tuples: distinct answers in lexicographic order with their counts.
        let mut distinct: Vec<(&[u32], u32)> = Vec::new();
        for t in &tuples {
            match distinct.last_mut() {
                Some((prev, count)) if *prev == t.as_slice() => *count += 1,
                _ => distinct.push((t, 1)),
            }
        }
        let counts: Vec<u32> = distinct.iter().map(|&(_, c)| c).collect();
        let (winner, _) = vote_winner(&counts, policy, round as u64, group[0] as u64);
        let tuple = distinct[winner].0;
        decoded.extend(group.iter().zip(tuple).map(|(&q, &c)| (q, c as usize)));
    }
    decoded
}
