//! Answer aggregation: majority voting, Top-2, Hyper-MV and GLAD, each
//! optionally restricted to the expert core (the `Ex-` variants).

mod hyper;
mod mv;
mod top2;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

pub use hyper::{hyper_mv, HyperParams};
pub use mv::majority_vote;
pub use top2::top2;

use crate::error::{Error, Result};
use crate::glad::{glad_aggregate, glad_fit, GladConfig};
use crate::peeling::{extract, Extraction};
use crate::response::{AggregationResult, ResponseMatrix};
use crate::seeding::{keyed_rng, DOMAIN_TIE};

/// How to choose among candidates (or hyper-answer tuples) sharing the top score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// First in candidate order (lexicographic for tuples).
    #[default]
    Lexicographic,
    /// Uniform among the tied options, keyed by seed, stage and item.
    SeededUniform { seed: u64 },
}

impl TiePolicy {
    /// Index into `0..tied` of the option to keep.
    ///
    /// Plain majority voting draws with `stage = 0, key = question`; the
    /// first Hyper-MV round uses the same stage, so `k = 1, r = 1` makes the
    /// same choices as majority voting.
    pub fn pick(&self, stage: u64, key: u64, tied: usize) -> usize {
        debug_assert!(tied >= 1);
        match *self {
            _ if tied == 1 => 0,
            TiePolicy::Lexicographic => 0,
            TiePolicy::SeededUniform { seed } => {
                keyed_rng(seed, &[DOMAIN_TIE, stage, key]).random_range(0..tied)
            }
        }
    }
}

/// Winner of a count vector under `policy`; the flag reports a tie.
pub(crate) fn vote_winner(counts: &[u32], policy: &TiePolicy, stage: u64, key: u64) -> (usize, bool) {
    let best = counts.iter().copied().max().unwrap_or(0);
    let tied: Vec<usize> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == best)
        .map(|(i, _)| i)
        .collect();
    (tied[policy.pick(stage, key, tied.len())], tied.len() > 1)
}

/// Checks a worker subset against `matrix` and returns it sorted.
pub(crate) fn resolve_subset(matrix: &ResponseMatrix, subset: Option<&[usize]>) -> Result<Vec<usize>> {
    match subset {
        None => Ok((0..matrix.n()).collect()),
        Some([]) => Err(Error::EmptySubset),
        Some(set) => {
            if let Some(&bad) = set.iter().find(|&&w| w >= matrix.n()) {
                return Err(Error::UnknownWorker(format!("#{bad}")));
            }
            let mut set = set.to_vec();
            set.sort_unstable();
            set.dedup();
            Ok(set)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Top2,
    ExMv,
    ExGlad,
    ExHyperMv,
    Mv,
    Glad,
    HyperMv,
}

impl Algorithm {
    /// Column order of the comparison tables.
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Top2,
        Algorithm::ExMv,
        Algorithm::ExGlad,
        Algorithm::ExHyperMv,
        Algorithm::Mv,
        Algorithm::Glad,
        Algorithm::HyperMv,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Top2 => "top2",
            Algorithm::ExMv => "ex-mv",
            Algorithm::ExGlad => "ex-glad",
            Algorithm::ExHyperMv => "ex-hyper-mv",
            Algorithm::Mv => "mv",
            Algorithm::Glad => "glad",
            Algorithm::HyperMv => "hyper-mv",
        }
    }

    /// Whether the algorithm needs the peeling output.
    pub fn needs_extraction(&self) -> bool {
        matches!(
            self,
            Algorithm::Top2 | Algorithm::ExMv | Algorithm::ExGlad | Algorithm::ExHyperMv
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algorithm `{s}`")))
    }
}

/// Knobs shared by all aggregators.
#[derive(Debug, Clone, Default)]
pub struct AggregationConfig {
    pub tie: TiePolicy,
    pub hyper: HyperParams,
    pub glad: GladConfig,
    pub p_override: Option<f64>,
}

/// Runs one algorithm, extracting the expert core first if it needs it.
pub fn aggregate(
    algorithm: Algorithm,
    matrix: &ResponseMatrix,
    config: &AggregationConfig,
) -> Result<AggregationResult> {
    if algorithm.needs_extraction() {
        let extraction = extract(matrix, config.p_override)?;
        aggregate_with(algorithm, matrix, &extraction, config)
    } else {
        run(algorithm, matrix, None, config)
    }
}

/// Runs one algorithm against a precomputed extraction.
pub fn aggregate_with(
    algorithm: Algorithm,
    matrix: &ResponseMatrix,
    extraction: &Extraction,
    config: &AggregationConfig,
) -> Result<AggregationResult> {
    run(algorithm, matrix, Some(extraction), config)
}

fn run(
    algorithm: Algorithm,
    matrix: &ResponseMatrix,
    extraction: Option<&Extraction>,
    config: &AggregationConfig,
) -> Result<AggregationResult> {
    let core = || {
        extraction
            .map(|e| e.core.as_slice())
            .ok_or_else(|| Error::Domain(format!("{algorithm} needs an expert-core extraction")))
    };
    match algorithm {
        Algorithm::Mv => majority_vote(matrix, None, config.tie),
        Algorithm::ExMv => majority_vote(matrix, Some(core()?), config.tie),
        Algorithm::HyperMv => hyper_mv(matrix, None, &config.hyper, config.tie),
        Algorithm::ExHyperMv => hyper_mv(matrix, Some(core()?), &config.hyper, config.tie),
        Algorithm::Glad => Ok(glad_aggregate(&glad_fit(matrix, None, &config.glad)?)),
        Algorithm::ExGlad => Ok(glad_aggregate(&glad_fit(matrix, Some(core()?), &config.glad)?)),
        Algorithm::Top2 => {
            let trace = &extraction
                .ok_or_else(|| Error::Domain("top2 needs a peeling trace".into()))?
                .trace;
            top2(matrix, trace)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("dawid-skene".parse::<Algorithm>().is_err());
    }

    #[test]
    fn winner_and_ties() {
        let lex = TiePolicy::Lexicographic;
        assert_eq!(vote_winner(&[1, 3, 2], &lex, 0, 0), (1, false));
        assert_eq!(vote_winner(&[2, 0, 2], &lex, 0, 0), (0, true));

        let uniform = TiePolicy::SeededUniform { seed: 11 };
        let mut hits = [0usize; 3];
        for key in 0..3000 {
            let (w, tie) = vote_winner(&[4, 4, 4], &uniform, 0, key);
            assert!(tie);
            hits[w] += 1;
        }
        assert!(hits.iter().all(|&h| h > 850), "{hits:?}");
        // same inputs, same draw
        assert_eq!(
            vote_winner(&[4, 0, 4], &uniform, 3, 9),
            vote_winner(&[4, 0, 4], &uniform, 3, 9)
        );
    }
}
