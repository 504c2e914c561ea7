use std::io;

use rayon::prelude::*;

use super::stats::RunningStats;
use crate::aggregate::{aggregate_with, majority_vote, Algorithm, AggregationConfig, TiePolicy};
use crate::error::Result;
use crate::glad::GladInit;
use crate::peeling::{extract, Extraction};
use crate::response::{accuracy, GroundTruth, ResponseMatrix};
use crate::seeding::{derive_seed, hash_path, realization_seed};
use crate::synthetic::{generate, SyntheticSpec};

/// Re-keys every seeded component of `base` to one instance.
pub fn instance_config(base: &AggregationConfig, instance_seed: u64) -> AggregationConfig {
    let mut config = base.clone();
    if let TiePolicy::SeededUniform { .. } = base.tie {
        config.tie = TiePolicy::SeededUniform {
            seed: derive_seed(instance_seed, &[1]),
        };
    }
    config.hyper.seed = derive_seed(instance_seed, &[2]);
    if let GladInit::Sampled { .. } = base.glad.init {
        config.glad.init = GladInit::Sampled {
            seed: derive_seed(instance_seed, &[3]),
        };
    }
    config
}

/// Accuracy of each algorithm on one instance, in `algorithms` order.
pub fn score_instance(
    matrix: &ResponseMatrix,
    truth: &GroundTruth,
    algorithms: &[Algorithm],
    config: &AggregationConfig,
) -> Result<Vec<f64>> {
    let extraction: Option<Extraction> = if algorithms.iter().any(Algorithm::needs_extraction) {
        Some(extract(matrix, config.p_override)?)
    } else {
        None
    };
    algorithms
        .iter()
        .map(|&alg| {
            let result = match &extraction {
                Some(e) => aggregate_with(alg, matrix, e, config)?,
                // only non-extraction algorithms get here
                None => crate::aggregate::aggregate(alg, matrix, config)?,
            };
            accuracy(&result, truth)
        })
        .collect()
}

fn reduce(per_instance: Vec<Vec<f64>>, algorithms: usize) -> Vec<RunningStats> {
    let mut stats = vec![RunningStats::new(); algorithms];
    for scores in per_instance {
        for (s, x) in stats.iter_mut().zip(scores) {
            s.push(x);
        }
    }
    stats
}

/// Mean and standard deviation of accuracy per algorithm over supplied
/// instances. Instance `i` gets its tie and sampling seeds from
/// `(master_seed, i)`.
pub fn run_comparison(
    instances: &[(ResponseMatrix, GroundTruth)],
    algorithms: &[Algorithm],
    config: &AggregationConfig,
    master_seed: u64,
) -> Result<Vec<RunningStats>> {
    let per_instance = instances
        .par_iter()
        .enumerate()
        .map(|(i, (matrix, truth))| {
            let cfg = instance_config(config, derive_seed(master_seed, &[i as u64]));
            score_instance(matrix, truth, algorithms, &cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce(per_instance, algorithms.len()))
}

/// Same as [`run_comparison`] over `realizations` freshly generated
/// instances of `spec` (its own seed is ignored).
pub fn run_synthetic_comparison(
    spec: &SyntheticSpec,
    realizations: usize,
    algorithms: &[Algorithm],
    config: &AggregationConfig,
    master_seed: u64,
) -> Result<Vec<RunningStats>> {
    let point = hash_path(&[
        spec.n as u64,
        spec.m as u64,
        spec.s as u64,
        spec.n_ex as u64,
        spec.p_ex.to_bits(),
    ]);
    let per_instance = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let seed = realization_seed(master_seed, point, r as u64);
            let (matrix, truth) = generate(&SyntheticSpec { seed, ..*spec })?;
            score_instance(&matrix, &truth, algorithms, &instance_config(config, seed))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce(per_instance, algorithms.len()))
}

/// Plain majority-vote accuracy per question, pooled over realizations.
pub(crate) fn pooled_mv_accuracy(
    spec: &SyntheticSpec,
    realizations: usize,
    master_seed: u64,
) -> Result<(usize, usize)> {
    let counts = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let seed = realization_seed(master_seed, 0, r as u64);
            let (matrix, truth) = generate(&SyntheticSpec { seed, ..*spec })?;
            let tie = TiePolicy::SeededUniform { seed: derive_seed(seed, &[1]) };
            let result = majority_vote(&matrix, None, tie)?;
            let correct = result
                .estimates
                .iter()
                .enumerate()
                .filter(|&(q, &z)| truth.answer(q) == Some(z))
                .count();
            Ok((correct, matrix.m()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(counts.into_iter().fold((0, 0), |(c, t), (c2, t2)| (c + c2, t + t2)))
}

/// One labelled row of a comparison table.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub label: String,
    pub stats: Vec<RunningStats>,
}

/// `setting,<alg>_mean,<alg>_std,...` with one row per setting.
pub fn write_comparison_csv<W: io::Write>(
    algorithms: &[Algorithm],
    rows: &[ComparisonRow],
    writer: W,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let mut header = vec!["setting".to_string()];
    for a in algorithms {
        header.push(format!("{a}_mean"));
        header.push(format!("{a}_std"));
    }
    out.write_record(&header)?;
    for row in rows {
        let mut record = vec![row.label.clone()];
        for s in &row.stats {
            record.push(format!("{:.3}", s.mean()));
            record.push(format!("{:.3}", s.std()));
        }
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_experts_everywhere() {
        let spec = SyntheticSpec { n: 6, m: 20, s: 5, n_ex: 6, p_ex: 1.0, seed: 0 };
        let config = AggregationConfig {
            tie: TiePolicy::SeededUniform { seed: 0 },
            ..Default::default()
        };
        let stats = run_synthetic_comparison(&spec, 3, &Algorithm::ALL, &config, 9).unwrap();
        for (alg, s) in Algorithm::ALL.iter().zip(&stats) {
            assert_eq!(s.mean(), 1.0, "{alg}");
            assert_eq!(s.count(), 3);
        }
    }

    #[test]
    fn supplied_instances_are_reproducible() {
        let instances: Vec<_> = (0..4)
            .map(|seed| generate(&SyntheticSpec { n: 12, m: 15, s: 4, n_ex: 3, p_ex: 0.8, seed }).unwrap())
            .collect();
        let config = AggregationConfig {
            tie: TiePolicy::SeededUniform { seed: 0 },
            hyper: crate::aggregate::HyperParams { k: 3, r: 10, seed: 0 },
            ..Default::default()
        };
        let algs = [Algorithm::Mv, Algorithm::Top2, Algorithm::HyperMv];
        let a = run_comparison(&instances, &algs, &config, 5).unwrap();
        let b = run_comparison(&instances, &algs, &config, 5).unwrap();
        assert_eq!(a, b);

        let mut buf = Vec::new();
        write_comparison_csv(&algs, &[ComparisonRow { label: "x".into(), stats: a }], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("setting,mv_mean,mv_std,top2_mean,top2_std,hyper-mv_mean,hyper-mv_std\n"));
    }
}
