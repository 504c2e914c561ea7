mod common;

use expert_core::harness::{
    run_comparison, run_extraction_sweep, run_order_report, run_synthetic_comparison, run_theorem_check, spearman,
    write_comparison_csv, write_order_csv, write_sweep_csv, ComparisonRow, SweepConfig, SweepParam, Theorem,
    TheoremParams,
};
use expert_core::{generate, AggregationConfig, Algorithm, Error, GroundTruth, SyntheticSpec, TiePolicy};

fn sweep_csv(config: &SweepConfig) -> Vec<u8> {
    let mut out = Vec::new();
    write_sweep_csv(config.param, &run_extraction_sweep(config).unwrap(), &mut out).unwrap();
    out
}

#[test]
fn sweeps_are_byte_reproducible() {
    let config = SweepConfig {
        base: SyntheticSpec { n: 20, m: 25, s: 5, n_ex: 4, p_ex: 0.8, seed: 0 },
        param: SweepParam::ExpertProbability,
        grid: SweepConfig::grid_range(0.6, 0.9, 0.1),
        realizations: 10,
        master_seed: 17,
    };
    let a = sweep_csv(&config);
    assert_eq!(a, sweep_csv(&config));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("p_ex,top2_precision,top2_recall,core_precision,core_recall,core_size\n"));
    assert_eq!(text.lines().count(), 5);
    assert!(matches!(
        run_extraction_sweep(&SweepConfig { grid: vec![], ..config }),
        Err(Error::Domain(_))
    ));
}

#[test]
fn comparisons_are_byte_reproducible() {
    let spec = SyntheticSpec { n: 25, m: 20, s: 5, n_ex: 4, p_ex: 0.85, seed: 0 };
    let config = AggregationConfig { tie: TiePolicy::SeededUniform { seed: 0 }, ..Default::default() };
    let table = || {
        let stats = run_synthetic_comparison(&spec, 6, &Algorithm::ALL, &config, 3).unwrap();
        let mut out = Vec::new();
        write_comparison_csv(&Algorithm::ALL, &[ComparisonRow { label: "(0.85, 4)".into(), stats }], &mut out)
            .unwrap();
        out
    };
    assert_eq!(table(), table());
}

#[test]
fn supplied_instances_score_like_synthetic_ones() {
    let (mx, truth) = common::six_worker();
    let config = AggregationConfig::default();
    let stats = run_comparison(&[(mx, truth)], &[Algorithm::ExMv, Algorithm::Mv], &config, 0).unwrap();
    assert_eq!(stats[0].mean(), 1.0);
    assert_eq!(stats[1].mean(), 0.75);
}

#[test]
fn peeling_order_tracks_accuracy() {
    let mut rhos = Vec::new();
    for seed in 0..5 {
        let (mx, truth) = generate(&SyntheticSpec { n: 30, m: 60, s: 5, n_ex: 6, p_ex: 0.95, seed }).unwrap();
        let rows = run_order_report(&mx, &truth, None).unwrap();
        let ranks: Vec<f64> = rows.iter().map(|r| r.rank as f64).collect();
        let acc: Vec<f64> = rows.iter().map(|r| r.accuracy).collect();
        rhos.push(spearman(&ranks, &acc));
        // the experts are peeled last
        let mut top: Vec<usize> = rows[..6].iter().map(|r| r.worker).collect();
        top.sort_unstable();
        assert_eq!(top, [0, 1, 2, 3, 4, 5]);
    }
    assert!(rhos.iter().all(|&r| r < 0.0), "{rhos:?}");

    let (mx, truth) = generate(&SyntheticSpec { n: 5, m: 10, s: 3, n_ex: 2, p_ex: 0.9, seed: 1 }).unwrap();
    let rows = run_order_report(&mx, &truth, None).unwrap();
    let mut out = Vec::new();
    write_order_csv(&mx, &rows, &mut out).unwrap();
    assert!(String::from_utf8(out).unwrap().starts_with("rank,worker,accuracy,in_expert_core,min_degree_at_removal\n"));
    let blind = GroundTruth::new(vec![None; 10], None);
    assert!(matches!(run_order_report(&mx, &blind, None), Err(Error::MissingTruth(_))));
}

#[test]
fn theorem_checks_report_both_ways() {
    let mut params = TheoremParams::default_for(Theorem::T4);
    params.realizations = 1;
    let ok = run_theorem_check(Theorem::T4, &params).unwrap();
    assert_eq!(ok.trials, 1000);
    params.threshold = 0.0;
    let bad = run_theorem_check(Theorem::T4, &params).unwrap();
    assert!(!bad.passed);
    assert_eq!(bad.empirical, ok.empirical);
    assert!(bad.to_string().starts_with("T4 FAIL"));
}
