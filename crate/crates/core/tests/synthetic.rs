use expert_core::synthetic::{expected_pair_agreement, pair_agreement_rate_check, PairType};
use expert_core::{generate, worker_accuracy, SyntheticSpec};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn expert_accuracy_matches_p_ex() {
    for (p_ex, seed) in [(0.7, 1), (0.9, 2)] {
        let spec = SyntheticSpec { n: 30, m: 2500, s: 5, n_ex: 4, p_ex, seed };
        let (mx, truth) = generate(&spec).unwrap();
        let draws = (spec.m * spec.n_ex) as f64;
        let hits: usize = (0..spec.n_ex)
            .map(|w| (0..spec.m).filter(|&q| truth.answer(q) == Some(mx.label(w, q))).count())
            .sum();
        let se = (p_ex * (1.0 - p_ex) / draws).sqrt();
        assert!((hits as f64 / draws - p_ex).abs() < 3.0 * se, "p_ex = {p_ex}: {}", hits as f64 / draws);
    }
}

#[test]
fn expert_mistakes_are_uniform_over_wrong_answers() {
    let spec = SyntheticSpec { n: 10, m: 20_000, s: 5, n_ex: 10, p_ex: 0.6, seed: 3 };
    let (mx, truth) = generate(&spec).unwrap();
    // offset of the chosen candidate from the truth, 1..s-1 for mistakes
    let mut counts = [0f64; 4];
    for w in 0..spec.n {
        for q in 0..spec.m {
            let a = truth.answer(q).unwrap();
            let off = (mx.label(w, q) + spec.s - a) % spec.s;
            if off > 0 {
                counts[off - 1] += 1.0;
            }
        }
    }
    let total: f64 = counts.iter().sum();
    let expected = total / 4.0;
    let stat: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
    let p_value = 1.0 - ChiSquared::new(3.0).unwrap().cdf(stat);
    assert!(p_value > 1e-3, "chi2 = {stat}, p = {p_value}, counts = {counts:?}");
}

#[test]
fn truths_and_non_experts_are_uniform() {
    let spec = SyntheticSpec { n: 5, m: 20_000, s: 4, n_ex: 1, p_ex: 0.9, seed: 4 };
    let (mx, truth) = generate(&spec).unwrap();
    let chi2 = |counts: &[f64]| {
        let e = counts.iter().sum::<f64>() / counts.len() as f64;
        let stat: f64 = counts.iter().map(|c| (c - e).powi(2) / e).sum();
        1.0 - ChiSquared::new(counts.len() as f64 - 1.0).unwrap().cdf(stat)
    };
    let mut t = [0f64; 4];
    for q in 0..spec.m {
        t[truth.answer(q).unwrap()] += 1.0;
    }
    assert!(chi2(&t) > 1e-3);
    let mut nx = [0f64; 4];
    for w in 1..spec.n {
        for q in 0..spec.m {
            nx[mx.label(w, q)] += 1.0;
        }
    }
    assert!(chi2(&nx) > 1e-3);
}

#[test]
fn pair_agreement_rates() {
    let spec = SyntheticSpec { n: 4, m: 100_000, s: 5, n_ex: 2, p_ex: 0.8, seed: 5 };
    let r = pair_agreement_rate_check(&spec, PairType::ExpertExpert).unwrap();
    assert!((expected_pair_agreement(0.8, 5, true) - 0.65).abs() < 1e-12);
    assert!((r - 0.65).abs() < 0.005, "{r}");
    for pair in [PairType::ExpertNonExpert, PairType::NonExpertNonExpert] {
        let r = pair_agreement_rate_check(&spec, pair).unwrap();
        assert!((r - 0.2).abs() < 0.005, "{pair:?}: {r}");
    }
}

#[test]
fn coin_flipping_crowd_scores_one_half() {
    let spec = SyntheticSpec { n: 100, m: 1000, s: 2, n_ex: 0, p_ex: 0.9, seed: 6 };
    let (mx, truth) = generate(&spec).unwrap();
    let mean = (0..100).map(|w| worker_accuracy(&mx, &truth, w).unwrap()).sum::<f64>() / 100.0;
    assert!((mean - 0.5).abs() < 0.01, "{mean}");
}

#[test]
fn perfect_experts_copy_the_truth() {
    let spec = SyntheticSpec { n: 8, m: 50, s: 5, n_ex: 3, p_ex: 1.0, seed: 7 };
    let (mx, truth) = generate(&spec).unwrap();
    for w in 0..3 {
        assert_eq!(worker_accuracy(&mx, &truth, w).unwrap(), 1.0);
    }
    assert_eq!(truth.expert_set().unwrap(), [0, 1, 2]);
}

#[test]
fn identical_specs_give_identical_instances() {
    let spec = SyntheticSpec { n: 12, m: 30, s: 5, n_ex: 3, p_ex: 0.95, seed: 99 };
    assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    assert!(generate(&SyntheticSpec { p_ex: 0.2, ..spec }).is_err());
    assert!(generate(&SyntheticSpec { n_ex: 13, ..spec }).is_err());
}
