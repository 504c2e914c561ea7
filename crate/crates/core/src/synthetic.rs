//! Synthetic crowds: `n_ex` experts who answer correctly with probability
//! `p_ex` (and otherwise pick a wrong candidate uniformly), and non-experts
//! who answer uniformly at random.
//!
//! Experts are always the first `n_ex` workers; only the returned
//! [`GroundTruth`] says so.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::agreement_counts;
use crate::response::{GroundTruth, ResponseMatrix};
use crate::seeding::{keyed_rng, DOMAIN_TRUTH, DOMAIN_WORKER};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub n_ex: usize,
    pub p_ex: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadSpec(msg));
        if self.n == 0 || self.m == 0 {
            return bad(format!("need n >= 1 and m >= 1, got n = {}, m = {}", self.n, self.m));
        }
        if self.s < 2 {
            return bad(format!("need s >= 2, got {}", self.s));
        }
        if self.n_ex > self.n {
            return bad(format!("n_ex = {} exceeds n = {}", self.n_ex, self.n));
        }
        if !(self.p_ex > 1.0 / self.s as f64 && self.p_ex <= 1.0) {
            return bad(format!("p_ex = {} must lie in (1/s, 1]", self.p_ex));
        }
        Ok(())
    }

    pub fn n_non(&self) -> usize {
        self.n - self.n_ex
    }
}

fn candidate_name(c: usize, s: usize) -> String {
    if s <= 26 {
        char::from(b'A' + c as u8).to_string()
    } else {
        format!("c{}", c + 1)
    }
}

/// Draws one instance. Question truths come from one keyed stream and every
/// worker from its own, so the output depends only on the spec.
pub fn generate(spec: &SyntheticSpec) -> Result<(ResponseMatrix, GroundTruth)> {
    spec.validate()?;
    let SyntheticSpec { n, m, s, n_ex, p_ex, seed } = *spec;

    let mut truth_rng = keyed_rng(seed, &[DOMAIN_TRUTH]);
    let answers: Vec<usize> = (0..m).map(|_| truth_rng.random_range(0..s)).collect();

    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|w| {
            let mut rng = keyed_rng(seed, &[DOMAIN_WORKER, w as u64]);
            answers
                .iter()
                .map(|&a| {
                    if w >= n_ex {
                        rng.random_range(0..s)
                    } else if rng.random::<f64>() < p_ex {
                        a
                    } else {
                        let wrong = rng.random_range(0..s - 1);
                        if wrong >= a {
                            wrong + 1
                        } else {
                            wrong
                        }
                    }
                })
                .collect()
        })
        .collect();

    let names: Vec<String> = (0..s).map(|c| candidate_name(c, s)).collect();
    let matrix = ResponseMatrix::new(
        (1..=n).map(|w| format!("w{w}")).collect(),
        (1..=m).map(|q| format!("q{q}")).collect(),
        vec![names; m],
        rows,
    )?;
    let truth = GroundTruth::new(answers.into_iter().map(Some).collect(), Some((0..n_ex).collect()));
    Ok((matrix, truth))
}

/// Model probability that two distinct workers agree on a question.
pub fn expected_pair_agreement(p_ex: f64, s: usize, both_experts: bool) -> f64 {
    let inv = 1.0 / s as f64;
    if both_experts {
        (p_ex - inv).powi(2) / (1.0 - inv) + inv
    } else {
        inv
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairType {
    ExpertExpert,
    ExpertNonExpert,
    NonExpertNonExpert,
}

/// Empirical agreement frequency of one pair of the given type in an
/// instance drawn from `spec`.
pub fn pair_agreement_rate_check(spec: &SyntheticSpec, pair: PairType) -> Result<f64> {
    let (u, v) = match pair {
        PairType::ExpertExpert if spec.n_ex >= 2 => (0, 1),
        PairType::ExpertNonExpert if spec.n_ex >= 1 && spec.n_non() >= 1 => (0, spec.n_ex),
        PairType::NonExpertNonExpert if spec.n_non() >= 2 => (spec.n_ex, spec.n_ex + 1),
        _ => {
            return Err(Error::BadSpec(format!(
                "spec with n = {}, n_ex = {} has no {pair:?} pair",
                spec.n, spec.n_ex
            )))
        }
    };
    let (matrix, _) = generate(spec)?;
    let tau = agreement_counts(&matrix);
    Ok(tau.get(u, v) as f64 / spec.m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SyntheticSpec {
        SyntheticSpec { n: 6, m: 8, s: 5, n_ex: 3, p_ex: 0.95, seed: 1 }
    }

    #[test]
    fn bad_specs() {
        for bad in [
            SyntheticSpec { n: 0, ..spec() },
            SyntheticSpec { m: 0, ..spec() },
            SyntheticSpec { s: 1, ..spec() },
            SyntheticSpec { n_ex: 7, ..spec() },
            SyntheticSpec { p_ex: 0.2, ..spec() },
            SyntheticSpec { p_ex: 1.01, ..spec() },
        ] {
            assert!(matches!(generate(&bad), Err(Error::BadSpec(_))), "{bad:?}");
        }
    }

    #[test]
    fn shape_and_expert_set() {
        let (mx, truth) = generate(&spec()).unwrap();
        assert_eq!((mx.n(), mx.m(), mx.s(0)), (6, 8, 5));
        assert_eq!(mx.candidates(0), ["A", "B", "C", "D", "E"]);
        assert_eq!(truth.expert_set(), Some(&[0usize, 1, 2][..]));
        assert!(truth.answers().iter().all(Option::is_some));
    }

    #[test]
    fn perfect_experts_copy_the_truth() {
        let (mx, truth) = generate(&SyntheticSpec { p_ex: 1.0, m: 200, ..spec() }).unwrap();
        for w in 0..3 {
            for q in 0..mx.m() {
                assert_eq!(Some(mx.label(w, q)), truth.answer(q));
            }
        }
    }

    #[test]
    fn same_spec_same_instance() {
        let a = generate(&spec()).unwrap();
        let b = generate(&spec()).unwrap();
        assert_eq!(a, b);
        let c = generate(&SyntheticSpec { seed: 2, ..spec() }).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn agreement_formula() {
        assert!((expected_pair_agreement(0.8, 5, true) - 0.65).abs() < 1e-12);
        assert_eq!(expected_pair_agreement(0.8, 5, false), 0.2);
        assert!((expected_pair_agreement(0.2, 5, true) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn missing_pair_type() {
        let s = SyntheticSpec { n: 3, n_ex: 3, ..spec() };
        assert!(pair_agreement_rate_check(&s, PairType::ExpertNonExpert).is_err());
    }
}
