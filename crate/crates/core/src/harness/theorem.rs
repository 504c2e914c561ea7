//! Monte-Carlo checks of the three guarantees behind expert-core voting:
//!
//! * `T2`: with enough questions the expert core holds no non-expert.
//! * `T3`: majority voting over enough experts is almost always right.
//! * `T4`: majority voting drowned in non-experts is barely better than a coin.
//!
//! The analytic sample-size bounds are far too conservative to instantiate,
//! so each check runs a desk-scale regime and compares an empirical
//! frequency against a fixed threshold.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::compare::pooled_mv_accuracy;
use crate::error::{Error, Result};
use crate::peeling::expert_core;
use crate::seeding::realization_seed;
use crate::synthetic::{generate, SyntheticSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    T2,
    T3,
    T4,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::T4 => "T4",
        })
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T2" => Ok(Theorem::T2),
            "T3" => Ok(Theorem::T3),
            "T4" => Ok(Theorem::T4),
            _ => Err(Error::Parse(format!("unknown theorem `{s}` (expected T2, T3 or T4)"))),
        }
    }
}

/// Direction of the empirical bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtLeast,
    AtMost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremParams {
    /// Instance shape; the seed is ignored.
    pub spec: SyntheticSpec,
    pub realizations: usize,
    pub master_seed: u64,
    pub threshold: f64,
}

impl TheoremParams {
    /// The documented desk-scale regime of each check.
    pub fn default_for(which: Theorem) -> Self {
        match which {
            Theorem::T2 => Self {
                spec: SyntheticSpec { n: 20, m: 200, s: 5, n_ex: 4, p_ex: 0.9, seed: 0 },
                realizations: 200,
                master_seed: 2002,
                threshold: 0.95,
            },
            Theorem::T3 => Self {
                spec: SyntheticSpec { n: 200, m: 100, s: 5, n_ex: 200, p_ex: 0.8, seed: 0 },
                realizations: 20,
                master_seed: 3003,
                threshold: 0.99,
            },
            Theorem::T4 => Self {
                spec: SyntheticSpec { n: 1104, m: 1000, s: 2, n_ex: 4, p_ex: 1.0, seed: 0 },
                realizations: 10,
                master_seed: 4004,
                threshold: 0.57,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremOutcome {
    pub theorem: Theorem,
    pub empirical: f64,
    pub bound: Bound,
    pub threshold: f64,
    /// Number of trials the frequency is over (instances or questions).
    pub trials: usize,
    pub passed: bool,
}

impl fmt::Display for TheoremOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::AtLeast => ">=",
            Bound::AtMost => "<=",
        };
        write!(
            f,
            "{} {}: empirical {:.4} {op} {:.4} over {} trials",
            self.theorem,
            if self.passed { "PASS" } else { "FAIL" },
            self.empirical,
            self.threshold,
            self.trials
        )
    }
}

/// Smallest `m` for which the expert-core guarantee applies at failure
/// probability `eps`.
pub fn t2_min_questions(n: usize, s: usize, p_ex: f64, eps: f64) -> f64 {
    let n = n as f64;
    2.0 * n.powi(4) * (n * n / eps).ln() / (p_ex - 1.0 / s as f64).powi(4)
}

/// Smallest all-expert crowd for which majority voting errs with probability
/// at most `eps`.
pub fn t3_min_workers(s: usize, p_ex: f64, eps: f64) -> f64 {
    2.0 * (2.0 * s as f64 / eps).ln() / (p_ex - 1.0 / s as f64).powi(2)
}

/// The `eps` of the non-expert flooding bound for given crowd sizes.
pub fn t4_epsilon(n_ex: usize, n_non: usize) -> f64 {
    n_ex as f64 / (2.0 * std::f64::consts::PI * n_non as f64).sqrt()
}

pub fn run_theorem_check(which: Theorem, params: &TheoremParams) -> Result<TheoremOutcome> {
    params.spec.validate()?;
    if params.realizations == 0 {
        return Err(Error::Domain("theorem check needs >= 1 realization".into()));
    }
    let (empirical, trials, bound) = match which {
        Theorem::T2 => {
            if params.spec.n_ex < 2 {
                return Err(Error::BadSpec("T2 needs at least two experts".into()));
            }
            let contained = (0..params.realizations)
                .into_par_iter()
                .map(|r| {
                    let seed = realization_seed(params.master_seed, 0, r as u64);
                    let (matrix, truth) = generate(&SyntheticSpec { seed, ..params.spec })?;
                    let experts = truth.expert_set().unwrap_or(&[]);
                    let core = expert_core(&matrix, None)?;
                    Ok(core.iter().all(|w| experts.binary_search(w).is_ok()))
                })
                .collect::<Result<Vec<bool>>>()?;
            let hits = contained.iter().filter(|&&c| c).count();
            (hits as f64 / params.realizations as f64, params.realizations, Bound::AtLeast)
        }
        Theorem::T3 | Theorem::T4 => {
            if which == Theorem::T3 && params.spec.n_ex != params.spec.n {
                return Err(Error::BadSpec("T3 needs an all-expert crowd".into()));
            }
            let (correct, total) = pooled_mv_accuracy(&params.spec, params.realizations, params.master_seed)?;
            let bound = if which == Theorem::T3 { Bound::AtLeast } else { Bound::AtMost };
            (correct as f64 / total as f64, total, bound)
        }
    };
    let passed = match bound {
        Bound::AtLeast => empirical >= params.threshold,
        Bound::AtMost => empirical <= params.threshold,
    };
    Ok(TheoremOutcome {
        theorem: which,
        empirical,
        bound,
        threshold: params.threshold,
        trials,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plug_in_bounds() {
        // eps = 0.1, s = 5, p_ex = 0.8: 2 ln(100) / 0.36 ≈ 25.6
        let n = t3_min_workers(5, 0.8, 0.1);
        assert!((n - 2.0 * 100f64.ln() / 0.36).abs() < 1e-12);
        assert!(n > 25.0 && n < 26.0);
        assert!(t4_epsilon(4, 1100) < 0.05);
        // with n_ex = 4, eps = 0.05 needs n_non >= 16 / (2 pi 0.0025) ≈ 1018.6
        assert!((4.0f64.powi(2) / (2.0 * std::f64::consts::PI * 0.0025) - 1018.592).abs() < 1e-3);
        // 2 * 20^4 * ln(8000) / 0.7^4 ≈ 1.2e7
        assert!((t2_min_questions(20, 5, 0.9, 0.05) / 1.1977e7 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn parse() {
        assert_eq!("t3".parse::<Theorem>().unwrap(), Theorem::T3);
        assert!("T5".parse::<Theorem>().is_err());
    }

    #[test]
    fn t3_rejects_non_experts() {
        let mut p = TheoremParams::default_for(Theorem::T3);
        p.spec.n_ex = 10;
        assert!(run_theorem_check(Theorem::T3, &p).is_err());
    }
}
