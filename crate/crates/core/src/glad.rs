//! Multi-class GLAD: EM over worker ability `alpha_w` and question easiness
//! `beta_q > 0`.
//!
//! A worker answers correctly with probability `sigmoid(alpha_w * beta_q)`
//! and otherwise picks one of the `s_q - 1` wrong candidates uniformly. The
//! class prior is uniform. `alpha` and `beta` carry Gaussian priors centred at
//! `prior_mean`; `beta` is optimized through `log_beta` to stay positive. The
//! M-step is a fixed number of gradient-ascent steps with step halving, so
//! each accepted step raises the expected complete-data log-posterior and the
//! MAP objective never decreases.

use std::io;

use rand_distr::{Distribution, Normal};

use crate::aggregate::resolve_subset;
use crate::binomial::log_sum_exp;
use crate::error::{Error, Result};
use crate::graph::format_significant;
use crate::response::{AggregationResult, QuestionDiagnostics, ResponseMatrix};
use crate::seeding::{keyed_rng, DOMAIN_GLAD};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GladInit {
    /// `alpha = prior_mean`, `beta = prior_mean`.
    PriorMean,
    /// Draw `alpha` and `beta` from their priors (`beta` floored at 0.01).
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GladConfig {
    pub max_em_iters: usize,
    pub grad_steps_per_m: usize,
    pub learning_rate: f64,
    pub tol: f64,
    pub prior_mean: f64,
    pub prior_var: f64,
    /// Apply the Gaussian priors as penalties. Without them the fit is plain
    /// maximum likelihood and the priors only matter through `init`.
    pub map_priors: bool,
    pub init: GladInit,
}

impl Default for GladConfig {
    fn default() -> Self {
        Self {
            max_em_iters: 100,
            grad_steps_per_m: 25,
            learning_rate: 0.01,
            tol: 1e-6,
            prior_mean: 1.0,
            prior_var: 1.0,
            map_priors: true,
            init: GladInit::PriorMean,
        }
    }
}

/// Worker abilities (aligned with the fitted worker subset) and question
/// log-easiness.
#[derive(Debug, Clone, PartialEq)]
pub struct GladParams {
    pub alpha: Vec<f64>,
    pub log_beta: Vec<f64>,
}

/// `ln(1 + e^x)` without overflow.
#[inline]
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// The GLAD objective over one matrix and worker subset.
#[derive(Debug, Clone)]
pub struct GladProblem<'a> {
    matrix: &'a ResponseMatrix,
    workers: Vec<usize>,
    config: GladConfig,
}

impl<'a> GladProblem<'a> {
    pub fn new(matrix: &'a ResponseMatrix, subset: Option<&[usize]>, config: &GladConfig) -> Result<Self> {
        Ok(Self {
            matrix,
            workers: resolve_subset(matrix, subset)?,
            config: config.clone(),
        })
    }

    pub fn workers(&self) -> &[usize] {
        &self.workers
    }

    pub fn initial_params(&self) -> GladParams {
        let c = &self.config;
        match c.init {
            GladInit::PriorMean => GladParams {
                alpha: vec![c.prior_mean; self.workers.len()],
                log_beta: vec![c.prior_mean.max(1e-2).ln(); self.matrix.m()],
            },
            GladInit::Sampled { seed } => {
                let normal = Normal::new(c.prior_mean, c.prior_var.sqrt())
                    .expect("prior variance must be finite and non-negative");
                let mut rng = keyed_rng(seed, &[DOMAIN_GLAD]);
                let alpha = (0..self.workers.len()).map(|_| normal.sample(&mut rng)).collect();
                let log_beta = (0..self.matrix.m())
                    .map(|_| normal.sample(&mut rng).max(1e-2).ln())
                    .collect();
                GladParams { alpha, log_beta }
            }
        }
    }

    /// Unnormalized log joint `ln p(z_q = c, L_q)` for every candidate of `q`.
    fn log_joint(&self, params: &GladParams, q: usize, out: &mut Vec<f64>) {
        let s = self.matrix.s(q);
        out.clear();
        if s == 1 {
            out.push(0.0);
            return;
        }
        let beta = params.log_beta[q].exp();
        let ln_wrong = ((s - 1) as f64).ln();
        let mut base = -(s as f64).ln();
        out.resize(s, 0.0);
        for (i, &w) in self.workers.iter().enumerate() {
            let x = params.alpha[i] * beta;
            // every candidate first gets the "wrong answer" term ...
            base += -softplus(x) - ln_wrong;
            // ... and the chosen one swaps it for ln sigmoid(x)
            out[self.matrix.label(w, q)] += x + ln_wrong;
        }
        for v in out.iter_mut() {
            *v += base;
        }
    }

    fn log_prior(&self, params: &GladParams) -> f64 {
        if !self.config.map_priors {
            return 0.0;
        }
        let (mu, var) = (self.config.prior_mean, self.config.prior_var);
        let a: f64 = params.alpha.iter().map(|a| (a - mu).powi(2)).sum();
        let b: f64 = params.log_beta.iter().map(|lb| (lb.exp() - mu).powi(2)).sum();
        -(a + b) / (2.0 * var)
    }

    /// E-step: per-question posterior over candidates, plus the MAP objective
    /// `sum_q ln p(L_q | alpha, beta) + ln prior`.
    pub fn e_step(&self, params: &GladParams) -> (Vec<Vec<f64>>, f64) {
        let mut scratch = Vec::new();
        let mut evidence = 0.0;
        let posteriors = (0..self.matrix.m())
            .map(|q| {
                self.log_joint(params, q, &mut scratch);
                let norm = log_sum_exp(scratch.iter().copied());
                evidence += norm;
                scratch.iter().map(|v| (v - norm).exp()).collect()
            })
            .collect();
        (posteriors, evidence + self.log_prior(params))
    }

    /// MAP objective at `params`.
    pub fn objective(&self, params: &GladParams) -> f64 {
        self.e_step(params).1
    }

    /// Expected complete-data log-posterior under fixed `posteriors`
    /// (the EM auxiliary function, up to a constant).
    pub fn expected_objective(&self, params: &GladParams, posteriors: &[Vec<f64>]) -> f64 {
        let mut total = 0.0;
        let mut scratch = Vec::new();
        for (q, post) in posteriors.iter().enumerate() {
            self.log_joint(params, q, &mut scratch);
            total += scratch.iter().zip(post).map(|(l, p)| l * p).sum::<f64>();
        }
        total + self.log_prior(params)
    }

    /// Gradient of [`Self::expected_objective`] w.r.t. `alpha` and `log_beta`.
    pub fn gradient(&self, params: &GladParams, posteriors: &[Vec<f64>]) -> GladParams {
        let mut d_alpha = vec![0.0; self.workers.len()];
        let mut d_log_beta = vec![0.0; self.matrix.m()];
        for (q, post) in posteriors.iter().enumerate() {
            if self.matrix.s(q) == 1 {
                continue;
            }
            let beta = params.log_beta[q].exp();
            for (i, &w) in self.workers.iter().enumerate() {
                let x = params.alpha[i] * beta;
                let g = post[self.matrix.label(w, q)] - sigmoid(x);
                d_alpha[i] += g * beta;
                d_log_beta[q] += g * x;
            }
        }
        if self.config.map_priors {
            let (mu, var) = (self.config.prior_mean, self.config.prior_var);
            for (d, a) in d_alpha.iter_mut().zip(&params.alpha) {
                *d -= (a - mu) / var;
            }
            for (d, lb) in d_log_beta.iter_mut().zip(&params.log_beta) {
                let beta = lb.exp();
                *d -= (beta - mu) * beta / var;
            }
        }
        GladParams {
            alpha: d_alpha,
            log_beta: d_log_beta,
        }
    }

    /// M-step: gradient ascent on the auxiliary function with step halving.
    pub fn m_step(&self, params: &GladParams, posteriors: &[Vec<f64>]) -> GladParams {
        let mut current = params.clone();
        let mut value = self.expected_objective(&current, posteriors);
        for _ in 0..self.config.grad_steps_per_m {
            let grad = self.gradient(&current, posteriors);
            let mut lr = self.config.learning_rate;
            let mut accepted = false;
            for _ in 0..30 {
                let trial = GladParams {
                    alpha: current.alpha.iter().zip(&grad.alpha).map(|(a, g)| a + lr * g).collect(),
                    log_beta: current
                        .log_beta
                        .iter()
                        .zip(&grad.log_beta)
                        .map(|(b, g)| b + lr * g)
                        .collect(),
                };
                let trial_value = self.expected_objective(&trial, posteriors);
                if trial_value >= value {
                    current = trial;
                    value = trial_value;
                    accepted = true;
                    break;
                }
                lr *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        current
    }
}

/// A fitted GLAD model.
#[derive(Debug, Clone)]
pub struct GladModel {
    /// Fitted worker subset (sorted matrix indices), aligned with `alpha`.
    pub workers: Vec<usize>,
    pub alpha: Vec<f64>,
    pub log_beta: Vec<f64>,
    pub posteriors: Vec<Vec<f64>>,
    pub config: GladConfig,
    /// EM iterations actually run.
    pub iterations: usize,
    /// MAP objective after initialization and after every EM iteration.
    pub objective_trace: Vec<f64>,
}

impl GladModel {
    pub fn beta(&self, question: usize) -> f64 {
        self.log_beta[question].exp()
    }

    pub fn alpha_of(&self, worker: usize) -> Option<f64> {
        self.workers
            .binary_search(&worker)
            .ok()
            .map(|i| self.alpha[i])
    }

    /// `worker,alpha` rows for the fitted workers.
    pub fn write_alpha_csv<W: io::Write>(&self, matrix: &ResponseMatrix, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["worker", "alpha"])?;
        for (&w, &a) in self.workers.iter().zip(&self.alpha) {
            out.write_record([matrix.workers()[w].clone(), format_significant(a, 12)])?;
        }
        out.flush()?;
        Ok(())
    }

    /// `question,beta` rows.
    pub fn write_beta_csv<W: io::Write>(&self, matrix: &ResponseMatrix, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["question", "beta"])?;
        for q in 0..self.log_beta.len() {
            out.write_record([matrix.questions()[q].clone(), format_significant(self.beta(q), 12)])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Fits GLAD by EM on `subset` (all workers when `None`); restricting to the
/// expert core gives Ex-GLAD.
pub fn glad_fit(matrix: &ResponseMatrix, subset: Option<&[usize]>, config: &GladConfig) -> Result<GladModel> {
    if config.learning_rate <= 0.0 || config.prior_var <= 0.0 {
        return Err(Error::Domain(
            "GLAD learning rate and prior variance must be positive".into(),
        ));
    }
    let problem = GladProblem::new(matrix, subset, config)?;
    let mut params = problem.initial_params();
    let (mut posteriors, mut objective) = problem.e_step(&params);
    let mut objective_trace = vec![objective];
    let mut iterations = 0;

    while iterations < config.max_em_iters {
        params = problem.m_step(&params, &posteriors);
        let (next_post, next_obj) = problem.e_step(&params);
        posteriors = next_post;
        iterations += 1;
        objective_trace.push(next_obj);
        let gain = next_obj - objective;
        objective = next_obj;
        if gain < config.tol {
            break;
        }
    }

    Ok(GladModel {
        workers: problem.workers,
        alpha: params.alpha,
        log_beta: params.log_beta,
        posteriors,
        config: config.clone(),
        iterations,
        objective_trace,
    })
}

/// Posterior-argmax readout; exact ties go to the first candidate.
pub fn glad_aggregate(model: &GladModel) -> AggregationResult {
    let mut estimates = Vec::with_capacity(model.posteriors.len());
    let mut diagnostics = Vec::with_capacity(model.posteriors.len());
    for post in &model.posteriors {
        let best = post.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut winners = post.iter().enumerate().filter(|(_, &p)| p == best).map(|(c, _)| c);
        let z = winners.next().unwrap_or(0);
        estimates.push(z);
        diagnostics.push(QuestionDiagnostics {
            tie_occurred: winners.next().is_some(),
            top2_depth: None,
        });
    }
    AggregationResult::new(estimates, diagnostics)
}
