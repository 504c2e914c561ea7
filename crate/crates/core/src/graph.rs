//! The complete worker agreement graph.
//!
//! Edge `(u, v)` carries the agreement count `tau(u, v)` and the weight
//! `gamma(u, v) = -ln P[Bin(m, p) >= tau(u, v)]`, where `p` is the average
//! pairwise agreement probability of the whole crowd. A large weight means the
//! pair agrees far more often than chance would explain.

use std::collections::HashMap;
use std::io;

use rayon::prelude::*;

use crate::binomial::log_binomial_tail;
use crate::error::{Error, Result};
use crate::response::ResponseMatrix;

/// Lower clamp for the agreement probability; the upper clamp is `1 - P_CLAMP`.
pub const P_CLAMP: f64 = 1e-6;

/// Edge weights are capped here so degree sums stay finite.
pub const GAMMA_CAP: f64 = 1e12;

/// Dense symmetric matrix with an unused diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Copy + Default> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::default(); n * n],
        }
    }

    /// Fills the strict upper triangle from `f(u, v)` with `u < v` and mirrors it.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut out = Self::zeros(n);
        for u in 0..n {
            for v in u + 1..n {
                out.set(u, v, f(u, v));
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> T {
        self.data[u * self.n + v]
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize, value: T) {
        self.data[u * self.n + v] = value;
        self.data[v * self.n + u] = value;
    }

    /// Row `u`; entry `u` itself is the unused diagonal.
    pub fn row(&self, u: usize) -> &[T] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    /// Relabels vertices: entry `(i, j)` of the result is `(perm[i], perm[j])` here.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        Self::from_fn(self.n, |i, j| self.get(perm[i], perm[j]))
    }
}

impl SymMatrix<f64> {
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }
}

/// Agreement counts: `tau(u, v)` is the number of questions where `u` and `v`
/// chose the same candidate.
pub fn agreement_counts(matrix: &ResponseMatrix) -> SymMatrix<u32> {
    let n = matrix.n();
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let a = matrix.row(u);
            (u + 1..n)
                .map(|v| {
                    let b = matrix.row(v);
                    a.iter().zip(b).filter(|(x, y)| x == y).count() as u32
                })
                .collect()
        })
        .collect();
    let mut tau = SymMatrix::zeros(n);
    for (u, row) in rows.into_iter().enumerate() {
        for (k, t) in row.into_iter().enumerate() {
            tau.set(u, u + 1 + k, t);
        }
    }
    tau
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(P_CLAMP, 1.0 - P_CLAMP)
}

fn mean_agreement(tau: &SymMatrix<u32>, m: usize) -> f64 {
    let n = tau.n();
    let mut total: u64 = 0;
    for u in 0..n {
        for v in u + 1..n {
            total += tau.get(u, v) as u64;
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    total as f64 / (m as f64 * pairs)
}

/// Probability that a random worker pair agrees on a random question,
/// clamped to `[1e-6, 1 - 1e-6]`.
pub fn average_agreement_probability(matrix: &ResponseMatrix) -> Result<f64> {
    if matrix.n() < 2 {
        return Err(Error::TooFewWorkers(matrix.n()));
    }
    Ok(clamp_probability(mean_agreement(
        &agreement_counts(matrix),
        matrix.m(),
    )))
}

#[derive(Debug, Clone)]
pub struct AgreementGraph {
    m: usize,
    p: f64,
    tau: SymMatrix<u32>,
    gamma: SymMatrix<f64>,
}

impl AgreementGraph {
    pub fn n(&self) -> usize {
        self.tau.n()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Agreement probability the weights were computed against.
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn tau(&self) -> &SymMatrix<u32> {
        &self.tau
    }

    pub fn gamma(&self) -> &SymMatrix<f64> {
        &self.gamma
    }

    /// Debug dump, one `u,v,tau,gamma` row per unordered pair.
    pub fn write_csv<W: io::Write>(&self, matrix: &ResponseMatrix, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["u", "v", "tau", "gamma"])?;
        let ids = matrix.workers();
        for u in 0..self.n() {
            for v in u + 1..self.n() {
                out.write_record([
                    ids[u].clone(),
                    ids[v].clone(),
                    self.tau.get(u, v).to_string(),
                    format_significant(self.gamma.get(u, v), 12),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Edge weight for a pair with `tau` agreements out of `m` under agreement
/// probability `p`.
pub fn edge_weight(m: usize, tau: u32, p: f64) -> Result<f64> {
    let ln_tail = log_binomial_tail(m as u64, tau as u64, p)?;
    Ok(if ln_tail == 0.0 { 0.0 } else { (-ln_tail).min(GAMMA_CAP) })
}

/// Builds the weighted agreement graph. `p_override` replaces the fitted
/// average agreement probability (it is clamped the same way).
pub fn build_graph(matrix: &ResponseMatrix, p_override: Option<f64>) -> Result<AgreementGraph> {
    let n = matrix.n();
    if n < 2 {
        return Err(Error::TooFewWorkers(n));
    }
    let m = matrix.m();
    let tau = agreement_counts(matrix);
    let p = match p_override {
        Some(p) if p.is_finite() && p > 0.0 && p < 1.0 => clamp_probability(p),
        Some(p) => return Err(Error::Domain(format!("p override {p} is outside (0, 1)"))),
        None => clamp_probability(mean_agreement(&tau, m)),
    };

    // At most m + 1 distinct counts, so weights are computed once per count.
    let mut by_count: HashMap<u32, f64> = HashMap::new();
    let mut gamma = SymMatrix::zeros(n);
    for u in 0..n {
        for v in u + 1..n {
            let t = tau.get(u, v);
            let w = match by_count.get(&t) {
                Some(&w) => w,
                None => {
                    let w = edge_weight(m, t, p)?;
                    by_count.insert(t, w);
                    w
                }
            };
            gamma.set(u, v, w);
        }
    }
    Ok(AgreementGraph { m, p, tau, gamma })
}

/// `%.{digits}g`-style formatting.
pub(crate) fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", digits - 1, x);
        match s.split_once('e') {
            Some((mantissa, e)) if mantissa.contains('.') => {
                format!("{}e{}", mantissa.trim_end_matches('0').trim_end_matches('.'), e)
            }
            _ => s,
        }
    }
}
