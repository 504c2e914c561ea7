//! Log-domain binomial upper tails.
//!
//! For large `m` the tail `P[X >= t]`, `X ~ Bin(m, p)`, underflows any float
//! long before its logarithm does, so everything here stays in log space.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// `ln C(m, i)` through the log-gamma function.
pub fn ln_choose(m: u64, i: u64) -> f64 {
    debug_assert!(i <= m);
    if i == 0 || i == m {
        return 0.0;
    }
    ln_gamma(m as f64 + 1.0) - ln_gamma(i as f64 + 1.0) - ln_gamma((m - i) as f64 + 1.0)
}

/// `ln sum exp(x)` over the inputs; `-inf` for an empty input.
pub fn log_sum_exp<I>(values: I) -> f64
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let iter = values.into_iter();
    let max = iter.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = iter.map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// `ln P[X = i]` for `X ~ Bin(m, p)`, given `ln p` and `ln(1 - p)`.
#[inline]
fn ln_pmf(m: u64, i: u64, ln_p: f64, ln_q: f64) -> f64 {
    ln_choose(m, i) + i as f64 * ln_p + (m - i) as f64 * ln_q
}

/// `ln sum_{i=t}^{m} C(m,i) p^i (1-p)^(m-i)`.
///
/// Returns exactly `0.0` for `t = 0`. When the tail exceeds one half the
/// value is taken as `ln(1 - lower)` from the complementary sum, which keeps
/// full relative precision for tails that are nearly 1.
pub fn log_binomial_tail(m: u64, t: u64, p: f64) -> Result<f64> {
    if t > m {
        return Err(Error::Domain(format!("tail start t = {t} exceeds m = {m}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p = {p} is outside (0, 1)")));
    }
    if t == 0 {
        return Ok(0.0);
    }
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    let upper = log_sum_exp((t..=m).map(|i| ln_pmf(m, i, ln_p, ln_q)));
    if upper < -std::f64::consts::LN_2 {
        return Ok(upper);
    }
    let lower = log_sum_exp((0..t).map(|i| ln_pmf(m, i, ln_p, ln_q)));
    Ok((-lower.exp()).ln_1p().min(0.0))
}
