//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use expert_core::{load_ground_truth, load_response_matrix, CandidateCatalog, GroundTruth, ResponseMatrix, SymMatrix};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

pub const SIX_WORKER_TRUTH: &str = "DCDEBCAE";
pub const SIX_WORKER_ROWS: [&str; 6] = ["DCDEBCAE", "DCBEBCAC", "DCDDBCAE", "CBAAECDB", "ABEABEEC", "CABEBBAC"];

/// Agreement counts of the six-worker example, 0-based `(u, v, tau)`.
pub const SIX_WORKER_TAU: [(usize, usize, u32); 15] = [
    (0, 1, 6),
    (0, 2, 7),
    (0, 3, 1),
    (0, 4, 1),
    (0, 5, 3),
    (1, 2, 5),
    (1, 3, 1),
    (1, 4, 2),
    (1, 5, 5),
    (2, 3, 1),
    (2, 4, 1),
    (2, 5, 2),
    (3, 4, 2),
    (3, 5, 1),
    (4, 5, 2),
];

/// The six-worker, eight-question example with catalog `A..E`.
pub fn six_worker() -> (ResponseMatrix, GroundTruth) {
    let mut responses = String::from("worker,question,answer\n");
    for (w, row) in SIX_WORKER_ROWS.iter().enumerate() {
        for (q, c) in row.chars().enumerate() {
            responses.push_str(&format!("w{},q{},{c}\n", w + 1, q + 1));
        }
    }
    let mut truth = String::from("question,answer\n");
    for (q, c) in SIX_WORKER_TRUTH.chars().enumerate() {
        truth.push_str(&format!("q{},{c}\n", q + 1));
    }
    let experts = "worker,expert\nw1,1\nw2,1\nw3,1\nw4,0\nw5,0\nw6,0\n";
    let catalog = CandidateCatalog::shared(["A", "B", "C", "D", "E"]);
    let matrix = load_response_matrix(responses.as_bytes(), Some(&catalog)).unwrap();
    let truth = load_ground_truth(truth.as_bytes(), Some(experts.as_bytes()), &matrix).unwrap();
    (matrix, truth)
}

/// Natural log of an arbitrary-size positive integer.
fn big_ln(x: &BigUint) -> f64 {
    assert!(!x.is_zero());
    let shift = x.bits().saturating_sub(64);
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln P[Bin(m, a/b) >= t]` for every `t = 0..=m`, from exact integer sums.
pub fn exact_log_tails(m: u64, a: u64, b: u64) -> Vec<f64> {
    let (a, c) = (BigUint::from(a), BigUint::from(b - a));
    let denom = BigUint::from(b).pow(m as u32);
    // terms[i] = C(m, i) a^i (b - a)^(m - i)
    let mut binom = BigUint::from(1u32);
    let mut terms = Vec::with_capacity(m as usize + 1);
    for i in 0..=m {
        if i > 0 {
            binom = binom * BigUint::from(m - i + 1) / BigUint::from(i);
        }
        terms.push(&binom * a.pow(i as u32) * c.pow((m - i) as u32));
    }
    let mut upper = vec![BigUint::zero(); m as usize + 2];
    for i in (0..=m as usize).rev() {
        upper[i] = &upper[i + 1] + &terms[i];
    }
    (0..=m as usize)
        .map(|t| {
            let tail = &upper[t];
            let lower = &denom - tail;
            if lower.is_zero() {
                0.0
            } else if tail * 2u32 >= denom {
                (-(big_ln(&lower) - big_ln(&denom)).exp()).ln_1p()
            } else {
                big_ln(tail) - big_ln(&denom)
            }
        })
        .collect()
}

/// Brute-force maximin over all non-empty vertex subsets (n <= ~12).
/// Returns the best `min_{u in S} d_S(u)` and the union of all maximizers.
pub fn exhaustive_maximin(w: &SymMatrix<f64>) -> (f64, Vec<usize>) {
    let n = w.n();
    let mut best = f64::NEG_INFINITY;
    let mut union = 0u32;
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let value = members
            .iter()
            .map(|&u| members.iter().filter(|&&v| v != u).map(|&v| w.get(u, v)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        if value > best {
            best = value;
            union = mask;
        } else if value == best {
            union |= mask;
        }
    }
    (best, (0..n).filter(|&v| union >> v & 1 == 1).collect())
}

/// Symmetric weights from a flat upper-triangle list (row-major, `u < v`).
pub fn weights_from_upper(n: usize, upper: &[f64]) -> SymMatrix<f64> {
    let mut w = SymMatrix::zeros(n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            w.set(u, v, upper[k]);
            k += 1;
        }
    }
    w
}

/// GLAD log-evidence of one question by direct enumeration of the true
/// answer, written from the model definition rather than the library.
pub fn glad_question_evidence(labels: &[usize], s: usize, alpha: &[f64], beta: f64) -> (f64, Vec<f64>) {
    let joint: Vec<f64> = (0..s)
        .map(|z| {
            let mut p = 1.0 / s as f64;
            for (&l, &a) in labels.iter().zip(alpha) {
                let correct = 1.0 / (1.0 + (-a * beta).exp());
                p *= if l == z { correct } else { (1.0 - correct) / (s - 1) as f64 };
            }
            p
        })
        .collect();
    let total: f64 = joint.iter().sum();
    (total.ln(), joint.iter().map(|j| j / total).collect())
}
