mod common;

use common::{exhaustive_maximin, weights_from_upper};
use expert_core::peeling::{induced_degree, max_core, min_induced_degree, theta};
use expert_core::{peel, SymMatrix};
use proptest::prelude::*;

fn weights(max_n: usize) -> impl Strategy<Value = SymMatrix<f64>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0.0f64..50.0, n * (n - 1) / 2).prop_map(move |upper| weights_from_upper(n, &upper))
    })
}

/// Small integer weights make exact ties common.
fn integer_weights(max_n: usize) -> impl Strategy<Value = SymMatrix<f64>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0u8..4, n * (n - 1) / 2)
            .prop_map(move |upper| weights_from_upper(n, &upper.iter().map(|&x| x as f64).collect::<Vec<_>>()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn peeling_finds_the_exhaustive_maximin(w in weights(10)) {
        let trace = peel(&w);
        let core = max_core(&trace);
        let (best, union) = exhaustive_maximin(&w);
        prop_assert_eq!(trace.best_min_degree(), best);
        prop_assert_eq!(min_induced_degree(&core, &w).unwrap(), best);
        prop_assert_eq!(core, union);
    }

    #[test]
    fn core_is_the_union_of_maximizers_under_ties(w in integer_weights(9)) {
        let core = max_core(&peel(&w));
        let (best, union) = exhaustive_maximin(&w);
        prop_assert_eq!(min_induced_degree(&core, &w).unwrap(), best);
        prop_assert_eq!(core, union);
    }

    #[test]
    fn trace_is_self_consistent(w in weights(12)) {
        let trace = peel(&w);
        let n = w.n();
        let mut seen = trace.reliability_order();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
        for i in 1..=n {
            let survivors = trace.survivors(i);
            let v = trace.vertex(i);
            let d = induced_degree(&w, &survivors, v);
            prop_assert_eq!(trace.min_degree(i), if i == 1 { 0.0 } else { d });
            // v_i has the smallest degree, and the smallest index among equals
            for &u in &survivors {
                let du = induced_degree(&w, &survivors, u);
                prop_assert!(du > d || (du == d && u >= v));
            }
        }
    }

    #[test]
    fn core_members_clear_the_best_degree(w in weights(12)) {
        let trace = peel(&w);
        let core = max_core(&trace);
        let k = trace.best_min_degree();
        for &u in &core {
            prop_assert!(induced_degree(&w, &core, u) >= k);
        }
        prop_assert_eq!(theta(&core, &w).unwrap(), -k);
        // no strictly larger survivor set does as well
        for i in core.len() + 1..=w.n() {
            prop_assert!(trace.min_degree(i) < k);
        }
    }

    #[test]
    fn power_of_two_scaling_changes_nothing(w in weights(12), e in -20i32..20) {
        let a = peel(&w);
        let b = peel(&w.scaled(2f64.powi(e)));
        prop_assert_eq!(a.removal_order(), b.removal_order());
        prop_assert_eq!(a.best_size(), b.best_size());
        prop_assert_eq!(a.best_min_degree() * 2f64.powi(e), b.best_min_degree());
    }

    #[test]
    fn relabelling_moves_the_core(w in weights(10), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let n = w.n();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let permuted = w.permuted(&perm);
        let core = max_core(&peel(&w));
        let mut mapped: Vec<usize> = max_core(&peel(&permuted)).iter().map(|&i| perm[i]).collect();
        mapped.sort_unstable();
        prop_assert_eq!(mapped, core);
    }
}

#[test]
fn trivial_graphs() {
    let one = SymMatrix::zeros(1);
    let t = peel(&one);
    assert_eq!((t.best_size(), max_core(&t)), (1, vec![0]));

    let mut two = SymMatrix::zeros(2);
    two.set(0, 1, 3.5);
    let t = peel(&two);
    assert_eq!(max_core(&t), [0, 1]);
    assert_eq!(t.best_min_degree(), 3.5);

    // all-zero weights: every set ties at 0 and the whole graph is the core
    assert_eq!(max_core(&peel(&SymMatrix::zeros(5))), [0, 1, 2, 3, 4]);
}

#[test]
fn large_graph_agrees_with_naive_peeling() {
    let n = 300;
    let w = SymMatrix::from_fn(n, |u, v| {
        let (a, b) = (u.min(v), u.max(v));
        // deterministic per unordered pair
        let h = expert_core::seeding::derive_seed(7, &[a as u64, b as u64]);
        (h % 1_000_000) as f64 / 1e4
    });
    let trace = peel(&w);

    // O(n^3) reference: recompute every degree from scratch each round
    let mut alive: Vec<usize> = (0..n).collect();
    for i in (2..=n).rev() {
        let (d, v) = alive
            .iter()
            .map(|&v| (induced_degree(&w, &alive, v), v))
            .fold((f64::INFINITY, usize::MAX), |best, c| if c.0 < best.0 { c } else { best });
        assert_eq!((trace.vertex(i), trace.min_degree(i)), (v, d), "round i = {i}");
        alive.retain(|&u| u != v);
    }
}
