//! Cross-checks between the fast paths and their brute-force oracles on
//! seeded samples beyond the exhaustive range of the unit tests.

use arnold_complexity::engines::naive_complexity;
use arnold_complexity::planner::is_final;
use arnold_complexity::word::reference;
use arnold_complexity::{
    check_scheme_equivalence, complexity_fast, detect_final, parity_tree, synthesize_word,
    OperatorRank, PeriodicWord,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seeded_words(level: u32, count: usize, seed: u64) -> Vec<PeriodicWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(level));
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                PeriodicWord::random(level, &mut rng).unwrap()
            } else {
                let a = rng.gen_range(0..=1u64 << level);
                synthesize_word(level, a, rng.gen()).unwrap()
            }
        })
        .collect()
}

/// Count of rank-1 steps on the unpacked representation.
fn reference_complexity(w: &PeriodicWord) -> u64 {
    let mut bits = w.to_bits();
    let mut steps = 0;
    while bits.iter().any(|&b| b) {
        bits = reference::apply_operator(&bits, 1);
        steps += 1;
    }
    steps
}

#[test]
fn detector_matches_oracle_exhaustively() {
    for n in 0..=4 {
        for w in PeriodicWord::all_words(n) {
            let a = naive_complexity(&w);
            let detected = detect_final(&w).map(|d| d.complexity);
            assert_eq!(detected, is_final(a).then_some(a), "{w} A={a}");
        }
    }
}

#[test]
fn detector_matches_oracle_on_samples() {
    let mut total = 0;
    for n in 5..=10 {
        for w in seeded_words(n, 1700, 21) {
            let a = naive_complexity(&w);
            let detected = detect_final(&w).map(|d| d.complexity);
            assert_eq!(detected, is_final(a).then_some(a), "{w} A={a}");
            let tree = parity_tree(&w.reduce_to_minimal_period().0);
            let all_odd = (0..=tree.depth())
                .filter(|&m| tree.level(m).is_all_ones())
                .count();
            assert!(all_odd <= 1);
            total += 1;
        }
    }
    assert!(total >= 10_000);
}

#[test]
fn fast_matches_naive_up_to_level_twelve() {
    for n in 5..=12 {
        for w in seeded_words(n, 300, 5) {
            assert_eq!(complexity_fast(&w).0, naive_complexity(&w), "{w}");
        }
    }
}

#[test]
fn packed_naive_matches_unpacked_iteration() {
    for n in 0..=9 {
        for w in seeded_words(n, 40, 8) {
            assert_eq!(naive_complexity(&w), reference_complexity(&w), "{w}");
        }
    }
}

#[test]
fn scheme_equivalence_on_random_words() {
    for n in 5..=10 {
        for w in seeded_words(n, 1000, 13) {
            for k in 0..=n {
                assert!(check_scheme_equivalence(&w, k).unwrap(), "{w} k={k}");
            }
        }
    }
}

#[test]
fn rank_subtraction_on_random_words() {
    for n in 5..=10 {
        for w in seeded_words(n, 100, 17) {
            let a = naive_complexity(&w);
            for k in 0..=n {
                let rank = OperatorRank::from_exponent(k).unwrap();
                let image = w.apply_operator(rank).unwrap();
                assert_eq!(naive_complexity(&image), a.saturating_sub(rank.value()));
            }
        }
    }
}

#[test]
fn fast_engine_uses_at_most_n_operators() {
    for n in 0..=12 {
        for w in seeded_words(n, 50, 3) {
            assert!(complexity_fast(&w).1.ranks.len() <= n as usize);
        }
    }
}

proptest! {
    #[test]
    fn synthesized_words_have_requested_complexity(n in 0u32..=9, frac in 0.0f64..=1.0, seed: u64) {
        let a = ((1u64 << n) as f64 * frac).round() as u64;
        let w = synthesize_word(n, a, seed).unwrap();
        prop_assert_eq!(naive_complexity(&w), a);
        prop_assert_eq!(complexity_fast(&w).0, a);
    }
}
