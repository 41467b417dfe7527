//! Complexity engines: the brute-force rank-1 iteration, the fast
//! reduce/detect/descend engine, scheme replay and test-word synthesis.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::thinning::{detect_final, detect_final_reduced, parity_tree, FinalDetection};
use crate::word::{OperatorRank, PeriodicWord, MAX_LEVEL};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeStep {
    pub rank: OperatorRank,
    pub result: PeriodicWord,
}

/// What the last word of a scheme turned out to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Terminal {
    Zero,
    Final(FinalDetection),
    /// Neither zero nor final.
    Open,
}

impl Terminal {
    fn classify(word: &PeriodicWord) -> Terminal {
        if word.is_zero() {
            Terminal::Zero
        } else {
            detect_final(word).map_or(Terminal::Open, Terminal::Final)
        }
    }
}

/// A realized operator chain starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeTrace {
    pub start: PeriodicWord,
    pub steps: Vec<SchemeStep>,
    pub terminal: Terminal,
}

impl SchemeTrace {
    pub fn last(&self) -> &PeriodicWord {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn ranks(&self) -> Vec<OperatorRank> {
        self.steps.iter().map(|s| s.rank).collect()
    }

    /// Sum of the ranks, i.e. the number of rank-1 steps this chain stands for.
    pub fn rank_sum(&self) -> u64 {
        self.steps.iter().map(|s| s.rank.value()).sum()
    }
}

/// Decomposition `A = sum(ranks) + final_complexity`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub ranks: Vec<OperatorRank>,
    pub final_complexity: u64,
    pub total: u64,
}

/// Least `t` with `iterate_rank1(w, t)` zero, together with every
/// intermediate word.
pub fn complexity_naive(w: &PeriodicWord) -> (u64, SchemeTrace) {
    let mut steps = Vec::new();
    let mut word = w.clone();
    while !word.is_zero() {
        word.step_rank1_in_place();
        steps.push(SchemeStep {
            rank: OperatorRank::UNIT,
            result: word.clone(),
        });
    }
    let trace = SchemeTrace {
        start: w.clone(),
        steps,
        terminal: Terminal::Zero,
    };
    (trace.steps.len() as u64, trace)
}

/// Same count as [`complexity_naive`] without keeping the trace.
pub fn naive_complexity(w: &PeriodicWord) -> u64 {
    let mut word = w.clone();
    let mut count = 0;
    while !word.is_zero() {
        word.step_rank1_in_place();
        count += 1;
    }
    count
}

/// Fast complexity. Each round reduces the word to its minimal period
/// `2^p`, stops if the parity tree shows a final word, and otherwise
/// applies rank `2^(p-1)`, which lowers the complexity by exactly that
/// amount because a word with minimal period `2^p` has `A > 2^(p-1)`.
pub fn complexity_fast(w: &PeriodicWord) -> (u64, Certificate) {
    let mut ranks = Vec::new();
    let mut descended = 0u64;
    let (mut current, _) = w.reduce_to_minimal_period();
    loop {
        if current.is_zero() {
            return (
                descended,
                Certificate {
                    ranks,
                    final_complexity: 0,
                    total: descended,
                },
            );
        }
        let tree = parity_tree(&current);
        if let Some(found) = detect_final_reduced(&tree) {
            let total = descended + found.complexity;
            return (
                total,
                Certificate {
                    ranks,
                    final_complexity: found.complexity,
                    total,
                },
            );
        }
        // A nonzero word of period 1 is final, so here p >= 1.
        let p = current.level();
        let rank = OperatorRank::from_exponent(p - 1).expect("small exponent");
        ranks.push(rank);
        descended += rank.value();
        // Level p-1 of the tree is the two halves XOR-ed together, which is
        // the rank 2^(p-1) image with its repeated half dropped.
        let (reduced, _) = tree.level(p - 1).reduce_to_minimal_period();
        current = reduced;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Fast,
    Naive,
}

impl Engine {
    pub fn complexity(self, w: &PeriodicWord) -> u64 {
        match self {
            Engine::Fast => complexity_fast(w).0,
            Engine::Naive => naive_complexity(w),
        }
    }
}

/// Complexities of many words, evaluated in parallel, in input order.
pub fn batch_complexity(words: &[PeriodicWord], engine: Engine) -> Vec<u64> {
    words.par_iter().map(|w| engine.complexity(w)).collect()
}

/// Applies `ranks` in order and classifies the last word.
pub fn run_scheme(w: &PeriodicWord, ranks: &[OperatorRank]) -> Result<SchemeTrace> {
    let mut steps = Vec::with_capacity(ranks.len());
    let mut word = w.clone();
    for &rank in ranks {
        word = word.apply_operator(rank)?;
        steps.push(SchemeStep {
            rank,
            result: word.clone(),
        });
    }
    Ok(SchemeTrace {
        start: w.clone(),
        terminal: Terminal::classify(&word),
        steps,
    })
}

/// Whether `2^k` rank-1 steps agree with one rank-`2^k` step on `w`.
pub fn check_scheme_equivalence(w: &PeriodicWord, k: u32) -> Result<bool> {
    let rank = OperatorRank::from_exponent(k)?;
    let direct = w.apply_operator(rank)?;
    Ok(w.iterate_rank1(rank.value()) == direct)
}

/// Deterministic word of level `n` with complexity `a`.
///
/// A random odd word has complexity `2^n`; applying rank `2^k` once for
/// every set bit of `2^n - a` brings it down to `a`.
pub fn synthesize_word(n: u32, a: u64, seed: u64) -> Result<PeriodicWord> {
    if n > MAX_LEVEL {
        return Err(Error::LevelTooLarge(n));
    }
    let length = 1u64 << n;
    if a > length {
        return Err(Error::out_of_range(
            "complexity",
            a,
            format!("0..={length}"),
        ));
    }
    if a == 0 {
        return PeriodicWord::zeros(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(n) << 48) | a);
    let mut word = PeriodicWord::random(n, &mut rng)?;
    if !word.parity().is_odd() {
        word.toggle(0);
    }
    let deficiency = length - a;
    for k in (0..n).filter(|k| (deficiency >> k) & 1 == 1) {
        word = word.apply_operator(OperatorRank::from_exponent(k)?)?;
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Parity;

    fn w(text: &str) -> PeriodicWord {
        text.parse().unwrap()
    }

    fn ranks(values: &[u64]) -> Vec<OperatorRank> {
        values
            .iter()
            .map(|&h| OperatorRank::new(h).unwrap())
            .collect()
    }

    #[test]
    fn naive_examples() {
        let (a, trace) = complexity_naive(&w("0b10110100"));
        assert_eq!(a, 5);
        let chain: Vec<String> = trace.steps.iter().map(|s| s.result.to_string()).collect();
        assert_eq!(
            chain,
            [
                "0b11011101",
                "0b01100110",
                "0b10101010",
                "0b11111111",
                "0b00000000"
            ]
        );
        assert_eq!(trace.terminal, Terminal::Zero);
        assert_eq!(complexity_naive(&w("0b11111111")).0, 1);
        assert_eq!(complexity_naive(&w("0b00000000")).0, 0);
        assert_eq!(complexity_naive(&w("0b1")).0, 1);
        assert_eq!(complexity_naive(&w("0b0")).0, 0);
    }

    #[test]
    fn fast_examples() {
        assert_eq!(
            complexity_fast(&w("0b10110100")),
            (
                5,
                Certificate {
                    ranks: vec![],
                    final_complexity: 5,
                    total: 5
                }
            )
        );
        assert_eq!(
            complexity_fast(&w("0b10000010")),
            (
                6,
                Certificate {
                    ranks: ranks(&[4]),
                    final_complexity: 2,
                    total: 6
                }
            )
        );
        assert_eq!(
            complexity_fast(&w("0b00000000")),
            (
                0,
                Certificate {
                    ranks: vec![],
                    final_complexity: 0,
                    total: 0
                }
            )
        );
    }

    #[test]
    fn scheme_examples() {
        let trace = run_scheme(&w("0b10000010"), &ranks(&[2, 1])).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.last(), &w("0b10000010").iterate_rank1(3));
        assert_eq!(trace.rank_sum(), 3);
        // A = 6 - 3 = 3 = 2^2 - 2^1 + 1.
        assert!(matches!(trace.terminal, Terminal::Final(d) if d.complexity == 3));

        let empty = run_scheme(&w("0b10000010"), &[]).unwrap();
        assert!(empty.steps.is_empty());
        assert_eq!(empty.terminal, Terminal::Open);

        assert!(run_scheme(&w("0b10"), &ranks(&[4])).is_err());
    }

    #[test]
    fn equivalence_examples() {
        assert!(check_scheme_equivalence(&w("0b10"), 1).unwrap());
        assert!(check_scheme_equivalence(&w("0b1101"), 0).unwrap());
        for word in PeriodicWord::all_words(3) {
            for k in 0..=3 {
                assert!(check_scheme_equivalence(&word, k).unwrap(), "{word} k={k}");
            }
        }
        assert!(check_scheme_equivalence(&w("0b10"), 2).is_err());
    }

    #[test]
    fn synthesis_examples() {
        for seed in 0..20 {
            let word = synthesize_word(3, 6, seed).unwrap();
            assert_eq!(naive_complexity(&word), 6);
            assert_eq!(synthesize_word(4, 16, seed).unwrap().parity(), Parity::Odd);
        }
        assert_eq!(synthesize_word(2, 0, 9).unwrap(), w("0b0000"));
        assert_eq!(synthesize_word(5, 20, 3), synthesize_word(5, 20, 3));
        assert!(synthesize_word(2, 5, 0).is_err());
    }

    #[test]
    fn synthesis_hits_every_value() {
        for n in 0..=6 {
            for a in 0..=1u64 << n {
                let word = synthesize_word(n, a, 1).unwrap();
                assert_eq!(naive_complexity(&word), a, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn exhaustive_small_levels() {
        for n in 0..=4 {
            for word in PeriodicWord::all_words(n) {
                let (naive, trace) = complexity_naive(&word);
                assert_eq!(trace.steps.len() as u64, naive);
                let (fast, cert) = complexity_fast(&word);
                assert_eq!(fast, naive, "{word}");
                assert_eq!(
                    cert.total,
                    cert.ranks.iter().map(|r| r.value()).sum::<u64>() + cert.final_complexity
                );
                assert!(cert.ranks.len() <= n as usize);

                let replay = run_scheme(&word, &cert.ranks).unwrap();
                match replay.terminal {
                    Terminal::Final(d) => assert_eq!(d.complexity, cert.final_complexity),
                    Terminal::Zero => assert_eq!(cert.final_complexity, 0),
                    Terminal::Open => panic!("certificate for {word} ends on an open word"),
                }

                for k in 0..=n {
                    let rank = OperatorRank::from_exponent(k).unwrap();
                    let image = word.apply_operator(rank).unwrap();
                    assert_eq!(naive_complexity(&image), naive.saturating_sub(rank.value()));
                }

                if word.minimal_period_level() == n && !word.is_zero() {
                    let half = (1u64 << n) / 2;
                    assert!(naive > half && naive <= 1 << n, "{word} A={naive}");
                }
            }
        }
    }

    #[test]
    fn batch_keeps_input_order() {
        let words: Vec<_> = (0..64).map(|a| synthesize_word(6, a, 5).unwrap()).collect();
        let expected: Vec<u64> = (0..64).collect();
        assert_eq!(batch_complexity(&words, Engine::Fast), expected);
        assert_eq!(batch_complexity(&words, Engine::Naive), expected);
    }
}
