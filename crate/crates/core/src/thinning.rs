//! Thinned-out words (power-of-two decimations), their reassembly, the
//! parity tree of all decimations and the final-word detector built on it.
//!
//! For a word `w` of length `2^n`, level `m` holds the `2^m` decimations
//! with step `2^m`; the one at offset `i` reads positions
//! `i, i + 2^m, …, i + 2^n - 2^m`. Level `m` parities are obtained from
//! level `m + 1` by XOR-ing entry `i` with entry `i + 2^m`, so the whole
//! tree costs `2^(n-1) + … + 1 = 2^n - 1` XORs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::PeriodicWord;

/// The thinned-out word of `w` at level `m` and offset `i`.
pub fn thin(w: &PeriodicWord, m: u32, i: usize) -> Result<PeriodicWord> {
    let n = w.level();
    if m > n {
        return Err(Error::out_of_range(
            "thinning level",
            m.into(),
            format!("0..={n}"),
        ));
    }
    let step = 1usize << m;
    if i >= step {
        return Err(Error::out_of_range(
            "thinning offset",
            i as u64,
            format!("0..{step}"),
        ));
    }
    PeriodicWord::from_bits((i..w.len()).step_by(step).map(|j| w.get(j)))
}

/// Reassembles a word from its complete family of thinned-out words at
/// level `m`. Every position of the result comes from exactly one part.
pub fn union_thinned(parts: &[(usize, PeriodicWord)], m: u32) -> Result<PeriodicWord> {
    let step = 1usize
        .checked_shl(m)
        .filter(|_| m < usize::BITS)
        .ok_or_else(|| Error::InvalidFamily(format!("level {m} too large")))?;
    if parts.len() != step {
        return Err(Error::InvalidFamily(format!(
            "expected {step} parts at level {m}, got {}",
            parts.len()
        )));
    }
    let mut slots: Vec<Option<&PeriodicWord>> = vec![None; step];
    for (offset, word) in parts {
        let slot = slots
            .get_mut(*offset)
            .ok_or_else(|| Error::InvalidFamily(format!("offset {offset} outside 0..{step}")))?;
        if slot.is_some() {
            return Err(Error::InvalidFamily(format!("duplicate offset {offset}")));
        }
        *slot = Some(word);
    }
    let slots: Vec<&PeriodicWord> = slots
        .into_iter()
        .map(|s| s.expect("all offsets filled"))
        .collect();
    let part_level = slots[0].level();
    if slots.iter().any(|p| p.level() != part_level) {
        return Err(Error::InvalidFamily("parts have different lengths".into()));
    }
    let len = step << part_level;
    PeriodicWord::from_bits((0..len).map(|j| slots[j % step].get(j / step)))
}

/// Parities of every thinned-out word of a word, one level per `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityTree {
    levels: Vec<PeriodicWord>,
    xor_count: u64,
}

impl ParityTree {
    /// Level `n` of the tree, i.e. the level of the word it was built from.
    pub fn depth(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    /// Parities at level `m`, stored as a word of length `2^m`.
    pub fn level(&self, m: u32) -> &PeriodicWord {
        &self.levels[m as usize]
    }

    pub fn levels(&self) -> &[PeriodicWord] {
        &self.levels
    }

    /// `true` when the thinned-out word at level `m`, offset `i` is odd.
    pub fn entry(&self, m: u32, i: usize) -> bool {
        self.level(m).get(i)
    }

    pub fn xor_count(&self) -> u64 {
        self.xor_count
    }

    /// The unique level below the top whose parities are all odd.
    pub fn all_odd_level(&self) -> Option<u32> {
        let depth = self.depth();
        if depth == 0 {
            return self.levels[0].is_all_ones().then_some(0);
        }
        (0..depth).find(|&m| self.level(m).is_all_ones())
    }
}

/// Builds the tree on the packed path: each level is the XOR of the two
/// halves of the level above. The reported count is the number of bit
/// XORs performed, `2^n - 1`.
pub fn parity_tree(w: &PeriodicWord) -> ParityTree {
    let mut levels = Vec::with_capacity(w.level() as usize + 1);
    let mut xor_count = 0;
    let mut current = w.clone();
    while current.level() > 0 {
        let next = current.fold_halves();
        xor_count += next.len() as u64;
        levels.push(std::mem::replace(&mut current, next));
    }
    levels.push(current);
    levels.reverse();
    ParityTree { levels, xor_count }
}

/// Unpacked tree construction that counts every XOR it performs.
pub fn parity_tree_reference(w: &PeriodicWord) -> ParityTree {
    let mut xor_count = 0u64;
    let mut current = w.to_bits();
    let mut levels = vec![current.clone()];
    while current.len() > 1 {
        let half = current.len() / 2;
        let mut next = Vec::with_capacity(half);
        for i in 0..half {
            next.push(current[i] ^ current[i + half]);
            xor_count += 1;
        }
        levels.push(next.clone());
        current = next;
    }
    levels.reverse();
    ParityTree {
        levels: levels
            .into_iter()
            .map(|bits| PeriodicWord::from_bits(bits).expect("power-of-two level"))
            .collect(),
        xor_count,
    }
}

/// A detected final word: its reduced period is `2^period_level` and its
/// complexity is `2^period_level - 2^level + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FinalDetection {
    pub level: u32,
    pub period_level: u32,
    pub complexity: u64,
}

/// Final-word detector. The word is first reduced to its minimal period
/// `u` of length `2^p`; if some level `m < p` of the parity tree of `u` is
/// entirely odd the complexity is `2^p - 2^m + 1`. The single-letter word
/// `1` is final with complexity 1; every other word yields `None`.
pub fn detect_final(w: &PeriodicWord) -> Option<FinalDetection> {
    let (reduced, _) = w.reduce_to_minimal_period();
    detect_final_reduced(&parity_tree(&reduced))
}

/// Detection on the tree of an already reduced word.
pub(crate) fn detect_final_reduced(tree: &ParityTree) -> Option<FinalDetection> {
    let p = tree.depth();
    tree.all_odd_level().map(|m| FinalDetection {
        level: m,
        period_level: p,
        complexity: (1u64 << p) - (1u64 << m) + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str) -> PeriodicWord {
        text.parse().unwrap()
    }

    #[test]
    fn thin_examples() {
        assert_eq!(thin(&w("0b10110100"), 1, 0).unwrap(), w("0b1100"));
        assert_eq!(thin(&w("0b10110100"), 1, 1).unwrap(), w("0b0110"));
        assert_eq!(thin(&w("0b10110100"), 0, 0).unwrap(), w("0b10110100"));
        assert_eq!(thin(&w("0b10110100"), 2, 3).unwrap(), w("0b10"));
        assert_eq!(thin(&w("0b10110100"), 3, 5).unwrap(), w("0b1"));
    }

    #[test]
    fn thin_positions_follow_step() {
        // x_1..x_8 marked by distinct single bits: offset 0 at m=1 keeps x_1 x_3 x_5 x_7.
        let word = w("0b10001000");
        assert_eq!(thin(&word, 1, 0).unwrap(), w("0b1010"));
        assert_eq!(thin(&word, 1, 1).unwrap(), w("0b0000"));
        assert_eq!(thin(&word, 2, 0).unwrap(), w("0b11"));
    }

    #[test]
    fn thin_rejects_out_of_range() {
        assert!(thin(&w("0b1011"), 3, 0).is_err());
        assert!(thin(&w("0b1011"), 1, 2).is_err());
    }

    #[test]
    fn union_examples() {
        let parts = [(0, w("0b1100")), (1, w("0b0110"))];
        assert_eq!(union_thinned(&parts, 1).unwrap(), w("0b10110100"));
        assert_eq!(union_thinned(&[(0, w("0b1011"))], 0).unwrap(), w("0b1011"));
    }

    #[test]
    fn union_rejects_bad_families() {
        let dup = [(0, w("0b1100")), (0, w("0b0110"))];
        assert!(matches!(
            union_thinned(&dup, 1),
            Err(Error::InvalidFamily(_))
        ));
        let missing = [(0, w("0b1100"))];
        assert!(union_thinned(&missing, 1).is_err());
        let ragged = [(0, w("0b1100")), (1, w("0b01"))];
        assert!(union_thinned(&ragged, 1).is_err());
        let stray = [(0, w("0b1100")), (2, w("0b0110"))];
        assert!(union_thinned(&stray, 1).is_err());
    }

    #[test]
    fn tree_examples() {
        let tree = parity_tree(&w("0b10110100"));
        assert_eq!(tree.level(2), &w("0b1111"));
        assert_eq!(tree.level(1), &w("0b00"));
        assert_eq!(tree.level(0), &w("0b0"));
        assert_eq!(tree.level(3), &w("0b10110100"));
        assert_eq!(tree.xor_count(), 7);

        let zero = parity_tree(&w("0x0000"));
        assert!(zero.levels().iter().all(PeriodicWord::is_zero));

        let one = parity_tree_reference(&w("0b1"));
        assert_eq!(one.level(0), &w("0b1"));
        assert_eq!(one.xor_count(), 0);
    }

    #[test]
    fn detect_examples() {
        assert_eq!(
            detect_final(&w("0b10110100")),
            Some(FinalDetection {
                level: 2,
                period_level: 3,
                complexity: 5
            })
        );
        assert_eq!(
            detect_final(&w("0b11011101")),
            Some(FinalDetection {
                level: 0,
                period_level: 2,
                complexity: 4
            })
        );
        assert_eq!(detect_final(&w("0b10000010")), None);
        assert_eq!(detect_final(&w("0b1")).map(|d| d.complexity), Some(1));
        assert_eq!(detect_final(&w("0b1111")).map(|d| d.complexity), Some(1));
        assert_eq!(detect_final(&w("0b0000")), None);
    }

    fn any_word(max_level: u32) -> impl Strategy<Value = PeriodicWord> {
        (0..=max_level)
            .prop_flat_map(|level| prop::collection::vec(any::<bool>(), 1usize << level))
            .prop_map(|bits| PeriodicWord::from_bits(bits).unwrap())
    }

    proptest! {
        #[test]
        fn union_inverts_thinning(word in any_word(9), m in 0u32..10) {
            let m = m.min(word.level());
            let parts: Vec<_> = (0..1usize << m).map(|i| (i, thin(&word, m, i).unwrap())).collect();
            prop_assert_eq!(union_thinned(&parts, m).unwrap(), word);
        }

        #[test]
        fn tree_entries_are_decimation_parities(word in any_word(7)) {
            let tree = parity_tree(&word);
            for m in 0..=word.level() {
                for i in 0..1usize << m {
                    prop_assert_eq!(tree.entry(m, i), thin(&word, m, i).unwrap().parity().is_odd());
                }
            }
            prop_assert_eq!(tree.entry(0, 0), word.parity().is_odd());
        }

        #[test]
        fn tree_levels_fold(word in any_word(9)) {
            let tree = parity_tree(&word);
            for m in 0..word.level() {
                for i in 0..1usize << m {
                    prop_assert_eq!(
                        tree.entry(m, i),
                        tree.entry(m + 1, i) ^ tree.entry(m + 1, i + (1 << m))
                    );
                }
            }
        }

        #[test]
        fn packed_tree_matches_reference(word in any_word(10)) {
            let reference = parity_tree_reference(&word);
            prop_assert_eq!(reference.xor_count(), (1u64 << word.level()) - 1);
            prop_assert_eq!(parity_tree(&word), reference);
        }

        #[test]
        fn at_most_one_all_odd_level(word in any_word(9)) {
            let tree = parity_tree(&word);
            let odd_levels = (0..=word.level()).filter(|&m| tree.level(m).is_all_ones()).count();
            prop_assert!(odd_levels <= 1);
        }
    }
}
