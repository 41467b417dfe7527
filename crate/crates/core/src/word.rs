//! Cyclic binary words of length `2^n` and the power-of-two-rank XOR-shift
//! operator.
//!
//! Bits are packed into `u64` blocks, position `j` (0-based, the first
//! character of the textual form) at bit `j % 64` of block `j / 64`. Words
//! shorter than 64 bits occupy the low bits of a single block and the
//! unused high bits are always zero.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported `n`; a word of level 32 already takes 512 MiB.
pub const MAX_LEVEL: u32 = 32;

const BLOCK_BITS: usize = 64;
const BLOCK_LEVEL: u32 = 6;

fn block_count(level: u32) -> usize {
    if level <= BLOCK_LEVEL {
        1
    } else {
        1 << (level - BLOCK_LEVEL)
    }
}

fn low_mask(len: usize) -> u64 {
    if len >= BLOCK_BITS {
        !0
    } else {
        (1u64 << len) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Shift distance `h = 2^k` of the XOR-shift operator, stored by exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OperatorRank(u32);

impl OperatorRank {
    pub const UNIT: OperatorRank = OperatorRank(0);

    pub fn from_exponent(exponent: u32) -> Result<Self> {
        if exponent >= u64::BITS {
            return Err(Error::out_of_range(
                "rank exponent",
                exponent.into(),
                "0..=63",
            ));
        }
        Ok(OperatorRank(exponent))
    }

    pub fn new(rank: u64) -> Result<Self> {
        if !rank.is_power_of_two() {
            return Err(Error::RankNotPowerOfTwo(rank));
        }
        Ok(OperatorRank(rank.trailing_zeros()))
    }

    pub fn exponent(self) -> u32 {
        self.0
    }

    pub fn value(self) -> u64 {
        1u64 << self.0
    }
}

impl fmt::Display for OperatorRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for OperatorRank {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.value())
    }
}

/// One period of an infinite periodic binary word; the length is `2^level`.
///
/// The stored period is not required to be minimal, so equality compares
/// the stored representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PeriodicWord {
    level: u32,
    blocks: Vec<u64>,
}

impl PeriodicWord {
    fn check_level(level: u32) -> Result<()> {
        if level > MAX_LEVEL {
            Err(Error::LevelTooLarge(level))
        } else {
            Ok(())
        }
    }

    fn zeroed(level: u32) -> Self {
        PeriodicWord {
            level,
            blocks: vec![0; block_count(level)],
        }
    }

    pub fn zeros(level: u32) -> Result<Self> {
        Self::check_level(level)?;
        Ok(Self::zeroed(level))
    }

    pub fn ones(level: u32) -> Result<Self> {
        Self::check_level(level)?;
        let mut word = Self::zeroed(level);
        let mask = low_mask(word.len());
        word.blocks.iter_mut().for_each(|b| *b = mask);
        Ok(word)
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        let bits: Vec<bool> = bits.into_iter().collect();
        if !bits.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(bits.len()));
        }
        let level = bits.len().trailing_zeros();
        Self::check_level(level)?;
        let mut word = Self::zeroed(level);
        for (j, bit) in bits.into_iter().enumerate() {
            if bit {
                word.blocks[j / BLOCK_BITS] |= 1 << (j % BLOCK_BITS);
            }
        }
        Ok(word)
    }

    /// Uniformly random word of the given level.
    pub fn random<R: Rng + ?Sized>(level: u32, rng: &mut R) -> Result<Self> {
        Self::check_level(level)?;
        let mut word = Self::zeroed(level);
        let mask = low_mask(word.len());
        word.blocks
            .iter_mut()
            .for_each(|b| *b = rng.gen::<u64>() & mask);
        Ok(word)
    }

    /// Parses `0b…` (one character per position) or `0x…` (four positions
    /// per hex digit, most significant bit first).
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let (prefix, digits) = match trimmed.get(..2) {
            Some(prefix) => (prefix, &trimmed[2..]),
            None => ("", trimmed),
        };
        let bits: Vec<bool> = match prefix {
            "0b" | "0B" => digits
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::parse(text, format!("illegal binary digit {c:?}"))),
                })
                .collect::<Result<_>>()?,
            "0x" | "0X" => {
                let mut bits = Vec::with_capacity(digits.len() * 4);
                for c in digits.chars() {
                    let d = c
                        .to_digit(16)
                        .ok_or_else(|| Error::parse(text, format!("illegal hex digit {c:?}")))?;
                    bits.extend((0..4).rev().map(|s| (d >> s) & 1 == 1));
                }
                bits
            }
            _ => return Err(Error::parse(text, "expected a 0b or 0x prefix")),
        };
        if bits.is_empty() {
            return Err(Error::parse(text, "no digits"));
        }
        if !bits.len().is_power_of_two() {
            return Err(Error::parse(
                text,
                format!("length {} is not a power of two", bits.len()),
            ));
        }
        Self::from_bits(bits)
    }

    /// Every word of the given level, in increasing order of the packed
    /// code. Only practical for `level <= 4` (65,536 words) or 5.
    pub fn all_words(level: u32) -> impl Iterator<Item = PeriodicWord> {
        assert!(level <= 5, "exhaustive enumeration is limited to level 5");
        let count = 1u64 << (1u32 << level);
        (0..count).map(move |code| PeriodicWord {
            level,
            blocks: vec![code],
        })
    }

    /// Flips position `j` in place.
    pub fn toggle(&mut self, j: usize) {
        assert!(j < self.len(), "position {j} out of range");
        self.blocks[j / BLOCK_BITS] ^= 1 << (j % BLOCK_BITS);
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        1 << self.level
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len(), "position {j} out of range");
        (self.blocks[j / BLOCK_BITS] >> (j % BLOCK_BITS)) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |j| self.get(j))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.iter().collect()
    }

    pub fn count_ones(&self) -> u64 {
        self.blocks.iter().map(|b| u64::from(b.count_ones())).sum()
    }

    pub fn parity(&self) -> Parity {
        let folded = self.blocks.iter().fold(0u64, |acc, b| acc ^ b);
        if folded.count_ones() % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn is_all_ones(&self) -> bool {
        let mask = low_mask(self.len());
        self.blocks.iter().all(|&b| b == mask)
    }

    /// Word `r` with `r_j = w_{(j + shift) mod len}`.
    fn rotated(&self, shift: usize) -> PeriodicWord {
        let len = self.len();
        let shift = shift % len;
        if shift == 0 {
            return self.clone();
        }
        let blocks = if len <= BLOCK_BITS {
            let x = self.blocks[0];
            vec![((x >> shift) | (x << (len - shift))) & low_mask(len)]
        } else {
            let count = self.blocks.len();
            let (whole, part) = (shift / BLOCK_BITS, shift % BLOCK_BITS);
            (0..count)
                .map(|k| {
                    let lo = self.blocks[(k + whole) % count];
                    if part == 0 {
                        lo
                    } else {
                        let hi = self.blocks[(k + whole + 1) % count];
                        (lo >> part) | (hi << (BLOCK_BITS - part))
                    }
                })
                .collect()
        };
        PeriodicWord {
            level: self.level,
            blocks,
        }
    }

    fn xor_shift(&self, shift: usize) -> PeriodicWord {
        let mut out = self.rotated(shift);
        out.blocks
            .iter_mut()
            .zip(&self.blocks)
            .for_each(|(r, w)| *r ^= w);
        out
    }

    /// Rank-1 operator applied in place without allocating.
    pub(crate) fn step_rank1_in_place(&mut self) {
        let len = self.len();
        if len <= BLOCK_BITS {
            let x = self.blocks[0];
            let rotated = if len == 1 {
                x
            } else {
                ((x >> 1) | (x << (len - 1))) & low_mask(len)
            };
            self.blocks[0] = x ^ rotated;
            return;
        }
        let first = self.blocks[0];
        let count = self.blocks.len();
        for k in 0..count {
            let next = if k + 1 < count {
                self.blocks[k + 1]
            } else {
                first
            };
            let cur = self.blocks[k];
            self.blocks[k] = cur ^ ((cur >> 1) | (next << (BLOCK_BITS - 1)));
        }
    }

    /// The operator of the given rank: `z_j = w_j ^ w_{(j + h) mod 2^n}`.
    pub fn apply_operator(&self, rank: OperatorRank) -> Result<PeriodicWord> {
        if rank.exponent() > self.level {
            return Err(Error::RankTooLarge {
                exponent: rank.exponent(),
                level: self.level,
            });
        }
        Ok(self.xor_shift(1 << rank.exponent()))
    }

    /// `t` successive rank-1 applications. The zero word is a fixed point,
    /// so iteration stops early once it is reached.
    pub fn iterate_rank1(&self, t: u64) -> PeriodicWord {
        let mut word = self.clone();
        for _ in 0..t {
            if word.is_zero() {
                break;
            }
            word.step_rank1_in_place();
        }
        word
    }

    fn halves(&self) -> (PeriodicWord, PeriodicWord) {
        assert!(self.level >= 1, "a length-1 word has no halves");
        let level = self.level - 1;
        if self.level > BLOCK_LEVEL {
            let mid = self.blocks.len() / 2;
            (
                PeriodicWord {
                    level,
                    blocks: self.blocks[..mid].to_vec(),
                },
                PeriodicWord {
                    level,
                    blocks: self.blocks[mid..].to_vec(),
                },
            )
        } else {
            let half = 1usize << level;
            let x = self.blocks[0];
            let mask = low_mask(half);
            (
                PeriodicWord {
                    level,
                    blocks: vec![x & mask],
                },
                PeriodicWord {
                    level,
                    blocks: vec![(x >> half) & mask],
                },
            )
        }
    }

    fn halves_equal(&self) -> bool {
        if self.level > BLOCK_LEVEL {
            let mid = self.blocks.len() / 2;
            self.blocks[..mid] == self.blocks[mid..]
        } else {
            let half = 1usize << (self.level - 1);
            let x = self.blocks[0];
            x & low_mask(half) == x >> half
        }
    }

    /// XOR of the two halves, a word of half the length. This is the
    /// rank-`2^(n-1)` operator followed by dropping the repeated half.
    pub fn fold_halves(&self) -> PeriodicWord {
        let (mut lo, hi) = self.halves();
        lo.blocks
            .iter_mut()
            .zip(&hi.blocks)
            .for_each(|(a, b)| *a ^= b);
        lo
    }

    /// The word `self` followed by `other`; both must have the same level.
    pub fn concat(&self, other: &PeriodicWord) -> Result<PeriodicWord> {
        if other.level != self.level {
            return Err(Error::InvalidFamily(format!(
                "cannot concatenate levels {} and {}",
                self.level, other.level
            )));
        }
        let level = self.level + 1;
        Self::check_level(level)?;
        let blocks = if self.level >= BLOCK_LEVEL {
            let mut blocks = self.blocks.clone();
            blocks.extend_from_slice(&other.blocks);
            blocks
        } else {
            vec![self.blocks[0] | (other.blocks[0] << self.len())]
        };
        Ok(PeriodicWord { level, blocks })
    }

    /// `ww`, the same infinite word stored with twice the period.
    pub fn doubled(&self) -> Result<PeriodicWord> {
        self.concat(self)
    }

    /// Minimal period together with the repetition factor `2^n / |u|`.
    /// The zero word reduces to the single-letter word `0`.
    pub fn reduce_to_minimal_period(&self) -> (PeriodicWord, u64) {
        let mut word = self.clone();
        while word.level > 0 && word.halves_equal() {
            word = word.halves().0;
        }
        let factor = 1u64 << (self.level - word.level);
        (word, factor)
    }

    pub fn minimal_period_level(&self) -> u32 {
        let mut level = self.level;
        let mut word = std::borrow::Cow::Borrowed(self);
        while level > 0 && word.halves_equal() {
            word = std::borrow::Cow::Owned(word.halves().0);
            level -= 1;
        }
        level
    }

    pub fn to_binary_string(&self) -> String {
        let mut s = String::with_capacity(self.len() + 2);
        s.push_str("0b");
        s.extend(self.iter().map(|b| if b { '1' } else { '0' }));
        s
    }

    /// Hex rendering; `None` for words shorter than one hex digit.
    pub fn to_hex_string(&self) -> Option<String> {
        if self.level < 2 {
            return None;
        }
        let mut s = String::with_capacity(self.len() / 4 + 2);
        s.push_str("0x");
        for chunk in 0..self.len() / 4 {
            let digit = (0..4).fold(0u32, |acc, s| {
                (acc << 1) | u32::from(self.get(4 * chunk + s))
            });
            s.push(char::from_digit(digit, 16).expect("nibble"));
        }
        Some(s)
    }
}

impl FromStr for PeriodicWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PeriodicWord::parse(s)
    }
}

impl fmt::Display for PeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary_string())
    }
}

impl fmt::Debug for PeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicWord({})", self.to_binary_string())
    }
}

impl Serialize for PeriodicWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Unpacked one-bit-per-element versions of the word operators, used to
/// audit the packed paths.
pub mod reference {
    pub fn apply_operator(bits: &[bool], shift: usize) -> Vec<bool> {
        let len = bits.len();
        (0..len)
            .map(|j| bits[j] ^ bits[(j + shift) % len])
            .collect()
    }

    pub fn iterate_rank1(bits: &[bool], t: u64) -> Vec<bool> {
        let mut bits = bits.to_vec();
        for _ in 0..t {
            bits = apply_operator(&bits, 1);
        }
        bits
    }
}
