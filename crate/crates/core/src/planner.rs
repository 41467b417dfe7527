//! Complexity values and operator planning.
//!
//! One operator of rank `2^k` lowers the complexity of a word by `2^k`
//! (saturating at zero), so questions about the fewest operators that turn
//! a word into a final word can be answered on the integer `A(w)` alone.
//! A value is *final* when it has the form `2^p - 2^m + 1` with
//! `0 <= m < p`, or is 1; in binary that is a block of ones, a block of
//! zeros and a trailing one (`1…10…01`), or a power of two.
//!
//! [`min_ops`] and [`plan_ranks`] use the closed-form counts: keep the
//! longest run of ones and the low bit, clear everything else; for even
//! values either clear down to the leading bit or spend one rank-1 step to
//! become odd first. [`BfsTable`] answers the same question by exhaustive
//! search and is the oracle for the closed form.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::OperatorRank;

/// Widest value space the breadth-first oracle will tabulate.
pub const MAX_BFS_BITS: u32 = 24;

fn check_bits(n: u32) -> Result<()> {
    if n >= u64::BITS {
        return Err(Error::out_of_range("bit width", n.into(), "0..=63"));
    }
    Ok(())
}

fn check_value(a: u64, n: u32) -> Result<()> {
    check_bits(n)?;
    let top = 1u64 << n;
    if a == 0 || a > top {
        return Err(Error::out_of_range("complexity", a, format!("1..={top}")));
    }
    Ok(())
}

/// `true` when `a` is 1 or `2^p - 2^m + 1` for some `0 <= m < p`, i.e.
/// when `a - 1` is a single contiguous block of ones.
pub fn is_final(a: u64) -> bool {
    match a.checked_sub(1) {
        None => false,
        Some(0) => true,
        Some(x) => ((x >> x.trailing_zeros()) + 1).is_power_of_two(),
    }
}

/// All final values up to `2^n`.
pub fn finals_set(n: u32) -> BTreeSet<u64> {
    let mut finals = BTreeSet::from([1]);
    for p in 1..=n.min(u64::BITS - 1) {
        for m in 0..p {
            finals.insert((1u64 << p) - (1u64 << m) + 1);
        }
    }
    finals
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepCase {
    /// Bit `k` was set and is simply cleared.
    ClearBit,
    /// Bit `k` was clear: the lowest set bit above `k` is removed and every
    /// bit from `k` up to it is set. Values below `2^k` saturate at zero.
    Borrow,
}

/// One rank-`2^k` operator seen on the complexity value.
pub fn value_step(a: u64, k: u32, n: u32) -> Result<(u64, StepCase)> {
    check_bits(n)?;
    if k > n {
        return Err(Error::out_of_range(
            "rank exponent",
            k.into(),
            format!("0..={n}"),
        ));
    }
    let case = if (a >> k) & 1 == 1 {
        StepCase::ClearBit
    } else {
        StepCase::Borrow
    };
    Ok((a.saturating_sub(1u64 << k), case))
}

/// A maximal block of ones in bit positions `top - len + 1 ..= top`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Run {
    pub top: u32,
    pub len: u32,
}

/// A complexity value with its binary digit view.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityValue {
    pub value: u64,
    pub bits: u32,
    /// Digits `a_{width-1} … a_0`, most significant first. The width is
    /// `bits`, or `bits + 1` for the single value `2^bits`.
    pub digits: Vec<u8>,
    pub nu: u32,
    pub trailing_zeros: u32,
    /// Maximal runs of ones among bits `1..width`, top-most first. Bit 0
    /// never belongs to a run.
    pub runs: Vec<Run>,
}

impl ComplexityValue {
    pub fn new(value: u64, bits: u32) -> Result<Self> {
        check_bits(bits)?;
        if value > 1u64 << bits {
            return Err(Error::out_of_range(
                "complexity",
                value,
                format!("0..={}", 1u64 << bits),
            ));
        }
        let width = bits.max(u64::BITS - value.leading_zeros());
        let digits = (0..width).rev().map(|k| ((value >> k) & 1) as u8).collect();
        Ok(ComplexityValue {
            value,
            bits,
            digits,
            nu: value.count_ones(),
            trailing_zeros: if value == 0 {
                0
            } else {
                value.trailing_zeros()
            },
            runs: runs_of(value),
        })
    }

    pub fn width(&self) -> u32 {
        self.digits.len() as u32
    }

    pub fn max_run_len(&self) -> u32 {
        self.runs.iter().map(|r| r.len).max().unwrap_or(0)
    }

    /// The highest of the longest runs.
    pub fn topmost_max_run(&self) -> Option<Run> {
        let best = self.max_run_len();
        self.runs.iter().copied().find(|r| r.len == best)
    }

    pub fn digit_string(&self) -> String {
        self.digits.iter().map(|&d| char::from(b'0' + d)).collect()
    }
}

impl fmt::Display for ComplexityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digit_string())
    }
}

fn runs_of(value: u64) -> Vec<Run> {
    let mut runs = Vec::new();
    let mut len = 0;
    for k in (1..u64::BITS - value.leading_zeros()).rev() {
        if (value >> k) & 1 == 1 {
            len += 1;
        } else if len > 0 {
            runs.push(Run { top: k + len, len });
            len = 0;
        }
    }
    if len > 0 {
        // The run reaches down to bit 1.
        runs.push(Run { top: len, len });
    }
    runs
}

fn max_run_len(value: u64) -> u32 {
    runs_of(value).iter().map(|r| r.len).max().unwrap_or(0)
}

/// Operators needed for an odd value: keep the longest run and bit 0.
fn odd_count(a: u64) -> u32 {
    if is_final(a) {
        0
    } else {
        a.count_ones() - max_run_len(a) - 1
    }
}

fn odd_ranks(a: u64) -> Vec<OperatorRank> {
    if is_final(a) {
        return Vec::new();
    }
    let runs = runs_of(a);
    let best = runs
        .iter()
        .map(|r| r.len)
        .max()
        .expect("odd non-final value has a run");
    let run = runs
        .into_iter()
        .find(|r| r.len == best)
        .expect("maximum is attained");
    let kept = (run.top + 1 - run.len)..=run.top;
    (1..u64::BITS - a.leading_zeros())
        .rev()
        .filter(|k| (a >> k) & 1 == 1 && !kept.contains(k))
        .map(|k| OperatorRank::from_exponent(k).expect("k < 64"))
        .collect()
}

fn even_direct_ranks(a: u64) -> Vec<OperatorRank> {
    let top = u64::BITS - 1 - a.leading_zeros();
    (0..top)
        .rev()
        .filter(|k| (a >> k) & 1 == 1)
        .map(|k| OperatorRank::from_exponent(k).expect("k < 64"))
        .collect()
}

/// Fewest operators taking `a` to a final value, by the closed form.
pub fn min_ops(a: u64, n: u32) -> Result<u32> {
    check_value(a, n)?;
    Ok(if is_final(a) {
        0
    } else if a % 2 == 1 {
        odd_count(a)
    } else {
        (a.count_ones() - 1).min(1 + odd_count(a - 1))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subcase {
    #[serde(rename = "odd")]
    Odd,
    /// Clear every set bit below the leading one.
    #[serde(rename = "even-2.1")]
    EvenDirect,
    /// One rank-1 step to an odd value, then the odd plan.
    #[serde(rename = "even-2.2")]
    EvenViaOdd,
    #[serde(rename = "already-final")]
    AlreadyFinal,
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcase::Odd => "odd",
            Subcase::EvenDirect => "even-2.1",
            Subcase::EvenViaOdd => "even-2.2",
            Subcase::AlreadyFinal => "already-final",
        })
    }
}

/// A shortest rank sequence from a value to a final value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plan {
    pub start: u64,
    pub bits: u32,
    pub subcase: Subcase,
    pub ranks: Vec<OperatorRank>,
    pub final_value: u64,
    pub count: u32,
}

impl Plan {
    /// Value after each rank in turn; the last entry is `final_value`.
    pub fn intermediates(&self) -> Vec<u64> {
        self.ranks
            .iter()
            .scan(self.start, |value, rank| {
                *value = value.saturating_sub(rank.value());
                Some(*value)
            })
            .collect()
    }
}

/// Builds the plan realizing [`min_ops`]. Among equally long runs the
/// top-most is kept; when both even subcases cost the same the rank-1 route
/// is taken.
pub fn plan_ranks(a: u64, n: u32) -> Result<Plan> {
    let count = min_ops(a, n)?;
    let (subcase, ranks) = if is_final(a) {
        (Subcase::AlreadyFinal, Vec::new())
    } else if a % 2 == 1 {
        (Subcase::Odd, odd_ranks(a))
    } else {
        let direct = even_direct_ranks(a);
        let mut via_odd = vec![OperatorRank::UNIT];
        via_odd.extend(odd_ranks(a - 1));
        if via_odd.len() <= direct.len() {
            (Subcase::EvenViaOdd, via_odd)
        } else {
            (Subcase::EvenDirect, direct)
        }
    };
    debug_assert_eq!(ranks.len() as u32, count);
    let final_value = a - ranks.iter().map(|r| r.value()).sum::<u64>();
    Ok(Plan {
        start: a,
        bits: n,
        subcase,
        ranks,
        final_value,
        count,
    })
}

/// Shortest move counts from every value in `0..=2^n` to a final value,
/// where a move is [`value_step`] with any `k <= n`.
#[derive(Debug, Clone)]
pub struct BfsTable {
    bits: u32,
    distance: Vec<u32>,
}

const UNREACHED: u32 = u32::MAX;

impl BfsTable {
    pub fn build(n: u32) -> Result<Self> {
        if n > MAX_BFS_BITS {
            return Err(Error::out_of_range(
                "bit width",
                n.into(),
                format!("0..={MAX_BFS_BITS}"),
            ));
        }
        let top = 1u64 << n;
        let mut distance = vec![UNREACHED; top as usize + 1];
        let mut queue = VecDeque::new();
        for f in finals_set(n) {
            distance[f as usize] = 0;
            queue.push_back(f);
        }
        // Search backwards: `a` reaches `b` in one move iff
        // value_step(a, k) == b for some k. Moves into 0 are dead ends since
        // 0 is not final and only steps to itself.
        while let Some(b) = queue.pop_front() {
            let next = distance[b as usize] + 1;
            for k in 0..=n {
                let a = b + (1u64 << k);
                if a > top || distance[a as usize] != UNREACHED {
                    continue;
                }
                debug_assert_eq!(value_step(a, k, n).map(|s| s.0), Ok(b));
                distance[a as usize] = next;
                queue.push_back(a);
            }
        }
        Ok(BfsTable { bits: n, distance })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `None` for values that cannot reach a final value (only 0).
    pub fn distance(&self, a: u64) -> Option<u32> {
        self.distance
            .get(a as usize)
            .copied()
            .filter(|&d| d != UNREACHED)
    }
}

fn bfs_table(n: u32) -> Result<Arc<BfsTable>> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<BfsTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(table) = tables.lock().expect("bfs memo").get(&n) {
        return Ok(Arc::clone(table));
    }
    let table = Arc::new(BfsTable::build(n)?);
    tables
        .lock()
        .expect("bfs memo")
        .entry(n)
        .or_insert_with(|| Arc::clone(&table));
    Ok(table)
}

/// Breadth-first minimum number of operators from `a` to a final value.
pub fn bfs_min_ops(a: u64, n: u32) -> Result<u32> {
    check_value(a, n)?;
    let table = bfs_table(n)?;
    Ok(table.distance(a).expect("every positive value reaches 1"))
}

/// `(⌊n - 2√n + 1⌋, ⌊n - 2√n + 2⌋)` in exact integer arithmetic.
pub fn shannon_bound(n: u32) -> (u32, u32) {
    let four_n = 4 * u64::from(n);
    let root = four_n.isqrt();
    let ceil_two_sqrt = if root * root == four_n {
        root
    } else {
        root + 1
    };
    let odd = (u64::from(n) + 1 - ceil_two_sqrt) as u32;
    (odd, odd + 1)
}

/// Exhaustive Shannon-function table at one width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShannonReport {
    pub n: u32,
    pub max_odd: u32,
    pub max_even: u32,
    /// Smallest odd value attaining `max_odd`.
    pub witness_odd: Option<u64>,
    /// Smallest even value attaining `max_even`.
    pub witness_even: Option<u64>,
    pub bound_odd: u32,
    pub bound_even: u32,
    /// Closed form equals the breadth-first count for every value checked.
    pub consistent: bool,
    pub mismatches: Vec<u64>,
}

impl ShannonReport {
    pub fn within_bounds(&self) -> bool {
        self.max_odd <= self.bound_odd && self.max_even <= self.bound_even
    }
}

/// Maxima of the shortest transformation counts over the complexities a
/// word with full period `2^n` can have: odd values in `(2^(n-1), 2^n]`
/// and even values in `(2^(n-1), 2^n)`.
pub fn shannon_exhaustive(n: u32) -> Result<ShannonReport> {
    if n == 0 || n > MAX_BFS_BITS {
        return Err(Error::out_of_range(
            "bit width",
            n.into(),
            format!("1..={MAX_BFS_BITS}"),
        ));
    }
    let table = bfs_table(n)?;
    let top = 1u64 << n;
    let (bound_odd, bound_even) = shannon_bound(n);
    let mut report = ShannonReport {
        n,
        max_odd: 0,
        max_even: 0,
        witness_odd: None,
        witness_even: None,
        bound_odd,
        bound_even,
        consistent: true,
        mismatches: Vec::new(),
    };
    for a in top / 2 + 1..=top {
        let oracle = table.distance(a).expect("positive value");
        if min_ops(a, n)? != oracle {
            report.consistent = false;
            report.mismatches.push(a);
        }
        let (max, witness) = if a % 2 == 1 {
            (&mut report.max_odd, &mut report.witness_odd)
        } else if a < top {
            (&mut report.max_even, &mut report.witness_even)
        } else {
            continue;
        };
        if witness.is_none() || oracle > *max {
            *max = oracle;
            *witness = Some(a);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ranks(plan: &Plan) -> Vec<u64> {
        plan.ranks.iter().map(|r| r.value()).collect()
    }

    #[test]
    fn finals_examples() {
        assert_eq!(
            finals_set(4).into_iter().rev().collect::<Vec<_>>(),
            vec![16, 15, 13, 9, 8, 7, 5, 4, 3, 2, 1]
        );
        assert_eq!(finals_set(1), BTreeSet::from([1, 2]));
        assert!(finals_set(6).contains(&49));
        assert_eq!(finals_set(0), BTreeSet::from([1]));
    }

    #[test]
    fn finals_membership_agrees_with_enumeration() {
        for n in 0..=12 {
            let listed = finals_set(n);
            let filtered: BTreeSet<u64> = (0..=1u64 << n).filter(|&a| is_final(a)).collect();
            assert_eq!(listed, filtered, "n={n}");
        }
    }

    #[test]
    fn value_step_examples() {
        let a = 0b11011;
        assert_eq!(value_step(a, 1, 5).unwrap(), (0b11001, StepCase::ClearBit));
        let a = 0b10101;
        assert_eq!(value_step(a, 1, 5).unwrap(), (0b10011, StepCase::Borrow));
        let a = 0b101101;
        assert_eq!(value_step(a, 4, 6).unwrap(), (0b011101, StepCase::Borrow));
        assert_eq!(
            ComplexityValue::new(0b101101, 6).unwrap().topmost_max_run(),
            Some(Run { top: 3, len: 2 })
        );
        assert_eq!(
            ComplexityValue::new(0b011101, 6).unwrap().topmost_max_run(),
            Some(Run { top: 4, len: 3 })
        );
        assert_eq!(value_step(3, 2, 2).unwrap(), (0, StepCase::Borrow));
        assert!(value_step(3, 3, 2).is_err());
    }

    #[test]
    fn complexity_value_view() {
        let v = ComplexityValue::new(372, 9).unwrap();
        assert_eq!(v.digit_string(), "101110100");
        assert_eq!((v.nu, v.trailing_zeros), (5, 2));
        assert_eq!(
            v.runs,
            vec![
                Run { top: 8, len: 1 },
                Run { top: 6, len: 3 },
                Run { top: 2, len: 1 }
            ]
        );

        let v = ComplexityValue::new(0b110111, 6).unwrap();
        assert_eq!(v.runs, vec![Run { top: 5, len: 2 }, Run { top: 2, len: 2 }]);

        let v = ComplexityValue::new(371, 9).unwrap();
        assert_eq!(v.max_run_len(), 3);
        assert_eq!(v.runs.last(), Some(&Run { top: 1, len: 1 }));

        let v = ComplexityValue::new(16, 4).unwrap();
        assert_eq!(v.digit_string(), "10000");
        assert_eq!(
            ComplexityValue::new(113, 9).unwrap().digit_string(),
            "001110001"
        );
        assert!(ComplexityValue::new(17, 4).is_err());
        assert_eq!(ComplexityValue::new(0, 3).unwrap().runs, vec![]);
    }

    #[test]
    fn min_ops_examples() {
        assert_eq!(min_ops(372, 9).unwrap(), 3);
        assert_eq!(min_ops(55, 6).unwrap(), 2);
        assert_eq!(min_ops(14, 4).unwrap(), 1);
        assert_eq!(min_ops(13, 4).unwrap(), 0);
        assert!(min_ops(0, 4).is_err());
        assert!(min_ops(17, 4).is_err());
    }

    #[test]
    fn plan_examples() {
        let plan = plan_ranks(372, 9).unwrap();
        assert_eq!(plan.subcase, Subcase::EvenViaOdd);
        assert_eq!(ranks(&plan), vec![1, 256, 2]);
        assert_eq!(plan.final_value, 113);
        assert_eq!(plan.intermediates(), vec![371, 115, 113]);

        let plan = plan_ranks(55, 6).unwrap();
        assert_eq!(
            (plan.subcase, ranks(&plan), plan.final_value),
            (Subcase::Odd, vec![4, 2], 49)
        );

        let plan = plan_ranks(12, 4).unwrap();
        assert_eq!(
            (plan.subcase, ranks(&plan), plan.final_value),
            (Subcase::EvenDirect, vec![4], 8)
        );

        let plan = plan_ranks(13, 4).unwrap();
        assert_eq!((plan.subcase, plan.count), (Subcase::AlreadyFinal, 0));
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(bfs_min_ops(6, 3).unwrap(), 1);
        assert_eq!(bfs_min_ops(13, 4).unwrap(), 0);
        assert_eq!(bfs_min_ops(372, 9).unwrap(), 3);
        assert!(bfs_min_ops(0, 3).is_err());
        assert_eq!(BfsTable::build(3).unwrap().distance(0), None);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(shannon_bound(5), (1, 2));
        assert_eq!(shannon_bound(9), (4, 5));
        assert_eq!(shannon_bound(16), (9, 10));
    }

    #[test]
    fn bound_matches_square_comparison() {
        // Largest b with n + 1 - b >= 2√n, i.e. (n + 1 - b)^2 >= 4n.
        for n in 1..=10_000u64 {
            let b = (0..=n + 1)
                .rev()
                .find(|&b| (n + 1 - b).pow(2) >= 4 * n)
                .unwrap();
            assert_eq!(u64::from(shannon_bound(n as u32).0), b, "n={n}");
        }
    }

    #[test]
    fn shannon_examples() {
        let r4 = shannon_exhaustive(4).unwrap();
        assert_eq!(r4.max_odd.max(r4.max_even), 1);
        let r5 = shannon_exhaustive(5).unwrap();
        assert_eq!(
            (r5.max_odd, r5.bound_odd, r5.max_even, r5.bound_even),
            (1, 1, 2, 2)
        );
        assert!(r5.consistent);
        let r3 = shannon_exhaustive(3).unwrap();
        assert_eq!(r3.max_odd.max(r3.max_even), 1);
        assert_eq!(r3.witness_even, Some(6));
        assert!(shannon_exhaustive(0).is_err());
    }

    #[test]
    fn formula_matches_bfs_and_plans_replay() {
        for n in 1..=12 {
            let finals = finals_set(n);
            let table = BfsTable::build(n).unwrap();
            for a in 1..=1u64 << n {
                let plan = plan_ranks(a, n).unwrap();
                let mut value = a;
                for rank in &plan.ranks {
                    value = value_step(value, rank.exponent(), n).unwrap().0;
                }
                assert_eq!(value, plan.final_value);
                assert!(finals.contains(&value), "a={a} lands on {value}");
                assert_eq!(plan.count as usize, plan.ranks.len());
                if plan.subcase == Subcase::Odd {
                    let mut seen = plan.ranks.clone();
                    seen.dedup();
                    assert_eq!(seen.len(), plan.ranks.len());
                    assert!(!plan.ranks.contains(&OperatorRank::UNIT));
                }
                if a > 1u64 << (n - 1) {
                    assert_eq!(Some(plan.count), table.distance(a), "a={a} n={n}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn borrow_sets_the_gap(a in 1u64..1 << 20, k in 0u32..20) {
            prop_assume!((a >> k) & 1 == 0 && a > 1 << k);
            let (result, case) = value_step(a, k, 20).unwrap();
            prop_assert_eq!(case, StepCase::Borrow);
            let above = a >> (k + 1);
            let j = above.trailing_zeros() + 1;
            let removed = 1u64 << (k + j);
            let added: u64 = (k..k + j).map(|b| 1u64 << b).sum();
            prop_assert_eq!(a & added, 0);
            prop_assert_eq!(result, (a - removed) | added);
        }

        #[test]
        fn clear_bit_removes_one_term(a in 1u64..1 << 20, k in 0u32..20) {
            prop_assume!((a >> k) & 1 == 1);
            prop_assert_eq!(value_step(a, k, 20).unwrap(), (a ^ (1 << k), StepCase::ClearBit));
        }
    }
}
