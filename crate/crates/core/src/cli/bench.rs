//! Median wall-time comparison of the two engines.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engines::{complexity_fast, naive_complexity, synthesize_word};
use crate::error::{Error, Result};

/// Widest words the benchmark accepts; the naive engine is quadratic.
pub const MAX_BENCH_BITS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub bits: u32,
    pub samples: usize,
    pub seed: u64,
    /// Every sampled word has complexity strictly above this.
    pub complexity_floor: u64,
    pub naive_median_ns: u64,
    pub fast_median_ns: u64,
    pub speedup: f64,
    /// Both engines returned the same complexity on every sample.
    pub agree: bool,
}

/// Complexities sampled just above `2^(n-1) + 2^(n-2)`, where the naive
/// engine needs the most rank-1 steps among typical inputs.
pub fn sample_complexities(bits: u32, samples: usize, seed: u64) -> (u64, Vec<u64>) {
    let top = 1u64 << bits;
    let floor = (3 * top) / 4;
    let span = (top / 8).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..samples)
        .map(|_| (floor + 1 + rng.gen_range(0..span)).min(top))
        .collect();
    (floor, values)
}

fn median(mut times: Vec<u64>) -> u64 {
    times.sort_unstable();
    let mid = times.len() / 2;
    if times.len() % 2 == 1 {
        times[mid]
    } else {
        (times[mid - 1] + times[mid]) / 2
    }
}

pub fn run_bench(bits: u32, samples: usize, seed: u64) -> Result<BenchReport> {
    if samples == 0 {
        return Err(Error::out_of_range("sample count", 0, "1.."));
    }
    if bits > MAX_BENCH_BITS {
        return Err(Error::out_of_range(
            "bit width",
            bits.into(),
            format!("0..={MAX_BENCH_BITS}"),
        ));
    }
    let (floor, values) = sample_complexities(bits, samples, seed);
    let mut naive_times = Vec::with_capacity(samples);
    let mut fast_times = Vec::with_capacity(samples);
    let mut agree = true;
    for (i, &a) in values.iter().enumerate() {
        let word = synthesize_word(bits, a, seed.wrapping_add(i as u64))?;

        let start = Instant::now();
        let naive = std::hint::black_box(naive_complexity(std::hint::black_box(&word)));
        naive_times.push(start.elapsed().as_nanos() as u64);

        let start = Instant::now();
        let (fast, _) = std::hint::black_box(complexity_fast(std::hint::black_box(&word)));
        fast_times.push(start.elapsed().as_nanos() as u64);

        agree &= naive == fast && fast == a;
    }
    let naive_median_ns = median(naive_times);
    let fast_median_ns = median(fast_times);
    Ok(BenchReport {
        bits,
        samples,
        seed,
        complexity_floor: floor,
        naive_median_ns,
        fast_median_ns,
        speedup: naive_median_ns as f64 / fast_median_ns.max(1) as f64,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_stay_in_band() {
        for bits in 0..=14 {
            let (floor, values) = sample_complexities(bits, 50, 3);
            assert!(
                values.iter().all(|&a| a > floor && a <= 1 << bits),
                "bits={bits}"
            );
        }
    }

    #[test]
    fn median_of_even_and_odd_counts() {
        assert_eq!(median(vec![5, 1, 3]), 3);
        assert_eq!(median(vec![4, 1, 3, 2]), 2);
    }

    #[test]
    fn small_bench_runs() {
        let report = run_bench(4, 5, 1).unwrap();
        assert!(report.agree);
        assert_eq!(report.samples, 5);
        assert!(run_bench(4, 0, 1).is_err());
    }
}
