//! Median timing of both engines on words of length 2^12.
//!
//! cargo run --release --example speedup

use std::error::Error;

use arnold_complexity::cli::bench::run_bench;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let report = run_bench(12, 20, 1)?;
    assert!(report.agree);
    println!(
        "n=12, {} words with A > {}: naive {} ns, fast {} ns, {:.0}x",
        report.samples,
        report.complexity_floor,
        report.naive_median_ns,
        report.fast_median_ns,
        report.speedup
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
