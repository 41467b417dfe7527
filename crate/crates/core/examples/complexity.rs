//! Complexity of a few words by brute force and by the fast engine, with
//! the certificate the fast engine produces.
//!
//! cargo run --example complexity

use std::error::Error;

use arnold_complexity::{complexity_fast, complexity_naive, PeriodicWord};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for text in [
        "0b10110100",
        "0b10000010",
        "0b11011101",
        "0xdeadbeef",
        "0b0000",
    ] {
        let word: PeriodicWord = text.parse()?;
        let (naive, trace) = complexity_naive(&word);
        let (fast, cert) = complexity_fast(&word);
        assert_eq!(naive, fast);
        let ranks: Vec<String> = cert.ranks.iter().map(ToString::to_string).collect();
        println!(
            "{word}: A={fast}  ({} rank-1 steps; fast: ranks [{}] + final {})",
            trace.steps.len(),
            ranks.join(", "),
            cert.final_complexity
        );
    }

    let (_, trace) = complexity_naive(&"0b10110100".parse()?);
    println!("\nrank-1 chain of 0b10110100:");
    for step in &trace.steps {
        println!("  {}", step.result);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
