//! Building words with a chosen complexity.
//!
//! cargo run --example synthesize

use std::error::Error;

use arnold_complexity::engines::naive_complexity;
use arnold_complexity::synthesize_word;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for (n, a) in [(3, 6), (4, 11), (5, 17), (6, 64), (6, 0)] {
        let word = synthesize_word(n, a, 42)?;
        assert_eq!(naive_complexity(&word), a);
        println!("n={n} A={a:>2}: {word}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
