//! Thinned-out words, their reassembly and the parity tree that spots
//! final words.
//!
//! cargo run --example parity_tree

use std::error::Error;

use arnold_complexity::thinning::parity_tree_reference;
use arnold_complexity::{detect_final, parity_tree, thin, union_thinned, PeriodicWord};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let word: PeriodicWord = "0b10110100".parse()?;

    let parts: Vec<_> = (0..2)
        .map(|i| thin(&word, 1, i).map(|t| (i, t)))
        .collect::<Result<_, _>>()?;
    for (i, part) in &parts {
        println!("step-2 decimation at offset {i}: {part}");
    }
    assert_eq!(union_thinned(&parts, 1)?, word);

    let tree = parity_tree(&word);
    for m in 0..=tree.depth() {
        println!("level {m}: {}", tree.level(m));
    }
    println!("XORs: {}", parity_tree_reference(&word).xor_count());

    for text in ["0b10110100", "0b11011101", "0b10000010", "0b1111"] {
        let w: PeriodicWord = text.parse()?;
        match detect_final(&w) {
            Some(d) => println!(
                "{w}: final, period 2^{}, all-odd level {}, A = {}",
                d.period_level, d.level, d.complexity
            ),
            None => println!("{w}: not final"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
