//! The power-of-two-rank operators: one rank-2^k step equals 2^k rank-1
//! steps, and every step lowers the complexity by its rank.
//!
//! cargo run --example operators

use std::error::Error;

use arnold_complexity::{
    check_scheme_equivalence, complexity_fast, run_scheme, OperatorRank, PeriodicWord,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let word: PeriodicWord = "0x8f3a".parse()?;
    let (a, _) = complexity_fast(&word);
    println!("w = {word}, A(w) = {a}");

    for k in 0..=word.level() {
        let rank = OperatorRank::from_exponent(k)?;
        let image = word.apply_operator(rank)?;
        assert!(check_scheme_equivalence(&word, k)?);
        let (b, _) = complexity_fast(&image);
        assert_eq!(b, a.saturating_sub(rank.value()));
        println!("rank {:>2}: {image}  A = {b}", rank.value());
    }

    // Ranks may be applied in any order; the sum is what counts.
    let ranks = [OperatorRank::new(2)?, OperatorRank::new(4)?];
    let forward = run_scheme(&word, &ranks)?;
    let backward = run_scheme(&word, &[ranks[1], ranks[0]])?;
    assert_eq!(forward.last(), backward.last());
    println!(
        "ranks 2,4 and 4,2 both end at {} ({:?})",
        forward.last(),
        forward.terminal
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
