//! Exhaustive maxima of the shortest transformation counts next to the
//! closed-form bound.
//!
//! cargo run --example shannon

use std::error::Error;

use arnold_complexity::shannon_exhaustive;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!(" n  odd (bound)  even (bound)  witnesses");
    for n in 1..=12 {
        let r = shannon_exhaustive(n)?;
        assert!(r.consistent);
        println!(
            "{n:>2}  {:>3} ({:>2})     {:>3} ({:>2})     {:?} {:?}",
            r.max_odd, r.bound_odd, r.max_even, r.bound_even, r.witness_odd, r.witness_even
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
