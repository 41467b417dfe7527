//! Operator planning on complexity values: the 16-word table for n = 4
//! and the nine-digit even example.
//!
//! cargo run --example planner

use std::error::Error;

use arnold_complexity::{bfs_min_ops, finals_set, plan_ranks, ComplexityValue};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!(
        "finals for n=4: {:?}",
        finals_set(4).into_iter().rev().collect::<Vec<_>>()
    );
    for a in (1..=16).rev() {
        let bits = if a > 8 { 4 } else { 3 };
        let plan = plan_ranks(a, bits)?;
        let ranks: Vec<String> = plan.ranks.iter().map(ToString::to_string).collect();
        println!(
            "A={a:>2}  {:<14} ranks [{}] -> {}",
            plan.subcase.to_string(),
            ranks.join(","),
            plan.final_value
        );
    }

    let plan = plan_ranks(372, 9)?;
    println!(
        "\nA = {} ({})",
        plan.start,
        ComplexityValue::new(plan.start, 9)?
    );
    for (rank, value) in plan.ranks.iter().zip(plan.intermediates()) {
        println!(
            "  rank {rank:>3} -> {} ({})",
            value,
            ComplexityValue::new(value, 9)?
        );
    }
    println!(
        "{} operators ({}), BFS agrees: {}",
        plan.count,
        plan.subcase,
        bfs_min_ops(372, 9)? == plan.count
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
