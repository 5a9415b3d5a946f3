//! Yao's bound next to the randomized ratio for growing group prices.

use skirental::randomized::norm_g;
use skirental::verification::yao_lower_bound;
use skirental::{GroupState, ProblemParams};

fn main() -> skirental::Result<()> {
    let p = ProblemParams::new(10, 10, 60)?;
    let r = yao_lower_bound(&p);
    println!("E[opt] = {:.6}, bound = {:.6}", r.expected_opt, r.ratio);
    for (t, c) in &r.expected_cost {
        println!("  buy at {t}: E[cost] = {c:.6}");
    }
    for t in [6.0, 60.0, 1000.0] {
        println!("g(T = {t}) = {:.6}", norm_g(&p, &GroupState::empty(), t)?);
    }
    Ok(())
}
