//! Offline benchmarks and the Nash check on a two-agent instance.

use skirental::nash::nash_verify;
use skirental::{ell_star, indopt, ovopt, sdopt, GroupState, Instance, ProblemParams};

fn main() -> skirental::Result<()> {
    let params = ProblemParams::new(2, 5, 8)?;
    let inst = Instance::for_params(&params, vec![2, 10])?;

    println!("ovopt            = {}", ovopt(&params, &inst));
    println!(
        "sdopt(after 1st) = {}",
        sdopt(&params, &inst, &GroupState::prefix_of(&inst, 1))?
    );
    println!("ell*             = {}", ell_star(&params, &inst));
    println!("indopt           = {:?}", indopt(&params, &inst));

    let report = nash_verify(&params, &inst);
    println!(
        "profile {:?} is an equilibrium: {}",
        report.profile, report.is_equilibrium
    );
    for d in &report.deviations {
        println!("  agent {} would switch {:?} -> {:?}", d.agent, d.from, d.to);
    }
    Ok(())
}
