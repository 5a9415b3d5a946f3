//! Randomized policies: a density, one seeded run, and Monte Carlo against
//! the exact expectation.

use skirental::randomized::{monte_carlo, policy_density, run_randomized, DensityKind};
use skirental::{GroupState, Instance, ProblemParams};

fn main() -> skirental::Result<()> {
    let params = ProblemParams::new(3, 4, 9)?;
    let inst = Instance::for_params(&params, vec![1, 5, 6])?;

    let d = policy_density(&params, &GroupState::empty(), DensityKind::PSd)?;
    println!("P_SD at the start, T = {}:", d.threshold);
    for (day, mass) in d.iter() {
        println!("  day {day}: {mass:.6}");
    }

    let run = run_randomized(&params, &inst, DensityKind::PSd, 7)?;
    println!("seed 7: per-agent {:?}", run.per_agent());

    for kind in DensityKind::ALL {
        let mc = monte_carlo(&params, &inst, kind, 20_000, 1)?;
        println!(
            "{:<12} mean {:.4} +- {:.4}  exact {:.4}  z {:+.2}",
            kind.label(),
            mc.mean,
            mc.stderr,
            mc.exact,
            mc.z_score
        );
    }
    Ok(())
}
