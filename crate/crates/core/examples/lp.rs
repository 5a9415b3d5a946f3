//! The threshold LP for a state, before and after differencing, and its
//! solution next to the closed-form density.

use skirental::experiments::figure3_scenario;
use skirental::randomized::{density_p, norm_g, DensityKind};
use skirental::verification::{LpKind, LpSystem};
use skirental::GroupState;

fn main() -> skirental::Result<()> {
    let (params, inst) = figure3_scenario();
    let state = GroupState::prefix_of(&inst, 8);
    let sys = LpSystem::for_state(&params, &state, LpKind::StateDependent)?;
    print!("{}", sys.to_csv());

    let mut diff = sys.clone();
    diff.difference();
    println!("differenced, upper triangular: {}", diff.is_upper_triangular());
    print!("{}", diff.to_csv());

    let sol = sys.solve()?;
    let t = (sol.first_day + sol.masses.len() as u32 - 1) as f64;
    let closed = density_p(&params, &state, t, DensityKind::PSd)?;
    println!(
        "ratio {} (closed form {})",
        sol.ratio,
        norm_g(&params, &state, t)?
    );
    for (i, m) in sol.masses.iter().enumerate() {
        println!(
            "  day {}: {m:.9} vs {:.9}",
            sol.first_day as usize + i,
            closed.masses[i]
        );
    }
    Ok(())
}
