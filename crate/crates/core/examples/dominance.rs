//! Exhaustive comparison of symmetric and asymmetric threshold vectors for
//! two agents.

use skirental::verification::{brute_force_symmetric_dominance, DominanceObjective};
use skirental::ProblemParams;

fn main() -> skirental::Result<()> {
    for b in 2..=4 {
        for g in b + 1..2 * b {
            let p = ProblemParams::new(2, b, g)?;
            let r = brute_force_symmetric_dominance(&p, 2 * b, DominanceObjective::Overall)?;
            println!(
                "B={b} G={g}: symmetric {:.4} {:?}, asymmetric {:.4} {:?} -> {}",
                r.best_symmetric_ratio,
                r.symmetric_witness,
                r.best_asymmetric_ratio,
                r.asymmetric_witness,
                if r.verdict { "holds" } else { "FAILS" }
            );
        }
    }
    Ok(())
}
