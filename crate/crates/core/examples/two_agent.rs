//! Whether mixtures of symmetric joint policies are optimal for two agents.

use skirental::verification::verify_two_agent_randomized_symmetry;

fn main() -> skirental::Result<()> {
    for (b, g) in [(4, 5), (5, 6), (5, 7)] {
        let r = verify_two_agent_randomized_symmetry(b, g, 4)?;
        println!(
            "B={b} G={g}: all policies {:.5}, symmetric only {:.5}, symmetric support {}",
            r.full_ratio, r.symmetric_ratio, r.symmetric_support
        );
        for (col, w) in &r.mixture {
            println!("    {col}: {w:.5}");
        }
    }
    Ok(())
}
