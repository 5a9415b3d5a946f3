//! Independent checks of the policies: LP elimination, exhaustive dominance
//! searches, an exact simplex for the two-agent mixture LP, and the Yao bound.

pub mod dominance;
pub mod lp;
pub mod simplex;
pub mod two_agent;
pub mod yao;

pub use dominance::{brute_force_symmetric_dominance, DominanceObjective, DominanceReport};
pub use lp::{solve_homogeneous_lp, solve_state_lp, LpKind, LpSolution, LpSystem};
pub use two_agent::{verify_two_agent_randomized_symmetry, TwoAgentReport};
pub use yao::{yao_lower_bound, YaoReport};
