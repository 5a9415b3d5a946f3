//! Online policies for cooperative multi-agent ski rental with a group pass.
//!
//! `M` agents each need a resource for an unknown number of days. Every
//! agent can rent for 1 per day or buy an individual pass for `B`; the agents
//! still active can also share one group pass costing `G`. The crate provides
//! the offline benchmarks, the state-aware deterministic and randomized
//! threshold policies, adversary searches for their competitive ratios, and
//! independent checks (LP elimination, exhaustive dominance, Yao's bound).

pub mod benchmark;
pub mod cli;
pub mod deterministic;
pub mod error;
pub mod experiments;
pub mod io;
pub mod model;
pub mod nash;
pub mod randomized;
pub mod search;
pub mod verification;

pub use benchmark::{ell_star, indopt, ovopt, sdopt};
pub use error::{Error, Result};
pub use model::{Action, Cost, CostLedger, GroupState, Instance, ProblemParams};
