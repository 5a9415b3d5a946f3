//! Unilateral-deviation check of offline strategy profiles.
//!
//! Each agent picks one of three offline plans: rent on every active day,
//! buy an individual pass, or join the group pass. The group price is split
//! evenly among the agents that join it, so a lone group buyer pays `G`.

use serde::Serialize;

use crate::benchmark::ell_star;
use crate::model::{cost, cost_to_f64, Cost, Instance, ProblemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    Rent,
    Individual,
    Group,
}

const STRATEGIES: [Strategy; 3] = [Strategy::Rent, Strategy::Individual, Strategy::Group];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deviation {
    pub agent: usize,
    pub from: Strategy,
    pub to: Strategy,
    pub current_cost: f64,
    pub deviation_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NashReport {
    pub is_equilibrium: bool,
    pub profile: Vec<Strategy>,
    pub costs: Vec<f64>,
    /// Every strictly profitable unilateral deviation.
    pub deviations: Vec<Deviation>,
}

fn agent_cost(params: &ProblemParams, days: u32, s: Strategy, group_size: usize) -> Cost {
    match s {
        Strategy::Rent => cost(i64::from(days)),
        Strategy::Individual => cost(params.individual_cost()),
        Strategy::Group => Cost::new(params.group_cost(), group_size.max(1) as i64),
    }
}

/// The offline profile behind `indopt`: the first `l*` agents rent, the rest
/// share a group pass when `G/(M-l*) <= B` and buy individually otherwise.
pub fn indopt_profile(params: &ProblemParams, instance: &Instance) -> Vec<Strategy> {
    let star = ell_star(params, instance);
    let m = params.num_agents();
    let buy =
        if star < m && Cost::new(params.group_cost(), (m - star) as i64) <= cost(params.individual_cost()) {
            Strategy::Group
        } else {
            Strategy::Individual
        };
    (0..instance.len())
        .map(|i| if i < star { Strategy::Rent } else { buy })
        .collect()
}

pub fn nash_verify(params: &ProblemParams, instance: &Instance) -> NashReport {
    nash_verify_profile(params, instance, &indopt_profile(params, instance))
}

pub fn nash_verify_profile(params: &ProblemParams, instance: &Instance, profile: &[Strategy]) -> NashReport {
    assert_eq!(profile.len(), instance.len(), "one strategy per agent");
    let group = profile.iter().filter(|&&s| s == Strategy::Group).count();
    let costs: Vec<Cost> = profile
        .iter()
        .zip(instance.days())
        .map(|(&s, &n)| agent_cost(params, n, s, group))
        .collect();

    let mut deviations = Vec::new();
    for (agent, (&from, &n)) in profile.iter().zip(instance.days()).enumerate() {
        for to in STRATEGIES {
            if to == from {
                continue;
            }
            // Joining the group adds this agent to it.
            let size = if to == Strategy::Group { group + 1 } else { group };
            let alt = agent_cost(params, n, to, size);
            if alt < costs[agent] {
                deviations.push(Deviation {
                    agent,
                    from,
                    to,
                    current_cost: cost_to_f64(&costs[agent]),
                    deviation_cost: cost_to_f64(&alt),
                });
            }
        }
    }
    NashReport {
        is_equilibrium: deviations.is_empty(),
        profile: profile.to_vec(),
        costs: costs.iter().map(cost_to_f64).collect(),
        deviations,
    }
}
