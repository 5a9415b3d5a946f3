//! Offline optimal benchmarks: overall, state-dependent and individually
//! rational.

use crate::error::{Error, Result};
use crate::model::{cost, Cost, GroupState, Instance, ProblemParams};

/// Cheapest way for the whole group to cover `days` with full hindsight:
/// `min{G, sum_m min{B, N_m}}`.
pub fn ovopt(params: &ProblemParams, instance: &Instance) -> Cost {
    let b = params.individual_cost();
    let separate: i64 = instance.days().iter().map(|&n| i64::from(n).min(b)).sum();
    cost(separate.min(params.group_cost()))
}

/// Offline optimum when the revealed agents' rent is already sunk.
pub fn sdopt(params: &ProblemParams, instance: &Instance, state: &GroupState) -> Result<Cost> {
    if !state.is_prefix_of(instance) {
        return Err(Error::StateMismatch {
            revealed: state.revealed().to_vec(),
            days: instance.days().to_vec(),
        });
    }
    let b = params.individual_cost();
    let rest: i64 = instance.days()[state.inactive_count()..]
        .iter()
        .map(|&n| i64::from(n).min(b))
        .sum();
    Ok(cost(state.paid_cost() + rest.min(params.group_cost())))
}

/// Per-agent share `min{G/(M-l), B}` when `l` agents rent.
pub(crate) fn buyer_share(params: &ProblemParams, ell: usize) -> Cost {
    let k = (params.num_agents() - ell) as i64;
    Cost::new(params.group_cost(), k).min(cost(params.individual_cost()))
}

/// Number of agents whose individually rational choice is to rent; `M` when
/// nobody should buy.
pub fn ell_star(params: &ProblemParams, instance: &Instance) -> usize {
    let m = params.num_agents();
    (0..m.min(instance.len()))
        .find(|&ell| cost(i64::from(instance.days()[ell])) > buyer_share(params, ell))
        .unwrap_or(m)
}

/// Nash-equilibrium offline cost of every agent.
pub fn indopt(params: &ProblemParams, instance: &Instance) -> Vec<Cost> {
    let star = ell_star(params, instance);
    if star >= params.num_agents() {
        return instance.days().iter().map(|&n| cost(i64::from(n))).collect();
    }
    let share = buyer_share(params, star);
    instance
        .days()
        .iter()
        .map(|&n| {
            let n = cost(i64::from(n));
            if n <= share {
                n
            } else {
                share
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig3() -> (ProblemParams, Instance) {
        (
            ProblemParams::new(10, 10, 60).unwrap(),
            Instance::new((1..=10).collect()).unwrap(),
        )
    }

    #[test]
    fn ovopt_examples() {
        let (p, i) = fig3();
        assert_eq!(ovopt(&p, &i), cost(55));
        let p = ProblemParams::new(2, 5, 8).unwrap();
        assert_eq!(ovopt(&p, &Instance::new(vec![10, 10]).unwrap()), cost(8));
        let single = ProblemParams::relaxed(1, 4, 5).unwrap();
        assert_eq!(ovopt(&single, &Instance::new(vec![2]).unwrap()), cost(2));
    }

    #[test]
    fn sdopt_examples() {
        let (p, i) = fig3();
        let s = GroupState::prefix_of(&i, 1);
        assert_eq!(sdopt(&p, &i, &s).unwrap(), cost(55));
        assert_eq!(sdopt(&p, &i, &GroupState::empty()).unwrap(), ovopt(&p, &i));
        let p = ProblemParams::new(2, 5, 8).unwrap();
        let i = Instance::new(vec![2, 10]).unwrap();
        assert_eq!(sdopt(&p, &i, &GroupState::prefix_of(&i, 1)).unwrap(), cost(7));
    }

    #[test]
    fn sdopt_rejects_foreign_state() {
        let (p, i) = fig3();
        let s = GroupState::new(vec![3]).unwrap();
        assert!(matches!(sdopt(&p, &i, &s), Err(Error::StateMismatch { .. })));
    }

    #[test]
    fn ell_star_and_indopt() {
        let p = ProblemParams::new(2, 5, 8).unwrap();
        let i = Instance::new(vec![2, 10]).unwrap();
        assert_eq!(ell_star(&p, &i), 1);
        assert_eq!(indopt(&p, &i), vec![cost(2), cost(5)]);

        let p = ProblemParams::new(3, 4, 9).unwrap();
        let i = Instance::new(vec![1, 5, 6]).unwrap();
        assert_eq!(ell_star(&p, &i), 1);
        assert_eq!(indopt(&p, &i), vec![cost(1), cost(4), cost(4)]);

        let (p, i) = fig3();
        assert_eq!(ell_star(&p, &i), 10);
        assert_eq!(indopt(&p, &i), (1..=10).map(cost).collect::<Vec<_>>());
    }

    #[test]
    fn indopt_keeps_exact_fractional_share() {
        let p = ProblemParams::new(3, 5, 7).unwrap();
        let i = Instance::new(vec![4, 4, 4]).unwrap();
        assert_eq!(ell_star(&p, &i), 0);
        assert_eq!(indopt(&p, &i), vec![Cost::new(7, 3); 3]);
    }
}
