//! Exhaustive comparison of symmetric and asymmetric deterministic threshold
//! vectors for small groups.
//!
//! Agent `m` buys on day `T_m` if it is still active then; `T_m = h + 1`
//! means it never buys within the horizon `h`. Agents that share the largest
//! threshold and are still active on that day buy together, taking the group
//! pass when it is cheaper than their individual passes.

use serde::Serialize;

use crate::benchmark::ovopt;
use crate::error::{Error, Result};
use crate::model::{cost, cost_to_f64, Cost, Instance, ProblemParams};
use crate::search::node_budget_from_env;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DominanceObjective {
    Overall,
    /// State-dependent ratio at the initial state, where it coincides with
    /// the overall benchmark.
    StateDependent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub objective: DominanceObjective,
    pub horizon: u32,
    pub best_symmetric_ratio: f64,
    pub best_asymmetric_ratio: f64,
    pub symmetric_witness: Vec<u32>,
    pub asymmetric_witness: Vec<u32>,
    pub evaluations: u64,
    pub verdict: bool,
    #[serde(skip)]
    pub exact: (Cost, Cost),
}

/// Cost of each agent under threshold vector `thresholds` on `days`
/// (both in agent order, not necessarily sorted).
pub fn vector_policy_cost(params: &ProblemParams, thresholds: &[u32], days: &[u32]) -> Vec<Cost> {
    let top = thresholds.iter().copied().max().unwrap_or(0);
    let pooled: Vec<usize> = (0..days.len())
        .filter(|&a| thresholds[a] == top && days[a] >= top)
        .collect();
    let group_share = if pooled.len() > 1 {
        params.purchase_share(pooled.len())
    } else {
        cost(params.individual_cost())
    };
    (0..days.len())
        .map(|a| {
            let (t, n) = (thresholds[a], days[a]);
            if n < t {
                cost(i64::from(n))
            } else if pooled.contains(&a) {
                cost(i64::from(t) - 1) + group_share
            } else {
                cost(i64::from(t) - 1 + params.individual_cost())
            }
        })
        .collect()
}

fn for_each_vector(m: usize, lo: u32, hi: u32, mut f: impl FnMut(&[u32])) {
    let mut v = vec![lo; m];
    loop {
        f(&v);
        let Some(pos) = v.iter().rposition(|&x| x < hi) else {
            return;
        };
        v[pos] += 1;
        for x in &mut v[pos + 1..] {
            *x = lo;
        }
    }
}

fn worst_ratio(params: &ProblemParams, thresholds: &[u32], horizon: u32) -> Cost {
    let m = thresholds.len();
    let mut worst = cost(0);
    for_each_vector(m, 1, horizon, |days| {
        let total: Cost = vector_policy_cost(params, thresholds, days).iter().sum();
        let mut sorted = days.to_vec();
        sorted.sort_unstable();
        let opt = ovopt(params, &Instance::new(sorted).expect("positive days"));
        let r = total / opt;
        if r > worst {
            worst = r;
        }
    });
    worst
}

pub fn brute_force_symmetric_dominance(
    params: &ProblemParams,
    horizon: u32,
    objective: DominanceObjective,
) -> Result<DominanceReport> {
    brute_force_symmetric_dominance_with_budget(params, horizon, objective, node_budget_from_env())
}

pub fn brute_force_symmetric_dominance_with_budget(
    params: &ProblemParams,
    horizon: u32,
    objective: DominanceObjective,
    budget: u64,
) -> Result<DominanceReport> {
    let m = params.num_agents();
    if m > 3 {
        return Err(Error::InvalidArgument(format!(
            "dominance search supports M <= 3, got {m}"
        )));
    }
    if horizon < params.individual_cost() as u32 {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is below B = {}",
            params.individual_cost()
        )));
    }
    let required = u128::from(horizon + 1).pow(m as u32) * u128::from(horizon).pow(m as u32);
    if required > u128::from(budget) {
        return Err(Error::SearchSpaceTooLarge { required, budget });
    }

    let mut best_sym: Option<(Cost, Vec<u32>)> = None;
    let mut best_asym: Option<(Cost, Vec<u32>)> = None;
    for_each_vector(m, 1, horizon + 1, |t| {
        let r = worst_ratio(params, t, horizon);
        let slot = if t.iter().all(|&x| x == t[0]) {
            &mut best_sym
        } else {
            &mut best_asym
        };
        if slot.as_ref().is_none_or(|(b, _)| r < *b) {
            *slot = Some((r, t.to_vec()));
        }
    });
    let (sym, sym_w) = best_sym.expect("symmetric vectors exist");
    // with a single agent every vector is symmetric
    let (asym, asym_w) = best_asym.unwrap_or_else(|| (sym, sym_w.clone()));
    Ok(DominanceReport {
        objective,
        horizon,
        best_symmetric_ratio: cost_to_f64(&sym),
        best_asymmetric_ratio: cost_to_f64(&asym),
        symmetric_witness: sym_w,
        asymmetric_witness: asym_w,
        evaluations: required as u64,
        verdict: sym <= asym,
        exact: (sym, asym),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pooled_buyers_share_group_pass() {
        let p = ProblemParams::new(2, 3, 4).unwrap();
        let c = vector_policy_cost(&p, &[2, 2], &[5, 5]);
        assert_eq!(c, vec![cost(3), cost(3)]);
        let c = vector_policy_cost(&p, &[2, 2], &[1, 5]);
        assert_eq!(c, vec![cost(1), cost(4)]);
        let c = vector_policy_cost(&p, &[1, 3], &[5, 5]);
        assert_eq!(c, vec![cost(3), cost(5)]);
    }

    #[test]
    fn small_cases_hold() {
        let p = ProblemParams::new(2, 3, 4).unwrap();
        let r = brute_force_symmetric_dominance(&p, 6, DominanceObjective::Overall).unwrap();
        assert!(r.verdict, "{r:?}");
        let p = ProblemParams::new(2, 3, 5).unwrap();
        let r = brute_force_symmetric_dominance(&p, 6, DominanceObjective::StateDependent).unwrap();
        assert!(r.verdict, "{r:?}");
    }

    #[test]
    fn single_agent_is_trivial() {
        let p = ProblemParams::relaxed(1, 3, 4).unwrap();
        let r = brute_force_symmetric_dominance(&p, 6, DominanceObjective::Overall).unwrap();
        assert_eq!(r.best_symmetric_ratio, r.best_asymmetric_ratio);
        assert!((r.best_symmetric_ratio - (2.0 - 1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn budget_refuses_large_spaces() {
        let p = ProblemParams::new(3, 10, 20).unwrap();
        assert!(matches!(
            brute_force_symmetric_dominance_with_budget(&p, 30, DominanceObjective::Overall, 1000),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }
}
