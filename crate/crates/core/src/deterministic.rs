//! State-aware deterministic threshold policies.
//!
//! While `l` agents are inactive the remaining `k = M - l` agents rent until
//! day `ceil(T(l))` and then all buy on that day. Whenever agents become
//! inactive the threshold is recomputed from the new state.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::benchmark::{indopt, ovopt, sdopt};
use crate::error::{Error, Result};
use crate::model::{
    cost, cost_to_f64, Action, Cost, CostLedger, GroupState, Instance, ProblemParams, Purchase,
};
use crate::search::{completions, SearchOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdKind {
    Overall,
    StateDependent,
    HomogeneousFixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    Overall,
    StateDependent,
    /// Ratio of one agent's cost to its Nash-equilibrium offline cost.
    IndividualRational {
        agent: usize,
    },
}

/// `min{(G - S)/(M - l), B}`; clamped to `B` once the paid rent reaches `G`.
pub fn threshold_ov(params: &ProblemParams, state: &GroupState) -> Cost {
    let b = cost(params.individual_cost());
    let k = state.remaining(params) as i64;
    let rest = params.group_cost() - state.paid_cost();
    if k == 0 || rest <= 0 {
        return b;
    }
    Cost::new(rest, k).min(b)
}

/// `min{G/(M - l), B}`.
pub fn threshold_sd(params: &ProblemParams, state: &GroupState) -> Cost {
    let b = cost(params.individual_cost());
    let k = state.remaining(params) as i64;
    if k == 0 {
        return b;
    }
    Cost::new(params.group_cost(), k).min(b)
}

/// `ceil(G/M)`.
pub fn homogeneous_threshold(params: &ProblemParams) -> u32 {
    let g = params.group_cost();
    let m = params.num_agents() as i64;
    Integer::div_ceil(&g, &m) as u32
}

pub fn threshold(params: &ProblemParams, state: &GroupState, kind: ThresholdKind) -> Cost {
    match kind {
        ThresholdKind::Overall => threshold_ov(params, state),
        ThresholdKind::StateDependent => threshold_sd(params, state),
        ThresholdKind::HomogeneousFixed => cost(i64::from(homogeneous_threshold(params))),
    }
}

pub(crate) fn ceil_day(t: &Cost) -> u32 {
    t.ceil().to_integer().max(1) as u32
}

/// First day the policy buys in `state`, never earlier than the first day
/// after the state was reached.
pub fn purchase_day(params: &ProblemParams, state: &GroupState, kind: ThresholdKind) -> u32 {
    ceil_day(&threshold(params, state, kind)).max(state.last_revealed() + 1)
}

/// Runs a threshold policy day by day from `start`.
///
/// `buy_day` maps each state to its purchase day; days earlier than the
/// first day of the state are moved up to that day. The revealed agents of
/// `start` are charged their rent.
pub(crate) fn simulate<F>(
    params: &ProblemParams,
    instance: &Instance,
    start: &GroupState,
    mut buy_day: F,
    mut ledger: Option<&mut CostLedger>,
) -> Vec<Cost>
where
    F: FnMut(&GroupState) -> u32,
{
    let days = instance.days();
    let m = days.len();
    let mut per_agent = vec![cost(0); m];
    let mut state = start.clone();
    let rent = |agent: usize, from: u32, to: u32, per: &mut Vec<Cost>, led: &mut Option<&mut CostLedger>| {
        if to < from {
            return;
        }
        per[agent] += cost(i64::from(to - from + 1));
        if let Some(l) = led.as_deref_mut() {
            for d in from..=to {
                l.record(params, d, agent, Action::Rent);
            }
        }
    };

    for (agent, &n) in days.iter().enumerate().take(state.inactive_count()) {
        rent(agent, 1, n, &mut per_agent, &mut ledger);
        if let Some(l) = ledger.as_deref_mut() {
            l.record(params, n + 1, agent, Action::Leave);
        }
    }
    let mut day = state.last_revealed() + 1;
    for agent in state.inactive_count()..m {
        rent(agent, 1, day - 1, &mut per_agent, &mut ledger);
    }

    while state.inactive_count() < m {
        let ell = state.inactive_count();
        let buy = buy_day(&state).max(day);
        let next = days[ell];
        if next < buy {
            for agent in ell..m {
                rent(agent, day, next, &mut per_agent, &mut ledger);
            }
            let mut agent = ell;
            while agent < m && days[agent] == next {
                if let Some(l) = ledger.as_deref_mut() {
                    l.record(params, next + 1, agent, Action::Leave);
                }
                state.push(next);
                agent += 1;
            }
            day = next + 1;
            continue;
        }
        let k = m - ell;
        let action = match params.purchase_for(k) {
            Purchase::Group => Action::BuyGroup {
                participants: k as u32,
            },
            Purchase::Individual => Action::BuyIndividual,
        };
        for agent in ell..m {
            rent(agent, day, buy - 1, &mut per_agent, &mut ledger);
            per_agent[agent] += action.cost(params);
            if let Some(l) = ledger.as_deref_mut() {
                l.record(params, buy, agent, action);
            }
        }
        break;
    }
    per_agent
}

/// Runs the threshold policy `kind` on `instance` from the empty state.
pub fn run_deterministic(params: &ProblemParams, instance: &Instance, kind: ThresholdKind) -> CostLedger {
    run_deterministic_from(params, instance, &GroupState::empty(), kind)
}

/// Runs the policy as if `state` had just been reached.
pub fn run_deterministic_from(
    params: &ProblemParams,
    instance: &Instance,
    state: &GroupState,
    kind: ThresholdKind,
) -> CostLedger {
    let mut ledger = CostLedger::new(instance.len());
    simulate(
        params,
        instance,
        state,
        |s| purchase_day(params, s, kind),
        Some(&mut ledger),
    );
    ledger
}

fn policy_costs(
    params: &ProblemParams,
    instance: &Instance,
    state: &GroupState,
    kind: ThresholdKind,
) -> Vec<Cost> {
    simulate(params, instance, state, |s| purchase_day(params, s, kind), None)
}

/// Offline cost the objective compares against.
pub fn benchmark_value(
    params: &ProblemParams,
    instance: &Instance,
    state: &GroupState,
    objective: Objective,
) -> Result<Cost> {
    match objective {
        Objective::Overall => Ok(ovopt(params, instance)),
        Objective::StateDependent => sdopt(params, instance, state),
        Objective::IndividualRational { agent } => {
            if agent >= instance.len() {
                return Err(Error::InvalidArgument(format!("agent {agent} out of range")));
            }
            Ok(indopt(params, instance)[agent])
        }
    }
}

/// Share of `per_agent` the objective charges: one agent or the group.
pub(crate) fn charged<T: Copy + std::iter::Sum<T>>(objective: Objective, per_agent: &[T]) -> T {
    match objective {
        Objective::IndividualRational { agent } => per_agent[agent],
        _ => per_agent.iter().copied().sum(),
    }
}

pub fn ratio_on_instance(
    params: &ProblemParams,
    kind: ThresholdKind,
    objective: Objective,
    state: &GroupState,
    instance: &Instance,
) -> Result<Cost> {
    params.check_instance(instance)?;
    if !state.is_prefix_of(instance) {
        return Err(Error::StateMismatch {
            revealed: state.revealed().to_vec(),
            days: instance.days().to_vec(),
        });
    }
    let bench = benchmark_value(params, instance, state, objective)?;
    let costs = policy_costs(params, instance, state, kind);
    Ok(charged(objective, &costs) / bench)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrReport {
    pub objective: Objective,
    pub ell: usize,
    pub revealed: Vec<u32>,
    pub ratio: f64,
    pub witness: Instance,
    pub evaluated: usize,
    #[serde(skip)]
    pub exact: Option<Cost>,
}

/// Adversary search over completions of `state`.
pub fn worst_case_cr_det(
    params: &ProblemParams,
    kind: ThresholdKind,
    objective: Objective,
    state: &GroupState,
    opts: &SearchOptions,
) -> Result<CrReport> {
    let cap = opts.resolve_day_cap(params, state);
    if cap < params.individual_cost() as u32 {
        return Err(Error::InvalidArgument(format!(
            "day cap {cap} is below B = {}",
            params.individual_cost()
        )));
    }
    let floor = purchase_day(params, state, kind);
    let mut best: Option<(Cost, Instance)> = None;
    let mut evaluated = 0;
    for rest in completions(params, state, opts, floor)? {
        let inst = Instance::completing(state, &rest)?;
        let r = ratio_on_instance(params, kind, objective, state, &inst)?;
        evaluated += 1;
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, inst));
        }
    }
    let (ratio, witness) = best.expect("at least one completion");
    Ok(CrReport {
        objective,
        ell: state.inactive_count(),
        revealed: state.revealed().to_vec(),
        ratio: cost_to_f64(&ratio),
        witness,
        evaluated,
        exact: Some(ratio),
    })
}

// ---------------------------------------------------------------------------
// Closed forms. The `*_formula` variants evaluate the expressions for any
// threshold; the checked variants insist on an integer threshold.

fn pieces(params: &ProblemParams, state: &GroupState) -> (i64, i64, i64, i64) {
    (
        params.group_cost(),
        params.individual_cost(),
        state.remaining(params) as i64,
        state.paid_cost(),
    )
}

/// Overall ratio of the overall-optimal policy.
pub fn cr_ov_formula(params: &ProblemParams, state: &GroupState) -> Cost {
    let (g, b, k, s) = pieces(params, state);
    if g <= k * b {
        cost(2) - Cost::new(k, g)
    } else if g <= s + k * b {
        cost(1) + Cost::new(k * (b - 1), g)
    } else {
        cost(1) + Cost::new(k * (b - 1), s + k * b)
    }
}

/// State-dependent ratio of the state-dependent policy.
pub fn cr_sd_formula(params: &ProblemParams, state: &GroupState) -> Cost {
    let (g, b, k, s) = pieces(params, state);
    if g <= k * b {
        cost(1) + Cost::new(g - k, s + g)
    } else {
        cost(1) + Cost::new(k * (b - 1), s + k * b)
    }
}

/// Overall ratio of the state-dependent policy.
pub fn cr_cross_formula(params: &ProblemParams, state: &GroupState) -> Cost {
    let (g, b, k, s) = pieces(params, state);
    if g <= k * b {
        cost(2) + Cost::new(s - k, g)
    } else if g <= s + k * b {
        Cost::new(s + k * (2 * b - 1), g)
    } else {
        cost(1) + Cost::new(k * (b - 1), s + k * b)
    }
}

fn require_integer(t: Cost) -> Result<()> {
    if t.is_integer() {
        Ok(())
    } else {
        Err(Error::NonIntegerThreshold(cost_to_f64(&t)))
    }
}

pub fn cr_ov_closed(params: &ProblemParams, state: &GroupState) -> Result<f64> {
    require_integer(threshold_ov(params, state))?;
    Ok(cost_to_f64(&cr_ov_formula(params, state)))
}

pub fn cr_sd_closed(params: &ProblemParams, state: &GroupState) -> Result<f64> {
    require_integer(threshold_sd(params, state))?;
    Ok(cost_to_f64(&cr_sd_formula(params, state)))
}

pub fn cr_cross_sd_policy_under_ov(params: &ProblemParams, state: &GroupState) -> Result<f64> {
    require_integer(threshold_sd(params, state))?;
    Ok(cost_to_f64(&cr_cross_formula(params, state)))
}

/// Individually rational ratio of agent `agent` (0-based): 1 for agents
/// that rent in equilibrium, `2 - 1/T_SD(l*)` for the rest.
pub fn cr_ind_closed(params: &ProblemParams, instance: &Instance, agent: usize) -> Result<f64> {
    if agent >= instance.len() {
        return Err(Error::InvalidArgument(format!("agent {agent} out of range")));
    }
    let star = crate::benchmark::ell_star(params, instance);
    if agent < star {
        return Ok(1.0);
    }
    let t = threshold_sd(params, &GroupState::prefix_of(instance, star));
    Ok(cost_to_f64(&(cost(2) - t.recip())))
}

/// Ratio on the symmetric completion `N = T` evaluated at the real-valued
/// threshold: the remaining agents rent `T - 1` days and then buy.
///
/// At integer thresholds this is the ratio on the symmetric witness of the
/// adversary search; at fractional thresholds it is the continuous extension
/// of the closed forms.
pub fn symmetric_witness_ratio(
    params: &ProblemParams,
    state: &GroupState,
    kind: ThresholdKind,
    objective: Objective,
) -> Result<Cost> {
    let k = state.remaining(params);
    if k == 0 {
        return Err(Error::InvalidArgument("no active agents remain".into()));
    }
    let kk = cost(k as i64);
    let t = threshold(params, state, kind);
    let s = cost(state.paid_cost());
    let g = cost(params.group_cost());
    let covered = kk * t.min(cost(params.individual_cost()));
    let num = s + kk * (t - cost(1)) + params.purchase_total(k);
    let den = match objective {
        Objective::Overall => g.min(s + covered),
        Objective::StateDependent => s + g.min(covered),
        Objective::IndividualRational { .. } => {
            return Err(Error::InvalidArgument(
                "the symmetric witness is defined for group objectives only".into(),
            ))
        }
    };
    Ok(num / den)
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

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn thresholds() {
        let (p, i) = fig3();
        assert_eq!(threshold_ov(&p, &GroupState::empty()), cost(6));
        assert_eq!(threshold_ov(&p, &GroupState::prefix_of(&i, 4)), Cost::new(25, 3));
        assert_eq!(threshold_ov(&p, &GroupState::prefix_of(&i, 5)), cost(9));
        assert_eq!(threshold_sd(&p, &GroupState::empty()), cost(6));
        assert_eq!(threshold_sd(&p, &GroupState::prefix_of(&i, 4)), cost(10));
        assert_eq!(threshold_sd(&p, &GroupState::prefix_of(&i, 9)), cost(10));
    }

    #[test]
    fn overall_threshold_clamps_when_rent_exceeds_group_price() {
        let p = ProblemParams::new(4, 10, 20).unwrap();
        let s = GroupState::new(vec![9, 12]).unwrap();
        assert_eq!(threshold_ov(&p, &s), cost(10));
    }

    #[test]
    fn homogeneous_thresholds() {
        assert_eq!(homogeneous_threshold(&ProblemParams::new(10, 10, 60).unwrap()), 6);
        assert_eq!(homogeneous_threshold(&ProblemParams::new(3, 5, 7).unwrap()), 3);
        assert_eq!(homogeneous_threshold(&ProblemParams::new(2, 3, 4).unwrap()), 2);
    }

    #[test]
    fn homogeneous_run_buys_group_on_threshold_day() {
        let p = ProblemParams::new(10, 10, 60).unwrap();
        let i = Instance::new(vec![6; 10]).unwrap();
        let l = run_deterministic(&p, &i, ThresholdKind::StateDependent);
        assert_eq!(l.total(), cost(110));
        assert_eq!(l.purchase_day(), Some(6));
        assert!(l
            .trace()
            .iter()
            .filter(|r| r.action.is_purchase())
            .all(|r| r.action == Action::BuyGroup { participants: 10 }));
    }

    #[test]
    fn threshold_updates_after_departure() {
        let p = ProblemParams::new(2, 5, 8).unwrap();
        let i = Instance::new(vec![2, 10]).unwrap();
        let l = run_deterministic(&p, &i, ThresholdKind::StateDependent);
        assert_eq!(l.per_agent(), &[cost(2), cost(9)]);
        assert_eq!(l.total(), cost(11));
        assert_eq!(l.purchase_day(), Some(5));
        let trace_total: Cost = l.trace().iter().map(|r| r.action.cost(&p)).sum();
        assert_eq!(trace_total, l.total());
    }

    #[test]
    fn single_remaining_agent_is_classical() {
        let p = ProblemParams::new(2, 4, 6).unwrap();
        let s = GroupState::new(vec![1]).unwrap();
        let i = Instance::new(vec![1, 9]).unwrap();
        let l = run_deterministic_from(&p, &i, &s, ThresholdKind::StateDependent);
        // rents days 1..3, buys on day 4
        assert_eq!(l.agent_cost(1), cost(3 + 4));
        let r = worst_case_cr_det(
            &p,
            ThresholdKind::StateDependent,
            Objective::IndividualRational { agent: 1 },
            &s,
            &SearchOptions::default(),
        )
        .unwrap();
        assert!(approx(r.ratio, 1.75, 1e-12));
        assert_eq!(r.witness.days(), &[1, 4]);
    }

    #[test]
    fn ledger_stops_after_purchase() {
        let p = ProblemParams::new(3, 4, 9).unwrap();
        let i = Instance::new(vec![1, 5, 6]).unwrap();
        let l = run_deterministic(&p, &i, ThresholdKind::Overall);
        for agent in 0..3 {
            let recs: Vec<_> = l.trace().iter().filter(|r| r.agent == agent).collect();
            if let Some(pos) = recs
                .iter()
                .position(|r| r.action.is_purchase() || r.action == Action::Leave)
            {
                assert_eq!(pos, recs.len() - 1);
            }
        }
    }

    #[test]
    fn closed_forms_on_figure3() {
        let (p, i) = fig3();
        let st = |l| GroupState::prefix_of(&i, l);
        assert!(approx(cr_ov_closed(&p, &st(0)).unwrap(), 11.0 / 6.0, 1e-12));
        assert!(approx(cr_ov_closed(&p, &st(5)).unwrap(), 1.75, 1e-12));
        assert!(approx(cr_ov_closed(&p, &st(9)).unwrap(), 1.0 + 9.0 / 55.0, 1e-12));
        assert!(approx(cr_sd_closed(&p, &st(0)).unwrap(), 11.0 / 6.0, 1e-12));
        assert!(approx(
            cr_sd_closed(&p, &st(5)).unwrap(),
            1.0 + 45.0 / 65.0,
            1e-12
        ));
        assert!(approx(cr_sd_closed(&p, &st(9)).unwrap(), 1.0 + 9.0 / 55.0, 1e-12));
        assert!(approx(
            cr_cross_sd_policy_under_ov(&p, &st(0)).unwrap(),
            11.0 / 6.0,
            1e-12
        ));
        assert!(approx(
            cr_cross_sd_policy_under_ov(&p, &st(4)).unwrap(),
            124.0 / 60.0,
            1e-12
        ));
        assert!(matches!(
            cr_ov_closed(&p, &st(4)),
            Err(Error::NonIntegerThreshold(_))
        ));
        assert!(matches!(
            cr_sd_closed(&p, &st(1)),
            Err(Error::NonIntegerThreshold(_))
        ));
    }

    #[test]
    fn individual_closed_form() {
        let p = ProblemParams::new(2, 5, 8).unwrap();
        let i = Instance::new(vec![2, 10]).unwrap();
        assert_eq!(cr_ind_closed(&p, &i, 0).unwrap(), 1.0);
        assert!(approx(cr_ind_closed(&p, &i, 1).unwrap(), 1.8, 1e-12));
        let p = ProblemParams::new(2, 4, 7).unwrap();
        let i = Instance::new(vec![9, 9]).unwrap();
        // G >= (M - l*)B is not the case here, but at l* = 1 a single agent
        // faces the classical problem.
        let j = Instance::new(vec![1, 9]).unwrap();
        assert!(approx(cr_ind_closed(&p, &j, 1).unwrap(), 2.0 - 0.25, 1e-12));
        assert!(cr_ind_closed(&p, &i, 1).unwrap() < 2.0);
    }

    #[test]
    fn search_matches_closed_forms_at_start() {
        let (p, _) = fig3();
        let opts = SearchOptions::default();
        for (kind, obj) in [
            (ThresholdKind::Overall, Objective::Overall),
            (ThresholdKind::StateDependent, Objective::StateDependent),
        ] {
            let r = worst_case_cr_det(&p, kind, obj, &GroupState::empty(), &opts).unwrap();
            assert!(approx(r.ratio, 11.0 / 6.0, 1e-12), "{r:?}");
            assert_eq!(r.witness.days(), &[6; 10]);
        }
    }

    #[test]
    fn witness_ratio_matches_table_rows() {
        let (p, i) = fig3();
        let st = |l| GroupState::prefix_of(&i, l);
        let r = |l| {
            cost_to_f64(
                &symmetric_witness_ratio(&p, &st(l), ThresholdKind::Overall, Objective::StateDependent)
                    .unwrap(),
            )
        };
        assert!(approx(r(1), 1.85, 1e-12));
        assert!(approx(r(5), 1.75, 1e-12));
        assert!(approx(r(6), 1.6, 1e-12));
    }
}
