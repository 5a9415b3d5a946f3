//! Problem parameters, instances, group states and the cost ledger.
//!
//! Every cost that is a ratio of integers (a group share `G/L`, a threshold
//! `G/(M-l)`) is kept as an exact [`Cost`]; conversion to `f64` happens only
//! when a value is reported.

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact monetary amount.
pub type Cost = Rational64;

pub(crate) fn cost(n: i64) -> Cost {
    Cost::from_integer(n)
}

pub fn cost_to_f64(c: &Cost) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// The triple `(M, B, G)`: number of agents, individual pass price and group
/// pass price.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemParams {
    num_agents: u32,
    individual_cost: u32,
    group_cost: u32,
}

impl ProblemParams {
    /// Validated constructor; requires `M >= 1`, `B >= 1` and `B < G < M*B`.
    pub fn new(num_agents: u32, individual_cost: u32, group_cost: u32) -> Result<Self> {
        if num_agents == 0 {
            return Err(Error::InvalidParams("M must be at least 1".into()));
        }
        if individual_cost == 0 {
            return Err(Error::InvalidParams("B must be at least 1".into()));
        }
        if group_cost <= individual_cost {
            return Err(Error::InvalidParams(format!(
                "G = {group_cost} must exceed B = {individual_cost}"
            )));
        }
        let cap = u64::from(num_agents) * u64::from(individual_cost);
        if u64::from(group_cost) >= cap {
            return Err(Error::InvalidParams(format!(
                "G = {group_cost} must be below M*B = {cap}"
            )));
        }
        Ok(Self {
            num_agents,
            individual_cost,
            group_cost,
        })
    }

    /// Constructor that only checks positivity. Used to embed the canonical
    /// single-agent problem (`M = 1`), which the strict bounds exclude.
    pub fn relaxed(num_agents: u32, individual_cost: u32, group_cost: u32) -> Result<Self> {
        if num_agents == 0 || individual_cost == 0 || group_cost == 0 {
            return Err(Error::InvalidParams("M, B and G must be positive".into()));
        }
        Ok(Self {
            num_agents,
            individual_cost,
            group_cost,
        })
    }

    /// Classical ski rental with buy price `b`; the group pass never pays off.
    pub fn single_agent(b: u32) -> Self {
        Self {
            num_agents: 1,
            individual_cost: b,
            group_cost: b,
        }
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents as usize
    }

    pub fn individual_cost(&self) -> i64 {
        i64::from(self.individual_cost)
    }

    pub fn group_cost(&self) -> i64 {
        i64::from(self.group_cost)
    }

    /// How `remaining` agents who buy on the same day should pay: one group
    /// pass when it is strictly cheaper than `remaining` individual passes.
    pub fn purchase_for(&self, remaining: usize) -> Purchase {
        if self.group_cost() < remaining as i64 * self.individual_cost() {
            Purchase::Group
        } else {
            Purchase::Individual
        }
    }

    /// Price one of `remaining` simultaneous buyers pays.
    pub fn purchase_share(&self, remaining: usize) -> Cost {
        match self.purchase_for(remaining) {
            Purchase::Group => Cost::new(self.group_cost(), remaining as i64),
            Purchase::Individual => cost(self.individual_cost()),
        }
    }

    /// Total price paid by `remaining` simultaneous buyers.
    pub fn purchase_total(&self, remaining: usize) -> Cost {
        self.purchase_share(remaining) * cost(remaining as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Purchase {
    Group,
    Individual,
}

/// Active-day counts `N_1 <= ... <= N_M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Instance {
    days: Vec<u32>,
}

impl Instance {
    pub fn new(days: Vec<u32>) -> Result<Self> {
        if days.is_empty() {
            return Err(Error::InvalidInstance("no agents".into()));
        }
        if let Some(pos) = days.iter().position(|&d| d == 0) {
            return Err(Error::InvalidInstance(format!(
                "agent {pos} has zero active days"
            )));
        }
        if let Some(pos) = days.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidInstance(format!(
                "days must be nondecreasing: N[{pos}] = {} > N[{}] = {}",
                days[pos],
                pos + 1,
                days[pos + 1]
            )));
        }
        Ok(Self { days })
    }

    /// Builds an instance and checks its length against `params`.
    pub fn for_params(params: &ProblemParams, days: Vec<u32>) -> Result<Self> {
        let inst = Self::new(days)?;
        params.check_instance(&inst)?;
        Ok(inst)
    }

    pub fn days(&self) -> &[u32] {
        &self.days
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    /// Extends `state` with `rest` (which must already be sorted and not
    /// below the last revealed day).
    pub fn completing(state: &GroupState, rest: &[u32]) -> Result<Self> {
        let mut days = state.revealed().to_vec();
        days.extend_from_slice(rest);
        Self::new(days)
    }
}

impl TryFrom<Vec<u32>> for Instance {
    type Error = Error;
    fn try_from(days: Vec<u32>) -> Result<Self> {
        Self::new(days)
    }
}

impl From<Instance> for Vec<u32> {
    fn from(i: Instance) -> Self {
        i.days
    }
}

impl ProblemParams {
    pub fn check_instance(&self, instance: &Instance) -> Result<()> {
        if instance.len() != self.num_agents() {
            return Err(Error::InvalidInstance(format!(
                "expected {} agents, got {}",
                self.num_agents(),
                instance.len()
            )));
        }
        Ok(())
    }
}

/// Number of inactive agents together with their revealed active days.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupState {
    revealed: Vec<u32>,
}

impl GroupState {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(revealed: Vec<u32>) -> Result<Self> {
        if revealed.contains(&0) {
            return Err(Error::InvalidInstance("revealed days must be positive".into()));
        }
        if revealed.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInstance(
                "revealed days must be nondecreasing".into(),
            ));
        }
        Ok(Self { revealed })
    }

    /// The state after the first `ell` agents of `instance` became inactive.
    pub fn prefix_of(instance: &Instance, ell: usize) -> Self {
        Self {
            revealed: instance.days()[..ell.min(instance.len())].to_vec(),
        }
    }

    pub fn inactive_count(&self) -> usize {
        self.revealed.len()
    }

    pub fn revealed(&self) -> &[u32] {
        &self.revealed
    }

    /// `N_l`, with `N_0 = 0`.
    pub fn last_revealed(&self) -> u32 {
        self.revealed.last().copied().unwrap_or(0)
    }

    /// Rent already paid by the inactive agents.
    pub fn paid_cost(&self) -> i64 {
        self.revealed.iter().map(|&d| i64::from(d)).sum()
    }

    pub fn remaining(&self, params: &ProblemParams) -> usize {
        params.num_agents().saturating_sub(self.inactive_count())
    }

    pub fn is_prefix_of(&self, instance: &Instance) -> bool {
        instance.days().starts_with(&self.revealed)
    }

    pub(crate) fn push(&mut self, day: u32) {
        self.revealed.push(day);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Action {
    Rent,
    BuyIndividual,
    BuyGroup { participants: u32 },
    Leave,
}

impl Action {
    /// What the acting agent pays for this action.
    pub fn cost(&self, params: &ProblemParams) -> Cost {
        match *self {
            Action::Rent => cost(1),
            Action::BuyIndividual => cost(params.individual_cost()),
            Action::BuyGroup { participants } => {
                Cost::new(params.group_cost(), i64::from(participants.max(1)))
            }
            Action::Leave => cost(0),
        }
    }

    pub fn is_purchase(&self) -> bool {
        matches!(self, Action::BuyIndividual | Action::BuyGroup { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub day: u32,
    pub agent: usize,
    pub action: Action,
}

/// Per-agent accumulated cost plus the full action trace of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostLedger {
    #[serde(serialize_with = "ser_costs")]
    per_agent: Vec<Cost>,
    trace: Vec<TraceRecord>,
}

fn ser_costs<S: serde::Serializer>(v: &[Cost], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&cost_to_f64(c))?;
    }
    seq.end()
}

impl CostLedger {
    pub fn new(num_agents: usize) -> Self {
        Self {
            per_agent: vec![cost(0); num_agents],
            trace: Vec::new(),
        }
    }

    pub fn record(&mut self, params: &ProblemParams, day: u32, agent: usize, action: Action) {
        self.per_agent[agent] += action.cost(params);
        self.trace.push(TraceRecord { day, agent, action });
    }

    pub fn per_agent(&self) -> &[Cost] {
        &self.per_agent
    }

    pub fn agent_cost(&self, agent: usize) -> Cost {
        self.per_agent[agent]
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn total(&self) -> Cost {
        self.per_agent.iter().sum()
    }

    /// Day of the purchase, if the run ended with one.
    pub fn purchase_day(&self) -> Option<u32> {
        self.trace.iter().find(|r| r.action.is_purchase()).map(|r| r.day)
    }
}
