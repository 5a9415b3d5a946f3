//! Enumeration of instance completions for the adversary searches.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GroupState, ProblemParams};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
pub const NODE_BUDGET_ENV: &str = "SKIRENTAL_NODE_BUDGET";

/// Which completions of a state the adversary may choose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CompletionScope {
    /// The ratio *at* a state: the policy keeps this state's threshold until
    /// it buys. Completions where some but not all remaining agents leave
    /// before the latest possible purchase day are excluded, since they move
    /// the group into a later state with its own ratio.
    #[default]
    PerState,
    /// Every completion, including ones that pass through later states.
    AllFutures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest active-day count the adversary may use; `None` means
    /// `2B + N_l`.
    pub day_cap: Option<u32>,
    pub node_budget: u64,
    /// Full product enumeration is attempted only when at most this many
    /// agents remain; above it only symmetric completions are searched.
    pub max_product_agents: usize,
    pub scope: CompletionScope,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            day_cap: None,
            node_budget: node_budget_from_env(),
            max_product_agents: 4,
            scope: CompletionScope::PerState,
        }
    }
}

impl SearchOptions {
    pub fn with_day_cap(mut self, cap: u32) -> Self {
        self.day_cap = Some(cap);
        self
    }

    pub fn with_scope(mut self, scope: CompletionScope) -> Self {
        self.scope = scope;
        self
    }

    pub fn symmetric_only(mut self) -> Self {
        self.max_product_agents = 0;
        self
    }

    pub fn resolve_day_cap(&self, params: &ProblemParams, state: &GroupState) -> u32 {
        self.day_cap
            .unwrap_or_else(|| 2 * params.individual_cost() as u32 + state.last_revealed())
    }
}

/// Node budget, overridable through `SKIRENTAL_NODE_BUDGET`.
pub fn node_budget_from_env() -> u64 {
    std::env::var(NODE_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Completions of `state` as sorted day vectors for the remaining agents.
///
/// Symmetric completions come first. `purchase_floor` is the latest day on
/// which the policy may buy in this state; under [`CompletionScope::PerState`]
/// an asymmetric completion is kept only if nobody leaves before it.
pub(crate) fn completions(
    params: &ProblemParams,
    state: &GroupState,
    opts: &SearchOptions,
    purchase_floor: u32,
) -> Result<Vec<Vec<u32>>> {
    let k = state.remaining(params);
    if k == 0 {
        return Ok(vec![Vec::new()]);
    }
    let lo = state.last_revealed() + 1;
    let hi = opts.resolve_day_cap(params, state);
    if hi < lo {
        return Err(Error::InvalidArgument(format!(
            "day cap {hi} is below the first admissible day {lo}"
        )));
    }
    let mut out: Vec<Vec<u32>> = (lo..=hi).map(|n| vec![n; k]).collect();
    if k == 1 || k > opts.max_product_agents {
        return Ok(out);
    }
    let width = u128::from(hi - lo + 1);
    let required = binomial(width + k as u128 - 1, k as u128);
    if required > u128::from(opts.node_budget) {
        return Err(Error::SearchSpaceTooLarge {
            required,
            budget: opts.node_budget,
        });
    }
    let mut cur = vec![lo; k];
    loop {
        let symmetric = cur.iter().all(|&d| d == cur[0]);
        let admissible = match opts.scope {
            CompletionScope::AllFutures => true,
            CompletionScope::PerState => cur[0] >= purchase_floor,
        };
        if !symmetric && admissible {
            out.push(cur.clone());
        }
        // next nondecreasing vector
        let Some(pos) = cur.iter().rposition(|&d| d < hi) else {
            break;
        };
        let v = cur[pos] + 1;
        for d in &mut cur[pos..] {
            *d = v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_multisets() {
        let p = ProblemParams::new(3, 2, 3).unwrap();
        let opts = SearchOptions::default()
            .with_day_cap(3)
            .with_scope(CompletionScope::AllFutures);
        let all = completions(&p, &GroupState::empty(), &opts, 1).unwrap();
        // C(3 + 3 - 1, 3) multisets of {1,2,3}
        assert_eq!(all.len(), 10);
        assert_eq!(all[..3], [vec![1, 1, 1], vec![2, 2, 2], vec![3, 3, 3]]);
        assert!(all.iter().all(|v| v.windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn per_state_drops_early_departures() {
        let p = ProblemParams::new(2, 3, 4).unwrap();
        let opts = SearchOptions::default().with_day_cap(4);
        let kept = completions(&p, &GroupState::empty(), &opts, 3).unwrap();
        assert!(kept.contains(&vec![1, 1]));
        assert!(kept.contains(&vec![3, 4]));
        assert!(!kept.contains(&vec![2, 4]));
    }

    #[test]
    fn budget_is_enforced() {
        let p = ProblemParams::new(4, 10, 20).unwrap();
        let mut opts = SearchOptions::default().with_day_cap(200);
        opts.node_budget = 1000;
        assert!(matches!(
            completions(&p, &GroupState::empty(), &opts, 1),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(6, 6), 1);
    }
}
