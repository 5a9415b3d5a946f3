//! Two agents, horizon 4: is a mixture of symmetric policies optimal among
//! all mixtures of joint policies?
//!
//! Columns are joint deterministic policies. `(i, i, j)` has both agents
//! take the group pass on day `i` if both are still active, and otherwise
//! lets the remaining agent buy an individual pass on day `j >= i`. `(i, j)`
//! with `i < j` has agent 1 buy individually on day `i` and agent 2 on day
//! `j`. Rows are ordered pairs of active days. The LP minimizes the ratio
//! `c` subject to `cost_row . x <= c * opt_row`, `x` a distribution.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::verification::simplex::{maximize, LpOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JointPolicy {
    Symmetric { group_day: u32, solo_day: u32 },
    Asymmetric { first: u32, second: u32 },
}

impl JointPolicy {
    pub fn is_symmetric(&self) -> bool {
        matches!(self, JointPolicy::Symmetric { .. })
    }

    pub fn label(&self) -> String {
        match self {
            JointPolicy::Symmetric { group_day, solo_day } => format!("({group_day},{group_day},{solo_day})"),
            JointPolicy::Asymmetric { first, second } => format!("({first},{second})"),
        }
    }

    fn cost(&self, b: i64, g: i64, days: (u32, u32)) -> i64 {
        let (n1, n2) = (i64::from(days.0), i64::from(days.1));
        let solo = |t: i64, n: i64| if n >= t { t - 1 + b } else { n };
        match *self {
            JointPolicy::Symmetric { group_day, solo_day } => {
                let (i, j) = (i64::from(group_day), i64::from(solo_day));
                let (lo, hi) = (n1.min(n2), n1.max(n2));
                if lo >= i {
                    2 * (i - 1) + g
                } else {
                    lo + solo(j, hi)
                }
            }
            JointPolicy::Asymmetric { first, second } => {
                solo(i64::from(first), n1) + solo(i64::from(second), n2)
            }
        }
    }
}

/// The columns of the horizon-`h` table.
pub fn joint_policies(horizon: u32) -> Vec<JointPolicy> {
    let mut out = vec![JointPolicy::Symmetric {
        group_day: 1,
        solo_day: 1,
    }];
    for i in 2..=horizon {
        for j in i..=horizon {
            out.push(JointPolicy::Symmetric {
                group_day: i,
                solo_day: j,
            });
        }
    }
    for i in 1..=horizon {
        for j in i + 1..=horizon {
            out.push(JointPolicy::Asymmetric { first: i, second: j });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoAgentReport {
    pub b: u32,
    pub g: u32,
    pub horizon: u32,
    pub condition: String,
    pub full_ratio: f64,
    pub symmetric_ratio: f64,
    /// An optimal mixture exists that uses only symmetric columns.
    pub symmetric_support: bool,
    pub mixture: Vec<(String, f64)>,
}

/// Optimal ratio and mixture over `cols`.
fn solve(cols: &[JointPolicy], b: i64, g: i64, horizon: u32) -> Result<(BigRational, Vec<BigRational>)> {
    let mut rows = Vec::new();
    for n1 in 1..=horizon {
        for n2 in 1..=horizon {
            let opt = g.min(i64::from(n1).min(b) + i64::from(n2).min(b));
            rows.push(
                cols.iter()
                    .map(|c| BigRational::new(c.cost(b, g, (n1, n2)).into(), opt.into()))
                    .collect::<Vec<_>>(),
            );
        }
    }
    // min c s.t. A x <= c, sum x = 1  <=>  max 1.z s.t. A z <= 1 with x = z / sum z
    let ones_b = vec![BigRational::one(); rows.len()];
    let ones_c = vec![BigRational::one(); cols.len()];
    match maximize(&rows, &ones_b, &ones_c) {
        LpOutcome::Optimal { x, value } => {
            if value.is_zero() {
                return Err(Error::ConditionViolated("degenerate LP".into()));
            }
            let c = BigRational::one() / &value;
            Ok((c.clone(), x.into_iter().map(|z| z * &c).collect()))
        }
        LpOutcome::Unbounded => Err(Error::ConditionViolated("unbounded LP".into())),
    }
}

pub fn verify_two_agent_randomized_symmetry(b: u32, g: u32, horizon: u32) -> Result<TwoAgentReport> {
    if !(b < g && g < 2 * b) {
        return Err(Error::InvalidParams(format!(
            "need B < G < 2B, got B = {b}, G = {g}"
        )));
    }
    if horizon < 2 {
        return Err(Error::InvalidArgument("horizon must be at least 2".into()));
    }
    if g + 3 > 2 * b {
        return Err(Error::ConditionViolated(format!(
            "G = {g} > 2B - 3 = {}; the elimination argument does not apply",
            2 * i64::from(b) - 3
        )));
    }
    let (bi, gi) = (i64::from(b), i64::from(g));
    let all = joint_policies(horizon);
    let sym: Vec<JointPolicy> = all.iter().copied().filter(JointPolicy::is_symmetric).collect();
    let (full, _) = solve(&all, bi, gi, horizon)?;
    let (restricted, weights) = solve(&sym, bi, gi, horizon)?;
    let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
    Ok(TwoAgentReport {
        b,
        g,
        horizon,
        condition: format!("G <= 2B - 3 ({g} <= {})", 2 * b - 3),
        full_ratio: f(&full),
        symmetric_ratio: f(&restricted),
        symmetric_support: restricted == full,
        mixture: sym
            .iter()
            .zip(&weights)
            .filter(|(_, w)| !w.is_zero())
            .map(|(c, w)| (c.label(), f(w)))
            .collect(),
    })
}
