//! Randomized threshold policies.
//!
//! In every state the policy draws a purchase day from a density over
//! `{N_l + 1, ..., ceil(T(l))}`, rents until that day and then buys. When
//! agents become inactive before the drawn day, a fresh day is drawn from
//! the density of the new state.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::deterministic::{
    benchmark_value, charged, simulate, threshold_ov, threshold_sd, CrReport, Objective,
};
use crate::error::{Error, Result};
use crate::model::{cost_to_f64, CostLedger, GroupState, Instance, ProblemParams};
use crate::search::{completions, SearchOptions};

const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DensityKind {
    #[serde(rename = "P_OV")]
    POv,
    #[serde(rename = "P_SD")]
    PSd,
    #[serde(rename = "Q_IND")]
    QInd,
    /// Drawn once at the start and never redrawn.
    Homogeneous,
}

impl DensityKind {
    pub const ALL: [DensityKind; 4] = [
        DensityKind::POv,
        DensityKind::PSd,
        DensityKind::QInd,
        DensityKind::Homogeneous,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            DensityKind::POv => "P_OV",
            DensityKind::PSd => "P_SD",
            DensityKind::QInd => "Q_IND",
            DensityKind::Homogeneous => "Homogeneous",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdDensity {
    pub kind: DensityKind,
    pub ell: usize,
    pub threshold: f64,
    pub support_start: u32,
    pub masses: Vec<f64>,
    /// `1 - sum` before renormalization; zero when no rescaling was needed.
    pub deficit: f64,
}

impl ThresholdDensity {
    fn singleton(kind: DensityKind, ell: usize, threshold: f64, day: u32) -> Self {
        Self {
            kind,
            ell,
            threshold,
            support_start: day,
            masses: vec![1.0],
            deficit: 0.0,
        }
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.masses.len() as u32).map(move |i| self.support_start + i)
    }

    pub fn last_day(&self) -> u32 {
        self.support_start + self.masses.len() as u32 - 1
    }

    pub fn mass_at(&self, day: u32) -> f64 {
        day.checked_sub(self.support_start)
            .and_then(|i| self.masses.get(i as usize))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.support().zip(self.masses.iter().copied())
    }

    fn normalize(mut self) -> Self {
        let sum = self.total();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            self.deficit = 1.0 - sum;
            for m in &mut self.masses {
                *m /= sum;
            }
        }
        self
    }
}

fn degenerate(t: f64, state: &GroupState) -> Error {
    Error::DegenerateThreshold {
        threshold: t,
        last_revealed: state.last_revealed(),
    }
}

/// Ratio constant of the group densities.
pub fn norm_g(params: &ProblemParams, state: &GroupState, t: f64) -> Result<f64> {
    let k = state.remaining(params);
    if t <= 1.0 || k == 0 {
        return Err(degenerate(t, state));
    }
    let k = k as f64;
    let s = state.paid_cost() as f64;
    let n = f64::from(state.last_revealed());
    let frac = k * (t - 1.0) / (s + k * (n + t));
    Ok(1.0 / (1.0 - frac * (1.0 - 1.0 / t).powf(t - n - 1.0)))
}

/// Ratio constant of the single-agent density.
pub fn norm_h(state: &GroupState, t: f64) -> Result<f64> {
    if t <= 1.0 {
        return Err(degenerate(t, state));
    }
    let n = f64::from(state.last_revealed());
    let lead = (t * t + n) / (t * (t + n));
    Ok(1.0 / (lead - (t - 1.0) / (t + n) * (1.0 - 1.0 / t).powf(t - n - 1.0)))
}

fn support_len(state: &GroupState, t: f64) -> usize {
    (t.ceil() as i64 - i64::from(state.last_revealed())).max(1) as usize
}

fn tail_masses(coef: f64, t: f64, start: u32, len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| coef * (1.0 - 1.0 / t).powf(t - f64::from(start + i as u32)))
        .collect()
}

/// The group density at threshold `t`.
pub fn density_p(
    params: &ProblemParams,
    state: &GroupState,
    t: f64,
    kind: DensityKind,
) -> Result<ThresholdDensity> {
    let n = state.last_revealed();
    if t <= f64::from(n) {
        return Err(degenerate(t, state));
    }
    let g = norm_g(params, state, t)?;
    let k = state.remaining(params) as f64;
    let s = state.paid_cost() as f64;
    let nf = f64::from(n);
    let mut masses = tail_masses(g / t, t, n + 1, support_len(state, t));
    masses[0] = (s + k * (nf + 1.0)) * g / (s + k * (nf + t)) * (1.0 - 1.0 / t).powf(t - nf - 1.0);
    Ok(ThresholdDensity {
        kind,
        ell: state.inactive_count(),
        threshold: t,
        support_start: n + 1,
        masses,
        deficit: 0.0,
    }
    .normalize())
}

/// The single-agent density at threshold `t`.
pub fn density_q(state: &GroupState, t: f64) -> Result<ThresholdDensity> {
    let n = state.last_revealed();
    if t <= f64::from(n) {
        return Err(degenerate(t, state));
    }
    let h = norm_h(state, t)?;
    let nf = f64::from(n);
    let mut masses = tail_masses(h / t, t, n + 1, support_len(state, t));
    let first = h / t
        * ((nf + 1.0) * (t - 1.0) / (nf + t) * (1.0 - 1.0 / t).powf(t - nf - 2.0)
            - nf * (t - 1.0) / (nf + t));
    if first < 0.0 {
        return Err(Error::NegativeMass {
            day: n + 1,
            mass: first,
        });
    }
    masses[0] = first;
    Ok(ThresholdDensity {
        kind: DensityKind::QInd,
        ell: state.inactive_count(),
        threshold: t,
        support_start: n + 1,
        masses,
        deficit: 0.0,
    }
    .normalize())
}

/// `f_t = (M/G)(1 - M/G)^{G/M - t}` on `{1, ..., ceil(G/M)}`.
pub fn homogeneous_density(params: &ProblemParams) -> ThresholdDensity {
    let r = params.num_agents() as f64 / params.group_cost() as f64;
    let t = 1.0 / r;
    let len = t.ceil() as usize;
    ThresholdDensity {
        kind: DensityKind::Homogeneous,
        ell: 0,
        threshold: t,
        support_start: 1,
        masses: tail_masses(r, t, 1, len),
        deficit: 0.0,
    }
    .normalize()
}

/// Competitive ratio of the homogeneous density, `1/(1 - (1 - M/G)^{G/M})`.
pub fn homogeneous_ratio(params: &ProblemParams) -> f64 {
    let r = params.num_agents() as f64 / params.group_cost() as f64;
    1.0 / (1.0 - (1.0 - r).powf(1.0 / r))
}

/// Threshold that parameterizes `kind` in `state`.
pub fn policy_threshold(params: &ProblemParams, state: &GroupState, kind: DensityKind) -> f64 {
    match kind {
        DensityKind::POv => cost_to_f64(&threshold_ov(params, state)),
        DensityKind::PSd | DensityKind::QInd => cost_to_f64(&threshold_sd(params, state)),
        DensityKind::Homogeneous => params.group_cost() as f64 / params.num_agents() as f64,
    }
}

/// Density the policy draws from in `state`. Thresholds that leave no room
/// beyond the first day of the state put all mass on that day.
pub fn policy_density(
    params: &ProblemParams,
    state: &GroupState,
    kind: DensityKind,
) -> Result<ThresholdDensity> {
    if kind == DensityKind::Homogeneous {
        return Ok(homogeneous_density(params));
    }
    let t = policy_threshold(params, state, kind);
    let first = state.last_revealed() + 1;
    if t.ceil() <= f64::from(first) {
        return Ok(ThresholdDensity::singleton(
            kind,
            state.inactive_count(),
            t,
            first,
        ));
    }
    match kind {
        DensityKind::POv | DensityKind::PSd => density_p(params, state, t, kind),
        DensityKind::QInd => density_q(state, t),
        DensityKind::Homogeneous => unreachable!(),
    }
}

/// Draws a purchase day.
pub fn sample_threshold<R: rand::Rng + ?Sized>(density: &ThresholdDensity, rng: &mut R) -> u32 {
    if density.masses.len() == 1 {
        return density.support_start;
    }
    let dist = WeightedIndex::new(&density.masses).expect("masses are nonnegative and normalized");
    density.support_start + dist.sample(rng) as u32
}

fn sampled_costs(
    params: &ProblemParams,
    instance: &Instance,
    kind: DensityKind,
    rng: &mut ChaCha8Rng,
    ledger: Option<&mut CostLedger>,
) -> Result<Vec<crate::model::Cost>> {
    let mut failure = None;
    let mut fixed = None;
    let costs = simulate(
        params,
        instance,
        &GroupState::empty(),
        |state| {
            if kind == DensityKind::Homogeneous {
                return *fixed.get_or_insert_with(|| sample_threshold(&homogeneous_density(params), rng));
            }
            match policy_density(params, state, kind) {
                Ok(d) => sample_threshold(&d, rng),
                Err(e) => {
                    failure.get_or_insert(e);
                    u32::MAX
                }
            }
        },
        ledger,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(costs),
    }
}

/// One seeded run of the randomized policy.
pub fn run_randomized(
    params: &ProblemParams,
    instance: &Instance,
    kind: DensityKind,
    seed: u64,
) -> Result<CostLedger> {
    params.check_instance(instance)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ledger = CostLedger::new(instance.len());
    sampled_costs(params, instance, kind, &mut rng, Some(&mut ledger))?;
    Ok(ledger)
}

/// Expected per-agent cost, from the empty state.
pub fn expected_costs(params: &ProblemParams, instance: &Instance, kind: DensityKind) -> Result<Vec<f64>> {
    expected_costs_from(params, instance, &GroupState::empty(), kind)
}

pub fn expected_cost_exact(params: &ProblemParams, instance: &Instance, kind: DensityKind) -> Result<f64> {
    Ok(expected_costs(params, instance, kind)?.iter().sum())
}

/// Expected per-agent cost of the policy started in `state`; the revealed
/// agents are charged their rent.
pub fn expected_costs_from(
    params: &ProblemParams,
    instance: &Instance,
    state: &GroupState,
    kind: DensityKind,
) -> Result<Vec<f64>> {
    params.check_instance(instance)?;
    if !state.is_prefix_of(instance) {
        return Err(Error::StateMismatch {
            revealed: state.revealed().to_vec(),
            days: instance.days().to_vec(),
        });
    }
    let days = instance.days();
    let m = days.len();
    let mut out: Vec<f64> = days.iter().map(|&n| f64::from(n)).collect();
    let ell = state.inactive_count();
    if ell == m {
        return Ok(out);
    }
    for c in &mut out[ell..] {
        *c = f64::from(state.last_revealed());
    }

    if kind == DensityKind::Homogeneous {
        // one draw for the whole run
        let d = homogeneous_density(params);
        for (t, w) in d.iter() {
            let run = simulate(params, instance, state, |_| t, None);
            for (o, c) in out[ell..].iter_mut().zip(&run[ell..]) {
                *o += w * (cost_to_f64(c) - f64::from(state.last_revealed()));
            }
        }
        return Ok(out);
    }

    // Walk the chain of states the instance forces; `reach` is the
    // probability that no purchase happened before the current state.
    let mut st = state.clone();
    let mut reach = 1.0;
    while st.inactive_count() < m && reach > 0.0 {
        let ell = st.inactive_count();
        let first = st.last_revealed() + 1;
        let next = days[ell];
        let density = policy_density(params, &st, kind)?;
        let share = cost_to_f64(&params.purchase_share(m - ell));
        let mut survive = 0.0;
        for (t, w) in density.iter() {
            if t <= next {
                let paid = f64::from(t - first) + share;
                for o in &mut out[ell..] {
                    *o += reach * w * paid;
                }
            } else {
                survive += w;
            }
        }
        let rent = f64::from(next + 1 - first);
        for o in &mut out[ell..] {
            *o += reach * survive * rent;
        }
        reach *= survive;
        while st.inactive_count() < m && days[st.inactive_count()] == next {
            st.push(next);
        }
    }
    Ok(out)
}

fn expected_ratio(
    params: &ProblemParams,
    instance: &Instance,
    state: &GroupState,
    kind: DensityKind,
    objective: Objective,
) -> Result<f64> {
    let bench = benchmark_value(params, instance, state, objective)?;
    let e = expected_costs_from(params, instance, state, kind)?;
    Ok(charged(objective, &e) / cost_to_f64(&bench))
}

/// Expected ratio on every searched completion, in search order.
pub fn completion_ratios_rand(
    params: &ProblemParams,
    kind: DensityKind,
    objective: Objective,
    state: &GroupState,
    opts: &SearchOptions,
) -> Result<Vec<(Instance, f64)>> {
    let floor = policy_density(params, state, kind)?.last_day();
    completions(params, state, opts, floor)?
        .into_iter()
        .map(|rest| {
            let inst = Instance::completing(state, &rest)?;
            let r = expected_ratio(params, &inst, state, kind, objective)?;
            Ok((inst, r))
        })
        .collect()
}

pub fn worst_case_cr_rand(
    params: &ProblemParams,
    kind: DensityKind,
    objective: Objective,
    state: &GroupState,
    opts: &SearchOptions,
) -> Result<CrReport> {
    let floor = policy_density(params, state, kind)?.last_day();
    let cap = opts.resolve_day_cap(params, state);
    if cap <= floor {
        return Err(Error::InvalidArgument(format!(
            "day cap {cap} must exceed the last support day {floor}"
        )));
    }
    let all = completion_ratios_rand(params, kind, objective, state, opts)?;
    let evaluated = all.len();
    let (witness, ratio) = all
        .into_iter()
        .fold(None, |best: Option<(Instance, f64)>, (i, r)| match best {
            Some((_, b)) if b >= r => best,
            _ => Some((i, r)),
        })
        .expect("at least one completion");
    Ok(CrReport {
        objective,
        ell: state.inactive_count(),
        revealed: state.revealed().to_vec(),
        ratio,
        witness,
        evaluated,
        exact: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub n: u64,
    pub mean: f64,
    pub stderr: f64,
    pub exact: f64,
    pub z_score: f64,
}

/// Mean total cost over `n` seeded runs; run `i` uses seed `seed + i`.
pub fn monte_carlo(
    params: &ProblemParams,
    instance: &Instance,
    kind: DensityKind,
    n: u64,
    seed: u64,
) -> Result<McReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two runs".into()));
    }
    params.check_instance(instance)?;
    let exact = expected_cost_exact(params, instance, kind)?;
    let (mut mean, mut m2) = (0.0, 0.0);
    for i in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
        let total: f64 = sampled_costs(params, instance, kind, &mut rng, None)?
            .iter()
            .map(cost_to_f64)
            .sum();
        // Welford
        let delta = total - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (total - mean);
    }
    let var = m2 / (n - 1) as f64;
    let stderr = (var / n as f64).sqrt();
    let z_score = if stderr > 0.0 {
        (mean - exact) / stderr
    } else {
        0.0
    };
    Ok(McReport {
        n,
        mean,
        stderr,
        exact,
        z_score,
    })
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

    fn classical(b: f64) -> f64 {
        1.0 / (1.0 - (1.0 - 1.0 / b).powf(b))
    }

    #[test]
    fn g_at_start_is_homogeneous_ratio() {
        let (p, _) = fig3();
        let g = norm_g(&p, &GroupState::empty(), 6.0).unwrap();
        assert!((g - classical(6.0)).abs() < 1e-12);
        assert!((g - 1.5035).abs() < 1e-4);
        assert!((g - homogeneous_ratio(&p)).abs() < 1e-12);
    }

    #[test]
    fn h_matches_g_at_start() {
        let (p, _) = fig3();
        for t in [2.0, 3.5, 6.0, 10.0] {
            let g = norm_g(&p, &GroupState::empty(), t).unwrap();
            let h = norm_h(&GroupState::empty(), t).unwrap();
            assert!((g - h).abs() < 1e-12, "{t}");
        }
        let s = GroupState::new(vec![4]).unwrap();
        assert!(norm_h(&s, 5.0).unwrap() >= 1.0);
    }

    #[test]
    fn degenerate_thresholds() {
        let (p, _) = fig3();
        assert!(matches!(
            norm_g(&p, &GroupState::empty(), 1.0),
            Err(Error::DegenerateThreshold { .. })
        ));
        let s = GroupState::new(vec![7]).unwrap();
        assert!(matches!(
            density_p(&p, &s, 6.0, DensityKind::PSd),
            Err(Error::DegenerateThreshold { .. })
        ));
    }

    #[test]
    fn p_first_branch_agrees_at_start() {
        let (p, _) = fig3();
        let d = density_p(&p, &GroupState::empty(), 6.0, DensityKind::PSd).unwrap();
        let g = norm_g(&p, &GroupState::empty(), 6.0).unwrap();
        assert_eq!(d.support().collect::<Vec<_>>(), (1..=6).collect::<Vec<_>>());
        for (t, w) in d.iter() {
            let expected = g / 6.0 * (5.0f64 / 6.0).powi(6 - t as i32);
            assert!((w - expected).abs() < 1e-12);
        }
        assert_eq!(d.deficit, 0.0);
    }

    #[test]
    fn densities_coincide_at_start() {
        let (p, _) = fig3();
        let dp = density_p(&p, &GroupState::empty(), 6.0, DensityKind::PSd).unwrap();
        let dq = density_q(&GroupState::empty(), 6.0).unwrap();
        let dh = homogeneous_density(&p);
        for i in 0..6 {
            assert!((dp.masses[i] - dq.masses[i]).abs() < 1e-12);
            assert!((dp.masses[i] - dh.masses[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn fractional_threshold_is_renormalized() {
        let (p, i) = fig3();
        let s = GroupState::prefix_of(&i, 1);
        let d = policy_density(&p, &s, DensityKind::PSd).unwrap();
        assert_eq!(d.support().collect::<Vec<_>>(), (2..=7).collect::<Vec<_>>());
        assert!((d.total() - 1.0).abs() < 1e-12);
        assert!(d.deficit != 0.0);
    }

    #[test]
    fn negative_first_mass_is_reported() {
        let s = GroupState::new(vec![4]).unwrap();
        assert!(matches!(
            density_q(&s, 10.0),
            Err(Error::NegativeMass { day: 5, .. })
        ));
    }

    #[test]
    fn singleton_support() {
        let p = ProblemParams::new(4, 3, 5).unwrap();
        let s = GroupState::new(vec![4, 4]).unwrap();
        let d = policy_density(&p, &s, DensityKind::QInd).unwrap();
        assert_eq!(d.masses, vec![1.0]);
        assert_eq!(d.support_start, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(sample_threshold(&d, &mut rng), 5);
        let h = homogeneous_density(&ProblemParams::new(3, 2, 3).unwrap());
        assert_eq!(h.masses, vec![1.0]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let (p, i) = fig3();
        let a = run_randomized(&p, &i, DensityKind::POv, 42).unwrap();
        let b = run_randomized(&p, &i, DensityKind::POv, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn short_stays_only_rent() {
        let p = ProblemParams::new(3, 10, 20).unwrap();
        let i = Instance::new(vec![1, 1, 1]).unwrap();
        // T = 20/3, earliest draw is day 1, so buying on day 1 is possible;
        // with a larger instance below the support nothing is bought.
        let e = expected_cost_exact(&p, &i, DensityKind::PSd).unwrap();
        assert!(e >= 3.0);
        let s = GroupState::new(vec![1]).unwrap();
        let j = Instance::new(vec![1, 2, 2]).unwrap();
        let d = policy_density(&p, &s, DensityKind::PSd).unwrap();
        let e = expected_costs_from(&p, &j, &s, DensityKind::PSd).unwrap();
        let exp_two: f64 = d
            .iter()
            .map(|(t, w)| if t <= 2 { w * (10.0 + 1.0) } else { w * 2.0 })
            .sum();
        assert!((e[1] - exp_two).abs() < 1e-12);
    }

    #[test]
    fn tight_on_symmetric_worst_case() {
        let (p, _) = fig3();
        let i = Instance::new(vec![6; 10]).unwrap();
        let e = expected_cost_exact(&p, &i, DensityKind::PSd).unwrap();
        assert!((e / 60.0 - homogeneous_ratio(&p)).abs() < 1e-9);
    }

    #[test]
    fn single_agent_expected_cost() {
        let p = ProblemParams::single_agent(4);
        let i = Instance::new(vec![4]).unwrap();
        let d = policy_density(&p, &GroupState::empty(), DensityKind::QInd).unwrap();
        let manual: f64 = d.iter().map(|(t, w)| w * (f64::from(t) - 1.0 + 4.0)).sum();
        let e = expected_cost_exact(&p, &i, DensityKind::QInd).unwrap();
        assert!((e - manual).abs() < 1e-12);
        assert!((e / 4.0 - classical(4.0)).abs() < 1e-9);
    }
}
