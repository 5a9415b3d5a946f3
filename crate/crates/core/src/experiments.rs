//! The ten-agent reference scenario (`M = 10`, `B = 10`, `G = 60`,
//! active days `1..=10`) and the benchmark table printed by `skirental opt`.

use serde::Serialize;

use crate::benchmark::{ell_star, indopt, ovopt, sdopt};
use crate::deterministic::{
    cr_cross_formula, cr_ov_formula, cr_sd_formula, symmetric_witness_ratio, Objective, ThresholdKind,
};
use crate::error::Result;
use crate::model::{cost_to_f64, GroupState, Instance, ProblemParams};
use crate::randomized::{worst_case_cr_rand, DensityKind};
use crate::search::SearchOptions;

pub const SCHEMA: &str = "1";

pub fn figure3_scenario() -> (ProblemParams, Instance) {
    (
        ProblemParams::new(10, 10, 60).expect("valid"),
        Instance::new((1..=10).collect()).expect("valid"),
    )
}

/// Rounds to three decimals, ties to even.
pub fn round3(x: f64) -> String {
    let scaled = x * 1000.0;
    let floor = scaled.floor();
    let diff = scaled - floor;
    let r = if (diff - 0.5).abs() < 1e-9 {
        if floor as i64 % 2 == 0 {
            floor
        } else {
            floor + 1.0
        }
    } else {
        scaled.round()
    };
    format!("{:.3}", r / 1000.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Table3Row {
    SdOfSdPolicy,
    OvOfSdPolicy,
    SdOfOvPolicy,
    OvOfOvPolicy,
    SdOfSdDensity,
    OvOfOvDensity,
}

impl Table3Row {
    pub const ALL: [Table3Row; 6] = [
        Table3Row::SdOfSdPolicy,
        Table3Row::OvOfSdPolicy,
        Table3Row::SdOfOvPolicy,
        Table3Row::OvOfOvPolicy,
        Table3Row::SdOfSdDensity,
        Table3Row::OvOfOvDensity,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Table3Row::SdOfSdPolicy => "CR_SD(pi_SD)",
            Table3Row::OvOfSdPolicy => "CR_OV(pi_SD)",
            Table3Row::SdOfOvPolicy => "CR_SD(pi_OV)",
            Table3Row::OvOfOvPolicy => "CR_OV(pi_OV)",
            Table3Row::SdOfSdDensity => "CR_SD(f_SD)",
            Table3Row::OvOfOvDensity => "CR_OV(f_OV)",
        }
    }

    /// Value of this row at state `l`.
    pub fn evaluate(&self, params: &ProblemParams, state: &GroupState) -> Result<f64> {
        let opts = SearchOptions::default();
        Ok(match self {
            Table3Row::SdOfSdPolicy => cost_to_f64(&cr_sd_formula(params, state)),
            Table3Row::OvOfSdPolicy => cost_to_f64(&cr_cross_formula(params, state)),
            Table3Row::SdOfOvPolicy => cost_to_f64(&symmetric_witness_ratio(
                params,
                state,
                ThresholdKind::Overall,
                Objective::StateDependent,
            )?),
            Table3Row::OvOfOvPolicy => cost_to_f64(&cr_ov_formula(params, state)),
            Table3Row::SdOfSdDensity => {
                worst_case_cr_rand(params, DensityKind::PSd, Objective::StateDependent, state, &opts)?.ratio
            }
            Table3Row::OvOfOvDensity => {
                worst_case_cr_rand(params, DensityKind::POv, Objective::Overall, state, &opts)?.ratio
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table3 {
    pub rows: Vec<(Table3Row, Vec<f64>)>,
}

impl Table3 {
    pub fn compute() -> Result<Self> {
        let (params, instance) = figure3_scenario();
        let rows = Table3Row::ALL
            .iter()
            .map(|row| {
                let vals = (0..10)
                    .map(|ell| row.evaluate(&params, &GroupState::prefix_of(&instance, ell)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((*row, vals))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,0,1,2,3,4,5,6,7,8,9\n");
        for (row, vals) in &self.rows {
            out.push_str(row.label());
            for v in vals {
                out.push(',');
                out.push_str(&round3(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// Which side of the `G` vs `(M - l)B` and `G` vs `S + (M - l)B` breakpoints
/// a state lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `G <= (M - l)B`: the group pass beats individual passes.
    A,
    /// `(M - l)B < G <= S + (M - l)B`.
    B,
    /// `G > S + (M - l)B`.
    C,
}

pub fn region(params: &ProblemParams, state: &GroupState) -> Region {
    let g = params.group_cost();
    let kb = state.remaining(params) as i64 * params.individual_cost();
    if g <= kb {
        Region::A
    } else if g <= state.paid_cost() + kb {
        Region::B
    } else {
        Region::C
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subfigure {
    /// Overall ratio of both deterministic policies.
    A,
    /// State-dependent ratio of both deterministic policies.
    B,
    /// The two randomized policies under their own objectives.
    C,
}

impl std::str::FromStr for Subfigure {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Subfigure::A),
            "b" => Ok(Subfigure::B),
            "c" => Ok(Subfigure::C),
            _ => Err(crate::Error::InvalidArgument(format!("unknown subfigure {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub ell: usize,
    pub series: &'static str,
    pub ratio: f64,
    pub region: Region,
}

pub fn figure3(sub: Subfigure) -> Result<Vec<SeriesPoint>> {
    let (params, instance) = figure3_scenario();
    let rows = match sub {
        Subfigure::A => [
            (Table3Row::OvOfOvPolicy, "pi_OV"),
            (Table3Row::OvOfSdPolicy, "pi_SD"),
        ],
        Subfigure::B => [
            (Table3Row::SdOfOvPolicy, "pi_OV"),
            (Table3Row::SdOfSdPolicy, "pi_SD"),
        ],
        Subfigure::C => [
            (Table3Row::OvOfOvDensity, "f_OV"),
            (Table3Row::SdOfSdDensity, "f_SD"),
        ],
    };
    let mut out = Vec::new();
    for (row, series) in rows {
        for ell in 0..10 {
            let state = GroupState::prefix_of(&instance, ell);
            out.push(SeriesPoint {
                ell,
                series,
                ratio: row.evaluate(&params, &state)?,
                region: region(&params, &state),
            });
        }
    }
    Ok(out)
}

pub fn figure3_csv(points: &[SeriesPoint]) -> String {
    let mut out = String::from("ell,series,ratio,region\n");
    for p in points {
        out.push_str(&format!("{},{},{:.6},{:?}\n", p.ell, p.series, p.ratio, p.region));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateBenchmark {
    pub ell: usize,
    pub sdopt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkTable {
    pub schema: &'static str,
    pub params: ProblemParams,
    pub days: Vec<u32>,
    pub ovopt: f64,
    pub sdopt: Vec<StateBenchmark>,
    pub ell_star: usize,
    pub indopt: Vec<f64>,
}

pub fn cmd_opt(params: &ProblemParams, instance: &Instance) -> Result<BenchmarkTable> {
    params.check_instance(instance)?;
    let sd = (0..instance.len())
        .map(|ell| {
            let s = GroupState::prefix_of(instance, ell);
            Ok(StateBenchmark {
                ell,
                sdopt: cost_to_f64(&sdopt(params, instance, &s)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchmarkTable {
        schema: SCHEMA,
        params: *params,
        days: instance.days().to_vec(),
        ovopt: cost_to_f64(&ovopt(params, instance)),
        sdopt: sd,
        ell_star: ell_star(params, instance),
        indopt: indopt(params, instance).iter().map(cost_to_f64).collect(),
    })
}

impl BenchmarkTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,index,value\n");
        out.push_str(&format!("ovopt,,{}\n", self.ovopt));
        for s in &self.sdopt {
            out.push_str(&format!("sdopt,{},{}\n", s.ell, s.sdopt));
        }
        out.push_str(&format!("ell_star,,{}\n", self.ell_star));
        for (m, v) in self.indopt.iter().enumerate() {
            out.push_str(&format!("indopt,{},{}\n", m + 1, v));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lp,
    Dominance,
    Yao,
    All,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lp" => Ok(Suite::Lp),
            "dominance" => Ok(Suite::Dominance),
            "yao" => Ok(Suite::Yao),
            "all" => Ok(Suite::All),
            _ => Err(crate::Error::InvalidArgument(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Serialize) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: serde_json::to_value(detail).unwrap_or(serde_json::Value::Null),
    }
}

const LP_TOL: f64 = 1e-9;

fn lp_checks() -> Vec<Check> {
    use crate::deterministic::{threshold_ov, threshold_sd};
    use crate::randomized::{density_p, homogeneous_density, homogeneous_ratio, norm_g};
    use crate::verification::{
        solve_homogeneous_lp, solve_state_lp, verify_two_agent_randomized_symmetry, LpKind,
    };

    let mut out = Vec::new();
    for (m, g) in [(10, 60), (2, 4), (3, 9), (4, 12)] {
        let name = format!("homogeneous_lp M={m} G={g}");
        let params = ProblemParams::new(m, g, g).or_else(|_| ProblemParams::new(m, g - 1, g));
        let res = params.and_then(|p| {
            let s = solve_homogeneous_lp(&p)?;
            let d = homogeneous_density(&p);
            let err = s
                .masses
                .iter()
                .zip(&d.masses)
                .map(|(a, b)| (a - b).abs())
                .fold((s.ratio - homogeneous_ratio(&p)).abs(), f64::max);
            Ok((s.ratio, err))
        });
        out.push(match res {
            Ok((ratio, err)) => check(
                name,
                err <= LP_TOL,
                serde_json::json!({"ratio": ratio, "max_error": err}),
            ),
            Err(e) => check(name, false, e.to_string()),
        });
    }

    let (params, instance) = figure3_scenario();
    for ell in 0..10 {
        let state = GroupState::prefix_of(&instance, ell);
        for (kind, lp, t) in [
            (
                DensityKind::PSd,
                LpKind::StateDependent,
                threshold_sd(&params, &state),
            ),
            (DensityKind::POv, LpKind::Overall, threshold_ov(&params, &state)),
        ] {
            if !t.is_integer() {
                continue;
            }
            let name = format!("state_lp {kind:?} l={ell}");
            let tf = cost_to_f64(&t);
            let res = (|| {
                let s = solve_state_lp(&params, &state, lp)?;
                let d = density_p(&params, &state, tf, kind)?;
                let g = norm_g(&params, &state, tf)?;
                let err = s
                    .masses
                    .iter()
                    .zip(&d.masses)
                    .map(|(a, b)| (a - b).abs())
                    .fold((s.ratio - g).abs(), f64::max);
                Ok::<_, crate::Error>((s.ratio, err))
            })();
            out.push(match res {
                Ok((ratio, err)) => check(
                    name,
                    err <= LP_TOL,
                    serde_json::json!({"ratio": ratio, "max_error": err}),
                ),
                Err(e) => check(name, false, e.to_string()),
            });
        }
    }

    for (b, g) in [(4, 5), (5, 6), (5, 7)] {
        let name = format!("two_agent_symmetry B={b} G={g}");
        out.push(match verify_two_agent_randomized_symmetry(b, g, 4) {
            Ok(r) => check(name, r.symmetric_support, &r),
            Err(e) => check(name, false, e.to_string()),
        });
    }
    out
}

fn dominance_checks() -> Vec<Check> {
    use crate::verification::{brute_force_symmetric_dominance, DominanceObjective};
    let mut out = Vec::new();
    for b in 2..=4u32 {
        for g in b + 1..2 * b {
            for obj in [DominanceObjective::Overall, DominanceObjective::StateDependent] {
                let name = format!("dominance M=2 B={b} G={g} {obj:?}");
                let res =
                    ProblemParams::new(2, b, g).and_then(|p| brute_force_symmetric_dominance(&p, 2 * b, obj));
                out.push(match res {
                    Ok(r) => check(name, r.verdict, &r),
                    Err(e) => check(name, false, e.to_string()),
                });
            }
        }
    }
    out
}

fn yao_checks() -> Vec<Check> {
    use crate::randomized::norm_g;
    use crate::verification::yao_lower_bound;
    let (params, _) = figure3_scenario();
    let r = yao_lower_bound(&params);
    let e = std::f64::consts::E;
    let target = e / (e - 1.0);
    let far = norm_g(&params, &GroupState::empty(), 1000.0).unwrap_or(f64::NAN);
    vec![
        check("yao_bound", (r.ratio - target).abs() <= 1e-4, &r),
        check(
            "g_asymptote",
            (far - r.ratio).abs() <= 1e-3,
            serde_json::json!({"g_at_1000": far, "bound": r.ratio}),
        ),
    ]
}

pub fn cmd_verify(suite: Suite) -> VerifyReport {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Lp | Suite::All) {
        checks.extend(lp_checks());
    }
    if matches!(suite, Suite::Dominance | Suite::All) {
        checks.extend(dominance_checks());
    }
    if matches!(suite, Suite::Yao | Suite::All) {
        checks.extend(yao_checks());
    }
    VerifyReport {
        schema: SCHEMA,
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
