//! The `skirental` command line. Exit codes: 0 ok, 1 a verification
//! verdict failed, 2 bad input.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::deterministic::{run_deterministic, worst_case_cr_det, CrReport, Objective, ThresholdKind};
use crate::error::{Error, Result};
use crate::experiments::{cmd_opt, cmd_verify, figure3, figure3_csv, Subfigure, Table3, SCHEMA};
use crate::io::{read_instance, write_density_csv};
use crate::model::{cost_to_f64, CostLedger, GroupState, Instance, ProblemParams};
use crate::randomized::{
    monte_carlo, policy_density, run_randomized, worst_case_cr_rand, DensityKind, McReport,
};
use crate::search::SearchOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "skirental",
    version,
    about = "Multi-agent ski rental with a group pass"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Ov,
    Sd,
    Ind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    DetOv,
    DetSd,
    DetInd,
    RandOv,
    RandSd,
    RandInd,
    Homog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamsArg(pub ProblemParams);

impl FromStr for ParamsArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| format!("expected M,B,G, got {s:?}"))
            })
            .collect::<std::result::Result<_, _>>()?;
        match parts[..] {
            [m, b, g] => ProblemParams::new(m, b, g)
                .map(ParamsArg)
                .map_err(|e| e.to_string()),
            _ => Err(format!("expected M,B,G, got {s:?}")),
        }
    }
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// `M,B,G`; required for CSV instances.
    #[arg(long)]
    pub params: Option<ParamsArg>,
    /// JSON (`{"M":..,"B":..,"G":..,"days":[..]}`) or CSV with a column `N`.
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Offline benchmarks of an instance.
    Opt {
        #[command(flatten)]
        input: InstanceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a deterministic policy and search its worst case from state `ell`.
    Det {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, value_enum, default_value = "det-sd")]
        policy: Policy,
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
        /// Agent for the individually rational objective.
        #[arg(long, default_value_t = 0)]
        agent: usize,
        /// Number of revealed agents the search starts from.
        #[arg(long, default_value_t = 0)]
        ell: usize,
        #[arg(long)]
        day_cap: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a randomized policy; CSV output dumps the density in state `ell`.
    Rand {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, value_enum, default_value = "rand-sd")]
        policy: Policy,
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
        #[arg(long, default_value_t = 0)]
        agent: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo runs.
        #[arg(long, default_value_t = 10_000)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        ell: usize,
        #[arg(long)]
        day_cap: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The 6x10 ratio grid of the `(10, 10, 60)` scenario.
    Table3 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Series for one subfigure of the same scenario.
    Figure3 {
        #[arg(long)]
        subfigure: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn load(input: &InstanceArgs) -> Result<(ProblemParams, Instance)> {
    read_instance(&input.instance, input.params.map(|p| p.0))
}

fn objective(arg: ObjectiveArg, agent: usize) -> Objective {
    match arg {
        ObjectiveArg::Ov => Objective::Overall,
        ObjectiveArg::Sd => Objective::StateDependent,
        ObjectiveArg::Ind => Objective::IndividualRational { agent },
    }
}

fn det_kind(p: Policy) -> Result<(ThresholdKind, ObjectiveArg)> {
    match p {
        Policy::DetOv => Ok((ThresholdKind::Overall, ObjectiveArg::Ov)),
        Policy::DetSd => Ok((ThresholdKind::StateDependent, ObjectiveArg::Sd)),
        Policy::DetInd => Ok((ThresholdKind::StateDependent, ObjectiveArg::Ind)),
        Policy::Homog => Ok((ThresholdKind::HomogeneousFixed, ObjectiveArg::Ov)),
        _ => Err(Error::InvalidArgument(format!(
            "{p:?} is not a deterministic policy"
        ))),
    }
}

fn rand_kind(p: Policy) -> Result<(DensityKind, ObjectiveArg)> {
    match p {
        Policy::RandOv => Ok((DensityKind::POv, ObjectiveArg::Ov)),
        Policy::RandSd => Ok((DensityKind::PSd, ObjectiveArg::Sd)),
        Policy::RandInd => Ok((DensityKind::QInd, ObjectiveArg::Ind)),
        Policy::Homog => Ok((DensityKind::Homogeneous, ObjectiveArg::Ov)),
        _ => Err(Error::InvalidArgument(format!(
            "{p:?} is not a randomized policy"
        ))),
    }
}

fn state_at(instance: &Instance, ell: usize) -> Result<GroupState> {
    if ell >= instance.len() {
        return Err(Error::InvalidArgument(format!(
            "--ell {ell} must be below the number of agents {}",
            instance.len()
        )));
    }
    Ok(GroupState::prefix_of(instance, ell))
}

fn search_opts(day_cap: Option<u32>) -> SearchOptions {
    match day_cap {
        Some(c) => SearchOptions::default().with_day_cap(c),
        None => SearchOptions::default(),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn ledger_csv(instance: &Instance, ledger: &CostLedger) -> String {
    let mut out = String::from("agent,N,cost\n");
    for (a, (n, c)) in instance.days().iter().zip(ledger.per_agent()).enumerate() {
        out.push_str(&format!("{a},{n},{}\n", cost_to_f64(c)));
    }
    out
}

#[derive(Serialize)]
struct DetOutput<'a> {
    schema: &'static str,
    params: ProblemParams,
    days: &'a [u32],
    policy: ThresholdKind,
    costs: Vec<f64>,
    total: f64,
    purchase_day: Option<u32>,
    trace: &'a [crate::model::TraceRecord],
    worst_case: CrReport,
}

#[derive(Serialize)]
struct RandOutput<'a> {
    schema: &'static str,
    params: ProblemParams,
    days: &'a [u32],
    policy: DensityKind,
    seed: u64,
    sample_costs: Vec<f64>,
    monte_carlo: McReport,
    worst_case: CrReport,
}

/// Runs one command and returns what to print plus the exit code.
pub fn execute(cmd: &Command) -> Result<(String, i32)> {
    match cmd {
        Command::Opt { input, output } => {
            let (params, instance) = load(input)?;
            let t = cmd_opt(&params, &instance)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => json(&t),
                Format::Csv => t.to_csv(),
            };
            Ok((text, EXIT_OK))
        }
        Command::Det {
            input,
            policy,
            objective: obj,
            agent,
            ell,
            day_cap,
            output,
        } => {
            let (params, instance) = load(input)?;
            let (kind, default_obj) = det_kind(*policy)?;
            let ledger = run_deterministic(&params, &instance, kind);
            if output.format == Some(Format::Csv) {
                return Ok((ledger_csv(&instance, &ledger), EXIT_OK));
            }
            let state = state_at(&instance, *ell)?;
            let o = objective(obj.unwrap_or(default_obj), *agent);
            let worst_case = worst_case_cr_det(&params, kind, o, &state, &search_opts(*day_cap))?;
            let out = DetOutput {
                schema: SCHEMA,
                params,
                days: instance.days(),
                policy: kind,
                costs: ledger.per_agent().iter().map(cost_to_f64).collect(),
                total: cost_to_f64(&ledger.total()),
                purchase_day: ledger.purchase_day(),
                trace: ledger.trace(),
                worst_case,
            };
            Ok((json(&out), EXIT_OK))
        }
        Command::Rand {
            input,
            policy,
            objective: obj,
            agent,
            seed,
            runs,
            ell,
            day_cap,
            output,
        } => {
            let (params, instance) = load(input)?;
            let (kind, default_obj) = rand_kind(*policy)?;
            let state = state_at(&instance, *ell)?;
            if output.format == Some(Format::Csv) {
                let d = policy_density(&params, &state, kind)?;
                let mut buf = Vec::new();
                write_density_csv(&mut buf, &d)?;
                return Ok((String::from_utf8(buf).expect("utf-8"), EXIT_OK));
            }
            let sample = run_randomized(&params, &instance, kind, *seed)?;
            let mc = monte_carlo(&params, &instance, kind, *runs, *seed)?;
            let o = objective(obj.unwrap_or(default_obj), *agent);
            let worst_case = worst_case_cr_rand(&params, kind, o, &state, &search_opts(*day_cap))?;
            let out = RandOutput {
                schema: SCHEMA,
                params,
                days: instance.days(),
                policy: kind,
                seed: *seed,
                sample_costs: sample.per_agent().iter().map(cost_to_f64).collect(),
                monte_carlo: mc,
                worst_case,
            };
            Ok((json(&out), EXIT_OK))
        }
        Command::Verify { suite, .. } => {
            let report = cmd_verify(suite.parse()?);
            let mut text = json(&report);
            if !report.passed {
                for c in report.failures() {
                    text.push_str(&format!("failed check: {}\n", c.name));
                }
                return Ok((text, EXIT_VERIFY_FAILED));
            }
            Ok((text, EXIT_OK))
        }
        Command::Table3 { .. } => Ok((Table3::compute()?.to_csv(), EXIT_OK)),
        Command::Figure3 { subfigure, output } => {
            let sub: Subfigure = subfigure.parse()?;
            let pts = figure3(sub)?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => figure3_csv(&pts),
                Format::Json => json(&serde_json::json!({"schema": SCHEMA, "points": pts})),
            };
            Ok((text, EXIT_OK))
        }
    }
}

fn out_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Opt { output, .. }
        | Command::Det { output, .. }
        | Command::Rand { output, .. }
        | Command::Figure3 { output, .. } => output.out.as_ref(),
        Command::Verify { out, .. } | Command::Table3 { out } => out.as_ref(),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let (text, code) = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    // the verdict summary on failure goes to stderr, the report to the output
    let (body, tail) = match text.find("failed check:") {
        Some(i) if code == EXIT_VERIFY_FAILED => text.split_at(i),
        _ => (text.as_str(), ""),
    };
    let written = match out_path(&cli.command) {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    eprint!("{tail}");
    code
}
