use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use subrank::engine::rho;
use subrank::io;
use subrank::linalg::{format_rational, parse_rational, FieldSpec, DEFAULT_PRIME};
use subrank::rigidity::{rigidity_report, RandomizedOptions, RigidityMatrix};
use subrank::sfm::SfmBackend;
use subrank::symbolic::{r2_rank, randomized_rank_seeded, rk_rank};
use subrank::verify::{self, SuiteReport};
use subrank::Error;

#[derive(Parser, Debug)]
#[command(
    name = "subrank",
    version,
    about = "Exact subspace-partition ranks, symbolic rank and planar rigidity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the field of the input: `q`, `fp:<p>` or a bare prime.
    #[arg(long, global = true)]
    field: Option<String>,

    /// Submodular minimizer. Defaults to exhaustive for ground sets of at
    /// most 16 elements and min-norm-point above.
    #[arg(long, global = true, value_enum, default_value_t = Sfm::Auto)]
    sfm: Sfm,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Random evaluations per randomized rank.
    #[arg(long, global = true, default_value_t = 5)]
    trials: usize,

    /// Characteristic used for randomized ranks.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,

    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// rho_c of a subspace family and its minimal partition.
    Rho {
        #[arg(long)]
        input: PathBuf,
        /// Exact rational `a` or `a/b`.
        #[arg(long, default_value = "1")]
        c: String,
    },
    /// Generic rank of an R_2 matrix.
    #[command(name = "pit-r2")]
    PitR2 {
        #[arg(long)]
        input: PathBuf,
    },
    /// Generic rank of an R_k matrix.
    #[command(name = "pit-rk")]
    PitRk {
        #[arg(long)]
        input: PathBuf,
    },
    /// Generic rigidity of a graph in dimension t.
    Rigidity {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Randomized rank of an R_2, R_k or rigidity matrix.
    #[command(name = "rand-rank")]
    RandRank {
        #[arg(long)]
        input: PathBuf,
        /// Dimension for graph inputs.
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Run the property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sfm {
    Exhaustive,
    Mnp,
    Auto,
}

impl From<Sfm> for SfmBackend {
    fn from(s: Sfm) -> Self {
        match s {
            Sfm::Exhaustive => SfmBackend::Exhaustive,
            Sfm::Mnp => SfmBackend::MinNormPoint,
            Sfm::Auto => SfmBackend::Auto,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

enum Failure {
    Input(String),
    Internal(String),
    /// Verification ran but some suite failed; the report is still printed.
    Verify(Value, Vec<SuiteReport>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn field_override(cli: &Cli) -> Result<Option<FieldSpec>, Failure> {
    cli.field
        .as_deref()
        .map(io::parse_field_text)
        .transpose()
        .map_err(Failure::from)
}

fn run(cli: &Cli) -> Result<(Value, Vec<SuiteReport>), Failure> {
    let backend = SfmBackend::from(cli.sfm);
    let target = field_override(cli)?;
    let value = match &cli.command {
        Command::Rho { input, c } => {
            let c = parse_rational(c)
                .ok_or_else(|| Failure::Input(format!("c: `{c}` is not a rational a or a/b")))?;
            let mut family = io::family_from_json(&read_json(input)?)?;
            if let Some(t) = target {
                family = io::convert_family(&family, t)?;
            }
            let r = rho(&family, &c, backend)?;
            json!({"value": format_rational(&r.value), "partition": r.partition.blocks()})
        }
        Command::PitR2 { input } => {
            let mut inst = io::r2_from_json(&read_json(input)?)?;
            if let Some(t) = target {
                inst = inst.over(t)?;
            }
            let r = r2_rank(&inst, backend)?;
            json!({"rank": r.rank, "dropped_rows": r.dropped_rows})
        }
        Command::PitRk { input } => {
            let mut inst = io::rk_from_json(&read_json(input)?)?;
            if let Some(t) = target {
                inst = inst.over(t)?;
            }
            let r = rk_rank(&inst, backend)?;
            json!({"rank": r.rank, "dropped_rows": r.dropped_rows})
        }
        Command::Rigidity { input, t } => {
            let graph = io::graph_from_json(&read_json(input)?)?;
            let opts = RandomizedOptions {
                prime: cli.prime,
                trials: cli.trials,
                seed: cli.seed,
            };
            serde_json::to_value(rigidity_report(&graph, *t, &opts, backend)?)
                .map_err(|e| Failure::Internal(e.to_string()))?
        }
        Command::RandRank { input, t } => {
            let v = read_json(input)?;
            let field = FieldSpec::prime(cli.prime)?;
            let rank = if v.get("rows").is_some() {
                let mut inst = io::r2_from_json(&v)?;
                if let Some(t) = target {
                    inst = inst.over(t)?;
                }
                randomized_rank_seeded(&inst, field, cli.trials, cli.seed)?
            } else if v.get("tensors").is_some() {
                let mut inst = io::rk_from_json(&v)?;
                if let Some(t) = target {
                    inst = inst.over(t)?;
                }
                randomized_rank_seeded(&inst, field, cli.trials, cli.seed)?
            } else if v.get("edges").is_some() {
                let graph = io::graph_from_json(&v)?;
                let m = RigidityMatrix::new(graph, *t, target.unwrap_or(FieldSpec::Rationals));
                randomized_rank_seeded(&m, field, cli.trials, cli.seed)?
            } else {
                return Err(Failure::Input(
                    "input: expected an object with `rows`, `tensors` or `edges`".into(),
                ));
            };
            json!({"rank": rank, "trials": cli.trials, "prime": cli.prime})
        }
        Command::Verify { suite } => {
            let reports = run_verify(suite, cli.seed)?;
            let passed = reports.iter().all(|r| r.passed);
            let value = json!({"seed": cli.seed, "passed": passed, "suites": reports});
            if !passed {
                return Err(Failure::Verify(value, reports));
            }
            return Ok((value, reports));
        }
    };
    Ok((value, Vec::new()))
}

/// Runs the requested suites on separate threads; the report order is the
/// suite order regardless of scheduling.
fn run_verify(suite: &str, seed: u64) -> Result<Vec<SuiteReport>, Failure> {
    let names = if suite == "all" {
        verify::suite_names()
    } else {
        let known = verify::suite_names();
        let name = known
            .iter()
            .find(|n| **n == suite)
            .ok_or_else(|| Failure::Input(format!("suite: unknown suite `{suite}`")))?;
        vec![*name]
    };
    std::thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|name| s.spawn(move || verify::run_suite(name, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .map_err(|_| Failure::Internal("a verification suite panicked".into()))?
                    .map_err(Failure::from)
            })
            .collect()
    })
}

fn render_text(value: &Value, reports: &[SuiteReport]) -> String {
    if !reports.is_empty() {
        let mut out: Vec<String> = reports.iter().map(ToString::to_string).collect();
        let passed = reports.iter().all(|r| r.passed);
        out.push(if passed {
            "all suites passed".into()
        } else {
            "some suites failed".into()
        });
        return out.join("\n");
    }
    match value {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

fn emit(output: Output, value: &Value, reports: &[SuiteReport]) {
    match output {
        Output::Json => println!("{value}"),
        Output::Text => println!("{}", render_text(value, reports)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok((value, reports)) => {
            emit(cli.output, &value, &reports);
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(value, reports)) => {
            emit(cli.output, &value, &reports);
            ExitCode::from(2)
        }
    }
}
