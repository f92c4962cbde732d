//! `carnot`: command-line runner for carnot-core.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage or parse error, 3 internal
//! invariant violation.

mod task;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use carnot_core::report;
use task::{execute, parse_spec, Failure};

#[derive(Parser)]
#[command(name = "carnot", version, about = "Exact computation and differentiability probes on Carnot groups")]
struct Cli {
    /// seed for every random draw; falls back to the task spec's `seed`, then CARNOT_SEED, then 0
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// cap on worker threads
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// write the report here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// include the wall time in the report (it is always printed to stderr)
    #[arg(long, global = true)]
    wall_time: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the stratified Lie algebra axioms
    Validate(GroupArgs),
    /// Group operations on a list of points
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Empirical constants of the metric lemmas
    Metric {
        #[command(subcommand)]
        op: MetricOp,
    },
    /// Exact horizontal-word decompositions
    Decompose {
        #[command(subcommand)]
        op: DecomposeOp,
    },
    /// Differentiability probes for a scalar field
    Analyze {
        kind: AnalyzeKind,
        #[command(flatten)]
        args: AnalyzeArgs,
    },
    /// Run an acceptance suite
    Suite {
        #[arg(default_value = "all", value_parser = ["algebra", "lemmas", "counterexamples", "all"])]
        name: String,
    },
    /// Run a JSON task spec
    Run {
        spec: PathBuf,
    },
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// group config file, or a preset such as `heisenberg`, `heisenberg:2`, `free_step2:3`, `engel`
    #[arg(long, default_value = "heisenberg")]
    group: String,
}

#[derive(Subcommand)]
enum GroupOp {
    /// Norms and inverses of each point, then their ordered product, as JSON lines
    Eval {
        #[command(flatten)]
        group: GroupArgs,
        /// point list: `[[...], ...]` or `{"points": [...]}`
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LemmaArg {
    Conjugation,
    FlowDistance,
    Equivalence,
    QuasiTriangle,
    Path,
    Splitting,
}

#[derive(Subcommand)]
enum MetricOp {
    Probe {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum)]
        lemma: LemmaArg,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// fixed λ for the flow-distance lemma
        #[arg(long)]
        lambda: Option<f64>,
    },
}

#[derive(Subcommand)]
enum DecomposeOp {
    /// exp(U+V) as a word in U and V
    Split {
        #[command(flatten)]
        group: GroupArgs,
        /// pair list: `[[U, V], ...]`, `{"pairs": [...]}` or `{"U": .., "V": ..}`
        #[arg(long, conflicts_with_all = ["u", "v"])]
        input: Option<PathBuf>,
        /// comma-separated first-layer coefficients, e.g. `1,0`
        #[arg(long = "u", requires = "v", allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long = "v", requires = "u", allow_hyphen_values = true)]
        v: Option<String>,
    },
    /// Basis path to each point
    Path {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalyzeKind {
    Dd,
    Grad,
    Pansu,
    Linearity,
    Regularity,
    Porosity,
    #[value(name = "memberA", alias = "member-a")]
    MemberA,
}

impl AnalyzeKind {
    fn task(self) -> &'static str {
        match self {
            AnalyzeKind::Dd => "dd",
            AnalyzeKind::Grad => "grad",
            AnalyzeKind::Pansu => "pansu",
            AnalyzeKind::Linearity => "linearity",
            AnalyzeKind::Regularity => "regularity",
            AnalyzeKind::Porosity => "porosity",
            AnalyzeKind::MemberA => "memberA",
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// builtin field name or a JSON sample file for a McShane extension
    #[arg(long)]
    field: Option<String>,
    /// porosity test set
    #[arg(long, value_parser = ["hyperplane", "ball"])]
    set: Option<String>,
    /// comma-separated coordinates
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// horizontal direction for `dd` and `regularity`
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
    #[arg(long = "u", allow_hyphen_values = true)]
    u: Option<String>,
    #[arg(long = "v", allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_parser = ["two-sided", "forward", "backward"])]
    side: Option<String>,
    /// further task parameters as a JSON object, e.g. `{"ladder": {"h0": 0.01}}`
    #[arg(long)]
    params: Option<String>,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn group_entries(arg: &str) -> Result<Map<String, Value>, Failure> {
    let mut map = Map::new();
    if arg.ends_with(".json") || Path::new(arg).is_file() {
        map.insert("group".into(), read_json(Path::new(arg))?);
        return Ok(map);
    }
    let (name, param) = match arg.split_once(':') {
        Some((n, p)) => {
            let p: usize = p
                .parse()
                .map_err(|_| Failure::Usage(format!("bad preset parameter in `{arg}`")))?;
            (n, Some(p))
        }
        None => (arg, None),
    };
    map.insert("preset".into(), json!(name));
    if let Some(p) = param {
        let key = if name == "free_step2" { "m" } else { "n" };
        map.insert(key.into(), json!(p));
    }
    Ok(map)
}

fn vector(s: &str) -> Value {
    Value::Array(
        s.split(',')
            .map(|c| {
                let c = c.trim();
                match c.parse::<i64>() {
                    Ok(i) => json!(i),
                    Err(_) => json!(c),
                }
            })
            .collect(),
    )
}

fn spec(task: &str, group: &GroupArgs) -> Result<Map<String, Value>, Failure> {
    let mut map = group_entries(&group.group)?;
    map.insert("task".into(), json!(task));
    Ok(map)
}

fn analyze_spec(kind: AnalyzeKind, a: &AnalyzeArgs) -> Result<Map<String, Value>, Failure> {
    let mut map = spec(kind.task(), &a.group)?;
    if let Some(field) = &a.field {
        let value = if Path::new(field).is_file() || field.ends_with(".json") {
            let v = read_json(Path::new(field))?;
            match v {
                Value::Array(_) => json!({"samples": v}),
                other => other,
            }
        } else {
            json!(field)
        };
        map.insert("field".into(), value);
    }
    let vectors = [("point", &a.point), ("direction", &a.direction), ("U", &a.u), ("V", &a.v)];
    for (key, value) in vectors {
        if let Some(v) = value {
            map.insert(key.into(), vector(v));
        }
    }
    if let Some(set) = &a.set {
        map.insert("set".into(), json!(set));
    }
    if let Some(e) = a.epsilon {
        map.insert("epsilon".into(), json!(e));
    }
    if let Some(side) = &a.side {
        map.insert("side".into(), json!(side));
    }
    if let Some(p) = &a.params {
        match serde_json::from_str::<Value>(p) {
            Ok(Value::Object(extra)) => map.extend(extra),
            Ok(_) => return Err(Failure::Usage("--params must be a JSON object".into())),
            Err(e) => return Err(Failure::Usage(format!("--params: {e}"))),
        }
    }
    Ok(map)
}

fn build_spec(cli: &Cli) -> Result<Value, Failure> {
    let map = match &cli.command {
        Command::Run { spec } => return parse_spec(&read(spec)?),
        Command::Validate(g) => spec("validate", g)?,
        Command::Group { op: GroupOp::Eval { group, input } } => {
            let mut map = spec("eval", group)?;
            let points = match read_json(input)? {
                Value::Object(mut o) => o.remove("points").unwrap_or(Value::Null),
                other => other,
            };
            map.insert("points".into(), points);
            map
        }
        Command::Metric {
            op: MetricOp::Probe {
                group,
                lemma,
                samples,
                lambda,
            },
        } => {
            let mut map = spec("probe", group)?;
            let name = lemma.to_possible_value().expect("named").get_name().to_string();
            map.insert("lemma".into(), json!(name));
            map.insert("samples".into(), json!(samples));
            if let Some(l) = lambda {
                map.insert("lambda".into(), json!(l));
            }
            map
        }
        Command::Decompose { op: DecomposeOp::Split { group, input, u, v } } => {
            let mut map = spec("split", group)?;
            match (input, u, v) {
                (Some(path), _, _) => match read_json(path)? {
                    Value::Array(pairs) => {
                        map.insert("pairs".into(), Value::Array(pairs));
                    }
                    Value::Object(o) => map.extend(o),
                    _ => return Err(Failure::Usage("split input must be a list of pairs or an object".into())),
                },
                (None, Some(u), Some(v)) => {
                    map.insert("U".into(), vector(u));
                    map.insert("V".into(), vector(v));
                }
                _ => return Err(Failure::Usage("give --input or both --u and --v".into())),
            }
            map
        }
        Command::Decompose { op: DecomposeOp::Path { group, input } } => {
            let mut map = spec("path", group)?;
            let points = match read_json(input)? {
                Value::Object(mut o) => o.remove("points").unwrap_or(Value::Null),
                other => other,
            };
            map.insert("points".into(), points);
            map
        }
        Command::Analyze { kind, args } => analyze_spec(*kind, args)?,
        Command::Suite { name } => {
            let mut map = Map::new();
            map.insert("task".into(), json!("suite"));
            map.insert("name".into(), json!(name));
            map
        }
    };
    Ok(Value::Object(map))
}

fn env_seed() -> Result<Option<u64>, Failure> {
    match std::env::var("CARNOT_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("CARNOT_SEED must be a non-negative integer, got `{s}`"))),
        Err(_) => Ok(None),
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.json {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Invariant(format!("thread pool: {e}")))?;
    }
    let spec = build_spec(cli)?;
    // precedence: --seed, the task spec's own seed, CARNOT_SEED, 0
    let fallback = env_seed()?.unwrap_or(0);
    let start = Instant::now();
    let outcome = execute(&spec, cli.seed, fallback)?;
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!("wall time: {elapsed:.3} s");

    let mut report = outcome.report;
    if cli.wall_time {
        report["wall_time_s"] = json!(elapsed);
    }
    let mut text = report::to_line(&report);
    for line in &outcome.lines {
        text.push_str(&report::to_line(line));
    }
    emit(cli, &text).map_err(|e| Failure::Usage(format!("{e:#}")))?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(failure) => {
            let (code, kind) = match &failure {
                Failure::Check(_) => (1, "check failure"),
                Failure::Usage(_) => (2, "usage error"),
                Failure::Invariant(_) => (3, "invariant violation"),
            };
            eprintln!("carnot: {kind}: {failure}");
            let report = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "status": "error",
                "error": {"kind": kind, "message": failure.to_string()},
            });
            let _ = emit(&cli, &report::to_line(&report));
            ExitCode::from(code)
        }
    }
}
