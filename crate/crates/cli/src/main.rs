//! `theta3` command-line front end.
//!
//! Every command prints one JSON report on stdout with the fields
//! `command`, `input`, `verdict`, `witness`, `trace`, `recipe` and
//! `timings` (plus `matroid` or `tree` where a command produces one).
//! `--format text` prints a short human-readable summary instead.
//!
//! Exit codes: 0 success or a true verdict, 1 a false verdict, 2 an error,
//! 3 an exhausted search budget.

use std::io::Read;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use theta3::catalog::{self, CATALOG};
use theta3::construct::{cycle_matroid, is_complete_graph, is_projective};
use theta3::decompose::{
    canonical_tree_decomposition, classify_theta3, ClassifyOptions, DecomposeOptions, Verdict,
};
use theta3::format::{parse_graph, parse_matroid, serialize_matroid};
use theta3::theta::{
    is_theta3_closed, theta3_closure, CheckOptions, ClosedVerdict, ClosureOptions, ClosureTrace,
    RoundMode, Strategy,
};
use theta3::{
    BinaryMatroid, Budget, BuildRecipe, ElementSet, GF2Vector, MatroidLabelledTree, ThetaGraph,
};

#[derive(Parser)]
#[command(
    name = "theta3",
    version,
    about = "Theta-graph closure of binary matroids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Stop any search after examining this many subsets (exit 3).
    #[arg(long, global = true)]
    max_subsets: Option<u64>,

    /// Stop any search after this many seconds (exit 3).
    #[arg(long, global = true)]
    max_seconds: Option<f64>,

    /// Worker threads for the parallel searches.
    #[arg(long, global = true, env = "THETA3_THREADS")]
    threads: Option<usize>,

    /// Leave timings out of the report, so output is byte-stable.
    #[arg(long, global = true)]
    no_timings: bool,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Enumerate,
    Targeted,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Enumerate => Strategy::Enumerate,
            StrategyArg::Targeted => Strategy::Targeted,
        }
    }
}

#[derive(Args)]
struct Input {
    /// Catalog key (see `theta3 catalog`), a file path, or `-` for stdin.
    input: String,

    /// Read the input as a `u v label` edge list and use its cycle matroid.
    #[arg(long)]
    graph: bool,
}

#[derive(Args)]
struct Search {
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,

    /// Search a matroid even when it is a whole projective geometry.
    #[arg(long)]
    no_shortcut: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether every theta-graph is complete.
    Check {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        search: Search,
    },
    /// Add completing elements until the matroid is closed.
    Closure {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        search: Search,
        /// Add one element per round instead of all of them.
        #[arg(long)]
        one_at_a_time: bool,
    },
    /// Canonical tree decomposition plus a recipe or a witness.
    Decompose {
        #[command(flatten)]
        input: Input,
    },
    /// Evaluate a recipe term such as `P(MK(4), PG(3); base=e12)`.
    Build { recipe: String },
    /// Compare the structural classifier with the theta-graph check on
    /// every subset of PG(2,2) and random subsets of a larger geometry.
    Crossval {
        /// Rank of the geometry for the random part.
        #[arg(long, default_value_t = 4)]
        rank: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the named matroids.
    Catalog,
}

struct Report {
    command: &'static str,
    input: Value,
    verdict: Value,
    witness: Value,
    trace: Value,
    recipe: Value,
    extra: Vec<(&'static str, Value)>,
    summary: String,
    exit: u8,
}

impl Report {
    fn new(command: &'static str, input: Value) -> Self {
        Report {
            command,
            input,
            verdict: Value::Null,
            witness: Value::Null,
            trace: Value::Null,
            recipe: Value::Null,
            extra: Vec::new(),
            summary: String::new(),
            exit: 0,
        }
    }

    fn to_json(&self, timings: Value) -> Value {
        let mut out = json!({
            "command": self.command,
            "input": self.input,
            "verdict": self.verdict,
            "witness": self.witness,
            "trace": self.trace,
            "recipe": self.recipe,
            "timings": timings,
        });
        for (k, v) in &self.extra {
            out[*k] = v.clone();
        }
        out
    }
}

fn load(input: &Input) -> anyhow::Result<BinaryMatroid> {
    let text = if input.input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Some(s)
    } else if Path::new(&input.input).is_file() {
        Some(
            std::fs::read_to_string(&input.input)
                .with_context(|| format!("reading {}", input.input))?,
        )
    } else {
        None
    };
    match (text, input.graph) {
        (Some(t), true) => Ok(cycle_matroid(&parse_graph(&t)?)?),
        (Some(t), false) => Ok(parse_matroid(&t)?),
        (None, true) => bail!("`{}` is not a file", input.input),
        (None, false) => catalog::lookup(&input.input)
            .with_context(|| format!("`{}` is neither a file nor a catalog key", input.input)),
    }
}

fn labels(s: &[String]) -> Value {
    json!(s)
}

fn theta_json(m: &BinaryMatroid, t: &ThetaGraph) -> Value {
    json!({
        "arcs": t.arc_labels(m).iter().map(|a| labels(a)).collect::<Vec<_>>(),
        "completing": t.completing_vector().to_string(),
    })
}

fn arcs_text(arcs: &[Vec<String>; 3]) -> String {
    arcs.iter()
        .map(|a| format!("{{{}}}", a.join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Name of a matroid when it is one of the blocks, else its rank and size.
fn describe(m: &BinaryMatroid, budget: &Budget) -> anyhow::Result<String> {
    let r = m.rank();
    if m.is_simple() && r > 0 && is_projective(m) {
        return Ok(format!("PG({},2) (rank {r} projective geometry)", r - 1));
    }
    if let Some(n) = is_complete_graph(m, budget)? {
        return Ok(format!("M(K{n}) (cycle matroid of a complete graph)"));
    }
    Ok(format!("rank {r} binary matroid"))
}

fn check(
    m: &BinaryMatroid,
    input: Value,
    search: &Search,
    budget: &Budget,
) -> anyhow::Result<Report> {
    let opts = CheckOptions {
        strategy: search.strategy.into(),
        projective_shortcut: !search.no_shortcut,
    };
    let mut report = Report::new("check", input);
    match is_theta3_closed(m, opts, budget)? {
        ClosedVerdict::Closed => {
            report.verdict = json!(true);
            report.summary = "closed: true".into();
        }
        ClosedVerdict::NotClosed(t) => {
            report.verdict = json!(false);
            report.witness = theta_json(m, &t);
            report.summary = format!(
                "closed: false\nwitness: arcs {}, completed by {}",
                arcs_text(&t.arc_labels(m)),
                t.completing_vector()
            );
            report.exit = 1;
        }
    }
    Ok(report)
}

fn trace_json(trace: &ClosureTrace, summary: &str) -> anyhow::Result<Value> {
    let mut at = trace.initial.clone();
    let mut rounds = Vec::new();
    for round in &trace.rounds {
        let added: Vec<Value> = round
            .added
            .iter()
            .zip(&round.witnesses)
            .map(|(v, t)| {
                json!({
                    "vector": v.to_string(),
                    "witness": theta_json(&at, t)["arcs"],
                })
            })
            .collect();
        // Elements are only appended, so a prefix of the final matroid is
        // the matroid at the start of the next round.
        at = trace
            .final_matroid
            .restrict(ElementSet::full(at.len() + round.added.len()))?;
        rounds.push(json!({ "added": added }));
    }
    Ok(json!({
        "simplified": trace.simplified(),
        "initial_elements": trace.initial.len(),
        "rounds": rounds,
        "final_elements": trace.final_matroid.len(),
        "final_rank": trace.final_matroid.rank(),
        "summary": summary,
    }))
}

fn closure(
    m: &BinaryMatroid,
    input: Value,
    search: &Search,
    one_at_a_time: bool,
    budget: &Budget,
) -> anyhow::Result<Report> {
    let opts = ClosureOptions {
        strategy: search.strategy.into(),
        mode: if one_at_a_time {
            RoundMode::OneAtATime
        } else {
            RoundMode::Batch
        },
        projective_shortcut: !search.no_shortcut,
    };
    let (c, trace) = theta3_closure(m, opts, budget)?;
    let summary = format!("final = {}, {} elements", describe(&c, budget)?, c.len());
    let mut report = Report::new("closure", input);
    report.verdict = json!(trace.rounds.is_empty() && !trace.simplified());
    report.trace = trace_json(&trace, &summary)?;
    report.extra.push(("matroid", json!(serialize_matroid(&c))));
    report.summary = format!(
        "{} round(s), {} element(s) added\n{summary}",
        trace.rounds.len(),
        trace.rounds.iter().map(|r| r.added.len()).sum::<usize>()
    );
    Ok(report)
}

fn tree_json(t: &MatroidLabelledTree) -> Value {
    let vertices: Vec<Value> = t
        .vertices()
        .iter()
        .zip(t.kinds())
        .map(|(v, k)| {
            json!({
                "kind": format!("{k:?}"),
                "elements": labels(v.labels()),
                "rank": v.rank(),
            })
        })
        .collect();
    let edges: Vec<Value> = t
        .edges()
        .iter()
        .map(|(a, b, e)| json!({ "from": a, "to": b, "element": e }))
        .collect();
    json!({ "vertices": vertices, "edges": edges })
}

fn decompose(m: &BinaryMatroid, input: Value, budget: &Budget) -> anyhow::Result<Report> {
    let mut report = Report::new("decompose", input);
    let mut trees = Vec::new();
    let mut lines = Vec::new();
    for comp in m.connected_components() {
        let part = m.restrict(comp)?;
        let t = canonical_tree_decomposition(&part, DecomposeOptions::default(), budget)?;
        lines.push(format!(
            "component {{{}}}: {} vertices, {} edges",
            part.labels().join(","),
            t.vertices().len(),
            t.edges().len()
        ));
        trees.push(tree_json(&t));
    }
    report.extra.push(("tree", json!(trees)));
    match classify_theta3(m, ClassifyOptions::default(), budget)? {
        Verdict::InClass(r) => {
            report.verdict = json!(true);
            lines.push(format!("in class: {r}"));
            report.recipe = json!(r.to_string());
        }
        Verdict::NotInClass(w) => {
            report.verdict = json!(false);
            lines.push(format!(
                "not in class: {}; arcs {}, completed by {}",
                w.objection,
                arcs_text(&w.arcs),
                w.completing
            ));
            report.witness = json!({
                "arcs": w.arcs.iter().map(|a| labels(a)).collect::<Vec<_>>(),
                "completing": w.completing.to_string(),
                "objection": w.objection,
            });
            report.exit = 1;
        }
    }
    report.summary = lines.join("\n");
    Ok(report)
}

fn build(text: &str) -> anyhow::Result<Report> {
    let recipe: BuildRecipe = text.parse()?;
    let m = recipe.evaluate()?;
    let mut report = Report::new("build", json!(text));
    report.recipe = json!(recipe.to_string());
    report.extra.push(("matroid", json!(serialize_matroid(&m))));
    report.summary = serialize_matroid(&m).trim_end().to_string();
    Ok(report)
}

fn subset(rank: usize, mask: u64) -> anyhow::Result<BinaryMatroid> {
    let cols = (1..1u64 << rank)
        .filter(|v| mask >> (v - 1) & 1 == 1)
        .map(|v| Ok((format!("x{v}"), GF2Vector::new(v, rank)?)))
        .collect::<theta3::Result<Vec<_>>>()?;
    Ok(BinaryMatroid::new(rank, cols)?)
}

fn crossval(rank: usize, samples: usize, seed: u64, budget: &Budget) -> anyhow::Result<Report> {
    if !(2..=6).contains(&rank) {
        bail!("--rank must be between 2 and 6");
    }
    let mut cases: Vec<BinaryMatroid> = (0..1u64 << 7)
        .map(|m| subset(3, m))
        .collect::<anyhow::Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (1u64 << rank) - 1;
    for _ in 0..samples {
        cases.push(subset(rank, rng.gen_range(0..1u64 << points))?);
    }
    let mut mismatches = Vec::new();
    let (mut members, mut closed_count) = (0, 0);
    for m in &cases {
        let closed = is_theta3_closed(m, CheckOptions::default(), budget)?.is_closed();
        let in_class = match classify_theta3(m, ClassifyOptions::default(), budget) {
            Ok(v) => Some(v.in_class()),
            Err(theta3::Error::Discrepancy(_)) => None,
            Err(e) => return Err(e.into()),
        };
        closed_count += closed as usize;
        members += (in_class == Some(true)) as usize;
        if in_class != Some(closed) {
            mismatches.push(json!({
                "matroid": serialize_matroid(m),
                "closed": closed,
                "in_class": in_class,
            }));
        }
    }
    let mut report = Report::new(
        "crossval",
        json!({ "rank": rank, "samples": samples, "seed": seed }),
    );
    report.verdict = json!(mismatches.is_empty());
    report.trace = json!({ "cases": cases.len(), "closed": closed_count, "in_class": members });
    report.summary = format!(
        "{} cases, {closed_count} closed, {members} in class, {} disagreement(s)",
        cases.len(),
        mismatches.len()
    );
    if !mismatches.is_empty() {
        report.witness = json!(mismatches);
        report.exit = 1;
    }
    Ok(report)
}

fn catalog_report() -> Report {
    let mut report = Report::new("catalog", Value::Null);
    let entries: Vec<Value> = CATALOG
        .iter()
        .map(|(k, d)| json!({ "key": k, "description": d }))
        .collect();
    report.extra.push(("catalog", json!(entries)));
    report.summary = CATALOG
        .iter()
        .map(|(k, d)| format!("{k:<14} {d}"))
        .collect::<Vec<_>>()
        .join("\n");
    report
}

fn input_json(input: &Input, m: &BinaryMatroid) -> Value {
    json!({
        "source": input.input,
        "graph": input.graph,
        "elements": m.len(),
        "rank": m.rank(),
    })
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let budget = Budget::new(
        cli.max_subsets,
        cli.max_seconds.map(Duration::from_secs_f64),
    );
    match &cli.command {
        Command::Check { input, search } => {
            let m = load(input)?;
            check(&m, input_json(input, &m), search, &budget)
        }
        Command::Closure {
            input,
            search,
            one_at_a_time,
        } => {
            let m = load(input)?;
            closure(&m, input_json(input, &m), search, *one_at_a_time, &budget)
        }
        Command::Decompose { input } => {
            let m = load(input)?;
            decompose(&m, input_json(input, &m), &budget)
        }
        Command::Build { recipe } => build(recipe),
        Command::Crossval {
            rank,
            samples,
            seed,
        } => crossval(*rank, *samples, *seed, &budget),
        Command::Catalog => Ok(catalog_report()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match run(&cli) {
        Ok(report) => {
            let elapsed = start.elapsed();
            match cli.format {
                OutputFormat::Json => {
                    let timings = if cli.no_timings {
                        Value::Null
                    } else {
                        json!({ "total_seconds": elapsed.as_secs_f64() })
                    };
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report.to_json(timings))
                            .expect("report serializes")
                    );
                }
                OutputFormat::Text => {
                    println!("{}", report.summary);
                    if !cli.no_timings {
                        println!("time: {elapsed:.3?}");
                    }
                }
            }
            ExitCode::from(report.exit)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = e
                .downcast_ref::<theta3::Error>()
                .is_some_and(|e| matches!(e, theta3::Error::BudgetExceeded(_)));
            ExitCode::from(if budget { 3 } else { 2 })
        }
    }
}
