use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cohesion_lab::triangles::triangle_count;
use cohesion_lab::verify::{run_suite, PropertyReport, PROPERTIES};
use cohesion_lab::{
    census, cohesion_from_census, parse_edge_list, reduce, solve_exact, solve_heuristic, Census, Error, Graph,
    ReduceOptions, ReductionInstance, SearchConfig, SolverResult, VertexSet,
};
use num_bigint::BigUint;
use serde_json::{json, Value};

/// Triangle cohesion of vertex sets: evaluate, search, reduce, verify.
#[derive(Parser)]
#[command(name = "cohesion-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Graph file: an edge list, or graph JSON when the name ends in `.json`.
    /// `-` reads an edge list from standard input.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Print a JSON payload (default).
    #[arg(long, global = true, conflicts_with = "human")]
    json: bool,
    /// Print plain text instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Worker threads for parallel searches and suites.
    #[arg(long, global = true, env = "COHESION_LAB_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    rng_seed: u64,
    /// Lift the exact solver's vertex guard.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Cohesion of one vertex set.
    Cohesion {
        /// Comma-separated vertex tokens.
        #[arg(long)]
        set: String,
    },
    /// Search for a maximum-cohesion set.
    Solve {
        #[arg(value_enum)]
        mode: Mode,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        time_budget_ms: Option<u64>,
        /// Comma-separated tokens every candidate must contain.
        #[arg(long)]
        seed_set: Option<String>,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Build the Connected-Cohesive instance for a Clique instance.
    Reduce {
        #[arg(long)]
        k: usize,
        /// Gadget size; defaults to 2 * C(n,3)^4.
        #[arg(long)]
        gadget: Option<u64>,
        /// Instance JSON path; a materialized graph goes next to it with
        /// the extension `.edges`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest vertex count that is materialized.
        #[arg(long, default_value_t = cohesion_lab::reduction::DEFAULT_MATERIALIZATION_CAP)]
        cap: usize,
    },
    /// Run property suites.
    Verify {
        /// Comma-separated suite names, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Basic graph statistics.
    Stats,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Heuristic,
}

struct Failure {
    code: u8,
    message: String,
    payload: Option<Value>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into(), payload: None }
    }

    fn input(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into(), payload: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Refused(_) | Error::UnknownProperty(_) | Error::Unsupported(_) | Error::Domain(_) => 2,
            Error::Parse { .. } | Error::Validation(_) | Error::Disconnected { .. } | Error::Io(_) | Error::Json(_) => {
                3
            }
            _ => 1,
        };
        Self { code, message: e.to_string(), payload: None }
    }
}

/// Successful output: the payload plus the exit code it implies.
struct Outcome {
    payload: Value,
    human: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.common.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let result = run(&cli);
    eprintln!("elapsed: {:.3?}", start.elapsed());
    match result {
        Ok(out) => {
            emit(&cli.common, &out.payload, &out.human);
            ExitCode::from(out.code)
        }
        Err(f) => {
            if let Some(p) = &f.payload {
                emit(&cli.common, p, "");
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(common: &Common, payload: &Value, human: &str) {
    let mut out = io::stdout().lock();
    let text = if common.human && !human.is_empty() {
        human.to_owned()
    } else {
        serde_json::to_string_pretty(payload).expect("payload serializes")
    };
    let _ = writeln!(out, "{text}");
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Cohesion { set } => {
            let g = load_graph(&cli.common)?;
            cmd_cohesion(&g, set)
        }
        Command::Solve { mode, max_size, time_budget_ms, seed_set, restarts } => {
            let g = load_graph(&cli.common)?;
            let cfg = SearchConfig {
                max_subset_size: *max_size,
                time_budget: time_budget_ms.map(Duration::from_millis),
                seed_set: seed_set.as_deref().map(|s| resolve_set(&g, s)).transpose()?,
                heuristic_restarts: *restarts,
                rng_seed: cli.common.rng_seed,
                force: cli.common.force,
            };
            cmd_solve(&g, *mode, &cfg)
        }
        Command::Reduce { k, gadget, out, cap } => {
            let g = load_graph(&cli.common)?;
            cmd_reduce(&g, *k, *gadget, *cap, out.as_deref())
        }
        Command::Verify { suite, trials } => cmd_verify(suite, *trials, cli.common.rng_seed),
        Command::Stats => cmd_stats(&load_graph(&cli.common)?),
    }
}

fn load_graph(common: &Common) -> Result<Graph, Failure> {
    let path = common.graph.as_deref().ok_or_else(|| Failure::usage("--graph is required for this command"))?;
    let in_file = |e: Error| Failure { message: format!("{}: {e}", path.display()), ..Failure::from(e) };
    if path == Path::new("-") {
        return cohesion_lab::read_edge_list(io::stdin().lock()).map_err(in_file);
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|x| x == "json") {
        serde_json::from_str(&text).map_err(|e| in_file(Error::Json(e)))
    } else {
        parse_edge_list(&text).map_err(in_file)
    }
}

fn resolve_set(g: &Graph, spec: &str) -> Result<VertexSet, Failure> {
    let mut set = VertexSet::new(g.vertex_count());
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v = g.vertex_by_label(token).ok_or_else(|| Failure::input(format!("unknown vertex token `{token}`")))?;
        set.insert(v);
    }
    Ok(set)
}

fn labels_of(g: &Graph, s: &VertexSet) -> Vec<String> {
    s.iter().map(|v| g.label(v).into_owned()).collect()
}

fn count(c: &BigUint) -> Value {
    match u64::try_from(c) {
        Ok(v) => json!(v),
        Err(_) => json!(c.to_string()),
    }
}

fn cmd_cohesion(g: &Graph, spec: &str) -> Result<Outcome, Failure> {
    let s = resolve_set(g, spec)?;
    let c: Census = census(g, &s)?;
    let value = cohesion_from_census(s.len(), &c)?;
    let human = format!(
        "set       {}\nsize      {}\ninside    {}\noutbound  {}\ncohesion  {} (~{:.6})",
        labels_of(g, &s).join(","),
        s.len(),
        c.inside,
        c.outbound,
        value,
        value.approx::<f64>()
    );
    let payload = json!({
        "size": s.len(),
        "inside": count(&c.inside),
        "outbound": count(&c.outbound),
        "cohesion": value,
    });
    Ok(Outcome { payload, human, code: 0 })
}

fn solver_payload(g: &Graph, mode: Mode, r: &SolverResult) -> Value {
    let mut v = serde_json::to_value(r).expect("solver result serializes");
    let obj = v.as_object_mut().expect("object");
    obj.insert(
        "mode".into(),
        json!(match mode {
            Mode::Exact => "exact",
            Mode::Heuristic => "heuristic",
        }),
    );
    obj.insert("best_labels".into(), json!(labels_of(g, &r.best_set)));
    v
}

fn cmd_solve(g: &Graph, mode: Mode, cfg: &SearchConfig) -> Result<Outcome, Failure> {
    let result = match mode {
        Mode::Exact => solve_exact(g, cfg),
        Mode::Heuristic => solve_heuristic(g, cfg),
    };
    let r = match result {
        Ok(r) => r,
        Err(Error::TimeBudgetExceeded { partial }) => {
            return Err(Failure {
                code: 1,
                message: format!(
                    "time budget exceeded after exploring {} subsets; best so far is not proven optimal",
                    partial.explored
                ),
                payload: Some(solver_payload(g, mode, &partial)),
            });
        }
        Err(e @ Error::Refused(_)) if !cfg.force && g.vertex_count() <= cohesion_lab::solvers::EXACT_VERTEX_LIMIT => {
            return Err(Failure::usage(format!("{e}; pass --force to run it anyway, or use the heuristic mode")));
        }
        Err(e) => return Err(e.into()),
    };
    eprintln!("explored {} candidate sets", r.explored);
    let human = format!(
        "best      {}\ncohesion  {} (~{:.6})\nexplored  {}\nexact     {}{}",
        labels_of(g, &r.best_set).join(","),
        r.best_value,
        r.best_value.approx::<f64>(),
        r.explored,
        r.exact,
        if r.no_positive_cohesion { "\nno set has positive cohesion" } else { "" }
    );
    Ok(Outcome { payload: solver_payload(g, mode, &r), human, code: 0 })
}

fn stats_block(inst: &ReductionInstance) -> Value {
    json!({
        "n": inst.original_n,
        "k": inst.k,
        "lambda": inst.lambda,
        "gadget_size": inst.gadget_size.to_string(),
        "non_edges": inst.non_edges.len(),
        "materialized": inst.is_materialized(),
        "transformed_vertices": inst.transformed_vertices().to_string(),
        "transformed_edges": inst.transformed_edges().to_string(),
    })
}

fn cmd_reduce(g: &Graph, k: usize, gadget: Option<u64>, cap: usize, out: Option<&Path>) -> Result<Outcome, Failure> {
    let opts = ReduceOptions { gadget_size: gadget.map(BigUint::from), materialization_cap: cap };
    let inst = reduce(g, k, &opts).map_err(|e| match e {
        Error::Disconnected { components } => {
            let named: Vec<String> = components
                .iter()
                .map(|c| format!("{{{}}}", c.iter().map(|&v| g.label(v)).collect::<Vec<_>>().join(",")))
                .collect();
            Failure::input(format!("graph is disconnected; components: {}", named.join(" ")))
        }
        other => other.into(),
    })?;
    let mut stats = stats_block(&inst);
    if let Some(path) = out {
        let write =
            |p: &Path, text: String| fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display())));
        write(path, serde_json::to_string_pretty(&inst).expect("instance serializes") + "\n")?;
        stats["instance_path"] = json!(path.display().to_string());
        if let Some(gp) = inst.graph() {
            let edges = path.with_extension("edges");
            write(&edges, gp.to_edge_list())?;
            stats["edge_list_path"] = json!(edges.display().to_string());
        }
    }
    let human = format!(
        "k         {}\nlambda    {}\ngadget    {}\nvertices  {}\nedges     {}\nmode      {}",
        inst.k,
        inst.lambda,
        inst.gadget_size,
        inst.transformed_vertices(),
        inst.transformed_edges(),
        if inst.is_materialized() { "materialized" } else { "virtual" }
    );
    Ok(Outcome { payload: stats, human, code: 0 })
}

fn cmd_verify(spec: &str, trials: u64, rng_seed: u64) -> Result<Outcome, Failure> {
    let names: Vec<&str> = if spec.trim() == "all" {
        PROPERTIES.to_vec()
    } else {
        spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
    };
    if names.is_empty() {
        return Err(Failure::usage("no suite named"));
    }
    let reports: Vec<PropertyReport> = run_suite(&names, trials, rng_seed)?;
    let all_passed = reports.iter().all(|r| r.passed);
    let human = reports
        .iter()
        .map(|r| {
            format!(
                "{:<20} {} ({} instances, {} failures, {} degenerate)",
                r.property,
                if r.passed { "pass" } else { "FAIL" },
                r.instances_checked,
                r.failure_count,
                r.degenerate
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome { payload: json!(reports), human, code: if all_passed { 0 } else { 1 } })
}

fn cmd_stats(g: &Graph) -> Result<Outcome, Failure> {
    let components = g.components().len();
    let max_degree = (0..g.vertex_count()).map(|v| g.degree(v)).max().unwrap_or(0);
    let triangles = triangle_count(g);
    let payload = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "triangles": triangles,
        "components": components,
        "connected": g.is_connected(),
        "max_degree": max_degree,
    });
    let human = format!(
        "vertices    {}\nedges       {}\ntriangles   {}\ncomponents  {}\nmax degree  {}",
        g.vertex_count(),
        g.edge_count(),
        triangles,
        components,
        max_degree
    );
    Ok(Outcome { payload, human, code: 0 })
}
