use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hbtp::bench::{
    self, dataset_from_jsonl, dataset_to_jsonl, generate_dataset, run_benchmark, run_sweep, simulate_execution,
    BenchConfig, DatasetOptions, Difficulty, Disturbance, SceneSource, SpaceMode, SweepConfig, TaskRecord,
};
use hbtp::domain::{parse_task, ActionId, Domain, TaskSpec};
use hbtp::feedback::{plan_with_feedback, FeedbackConfig};
use hbtp::household::Size;
use hbtp::planner::{plan, Algorithm, Budget, Heuristic, Problem, DEFAULT_ALPHA};
use hbtp::provider::{
    CacheMode, LlmConfig, MockProvider, OracleProvider, OracleScope, ProviderConfig, ProviderError, Request,
};
use hbtp::{bt, fixtures, household};

mod error;

use error::CliError;

/// Heuristic behavior-tree planning.
#[derive(Parser)]
#[command(name = "hbtp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a behavior tree for one task.
    Plan(PlanArgs),
    /// Tick a saved tree from a task's initial state.
    Exec(ExecArgs),
    /// Generate a task dataset as JSON lines.
    Gen(GenArgs),
    /// Run algorithms over a dataset and report.
    Bench(BenchArgs),
    /// Plan with perturbed optimal paths over a grid of correct and error rates.
    Sweep(SweepArgs),
    /// Print the optimal action sequence for one task.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct DomainArgs {
    /// Domain file, or one of kitchen-mini, witness, household-small,
    /// household-medium, household-large.
    #[arg(long)]
    domain: String,
}

#[derive(Args)]
struct TaskArgs {
    #[command(flatten)]
    domain: DomainArgs,
    /// Task file with `s0:` and `goal:` lines. Optional for kitchen-mini and
    /// witness, which ship with one.
    #[arg(long)]
    task: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderKind {
    Oracle,
    Mock,
    Llm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    Full,
    GoalObjects,
}

#[derive(Args)]
struct ProviderArgs {
    #[arg(long, value_enum, default_value = "oracle")]
    provider: ProviderKind,
    /// Share of the optimal path the mock keeps.
    #[arg(long, default_value_t = 1.0)]
    correct_rate: f64,
    /// Share of the mock's path that is noise.
    #[arg(long, default_value_t = 0.0)]
    error_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Actions the oracle may use. Defaults to goal-objects on household
    /// domains and full elsewhere.
    #[arg(long, value_enum)]
    oracle_scope: Option<Scope>,
    /// Completion cache for the llm provider.
    #[arg(long)]
    llm_cache: Option<PathBuf>,
    /// Serve only cached completions.
    #[arg(long, requires = "llm_cache")]
    llm_replay: bool,
}

#[derive(Args)]
struct PlanningArgs {
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = 5000)]
    budget_ms: u64,
    #[arg(long, default_value_t = 3)]
    k_summary: usize,
}

#[derive(Args)]
struct PlanArgs {
    #[command(flatten)]
    task: TaskArgs,
    #[arg(long, default_value = "hbtp-s", value_parser = parse_algorithm)]
    algo: Algorithm,
    #[command(flatten)]
    provider: ProviderArgs,
    #[command(flatten)]
    planning: PlanningArgs,
    /// Search the provider-pruned space with up to this many feedback
    /// rounds instead of the whole domain.
    #[arg(long)]
    max_feedback: Option<u32>,
    /// Where to write the tree; printed inline when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExecArgs {
    #[command(flatten)]
    task: TaskArgs,
    #[arg(long)]
    bt: PathBuf,
    /// `STEP:+Lit,-Lit` changes forced into the state after STEP actions.
    #[arg(long)]
    disturb: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tier {
    Easy,
    Medium,
    Hard,
    All,
}

#[derive(Args)]
struct DatasetArgs {
    /// JSON-lines dataset; generated from --count and --dataset-seed when absent.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Tasks per tier.
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, value_enum, default_value = "all")]
    difficulty: Tier,
    #[arg(long, default_value_t = 0)]
    dataset_seed: u64,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    task: TaskArgs,
    #[command(flatten)]
    dataset: DatasetArgs,
    #[arg(long, value_enum)]
    oracle_scope: Option<Scope>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Full,
    Pruned,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    task: TaskArgs,
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Comma-separated; all four by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    algo: Vec<Algorithm>,
    #[command(flatten)]
    provider: ProviderArgs,
    #[command(flatten)]
    planning: PlanningArgs,
    #[arg(long, value_enum, default_value = "full")]
    mode: Mode,
    #[arg(long, default_value_t = 3)]
    max_feedback: u32,
    #[arg(long, default_value_t = 1)]
    repetitions: u32,
    /// Directory for runs.jsonl, trees.jsonl, report.csv and timing.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// One task at a time, for clean timings.
    #[arg(long)]
    serial: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    task: TaskArgs,
    #[command(flatten)]
    dataset: DatasetArgs,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.4,0.6,0.8,1.0")]
    correct_rates: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.2,0.4")]
    error_rates: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "hbtp-o,hbtp-s", value_parser = parse_algorithm)]
    algo: Vec<Algorithm>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    planning: PlanningArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    serial: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    task: TaskArgs,
    #[arg(long, value_enum)]
    oracle_scope: Option<Scope>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: hbtp::planner::PlanError| e.to_string())
}

/// A resolved `--domain` value.
struct Loaded {
    domain: Domain,
    size: Option<Size>,
    bundled_task: Option<&'static str>,
}

fn load_domain(args: &DomainArgs) -> Result<Loaded, CliError> {
    let builtin = |text: &str, task| -> Result<Loaded, CliError> {
        Ok(Loaded {
            domain: Domain::parse(text).map_err(CliError::parse)?,
            size: None,
            bundled_task: task,
        })
    };
    match args.domain.as_str() {
        "kitchen-mini" => builtin(fixtures::KITCHEN_MINI, Some(fixtures::KITCHEN_MINI_TASK)),
        "witness" => builtin(fixtures::PRUNING_WITNESS, Some(fixtures::PRUNING_WITNESS_TASK)),
        name => match name.strip_prefix("household-").map(str::parse::<Size>) {
            Some(Ok(size)) => Ok(Loaded {
                domain: household::domain(size),
                size: Some(size),
                bundled_task: None,
            }),
            Some(Err(e)) => Err(CliError::Usage(e)),
            None => builtin(&read(Path::new(name))?, None),
        },
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn load_task(args: &TaskArgs, loaded: &Loaded) -> Result<TaskSpec, CliError> {
    let text = match (&args.task, loaded.bundled_task) {
        (Some(p), _) => read(p)?,
        (None, Some(t)) => t.to_string(),
        (None, None) => return Err(CliError::Usage("--task is required for this domain".into())),
    };
    parse_task(&text, &loaded.domain).map_err(CliError::parse)
}

fn oracle_for(scope: Option<Scope>, loaded: &Loaded) -> OracleProvider {
    let scope = match scope {
        Some(Scope::Full) => OracleScope::Full,
        Some(Scope::GoalObjects) => OracleScope::GoalObjects,
        None if loaded.size.is_some() => OracleScope::GoalObjects,
        None => OracleScope::Full,
    };
    OracleProvider::with_scope(scope)
}

fn provider_config(args: &ProviderArgs, loaded: &Loaded) -> Result<ProviderConfig, CliError> {
    let oracle = oracle_for(args.oracle_scope, loaded);
    Ok(match args.provider {
        ProviderKind::Oracle => ProviderConfig::Oracle(oracle),
        ProviderKind::Mock => ProviderConfig::Mock(
            MockProvider::new(args.correct_rate, args.error_rate, args.seed)?.with_oracle(oracle),
        ),
        ProviderKind::Llm => {
            let mut c = LlmConfig::from_env()?;
            c.cache = match (&args.llm_cache, args.llm_replay) {
                (Some(p), true) => CacheMode::Replay(p.clone()),
                (Some(p), false) => CacheMode::ReadWrite(p.clone()),
                (None, _) => CacheMode::Off,
            };
            ProviderConfig::Llm(c)
        }
    })
}

fn budget(ms: u64) -> Budget {
    Budget::time(Duration::from_millis(ms))
}

fn names(domain: &Domain, actions: &[ActionId]) -> Vec<String> {
    actions.iter().map(|&a| domain.action_name(a).to_string()).collect()
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn cmd_plan(args: &PlanArgs) -> Result<(), CliError> {
    let loaded = load_domain(&args.task.domain)?;
    let d = &loaded.domain;
    let task = load_task(&args.task, &loaded)?;
    let problem = Problem::new(d, task.init.clone(), task.goal.clone());
    let b = budget(args.planning.budget_ms);
    let mut rounds = None;
    let result = if !args.algo.uses_heuristic() {
        plan(&problem, args.algo, &[], args.planning.alpha, &b)?
    } else {
        let provider = provider_config(&args.provider, &loaded)?.build()?;
        match args.max_feedback {
            Some(max_rounds) => {
                let heuristic = match args.algo {
                    Algorithm::HbtpSatisficing => Heuristic::Satisficing,
                    _ => Heuristic::Optimal {
                        alpha: args.planning.alpha,
                    },
                };
                let fc = FeedbackConfig {
                    heuristic,
                    max_rounds,
                    budget: b,
                    k: args.planning.k_summary,
                    missing_limit: None,
                };
                let run = plan_with_feedback(&problem, provider.as_ref(), &fc, args.provider.seed)?;
                rounds = Some(serde_json::to_value(&run.rounds).expect("round logs serialize"));
                run.result.ok_or(CliError::Unsolved("every round left the pruned space empty".into()))?
            }
            None => {
                let reasoning = provider.query(&Request {
                    task_seed: args.provider.seed,
                    ..Request::new(d, &task.init, &task.goal)
                })?;
                let hat: Vec<ActionId> = reasoning.path.iter().filter_map(|n| d.action_id(n)).collect();
                plan(&problem, args.algo, &hat, args.planning.alpha, &b)?
            }
        }
    };
    let record = result.record(d, args.algo);
    let mut out = json!({ "record": record });
    if let Some(r) = rounds {
        out["rounds"] = r;
    }
    if !result.is_solved() {
        print_json(&out);
        return Err(CliError::Unsolved(format!("planner stopped with outcome {:?}", result.outcome)));
    }
    let trace = simulate_execution(&result.tree, d, &task.init, &[]);
    out["execution"] = json!({
        "success": trace.success,
        "steps": trace.steps,
        "cost": trace.cost(d),
        "actions": names(d, &trace.actions),
    });
    let tree = bt::serialize(&result.tree, d);
    match &args.out {
        Some(p) => {
            write(p, &tree)?;
            out["bt"] = json!(p);
        }
        None => out["bt"] = serde_json::from_str(&tree).expect("trees serialize to JSON"),
    }
    print_json(&out);
    Ok(())
}

fn parse_disturbance(domain: &Domain, text: &str) -> Result<Disturbance, CliError> {
    let bad = || CliError::Usage(format!("bad --disturb `{text}`, expected STEP:+Lit,-Lit"));
    let (step, changes) = text.split_once(':').ok_or_else(bad)?;
    let mut d = Disturbance {
        after_step: step.trim().parse().map_err(|_| bad())?,
        add: Default::default(),
        remove: Default::default(),
    };
    // split on commas outside parentheses
    let mut depth = 0;
    let mut parts = vec![String::new()];
    for ch in changes.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(String::new());
                continue;
            }
            _ => {}
        }
        parts.last_mut().expect("non-empty").push(ch);
    }
    for p in parts.iter().map(|p| p.trim()).filter(|p| !p.is_empty()) {
        let (sign, lit) = p.split_at(1);
        let lit = domain.parse_literal(lit.trim()).map_err(CliError::parse)?;
        match sign {
            "+" => d.add.insert(lit),
            "-" => d.remove.insert(lit),
            _ => return Err(bad()),
        };
    }
    Ok(d)
}

fn cmd_exec(args: &ExecArgs) -> Result<(), CliError> {
    let loaded = load_domain(&args.task.domain)?;
    let d = &loaded.domain;
    let task = load_task(&args.task, &loaded)?;
    let tree = bt::deserialize(&read(&args.bt)?, d).map_err(CliError::parse)?;
    let disturbances = args
        .disturb
        .iter()
        .map(|t| parse_disturbance(d, t))
        .collect::<Result<Vec<_>, _>>()?;
    let trace = simulate_execution(&tree, d, &task.init, &disturbances);
    let goal_reached = task.goal.is_subset(&trace.final_state);
    print_json(&json!({
        "success": trace.success,
        "goal_reached": goal_reached,
        "steps": trace.steps,
        "cost": trace.cost(d),
        "actions": names(d, &trace.actions),
        "failure": trace.failure,
        "final_state": d.condition_names(&trace.final_state).collect::<Vec<_>>(),
    }));
    if trace.success && goal_reached {
        Ok(())
    } else {
        Err(CliError::ExecutionFailed)
    }
}

fn scenes(loaded: &Loaded, args: &TaskArgs) -> Result<SceneSource, CliError> {
    match loaded.size {
        Some(size) => Ok(SceneSource::Household(size)),
        None => Ok(SceneSource::RandomWalk {
            base: load_task(args, loaded)?.init,
            max_steps: 6,
        }),
    }
}

fn dataset_options(loaded: &Loaded, scope: Option<Scope>) -> DatasetOptions {
    let mut opts = if loaded.size.is_some() {
        DatasetOptions::household()
    } else {
        DatasetOptions::default()
    };
    opts.oracle = oracle_for(scope, loaded);
    opts
}

fn load_dataset(
    loaded: &Loaded,
    task: &TaskArgs,
    args: &DatasetArgs,
    scope: Option<Scope>,
) -> Result<Vec<TaskRecord>, CliError> {
    if let Some(p) = &args.dataset {
        return dataset_from_jsonl(&read(p)?).map_err(CliError::parse);
    }
    let scenes = scenes(loaded, task)?;
    let opts = dataset_options(loaded, scope);
    let tiers: Vec<Difficulty> = match args.difficulty {
        Tier::Easy => vec![Difficulty::Easy],
        Tier::Medium => vec![Difficulty::Medium],
        Tier::Hard => vec![Difficulty::Hard],
        Tier::All => Difficulty::ALL.to_vec(),
    };
    let mut out = Vec::new();
    for t in tiers {
        let seed = args.dataset_seed.wrapping_add(Difficulty::ALL.iter().position(|&x| x == t).unwrap_or(0) as u64);
        out.extend(generate_dataset(&loaded.domain, &scenes, args.count, t, seed, &opts)?);
    }
    Ok(out)
}

fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let loaded = load_domain(&args.task.domain)?;
    let tasks = load_dataset(&loaded, &args.task, &args.dataset, args.oracle_scope)?;
    let text = dataset_to_jsonl(&tasks);
    match &args.out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let loaded = load_domain(&args.task.domain)?;
    let tasks = load_dataset(&loaded, &args.task, &args.dataset, args.provider.oracle_scope)?;
    let cfg = BenchConfig {
        algorithms: if args.algo.is_empty() {
            Algorithm::ALL.to_vec()
        } else {
            args.algo.clone()
        },
        provider: provider_config(&args.provider, &loaded)?,
        alpha: args.planning.alpha,
        budget: budget(args.planning.budget_ms),
        repetitions: args.repetitions,
        mode: match args.mode {
            Mode::Full => SpaceMode::Full,
            Mode::Pruned => SpaceMode::Pruned,
        },
        max_feedback: args.max_feedback,
        k_summary: args.planning.k_summary,
        serial: args.serial,
    };
    let rows = run_benchmark(&loaded.domain, &tasks, &cfg)?;
    if let Some(dir) = &args.out {
        bench::write_outputs(dir, &loaded.domain, &rows).map_err(|e| CliError::Io {
            path: dir.clone(),
            source: e,
        })?;
    }
    print!("{}", bench::report_csv(&bench::report(&rows)));
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let loaded = load_domain(&args.task.domain)?;
    let tasks = load_dataset(&loaded, &args.task, &args.dataset, None)?;
    let cfg = SweepConfig {
        correct_rates: args.correct_rates.clone(),
        error_rates: args.error_rates.clone(),
        algorithms: args.algo.clone(),
        alpha: args.planning.alpha,
        budget: budget(args.planning.budget_ms),
        seed: args.seed,
        serial: args.serial,
    };
    let text = bench::sweep_csv(&run_sweep(&loaded.domain, &tasks, &cfg)?);
    match &args.out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let loaded = load_domain(&args.task.domain)?;
    let d = &loaded.domain;
    let task = load_task(&args.task, &loaded)?;
    let p = oracle_for(args.oracle_scope, &loaded).optimal(&Request::new(d, &task.init, &task.goal))
        .map_err(ProviderError::Oracle)?;
    let mut distinct = names(d, &p.actions);
    distinct.sort();
    distinct.dedup();
    print_json(&json!({
        "path": names(d, &p.actions),
        "cost": p.cost,
        "actions": distinct,
    }));
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Plan(a) => cmd_plan(a),
        Command::Exec(a) => cmd_exec(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Oracle(a) => cmd_oracle(a),
    }
}

fn main() -> ExitCode {
    let result = Cli::try_parse()
        .map_err(|e| match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => e.exit(),
            _ => CliError::Usage(e.render().to_string()),
        })
        .and_then(|cli| run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.code(), "message": e.to_string() }));
            ExitCode::from(e.exit_status())
        }
    }
}

impl From<ProviderError> for CliError {
    fn from(e: ProviderError) -> Self {
        CliError::Provider(e)
    }
}
