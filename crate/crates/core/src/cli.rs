//! Command-line front end. Machine outputs go to files, the human summary to
//! stdout and diagnostics to stderr.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::allpairs::AllPairs;
use crate::error::Error;
use crate::ga::{run_with_workers, GaConfig, RunRecord, Seed, Termination};
use crate::harness::{
    gap_report, gaps_csv, records_json, reference_cost, run_experiment, summarize, summary_csv,
    summary_text, trace_csv, trace_file_name, ExperimentPlan, Reference,
};
use crate::io::{
    allpairs_to_csv, allpairs_to_jsonl, config_hash, instance_config, load_instance, read_allpairs,
    read_json, schedule_to_csv, write_atomic, AtomicBatch, PairingRecord, TOOLKIT_VERSION,
};
use crate::legality::check_pairing;
use crate::model::{deadhead_count, Cents, Duty, FlightId, Instance, Pairing};
use crate::network::{enumerate_pairings_lenient, ConnectionGraph};
use crate::oracle::{
    generate_instance, solve_exact_with_limit, solve_greedy, Solution, SyntheticSpec,
    DEFAULT_MAX_PAIRINGS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "crewpair",
    version,
    about = "Crew pairing enumeration and genetic optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic schedule and instance configuration.
    GenerateInstance(GenerateArgs),
    /// Enumerate every legal pairing of an instance.
    Enumerate(EnumerateArgs),
    /// Run the genetic algorithm once.
    Solve(SolveArgs),
    /// Solve exactly (small instances) or greedily.
    Oracle(OracleArgs),
    /// Run a multi-seed experiment plan.
    Experiment(ExperimentArgs),
    /// Summarize run records, or verify a solution file with --check.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// JSON synthetic spec; the flags below override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    flights: Option<usize>,
    #[arg(long)]
    airports: Option<usize>,
    #[arg(long)]
    bases: Option<usize>,
    #[arg(long)]
    days: Option<u32>,
    #[arg(long)]
    hub_factor: Option<f64>,
    #[arg(long)]
    seed: Option<Seed>,
    /// Output directory; receives schedule.csv, instance.json, manifest.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    #[arg(long)]
    schedule: PathBuf,
    /// Instance configuration JSON (bases, rules, optional cost model).
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    cost_model: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long)]
    workers: Option<usize>,
    /// AllPairs output (JSON lines).
    #[arg(long)]
    out: PathBuf,
    /// Optional CSV export for inspection.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(id = "budget", multiple = false)]
struct BudgetArgs {
    #[arg(long, group = "budget")]
    budget_seconds: Option<f64>,
    #[arg(long, group = "budget")]
    budget_generations: Option<u64>,
}

impl BudgetArgs {
    fn termination(&self) -> Option<Termination> {
        match (self.budget_seconds, self.budget_generations) {
            (Some(s), _) => Some(Termination::Seconds(s)),
            (_, Some(g)) => Some(Termination::Generations(g)),
            _ => None,
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    allpairs: PathBuf,
    /// GA configuration JSON; missing fields take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Integer, or a float in [0, 1).
    #[arg(long)]
    seed: Option<Seed>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    workers: Option<usize>,
    /// Solution JSON.
    #[arg(long)]
    out: PathBuf,
    /// Trace CSV; defaults to the solution path with a `.trace.csv` suffix.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleMethod {
    Exact,
    Greedy,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    allpairs: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    method: OracleMethod,
    /// GA configuration JSON supplying the deadhead penalty.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Deadhead penalty in cents; overrides --config.
    #[arg(long)]
    penalty: Option<Cents>,
    #[arg(long, default_value_t = DEFAULT_MAX_PAIRINGS)]
    max_pairings: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long)]
    plan: PathBuf,
    /// Overrides the plan's worker cap.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Verify a solution file instead of summarizing records.
    #[arg(long, requires = "solution")]
    check: bool,
    #[arg(long)]
    solution: Option<PathBuf>,
    #[arg(long)]
    allpairs: Option<PathBuf>,
    #[arg(long)]
    schedule: Option<PathBuf>,
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long)]
    cost_model: Option<PathBuf>,
    /// records.json from an experiment.
    #[arg(long, conflicts_with = "check")]
    records: Option<PathBuf>,
    /// Reference for gaps: `oracle`/`greedy` need --allpairs; otherwise a
    /// cost in cents or a solution JSON path.
    #[arg(long)]
    reference: Option<String>,
    #[arg(long)]
    penalty: Option<Cents>,
    /// Directory for summary.csv and gaps.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INFEASIBLE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_infeasible() {
            EXIT_INFEASIBLE
        } else if e.is_io() {
            EXIT_IO
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::GenerateInstance(a) => cmd_generate(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Report(a) => cmd_report(a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Sets up logging from `CREWPAIR_LOG` (default `info`).
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("CREWPAIR_LOG", "info");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .try_init();
}

fn log_config<T: Serialize>(what: &str, value: &T) {
    log::info!(
        "{what}: {}",
        serde_json::to_string(value).unwrap_or_default()
    );
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
    bytes.push(b'\n');
    bytes
}

#[derive(Serialize)]
struct Manifest<'a, T: Serialize> {
    toolkit_version: &'a str,
    config_hash: &'a str,
    config: &'a T,
    files: Vec<String>,
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    let mut spec = match &a.spec {
        Some(path) => read_json::<SyntheticSpec>(path)?,
        None => SyntheticSpec::new(50, 6, 1, 0),
    };
    if let Some(v) = a.flights {
        spec.num_flights = v;
    }
    if let Some(v) = a.airports {
        spec.num_airports = v;
    }
    if let Some(v) = a.bases {
        spec.num_bases = v;
    }
    if let Some(v) = a.days {
        spec.time_horizon_days = v;
    }
    if let Some(v) = a.hub_factor {
        spec.hub_factor = v;
    }
    if let Some(s) = a.seed {
        spec.seed = s.0;
    }
    log_config("synthetic spec", &spec);
    let inst = generate_instance(&spec)?;
    let hash = config_hash(&spec);
    let files = vec!["schedule.csv".to_string(), "instance.json".into()];
    let mut batch = AtomicBatch::new();
    batch.stage(
        &a.out.join("schedule.csv"),
        schedule_to_csv(&inst.flights).as_bytes(),
    )?;
    batch.stage(
        &a.out.join("instance.json"),
        &to_json(&instance_config(&inst)),
    )?;
    let manifest = Manifest {
        toolkit_version: TOOLKIT_VERSION,
        config_hash: &hash,
        config: &spec,
        files,
    };
    batch.stage(&a.out.join("manifest.json"), &to_json(&manifest))?;
    batch.commit()?;
    println!(
        "flights={} bases={} airports={} seed={}",
        inst.num_flights(),
        inst.bases.len(),
        spec.num_airports,
        spec.seed
    );
    Ok(())
}

fn instance_hash(inst: &Instance) -> String {
    config_hash(&(instance_config(inst), &inst.flights))
}

fn cmd_enumerate(a: EnumerateArgs) -> CmdResult {
    let inst = load_instance(
        &a.instance.schedule,
        &a.instance.rules,
        a.instance.cost_model.as_deref(),
    )?;
    log_config("instance configuration", &instance_config(&inst));
    log::info!("workers: {:?}", a.workers);
    let all = enumerate_pairings_lenient(&inst, &ConnectionGraph::for_instance(&inst), a.workers)?;
    let uncoverable = all.uncoverable();
    println!(
        "flights={} pairings={} uncoverable={}",
        all.num_flights(),
        all.len(),
        uncoverable.len()
    );
    if !uncoverable.is_empty() {
        let ids: Vec<String> = uncoverable.iter().map(|f| f.to_string()).collect();
        return Err(Failure::infeasible(format!(
            "uncoverable flights: {}",
            ids.join(",")
        )));
    }
    let mut batch = AtomicBatch::new();
    batch.stage(
        &a.out,
        allpairs_to_jsonl(&all, &instance_hash(&inst)).as_bytes(),
    )?;
    if let Some(csv) = &a.csv {
        batch.stage(csv, allpairs_to_csv(&all).as_bytes())?;
    }
    batch.commit()?;
    Ok(())
}

/// Solution file shared by `solve` and `oracle`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub toolkit_version: String,
    pub config_hash: String,
    /// GA configuration name, or `exact` / `greedy`.
    pub source: String,
    pub dhd_penalty_cents: Cents,
    /// Pairing costs plus deadhead penalties.
    pub best_cost_cents: Cents,
    pub pairing_cost_cents: Cents,
    pub deadheads: u64,
    pub pairing_count: usize,
    pub pairings: Vec<PairingRecord>,
    /// Full GA run record with wall-clock fields zeroed; timings live in
    /// the trace CSV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record: Option<RunRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ga_config: Option<GaConfig>,
}

fn pairing_records(all: &AllPairs, ids: &[usize]) -> Vec<PairingRecord> {
    ids.iter()
        .map(|&p| PairingRecord::from_pairing(all.get(p)))
        .collect()
}

fn load_allpairs(path: &Path) -> std::result::Result<(String, AllPairs), Failure> {
    let (header, all) = read_allpairs(path)?;
    let uncoverable = all.uncoverable();
    if !uncoverable.is_empty() {
        return Err(Error::Uncoverable(uncoverable).into());
    }
    Ok((header.config_hash, all))
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let mut cfg = match &a.config {
        Some(path) => read_json::<GaConfig>(path)?,
        None => GaConfig::default(),
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(t) = a.budget.termination() {
        cfg.termination = t;
    }
    cfg.validate()?;
    log_config("GA configuration", &cfg);
    log::info!("workers: {:?}", a.workers);
    let (instance_hash, all) = load_allpairs(&a.allpairs)?;
    let record = run_with_workers(&all, &cfg, a.workers)?;

    let hash = config_hash(&(&cfg, &instance_hash));
    let file = SolutionFile {
        toolkit_version: TOOLKIT_VERSION.into(),
        config_hash: hash,
        source: cfg.config.to_string(),
        dhd_penalty_cents: cfg.dhd_penalty_cents,
        best_cost_cents: record.best_cost_cents,
        pairing_cost_cents: record.pairing_cost_cents,
        deadheads: record.deadheads,
        pairing_count: record.pairing_count,
        pairings: pairing_records(&all, &record.pairings),
        record: Some(record.without_timing()),
        ga_config: Some(cfg.clone()),
    };
    let trace_path = a.trace.clone().unwrap_or_else(|| {
        let mut name = a.out.file_stem().unwrap_or_default().to_os_string();
        name.push(".trace.csv");
        a.out.with_file_name(name)
    });
    let mut batch = AtomicBatch::new();
    batch.stage(&a.out, &to_json(&file))?;
    batch.stage(&trace_path, trace_csv(&record).as_bytes())?;
    batch.commit()?;
    println!(
        "{} seed={} fitness={} cost_usd={:.2} deadheads={} pairings={} generations={} elapsed_sec={:.2}",
        cfg.config,
        cfg.seed,
        record.best_cost_cents,
        record.pairing_cost_cents as f64 / 100.0,
        record.deadheads,
        record.pairing_count,
        record.generations,
        record.elapsed_sec
    );
    Ok(())
}

fn solution_file(
    source: &str,
    hash: String,
    penalty: Cents,
    s: &Solution,
    all: &AllPairs,
) -> SolutionFile {
    SolutionFile {
        toolkit_version: TOOLKIT_VERSION.into(),
        config_hash: hash,
        source: source.into(),
        dhd_penalty_cents: penalty,
        best_cost_cents: s.objective_cents,
        pairing_cost_cents: s.pairing_cost_cents,
        deadheads: s.deadheads,
        pairing_count: s.pairing_count,
        pairings: pairing_records(all, &s.pairings),
        record: None,
        ga_config: None,
    }
}

fn cmd_oracle(a: OracleArgs) -> CmdResult {
    let penalty = match (a.penalty, &a.config) {
        (Some(p), _) => p,
        (None, Some(path)) => read_json::<GaConfig>(path)?.dhd_penalty_cents,
        (None, None) => GaConfig::default().dhd_penalty_cents,
    };
    let source = match a.method {
        OracleMethod::Exact => "exact",
        OracleMethod::Greedy => "greedy",
    };
    log::info!(
        "oracle: method={source} penalty={penalty} max_pairings={}",
        a.max_pairings
    );
    let (instance_hash, all) = load_allpairs(&a.allpairs)?;
    let solution = match a.method {
        OracleMethod::Exact => solve_exact_with_limit(&all, penalty, a.max_pairings)?,
        OracleMethod::Greedy => solve_greedy(&all, penalty)?,
    };
    let hash = config_hash(&(source, penalty, &instance_hash));
    write_atomic(
        &a.out,
        &to_json(&solution_file(source, hash, penalty, &solution, &all)),
    )?;
    println!(
        "{source} objective={} cost_usd={:.2} deadheads={} pairings={}",
        solution.objective_cents,
        solution.pairing_cost_cents as f64 / 100.0,
        solution.deadheads,
        solution.pairing_count
    );
    Ok(())
}

fn cmd_experiment(a: ExperimentArgs) -> CmdResult {
    let mut plan = ExperimentPlan::load(&a.plan)?;
    if a.workers.is_some() {
        plan.workers = a.workers;
    }
    plan.validate()?;
    log_config("experiment plan", &plan);
    let all = plan.load_allpairs()?;
    let (reference, label) = plan.reference_cost(&all)?;
    let hash = config_hash(&plan);
    let outcomes = run_experiment(&plan, &all)?;

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut first_error = None;
    for o in outcomes {
        match o.result {
            Ok(r) => records.push(r),
            Err(e) => {
                failures.push(format!("{} seed {}: {e}", o.config, o.seed));
                first_error.get_or_insert(e);
            }
        }
    }
    if records.is_empty() {
        let e = first_error.expect("a plan has at least one run");
        return Err(Failure::from(e));
    }
    let rows = summarize(&records);
    let gaps = gap_report(&records, reference)?;

    let mut batch = AtomicBatch::new();
    let mut files = vec![
        "summary.csv".to_string(),
        "gaps.csv".into(),
        "records.json".into(),
    ];
    batch.stage(
        &a.out.join("summary.csv"),
        summary_csv(&rows, &hash).as_bytes(),
    )?;
    batch.stage(
        &a.out.join("gaps.csv"),
        gaps_csv(&gaps, &label, &hash).as_bytes(),
    )?;
    batch.stage(
        &a.out.join("records.json"),
        records_json(&records, &hash).as_bytes(),
    )?;
    for r in &records {
        let name = trace_file_name(r.config, r.seed);
        batch.stage(&a.out.join(&name), trace_csv(r).as_bytes())?;
        files.push(name);
    }
    #[derive(Serialize)]
    struct ExperimentManifest<'a> {
        #[serde(flatten)]
        manifest: Manifest<'a, ExperimentPlan>,
        reference_cents: Cents,
        reference: &'a str,
        failures: &'a [String],
    }
    let manifest = ExperimentManifest {
        manifest: Manifest {
            toolkit_version: TOOLKIT_VERSION,
            config_hash: &hash,
            config: &plan,
            files,
        },
        reference_cents: reference,
        reference: &label,
        failures: &failures,
    };
    batch.stage(&a.out.join("manifest.json"), &to_json(&manifest))?;
    batch.commit()?;

    print!("{}", summary_text(&rows, &gaps, &label));
    if !failures.is_empty() {
        log::warn!("{} run(s) failed: {}", failures.len(), failures.join("; "));
    }
    Ok(())
}

#[derive(Deserialize)]
struct RecordsFileIn {
    records: Vec<RunRecord>,
}

fn cmd_report(a: ReportArgs) -> CmdResult {
    if a.check {
        return check_solution(&a);
    }
    let Some(records_path) = &a.records else {
        return Err(Failure::usage("report needs --records or --check"));
    };
    let records = read_json::<RecordsFileIn>(records_path)?.records;
    if records.is_empty() {
        return Err(Failure::usage("records file holds no runs"));
    }
    let rows = summarize(&records);
    let penalty = a.penalty.unwrap_or(GaConfig::default().dhd_penalty_cents);
    let reference = match a.reference.as_deref() {
        None => None,
        Some(text) => {
            let r = match text {
                "oracle" => Reference::Oracle,
                "greedy" => Reference::Greedy,
                _ => match text.parse::<Cents>() {
                    Ok(c) => Reference::Cents(c),
                    Err(_) => Reference::External(PathBuf::from(text)),
                },
            };
            let all = match (&r, &a.allpairs) {
                (Reference::Oracle | Reference::Greedy, Some(path)) => Some(load_allpairs(path)?.1),
                _ => None,
            };
            Some(reference_cost(&r, penalty, all.as_ref())?)
        }
    };
    let gaps = match &reference {
        Some((cents, _)) => gap_report(&records, *cents)?,
        None => vec![],
    };
    let label = reference
        .as_ref()
        .map(|(_, l)| l.as_str())
        .unwrap_or("none");
    if let Some(out) = &a.out {
        let hash = config_hash(&(&records, label, penalty));
        let mut batch = AtomicBatch::new();
        batch.stage(
            &out.join("summary.csv"),
            summary_csv(&rows, &hash).as_bytes(),
        )?;
        if reference.is_some() {
            batch.stage(
                &out.join("gaps.csv"),
                gaps_csv(&gaps, label, &hash).as_bytes(),
            )?;
        }
        batch.commit()?;
    }
    print!("{}", summary_text(&rows, &gaps, label));
    Ok(())
}

/// Recomputes coverage, deadheads and cost of a solution file. With
/// --allpairs each pairing must match the stored pairing of that id; with
/// --schedule and --rules each pairing is re-checked for legality and
/// re-costed from the flight times.
fn check_solution(a: &ReportArgs) -> CmdResult {
    let path = a.solution.as_ref().expect("clap enforces --solution");
    let file: SolutionFile = read_json(path)?;
    let mut problems: Vec<String> = Vec::new();
    let mut verified_against = Vec::new();

    let num_flights = if let Some(ap) = &a.allpairs {
        let (_, all) = read_allpairs(ap)?;
        verified_against.push("allpairs");
        for rec in &file.pairings {
            if rec.id >= all.len() {
                problems.push(format!("pairing {} not in AllPairs", rec.id));
                continue;
            }
            let stored = PairingRecord::from_pairing(all.get(rec.id));
            if &stored != rec {
                problems.push(format!("pairing {} differs from AllPairs", rec.id));
            }
        }
        Some(all.num_flights())
    } else {
        None
    };

    let num_flights = match (&a.schedule, &a.rules) {
        (Some(schedule), Some(rules)) => {
            let inst = load_instance(schedule, rules, a.cost_model.as_deref())?;
            verified_against.push("schedule");
            for rec in &file.pairings {
                if let Some(&f) = rec.flights.iter().find(|&&f| f >= inst.num_flights()) {
                    problems.push(format!("pairing {}: unknown flight {f}", rec.id));
                    continue;
                }
                if rec.duty_lengths.iter().sum::<usize>() != rec.flights.len()
                    || rec.duty_lengths.contains(&0)
                {
                    problems.push(format!(
                        "pairing {}: duty_lengths do not partition flights",
                        rec.id
                    ));
                    continue;
                }
                let p = rebuild(rec, &inst);
                if let Err(v) = check_pairing(&inst, &p) {
                    problems.push(format!("pairing {}: {v}", rec.id));
                }
            }
            if num_flights.is_some_and(|n| n != inst.num_flights()) {
                problems.push("AllPairs and schedule disagree on the flight count".into());
            }
            inst.num_flights()
        }
        (None, None) => match num_flights {
            Some(n) => n,
            None => {
                return Err(Failure::usage(
                    "--check needs --allpairs or --schedule with --rules",
                ))
            }
        },
        _ => return Err(Failure::usage("--schedule and --rules go together")),
    };

    let flights: Vec<Vec<FlightId>> = file.pairings.iter().map(|r| r.flights.clone()).collect();
    let mut counts = vec![0u32; num_flights];
    for list in &flights {
        for &f in list.iter().filter(|&&f| f < num_flights) {
            counts[f] += 1;
        }
    }
    let uncovered: Vec<usize> = (0..num_flights).filter(|&f| counts[f] == 0).collect();
    if !uncovered.is_empty() {
        problems.push(format!("uncovered flights: {uncovered:?}"));
    }
    let deadheads = deadhead_count(&counts);
    let cost: Cents = file.pairings.iter().map(|r| r.cost_cents).sum();
    let fitness = cost + deadheads as Cents * file.dhd_penalty_cents;
    if deadheads != file.deadheads {
        problems.push(format!(
            "deadheads: file says {}, recount {deadheads}",
            file.deadheads
        ));
    }
    if cost != file.pairing_cost_cents {
        problems.push(format!(
            "pairing cost: file says {}, recomputed {cost}",
            file.pairing_cost_cents
        ));
    }
    if fitness != file.best_cost_cents {
        problems.push(format!(
            "objective: file says {}, recomputed {fitness}",
            file.best_cost_cents
        ));
    }
    if file.pairing_count != file.pairings.len() {
        problems.push("pairing_count does not match the pairing list".into());
    }

    if problems.is_empty() {
        println!(
            "check ok ({}): flights={num_flights} pairings={} deadheads={deadheads} objective={fitness}",
            verified_against.join("+"),
            file.pairings.len()
        );
        Ok(())
    } else {
        for p in &problems {
            println!("FAIL {p}");
        }
        Err(Failure::infeasible(format!(
            "{} check failure(s)",
            problems.len()
        )))
    }
}

fn rebuild(rec: &PairingRecord, inst: &Instance) -> Pairing {
    let mut duties = Vec::with_capacity(rec.duty_lengths.len());
    let mut start = 0;
    for &len in &rec.duty_lengths {
        duties.push(Duty::new(
            rec.flights[start..start + len].to_vec(),
            &inst.rules,
        ));
        start += len;
    }
    Pairing::from_parts(
        rec.id,
        rec.base.clone(),
        duties,
        rec.cost_cents,
        inst.num_flights(),
    )
}
