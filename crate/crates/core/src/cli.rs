//! The `densecsp` command line.
//!
//! Exit status: 0 on success, [`EXIT_INPUT`] for unreadable or invalid
//! input (including usage errors), [`EXIT_GUARD`] when a size guard stops
//! a computation, [`EXIT_INTERNAL`] when an internal check fails.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::csp::{self, generators, random_3xor, CspInstance};
use crate::dksh::{self, DkshOptions, Hypergraph};
use crate::error::{Error, Result};
use crate::experiments::{self, EdgeTailConfig};
use crate::games::{self, TwoProverGame, DEFAULT_GAME_CAP};
use crate::info;
use crate::oracle::{self, DEFAULT_CAP};
use crate::rational::{format_rational, parse_rational, to_f64};
use crate::rounding::{approximate, guaranteed_bound};
use crate::sa::{self, Arithmetic, SaSolution, SolveOptions, DEFAULT_CAP_LP_VARS};

pub const SCHEMA_VERSION: u32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "densecsp", version, about = "Dense Max k-CSP approximation, game constructions and exact oracles")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Report format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Limit for exhaustive searches and game constructions.
    #[arg(long, global = true, env = "DENSECSP_CAP")]
    pub cap: Option<u128>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the conditioning and rounding algorithm on an instance file.
    Solve(SolveArgs),
    /// Run a named experiment and emit one row per parameter point.
    Experiment(ExperimentArgs),
    /// Write an instance, game or hypergraph.
    Generate(GenerateArgs),
    /// Report statistics of an instance and optionally an SA solution.
    Metrics(MetricsArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long = "i", default_value_t = 2)]
    pub i: usize,
    #[arg(long, value_enum, default_value_t = ArithmeticArg::Exact)]
    pub arithmetic: ArithmeticArg,
    /// Stopping width of the float-mode search.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = DEFAULT_CAP_LP_VARS)]
    pub cap_lp_vars: u128,
    /// Also compute the exact optimum and the gap.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArithmeticArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    /// Columns: k,l,value,value_f64.
    BirthdayDecay,
    /// Columns: graph,k,l,gamma,trials,outside,empirical,expected_edges,d_max,bound,within_bound.
    EdgeTail,
    /// Columns: trial,support,kl,delta,expectation_y,slack.
    FuncboundSweep,
    /// Columns: fixture,n,q,k,level,l,sum,bound,slack.
    CorrSum,
    /// Columns: seed,n,d,k,method,density,density_f64,optimum,ratio.
    DkshBench,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: ExperimentName,
    /// Game file (birthday-decay) or instance file (corr-sum).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Edge-tail graph `complete:A:B` or `circulant:A:D`; repeatable.
    #[arg(long)]
    pub graph: Vec<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Number of generated fixtures or seeds.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub extra: Option<usize>,
    #[arg(long = "i", default_value_t = 1)]
    pub i: usize,
    #[arg(long)]
    pub brute_force_below: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_CAP_LP_VARS)]
    pub cap_lp_vars: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    /// Random 3-XOR with `--n` variables and `--d · n` constraints.
    #[value(name = "3xor")]
    Xor3,
    /// Fully dense, each payoff 1 with probability `--ones`.
    Dense,
    /// Fully dense, satisfied by a random planted assignment.
    Planted,
    /// `--m` random constraints with random weights.
    Weighted,
    Chsh,
    OddCycle,
    /// `--r`-fold parallel repetition of the game in `--input`.
    Parallel,
    /// `(--k × --l)` birthday repetition of the game in `--input`.
    Birthday,
    /// Clause/variable game of the instance in `--input`.
    ClauseVariable,
    /// Fully dense `--k`-CSP over `--l`-subset pairs of the game in `--input`.
    Kcsp,
    /// `--m` random `--d`-edges on `--n` vertices.
    Hypergraph,
    /// Complete `--d`-uniform clique on `--clique` vertices plus `--m` edges.
    PlantedHypergraph,
    /// Reduction of the hypergraph in `--input` to a `k`-variable CSP.
    Reduce,
    /// Optimal level-`--r` SA solution of the instance in `--input`.
    SaSolution,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: GenerateKind,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// 3xor: constraints per variable (rational); hypergraphs: uniformity.
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub ones: Option<String>,
    #[arg(long)]
    pub clique: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_CAP_LP_VARS)]
    pub cap_lp_vars: u128,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// SA solution file to analyse against the instance.
    #[arg(long)]
    pub solution: Option<PathBuf>,
    /// Consistency tolerance; 0 checks exactly.
    #[arg(long, default_value_t = 0.0)]
    pub tolerance: f64,
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    match execute(&cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_guard() {
        EXIT_GUARD
    } else if e.is_internal() {
        EXIT_INTERNAL
    } else {
        EXIT_INPUT
    }
}

/// Runs a parsed command. The report goes to `--output` or `out`; notes
/// for people go to `log`. Nothing is written unless the command succeeds.
pub fn execute(cli: &Cli, out: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    if let Some(j) = cli.jobs {
        // a second call in one process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let cap = cli.cap.unwrap_or(DEFAULT_CAP);
    let game_cap = cli.cap.unwrap_or(DEFAULT_GAME_CAP);
    let (body, note) = match &cli.command {
        Command::Solve(a) => solve(cli, a, cap)?,
        Command::Experiment(a) => (experiment(cli, a, cap, game_cap)?, None),
        Command::Generate(a) => (generate(cli, a, game_cap)?, None),
        Command::Metrics(a) => (metrics(cli, a)?, None),
    };
    match &cli.output {
        Some(path) => {
            fs::write(path, body.as_bytes())?;
            if let Some(n) = note {
                out.write_all(n.as_bytes())?;
            }
        }
        None => {
            out.write_all(body.as_bytes())?;
            if let Some(n) = note {
                log.write_all(n.as_bytes())?;
            }
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::invalid(format!("--{flag} is required")))
}

fn input_path<'a>(p: &'a Option<PathBuf>, what: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::invalid(format!("--input ({what}) is required")))
}

fn envelope(command: &str, seed: u64, params: Value, result: Value) -> Result<String> {
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed": seed,
        "params": params,
        "result": result,
    });
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn solve(cli: &Cli, a: &SolveArgs, cap: u128) -> Result<(String, Option<String>)> {
    let inst = CspInstance::from_json(&read(&a.input)?)?;
    csp::validate(&inst).into_result()?;
    let opts = SolveOptions {
        arithmetic: match a.arithmetic {
            ArithmeticArg::Exact => Arithmetic::Exact,
            ArithmeticArg::Float => Arithmetic::Float,
        },
        tol: a.tolerance,
        cap_lp_vars: a.cap_lp_vars,
    };
    let mut trace = approximate(&inst, a.i, &opts)?;
    let lambda_floor = guaranteed_bound(inst.q, a.i, (1.0 - trace.lambda_f64()).clamp(0.0, 1.0))?;
    let mut optimum = None;
    if a.oracle {
        let opt = oracle::exact_csp_opt_with_cap(&inst, cap)?;
        trace = trace.with_optimum(inst.q, &opt.value)?;
        optimum = Some(opt);
    }
    if let (Some(floor), Some(_)) = (trace.floor, &optimum) {
        if trace.value_f64 + 1e-12 < floor {
            return Err(Error::Internal(format!(
                "value {} is below the guaranteed {floor}",
                trace.value_f64
            )));
        }
    }
    let mut summary = format!(
        "value {} ({:.6}) at level {} with lambda {} ({:.6}); floor at delta = 1 - lambda: {:.6}\n",
        format_rational(&trace.value),
        trace.value_f64,
        trace.level,
        format_rational(&trace.lambda),
        trace.lambda_f64(),
        lambda_floor,
    );
    if let Some(opt) = &optimum {
        summary += &format!(
            "optimum {} ({:.6}), gap {:.6}, guaranteed floor {:.6}\n",
            format_rational(&opt.value),
            to_f64(&opt.value),
            to_f64(&opt.value) - trace.value_f64,
            trace.floor.unwrap_or(0.0),
        );
    }
    let body = match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut result = serde_json::to_value(&trace)?;
            result["lambda_floor"] = json!(lambda_floor);
            if let Some(opt) = &optimum {
                result["optimum"] = json!(format_rational(&opt.value));
                result["optimum_assignment"] = json!(opt.witness.0);
                result["gap"] = json!(to_f64(&opt.value) - trace.value_f64);
            }
            envelope(
                "solve",
                cli.seed,
                json!({
                    "input": a.input.display().to_string(),
                    "i": a.i,
                    "arithmetic": format!("{:?}", a.arithmetic).to_lowercase(),
                    "tolerance": a.tolerance,
                    "cap_lp_vars": a.cap_lp_vars.to_string(),
                    "oracle": a.oracle,
                }),
                result,
            )?
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                i: usize,
                level: usize,
                lambda: String,
                value: String,
                value_f64: f64,
                lambda_floor: f64,
                optimum: Option<String>,
                floor: Option<f64>,
            }
            experiments::to_csv(&[Row {
                i: a.i,
                level: trace.level,
                lambda: format_rational(&trace.lambda),
                value: format_rational(&trace.value),
                value_f64: trace.value_f64,
                lambda_floor,
                optimum: optimum.as_ref().map(|o| format_rational(&o.value)),
                floor: trace.floor,
            }])?
        }
    };
    Ok((body, Some(summary)))
}

fn rows_out<T: Serialize>(cli: &Cli, name: &str, params: Value, rows: &[T]) -> Result<String> {
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => experiments::to_csv(rows),
        Format::Json => envelope(name, cli.seed, params, serde_json::to_value(rows)?),
    }
}

fn experiment(cli: &Cli, a: &ExperimentArgs, cap: u128, game_cap: u128) -> Result<String> {
    let seed = cli.seed;
    match a.name {
        ExperimentName::BirthdayDecay => {
            let g = match &a.input {
                Some(p) => TwoProverGame::from_json(&read(p)?)?,
                None => games::odd_cycle_game(),
            };
            g.validate()?;
            let rows = experiments::birthday_decay(&g, game_cap, cap)?;
            rows_out(cli, "experiment birthday-decay", json!({}), &rows)
        }
        ExperimentName::EdgeTail => {
            let trials = a.trials.unwrap_or(100_000);
            let configs = if a.graph.is_empty() {
                experiments::default_edge_tail_configs()
            } else {
                let (k, l, gamma) = (need(a.k, "k")?, need(a.l, "l")?, need(a.gamma, "gamma")?);
                a.graph
                    .iter()
                    .map(|g| EdgeTailConfig::new(g, k, l, gamma))
                    .collect::<Result<_>>()?
            };
            let rows = experiments::edge_tail(&configs, trials, seed)?;
            rows_out(cli, "experiment edge-tail", json!({ "trials": trials }), &rows)
        }
        ExperimentName::FuncboundSweep => {
            let trials = a.trials.unwrap_or(10_000);
            let rows = experiments::funcbound_sweep(trials, seed)?;
            rows_out(cli, "experiment funcbound-sweep", json!({ "trials": trials }), &rows)
        }
        ExperimentName::CorrSum => {
            let l = a.l.unwrap_or(2);
            let mut rows = Vec::new();
            let fixtures: Vec<(String, CspInstance)> = match &a.input {
                Some(p) => vec![(p.display().to_string(), CspInstance::from_json(&read(p)?)?)],
                None => (0..a.count.unwrap_or(8) as u64)
                    .map(|s| {
                        let n = a.n.unwrap_or(4);
                        let inst = generators::random_fully_dense(n, 2, 2, 1, 2, seed.wrapping_add(s))?;
                        Ok((format!("dense-{n}-{}", seed.wrapping_add(s)), inst))
                    })
                    .collect::<Result<_>>()?,
            };
            for (name, inst) in fixtures {
                let level = inst.n;
                let global = sa::random_global_solution(inst.n, inst.q, level, seed)?;
                rows.push(experiments::corr_sum(&format!("{name}/random-global"), &inst, &global, l)?);
                let opts = SolveOptions {
                    cap_lp_vars: a.cap_lp_vars,
                    ..SolveOptions::default()
                };
                let sac = sa::solve_sac(&inst, level, &opts)?;
                rows.push(experiments::corr_sum(&format!("{name}/sac"), &inst, &sac.solution, l)?);
            }
            rows_out(cli, "experiment corr-sum", json!({ "l": l }), &rows)
        }
        ExperimentName::DkshBench => {
            let (n, d, k) = (a.n.unwrap_or(6), a.d.unwrap_or(2), a.k.unwrap_or(3));
            let count = a.count.unwrap_or(20) as u64;
            let opts = DkshOptions {
                brute_force_below: a.brute_force_below,
                trials: a.trials,
                solve: SolveOptions {
                    cap_lp_vars: a.cap_lp_vars,
                    ..SolveOptions::default()
                },
                cap,
            };
            let rows = experiments::dksh_bench(n, d, k, a.extra.unwrap_or(2), a.i, seed..seed + count, &opts)?;
            rows_out(
                cli,
                "experiment dksh-bench",
                json!({ "n": n, "d": d, "k": k, "i": a.i }),
                &rows,
            )
        }
    }
}

fn generate(cli: &Cli, a: &GenerateArgs, game_cap: u128) -> Result<String> {
    let seed = cli.seed;
    let load_game = || -> Result<TwoProverGame> {
        let g = TwoProverGame::from_json(&read(input_path(&a.input, "game file")?)?)?;
        g.validate()?;
        Ok(g)
    };
    let load_instance = || CspInstance::from_json(&read(input_path(&a.input, "instance file")?)?);
    let d_usize = || -> Result<usize> {
        need(a.d.as_deref(), "d")?
            .parse()
            .map_err(|_| Error::invalid("--d must be an integer here"))
    };
    let text = match a.kind {
        GenerateKind::Xor3 => {
            let d = parse_rational(need(a.d.as_deref(), "d")?)?;
            random_3xor(need(a.n, "n")?, &d, seed)?.to_json()?
        }
        GenerateKind::Dense => {
            let ones = parse_rational(a.ones.as_deref().unwrap_or("1/2"))?;
            let (num, den) = (
                ones.numer().try_into().map_err(|_| Error::invalid("--ones too large"))?,
                ones.denom().try_into().map_err(|_| Error::invalid("--ones too large"))?,
            );
            generators::random_fully_dense(need(a.n, "n")?, need(a.q, "q")?, need(a.k, "k")?, num, den, seed)?
                .to_json()?
        }
        GenerateKind::Planted => {
            let (n, q) = (need(a.n, "n")?, need(a.q, "q")?);
            let mut rng = crate::rng::SeededRng::new(seed);
            let planted = csp::Assignment((0..n).map(|_| rng.below(q)).collect());
            generators::planted_fully_dense(n, q, need(a.k, "k")?, &planted, seed)?.to_json()?
        }
        GenerateKind::Weighted => {
            generators::random_weighted(need(a.n, "n")?, need(a.q, "q")?, need(a.k, "k")?, need(a.m, "m")?, seed)?
                .to_json()?
        }
        GenerateKind::Chsh => games::chsh().to_json()?,
        GenerateKind::OddCycle => games::odd_cycle_game().to_json()?,
        GenerateKind::Parallel => games::parallel_repetition(&load_game()?, need(a.r, "r")?, game_cap)?.to_json()?,
        GenerateKind::Birthday => {
            games::birthday_repetition(&load_game()?, need(a.k, "k")?, need(a.l, "l")?, game_cap)?.to_json()?
        }
        GenerateKind::ClauseVariable => games::clause_variable_game(&load_instance()?)?.to_json()?,
        GenerateKind::Kcsp => {
            games::birthday_kcsp(&load_game()?, need(a.l, "l")?, need(a.k, "k")?, game_cap)?
                .0
                .to_json()?
        }
        GenerateKind::Hypergraph => {
            dksh::generators::random_hypergraph(need(a.n, "n")?, d_usize()?, need(a.m, "m")?, seed)?.to_json()?
        }
        GenerateKind::PlantedHypergraph => dksh::generators::planted_clique(
            need(a.n, "n")?,
            d_usize()?,
            need(a.clique, "clique")?,
            a.m.unwrap_or(0),
            seed,
        )?
        .to_json()?,
        GenerateKind::Reduce => {
            let h = Hypergraph::from_json(&read(input_path(&a.input, "hypergraph file")?)?)?;
            dksh::reduce_to_csp(&h, need(a.k, "k")?, seed)?.0.to_json()?
        }
        GenerateKind::SaSolution => {
            let inst = load_instance()?;
            let opts = SolveOptions {
                cap_lp_vars: a.cap_lp_vars,
                ..SolveOptions::default()
            };
            sa::solve_sa(&inst, need(a.r, "r")?, &opts)?.solution.to_json()?
        }
    };
    Ok(text + "\n")
}

fn metrics(cli: &Cli, a: &MetricsArgs) -> Result<String> {
    let inst = CspInstance::from_json(&read(&a.input)?)?;
    let report = csp::validate(&inst);
    let issues: Vec<String> = report.issues.iter().map(|i| i.to_string()).collect();
    let dens = csp::density(&inst)?;
    let mut result = json!({
        "n": inst.n,
        "q": inst.q,
        "k": inst.k,
        "constraints": inst.constraints.len(),
        "total_weight": format_rational(&inst.total_weight()),
        "density": format_rational(dens.value()),
        "fully_dense": dens.is_fully_dense(),
        "uniform_over_support": inst.is_uniform_over_support(),
        "valid": issues.is_empty(),
        "issues": issues,
    });
    if let Some(path) = &a.solution {
        let mu = SaSolution::from_json(&read(path)?)?;
        let consistency = sa::check_consistency(&mu, a.tolerance);
        let entropies: Vec<f64> = (0..mu.n())
            .map(|x| {
                let m: Vec<f64> = mu.singleton_marginal(x)?.iter().map(to_f64).collect();
                Ok(info::entropy(&info::FiniteDistribution::new(m)?))
            })
            .collect::<Result<_>>()?;
        result["solution"] = json!({
            "level": mu.level(),
            "consistent": consistency.is_consistent(),
            "violations": consistency.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "sa_value": format_rational(&sa::sa_value(&mu, &inst)?),
            "total_correlation": info::solution_total_correlation(&mu, &inst)?,
            "singleton_entropies": entropies,
        });
    }
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => envelope(
            "metrics",
            cli.seed,
            json!({ "input": a.input.display().to_string(), "tolerance": a.tolerance }),
            result,
        ),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                q: usize,
                k: usize,
                constraints: usize,
                density: String,
                valid: bool,
            }
            experiments::to_csv(&[Row {
                n: inst.n,
                q: inst.q,
                k: inst.k,
                constraints: inst.constraints.len(),
                density: format_rational(dens.value()),
                valid: report.is_valid(),
            }])
        }
    }
}
