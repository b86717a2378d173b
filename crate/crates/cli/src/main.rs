use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ropack::analysis::{
    case_bounds, optimize_params, p_first, p_pair, ratio_as_bound, ratio_bundle,
    ratio_matching_bound, Problem, ProbabilityReport, EXACT_MAX_N,
};
use ropack::online::{GapRunner, KnapsackRunner};
use ropack::oracles::SolverCaps;
use ropack::perm::{coin_rng, random_permutation};
use ropack::rational::{format_rational, parse_rational, ratio, to_f64};
use ropack::simulator::{
    enumerate_exact, estimate_probability, estimate_ratio, generate, rank_instance, write_rows,
    Algorithm, Event, ExperimentRow, FamilyKind, InstanceFamily, ENUMERATION_MAX_N,
};
use ropack::{Error, Instance, Rational, SeqParams};

const KNAPSACK_C: &str = "0.42291";
const KNAPSACK_D: &str = "0.64570";
const KNAPSACK_DELTA: &str = "1/3";
const GAP_C: &str = "0.5261";
const GAP_D: &str = "0.6906";
const GAP_DELTA: &str = "1/2";

/// Online knapsack and GAP in the random-order model: simulations, exact
/// acceptance probabilities and ratio bounds.
#[derive(Parser)]
#[command(name = "ropack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Resources (GAP families).
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate the competitive ratio of an algorithm by Monte Carlo.
    Simulate {
        /// Built-in family to generate the instance from.
        #[arg(long, conflicts_with = "instance", required_unless_present = "instance")]
        family: Option<String>,
        /// Instance JSON file.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// knapsack-seq, knapsack-large, knapsack-small, gap-seq,
        /// gap-matching or gap-lp. Defaults to the sequential algorithm.
        #[arg(long)]
        algorithm: Option<String>,
        #[arg(long, required_unless_present = "instance")]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write the round-by-round trace of trial 0 as JSON.
        #[arg(long)]
        dump_trace: Option<PathBuf>,
    },
    /// Exact, enumerated and Monte Carlo acceptance probabilities of the
    /// two-item rule.
    Probs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cn: usize,
        #[arg(long)]
        dn: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the full exact report (types and case values) as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Ratio bounds at one parameter point, as JSON.
    Bounds {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        d: f64,
        /// Defaults to 1/3 for knapsack and 1/2 for GAP.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_enum, default_value_t = ProblemArg::Knapsack)]
        problem: ProblemArg,
    },
    /// Grid search for the phase parameters, as JSON.
    Optimize {
        #[arg(long, value_enum, default_value_t = ProblemArg::Knapsack)]
        problem: ProblemArg,
        #[arg(long, default_value_t = 1e-3)]
        grid_step: f64,
    },
    /// The five case bounds at the two reference parameter points, as CSV.
    ReproduceTable2,
    /// The headline competitive ratios against 1/6.65 and 1/6.99, as CSV.
    ReproduceConstants,
}

#[derive(clap::Args)]
struct ParamArgs {
    /// Sampling fraction; defaults to the problem's reference value.
    #[arg(long)]
    c: Option<String>,
    /// End of the large-item phase.
    #[arg(long)]
    d: Option<String>,
    /// Large/small threshold.
    #[arg(long)]
    delta: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Knapsack,
    Gap,
    SinglePhaseLarge,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Knapsack => Problem::Knapsack,
            ProblemArg::Gap => Problem::Gap,
            ProblemArg::SinglePhaseLarge => Problem::SinglePhaseLarge,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(Error::Capability(_)) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("ROPACK_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .with_context(|| format!("ROPACK_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Gen {
            family,
            n,
            m,
            seed,
            output,
        } => {
            let kind: FamilyKind = family.parse()?;
            let instance = generate(&InstanceFamily::new(kind, n).with_m(m), seed)?;
            let mut out = open_output(output.as_deref())?;
            writeln!(out, "{}", instance.to_json()?)?;
            out.flush()?;
            Ok(())
        }
        Command::Simulate {
            family,
            instance,
            algorithm,
            n,
            m,
            params,
            trials,
            seed,
            output,
            format,
            dump_trace,
        } => {
            let (label, inst) = match (family, instance) {
                (Some(name), _) => {
                    let kind: FamilyKind = name.parse()?;
                    let n = n.context("--n is required with --family")?;
                    (name, generate(&InstanceFamily::new(kind, n).with_m(m), seed)?)
                }
                (None, Some(path)) => (path.display().to_string(), Instance::read(&path)?),
                (None, None) => bail!(Error::Parameter("need --family or --instance".into())),
            };
            let is_gap = matches!(inst, Instance::Gap(_));
            let algorithm: Algorithm = match algorithm {
                Some(a) => a.parse()?,
                None if is_gap => Algorithm::GapSeq,
                None => Algorithm::KnapsackSeq,
            };
            let params = seq_params(&params, is_gap, inst.n())?;
            let result =
                estimate_ratio(&inst, algorithm, &params, trials, seed, &SolverCaps::default())?;
            let row = ExperimentRow {
                family: label,
                algorithm: algorithm.name().to_string(),
                n: inst.n(),
                c: format_rational(params.c()),
                d: format_rational(params.d()),
                delta: format_rational(params.delta()),
                trials,
                seed,
                mean: result.estimate.mean,
                stderr: result.estimate.stderr,
                opt_ref: result.opt_ref.to_string(),
            };
            let mut out = open_output(output.as_deref())?;
            match format {
                Format::Csv => write_rows(&mut out, &[row])?,
                Format::Json => write_json(&mut out, &row)?,
            }
            out.flush()?;
            if let Some(path) = dump_trace {
                let mut out = open_output(Some(&path))?;
                dump_first_trace(&mut out, &inst, algorithm, &params, seed)?;
                out.flush()?;
            }
            Ok(())
        }
        Command::Probs {
            n,
            cn,
            dn,
            trials,
            seed,
            json,
        } => probs(n, cn, dn, trials, seed, json),
        Command::Bounds {
            c,
            d,
            delta,
            problem,
        } => {
            let delta = delta.unwrap_or(match problem {
                ProblemArg::Gap => 0.5,
                _ => 1.0 / 3.0,
            });
            let bundle = ratio_bundle(problem.into(), c, d, delta)?;
            write_json(&mut io::stdout().lock(), &bundle)
        }
        Command::Optimize { problem, grid_step } => {
            let best = optimize_params(problem.into(), grid_step)?;
            write_json(&mut io::stdout().lock(), &best)
        }
        Command::ReproduceTable2 => {
            let mut out = io::stdout().lock();
            writeln!(out, "c,d,case1,case2,case3,case4,case5")?;
            for (c, d) in [(0.23053, 1.0), (0.42291, 0.64570)] {
                let row = case_bounds(c, d)?;
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.5}")).collect();
                writeln!(out, "{c:.5},{d:.5},{}", cells.join(","))?;
            }
            Ok(())
        }
        Command::ReproduceConstants => {
            let mut out = io::stdout().lock();
            writeln!(out, "quantity,c,d,value,target,holds")?;
            let knapsack_al = case_bounds(0.42291, 0.64570)?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let rows = [
                ("knapsack-large", 0.42291, 0.64570, knapsack_al, 1.0 / 6.65),
                ("knapsack-small", 0.42291, 0.64570, ratio_as_bound(0.42291, 0.64570, 1.5)?, 1.0 / 6.65),
                ("gap-matching", 0.5261, 0.6906, ratio_matching_bound(0.5261, 0.6906)?, 1.0 / 6.99),
                ("gap-lp", 0.5261, 0.6906, ratio_as_bound(0.5261, 0.6906, 2.0)?, 1.0 / 6.99),
            ];
            for (name, c, d, value, target) in rows {
                let holds = value >= target - 2e-5;
                writeln!(out, "{name},{c},{d},{value:.6},{target:.6},{holds}")?;
            }
            Ok(())
        }
    }
}

fn seq_params(args: &ParamArgs, is_gap: bool, n: usize) -> anyhow::Result<SeqParams> {
    let (c, d, delta) = if is_gap {
        (GAP_C, GAP_D, GAP_DELTA)
    } else {
        (KNAPSACK_C, KNAPSACK_D, KNAPSACK_DELTA)
    };
    let parse = |given: &Option<String>, default: &str| -> anyhow::Result<Rational> {
        let text = given.as_deref().unwrap_or(default);
        parse_rational(text).map_err(|e| Error::Parameter(e.to_string()).into())
    };
    Ok(SeqParams::new(
        parse(&args.c, c)?,
        parse(&args.d, d)?,
        parse(&args.delta, delta)?,
        n,
    )?)
}

fn dump_first_trace(
    out: &mut dyn Write,
    instance: &Instance,
    algorithm: Algorithm,
    params: &SeqParams,
    seed: u64,
) -> anyhow::Result<()> {
    let perm = random_permutation(instance.n(), seed, 0)?;
    let mut rng = coin_rng(seed, 0);
    let phase = params.small_phase();
    match instance {
        Instance::Knapsack(k) => {
            let runner = KnapsackRunner::new(k, params.delta())?;
            let trace = match algorithm {
                Algorithm::KnapsackLarge => runner.run_large(&perm, params)?,
                Algorithm::KnapsackSmall => runner.run_small(&perm, &phase, k.capacity(), &mut rng)?,
                _ => runner.run_sequential(&perm, params, &mut rng)?,
            };
            write_json(out, &trace)
        }
        Instance::Gap(g) => {
            let runner = GapRunner::new(g, params.delta())?;
            let trace = match algorithm {
                Algorithm::GapMatching => runner.run_large(&perm, params)?,
                Algorithm::GapLp => runner.run_small(&perm, &phase, g.capacities(), &mut rng)?,
                _ => runner.run_sequential(&perm, params, &mut rng)?,
            };
            write_json(out, &trace)
        }
    }
}

/// One CSV row per probability: the exact value (rational up to
/// `EXACT_MAX_N`, log-gamma float above), the enumerated value for
/// `n <= 7`, and a Monte Carlo estimate when `1 <= cn < dn`.
fn probs(n: usize, cn: usize, dn: usize, trials: u64, seed: u64, json: bool) -> anyhow::Result<()> {
    if cn == 0 || cn > dn || dn > n {
        bail!(Error::Parameter(format!(
            "need 1 <= cn <= dn <= n, got n = {n}, cn = {cn}, dn = {dn}"
        )));
    }
    let mut out = io::stdout().lock();
    if json {
        return write_json(&mut out, &ProbabilityReport::exact(n, cn, dn)?);
    }
    let enumerated = if n <= ENUMERATION_MAX_N {
        Some(enumerate_exact(n, cn, dn)?)
    } else {
        None
    };
    let mc_params = if cn < dn {
        Some(SeqParams::new(ratio(cn as i64, n as i64), ratio(dn as i64, n as i64), ratio(1, 3), n)?)
    } else {
        None
    };
    let instance = Instance::Knapsack(rank_instance(n));

    let mut quantities: Vec<Event> = (1..=n.min(4)).map(Event::AcceptFirst).collect();
    for i in 1..=n.min(3) {
        for j in 1..=n.min(3) {
            if i != j {
                quantities.push(Event::AcceptPair(i, j));
            }
        }
    }
    writeln!(out, "quantity,exact,exact_value,enumerated,monte_carlo,stderr")?;
    for event in quantities {
        let label = match event {
            Event::AcceptFirst(i) => format!("first-{i}"),
            Event::AcceptPair(i, j) => format!("pair-{i}-{j}"),
            _ => unreachable!("only acceptance events are listed"),
        };
        let (exact_text, exact_value, enumerated_text) = match event {
            Event::AcceptFirst(i) => {
                let exact = if n <= EXACT_MAX_N {
                    let r = ropack::analysis::p_first_exact(n, cn, dn, i)?;
                    (format_rational(&r), to_f64(&r))
                } else {
                    (String::new(), p_first(n, cn, dn, i)?)
                };
                let enumerated = enumerated
                    .as_ref()
                    .map(|s| format_rational(&s.p_first(i)))
                    .unwrap_or_default();
                (exact.0, exact.1, enumerated)
            }
            Event::AcceptPair(i, j) => {
                let exact = if n <= EXACT_MAX_N {
                    let r = ropack::analysis::p_ordered_pair_exact(n, cn, dn, i, j)?;
                    (format_rational(&r), to_f64(&r))
                } else {
                    (String::new(), p_pair(n, cn, dn, i.max(j))?)
                };
                let enumerated = enumerated
                    .as_ref()
                    .map(|s| format_rational(&s.p_pair(i, j)))
                    .unwrap_or_default();
                (exact.0, exact.1, enumerated)
            }
            _ => unreachable!("only acceptance events are listed"),
        };
        let (mc, se) = match &mc_params {
            Some(p) => {
                let e = estimate_probability(event, &instance, p, trials, seed)?;
                (format!("{:.6}", e.mean), format!("{:.6}", e.stderr))
            }
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{label},{exact_text},{exact_value:.6},{enumerated_text},{mc},{se}"
        )?;
    }
    Ok(())
}
