//! Command-line front end.
//!
//! Four subcommands: `frontier` lists the non-dominated candidates,
//! `select` runs one strategy and prints the winner, `calibrate`
//! derives per-user utopia points from an interaction log, and
//! `report` scores the frontier under several strategies side by side.
//!
//! Exit codes: 0 success, 2 input/usage error, 3 domain-infeasible
//! (empty frontier, degenerate calibration). Malformed input never
//! panics. All randomness flows from `--seed`; without the flag the
//! fixed default 42 applies — never wall-clock entropy, so repeated
//! runs are reproducible.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::calibration::{calibrate, AnchorAgg, CalibrationParams};
use crate::dominance::{pareto_frontier, Frontier};
use crate::error::{input_err, Result};
use crate::io;
use crate::normalize::NormalizeTransform;
use crate::strategies::{select, DistanceKind, SelectionResult, Strategy, StrategyParams};
use crate::types::{CandidateSet, ObjectiveSpec, PopulationSet, UtopiaAssignment};

#[derive(Parser, Debug)]
#[command(
    name = "pareto-select",
    version,
    about = "Extract the Pareto frontier of a candidate set and pick one solution from it"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the non-dominated candidates
    Frontier(FrontierArgs),
    /// Run one selection strategy and print the chosen solution
    Select(SelectArgs),
    /// Derive per-user utopia points from an interaction log
    Calibrate(CalibrateArgs),
    /// Score the frontier under several strategies side by side
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct FrontierArgs {
    /// Objective schema CSV: name,direction,weight,utopia,reference
    #[arg(long)]
    schema: PathBuf,
    /// Candidate solutions CSV: id plus one column per objective
    #[arg(long)]
    solutions: PathBuf,
    /// Write frontier members (id + vectors) to this CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelectArgs {
    /// Objective schema CSV: name,direction,weight,utopia,reference
    #[arg(long)]
    schema: PathBuf,
    /// Candidate solutions CSV: id plus one column per objective
    #[arg(long)]
    solutions: PathBuf,
    /// One of: akp, ukp, hv, ed, wm, pdu, cpdu
    #[arg(long)]
    strategy: String,
    #[command(flatten)]
    params: ParamFlags,
    /// Write the per-member scores to this CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Strategy inputs shared by `select` and `report`. Anything not given
/// on the command line falls back to the schema's optional columns;
/// strategies that need a value neither supplies are rejected before
/// any computation.
#[derive(Args, Debug)]
struct ParamFlags {
    /// Per-sample objective values CSV: solution_id,sample_id,<objectives>
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Global utopia point, comma-separated components
    #[arg(long, value_name = "V1,V2,...", conflicts_with = "utopia_file")]
    utopia: Option<String>,
    /// Per-sample utopia CSV; a single `*` row means one global point
    #[arg(long)]
    utopia_file: Option<PathBuf>,
    /// Hypervolume reference point, comma-separated components
    #[arg(long, value_name = "V1,V2,...")]
    reference: Option<String>,
    /// Positive objective weights, comma-separated
    #[arg(long, value_name = "W1,W2,...")]
    weights: Option<String>,
    /// Seed for weight-vector sampling
    #[arg(long)]
    seed: Option<u64>,
    /// Number of weight vectors drawn for win counting
    #[arg(long)]
    weight_samples: Option<u64>,
    /// Distance for population scores: euclidean, manhattan or chebyshev
    #[arg(long)]
    distance: Option<String>,
    /// Min-max normalize objectives (fit on all candidates) before scoring
    #[arg(long)]
    normalize: bool,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    /// Interaction log CSV: user_id,item_id
    #[arg(long)]
    interactions: PathBuf,
    /// Scale on the profile/anchor mean
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Scale on the profile/anchor standard deviation
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Anchor set size in items; default: mean interactions per user
    #[arg(long = "T", value_name = "N")]
    t: Option<usize>,
    /// Accuracy component written for every user
    #[arg(long, default_value_t = 1.0)]
    accuracy_utopia: f64,
    /// Anchor aggregation: mean-std or mean
    #[arg(long, default_value = "mean-std")]
    anchor_agg: String,
    /// Optional schema supplying the two output column names
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Write the per-user utopia table to this CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Objective schema CSV: name,direction,weight,utopia,reference
    #[arg(long)]
    schema: PathBuf,
    /// Candidate solutions CSV: id plus one column per objective
    #[arg(long)]
    solutions: PathBuf,
    /// Comma-separated strategies to run, e.g. ed,wm,hv
    #[arg(long)]
    strategies: String,
    #[command(flatten)]
    params: ParamFlags,
    /// Rows to include: frontier (default) or all
    #[arg(long, default_value = "frontier")]
    scope: String,
    /// Also write plot-ready CSV here (2 or 3 objectives only)
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Write the combined report to this CSV
    #[arg(long)]
    out: PathBuf,
}

/// Parse `argv` and execute; returns the process exit code.
pub fn run_from<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land on stdout and exit 0; usage errors
            // go to stderr and exit 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Frontier(a) => cmd_frontier(a),
        Command::Select(a) => cmd_select(a),
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::Report(a) => cmd_report(a),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// `run_from` over the process arguments.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

fn cmd_frontier(args: &FrontierArgs) -> Result<()> {
    let specs = io::load_schema(&args.schema)?;
    let set = io::load_solutions(&args.solutions, &specs)?;
    let frontier = pareto_frontier(&set);
    if let Some(out) = &args.out {
        io::write_frontier(out, &set, &frontier)?;
    }
    println!("frontier: {} of {} candidates", frontier.len(), set.len());
    for m in frontier.members(&set)? {
        let vals: Vec<String> = m.values.iter().map(|v| io::fmt_f64(*v)).collect();
        println!("{} {}", m.id, vals.join(","));
    }
    Ok(())
}

fn cmd_select(args: &SelectArgs) -> Result<()> {
    let strategy = Strategy::parse(&args.strategy)?;
    let specs = io::load_schema(&args.schema)?;
    let set = io::load_solutions(&args.solutions, &specs)?;
    let inputs = StrategyInputs::load(&args.params, &set)?;
    inputs.require_for(&[strategy])?;
    let result = select(strategy, &set, inputs.populations.as_ref(), &inputs.params)?;
    if let Some(out) = &args.out {
        io::write_selection(out, &result)?;
    }
    print_selection(&result);
    Ok(())
}

fn cmd_calibrate(args: &CalibrateArgs) -> Result<()> {
    let log = io::load_interactions(&args.interactions)?;
    let params = CalibrationParams {
        alpha: args.alpha,
        beta: args.beta,
        t_override: args.t,
        accuracy_utopia: args.accuracy_utopia,
        anchor_agg: AnchorAgg::parse(&args.anchor_agg)?,
    };
    let table = calibrate(&log, &params)?;
    let names: Vec<String> = match &args.schema {
        Some(path) => {
            let specs = io::load_schema(path)?;
            if specs.len() != 2 {
                return Err(input_err!(
                    "--schema for calibrate must define exactly 2 objectives, got {}",
                    specs.len()
                ));
            }
            specs.iter().map(|s| s.name.clone()).collect()
        }
        None => vec!["accuracy".to_string(), "aplt".to_string()],
    };
    io::write_utopia_table(&args.out, &names, &table)?;
    let s = table.summary();
    println!("users: {}", table.rows().len());
    println!("T: {}", s.t_used);
    println!(
        "anchors: tail={} head={}",
        io::fmt_f64(s.pop_tail),
        io::fmt_f64(s.pop_head)
    );
    println!("mean aplt utopia: {}", io::fmt_f64(s.mean_aplt_utopia));
    println!("clamped: {}", s.clamp_count);
    Ok(())
}

fn cmd_report(args: &ReportArgs) -> Result<()> {
    let strategies = parse_strategy_list(&args.strategies)?;
    let specs = io::load_schema(&args.schema)?;
    let set = io::load_solutions(&args.solutions, &specs)?;
    let inputs = StrategyInputs::load(&args.params, &set)?;
    inputs.require_for(&strategies)?;
    let frontier = pareto_frontier(&set);
    let mut results = Vec::with_capacity(strategies.len());
    for s in &strategies {
        results.push(select(*s, &set, inputs.populations.as_ref(), &inputs.params)?);
    }
    let (row_ids, frontier_col): (Vec<String>, Option<&Frontier>) = match args.scope.as_str() {
        "frontier" => (frontier.member_ids().to_vec(), None),
        "all" => {
            let mut ids: Vec<String> = set.solutions().iter().map(|s| s.id.clone()).collect();
            ids.sort();
            (ids, Some(&frontier))
        }
        other => {
            return Err(input_err!(
                "unknown --scope {other:?} (expected frontier or all)"
            ))
        }
    };
    io::write_report(&args.out, &set, &row_ids, &results, frontier_col)?;
    if let Some(plot) = &args.plot {
        io::emit_plot_data(plot, &set, &frontier, &results)?;
    }
    print!("{}", io::render_report(&set, &row_ids, &results)?);
    Ok(())
}

fn print_selection(r: &SelectionResult) {
    println!("strategy: {}", r.strategy.name());
    println!("chosen: {}", r.chosen_id);
    println!("score: {}", io::fmt_f64(r.scores[&r.chosen_id]));
    println!("tie: {}", r.tie_ids.join(";"));
    let echo: Vec<String> = r
        .params_echo
        .echo_pairs()
        .into_iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    println!("params: {}", echo.join(" "));
}

/// Loaded side inputs plus the resolved strategy parameters.
struct StrategyInputs {
    params: StrategyParams,
    populations: Option<PopulationSet>,
}

impl StrategyInputs {
    fn load(flags: &ParamFlags, set: &CandidateSet) -> Result<Self> {
        let specs = set.specs();
        let k = set.k();
        let defaults = StrategyParams::default();

        let utopia = if let Some(text) = &flags.utopia {
            Some(UtopiaAssignment::Global(parse_components(
                "--utopia", text, k,
            )?))
        } else if let Some(path) = &flags.utopia_file {
            Some(io::load_utopia(path, specs)?)
        } else {
            schema_vector(specs, |s| s.utopia_component).map(UtopiaAssignment::Global)
        };
        let reference = match &flags.reference {
            Some(text) => Some(parse_components("--reference", text, k)?),
            None => schema_vector(specs, |s| s.reference_component),
        };
        let weights = match &flags.weights {
            Some(text) => Some(parse_components("--weights", text, k)?),
            None => schema_vector(specs, |s| s.weight),
        };
        let distance_kind = match &flags.distance {
            Some(d) => DistanceKind::parse(d)?,
            None => defaults.distance_kind,
        };
        let params = StrategyParams {
            utopia,
            reference,
            weights,
            m_weight_samples: flags.weight_samples.unwrap_or(defaults.m_weight_samples),
            seed: flags.seed.unwrap_or(defaults.seed),
            distance_kind,
            normalize_first: flags.normalize,
        };

        let populations = match &flags.samples {
            Some(path) => Some(io::load_samples(path, specs)?),
            None => None,
        };

        if params.normalize_first {
            let constant = NormalizeTransform::fit(set).constant_columns();
            if !constant.is_empty() {
                let names: Vec<&str> =
                    constant.iter().map(|i| specs[*i].name.as_str()).collect();
                eprintln!(
                    "warning: constant objective column(s) {} normalize to 0",
                    names.join(", ")
                );
            }
        }
        if let (Some(pops), Some(UtopiaAssignment::PerSample(rows))) =
            (&populations, &params.utopia)
        {
            let known: BTreeSet<&String> = pops.sample_ids().iter().collect();
            let extra: Vec<&str> = rows
                .keys()
                .filter(|id| !known.contains(id))
                .map(|id| id.as_str())
                .collect();
            if !extra.is_empty() {
                eprintln!(
                    "warning: utopia rows for unknown sample(s): {}",
                    extra.join(", ")
                );
            }
        }

        Ok(StrategyInputs {
            params,
            populations,
        })
    }

    /// Reject a strategy whose inputs are absent before any computation,
    /// naming the flag that would supply them.
    fn require_for(&self, strategies: &[Strategy]) -> Result<()> {
        for s in strategies {
            match s {
                Strategy::Ed => {
                    if self.params.utopia.is_none() {
                        return Err(input_err!(
                            "strategy ed requires --utopia or --utopia-file (or schema utopia values)"
                        ));
                    }
                }
                Strategy::Wm => {
                    if self.params.weights.is_none() {
                        return Err(input_err!(
                            "strategy wm requires --weights (or schema weight values)"
                        ));
                    }
                }
                Strategy::Hv => {
                    if self.params.reference.is_none() {
                        return Err(input_err!(
                            "strategy hv requires --reference (or schema reference values)"
                        ));
                    }
                }
                Strategy::Pdu | Strategy::Cpdu => {
                    if self.populations.is_none() {
                        return Err(input_err!("strategy {} requires --samples", s.name()));
                    }
                    if self.params.utopia.is_none() {
                        return Err(input_err!(
                            "strategy {} requires --utopia or --utopia-file",
                            s.name()
                        ));
                    }
                }
                Strategy::Akp | Strategy::Ukp => {}
            }
        }
        Ok(())
    }
}

fn schema_vector(
    specs: &[ObjectiveSpec],
    get: impl Fn(&ObjectiveSpec) -> Option<f64>,
) -> Option<Vec<f64>> {
    specs.iter().map(get).collect()
}

fn parse_components(flag: &str, text: &str, k: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != k {
        return Err(input_err!(
            "{flag} expects {k} comma-separated values, got {}",
            parts.len()
        ));
    }
    parts
        .iter()
        .map(|p| {
            let v: f64 = p
                .trim()
                .parse()
                .map_err(|_| input_err!("{flag}: cannot parse {p:?} as a number"))?;
            if !v.is_finite() {
                return Err(input_err!("{flag}: non-finite component {p:?}"));
            }
            Ok(v)
        })
        .collect()
}

fn parse_strategy_list(text: &str) -> Result<Vec<Strategy>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let s = Strategy::parse(part.trim())?;
        if out.contains(&s) {
            return Err(input_err!("--strategies lists {} twice", s.name()));
        }
        out.push(s);
    }
    Ok(out)
}
