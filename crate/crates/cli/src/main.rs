use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcfa::machine::McMode;
use qcfa::quantum::validate_superoperator;
use qcfa::scalar::{default_tolerance, set_precision};
use qcfa_cli::config::ExperimentConfig;
use qcfa_cli::format::to_json;
use qcfa_cli::report::{run_rows, search_rows, sweep, write_rows, Engine, FitKind, Format, Quantity, RunOptions};
use qcfa_cli::sources::{resolve_machine, OracleSource, Target};

#[derive(Parser)]
#[command(name = "qcfa", version, about = "Simulate quantum-classical finite automata and proof systems")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Bits of working precision.
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Seed for Monte Carlo runs and generated oracles.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    engine: Option<Engine>,
    /// Monte Carlo trials.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Longest deterministic stretch (exact) or steps per trial (Monte Carlo).
    #[arg(long, global = true)]
    max_steps: Option<u64>,
    /// Most configurations the exact engine may expand per round.
    #[arg(long, global = true)]
    node_budget: Option<usize>,
    /// Stop Monte Carlo trials at the first restart.
    #[arg(long, global = true)]
    single_round: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Language oracle as a JSON file.
    #[arg(long, global = true)]
    oracle: Option<String>,
    /// Depth of a generated oracle.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Experiment file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<String>,
}

#[derive(Args)]
struct Inputs {
    /// Builtin machine (`name:key=value,...`) or definition file.
    machine: Option<String>,
    /// An input string; repeatable.
    #[arg(long = "input", short = 'i')]
    inputs: Vec<String>,
    /// Input generator, e.g. `power-eq:3`, `perturb:2`, `unary:0..6`,
    /// `binary:2`, `all:6`; repeatable.
    #[arg(long = "inputs", short = 'g')]
    generators: Vec<String>,
    /// Prover for verifiers: `honest`, `final-bit`, `out-of-order:0,2,1`,
    /// `fixed:0110`.
    #[arg(long)]
    prover: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every superoperator's completeness and the transition table.
    Validate {
        machine: String,
    },
    /// One report row per input.
    Run(Inputs),
    /// Measure growth over inputs and fit an exponent.
    Sweep {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value = "steps")]
        quantity: Quantity,
        #[arg(long, value_enum, default_value = "log-log")]
        fit: FitKind,
    },
    /// Best prover transcript per input, by exhaustive search.
    Search {
        #[command(flatten)]
        inputs: Inputs,
        /// Transcript length limit; defaults to the input length plus 2.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 1 << 20)]
        max_evaluations: usize,
    },
    /// Write a machine as a definition file.
    Dump {
        machine: String,
    },
}

struct Context {
    cfg: ExperimentConfig,
    opts: RunOptions,
    format: Format,
}

impl Context {
    fn new(common: &Common, inputs: Option<&Inputs>) -> qcfa::Result<Self> {
        let mut cfg = match &common.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(i) = inputs {
            if i.machine.is_some() {
                cfg.machine = i.machine.clone();
            }
            cfg.inputs.extend(i.inputs.iter().cloned());
            cfg.generators.extend(i.generators.iter().cloned());
            if i.prover.is_some() {
                cfg.prover = i.prover.clone();
            }
        }
        macro_rules! take {
            ($($f:ident),*) => { $( if common.$f.is_some() { cfg.$f = common.$f.clone(); } )* };
        }
        take!(engine, precision, trials, max_steps, node_budget, seed, out, format);
        if common.oracle.is_some() {
            cfg.oracle.file = common.oracle.clone();
        }
        if common.depth.is_some() {
            cfg.oracle.depth = common.depth;
        }
        let d = RunOptions::default();
        let opts = RunOptions {
            engine: cfg.engine.unwrap_or(d.engine),
            trials: cfg.trials.unwrap_or(d.trials),
            max_steps: cfg.max_steps.unwrap_or(d.max_steps),
            node_budget: cfg.node_budget.unwrap_or(d.node_budget),
            seed: cfg.seed.unwrap_or(d.seed),
            mc_mode: if common.single_round { McMode::SingleRound } else { McMode::Full },
        };
        let format = cfg.format.unwrap_or(Format::Csv);
        Ok(Context { cfg, opts, format })
    }

    fn target(&self, machine: Option<&str>) -> qcfa::Result<Target> {
        let source = machine
            .or(self.cfg.machine.as_deref())
            .ok_or_else(|| qcfa::Error::Contract("no machine given".into()))?;
        let oracle = OracleSource { seed: self.cfg.oracle.seed.or(self.cfg.seed), ..self.cfg.oracle.clone() };
        resolve_machine(source, &oracle, self.opts.seed)
    }

    fn output(&self) -> qcfa::Result<Box<dyn Write>> {
        Ok(match &self.cfg.out {
            Some(path) => Box::new(File::create(path).map_err(|e| qcfa::Error::Io(format!("{path}: {e}")))?),
            None => Box::new(io::stdout()),
        })
    }
}

fn validate(ctx: &Context, machine: &str) -> qcfa::Result<bool> {
    let mut out = ctx.output()?;
    let target = match ctx.target(Some(machine)) {
        Err(e @ qcfa::Error::CoefficientTooLarge { .. }) => {
            writeln!(out, "{machine}\tFAIL\t{e}").map_err(|e| qcfa::Error::Io(e.to_string()))?;
            return Ok(false);
        }
        other => other?,
    };
    let spec = target.spec();
    let tol = default_tolerance();
    let mut ok = true;
    let w = |e: io::Error| qcfa::Error::Io(e.to_string());
    for (name, op) in &spec.superoperators {
        let r = validate_superoperator(op, &tol);
        ok &= r.pass;
        writeln!(out, "{name}\t{}\tresidual {}", if r.pass { "pass" } else { "FAIL" }, r.residual_norm.to_decimal(6)).map_err(w)?;
    }
    if let Err(e) = spec.check() {
        ok = false;
        writeln!(out, "structure\tFAIL\t{e}").map_err(w)?;
    }
    let missing = spec.missing_transitions();
    for (s, c, o) in missing.iter().take(20) {
        writeln!(out, "transition\tFAIL\tno transition for state `{s}`, symbol `{c}`, outcome `{o}`").map_err(w)?;
    }
    ok &= missing.is_empty();
    writeln!(out, "{}\t{}", spec.name, if ok { "valid" } else { "INVALID" }).map_err(w)?;
    Ok(ok)
}

fn execute(cli: &Cli) -> qcfa::Result<bool> {
    match &cli.command {
        Command::Validate { machine } => validate(&Context::new(&cli.common, None)?, machine),
        Command::Dump { machine } => {
            let ctx = Context::new(&cli.common, None)?;
            let target = ctx.target(Some(machine))?;
            writeln!(ctx.output()?, "{}", to_json(target.spec())).map_err(|e| qcfa::Error::Io(e.to_string()))?;
            Ok(true)
        }
        Command::Run(inputs) => {
            let ctx = Context::new(&cli.common, Some(inputs))?;
            let target = ctx.target(None)?;
            let rows = run_rows(&target, &ctx.cfg.input_set()?, ctx.cfg.prover.as_deref(), &ctx.opts)?;
            write_rows(&rows, ctx.format, &mut ctx.output()?)?;
            Ok(rows.iter().all(|r| r.error.is_none() && r.pass != Some(false)))
        }
        Command::Sweep { inputs, quantity, fit } => {
            let ctx = Context::new(&cli.common, Some(inputs))?;
            let target = ctx.target(None)?;
            let report = sweep(&target, &ctx.cfg.input_set()?, ctx.cfg.prover.as_deref(), *quantity, *fit, &ctx.opts)?;
            let mut out = ctx.output()?;
            match ctx.format {
                Format::Json => serde_json::to_writer_pretty(&mut out, &report).map_err(|e| qcfa::Error::Io(e.to_string()))?,
                Format::Csv => {
                    write_rows(&report.points, Format::Csv, &mut out)?;
                    if let Some(f) = &report.fit {
                        writeln!(out, "# fit {:?} slope {:.4} intercept {:.4}", f.kind, f.slope, f.intercept)
                            .map_err(|e| qcfa::Error::Io(e.to_string()))?;
                    }
                }
            }
            if let Some(e) = &report.fit_error {
                eprintln!("fit: {e}");
            }
            Ok(report.fit.is_some())
        }
        Command::Search { inputs, budget, max_evaluations } => {
            let ctx = Context::new(&cli.common, Some(inputs))?;
            let target = ctx.target(None)?;
            let b = *budget;
            let budget_for = move |w: &str| b.unwrap_or(w.chars().count() + 2);
            let rows = search_rows(&target, &ctx.cfg.input_set()?, &budget_for, &ctx.opts, *max_evaluations)?;
            write_rows(&rows, ctx.format, &mut ctx.output()?)?;
            Ok(rows.iter().all(|r| r.error.is_none() && r.pass != Some(false)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let precision = match &cli.common.config {
        Some(path) => ExperimentConfig::from_file(path).ok().and_then(|c| c.precision),
        None => None,
    };
    let _guard = set_precision(cli.common.precision.or(precision).unwrap_or(192));
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
