use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use duploss::classes::{theorem_basis_one_step, ClassCatalog, ClassSpec};
use duploss::experiments::{run_benchmark, write_csv, BenchConfig, WidthPolicy};
use duploss::verify::{run_suite, Suite};
use duploss::{apply_step, bucket_scenario, radix_scenario, vp, DupLossStep, Permutation, Scenario, SubWindowTarget, WidthLimit};

#[derive(Parser)]
#[command(name = "duploss", version, about = "Bounded-width tandem duplication - random loss on permutations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single duplication-loss steps.
    #[command(subcommand)]
    Step(StepCommand),
    /// Build a scenario from the identity to a permutation.
    Scenario(ScenarioArgs),
    /// Classes C(K,p) of permutations reachable in p steps of width <= K.
    #[command(subcommand)]
    Class(ClassCommand),
    /// Exact optimal step counts by breadth-first search.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Value-position analysis of a permutation.
    #[command(subcommand)]
    Vp(VpCommand),
    /// Run an exhaustive property suite; exits nonzero on failure.
    Verify(VerifyArgs),
    /// Step counts of the bucket scenario on sampled permutations.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum StepCommand {
    /// Apply one step to a permutation.
    Apply(StepApplyArgs),
}

#[derive(Args)]
struct StepApplyArgs {
    #[arg(long)]
    perm: Permutation,
    /// Step as a JSON object, instead of --start/--width/--keep.
    #[arg(long, conflicts_with_all = ["start", "width", "keep"])]
    json: Option<String>,
    #[arg(long, required_unless_present = "json")]
    start: Option<usize>,
    #[arg(long, required_unless_present = "json")]
    width: Option<usize>,
    /// 1-based offsets that keep their first copy, comma separated.
    #[arg(long, value_delimiter = ',')]
    keep: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Radix,
    Bucket,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long)]
    perm: Permutation,
    /// Width limit; required for bucket, ignored by radix.
    #[arg(long)]
    width: Option<usize>,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
}

#[derive(Args, Clone, Copy)]
struct SpecArgs {
    /// Width limit K, or "inf".
    #[arg(long)]
    width: WidthLimit,
    /// Step budget p.
    #[arg(long)]
    steps: usize,
}

impl SpecArgs {
    fn spec(self) -> Result<ClassSpec> {
        Ok(ClassSpec::new(self.width, self.steps)?)
    }
}

#[derive(Subcommand)]
enum ClassCommand {
    /// List the members of size n.
    Enumerate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        size: usize,
    },
    /// Minimal excluded patterns up to a size, as JSON.
    Basis {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, required_unless_present = "theorem")]
        max_size: Option<usize>,
        /// Closed-form one-step basis instead of a search (needs --steps 1).
        #[arg(long)]
        theorem: bool,
    },
    /// Is the permutation a member?
    Member {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        perm: Permutation,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    MinSteps {
        #[arg(long)]
        perm: Permutation,
        #[arg(long, default_value = "inf")]
        width: WidthLimit,
    },
}

#[derive(Subcommand)]
enum VpCommand {
    Dump {
        #[arg(long)]
        perm: Permutation,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: Suite,
    #[arg(long, default_value_t = 7)]
    max_size: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct BenchArgs {
    /// const:<c>, full, n-over-log or sqrt.
    #[arg(long, default_value = "const:8")]
    policy: WidthPolicy,
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Fill wall_time_ms (makes the output run dependent).
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum, default_value_t = BenchFormat::Csv)]
    format: BenchFormat,
}

fn print_scenario(sc: &Scenario, emit: Emit) -> Result<()> {
    match emit {
        Emit::Json => println!("{}", sc.to_json()?),
        Emit::Text => {
            let trace = sc.trace()?;
            println!("n = {}, K = {}, {} steps", sc.n(), sc.width_limit(), sc.len());
            println!("   {}", trace[0]);
            for (step, perm) in sc.steps().iter().zip(&trace[1..]) {
                let keep: Vec<String> = step.keep().iter().map(ToString::to_string).collect();
                println!(
                    "   {perm}    [{}..{}] keep {{{}}}",
                    step.start(),
                    step.end(),
                    keep.join(",")
                );
            }
        }
    }
    Ok(())
}

fn step_apply(args: StepApplyArgs) -> Result<()> {
    let step = match args.json {
        Some(json) => serde_json::from_str::<DupLossStep>(&json).context("bad step JSON")?,
        None => DupLossStep::new(
            args.start.expect("required by clap"),
            args.width.expect("required by clap"),
            args.keep,
        )?,
    };
    let out = apply_step(&args.perm, &step)?;
    match args.emit {
        Emit::Text => println!("{out}"),
        Emit::Json => println!(
            "{}",
            serde_json::json!({ "from": args.perm, "step": step, "result": out })
        ),
    }
    Ok(())
}

fn scenario(args: ScenarioArgs) -> Result<()> {
    let sc = match args.algo {
        Algo::Radix => radix_scenario(&SubWindowTarget::whole(&args.perm), args.perm.len())?,
        Algo::Bucket => {
            let Some(k) = args.width else {
                bail!("--width is required for the bucket algorithm");
            };
            bucket_scenario(&args.perm, k)?
        }
    };
    print_scenario(&sc, args.emit)
}

fn class(cmd: ClassCommand) -> Result<()> {
    let catalog = ClassCatalog::new();
    match cmd {
        ClassCommand::Enumerate { spec, size } => {
            let out = io::stdout();
            let mut out = BufWriter::new(out.lock());
            for s in catalog.enumerate_class(spec.spec()?, size)? {
                writeln!(out, "{s}")?;
            }
            out.flush()?;
        }
        ClassCommand::Basis { spec, max_size, theorem } => {
            let cs = spec.spec()?;
            let basis = if theorem {
                if cs.steps() != 1 {
                    bail!("the closed-form basis only exists for one step");
                }
                theorem_basis_one_step(cs.width())?
            } else {
                catalog.minimal_forbidden_basis(cs, max_size.expect("required by clap"))?
            };
            let doc = basis.to_document(cs, if theorem { None } else { max_size });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        ClassCommand::Member { spec, perm } => {
            println!("{}", catalog.is_member(&perm, spec.spec()?)?);
        }
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    if args.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let rows = run_benchmark(&BenchConfig {
        policy: args.policy,
        sizes: args.sizes,
        samples: args.samples,
        seed: args.seed,
        timing: args.timing,
    })?;
    let mut out: Box<dyn Write> = match &args.csv {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match args.format {
        BenchFormat::Csv => write_csv(&rows, &mut out)?,
        BenchFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Step(StepCommand::Apply(args)) => step_apply(args)?,
        Command::Scenario(args) => scenario(args)?,
        Command::Class(cmd) => class(cmd)?,
        Command::Oracle(OracleCommand::MinSteps { perm, width }) => {
            println!("{}", ClassCatalog::new().bfs_min_steps(&perm, width)?);
        }
        Command::Vp(VpCommand::Dump { perm }) => print!("{}", vp::dump(&perm)),
        Command::Verify(args) => {
            let report = run_suite(args.suite, args.max_size, &ClassCatalog::new())?;
            for check in &report.checks {
                println!("{check}");
            }
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Bench(args) => bench(args)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
