use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dtl_core::bisim::{compute_bisim, Cap};
use dtl_core::experiments::{expressiveness, separation};
use dtl_core::gallery::{gen_a, gen_b, gen_c, gen_d};
use dtl_core::oracle::definable_sets;
use dtl_core::proof::{check_derivation, derivation_from_json, derivation_to_json, derive_trouble, SystemDescriptor, Verdict};
use dtl_core::report::ExperimentReport;
use dtl_core::schema::{build_schema, SchemaName};
use dtl_core::selftest::run_selftest;
use dtl_core::{parse, DynModel, Formula};

#[derive(Parser)]
#[command(name = "dtl", version, about = "Model checking, bisimulation and derivation checking for dynamic topological logic")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of a human-readable summary.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock time in experiment reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a model; exit 1 if some point refutes it.
    Check(CheckArgs),
    /// Export a gallery model.
    Gen(GenArgs),
    /// Compute the rank-stratified tangled bisimulation between two models.
    Bisim(BisimArgs),
    /// Emit a derivation.
    Prove {
        #[command(subcommand)]
        what: ProveCommand,
    },
    /// Check a derivation against a bounded system; exit 1 on rejection.
    Verify(VerifyArgs),
    /// Brute-force definability oracles.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Run one of the end-to-end experiments.
    Experiment {
        #[command(subcommand)]
        what: ExperimentCommand,
    },
    /// Run the quick invariant suites.
    Selftest,
}

#[derive(Args)]
struct CheckArgs {
    /// Model document (JSON).
    model: PathBuf,
    /// Formula in the ASCII syntax.
    formula: Option<String>,
    /// Use a named formula family instead of formula text.
    #[arg(long, conflicts_with = "formula")]
    schema: Option<String>,
    #[arg(long, requires = "schema")]
    k: Option<u32>,
    /// Index for indexed families such as START.
    #[arg(long, requires = "schema")]
    i: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    A,
    B,
    C,
    D,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, ignore_case = true)]
    family: Family,
    #[arg(long = "N", short = 'N', default_value_t = 1)]
    n: u32,
    #[arg(long = "K", short = 'K')]
    k: u32,
    /// Emit Graphviz DOT instead of JSON.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct BisimArgs {
    left: PathBuf,
    right: PathBuf,
    /// Highest rank to compute.
    #[arg(long)]
    n: usize,
    /// Width bound: a positive number or `unbounded`.
    #[arg(long, default_value = "unbounded")]
    k: String,
}

#[derive(Subcommand)]
enum ProveCommand {
    /// Derivation of Trouble^k using continuity of arity k and depth 2.
    Trouble {
        #[arg(long)]
        k: u32,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    derivation: PathBuf,
    /// Width cap (`0` forbids continuity, `unbounded` for no cap); defaults to
    /// the document's system.
    #[arg(long)]
    k: Option<String>,
    /// Depth cap for continuity substituends.
    #[arg(long)]
    n: Option<String>,
    /// Also require every line to have width at most 1.
    #[arg(long)]
    km: bool,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Sets definable by formulas of bounded depth and width.
    WidthDefinable {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated atom indices.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        atoms: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        width: usize,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    Separation {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
    },
    Expressiveness {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
    },
}

enum Status {
    Pass,
    Fail,
}

struct Output<'a> {
    path: Option<&'a Path>,
}

impl Output<'_> {
    fn emit(&self, text: &str) -> Result<()> {
        match self.path {
            Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
            None => match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            },
        }
    }
}

fn parse_cap(s: &str) -> Result<Cap> {
    if s.eq_ignore_ascii_case("unbounded") || s == "*" {
        return Ok(Cap::Unbounded);
    }
    Ok(Cap::Bounded(s.parse().with_context(|| format!("bad cap `{s}`"))?))
}

fn load_model(path: &Path) -> Result<DynModel> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    DynModel::from_json(&text).with_context(|| format!("loading {}", path.display()))
}

fn check_formula(args: &CheckArgs) -> Result<Formula> {
    match (&args.formula, &args.schema) {
        (Some(text), None) => Ok(parse(text)?),
        (None, Some(name)) => {
            let name: SchemaName = name.parse()?;
            let k = args.k.context("--schema needs --k")?;
            Ok(build_schema(name, k, args.i)?)
        }
        _ => bail!("give either a formula or --schema"),
    }
}

fn cmd_check(cli: &Cli, args: &CheckArgs, out: &Output) -> Result<Status> {
    let model = load_model(&args.model)?;
    let phi = check_formula(args)?;
    let ext = model.eval(&phi)?;
    let witness = (0..model.len()).find(|&x| !ext.contains(x));
    if cli.json {
        let table: serde_json::Map<String, serde_json::Value> =
            (0..model.len()).map(|x| (model.name(x).to_string(), json!(ext.contains(x)))).collect();
        let doc = json!({
            "formula": phi.to_string(),
            "valid": witness.is_none(),
            "witness": witness.map(|x| model.name(x)),
            "table": table,
        });
        out.emit(&serde_json::to_string_pretty(&doc)?)?;
    } else {
        let mut text = format!("formula: {phi}\n");
        for x in 0..model.len() {
            text.push_str(&format!("  {:<12} {}\n", model.name(x), if ext.contains(x) { "true" } else { "false" }));
        }
        match witness {
            None => text.push_str("valid"),
            Some(x) => text.push_str(&format!("refuted at {}", model.name(x))),
        }
        out.emit(&text)?;
    }
    Ok(if witness.is_none() { Status::Pass } else { Status::Fail })
}

fn cmd_gen(args: &GenArgs, out: &Output) -> Result<Status> {
    let model = match args.family {
        Family::A => gen_a(args.n, args.k)?,
        Family::B => gen_b(args.n, args.k)?,
        Family::C => gen_c(args.k)?,
        Family::D => gen_d(args.n, args.k)?,
    };
    out.emit(&if args.dot { model.to_dot() } else { model.to_json() })?;
    Ok(Status::Pass)
}

fn cmd_bisim(args: &BisimArgs, out: &Output) -> Result<Status> {
    let (left, right) = (load_model(&args.left)?, load_model(&args.right)?);
    let table = compute_bisim(&left, &right, args.n, parse_cap(&args.k)?)?;
    out.emit(&serde_json::to_string_pretty(&table.to_json())?)?;
    Ok(Status::Pass)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs, out: &Output) -> Result<Status> {
    let text = fs::read_to_string(&args.derivation)
        .with_context(|| format!("reading {}", args.derivation.display()))?;
    let (d, doc_sys) = derivation_from_json(&text)?;
    let cap = |given: &Option<String>, from_doc: Option<Cap>, what: &str| -> Result<Cap> {
        match (given, from_doc) {
            (Some(s), _) => parse_cap(s),
            (None, Some(c)) => Ok(c),
            (None, None) => bail!("no {what} given and the derivation names no system"),
        }
    };
    let mut sys = SystemDescriptor::new(
        cap(&args.k, doc_sys.map(|s| s.width_cap), "--k")?,
        cap(&args.n, doc_sys.map(|s| s.depth_cap), "--n")?,
    );
    sys.km = args.km;
    let verdict = check_derivation(&d, &sys);
    if cli.json {
        let mut doc = serde_json::to_value(&verdict)?;
        doc["system"] = serde_json::to_value(sys)?;
        out.emit(&serde_json::to_string_pretty(&doc)?)?;
    } else {
        out.emit(&format!("{} lines, system {sys}: {verdict}", d.lines.len()))?;
    }
    Ok(match verdict {
        Verdict::Accept => Status::Pass,
        Verdict::Reject { .. } => Status::Fail,
    })
}

fn cmd_oracle(cli: &Cli, what: &OracleCommand, out: &Output) -> Result<Status> {
    let OracleCommand::WidthDefinable { model, atoms, width, depth } = what;
    let m = load_model(model)?;
    let levels = definable_sets(&m, atoms, *width, *depth)?;
    let names = |mask: u32| -> Vec<&str> { (0..m.len()).filter(|x| mask >> x & 1 == 1).map(|x| m.name(x)).collect() };
    if cli.json {
        let doc: Vec<_> = levels
            .iter()
            .enumerate()
            .map(|(d, sets)| json!({ "depth": d, "sets": sets.iter().map(|&s| names(s)).collect::<Vec<_>>() }))
            .collect();
        out.emit(&serde_json::to_string_pretty(&doc)?)?;
    } else {
        let text: Vec<String> =
            levels.iter().enumerate().map(|(d, sets)| format!("depth {d}: {} definable sets", sets.len())).collect();
        out.emit(&text.join("\n"))?;
    }
    Ok(Status::Pass)
}

fn emit_reports(cli: &Cli, reports: &[ExperimentReport], out: &Output) -> Result<Status> {
    if cli.json {
        let text = if reports.len() == 1 {
            reports[0].to_json()
        } else {
            serde_json::to_string_pretty(reports)?
        };
        out.emit(&text)?;
    } else {
        let text: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
        out.emit(&text.join("\n"))?;
    }
    Ok(if reports.iter().all(|r| r.pass) { Status::Pass } else { Status::Fail })
}

fn run(cli: &Cli) -> Result<Status> {
    let out = Output { path: cli.out.as_deref() };
    let start = Instant::now();
    let stamp = |r: ExperimentReport| if cli.timing { r.with_elapsed(start.elapsed()) } else { r };
    match &cli.command {
        Command::Check(args) => cmd_check(cli, args, &out),
        Command::Gen(args) => cmd_gen(args, &out),
        Command::Bisim(args) => cmd_bisim(args, &out),
        Command::Prove { what: ProveCommand::Trouble { k } } => {
            if *k < 1 {
                bail!("k must be at least 1");
            }
            let sys = SystemDescriptor::bounded(*k as usize, 2);
            out.emit(&derivation_to_json(&derive_trouble(*k), Some(&sys)))?;
            Ok(Status::Pass)
        }
        Command::Verify(args) => cmd_verify(cli, args, &out),
        Command::Oracle { what } => cmd_oracle(cli, what, &out),
        Command::Experiment { what } => {
            let report = match what {
                ExperimentCommand::Separation { k, n } => separation(*k, *n, cli.seed)?,
                ExperimentCommand::Expressiveness { k, n } => expressiveness(*k, *n)?,
            };
            emit_reports(cli, &[stamp(report)], &out)
        }
        Command::Selftest => {
            let reports: Vec<_> = run_selftest(cli.seed)?.into_iter().map(stamp).collect();
            emit_reports(cli, &reports, &out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
