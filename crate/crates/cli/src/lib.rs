//! Command-line front end.
//!
//! Structured output goes to stdout (or `--output`), logs to stderr. Exit
//! codes: 0 success, 1 negative answer (not enabling, not found, invalid
//! certificate), 2 usage or input error, 3 a proved invariant failed.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use enabling::bounds::{multicolour_report, two_colour_report};
use enabling::certificates::{certify, check_certificate, Certificate, CertifyError};
use enabling::clique::{verify_enabling, CliqueError};
use enabling::constructions::{to_dot, Family};
use enabling::lp::LpError;
use enabling::search::{exists_enabling_with, min_n, SearchOptions, DEFAULT_SHARD_BITS};
use enabling::{ColourId, EdgeColouredGraph, FamilyPolicy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "enabling",
    version,
    about = "Enabling graphs: constructions, verification, LP certificates, bounds and search"
)]
struct Cli {
    /// Worker threads for verification and search.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write structured output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build one of the explicit graphs.
    Construct {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Comma-separated parameters: p4 n | extremal k1,k2 | blocks r,k | prime p.
        #[arg(long)]
        params: String,
    },
    /// Check that every vertex lies in the required monochromatic cliques.
    Verify {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Solve the certificate LPs and check every invariant exactly.
    Certify {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = PolicyArg::Lex)]
        policy: PolicyArg,
    },
    /// Re-check a stored certificate against a graph without solving LPs.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Closed-form bounds on n(k1,k2) or n_r(k).
    Bound(BoundArgs),
    /// Exhaustive search for two-colour enabling graphs.
    Search(SearchArgs),
    /// Render a graph as Graphviz DOT.
    ExportDot {
        /// Graph JSON file, `-` for stdin.
        #[arg(long, default_value = "-")]
        graph: PathBuf,
        /// Colours to leave out, e.g. `1` to draw only red edges.
        #[arg(long, value_delimiter = ',')]
        hide: Vec<usize>,
        #[arg(long, default_value = "G")]
        name: String,
    },
}

#[derive(Args, Debug)]
struct GraphInput {
    /// Graph JSON file, `-` for stdin.
    #[arg(long, default_value = "-")]
    graph: PathBuf,
    /// Requirements `colour:k,...`; defaults to the `targets` stored with a
    /// constructed graph.
    #[arg(long)]
    targets: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct BoundArgs {
    #[arg(long, num_args = 2, value_names = ["K1", "K2"])]
    two_colour: Option<Vec<usize>>,
    #[arg(long, num_args = 2, value_names = ["R", "K"])]
    multicolour: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    k1: usize,
    #[arg(long)]
    k2: usize,
    /// Decide existence on exactly this many vertices.
    #[arg(long, conflicts_with_all = ["min_n", "n_max"], required_unless_present = "min_n")]
    n: Option<usize>,
    /// Find the least vertex count up to `--n-max`.
    #[arg(long, requires = "n_max")]
    min_n: bool,
    #[arg(long)]
    n_max: Option<usize>,
    /// Skip sizes below the closed-form lower bound instead of searching them.
    #[arg(long, requires = "min_n")]
    trusted_bounds: bool,
    #[arg(long, default_value_t = DEFAULT_SHARD_BITS)]
    shard_bits: u32,
    /// Disable degree-window pruning.
    #[arg(long)]
    no_prune: bool,
    /// Include wall-clock times in the report.
    #[arg(long)]
    timing: bool,
    /// Also write the witness graph JSON here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    P4,
    Extremal,
    Blocks,
    Prime,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    Lex,
    All,
}

impl From<PolicyArg> for FamilyPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Lex => FamilyPolicy::PerVertexLex,
            PolicyArg::All => FamilyPolicy::AllCliques,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

struct Io<'a> {
    output: Option<&'a Path>,
    pretty: bool,
}

impl Io<'_> {
    fn emit_text(&self, text: &str) -> Result<(), Failure> {
        match self.output {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn emit<T: Serialize>(&self, value: &T) -> Result<(), Failure> {
        let mut text = if self.pretty {
            serde_json::to_string_pretty(value)
        } else {
            serde_json::to_string(value)
        }
        .map_err(|e| Failure::Internal(e.to_string()))?;
        text.push('\n');
        self.emit_text(&text)
    }
}

fn colour_enabled() -> bool {
    std::env::var("ENABLE_COLOR").is_ok_and(|v| !v.is_empty() && v != "0")
}

fn init_logging() {
    let style = if colour_enabled() {
        env_logger::WriteStyle::Always
    } else {
        env_logger::WriteStyle::Never
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .write_style(style)
        .try_init();
}

fn report_error(kind: &str, message: &str) {
    let mut err = io::stderr().lock();
    let _ = if colour_enabled() {
        writeln!(err, "\x1b[1;31m{kind}:\x1b[0m {message}")
    } else {
        writeln!(err, "{kind}: {message}")
    };
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if cli.jobs == 0 {
        report_error("error", "--jobs must be at least 1");
        return EXIT_USAGE;
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            report_error("error", &e.to_string());
            return EXIT_INTERNAL;
        }
    };
    let io = Io {
        output: cli.output.as_deref(),
        pretty: cli.pretty,
    };
    match pool.install(|| dispatch(cli.command, &io)) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_NEGATIVE,
        Err(Failure::Usage(msg)) => {
            report_error("error", &msg);
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            report_error("internal error", &msg);
            EXIT_INTERNAL
        }
    }
}

fn dispatch(command: Command, io: &Io) -> Outcome {
    match command {
        Command::Construct { family, params } => construct(family, &params, io),
        Command::Verify { input } => {
            let (g, targets) = load_input(&input)?;
            let report = verify_enabling(&g, &targets).map_err(clique_failure)?;
            io.emit(&report)?;
            Ok(report.ok)
        }
        Command::Certify { input, policy } => {
            let (g, targets) = load_input(&input)?;
            match certify(&g, &targets, policy.into()) {
                Ok(cert) => {
                    io.emit(&cert)?;
                    Ok(true)
                }
                Err(CertifyError::NotEnabling { vertex, colour }) => {
                    report_error(
                        "not enabling",
                        &format!("vertex {vertex} has no colour-{colour} witness"),
                    );
                    Ok(false)
                }
                Err(e) => Err(certify_failure(e)),
            }
        }
        Command::Check { graph, certificate } => {
            let g = load_graph(&graph)?.0;
            let cert: Certificate = serde_json::from_str(&read_input(&certificate)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", certificate.display())))?;
            let result = check_certificate(&g, &cert);
            let valid = result.is_ok();
            let detail = match result {
                Ok(()) => None,
                Err(e) if is_internal(&e) => return Err(Failure::Internal(e.to_string())),
                Err(e) => Some(e.to_string()),
            };
            io.emit(&serde_json::json!({ "valid": valid, "error": detail }))?;
            Ok(valid)
        }
        Command::Bound(args) => {
            let report = match (args.two_colour, args.multicolour) {
                (Some(k), None) => two_colour_report(k[0], k[1]),
                (None, Some(rk)) => multicolour_report(rk[0], rk[1]),
                _ => unreachable!("clap enforces exactly one bound"),
            }
            .map_err(|e| Failure::Usage(e.to_string()))?;
            io.emit(&report)?;
            Ok(true)
        }
        Command::Search(args) => search(args, io),
        Command::ExportDot { graph, hide, name } => {
            let g = load_graph(&graph)?.0;
            let hidden: Vec<ColourId> = hide.into_iter().map(ColourId).collect();
            io.emit_text(&to_dot(&g, &name, &hidden))?;
            Ok(true)
        }
    }
}

fn construct(family: FamilyArg, params: &str, io: &Io) -> Outcome {
    let values = params
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(format!("--params {params:?}: {e}")))?;
    let family = match (family, values.as_slice()) {
        (FamilyArg::P4, &[n]) => Family::P4Blowup { n },
        (FamilyArg::Extremal, &[k1, k2]) => Family::TwoColourExtremal { k1, k2 },
        (FamilyArg::Blocks, &[r, k]) => Family::MulticolourBlocks { r, k },
        (FamilyArg::Prime, &[p]) => Family::PrimeSlope { p },
        (f, v) => {
            return Err(Failure::Usage(format!(
                "{f:?} takes {} parameter(s), got {}",
                match f {
                    FamilyArg::P4 | FamilyArg::Prime => 1,
                    FamilyArg::Extremal | FamilyArg::Blocks => 2,
                },
                v.len()
            )))
        }
    };
    let built = family.build().map_err(|e| Failure::Usage(e.to_string()))?;
    let mut doc =
        serde_json::to_value(&built.graph).map_err(|e| Failure::Internal(e.to_string()))?;
    let object = doc.as_object_mut().expect("graph serializes as an object");
    object.insert(
        "targets".into(),
        serde_json::to_value(family.targets()).unwrap(),
    );
    object.insert("meta".into(), serde_json::to_value(&built.meta).unwrap());
    io.emit(&doc)?;
    Ok(true)
}

fn search(args: SearchArgs, io: &Io) -> Outcome {
    let options = SearchOptions {
        shard_bits: args.shard_bits,
        prune: !args.no_prune,
    };
    let usage = |e: enabling::search::SearchError| Failure::Usage(e.to_string());
    if let Some(n) = args.n {
        let mut report = exists_enabling_with(n, args.k1, args.k2, options).map_err(usage)?;
        if !args.timing {
            report.elapsed_ms = None;
        }
        if let (Some(path), Some(g)) = (&args.witness, report.witness_graph()) {
            fs::write(path, g.to_json() + "\n")?;
        }
        io.emit(&report)?;
        return Ok(report.found);
    }
    let n_max = args.n_max.expect("clap requires --n-max with --min-n");
    let mut report = min_n(args.k1, args.k2, n_max, args.trusted_bounds, options).map_err(usage)?;
    if !args.timing {
        for s in &mut report.searches {
            s.elapsed_ms = None;
        }
    }
    if let (Some(path), Some(g)) = (
        &args.witness,
        report.searches.last().and_then(|s| s.witness_graph()),
    ) {
        fs::write(path, g.to_json() + "\n")?;
    }
    io.emit(&report)?;
    Ok(report.min_n.is_some())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

type Targets = Vec<(ColourId, usize)>;

/// Parses a graph document, returning any stored targets alongside.
fn load_graph(path: &Path) -> Result<(EdgeColouredGraph, Option<Targets>), Failure> {
    let text = read_input(path)?;
    let bad = |e: serde_json::Error| Failure::Usage(format!("{}: {e}", path.display()));
    let doc: Value = serde_json::from_str(&text).map_err(bad)?;
    let targets = match doc.get("targets") {
        Some(t) => Some(serde_json::from_value(t.clone()).map_err(bad)?),
        None => None,
    };
    let g = serde_json::from_value(doc).map_err(bad)?;
    Ok((g, targets))
}

fn load_input(input: &GraphInput) -> Result<(EdgeColouredGraph, Targets), Failure> {
    let (g, stored) = load_graph(&input.graph)?;
    let targets = match (&input.targets, stored) {
        (Some(spec), _) => parse_targets(spec)?,
        (None, Some(stored)) => stored,
        (None, None) => {
            return Err(Failure::Usage(
                "--targets is required when the graph has no stored targets".into(),
            ))
        }
    };
    Ok((g, targets))
}

/// Parses `"0:3,1:9"`.
fn parse_targets(spec: &str) -> Result<Targets, Failure> {
    spec.split(',')
        .map(|item| {
            let (c, k) = item
                .split_once(':')
                .ok_or_else(|| Failure::Usage(format!("target {item:?} is not colour:k")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|e| Failure::Usage(format!("target {item:?}: {e}")))
            };
            Ok((ColourId(parse(c)?), parse(k)?))
        })
        .collect()
}

fn clique_failure(e: CliqueError) -> Failure {
    Failure::Usage(e.to_string())
}

fn is_internal(e: &CertifyError) -> bool {
    e.is_inconsistency()
        || matches!(
            e,
            CertifyError::Lp(LpError::Audit(_) | LpError::Infeasible | LpError::Unbounded)
                | CertifyError::Lp(LpError::Malformed(_))
        )
}

fn certify_failure(e: CertifyError) -> Failure {
    if is_internal(&e) {
        Failure::Internal(e.to_string())
    } else {
        Failure::Usage(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets_parse() {
        let t = parse_targets("0:3, 1:9").unwrap();
        assert_eq!(t, vec![(ColourId(0), 3), (ColourId(1), 9)]);
        assert!(parse_targets("0-3").is_err());
        assert!(parse_targets("0:x").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
