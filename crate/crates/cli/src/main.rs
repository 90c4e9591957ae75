//! `nodal`: immanence checks and nodal rationalization from the command line.
//!
//! Exit status: 0 on success, 2 when a `check` or exact `model` verdict is
//! transcendent, 1 on any error, 64 on invalid usage.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use nodal_core::io::report::{
    to_json, CheckReport, DiagnosticRecord, ModelReport, PairContext, RationalizeReport,
    RelationReport, ValidateReport,
};
use nodal_core::io::{export_dot, parse_network, serialize_network, DocumentError};
use nodal_core::network::{rationalize_with, RationalizeOptions, StepOutcome};
use nodal_core::{Criterion, Network, Verdict};
use serde::Serialize;

const EXIT_ERROR: u8 = 1;
const EXIT_TRANSCENDENT: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "nodal",
    version,
    about = "Immanence analysis and nodal rationalization of finite-map networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether DEP is (PRI, N)-immanent and print the model or a witness
    Check {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Print the relation between the two node outputs with multiplicities
    Relation {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Extract the faithful model, or approximate it with --approx
    Model {
        #[command(flatten)]
        pair: PairArgs,
        /// Fit a single-valued model when none is exact
        #[arg(long, value_name = "CRITERION")]
        approx: Option<Criterion>,
    },
    /// Merge nodes until no immanent pair remains
    Rationalize {
        #[arg(long, value_name = "FILE")]
        network: PathBuf,
        /// Where to write the reduced network
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Where to write the JSON report
        #[arg(long, value_name = "FILE")]
        report: PathBuf,
        /// Skip the exhaustive behavior comparison
        #[arg(long)]
        no_equivalence_check: bool,
    },
    /// Render the network as a Graphviz digraph
    ExportDot {
        #[arg(long, value_name = "FILE")]
        network: PathBuf,
        /// Write to FILE instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Parse and validate a network document
    Validate {
        #[arg(long, value_name = "FILE")]
        network: PathBuf,
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long, value_name = "FILE")]
    network: PathBuf,
    /// Dependent and primary node ids
    #[arg(long, value_name = "DEP:PRI", value_parser = parse_pair)]
    pair: (String, String),
    /// Named map applied to the dependent's output (identity if omitted)
    #[arg(long, value_name = "MAP")]
    ancillary: Option<String>,
    /// Also write a JSON report to FILE
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

fn parse_pair(text: &str) -> Result<(String, String), String> {
    match text.split_once(':') {
        Some((d, p)) if !d.is_empty() && !p.is_empty() && !p.contains(':') => {
            Ok((d.to_owned(), p.to_owned()))
        }
        _ => Err(format!("expected DEP:PRI, got `{text}`")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Check { pair } => check(&pair),
        Command::Relation { pair } => relation(&pair),
        Command::Model { pair, approx } => model(&pair, approx),
        Command::Rationalize {
            network,
            out,
            report,
            no_equivalence_check,
        } => rationalize(&network, &out, &report, !no_equivalence_check),
        Command::ExportDot { network, out } => {
            let dot = export_dot(&load(&network)?);
            match out {
                Some(path) => write(&path, &dot)?,
                None => print!("{dot}"),
            }
            Ok(0)
        }
        Command::Validate { network, report } => validate(&network, report.as_deref()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read `{}`", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write `{}`", path.display()))
}

fn write_report<T: Serialize>(path: Option<&Path>, report: &T) -> Result<()> {
    match path {
        Some(p) => write(p, &to_json(report)),
        None => Ok(()),
    }
}

fn load(path: &Path) -> Result<Network> {
    parse_network(&read(path)?).with_context(|| format!("invalid network `{}`", path.display()))
}

fn context(args: &PairArgs) -> Result<(Network, PairContext)> {
    let net = load(&args.network)?;
    let (dependent, primary) = &args.pair;
    let ctx = PairContext::new(&net, primary, dependent, args.ancillary.as_deref())?;
    Ok((net, ctx))
}

fn header(ctx: &PairContext) -> String {
    let p = &ctx.pair;
    let mut out = format!(
        "pair: {}:{} (dependent {}, primary {})\n",
        p.dependent, p.primary, p.dependent, p.primary
    );
    let sources: Vec<String> = p.sources.iter().map(ToString::to_string).collect();
    writeln!(
        out,
        "common input: {} over {}",
        p.common_input.name(),
        sources.join(", ")
    )
    .unwrap();
    if let Some(n) = &ctx.ancillary_name {
        writeln!(out, "ancillary: {n}").unwrap();
    }
    out
}

fn table(rows: &[String]) -> String {
    rows.iter().map(|r| format!("  {r}\n")).collect()
}

fn check(args: &PairArgs) -> Result<u8> {
    let (_, ctx) = context(args)?;
    let (verdict, report) = CheckReport::compute(&ctx)?;
    let mut out = header(&ctx);
    writeln!(out, "verdict: {}", verdict.status()).unwrap();
    let code = match &verdict {
        Verdict::Immanent(_) => {
            out.push_str("model:\n");
            out.push_str(&table(&report.model.as_ref().expect("model").table));
            0
        }
        Verdict::Transcendent(w) => {
            writeln!(out, "witness: {w}").unwrap();
            EXIT_TRANSCENDENT
        }
    };
    print!("{out}");
    write_report(args.report.as_deref(), &report)?;
    Ok(code)
}

fn relation(args: &PairArgs) -> Result<u8> {
    let (_, ctx) = context(args)?;
    let report = RelationReport::compute(&ctx)?;
    let mut out = header(&ctx);
    out.push_str("relation (w -> x, multiplicity, generators):\n");
    for row in &report.pairs {
        writeln!(
            out,
            "  {} -> {}  x{}  [{}]",
            row.w,
            row.x,
            row.multiplicity,
            row.generators.join(", ")
        )
        .unwrap();
    }
    writeln!(
        out,
        "single-valued: {}",
        if report.single_valued { "yes" } else { "no" }
    )
    .unwrap();
    if let Some(w) = &report.witness {
        writeln!(
            out,
            "witness: w={} u={} u'={} x={} x'={}",
            w.w, w.u, w.u_prime, w.x, w.x_prime
        )
        .unwrap();
    }
    if !report.unconstrained.is_empty() {
        writeln!(out, "unconstrained: {}", report.unconstrained.join(", ")).unwrap();
    }
    print!("{out}");
    write_report(args.report.as_deref(), &report)?;
    Ok(0)
}

fn model(args: &PairArgs, approx: Option<Criterion>) -> Result<u8> {
    let (_, ctx) = context(args)?;
    let report = ModelReport::compute(&ctx, approx)?;
    let mut out = header(&ctx);
    writeln!(out, "verdict: {}", report.status).unwrap();
    let code = match (&report.model, &report.criterion) {
        (Some(m), None) => {
            out.push_str("model:\n");
            out.push_str(&table(&m.table));
            0
        }
        (Some(m), Some(c)) => {
            writeln!(
                out,
                "approximate model ({c}, disagreement {}):",
                report.disagreement.unwrap_or_default()
            )
            .unwrap();
            out.push_str(&table(&m.table));
            0
        }
        (None, _) => {
            let w = report.witness.as_ref().expect("witness");
            writeln!(
                out,
                "witness: w={} u={} u'={} x={} x'={}",
                w.w, w.u, w.u_prime, w.x, w.x_prime
            )
            .unwrap();
            out.push_str("no exact model; use --approx majority for a best fit\n");
            EXIT_TRANSCENDENT
        }
    };
    print!("{out}");
    write_report(args.report.as_deref(), &report)?;
    Ok(code)
}

fn rationalize(
    network: &Path,
    out_path: &Path,
    report_path: &Path,
    equivalence: bool,
) -> Result<u8> {
    let net = load(network)?;
    let opts = RationalizeOptions {
        check_equivalence: equivalence,
        ..RationalizeOptions::default()
    };
    let (reduced, report) = rationalize_with(&net, &opts);
    let mut out = format!(
        "nodes: {} -> {}\n",
        report.node_count_before, report.node_count_after
    );
    for (i, step) in report.steps.iter().enumerate() {
        let pair = format!("{}:{}", step.dependent, step.primary);
        let what = match &step.outcome {
            StepOutcome::Merged { supernode, .. } => format!("merged into {supernode}"),
            StepOutcome::Transcendent { witness } => format!("transcendent ({witness})"),
            StepOutcome::Skipped { reason } => format!("skipped ({reason})"),
        };
        writeln!(out, "step {}: {pair} {what}", i + 1).unwrap();
    }
    match (report.behavior_equivalent, &report.behavior_note) {
        (Some(eq), _) => writeln!(out, "equivalence: {eq}").unwrap(),
        (None, Some(note)) => writeln!(out, "equivalence: not checked ({note})").unwrap(),
        (None, None) => out.push_str("equivalence: not checked\n"),
    }
    write(out_path, &serialize_network(&reduced))?;
    write(report_path, &to_json(&RationalizeReport::from(&report)))?;
    print!("{out}");
    if report.behavior_equivalent == Some(false) {
        anyhow::bail!("rationalized network is not equivalent to the original");
    }
    Ok(0)
}

fn validate(network: &Path, report_path: Option<&Path>) -> Result<u8> {
    let text = read(network)?;
    let (report, code) = match parse_network(&text) {
        Ok(net) => {
            println!(
                "valid: {} spaces, {} externals, {} nodes, {} outputs",
                net.spaces.len(),
                net.externals.len(),
                net.node_count(),
                net.outputs.len()
            );
            (ValidateReport::from(&[][..]), 0)
        }
        Err(e) => {
            eprintln!("error: invalid network `{}`: {e}", network.display());
            let location = match &e {
                DocumentError::Syntax { line, column, .. } => {
                    format!("line {line}, column {column}")
                }
                DocumentError::Schema { location, .. } => location.clone(),
                DocumentError::Validation { path, .. } => path.clone(),
            };
            let report = ValidateReport {
                valid: false,
                diagnostics: vec![DiagnosticRecord {
                    location,
                    message: e.to_string(),
                }],
            };
            (report, EXIT_ERROR)
        }
    };
    write_report(report_path, &report)?;
    Ok(code)
}
