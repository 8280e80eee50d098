use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polysym::reconstruct::Flavor;
use polysym::tolerance::{SearchLimits, Tolerances};
use polysym_cli::{
    analyze, exit_code, experiment_metric, export_dot, oracle, summary, validate, AnalyzeOptions, CandidateKind,
    ColoringKind, Options, EXIT_FAILED_PROPERTY, EXIT_OK, EXIT_USAGE,
};
use rayon::prelude::*;
use serde::Serialize;

/// Linear and orthogonal symmetry groups of convex polytopes.
#[derive(Parser)]
#[command(name = "polysym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Override a tolerance, e.g. `--tolerance color=1e-6`; repeatable.
    #[arg(long = "tolerance", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    /// Translate the vertex centroid to the origin before validation.
    #[arg(long)]
    recenter: bool,
    /// Largest automorphism group to enumerate.
    #[arg(long, value_name = "ORDER")]
    limit: Option<usize>,
    /// Print a human-readable summary to stderr.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Linear,
    Orthogonal,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorSelection {
    Linear,
    Orthogonal,
    Both,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Linear => Flavor::Linear,
            FlavorArg::Orthogonal => Flavor::Orthogonal,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute symmetry groups, colorings and the Izmestiev matrix.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Only report these colorings; repeatable. Default: all.
        #[arg(long, value_enum)]
        coloring: Vec<ColoringKind>,
        #[arg(long, value_enum, default_value = "both")]
        flavor: FlavorSelection,
        /// Include per-stage wall-clock times in the report.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check the Izmestiev matrix properties; exit 1 if any fails.
    Validate {
        file: PathBuf,
        /// Check this matrix dump instead of the closed-form matrix.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Brute-force symmetry group, compared with the pipeline.
    Oracle {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "linear")]
        flavor: FlavorArg,
        #[arg(long, value_enum, default_value = "sym")]
        candidates: CandidateKind,
        /// Treat the input as a graph embedding (needs "edges"); no polytope validation.
        #[arg(long)]
        embedding: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Graphviz rendering of the colored edge graph.
    ExportDot {
        file: PathBuf,
        #[arg(long, value_enum)]
        coloring: ColoringKind,
        #[command(flatten)]
        common: Common,
    },
    /// Compare automorphisms of the metric-colored graph with the orthogonal symmetries.
    ExperimentMetric {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn options(common: &Common) -> Result<Options, String> {
    let mut tolerances = Tolerances::default();
    for t in &common.tolerances {
        tolerances.set(t)?;
    }
    let mut limits = SearchLimits::default();
    if let Some(limit) = common.limit {
        limits.max_group_order = limit;
    }
    Ok(Options {
        tolerances,
        limits,
        recenter: common.recenter,
    })
}

fn print_json<T: Serialize>(value: &T) {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).expect("report serializes");
    let _ = writeln!(out);
}

fn report_error(path: &Path, e: &polysym::Error) -> u8 {
    eprintln!("error: {}: {e}", path.display());
    exit_code(e)
}

#[derive(Serialize)]
#[serde(untagged)]
enum BatchEntry {
    Report(Box<polysym_cli::AnalysisReport>),
    Failure { path: String, error: String, exit_code: u8 },
}

fn run(cli: Cli) -> u8 {
    let common = match &cli.command {
        Command::Analyze { common, .. }
        | Command::Validate { common, .. }
        | Command::Oracle { common, .. }
        | Command::ExportDot { common, .. }
        | Command::ExperimentMetric { common, .. } => common,
    };
    let opts = match options(common) {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let verbose = common.verbose;
    match &cli.command {
        Command::Analyze {
            files,
            coloring,
            flavor,
            timing,
            ..
        } => {
            let what = AnalyzeOptions {
                colorings: if coloring.is_empty() {
                    ColoringKind::ALL.to_vec()
                } else {
                    coloring.clone()
                },
                flavors: match flavor {
                    FlavorSelection::Linear => vec![Flavor::Linear],
                    FlavorSelection::Orthogonal => vec![Flavor::Orthogonal],
                    FlavorSelection::Both => vec![Flavor::Linear, Flavor::Orthogonal],
                },
                timing: *timing,
            };
            let results: Vec<_> = files.par_iter().map(|f| analyze(f, &opts, &what)).collect();
            let mut code = EXIT_OK;
            let mut entries = Vec::new();
            for (file, result) in files.iter().zip(results) {
                match result {
                    Ok(r) => {
                        if verbose {
                            eprint!("{}", summary(&r));
                        }
                        entries.push(BatchEntry::Report(Box::new(r)));
                    }
                    Err(e) => {
                        let c = report_error(file, &e);
                        if code == EXIT_OK {
                            code = c;
                        }
                        entries.push(BatchEntry::Failure {
                            path: file.display().to_string(),
                            error: e.to_string(),
                            exit_code: c,
                        });
                    }
                }
            }
            match entries.len() {
                1 if code != EXIT_OK => {}
                1 => print_json(&entries[0]),
                _ => print_json(&entries),
            }
            code
        }
        Command::Validate { file, matrix, .. } => match validate(file, &opts, matrix.as_deref()) {
            Ok(r) => {
                print_json(&r);
                if verbose {
                    eprintln!("{}: {}", file.display(), if r.pass { "all properties hold" } else { "FAILED" });
                }
                if r.pass {
                    EXIT_OK
                } else {
                    EXIT_FAILED_PROPERTY
                }
            }
            Err(e) => report_error(file, &e),
        },
        Command::Oracle {
            file,
            flavor,
            candidates,
            embedding,
            ..
        } => match oracle(file, &opts, (*flavor).into(), *candidates, *embedding) {
            Ok(r) => {
                if verbose {
                    eprintln!("{}: {} of {} candidates accepted", file.display(), r.group.order, r.candidate_count);
                }
                print_json(&r);
                EXIT_OK
            }
            Err(e) => report_error(file, &e),
        },
        Command::ExportDot { file, coloring, .. } => match export_dot(file, &opts, *coloring) {
            Ok(dot) => {
                print!("{dot}");
                EXIT_OK
            }
            Err(e) => report_error(file, &e),
        },
        Command::ExperimentMetric { file, .. } => match experiment_metric(file, &opts) {
            Ok(r) => {
                if verbose {
                    eprintln!(
                        "{}: metric coloring has {} automorphisms, {} orthogonal symmetries",
                        file.display(),
                        r.metric_automorphisms,
                        r.orthogonal_symmetries
                    );
                }
                print_json(&r);
                EXIT_OK
            }
            Err(e) => report_error(file, &e),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    ExitCode::from(run(cli))
}
