//! `blockres`: compute, verify and generate matrix-weighted graphs.

mod render;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blockres::graph::GraphModel;
use blockres::verify::{run_corpus, CorpusSpec};
use blockres::{
    parse_graph, random_graph, run_suite, CheckId, GraphError, MatrixWeightedGraph, ResistanceWorkspace, Selection,
};
use clap::error::ErrorKind;
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "blockres", version, about = "Resistance matrices of matrix-weighted graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one derived object of a graph.
    Compute {
        input: PathBuf,
        #[arg(long, value_enum)]
        what: Quantity,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Print only the (i, j) block of R (1-based).
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
    /// Run identity checks on a graph, or on every graph of a corpus spec file.
    #[command(group(ArgGroup::new("selection").args(["check", "all"])))]
    #[command(group(ArgGroup::new("source").args(["input", "corpus"]).required(true)))]
    Verify {
        input: Option<PathBuf>,
        #[arg(long)]
        check: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, conflicts_with_all = ["check", "all"])]
        corpus: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Generate a seeded random graph.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum)]
        model: ModelKind,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Quantity {
    Laplacian,
    Pinv,
    Resistance,
    Tau,
    Det,
    Inverse,
    Inertia,
    Chi,
    Interlace,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum ModelKind {
    Tree,
    Cycle,
    Complete,
    Gnp,
}

const EXIT_INPUT: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn numeric(message: impl ToString) -> Self {
        Self {
            code: EXIT_NUMERIC,
            message: message.to_string(),
        }
    }
}

/// Output text plus the exit code to finish with.
struct Outcome {
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    let result = match cli.command {
        Command::Compute {
            input,
            what,
            format,
            pair,
        } => compute(&input, what, format, pair.as_deref()),
        Command::Verify {
            input,
            check,
            all,
            corpus,
            format,
        } => match corpus {
            Some(path) => verify_corpus(&path, format),
            None => verify(input.as_deref().expect("clap enforces a source"), &check, all, format),
        },
        Command::Gen {
            n,
            s,
            model,
            p,
            seed,
            output,
        } => generate(n, s, model, p, seed, output.as_deref()),
    };
    match result {
        Ok(outcome) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(outcome.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_INPUT);
            }
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn load_graph(path: &Path) -> Result<MatrixWeightedGraph, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&bytes).map_err(Failure::input)
}

fn compute(path: &Path, what: Quantity, format: Format, pair: Option<&[usize]>) -> Result<Outcome, Failure> {
    if pair.is_some() && what != Quantity::Resistance {
        return Err(Failure::input("--pair only applies to --what resistance"));
    }
    let is_matrix = matches!(
        what,
        Quantity::Laplacian | Quantity::Pinv | Quantity::Resistance | Quantity::Tau | Quantity::Inverse
    );
    if format == Format::Csv && !(is_matrix || what == Quantity::Interlace) {
        return Err(Failure::input("csv output is only available for matrices and interlace"));
    }
    let graph = load_graph(path)?;
    let ws = ResistanceWorkspace::new(&graph).map_err(Failure::numeric)?;
    let s = ws.s();

    let matrix = match what {
        Quantity::Laplacian => Some(ws.laplacian().body().clone()),
        Quantity::Pinv => Some(ws.laplacian_pinv().body().clone()),
        Quantity::Resistance => Some(match pair {
            Some(&[i, j]) => ws.resistance_pair(i, j).map_err(Failure::input)?,
            _ => ws.resistance().body().clone(),
        }),
        Quantity::Tau => Some(ws.tau().clone()),
        Quantity::Inverse => Some(ws.inverse_resistance().map_err(Failure::numeric)?),
        _ => None,
    };
    let text = if let Some(a) = matrix {
        match format {
            Format::Text => render::matrix_text(&a, s),
            Format::Json => render::matrix_json(&a),
            Format::Csv => render::matrix_csv(&a),
        }
    } else {
        match what {
            Quantity::Det | Quantity::Chi => {
                let d = if what == Quantity::Det {
                    ws.det_resistance()
                } else {
                    ws.chi()
                }
                .map_err(Failure::numeric)?;
                match format {
                    Format::Json => render::determinant_json(d),
                    _ => render::determinant_text(d),
                }
            }
            Quantity::Inertia => {
                let inertia = ws.resistance_inertia().map_err(Failure::numeric)?;
                match format {
                    Format::Json => render::inertia_json(&inertia),
                    _ => render::inertia_text(&inertia),
                }
            }
            Quantity::Interlace => {
                let rows = ws.interlacing_report().map_err(Failure::numeric)?;
                match format {
                    Format::Text => render::interlace_text(&rows),
                    Format::Json => render::interlace_json(&rows),
                    Format::Csv => render::interlace_csv(&rows),
                }
            }
            _ => unreachable!("matrix outputs handled above"),
        }
    };
    Ok(Outcome { text, code: 0 })
}

fn verify(path: &Path, names: &[String], all: bool, format: Format) -> Result<Outcome, Failure> {
    if format == Format::Csv {
        return Err(Failure::input("verify supports json and text output"));
    }
    let selection = if all || names.is_empty() {
        Selection::All
    } else {
        let ids = names
            .iter()
            .map(|name| name.parse::<CheckId>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(Failure::input)?;
        Selection::Only(ids)
    };
    let graph = load_graph(path)?;
    let report = run_suite(&graph, &selection).map_err(Failure::input)?;
    let text = match format {
        Format::Text => render::report_text(&report),
        _ => render::pretty(&report),
    };
    Ok(Outcome {
        text,
        code: if report.passed { 0 } else { EXIT_CHECK_FAILED },
    })
}

fn verify_corpus(path: &Path, format: Format) -> Result<Outcome, Failure> {
    if format != Format::Json {
        return Err(Failure::input("corpus reports are json only"));
    }
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let specs: Vec<CorpusSpec> =
        serde_json::from_slice(&bytes).map_err(|e| Failure::input(format!("malformed corpus spec: {e}")))?;
    let entries = run_corpus(&specs);
    let passed = entries.iter().all(|e| e.passed());
    Ok(Outcome {
        text: render::pretty(&entries),
        code: if passed { 0 } else { EXIT_CHECK_FAILED },
    })
}

fn generate(
    n: usize,
    s: usize,
    kind: ModelKind,
    p: Option<f64>,
    seed: u64,
    output: Option<&Path>,
) -> Result<Outcome, Failure> {
    let model = match (kind, p) {
        (ModelKind::Gnp, Some(p)) => GraphModel::Gnp { p },
        (ModelKind::Gnp, None) => return Err(Failure::input("--model gnp needs --p")),
        (_, Some(_)) => return Err(Failure::input("--p only applies to --model gnp")),
        (ModelKind::Tree, None) => GraphModel::Tree,
        (ModelKind::Cycle, None) => GraphModel::Cycle,
        (ModelKind::Complete, None) => GraphModel::Complete,
    };
    let graph = random_graph(n, s, model, seed).map_err(|e| match e {
        GraphError::RetryCapExceeded { .. } => Failure::numeric(e),
        other => Failure::input(other),
    })?;
    let mut json = graph.to_json();
    json.push('\n');
    match output {
        Some(path) => {
            fs::write(path, json).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
            Ok(Outcome {
                text: String::new(),
                code: 0,
            })
        }
        None => Ok(Outcome { text: json, code: 0 }),
    }
}
