//! `hadj`: adjoints of rational composition operators on H².
//!
//! Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 certification
//! or numerical failure, 4 continuation path error.

mod commands;
mod input;
mod verify;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hardy_adjoint::adjoint::Form;
use hardy_adjoint::regularity::DecompositionForm;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Parse(String),
    Certification(String),
    Numeric(String),
    Path(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Certification(_) | Failure::Numeric(_) => 3,
            Failure::Path(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m)
            | Failure::Parse(m)
            | Failure::Certification(m)
            | Failure::Numeric(m)
            | Failure::Path(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "hadj", version, about = "Adjoints of rational composition operators on the Hardy space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MapArgs {
    /// Builtin map name, e.g. example-4.1 or family-5.3:d=4
    map: Option<String>,
    /// JSON map file {"num": [[re,im],...], "den": [...]}; `-` reads stdin
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    /// JSON output (default)
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// CSV output
    #[arg(long)]
    csv: bool,
    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Thm,
    Cor,
    Bs,
    Auto,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Thm => Form::Thm,
            FormArg::Cor => Form::Cor,
            FormArg::Bs => Form::Bs,
            FormArg::Auto => Form::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DecompositionArg {
    Bs,
    Weighted,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, critical data, classification, boundary contacts
    Analyze {
        #[command(flatten)]
        map: MapArgs,
        /// Also build the branch atlas and report these decompositions
        #[arg(long, value_enum)]
        decomposition: Option<DecompositionArg>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the adjoint of a polynomial on a grid, next to the series reference
    Eval {
        #[command(flatten)]
        map: MapArgs,
        /// Coefficients of f as JSON ([1, [0, 2], ...]) or @path
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, value_enum, default_value = "auto")]
        form: FormArg,
        /// AxR polar grid: A angles on R circles up to --rmax
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 0.95)]
        rmax: f64,
        /// Extra point re,im (repeatable)
        #[arg(long = "z", value_parser = input::parse_complex, allow_hyphen_values = true)]
        points: Vec<Complex64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the invariant suites on random inputs
    Verify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance for the formula comparisons
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Branch permutation of the exterior map around a circle
    Monodromy {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = input::parse_complex, allow_hyphen_values = true)]
        center: Complex64,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 256)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn sink(out: &OutputArgs) -> Result<Box<dyn Write>, Failure> {
    Ok(match &out.out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(out: &OutputArgs, value: &T) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Numeric(e.to_string()))?;
    writeln!(w).map_err(|e| Failure::Numeric(e.to_string()))
}

fn emit_csv<T: Serialize>(out: &OutputArgs, rows: impl IntoIterator<Item = T>) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    for row in rows {
        w.serialize(row).map_err(|e| Failure::Numeric(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::Numeric(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { map, decomposition, output } => {
            if output.csv {
                return Err(Failure::Parse("analyze produces nested reports; use --json".into()));
            }
            let m = input::load_map(map.map.as_deref(), map.input.as_deref())?;
            let forms: &[DecompositionForm] = match decomposition {
                None => &[],
                Some(DecompositionArg::Bs) => &[DecompositionForm::BsForm],
                Some(DecompositionArg::Weighted) => &[DecompositionForm::WeightedForm],
                Some(DecompositionArg::Both) => &[DecompositionForm::BsForm, DecompositionForm::WeightedForm],
            };
            emit_json(&output, &commands::analyze(&m, forms)?)
        }
        Command::Eval { map, f, form, grid, rmax, points, output } => {
            let f = input::parse_function(&f)?;
            let mut zs = match &grid {
                Some(spec) => input::polar_grid(spec, rmax)?,
                None => Vec::new(),
            };
            zs.extend(points);
            if zs.is_empty() {
                return Err(Failure::Parse("no evaluation points (--grid or --z)".into()));
            }
            let m = input::load_map(map.map.as_deref(), map.input.as_deref())?;
            let rows = commands::eval(&m, &f, &zs, form.into());
            if output.csv {
                emit_csv(&output, rows.iter().map(commands::EvalCsvRow::from))?;
            } else {
                emit_json(&output, &rows)?;
            }
            if rows.iter().any(|r| r.value.is_some()) {
                Ok(())
            } else {
                Err(Failure::Path("no grid point could be evaluated".into()))
            }
        }
        Command::Verify { map, trials, seed, tol, output } => {
            let m = input::load_map(map.map.as_deref(), map.input.as_deref())?;
            let summary = verify::verify(&m, trials, seed, tol);
            if output.csv {
                emit_csv(&output, &summary.suites)?;
            } else {
                emit_json(&output, &summary)?;
            }
            if summary.passed {
                Ok(())
            } else {
                Err(Failure::Verification(format!("verification failed for {}", summary.name)))
            }
        }
        Command::Monodromy { map, center, radius, steps, output } => {
            let m = input::load_map(map.map.as_deref(), map.input.as_deref())?;
            let result = commands::run_monodromy(&m, center, radius, steps)?;
            if output.csv {
                emit_csv(&output, [commands::MonodromyCsvRow::from(&result)])
            } else {
                emit_json(&output, &result)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("hadj: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
