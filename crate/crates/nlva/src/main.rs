use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nlva::construct;
use nlva::suite::{parse_window, QChoice, Suite, SuiteOptions};
use nlva::{run_suite, AlgebraFile, CliError, CliResult, SuiteReport};
use nlva_core::operator_space::ClosureOptions;

#[derive(Parser)]
#[command(name = "nlva", version, about = "Exact checks for finite-dimensional vertex algebra data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite on an algebra file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        closure: ClosureArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build a new algebra file.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        /// Output path; stdout when omitted.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Close a set of vertex operators under all n-th products.
    Closure {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        closure: ClosureArgs,
        /// Also write the closed algebra as an algebra file.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Render a saved JSON report.
    Report {
        file: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    Tensor {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
    },
    Matrix {
        file: PathBuf,
        #[arg(long)]
        size: usize,
        /// Attach the column module W^n.
        #[arg(long)]
        with_module: bool,
    },
    Twist {
        file: PathBuf,
    },
    Cross {
        file: PathBuf,
    },
    FromAssoc {
        file: PathBuf,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Largest k or l tried by the order searches.
    #[arg(long, default_value_t = 8)]
    bound: i64,
    /// Exponent window: `lo:hi`, or `x0=lo:hi,x1=lo:hi,x2=lo:hi`.
    #[arg(long, default_value = "-6:6", allow_hyphen_values = true)]
    window: String,
    /// Scalar for q-locality and q-Jacobi: a rational, or `from-cocycle`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    q: String,
}

#[derive(Args)]
struct ClosureArgs {
    /// Product indices `lo:hi` used by the closure.
    #[arg(long, allow_hyphen_values = true)]
    n_range: Option<String>,
    #[arg(long, default_value_t = 64)]
    dim_cap: usize,
    #[arg(long, default_value_t = 8)]
    depth_cap: usize,
    /// Use the local n-th product instead of the reordering one.
    #[arg(long)]
    local: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_n_range(s: &str) -> CliResult<(i64, i64)> {
    let bad = || CliError::Usage(format!("--n-range `{s}` is not lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (i64, i64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn options(search: &SearchArgs, closure: &ClosureArgs) -> CliResult<SuiteOptions> {
    Ok(SuiteOptions {
        bound: search.bound,
        window: parse_window(&search.window)?,
        q: QChoice::parse(&search.q)?,
        closure: ClosureOptions {
            n_range: closure.n_range.as_deref().map(parse_n_range).transpose()?,
            dim_cap: closure.dim_cap,
            depth_cap: closure.depth_cap,
            bound: search.bound,
            local: closure.local,
        },
    })
}

fn write_out(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn target_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn emit_report(report: &SuiteReport, out: &OutputArgs) -> CliResult<ExitCode> {
    let text = match out.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    write_out(out.output.as_deref(), &text)?;
    Ok(if report.has_failures() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Check { file, suite, search, closure, out } => {
            let opts = options(&search, &closure)?;
            let report = run_suite(&target_name(&file), &AlgebraFile::read(&file)?, suite, &opts)?;
            emit_report(&report, &out)
        }
        Command::Construct { kind, output } => {
            let built = match kind {
                ConstructKind::Tensor { files } => {
                    construct::tensor(&files.iter().map(|f| AlgebraFile::read(f)).collect::<CliResult<Vec<_>>>()?)?
                }
                ConstructKind::Matrix { file, size, with_module } => {
                    construct::matrix(&AlgebraFile::read(&file)?, size, with_module)?
                }
                ConstructKind::Twist { file } => construct::twist(&AlgebraFile::read(&file)?)?,
                ConstructKind::Cross { file } => construct::cross(&AlgebraFile::read(&file)?)?,
                ConstructKind::FromAssoc { file } => construct::from_assoc(&AlgebraFile::read(&file)?)?,
            };
            write_out(output.as_deref(), &built.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Closure { file, search, closure, emit, out } => {
            let opts = options(&search, &closure)?;
            let report = run_suite(&target_name(&file), &AlgebraFile::read(&file)?, Suite::Closure, &opts)?;
            if let Some(path) = emit {
                let alg = report.closure.as_ref().and_then(|c| c.algebra.as_ref()).ok_or_else(|| {
                    CliError::Usage("the closure did not close; nothing to emit".into())
                })?;
                write_out(Some(&path), &alg.to_json())?;
            }
            emit_report(&report, &out)
        }
        Command::Report { file, out } => {
            let text = std::fs::read_to_string(&file).map_err(|source| CliError::Io { path: file.clone(), source })?;
            let report = SuiteReport::parse_json(&text)
                .map_err(|e| CliError::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
            emit_report(&report, &out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
