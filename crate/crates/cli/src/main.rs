use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mpgql_cli::{cmd_query, cmd_validate, OutputFormat, Repl, EXIT_INPUT};

/// Query meta-property graphs.
#[derive(Parser)]
#[command(name = "mpgql", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph document and list every violated constraint.
    Validate { file: PathBuf },
    /// Run one query against a graph document.
    Query {
        file: PathBuf,
        #[command(flatten)]
        source: QuerySource,
        #[arg(long, value_enum, env = "MPGQL_FORMAT", default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Interactive session over a graph document.
    Repl {
        file: PathBuf,
        #[arg(long, value_enum, env = "MPGQL_FORMAT", default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct QuerySource {
    /// Query text.
    #[arg(short = 'q', long = "query")]
    query: Option<String>,
    /// File holding the query.
    #[arg(short = 'f', long = "query-file")]
    query_file: Option<PathBuf>,
}

fn run(cli: Cli) -> io::Result<i32> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut err = io::stderr();
    let code = match cli.command {
        Command::Validate { file } => cmd_validate(&file, &mut out, &mut err)?,
        Command::Query { file, source, format } => {
            let text = match (source.query, source.query_file) {
                (Some(q), _) => q,
                (None, Some(path)) => match std::fs::read_to_string(&path) {
                    Ok(t) => t,
                    Err(e) => {
                        writeln!(err, "{}: {e}", path.display())?;
                        return Ok(EXIT_INPUT);
                    }
                },
                (None, None) => unreachable!("clap requires one query source"),
            };
            cmd_query(&file, &text, format, &mut out, &mut err)?
        }
        Command::Repl { file, format } => match Repl::open(&file, format) {
            Ok(mut repl) => {
                repl.run(&mut io::stdin().lock(), &mut out)?;
                0
            }
            Err((code, msg)) => {
                writeln!(err, "{msg}")?;
                code
            }
        },
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mpgql: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
