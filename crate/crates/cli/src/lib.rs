//! Batch command-line surface over `idm-core`: JSON model files, structured
//! reports, and one subcommand per library operation.
//!
//! Exit codes: 0 for success or a positive verdict, 1 for a definite negative
//! verdict, 2 for usage, parse and model errors.

pub mod args;
pub mod commands;
pub mod error;
pub mod model_file;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;

pub use args::{Cli, Command, Format};
pub use error::{CliError, CliResult};
pub use model_file::ModelFile;
pub use report::{ReportFile, EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK};

use commands::{execute, Output};

fn emit(text: &str, out: Option<&std::path::Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn run_command(cli: Cli) -> CliResult<i32> {
    let start = Instant::now();
    let (output, opts) = execute(cli.command)?;
    match output {
        Output::Model(file) => {
            emit(&(serde_json::to_string_pretty(&file)? + "\n"), opts.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Output::Report(mut rep) => {
            rep.timing_ms = start.elapsed().as_millis() as u64;
            let text = match opts.format {
                Format::Report => serde_json::to_string_pretty(&rep)? + "\n",
                Format::Tsv => rep.to_tsv(),
            };
            emit(&text, opts.out.as_deref())?;
            Ok(rep.exit_code)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match run_command(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
