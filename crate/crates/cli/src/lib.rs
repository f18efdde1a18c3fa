//! Command-line driver for `graphspread`.
//!
//! Every command that writes a file also writes `<file>.manifest.json`
//! recording the arguments, seed and parameters; `graphspread replay` re-runs
//! a manifest and reproduces the outputs byte for byte.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command};
pub use error::{exit, CliError, CliResult};
pub use output::RunManifest;

/// Parses `args` (without the program name) and runs the command.
pub fn run(args: &[String], stdout: &mut dyn Write) -> CliResult<()> {
    let argv = std::iter::once(OsString::from("graphspread")).chain(args.iter().map(OsString::from));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return write!(stdout, "{e}").map_err(|e| CliError::Io(format!("stdout: {e}")));
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    match cli.command {
        Command::Curve(a) => commands::cmd_curve(&a, args, stdout),
        Command::MeanCurve(a) => commands::cmd_mean_curve(&a, args, stdout),
        Command::Spread(a) => commands::cmd_spread(&a, stdout),
        Command::ImageCurve(a) => commands::cmd_image_curve(&a, args),
        Command::Replay(a) => {
            let manifest = RunManifest::read(&a.manifest)?;
            let replayed = match &a.out {
                Some(out) => manifest.command_line_with_out(out),
                None => manifest.command_line.clone(),
            };
            if replayed.first().map(String::as_str) == Some("replay") {
                return Err(CliError::Usage("a manifest cannot replay another replay".into()));
            }
            run(&replayed, stdout)
        }
    }
}
