use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use copolarity::cli::{self, Cli, CliError};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let args = Cli::parse();
    match cli::run(args) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.report).expect("JSON value");
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            eprintln!("{}", out.summary);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::EXIT_CODE)
        }
    }
}
