use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use shiftrad_cli::{commands, Cli, EXIT_CROSS_CHECK, EXIT_IO};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            if let Err(e) = writeln!(io::stdout().lock(), "{}", out.stdout) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: cannot write to stdout: {e}");
                    return ExitCode::from(EXIT_IO);
                }
            }
            if out.mismatch {
                eprintln!("warning: a cross-check exceeded its tolerance");
                ExitCode::from(EXIT_CROSS_CHECK)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
