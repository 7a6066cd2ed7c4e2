use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use povmkit_cli::args::Cli;
use povmkit_cli::batch::execute;
use povmkit_cli::error::{EXIT_INVALID, EXIT_OK};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            return ExitCode::from(code as u8);
        }
    };
    match execute(&cli) {
        Ok((code, text)) => {
            if let Some(text) = text {
                print!("{text}");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("povmkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
