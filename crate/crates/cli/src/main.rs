use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gauss_ent_cli::{main_with, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_with(&cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            if cli.out.is_none() || cli.dump_config {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(out.text.as_bytes()).is_err() {
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
