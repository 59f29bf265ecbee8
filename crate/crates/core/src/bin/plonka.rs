use std::process::ExitCode;

use clap::Parser;
use plonka::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = run(&cli.command);
    print!("{}", report.render(cli.machine));
    ExitCode::from(report.exit_code as u8)
}
