use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tracemon_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(&cli) {
        Ok(report) => {
            let _ = stdout.write_all(report.render(cli.json).as_bytes());
            match report.rejection {
                Some(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
