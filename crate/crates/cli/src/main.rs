use std::io::{stdout, Write};
use std::process::ExitCode;

use clap::Parser;
use simplex_tree_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = stdout().lock();
    let result = run(&cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stree: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
