use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use quadtame_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = run(&cli);
    // A closed pipe downstream is not an error of ours.
    let _ = writeln!(std::io::stdout().lock(), "{}", r.stdout.trim_end_matches('\n'));
    if r.code != 0 {
        eprintln!("quadtame: exit status {}", r.code);
    }
    ExitCode::from(r.code as u8)
}
