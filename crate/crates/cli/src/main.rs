use std::process::ExitCode;

use clap::Parser;
use kcs_cli::{run, Cli, EXIT_NUMERIC};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = match &cli.command {
        kcs_cli::Command::State(a) => a.output.out.clone(),
        kcs_cli::Command::Qsurface(a) => a.output.out.clone(),
        kcs_cli::Command::Squeeze(a) => a.output.out.clone(),
        kcs_cli::Command::Wigner(a) => a.output.out.clone(),
        kcs_cli::Command::Verify(a) => a.output.out.clone(),
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("kcs: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match out_path {
        Some(p) => std::fs::write(&p, &outcome.text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            use std::io::Write;
            match std::io::stdout().write_all(outcome.text.as_bytes()) {
                // reader closed early, e.g. `kcs squeeze | head`
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(|e| e.to_string()),
            }
        }
    };
    if let Err(e) = written {
        eprintln!("kcs: cannot write output: {e}");
        return ExitCode::from(EXIT_NUMERIC as u8);
    }
    ExitCode::from(outcome.exit_code as u8)
}
