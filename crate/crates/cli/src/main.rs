use std::io::Write;
use std::process::ExitCode;

use cablefloer_cli::output::{Envelope, Status};
use cablefloer_cli::{run, Cli, CliError, Format};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    let mut stdout = std::io::stdout().lock();
    let code = match &result {
        Ok(_) => 0,
        Err(e) => e.exit_code(),
    };
    match cli.format {
        Format::Json => {
            let env = match &result {
                Ok(p) => Envelope { status: Status::Ok, payload: Some(p), error: None },
                Err(CliError::VerifyFailed(p)) => Envelope {
                    status: Status::VerificationFailed,
                    payload: Some(p),
                    error: Some("verification failed".into()),
                },
                Err(e @ CliError::Input(_)) => {
                    Envelope { status: Status::InputError, payload: None, error: Some(e.to_string()) }
                }
                Err(e @ CliError::Refused(_)) => {
                    Envelope { status: Status::ComputationRefused, payload: None, error: Some(e.to_string()) }
                }
            };
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&env).expect("payload serializes"));
        }
        Format::Table => match &result {
            Ok(p) => {
                let _ = write!(stdout, "{}", p.render_table());
            }
            Err(CliError::VerifyFailed(p)) => {
                let _ = write!(stdout, "{}", p.render_table());
                eprintln!("error: verification failed");
            }
            Err(e) => eprintln!("error: {e}"),
        },
    }
    ExitCode::from(code as u8)
}
