//! Command-line front end: argument parsing, report rendering and exit codes.

pub mod args;
pub mod commands;
pub mod report;

use std::ffi::OsString;

use carlitz_core::Error;
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Format};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::Domain(_) => EXIT_USAGE,
        Error::Precision { .. } | Error::Capacity(_) | Error::Convergence(_) => EXIT_PRECISION,
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_PASS,
                    stdout: text,
                    ..Default::default()
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stderr: text,
                    ..Default::default()
                },
            };
        }
    };
    let threads = cli.global.threads.unwrap_or(1);
    if threads == 0 {
        return Outcome {
            code: EXIT_USAGE,
            stderr: "error: threads must be at least 1\n".into(),
            ..Default::default()
        };
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            return Outcome {
                code: EXIT_USAGE,
                stderr: format!("error: cannot start {threads} threads: {e}\n"),
                ..Default::default()
            }
        }
    };
    let envelope = match pool.install(|| commands::execute(&cli.global, &cli.command)) {
        Ok(env) => env,
        Err(e) => {
            return Outcome {
                code: error_code(&e),
                stderr: format!("error: {e}\n"),
                ..Default::default()
            }
        }
    };
    let body = match cli.global.format {
        Format::Json => envelope.to_json(),
        Format::Text => envelope.to_text(),
    };
    if let Some(path) = &cli.global.out {
        if let Err(e) = std::fs::write(path, &body) {
            return Outcome {
                code: EXIT_USAGE,
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
                ..Default::default()
            };
        }
    }
    Outcome {
        code: if envelope.result.pass { EXIT_PASS } else { EXIT_FAIL },
        stdout: body,
        stderr: String::new(),
    }
}
