// Copyright 2026 The latsum Authors
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

//! Command-line front end. Exit codes: 0 success, 1 usage or domain error,
//! 2 numeric or resource failure, 3 comparison mismatch.

pub mod args;
pub mod commands;
pub mod emit;

use std::ffi::OsString;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, Format};
pub use emit::Report;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    if err.is_usage() {
        EXIT_USAGE
    } else {
        EXIT_NUMERIC
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, Error> {
    let threads = cli.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return Ok(EXIT_NUMERIC);
        }
    };
    let (report, code) = pool.install(|| -> Result<(Report, i32), Error> {
        Ok(match &cli.command {
            Command::Shells(a) => (commands::run_shells(a)?, EXIT_OK),
            Command::Sum(a) => (commands::run_sum(a)?, EXIT_OK),
            Command::Oracle(a) => (commands::run_oracle(a)?, EXIT_OK),
            Command::Compare(a) => {
                let (report, pass) = commands::run_compare(a)?;
                (report, if pass { EXIT_OK } else { EXIT_MISMATCH })
            }
        })
    })?;
    let timestamp = if cli.no_timestamp {
        None
    } else {
        SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
    };
    let text = report.render(cli.format, timestamp);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return Ok(EXIT_NUMERIC);
    }
    Ok(code)
}
