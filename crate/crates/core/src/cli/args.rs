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

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "latsum", version, about = "Generalized Madelung constants M_{a,s}")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; 0 or unset uses all cores.
    #[arg(long, env = "LATSUM_THREADS", global = true)]
    pub threads: Option<usize>,
    /// Omit the timestamp from metadata.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the shell counts r_d(n) for n = 0..=max_n.
    Shells(ShellsArgs),
    /// Evaluate one summation method.
    Sum(SumArgs),
    /// Evaluate the periodized Green function M_{a,s}(x).
    Oracle(OracleArgs),
    /// Evaluate several methods at shared parameters and check agreement.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct ShellsArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub max_n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Plain,
    Cesaro,
    Blocks,
    Greens,
}

#[derive(Debug, Args)]
pub struct SumArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    /// Riesz order; required for `cesaro`.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Largest cutoff N for `plain` and `cesaro`.
    #[arg(long, default_value_t = 5000)]
    pub max_n: usize,
    /// Lattice dimension for `plain` and `cesaro`.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Emit every partial sum N = 1..=max_n.
    #[arg(long)]
    pub series: bool,
    /// Evaluation point; `plain` and `cesaro` then sum the Fourier series at x.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x: Option<[f64; 3]>,
    /// Tolerance for `blocks` (tail bound) and `greens` with a > 0.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Node radius for `greens` with a = 0.
    #[arg(long, default_value_t = 200)]
    pub radius: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x: Option<[f64; 3]>,
    /// Node radius, used when a = 0.
    #[arg(long, default_value_t = 200)]
    pub radius: usize,
    /// Truncation tolerance, used when a > 0.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    /// Comma-separated list of plain, cesaro<k>, blocks, greens.
    #[arg(long, value_delimiter = ',', value_parser = parse_compare_method)]
    pub methods: Vec<CompareMethod>,
    /// Cutoff N for the sphere methods.
    #[arg(long, default_value_t = 5000)]
    pub max_n: usize,
    /// Largest accepted pairwise deviation.
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
    /// Tail-bound target for `blocks`; defaults to `--tol`.
    #[arg(long)]
    pub block_tol: Option<f64>,
    /// Node radius for `greens` with a = 0.
    #[arg(long, default_value_t = 200)]
    pub radius: usize,
    /// Truncation tolerance for `greens` with a > 0.
    #[arg(long, default_value_t = 1e-8)]
    pub greens_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompareMethod {
    Cesaro(f64),
    Blocks,
    Greens,
}

impl CompareMethod {
    pub fn label(&self) -> String {
        match self {
            CompareMethod::Cesaro(k) if *k == 0.0 => "plain".into(),
            CompareMethod::Cesaro(k) => format!("cesaro{k}"),
            CompareMethod::Blocks => "blocks".into(),
            CompareMethod::Greens => "greens".into(),
        }
    }
}

pub fn parse_compare_method(token: &str) -> std::result::Result<CompareMethod, String> {
    match token.trim() {
        "plain" => Ok(CompareMethod::Cesaro(0.0)),
        "blocks" => Ok(CompareMethod::Blocks),
        "greens" => Ok(CompareMethod::Greens),
        t => match t.strip_prefix("cesaro") {
            Some(k) => match k.parse::<f64>() {
                Ok(k) if k >= 0.0 && k.is_finite() => Ok(CompareMethod::Cesaro(k)),
                _ => Err(format!("bad Riesz order in `{t}`")),
            },
            None => Err(format!("unknown method `{t}`; use plain, cesaro<k>, blocks or greens")),
        },
    }
}

/// Parses one coordinate: a float, or `[±][c[*]]pi[/d]`.
pub fn parse_angle(token: &str) -> Result<f64> {
    let bad = || Error::domain(format!("cannot parse coordinate `{token}`"));
    let t = token.trim();
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let head = t[..pos].trim_end_matches('*');
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let tail = &t[pos + 2..];
    let den = match tail {
        "" => 1.0,
        d => d.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    let v = coef * std::f64::consts::PI / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_point(arg: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = arg.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated coordinates, got `{arg}`"));
    }
    let mut x = [0.0; 3];
    for (slot, p) in x.iter_mut().zip(parts) {
        *slot = parse_angle(p).map_err(|e| e.to_string())?;
    }
    Ok(x)
}
