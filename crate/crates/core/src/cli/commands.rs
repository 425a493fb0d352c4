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

use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use super::args::{CompareArgs, CompareMethod, Method, OracleArgs, ShellsArgs, SumArgs};
use super::emit::{Cell, Report};
use crate::error::{Error, Result};
use crate::greens::{periodized_green, periodized_green_zero_a, GreenEvaluation, KernelParams};
use crate::rectangles::block_global_sum;
use crate::series::{
    build_phase_shells, cesaro_series, fourier_cesaro_series, PartialSumSeries, SumParams,
};
use crate::shellcount::build_shell_table;

const CANONICAL_X: [f64; 3] = [PI, PI, PI];

fn params_map(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("tolerance must be positive, got {tol}")))
    }
}

fn greens_eval(a: f64, s: f64, x: [f64; 3], radius: usize, tol: f64) -> Result<GreenEvaluation> {
    if a == 0.0 {
        periodized_green_zero_a(s, x, radius)
    } else {
        check_tol(tol)?;
        periodized_green(&KernelParams::new(a, s)?, x, tol)
    }
}

pub fn run_shells(args: &ShellsArgs) -> Result<Report> {
    let table = build_shell_table(args.dim, args.max_n)?;
    let rows = table
        .counts()
        .iter()
        .enumerate()
        .map(|(n, &c)| vec![Cell::from(n), Cell::from(c)])
        .collect();
    Ok(Report {
        subcommand: "shells",
        params: params_map(&[("dim", json!(args.dim)), ("max_n", json!(args.max_n))]),
        header: vec!["n", "count"],
        rows,
        result: json!({ "counts": table.counts() }),
    })
}

fn sphere_series(args: &SumArgs, kappa: f64) -> Result<PartialSumSeries<f64>> {
    if args.max_n == 0 {
        return Err(Error::domain("max-n must be at least 1"));
    }
    let params = SumParams::with_dim(args.a, args.s, args.dim)?;
    match args.x {
        None => {
            let table = build_shell_table(args.dim, args.max_n)?;
            cesaro_series(&table, &params, kappa, args.max_n)
        }
        Some(x) => {
            if args.dim != 3 {
                return Err(Error::InvalidDimension(args.dim));
            }
            let phase = build_phase_shells(x, args.max_n)?;
            fourier_cesaro_series(&phase, &params, kappa, args.max_n)
        }
    }
}

pub fn run_sum(args: &SumArgs) -> Result<Report> {
    match args.method {
        Method::Plain | Method::Cesaro => {
            let kappa = match (args.method, args.kappa) {
                (Method::Plain, None) | (Method::Plain, Some(0.0)) => 0.0,
                (Method::Plain, Some(_)) => {
                    return Err(Error::domain("plain summation takes no --kappa (it is kappa = 0)"))
                }
                (_, Some(k)) => k,
                (_, None) => return Err(Error::domain("--kappa is required for --method cesaro")),
            };
            let series = sphere_series(args, kappa)?;
            let method = if kappa == 0.0 { "plain" } else { "cesaro" };
            let mut meta = vec![
                ("method", json!(method)),
                ("a", json!(args.a)),
                ("s", json!(args.s)),
                ("kappa", json!(kappa)),
                ("dim", json!(args.dim)),
                ("max_n", json!(args.max_n)),
            ];
            if let Some(x) = args.x {
                meta.push(("x", json!(x)));
            }
            let values = series.values();
            let (rows, result) = if args.series {
                let rows = values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| vec![Cell::from(i + 1), Cell::from(v)])
                    .collect();
                (rows, json!({ "values": values }))
            } else {
                let last = *values.last().expect("max_n >= 1");
                (vec![vec![Cell::from(args.max_n), Cell::from(last)]], json!({ "N": args.max_n, "value": last }))
            };
            Ok(Report {
                subcommand: "sum",
                params: params_map(&meta),
                header: vec!["N", "value"],
                rows,
                result,
            })
        }
        Method::Blocks => {
            if args.series {
                return Err(Error::domain("--series applies to plain and cesaro only"));
            }
            check_tol(args.tol)?;
            let params = SumParams::new(args.a, args.s)?;
            let b = block_global_sum(&params, args.tol)?;
            Ok(Report {
                subcommand: "sum",
                params: params_map(&[
                    ("method", json!("blocks")),
                    ("a", json!(args.a)),
                    ("s", json!(args.s)),
                    ("tol", json!(args.tol)),
                ]),
                header: vec!["value", "tail_bound", "radius"],
                rows: vec![vec![b.value.into(), b.tail_bound.into(), b.radius.into()]],
                result: json!({ "value": b.value, "tail_bound": b.tail_bound, "radius": b.radius }),
            })
        }
        Method::Greens => {
            if args.series {
                return Err(Error::domain("--series applies to plain and cesaro only"));
            }
            let x = args.x.unwrap_or(CANONICAL_X);
            let g = greens_eval(args.a, args.s, x, args.radius, args.tol)?;
            Ok(oracle_report(
                "sum",
                vec![("method", json!("greens")), ("a", json!(args.a)), ("s", json!(args.s))],
                &g,
            ))
        }
    }
}

fn oracle_report(subcommand: &'static str, mut meta: Vec<(&str, Value)>, g: &GreenEvaluation) -> Report {
    meta.push(("x", json!(g.x)));
    Report {
        subcommand,
        params: params_map(&meta),
        header: vec!["value", "radius", "error_estimate"],
        rows: vec![vec![g.value.into(), g.truncation_radius.into(), g.error_estimate.into()]],
        result: json!({
            "value": g.value,
            "radius": g.truncation_radius,
            "error_estimate": g.error_estimate,
        }),
    }
}

pub fn run_oracle(args: &OracleArgs) -> Result<Report> {
    let x = args.x.unwrap_or(CANONICAL_X);
    let g = greens_eval(args.a, args.s, x, args.radius, args.tol)?;
    let mut meta = vec![("a", json!(args.a)), ("s", json!(args.s))];
    if args.a == 0.0 {
        meta.push(("radius", json!(args.radius)));
    } else {
        meta.push(("tol", json!(args.tol)));
    }
    Ok(oracle_report("oracle", meta, &g))
}

/// Returns the report and whether every pairwise deviation is within tolerance.
pub fn run_compare(args: &CompareArgs) -> Result<(Report, bool)> {
    if args.methods.len() < 2 {
        return Err(Error::domain("compare needs at least two methods"));
    }
    check_tol(args.tol)?;
    let block_tol = args.block_tol.unwrap_or(args.tol);
    check_tol(block_tol)?;
    if args.max_n == 0 {
        return Err(Error::domain("max-n must be at least 1"));
    }
    let params = SumParams::new(args.a, args.s)?;
    let needs_table = args.methods.iter().any(|m| matches!(m, CompareMethod::Cesaro(_)));
    let table = if needs_table { Some(build_shell_table(3, args.max_n)?) } else { None };

    let mut values = Vec::with_capacity(args.methods.len());
    for m in &args.methods {
        let v = match *m {
            CompareMethod::Cesaro(kappa) => {
                let table = table.as_ref().expect("built above");
                let series = cesaro_series(table, &params, kappa, args.max_n)?;
                *series.values().last().expect("max_n >= 1")
            }
            CompareMethod::Blocks => block_global_sum(&params, block_tol)?.value,
            CompareMethod::Greens => greens_eval(args.a, args.s, CANONICAL_X, args.radius, args.greens_tol)?.value,
        };
        values.push((m.label(), v));
    }

    let mut rows = Vec::new();
    let mut pairs = Vec::new();
    let mut all_pass = true;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let (ref l, lv) = values[i];
            let (ref r, rv) = values[j];
            let dev = (lv - rv).abs();
            let pass = dev <= args.tol;
            all_pass &= pass;
            rows.push(vec![
                Cell::from(l.as_str()),
                Cell::from(r.as_str()),
                lv.into(),
                rv.into(),
                dev.into(),
                pass.into(),
            ]);
            pairs.push(json!({ "left": l, "right": r, "deviation": dev, "pass": pass }));
        }
    }
    let labels: Vec<&str> = values.iter().map(|(l, _)| l.as_str()).collect();
    let value_map: Map<String, Value> = values.iter().map(|(l, v)| (l.clone(), json!(v))).collect();
    let report = Report {
        subcommand: "compare",
        params: params_map(&[
            ("a", json!(args.a)),
            ("s", json!(args.s)),
            ("methods", json!(labels.join(";"))),
            ("max_n", json!(args.max_n)),
            ("tol", json!(args.tol)),
            ("block_tol", json!(block_tol)),
        ]),
        header: vec!["left", "right", "left_value", "right_value", "deviation", "pass"],
        rows,
        result: json!({ "values": value_map, "pairs": pairs, "pass": all_pass }),
    };
    Ok((report, all_pass))
}
