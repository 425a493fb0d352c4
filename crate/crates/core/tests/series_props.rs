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

use latsum::series::{
    build_phase_shells, cesaro_series, cesaro_sum, fourier_cesaro_eval, series_from_terms, shell_terms,
    CesaroConfig, SumParams,
};
use latsum::shellcount::build_shell_table;
use proptest::prelude::*;

/// Direct `Σ (1 - n/N)^κ t_n` in plain floating point.
fn naive_mean(terms: &[f64], cutoff: usize, kappa: f64) -> f64 {
    (1..=cutoff)
        .map(|n| (1.0 - n as f64 / cutoff as f64).powf(kappa) * terms[n - 1])
        .sum()
}

fn brute_phase(x: [f64; 3], n: i64) -> (f64, f64) {
    let r = (n as f64).sqrt() as i64 + 1;
    let (mut re, mut im) = (0.0, 0.0);
    for i in -r..=r {
        for j in -r..=r {
            for k in -r..=r {
                if i * i + j * j + k * k == n {
                    let t = i as f64 * x[0] + j as f64 * x[1] + k as f64 * x[2];
                    re += t.cos();
                    im += t.sin();
                }
            }
        }
    }
    (re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn series_matches_direct_evaluation(
        a in 0.0f64..3.0,
        s in 0.2f64..2.5,
        kappa in prop::sample::select(vec![0.0, 1.0, 2.0, 3.0, 0.5, 1.7]),
        max_n in 1usize..400,
    ) {
        let table = build_shell_table(3, max_n).unwrap();
        let params = SumParams::new(a, s).unwrap();
        let series = cesaro_series(&table, &params, kappa, max_n).unwrap();
        let terms = shell_terms(&table, &params, max_n).unwrap();
        prop_assert_eq!(series.len(), max_n);
        for cutoff in 1..=max_n {
            let mass: f64 = terms[..cutoff].iter().map(|t| t.abs()).sum();
            let direct = naive_mean(&terms, cutoff, kappa);
            prop_assert!((series.values()[cutoff - 1] - direct).abs() <= 1e-12 * mass.max(1.0));
            prop_assert!(series.values()[cutoff - 1].is_finite());
        }
        let single = cesaro_sum(&table, &params, &CesaroConfig::new(kappa, max_n).unwrap()).unwrap();
        prop_assert!((single - *series.values().last().unwrap()).abs() <= 1e-12 * (1.0 + single.abs()));
    }

    #[test]
    fn last_term_has_zero_weight(kappa in 0.1f64..4.0, n in 2usize..200, bump in -50.0f64..50.0) {
        let terms: Vec<f64> = (1..=n).map(|k| if k % 2 == 0 { 1.0 } else { -0.5 } / k as f64).collect();
        let mut changed = terms.clone();
        *changed.last_mut().unwrap() += bump;
        let a = series_from_terms(&terms, kappa);
        let b = series_from_terms(&changed, kappa);
        prop_assert_eq!(a[n - 1], b[n - 1]);
    }

    #[test]
    fn phase_shells_at_symmetric_points(mask in 0u8..8, n in 0usize..60) {
        let x: [f64; 3] = std::array::from_fn(|i| if mask & (1 << i) != 0 { PI } else { 0.0 });
        let phase = build_phase_shells(x, 60).unwrap();
        let table = build_shell_table(3, 60).unwrap();
        let z = phase.sums()[n];
        prop_assert_eq!(z.im, 0.0);
        prop_assert!(z.re.abs() <= table.counts()[n] as f64);
        let (re, _) = brute_phase(x, n as i64);
        prop_assert!((z.re - re).abs() <= 1e-9);
    }
}

#[test]
fn phase_shells_match_brute_force_at_generic_point() {
    let x = [0.3, -1.1, 2.0];
    let phase = build_phase_shells(x, 40).unwrap();
    for n in 0..=40 {
        let (re, im) = brute_phase(x, n);
        let z = phase.sums()[n as usize];
        assert!((z.re - re).abs() < 1e-9 && (z.im - im).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn fourier_at_corner_equals_cesaro() {
    let table = build_shell_table(3, 500).unwrap();
    let phase = build_phase_shells([PI; 3], 500).unwrap();
    for (a, s) in [(0.0, 0.5), (1.0, 0.5), (2.0, 1.0), (0.5, 2.0)] {
        let params = SumParams::new(a, s).unwrap();
        for kappa in [0.0, 1.0, 2.0, 1.5] {
            for n in [1usize, 7, 100, 500] {
                let config = CesaroConfig::new(kappa, n).unwrap();
                let c = cesaro_sum(&table, &params, &config).unwrap();
                let f = fourier_cesaro_eval(&phase, &params, &config).unwrap();
                assert!((c - f).abs() <= 1e-12 * c.abs().max(1.0), "a={a} s={s} kappa={kappa} n={n}");
            }
        }
    }
}

#[test]
fn smoothing_is_monotone_in_kappa() {
    let table = build_shell_table(3, 5000).unwrap();
    let params = SumParams::new(0.0, 0.5).unwrap();
    let osc: Vec<f64> = [0.0, 1.0, 2.0]
        .iter()
        .map(|&k| cesaro_series(&table, &params, k, 5000).unwrap().window_oscillation(2500, 5000).unwrap())
        .collect();
    assert!(osc[0] >= osc[1] && osc[1] >= osc[2], "{osc:?}");
}

#[test]
fn absolute_regime_is_cauchy() {
    let table = build_shell_table(3, 20_000).unwrap();
    let params = SumParams::new(0.0f64, 2.0).unwrap();
    let series = cesaro_series(&table, &params, 0.0, 20_000).unwrap();
    let d: f64 = (series.at(10_000).unwrap() - series.at(20_000).unwrap()).abs();
    assert!(d <= 1e-2, "{d}");
}

#[test]
fn single_precision_tracks_double() {
    let table = build_shell_table(3, 2000).unwrap();
    let p64 = SumParams::new(0.0f64, 0.5).unwrap();
    let p32 = SumParams::new(0.0f32, 0.5).unwrap();
    let v64 = cesaro_series(&table, &p64, 2.0, 2000).unwrap();
    let v32 = cesaro_series(&table, &p32, 2.0f32, 2000).unwrap();
    let (a, b) = (v64.at(2000).unwrap(), v32.at(2000).unwrap() as f64);
    assert!((a - b).abs() < 1e-3, "{a} vs {b}");
}
