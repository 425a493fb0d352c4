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

use latsum::error::Error;
use latsum::shellcount::{build_shell_table, build_shell_table_with_limit};

fn brute_counts(dim: usize, max_n: usize) -> Vec<u64> {
    let r = (max_n as f64).sqrt() as i64 + 1;
    let mut counts = vec![0u64; max_n + 1];
    let side = (2 * r + 1) as usize;
    let total = side.pow(dim as u32);
    for mut idx in 0..total {
        let mut n = 0i64;
        for _ in 0..dim {
            let c = (idx % side) as i64 - r;
            idx /= side;
            n += c * c;
        }
        if (n as usize) <= max_n {
            counts[n as usize] += 1;
        }
    }
    counts
}

fn is_excluded_form(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % 4 == 0 {
        n /= 4;
    }
    n % 8 == 7
}

#[test]
fn matches_brute_force_up_to_dim_four() {
    for dim in 1..=4 {
        let table = build_shell_table(dim, 200).unwrap();
        assert_eq!(table.counts(), brute_counts(dim, 200).as_slice(), "dim {dim}");
    }
}

#[test]
fn three_square_zero_pattern() {
    let table = build_shell_table(3, 10_000).unwrap();
    for n in 0..=10_000usize {
        assert_eq!(table.get(n).unwrap() == 0, is_excluded_form(n as u64), "n = {n}");
    }
}

#[test]
fn counts_are_even_past_zero() {
    for dim in 1..=5 {
        let table = build_shell_table(dim, 300).unwrap();
        assert_eq!(table.get(0), Some(1));
        assert!(table.counts()[1..].iter().all(|c| c % 2 == 0));
    }
}

#[test]
fn ball_count_matches_brute_force() {
    let table = build_shell_table(3, 150).unwrap();
    let brute = brute_counts(3, 150);
    let mut acc = 0;
    for n in 0..=150 {
        acc += brute[n];
        assert_eq!(table.ball_count(n).unwrap(), acc);
    }
    assert_eq!(table.ball_count(9).unwrap(), 123);
}

#[test]
fn gauss_ball_bound() {
    let table = build_shell_table(3, 5000).unwrap();
    let mut worst: f64 = 0.0;
    for n in 1..=5000usize {
        let vol = 4.0 / 3.0 * std::f64::consts::PI * (n as f64).powf(1.5);
        let dev = (table.ball_count(n).unwrap() as f64 - vol).abs();
        worst = worst.max(dev / n as f64);
    }
    assert!(worst <= 20.0, "worst ratio {worst}");
}

#[test]
fn convolution_with_two_squares() {
    for dim in [3usize, 4] {
        let lower = build_shell_table(dim - 2, 500).unwrap();
        let two = build_shell_table(2, 500).unwrap();
        let table = build_shell_table(dim, 500).unwrap();
        for n in 0..=500 {
            let conv: u64 = (0..=n).map(|m| lower.counts()[m] * two.counts()[n - m]).sum();
            assert_eq!(table.counts()[n], conv, "dim {dim}, n {n}");
        }
    }
}

#[test]
fn large_shells_exist() {
    let table = build_shell_table(3, 5000).unwrap();
    let big = table.find_large_shells(2.0).unwrap();
    assert!(big.contains(&5));
    let max_ratio = (1..=5000).map(|n| table.counts()[n] as f64 / (n as f64).sqrt()).fold(0.0, f64::max);
    assert!(max_ratio >= 2.0);
}

#[test]
fn resource_ceiling() {
    assert!(matches!(
        build_shell_table_with_limit(3, 1000, 10),
        Err(Error::ResourceLimit { .. })
    ));
    assert_eq!(build_shell_table(0, 10).unwrap_err(), Error::InvalidDimension(0));
}
