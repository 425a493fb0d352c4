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

use latsum::rectangles::{
    block_decay_constant, block_global_sum, block_tail_bound, block_term, blocks_within_radius, rect_partial_sum,
    s_minus_e_defect, BlockIndex,
};
use latsum::series::{cesaro_series, SumParams};
use latsum::shellcount::build_shell_table;
use proptest::prelude::*;

/// Eight-corner sum written out by hand.
fn brute_block(idx: BlockIndex, a: f64, s: f64) -> f64 {
    let mut acc = 0.0;
    for x in [2 * idx.i, 2 * idx.i + 1] {
        for y in [2 * idx.j, 2 * idx.j + 1] {
            for z in [2 * idx.k, 2 * idx.k + 1] {
                if x == 0 && y == 0 && z == 0 {
                    continue;
                }
                let sign = if (x + y + z).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                acc += sign * (a * a + (x * x + y * y + z * z) as f64).powf(-s);
            }
        }
    }
    acc
}

fn corner_sq(c: i64) -> f64 {
    let m = if c >= 0 { 2 * c } else { -2 * c - 1 };
    (m * m) as f64
}

#[test]
fn decay_bound_and_octant_sign() {
    for s in [0.3f64, 0.5, 1.0, 1.4] {
        for a in [0.0f64, 1.0] {
            let params = SumParams::new(a, s).unwrap();
            let c = block_decay_constant(s);
            let r = 20i64;
            for i in -r..=r {
                for j in -r..=r {
                    for k in -r..=r {
                        let idx = BlockIndex::new(i, j, k);
                        let e = block_term(idx, &params).unwrap();
                        if !idx.contains_origin() {
                            let rho2 = corner_sq(i) + corner_sq(j) + corner_sq(k);
                            assert!(e.abs() <= c * (a * a + rho2).powf(-s - 1.5), "{idx:?} s={s} a={a}");
                            if i >= 0 && j >= 0 && k >= 0 {
                                assert!(e > 0.0, "{idx:?} s={s} a={a}");
                            }
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn block_term_matches_hand_sum(i in -30i64..30, j in -30i64..30, k in -30i64..30, a in 0.0f64..2.0, s in 0.1f64..2.0) {
        let params = SumParams::new(a, s).unwrap();
        let idx = BlockIndex::new(i, j, k);
        let e = block_term(idx, &params).unwrap();
        let b = brute_block(idx, a, s);
        prop_assert!((e - b).abs() <= 1e-14 * (1.0 + b.abs()));
    }

    #[test]
    fn block_term_is_permutation_invariant(i in -20i64..20, j in -20i64..20, k in -20i64..20, s in 0.1f64..2.0) {
        let params = SumParams::new(0.5, s).unwrap();
        let e = block_term(BlockIndex::new(i, j, k), &params).unwrap();
        for (p, q, r) in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            let f = block_term(BlockIndex::new(p, q, r), &params).unwrap();
            prop_assert!((e - f).abs() <= 1e-15 * (1.0 + e.abs()) + 1e-300);
        }
    }

    #[test]
    fn tail_bound_decreases(a in 0.0f64..2.0, s in 0.1f64..2.0, r in 1usize..200) {
        let params = SumParams::new(a, s).unwrap();
        let t0 = block_tail_bound(&params, r);
        let t1 = block_tail_bound(&params, r + 1);
        prop_assert!(t0 >= 0.0 && t1 < t0);
    }
}

#[test]
fn even_cube_regroups_into_blocks() {
    for (a, s) in [(0.0f64, 0.5f64), (1.0, 1.0), (0.3, 2.0)] {
        let params = SumParams::new(a, s).unwrap();
        for n in [1usize, 3, 6] {
            let e = 2 * n as i64;
            // Points of [-2n, 2n-1]^3.
            let mut direct = 0.0;
            for x in -e..e {
                for y in -e..e {
                    for z in -e..e {
                        if (x, y, z) != (0, 0, 0) {
                            let sign = if (x + y + z).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                            direct += sign * (a * a + (x * x + y * y + z * z) as f64).powf(-s);
                        }
                    }
                }
            }
            let full = rect_partial_sum(&params, 2 * n, 2 * n, 2 * n).unwrap();
            let defect = s_minus_e_defect(&params, n).unwrap();
            assert!((full - direct).abs() - defect <= 1e-12 * (1.0 + defect), "n={n}");
            assert!(((full - direct).abs() - defect).abs() <= 1e-12 * (1.0 + direct.abs()));
        }
    }
}

#[test]
fn absolute_regime_cross_method() {
    let params = SumParams::new(0.0f64, 2.0).unwrap();
    let blocks = block_global_sum(&params, 1e-6).unwrap();
    assert!(blocks.tail_bound <= 1e-6);
    let boxed = rect_partial_sum(&params, 60, 60, 60).unwrap();
    let table = build_shell_table(3, 10_000).unwrap();
    let sphere = *cesaro_series(&table, &params, 0.0, 10_000).unwrap().values().last().unwrap();
    // Plain sums at s = 2 carry an O(1/√N)-size oscillating tail; 1e-3 covers both.
    assert!((blocks.value - boxed).abs() <= 1e-3, "{} vs {}", blocks.value, boxed);
    assert!((blocks.value - sphere).abs() <= 1e-3, "{} vs {}", blocks.value, sphere);
    assert!((boxed - sphere).abs() <= 2e-3);
}

#[test]
fn block_radius_partial_sums_respect_tail() {
    let params = SumParams::new(1.0f64, 0.5).unwrap();
    let deep = blocks_within_radius(&params, 60).unwrap();
    for r in [5usize, 10, 20] {
        let v = blocks_within_radius(&params, r).unwrap();
        assert!((v - deep).abs() <= block_tail_bound(&params, r), "r={r}");
    }
}
