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

//! Expanding-rectangle summation and the 2×2×2 block regrouping.
//!
//! A block `E_{I,J,K}` is the alternating sum of `(a² + |x|²)^{-s}` over the
//! eight lattice points of the cube `[2I, 2I+1] × [2J, 2J+1] × [2K, 2K+1]`.
//! Blocks decay like `|x|^{-2s-3}`, so the block series is absolutely
//! convergent and defines the reference value of `M_{a,s}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::compensated::{merge_ordered, CompensatedSum};
use crate::error::{Error, Result};
use crate::scalar::{parity_sign, Real};
use crate::series::SumParams;

/// Default cap on lattice points visited by [`rect_partial_sum`].
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 2_000_000_000;

/// Default largest Chebyshev block radius [`block_global_sum`] may reach.
pub const DEFAULT_MAX_BLOCK_RADIUS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BlockIndex {
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

impl BlockIndex {
    pub fn new(i: i64, j: i64, k: i64) -> Self {
        Self { i, j, k }
    }

    /// Chebyshev radius `max(|I|, |J|, |K|)`.
    pub fn radius(&self) -> u64 {
        self.i.unsigned_abs().max(self.j.unsigned_abs()).max(self.k.unsigned_abs())
    }

    pub fn contains_origin(&self) -> bool {
        self.i == 0 && self.j == 0 && self.k == 0
    }

    /// Squared distance from the origin to the nearest corner of the block cube.
    pub fn nearest_corner_sq(&self) -> u64 {
        [self.i, self.j, self.k]
            .iter()
            .map(|&c| nearest_coordinate(c).pow(2))
            .sum()
    }
}

/// Smallest `|x|` over `x ∈ {2c, 2c+1}`. Maps `Z` bijectively onto `N`.
#[inline]
fn nearest_coordinate(c: i64) -> u64 {
    if c >= 0 {
        2 * c as u64
    } else {
        2 * c.unsigned_abs() - 1
    }
}

/// Result of [`block_global_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockSum<T> {
    pub params: SumParams<T>,
    /// Blocks with Chebyshev radius `<= radius` are included.
    pub radius: usize,
    pub value: T,
    /// Rigorous bound on the sum of all omitted blocks.
    pub tail_bound: T,
}

/// `Σ (-1)^{i+j+k} f(i,j,k)` over the eight corners of block `idx`.
pub fn block_alternating_sum<T: Real, F: Fn(i64, i64, i64) -> T>(idx: BlockIndex, f: F) -> T {
    let mut acc = CompensatedSum::new();
    for di in 0..2 {
        for dj in 0..2 {
            for dk in 0..2 {
                let v = f(2 * idx.i + di, 2 * idx.j + dj, 2 * idx.k + dk);
                acc.add(parity_sign::<T>(di + dj + dk) * v);
            }
        }
    }
    acc.value()
}

fn check_dim<T: Real>(params: &SumParams<T>) -> Result<()> {
    if params.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: params.dim() });
    }
    Ok(())
}

#[inline]
fn point_term<T: Real>(params: &SumParams<T>, i: i64, j: i64, k: i64) -> T {
    if i == 0 && j == 0 && k == 0 {
        return T::zero();
    }
    let q = (i * i + j * j + k * k) as u64;
    params.kernel(T::count(q))
}

/// Block term `E_{I,J,K}(a, s)`; the origin is omitted from block `(0,0,0)`.
pub fn block_term<T: Real>(idx: BlockIndex, params: &SumParams<T>) -> Result<T> {
    check_dim(params)?;
    Ok(block_alternating_sum(idx, |i, j, k| point_term(params, i, j, k)))
}

/// Explicit constant `C_σ = 8/(3√3)·|σ(σ-1)(σ-2)|` at `σ = -s`.
///
/// `∂₁∂₂∂₃ (a² + |x|²)^σ = 8σ(σ-1)(σ-2) x₁x₂x₃ (a² + |x|²)^{σ-3}` and
/// `|x₁x₂x₃| <= (|x|/√3)³ <= (a² + |x|²)^{3/2} / (3√3)`, so the third mixed
/// derivative is bounded by `C_σ (a² + |x|²)^{σ-3/2}`. A block equals minus the
/// integral of that derivative over its unit cube.
pub fn block_decay_constant<T: Real>(s: T) -> T {
    let three = T::lit(3.0);
    T::lit(8.0) / (three * three.sqrt()) * s * (s + T::one()) * (s + T::lit(2.0))
}

/// Upper bound `C_σ (a² + ρ²)^{-s-3/2}` on `|E_{I,J,K}|`, with `ρ` the distance
/// to the nearest corner of the block cube. Not valid for the origin block.
pub fn block_decay_bound<T: Real>(idx: BlockIndex, params: &SumParams<T>) -> T {
    let rho2 = T::count(idx.nearest_corner_sq());
    block_decay_constant(params.s()) * (params.a2() + rho2).powf(-(params.s() + T::lit(1.5)))
}

/// Rigorous bound on `Σ |E_{I,J,K}|` over blocks with Chebyshev radius `> radius`.
///
/// The nearest-corner map sends blocks bijectively onto `m ∈ N³`, and radius
/// `> R` means `max m_i >= L = 2R + 1`. Splitting `N³` by the number of
/// nonzero coordinates `j`, each lattice sum is dominated by the integral of
/// `g(r) = (a² + r²)^{-p}`, `p = s + 3/2`, over the positive orthant of `R^j`
/// outside radius `L - √j` (each point owns the unit cube towards the origin).
pub fn block_tail_bound<T: Real>(params: &SumParams<T>, radius: usize) -> T {
    let s = params.s().as_f64();
    let a2 = params.a2().as_f64();
    let p = s + 1.5;
    let big_l = 2.0 * radius as f64 + 1.0;
    let orthant = |j: usize| match j {
        1 => 1.0,
        _ => std::f64::consts::FRAC_PI_2,
    };
    let mut total = 0.0;
    for (j, multiplicity) in [(3usize, 1.0), (2, 3.0), (1, 3.0)] {
        let jf = j as f64;
        let r0 = big_l - jf.sqrt();
        if r0 <= 0.0 {
            return T::infinity();
        }
        // ∫_{r0}^∞ r^{j-1} (a²+r²)^{-p} dr <= (a²+r0²)^{-(p-q)} r0^{j-2q} / (2q-j) for j/2 < q <= p.
        let bound = |q: f64| (a2 + r0 * r0).powf(-(p - q)) * r0.powf(jf - 2.0 * q) / (2.0 * q - jf);
        let radial = bound(p).min(bound(0.5 * (p + 0.5 * jf)));
        total += multiplicity * orthant(j) * radial;
    }
    T::lit(block_decay_constant(s) * total)
}

/// Blocks of Chebyshev radius exactly `r`, lexicographic.
fn shell_blocks(r: i64) -> impl Iterator<Item = BlockIndex> {
    (-r..=r).flat_map(move |i| {
        (-r..=r).flat_map(move |j| {
            let full = i.abs() == r || j.abs() == r;
            let ks: Vec<i64> = if full {
                (-r..=r).collect()
            } else if r == 0 {
                vec![0]
            } else {
                vec![-r, r]
            };
            ks.into_iter().map(move |k| BlockIndex::new(i, j, k))
        })
    })
}

/// Table of `(a² + q)^{-s}` for `q = 0..=max_q`, bit-identical to [`SumParams::kernel`].
struct KernelTable<T> {
    values: Vec<T>,
}

impl<T: Real> KernelTable<T> {
    fn new(params: &SumParams<T>, max_q: usize) -> Self {
        let values = (0..max_q + 1)
            .into_par_iter()
            .with_min_len(4096)
            .map(|q| params.kernel(T::count(q as u64)))
            .collect();
        Self { values }
    }

    #[inline]
    fn point(&self, i: i64, j: i64, k: i64) -> T {
        if i == 0 && j == 0 && k == 0 {
            T::zero()
        } else {
            self.values[(i * i + j * j + k * k) as usize]
        }
    }

    fn block(&self, idx: BlockIndex) -> T {
        block_alternating_sum(idx, |i, j, k| self.point(i, j, k))
    }
}

/// Sum of all blocks with Chebyshev radius `<= radius`, by increasing radius
/// and lexicographically within a radius.
pub fn blocks_within_radius<T: Real>(params: &SumParams<T>, radius: usize) -> Result<T> {
    check_dim(params)?;
    let side = 2 * radius + 2;
    let table = KernelTable::new(params, 3 * side * side);
    let shells: Vec<CompensatedSum<T>> = (0..=radius as i64)
        .into_par_iter()
        .map(|r| shell_blocks(r).map(|b| table.block(b)).collect())
        .collect();
    Ok(merge_ordered(&shells).value())
}

/// Options for [`block_global_sum_with`].
#[derive(Debug, Clone, Copy)]
pub struct BlockSumOptions {
    pub max_radius: usize,
}

impl Default for BlockSumOptions {
    fn default() -> Self {
        Self { max_radius: DEFAULT_MAX_BLOCK_RADIUS }
    }
}

/// Absolutely convergent block series for `M_{a,s}`, truncated at the smallest
/// Chebyshev radius whose rigorous tail bound is `<= tol`.
pub fn block_global_sum<T: Real>(params: &SumParams<T>, tol: T) -> Result<BlockSum<T>> {
    block_global_sum_with(params, tol, BlockSumOptions::default())
}

pub fn block_global_sum_with<T: Real>(params: &SumParams<T>, tol: T, opts: BlockSumOptions) -> Result<BlockSum<T>> {
    check_dim(params)?;
    if !(tol > T::zero()) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let max_radius = opts.max_radius.max(1);
    let radius = (1..=max_radius).find(|&r| block_tail_bound(params, r) <= tol);
    match radius {
        Some(radius) => Ok(BlockSum {
            params: *params,
            radius,
            value: blocks_within_radius(params, radius)?,
            tail_bound: block_tail_bound(params, radius),
        }),
        None => Err(Error::BudgetExceeded {
            value: blocks_within_radius(params, max_radius)?.as_f64(),
            tail_bound: block_tail_bound(params, max_radius).as_f64(),
            radius: max_radius,
            requested: tol.as_f64(),
        }),
    }
}

fn check_box_budget(i: usize, j: usize, k: usize, budget: u64) -> Result<()> {
    let requested = (2 * i as u128 + 1) * (2 * j as u128 + 1) * (2 * k as u128 + 1);
    if requested > budget as u128 {
        return Err(Error::ResourceLimit {
            what: "rectangle lattice points",
            requested,
            limit: budget as u128,
        });
    }
    Ok(())
}

/// `S_{Π_{I,J,K}}`: primed alternating sum over `[-I,I]×[-J,J]×[-K,K]`.
pub fn rect_partial_sum<T: Real>(params: &SumParams<T>, i: usize, j: usize, k: usize) -> Result<T> {
    rect_partial_sum_with_budget(params, i, j, k, DEFAULT_ENUMERATION_BUDGET)
}

pub fn rect_partial_sum_with_budget<T: Real>(
    params: &SumParams<T>,
    i: usize,
    j: usize,
    k: usize,
    budget: u64,
) -> Result<T> {
    check_dim(params)?;
    check_box_budget(i, j, k, budget)?;
    let (ii, jj, kk) = (i as i64, j as i64, k as i64);
    let slices: Vec<CompensatedSum<T>> = (-ii..=ii)
        .into_par_iter()
        .map(|x| {
            let mut acc = CompensatedSum::new();
            for y in -jj..=jj {
                for z in -kk..=kk {
                    acc.add(parity_sign::<T>(x + y + z) * point_term(params, x, y, z));
                }
            }
            acc
        })
        .collect();
    Ok(merge_ordered(&slices).value())
}

/// `E_{Π_{2N,2N,2N}}`: blocks `I, J, K ∈ [-N, N-1]`, which tile `[-2N, 2N-1]³`.
pub fn block_box_sum<T: Real>(params: &SumParams<T>, n: usize) -> Result<T> {
    check_dim(params)?;
    check_box_budget(2 * n, 2 * n, 2 * n, DEFAULT_ENUMERATION_BUDGET)?;
    let nn = n as i64;
    let slices: Vec<CompensatedSum<T>> = (-nn..nn)
        .into_par_iter()
        .map(|i| {
            let mut acc = CompensatedSum::new();
            for j in -nn..nn {
                for k in -nn..nn {
                    acc.add(block_alternating_sum(BlockIndex::new(i, j, k), |x, y, z| {
                        point_term(params, x, y, z)
                    }));
                }
            }
            acc
        })
        .collect();
    Ok(merge_ordered(&slices).value())
}

/// `|S_{Π_{2N,2N,2N}} - E_{Π_{2N,2N,2N}}|`.
///
/// The difference is exactly the alternating sum over lattice points of the
/// cube with some coordinate equal to `2N`, which is summed directly.
pub fn s_minus_e_defect<T: Real>(params: &SumParams<T>, n: usize) -> Result<T> {
    check_dim(params)?;
    if n == 0 {
        return Err(Error::domain("defect cube half-size N must be at least 1"));
    }
    check_box_budget(2 * n, 2 * n, 2 * n, DEFAULT_ENUMERATION_BUDGET)?;
    let e = 2 * n as i64;
    let term = |x: i64, y: i64, z: i64| parity_sign::<T>(x + y + z) * point_term(params, x, y, z);
    let mut acc = CompensatedSum::new();
    // Face x = 2N.
    for y in -e..=e {
        for z in -e..=e {
            acc.add(term(e, y, z));
        }
    }
    // Face y = 2N with x < 2N.
    for x in -e..e {
        for z in -e..=e {
            acc.add(term(x, e, z));
        }
    }
    // Face z = 2N with x, y < 2N.
    for x in -e..e {
        for y in -e..e {
            acc.add(term(x, y, e));
        }
    }
    Ok(acc.value().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(a: f64, s: f64) -> SumParams<f64> {
        SumParams::new(a, s).unwrap()
    }

    fn brute_block(idx: BlockIndex, a: f64, s: f64) -> f64 {
        let mut v = 0.0;
        for i in 2 * idx.i..=2 * idx.i + 1 {
            for j in 2 * idx.j..=2 * idx.j + 1 {
                for k in 2 * idx.k..=2 * idx.k + 1 {
                    if (i, j, k) != (0, 0, 0) {
                        let sign = if (i + j + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                        v += sign * (a * a + (i * i + j * j + k * k) as f64).powf(-s);
                    }
                }
            }
        }
        v
    }

    #[test]
    fn constant_integrand_cancels() {
        for idx in [BlockIndex::new(0, 0, 0), BlockIndex::new(-3, 2, 7)] {
            assert_eq!(block_alternating_sum(idx, |_, _, _| 4.25f64), 0.0);
        }
    }

    #[test]
    fn origin_block() {
        let v = block_term(BlockIndex::new(0, 0, 0), &p(0.0, 0.5)).unwrap();
        let expected = -3.0 + 3.0 / 2f64.sqrt() - 1.0 / 3f64.sqrt();
        assert_relative_eq!(v, expected, max_relative = 1e-15);
        assert_relative_eq!(v, -1.45603, epsilon = 1e-5);
    }

    #[test]
    fn off_axis_block_matches_brute_force() {
        for idx in [BlockIndex::new(5, 0, 0), BlockIndex::new(-2, 3, -1)] {
            let v = block_term(idx, &p(0.0, 0.5)).unwrap();
            assert!((v - brute_block(idx, 0.0, 0.5)).abs() <= 1e-15);
        }
    }

    #[test]
    fn unit_cube_partial_sums() {
        let v = rect_partial_sum(&p(0.0, 0.5), 1, 1, 1).unwrap();
        assert_relative_eq!(v, -6.0 + 12.0 / 2f64.sqrt() - 8.0 / 3f64.sqrt(), max_relative = 1e-14);
        let v2 = rect_partial_sum(&p(0.0, 2.0), 1, 1, 1).unwrap();
        assert_relative_eq!(v2, -6.0 + 3.0 - 8.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn enumeration_budget() {
        assert!(matches!(
            rect_partial_sum_with_budget(&p(0.0, 0.5), 10, 10, 10, 1000),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn nearest_corner_is_a_bijection() {
        let mut seen: Vec<u64> = (-20..20).map(nearest_coordinate).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..40).collect::<Vec<u64>>());
    }

    #[test]
    fn shells_partition_the_cube() {
        let r = 4;
        let mut all: Vec<BlockIndex> = (0..=r).flat_map(shell_blocks).collect();
        assert_eq!(all.len(), (2 * r as usize + 1).pow(3));
        all.sort_by_key(|b| (b.i, b.j, b.k));
        all.dedup();
        assert_eq!(all.len(), (2 * r as usize + 1).pow(3));
        for r in 0..=r {
            assert!(shell_blocks(r).all(|b| b.radius() == r as u64));
        }
    }

    #[test]
    fn tail_bound_decreases() {
        let params = p(1.0, 0.5);
        let bounds: Vec<f64> = (1..40).map(|r| block_tail_bound(&params, r)).collect();
        assert!(bounds.windows(2).all(|w| w[1] < w[0]));
        assert!(bounds.iter().all(|&b| b > 0.0));
    }

    #[test]
    fn tail_bound_dominates_omitted_blocks() {
        // Sum of per-block bounds over blocks with radius in (R, 3R], which is
        // below the full tail.
        for (a, s) in [(0.0, 0.5), (1.0, 1.0), (0.0, 2.0)] {
            let params = p(a, s);
            let r = 4;
            let partial: f64 = ((r + 1) as i64..=(3 * r) as i64)
                .flat_map(shell_blocks)
                .map(|b| block_decay_bound(b, &params))
                .sum();
            assert!(partial <= block_tail_bound(&params, r), "a={a} s={s}");
        }
    }

    #[test]
    fn lookup_and_direct_blocks_agree() {
        let params = p(0.3, 0.7);
        let table = KernelTable::new(&params, 300);
        for b in shell_blocks(3) {
            assert_eq!(table.block(b), block_term(b, &params).unwrap());
        }
    }

    #[test]
    fn budget_exceeded_reports_best_value() {
        let err = block_global_sum_with(&p(0.0, 0.5), 1e-9, BlockSumOptions { max_radius: 3 }).unwrap_err();
        match err {
            Error::BudgetExceeded { radius, tail_bound, value, .. } => {
                assert_eq!(radius, 3);
                assert!(tail_bound > 1e-9);
                assert!(value.is_finite());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(block_global_sum(&p(0.0, 0.5), 0.0).is_err());
    }

    #[test]
    fn defect_two_ways_small_cube() {
        let params = p(0.0, 0.5);
        let s = rect_partial_sum(&params, 2, 2, 2).unwrap();
        let e = block_box_sum(&params, 1).unwrap();
        let d = s_minus_e_defect(&params, 1).unwrap();
        assert!(((s - e).abs() - d).abs() <= 1e-12);
    }
}
