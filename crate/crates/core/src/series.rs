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

//! Spherical partial sums of the alternating lattice series
//!
//! ```text
//! C^κ_N(a, s) = Σ_{n=1}^{N} (1 - n/N)^κ (-1)^n r_d(n) / (a² + n)^s
//! ```
//!
//! and of the phase-weighted exponential sums `Σ' e^{i k·x} / (a² + |k|²)^s`
//! grouped by shells. `κ = 0` is plain summation by expanding spheres.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};
use crate::scalar::{parity_sign, Real};
use crate::shellcount::ShellCountTable;

/// Integer Cesàro orders up to this value use the prefix-moment recurrence.
pub const MAX_MOMENT_ORDER: u32 = 8;

/// Default cap on lattice points visited by [`build_phase_shells`].
pub const DEFAULT_PHASE_BUDGET: u64 = 2_000_000_000;

/// Parameters of the generalized Madelung target `M_{a,s}` in dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumParams<T> {
    a: T,
    s: T,
    dim: usize,
}

impl<T: Real> SumParams<T> {
    /// Three-dimensional parameters.
    pub fn new(a: T, s: T) -> Result<Self> {
        Self::with_dim(a, s, 3)
    }

    pub fn with_dim(a: T, s: T, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        if !a.is_finite() {
            return Err(Error::domain(format!("screening parameter a must be finite, got {a}")));
        }
        if !(s > T::zero()) || !s.is_finite() {
            return Err(Error::domain(format!("exponent s must be positive and finite, got {s}")));
        }
        Ok(Self { a, s, dim })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a2(&self) -> T {
        self.a * self.a
    }

    /// `(a² + q)^{-s}`.
    #[inline]
    pub fn kernel(&self, q: T) -> T {
        (self.a2() + q).powf(-self.s)
    }
}

/// Cesàro order and cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CesaroConfig<T> {
    kappa: T,
    max_n: usize,
}

impl<T: Real> CesaroConfig<T> {
    pub fn new(kappa: T, max_n: usize) -> Result<Self> {
        if !(kappa >= T::zero()) || !kappa.is_finite() {
            return Err(Error::domain(format!("Cesàro order must be a finite nonnegative number, got {kappa}")));
        }
        if max_n == 0 {
            return Err(Error::domain("cutoff max_n must be at least 1"));
        }
        Ok(Self { kappa, max_n })
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }
}

/// How a [`PartialSumSeries`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SumMethod<T> {
    Plain,
    Cesaro { kappa: T },
    FourierCesaro { kappa: T, x: [T; 3] },
}

/// Partial sums indexed by cutoff: `values()[N - 1]` is the sum at cutoff `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSumSeries<T> {
    method: SumMethod<T>,
    params: SumParams<T>,
    values: Vec<T>,
}

impl<T: Real> PartialSumSeries<T> {
    pub fn method(&self) -> SumMethod<T> {
        self.method
    }

    pub fn params(&self) -> SumParams<T> {
        self.params
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Partial sum at cutoff `n` (1-based).
    pub fn at(&self, n: usize) -> Option<T> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    /// `max - min` of the partial sums over cutoffs `lo..=hi` (1-based).
    pub fn window_oscillation(&self, lo: usize, hi: usize) -> Result<T> {
        window_oscillation(&self.values, lo, hi)
    }

    /// Mean of the partial sums over cutoffs `lo..=hi` (1-based).
    pub fn window_mean(&self, lo: usize, hi: usize) -> Result<T> {
        check_window(self.values.len(), lo, hi)?;
        let sum = self.values[lo - 1..hi].iter().copied().collect::<CompensatedSum<T>>().value();
        Ok(sum / T::count((hi - lo + 1) as u64))
    }
}

fn check_window(len: usize, lo: usize, hi: usize) -> Result<()> {
    if lo == 0 || lo > len {
        return Err(Error::IndexOutOfRange { index: lo, lo: 1, hi: len });
    }
    if hi <= lo || hi > len {
        return Err(Error::IndexOutOfRange { index: hi, lo: lo + 1, hi: len });
    }
    Ok(())
}

/// `max - min` of `values[lo-1..hi]`.
pub fn window_oscillation<T: Real>(values: &[T], lo: usize, hi: usize) -> Result<T> {
    check_window(values.len(), lo, hi)?;
    let window = &values[lo - 1..hi];
    let (min, max) = window
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    Ok(max - min)
}

/// Shell sums `Σ_{|k|²=n} e^{i k·x}` over `k ∈ Z³` for `n = 0..=max_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShellTable<T> {
    x: [T; 3],
    sums: Vec<Complex<T>>,
}

impl<T: Real> PhaseShellTable<T> {
    pub fn x(&self) -> [T; 3] {
        self.x
    }

    pub fn max_n(&self) -> usize {
        self.sums.len() - 1
    }

    pub fn sums(&self) -> &[Complex<T>] {
        &self.sums
    }
}

/// Signed shell terms `t_n = (-1)^n r_d(n) / (a² + n)^s`, `n = 1..=max_n`.
pub fn shell_terms<T: Real>(table: &ShellCountTable, params: &SumParams<T>, max_n: usize) -> Result<Vec<T>> {
    check_table(table, params, max_n)?;
    Ok((1..=max_n)
        .map(|n| {
            let r = T::count(table.counts()[n]);
            parity_sign::<T>(n as i64) * r * params.kernel(T::count(n as u64))
        })
        .collect())
}

/// Phase-weighted shell terms `Re(sums[n]) / (a² + n)^s`, `n = 1..=max_n`.
pub fn phase_terms<T: Real>(phase: &PhaseShellTable<T>, params: &SumParams<T>, max_n: usize) -> Result<Vec<T>> {
    if params.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: params.dim() });
    }
    if phase.max_n() < max_n {
        return Err(Error::TableTooShort { needed: max_n, available: phase.max_n() });
    }
    Ok((1..=max_n)
        .map(|n| phase.sums[n].re * params.kernel(T::count(n as u64)))
        .collect())
}

fn check_table<T: Real>(table: &ShellCountTable, params: &SumParams<T>, max_n: usize) -> Result<()> {
    if table.dim() != params.dim() {
        return Err(Error::DimensionMismatch { expected: params.dim(), found: table.dim() });
    }
    if table.max_n() < max_n {
        return Err(Error::TableTooShort { needed: max_n, available: table.max_n() });
    }
    Ok(())
}

/// Riesz weight `(1 - n/N)^κ`; the `n = N` weight is exactly zero for `κ > 0`.
#[inline]
fn riesz_weight<T: Real>(n: usize, cutoff: usize, kappa: T) -> T {
    if kappa == T::zero() {
        return T::one();
    }
    let base = T::count((cutoff - n) as u64) / T::count(cutoff as u64);
    match integer_order(kappa) {
        Some(k) => base.powi(k as i32),
        None => base.powf(kappa),
    }
}

fn integer_order<T: Real>(kappa: T) -> Option<u32> {
    if kappa.fract() == T::zero() && kappa <= T::count(u32::MAX as u64) {
        kappa.to_u32()
    } else {
        None
    }
}

/// `Σ_{n=1}^{N} (1 - n/N)^κ terms[n-1]`, compensated, ascending `n`.
pub fn weighted_sum<T: Real>(terms: &[T], cutoff: usize, kappa: T) -> T {
    let mut acc = CompensatedSum::new();
    for (i, &t) in terms[..cutoff].iter().enumerate() {
        acc.add(riesz_weight(i + 1, cutoff, kappa) * t);
    }
    acc.value()
}

/// Cesàro–Riesz mean `C^κ_N(a, s)` at the cutoff `config.max_n()`.
pub fn cesaro_sum<T: Real>(table: &ShellCountTable, params: &SumParams<T>, config: &CesaroConfig<T>) -> Result<T> {
    let terms = shell_terms(table, params, config.max_n())?;
    Ok(weighted_sum(&terms, config.max_n(), config.kappa()))
}

/// `C^κ_N` for every cutoff `N = 1..=max_n`.
pub fn cesaro_series<T: Real>(
    table: &ShellCountTable,
    params: &SumParams<T>,
    kappa: T,
    max_n: usize,
) -> Result<PartialSumSeries<T>> {
    let config = CesaroConfig::new(kappa, max_n)?;
    let terms = shell_terms(table, params, config.max_n())?;
    let method = if kappa == T::zero() {
        SumMethod::Plain
    } else {
        SumMethod::Cesaro { kappa }
    };
    Ok(PartialSumSeries {
        method,
        params: *params,
        values: series_from_terms(&terms, kappa),
    })
}

/// Real part of `Σ_{n=1}^{N} (1 - n/N)^κ sums[n] / (a² + n)^s`.
pub fn fourier_cesaro_eval<T: Real>(
    phase: &PhaseShellTable<T>,
    params: &SumParams<T>,
    config: &CesaroConfig<T>,
) -> Result<T> {
    let terms = phase_terms(phase, params, config.max_n())?;
    Ok(weighted_sum(&terms, config.max_n(), config.kappa()))
}

/// [`fourier_cesaro_eval`] for every cutoff `N = 1..=max_n`.
pub fn fourier_cesaro_series<T: Real>(
    phase: &PhaseShellTable<T>,
    params: &SumParams<T>,
    kappa: T,
    max_n: usize,
) -> Result<PartialSumSeries<T>> {
    let config = CesaroConfig::new(kappa, max_n)?;
    let terms = phase_terms(phase, params, config.max_n())?;
    Ok(PartialSumSeries {
        method: SumMethod::FourierCesaro { kappa, x: phase.x },
        params: *params,
        values: series_from_terms(&terms, kappa),
    })
}

/// All Riesz means of `terms` for cutoffs `1..=terms.len()`.
///
/// `κ = 0` keeps one running compensated sum. Integer `κ <= MAX_MOMENT_ORDER`
/// expands `(1 - n/N)^κ` binomially over prefix moments
/// `Q_j(N) = Σ_{n<=N} (n/M)^j t_n` with the fixed scale `M = terms.len()`,
/// which keeps every moment of order one. Other orders recompute each cutoff
/// directly.
pub fn series_from_terms<T: Real>(terms: &[T], kappa: T) -> Vec<T> {
    let len = terms.len();
    if kappa == T::zero() {
        let mut acc = CompensatedSum::new();
        return terms
            .iter()
            .map(|&t| {
                acc.add(t);
                acc.value()
            })
            .collect();
    }
    match integer_order(kappa) {
        Some(k) if k <= MAX_MOMENT_ORDER => moment_series(terms, k as usize),
        _ => (1..=len)
            .into_par_iter()
            .map(|cutoff| weighted_sum(terms, cutoff, kappa))
            .collect(),
    }
}

fn moment_series<T: Real>(terms: &[T], order: usize) -> Vec<T> {
    let len = terms.len();
    let scale = T::count(len as u64);
    let binom: Vec<T> = (0..=order).map(|j| T::count(binomial(order, j))).collect();
    let mut moments = vec![CompensatedSum::<T>::new(); order + 1];
    let mut out = Vec::with_capacity(len);
    for (i, &t) in terms.iter().enumerate() {
        let n = i + 1;
        let x = T::count(n as u64) / scale;
        let mut xp = T::one();
        for m in moments.iter_mut() {
            m.add(xp * t);
            xp = xp * x;
        }
        // (1 - n'/N)^κ = Σ_j C(κ,j) (-1)^j (M/N)^j (n'/M)^j
        let ratio = scale / T::count(n as u64);
        let mut combo = CompensatedSum::new();
        let mut rp = T::one();
        for (j, m) in moments.iter().enumerate() {
            let signed = if j % 2 == 0 { binom[j] } else { -binom[j] };
            combo.add(signed * rp * m.value());
            rp = rp * ratio;
        }
        out.push(combo.value());
    }
    out
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// Builds phase shell sums by enumerating the ball `|k|² <= max_n`.
pub fn build_phase_shells<T: Real>(x: [T; 3], max_n: usize) -> Result<PhaseShellTable<T>> {
    build_phase_shells_with_budget(x, max_n, DEFAULT_PHASE_BUDGET)
}

/// As [`build_phase_shells`] with an explicit cap on visited lattice points.
///
/// Each point `k` is paired with `-k`, so every shell sum is `Σ 2cos(k·x)`
/// over half the shell and its imaginary part is exactly zero. The shell
/// range is split into fixed blocks that are enumerated independently; the
/// per-shell accumulation order does not depend on the worker count.
pub fn build_phase_shells_with_budget<T: Real>(x: [T; 3], max_n: usize, budget: u64) -> Result<PhaseShellTable<T>> {
    if max_n == 0 {
        return Err(Error::domain("max_n must be at least 1"));
    }
    if x.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain("torus point must be finite"));
    }
    let m = isqrt(max_n as u64);
    let side = 2 * m as u128 + 1;
    let requested = side * side * side;
    if requested > budget as u128 {
        return Err(Error::ResourceLimit {
            what: "phase shell lattice points",
            requested,
            limit: budget as u128,
        });
    }

    const BLOCK: usize = 2048;
    let blocks: Vec<(usize, usize)> = (0..=max_n)
        .step_by(BLOCK)
        .map(|lo| (lo, (lo + BLOCK - 1).min(max_n)))
        .collect();
    let parts: Vec<Vec<Complex<T>>> = blocks
        .par_iter()
        .map(|&(lo, hi)| phase_block(x, lo, hi))
        .collect();
    let sums = parts.into_iter().flatten().collect();
    Ok(PhaseShellTable { x, sums })
}

fn phase_block<T: Real>(x: [T; 3], lo: usize, hi: usize) -> Vec<Complex<T>> {
    let (lo_q, hi_q) = (lo as i64, hi as i64);
    let mut re = vec![CompensatedSum::<T>::new(); hi - lo + 1];
    let mut im = vec![CompensatedSum::<T>::new(); hi - lo + 1];
    if lo == 0 {
        re[0].add(T::one());
    }
    let m1 = isqrt(hi as u64) as i64;
    // Representatives of ±k pairs: k1 > 0, or k1 = 0 and k2 > 0, or k1 = k2 = 0 and k3 > 0.
    for k1 in 0..=m1 {
        let q1 = k1 * k1;
        let m2 = isqrt((hi_q - q1) as u64) as i64;
        let k2_lo = if k1 == 0 { 0 } else { -m2 };
        for k2 in k2_lo..=m2 {
            let q2 = q1 + k2 * k2;
            let k3_hi = isqrt((hi_q - q2) as u64) as i64;
            let k3_min = if lo_q > q2 { ceil_sqrt((lo_q - q2) as u64) as i64 } else { 0 };
            for k3 in -k3_hi..=k3_hi {
                if k3.abs() < k3_min {
                    continue;
                }
                if k1 == 0 && k2 == 0 && k3 <= 0 {
                    continue;
                }
                let q = (q2 + k3 * k3) as usize;
                let theta = T::coord(k1) * x[0] + T::coord(k2) * x[1] + T::coord(k3) * x[2];
                let p = Complex::new(theta.cos(), theta.sin());
                let pair = p + p.conj();
                re[q - lo].add(pair.re);
                im[q - lo].add(pair.im);
            }
        }
    }
    re.iter()
        .zip(&im)
        .map(|(r, i)| Complex::new(r.value(), i.value()))
        .collect()
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn ceil_sqrt(n: u64) -> u64 {
    let r = isqrt(n);
    if r * r == n {
        r
    } else {
        r + 1
    }
}
