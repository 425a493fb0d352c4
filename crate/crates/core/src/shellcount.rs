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

//! Lattice-shell representation counts `r_d(n) = #{x ∈ Z^d : |x|² = n}`.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default ceiling on table entries (`max_n + 1`).
pub const DEFAULT_MAX_ENTRIES: u64 = 2_000_000_000;

/// Immutable table of `r_d(n)` for `n = 0..=max_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellCountTable {
    dim: usize,
    counts: Vec<u64>,
}

impl ShellCountTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `r_d(n)`, or `None` past the end of the table.
    pub fn get(&self, n: usize) -> Option<u64> {
        self.counts.get(n).copied()
    }

    /// Number of lattice points in the closed ball `|x|² <= n`.
    pub fn ball_count(&self, n: usize) -> Result<u64> {
        if n > self.max_n() {
            return Err(Error::IndexOutOfRange {
                index: n,
                lo: 0,
                hi: self.max_n(),
            });
        }
        // Bounded by (2√n+1)^d, far below u64::MAX wherever a table fits in memory.
        Ok(self.counts[..=n].iter().sum())
    }

    /// All `n` in `1..=max_n` with `r_3(n) >= c·√n`, increasing.
    pub fn find_large_shells(&self, c: f64) -> Result<Vec<usize>> {
        if self.dim != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: self.dim,
            });
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::domain(format!("threshold c must be positive, got {c}")));
        }
        Ok((1..=self.max_n())
            .filter(|&n| self.counts[n] as f64 >= c * (n as f64).sqrt())
            .collect())
    }
}

/// Builds `r_d(n)` for `n <= max_n` with the default memory ceiling.
pub fn build_shell_table(dim: usize, max_n: usize) -> Result<ShellCountTable> {
    build_shell_table_with_limit(dim, max_n, DEFAULT_MAX_ENTRIES)
}

/// Builds `r_d(n)` by the one-dimensional convolution recurrence
///
/// ```text
/// r_d(n) = r_{d-1}(n) + 2 Σ_{k>=1, k²<=n} r_{d-1}(n - k²)
/// ```
///
/// starting from `r_1`. Each output entry is independent, so the work is split
/// over disjoint index ranges; the result is identical for any worker count.
pub fn build_shell_table_with_limit(dim: usize, max_n: usize, max_entries: u64) -> Result<ShellCountTable> {
    if dim == 0 {
        return Err(Error::InvalidDimension(dim));
    }
    let entries = (max_n as u128) + 1;
    if entries > max_entries as u128 {
        return Err(Error::ResourceLimit {
            what: "shell table entries",
            requested: entries,
            limit: max_entries as u128,
        });
    }

    let squares: Vec<usize> = (1..).map(|k: usize| k * k).take_while(|&q| q <= max_n).collect();

    let mut counts = vec![0u64; max_n + 1];
    counts[0] = 1;
    for &q in &squares {
        counts[q] = 2;
    }

    for _ in 1..dim {
        let prev = counts;
        let next: Vec<u64> = (0..max_n + 1)
            .into_par_iter()
            .with_min_len(1024)
            .map(|n| {
                let mut acc = 0u64;
                for &q in squares.iter().take_while(|&&q| q <= n) {
                    acc = acc.checked_add(prev[n - q]).ok_or(Error::CountOverflow(n))?;
                }
                acc.checked_mul(2)
                    .and_then(|twice| twice.checked_add(prev[n]))
                    .ok_or(Error::CountOverflow(n))
            })
            .collect::<Result<_>>()?;
        counts = next;
    }

    Ok(ShellCountTable { dim, counts })
}
