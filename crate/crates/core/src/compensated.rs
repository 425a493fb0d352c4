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

//! Compensated (Neumaier) accumulation.
//!
//! Every lattice sum in this crate is accumulated in a fixed order through
//! [`CompensatedSum`]; parallel code reduces per-slice accumulators with
//! [`CompensatedSum::merge`] in slice order so results do not depend on the
//! worker count.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    /// Folds another accumulator into this one, keeping both error terms.
    #[inline]
    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Real> Extend<T> for CompensatedSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

/// Compensated sum of a sequence in iteration order.
pub fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(iter: I) -> T {
    iter.into_iter().collect::<CompensatedSum<T>>().value()
}

/// Reduces per-slice accumulators in slice order.
pub fn merge_ordered<'a, T: Real>(parts: impl IntoIterator<Item = &'a CompensatedSum<T>>) -> CompensatedSum<T> {
    let mut acc = CompensatedSum::new();
    for p in parts {
        acc.merge(p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let xs = [1.0e16, 1.0, -1.0e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
        let naive: f64 = xs.iter().sum();
        assert_ne!(naive, 2.0);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (1..=1000).map(|k| (-1.0f64).powi(k) / (k as f64).sqrt()).collect();
        let whole = compensated_sum(xs.iter().copied());
        let parts: Vec<CompensatedSum<f64>> = xs.chunks(37).map(|c| c.iter().copied().collect()).collect();
        let merged = merge_ordered(&parts).value();
        assert!((whole - merged).abs() <= 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let v: f32 = compensated_sum((0..10_000).map(|_| 0.1f32));
        assert!((v - 1000.0).abs() < 1e-3);
    }
}
