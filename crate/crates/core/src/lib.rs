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

//! Generalized Madelung constants
//! `M_{a,s} = Σ'_{k ∈ Z³} (-1)^{k₁+k₂+k₃} (a² + |k|²)^{-s}`.
//!
//! Four independent routes are provided: Cesàro–Riesz means over expanding
//! spheres ([`series`]), absolutely convergent 2×2×2 block sums
//! ([`rectangles`]), and the lattice periodization of the whole-space kernel
//! of `(a² - Δ)^s` ([`greens`]). Shell counts `r_d(n)` live in [`shellcount`].
//!
//! The summation kernels are generic over [`Real`] (`f32`, `f64`); the `*F64`
//! aliases below fix the common case.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod compensated;
pub mod error;
pub mod greens;
pub mod rectangles;
pub mod scalar;
pub mod series;
pub mod shellcount;

pub use compensated::{compensated_sum, CompensatedSum};
pub use error::{Error, Result};
pub use greens::{GreenEvaluation, KernelParams};
pub use rectangles::{BlockIndex, BlockSum};
pub use scalar::Real;
pub use series::{CesaroConfig, PartialSumSeries, PhaseShellTable, SumMethod, SumParams};
pub use shellcount::ShellCountTable;

pub type SumParamsF64 = SumParams<f64>;
pub type CesaroConfigF64 = CesaroConfig<f64>;
pub type PartialSumSeriesF64 = PartialSumSeries<f64>;
pub type PhaseShellTableF64 = PhaseShellTable<f64>;
pub type BlockSumF64 = BlockSum<f64>;
pub type SumMethodF64 = SumMethod<f64>;

pub type SumParamsF32 = SumParams<f32>;
pub type PartialSumSeriesF32 = PartialSumSeries<f32>;
