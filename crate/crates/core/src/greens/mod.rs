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

//! Continuum oracle for `M_{a,s}(x)`: periodization of the whole-space
//! fundamental solution of `(a² - Δ)^s` on `R³`.
//!
//! The whole-space kernel is used with positive normalization,
//!
//! ```text
//! G(r) = r^{2s-3} Ψ(a r) / (2^{1/2+s} π^{3/2} Γ(s)),   Ψ(z) = z^{3/2-s} K_{3/2-s}(z),
//! ```
//!
//! which is the inverse Fourier transform of `(a² + |ξ|²)^{-s}`. Poisson
//! summation then gives `M_{a,s}(x) = (2π)³ Σ_n G(x - 2πn) - a^{-2s}`, the
//! function whose Fourier coefficients are `(a² + |k|²)^{-s}` for `k ≠ 0`.
//! This module is f64-only.

mod periodize;
mod special;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

pub use periodize::{
    cube_kernel_integral, periodized_green, periodized_green_with_budget, periodized_green_zero_a,
    zero_mean_constant, DEFAULT_NODE_BUDGET, TRUNCATION_SAFETY,
};
pub use special::{bessel_k, bessel_k_scaled, gamma_fn, gauss_legendre, square_integral};

/// Screening `a >= 0` and exponent `s ∈ (0, 3/2)` of the kernel; `nu = 3/2 - s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    a: f64,
    s: f64,
    nu: f64,
}

impl KernelParams {
    pub fn new(a: f64, s: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::domain(format!("kernel screening a must be finite and >= 0, got {a}")));
        }
        if !(s > 0.0 && s < 1.5) {
            return Err(Error::domain(format!("kernel exponent s must lie in (0, 3/2), got {s}")));
        }
        Ok(Self { a, s, nu: 1.5 - s })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Bessel order `3/2 - s`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `1 / (2^{1/2+s} π^{3/2} Γ(s))`.
    pub fn prefactor(&self) -> f64 {
        1.0 / (2f64.powf(0.5 + self.s) * PI.powf(1.5) * gamma_fn(self.s).expect("s > 0"))
    }

    /// `Ψ(0) = 2^{1/2-s} Γ(3/2-s)`.
    pub fn psi_at_zero(&self) -> f64 {
        2f64.powf(0.5 - self.s) * gamma_fn(self.nu).expect("nu > 0")
    }

    /// `Ψ(z) = z^ν K_ν(z)`, continuous at `z = 0`.
    pub fn psi(&self, z: f64) -> Result<f64> {
        if z == 0.0 {
            return Ok(self.psi_at_zero());
        }
        Ok(z.powf(self.nu) * bessel_k(self.nu, z)?)
    }
}

/// Value of a periodized Green function at one torus point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenEvaluation {
    pub x: [f64; 3],
    pub value: f64,
    /// Lattice-node radius of the truncated periodization.
    pub truncation_radius: usize,
    pub error_estimate: f64,
}

/// Coefficient `c_s = Γ(3/2-s) / (2^{2s} π^{3/2} Γ(s))` of the `a = 0` kernel `c_s r^{2s-3}`.
pub fn riesz_coefficient(s: f64) -> Result<f64> {
    let p = KernelParams::new(0.0, s)?;
    Ok(p.prefactor() * p.psi_at_zero())
}

/// Positive whole-space kernel `G(r)`; for `a = 0` this is `c_s r^{2s-3}`.
pub fn green_whole_space(p: &KernelParams, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("kernel radius must be positive, got {r}")));
    }
    let power = r.powf(2.0 * p.s - 3.0);
    if p.a == 0.0 {
        return Ok(p.prefactor() * p.psi_at_zero() * power);
    }
    Ok(p.prefactor() * power * p.psi(p.a * r)?)
}

/// `∫_{|y| <= ρ} c_s |y|^{2s-3} dy = c_s 4π ρ^{2s} / (2s)`.
pub fn ball_integral(s: f64, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::domain(format!("ball radius must be nonnegative, got {rho}")));
    }
    Ok(riesz_coefficient(s)? * 4.0 * PI * rho.powf(2.0 * s) / (2.0 * s))
}
