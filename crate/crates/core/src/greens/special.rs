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

//! Euler gamma, the Macdonald function `K_ν`, and Gauss–Legendre rules.

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler gamma function for `z > 0`.
pub fn gamma_fn(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("gamma is evaluated for z > 0 only, got {z}")));
    }
    if z < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        return Ok(PI / ((PI * z).sin() * gamma_fn(1.0 - z)?));
    }
    let x = z - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc)
}

const BESSEL_RTOL: f64 = 1e-14;
const BESSEL_MAX_LEVELS: usize = 14;
/// ln(1e16): the integrand is cut where it falls below 1e-16 of its peak.
const BESSEL_LOG_CUT: f64 = 36.841_361_487_904_734;

/// Modified Bessel function of the second kind `K_ν(z)` for `ν ∈ [0, 3/2]`, `z > 0`.
///
/// Uses `K_ν(z) = ∫₀^∞ e^{-z cosh t} cosh(νt) dt`. The integrand is even and
/// analytic in `t` and decays double-exponentially, so the trapezoidal rule on
/// `[0, t_max]` converges geometrically in the number of nodes. The step is
/// halved until successive estimates agree to `1e-14` relative.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("K_nu is evaluated for z > 0 only, got {z}")));
    }
    if !(0.0..=1.5).contains(&nu) {
        return Err(Error::domain(format!("Bessel order must lie in [0, 3/2], got {nu}")));
    }
    Ok(bessel_k_scaled(nu, z)? * (-z).exp())
}

/// `e^z K_ν(z)`, which stays representable for large `z`.
pub fn bessel_k_scaled(nu: f64, z: f64) -> Result<f64> {
    // log of e^z · e^{-z cosh t} e^{νt} / 2 is -2z sinh²(t/2) + νt - ln 2.
    let log_f = |t: f64| -2.0 * z * (0.5 * t).sinh().powi(2) + nu * t;
    let t_peak = if nu > 0.0 { (nu / z).asinh() } else { 0.0 };
    let cut = log_f(t_peak) - BESSEL_LOG_CUT;
    // log_f is concave, so bracket then bisect the crossing past the peak.
    let mut hi = t_peak + 1.0;
    while log_f(hi) > cut {
        hi = 2.0 * hi + 1.0;
    }
    let mut lo = t_peak;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if log_f(mid) > cut {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_max = hi;
    let f = |t: f64| {
        let base = -2.0 * z * (0.5 * t).sinh().powi(2);
        0.5 * ((base + nu * t).exp() + (base - nu * t).exp())
    };

    let mut nodes = 8usize;
    let mut h = t_max / nodes as f64;
    let mut sum = 0.5 * (f(0.0) + f(t_max)) + (1..nodes).map(|k| f(k as f64 * h)).sum::<f64>();
    let mut estimate = h * sum;
    for _ in 0..BESSEL_MAX_LEVELS {
        // Halving the step adds the odd nodes of the finer grid.
        let fresh: f64 = (0..nodes).map(|k| f((2 * k + 1) as f64 * 0.5 * h)).sum();
        sum += fresh;
        nodes *= 2;
        h *= 0.5;
        let refined = h * sum;
        if (refined - estimate).abs() <= BESSEL_RTOL * refined.abs() {
            return Ok(refined);
        }
        estimate = refined;
    }
    Err(Error::QuadratureFailure(format!(
        "K_{nu}({z}) trapezoid refinement stalled at {nodes} nodes"
    )))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫∫_{[-1,1]²} f(u, v) du dv` by product Gauss–Legendre, doubling the order
/// until two estimates agree to `rtol`.
pub fn square_integral<F: Fn(f64, f64) -> f64>(f: F, rtol: f64) -> Result<f64> {
    let mut previous: Option<f64> = None;
    let mut order = 8;
    while order <= 512 {
        let (x, w) = gauss_legendre(order);
        let mut acc = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            let row: f64 = x.iter().zip(&w).map(|(xj, wj)| wj * f(*xi, *xj)).sum();
            acc += wi * row;
        }
        if let Some(prev) = previous {
            if (acc - prev).abs() <= rtol * acc.abs().max(f64::MIN_POSITIVE) {
                return Ok(acc);
            }
        }
        previous = Some(acc);
        order *= 2;
    }
    Err(Error::QuadratureFailure(format!(
        "tensor Gauss-Legendre did not reach relative {rtol}"
    )))
}
