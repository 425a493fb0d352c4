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

use rayon::prelude::*;

use super::special::square_integral;
use super::{ball_integral, green_whole_space, riesz_coefficient, GreenEvaluation, KernelParams};
use crate::compensated::{merge_ordered, CompensatedSum};
use crate::error::{Error, Result};

/// Factor applied to the analytic truncation bounds before they are compared
/// with the requested tolerance and reported.
pub const TRUNCATION_SAFETY: f64 = 10.0;

/// Default cap on lattice nodes summed by [`periodized_green`].
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

const TWO_PI: f64 = 2.0 * PI;
const CELL_VOLUME: f64 = TWO_PI * TWO_PI * TWO_PI;
/// Half-diagonal of a lattice cell, `√3 π`.
const CELL_HALF_DIAGONAL: f64 = 1.732_050_807_568_877_2 * PI;
const QUADRATURE_RTOL: f64 = 1e-13;

/// Reduces `x` into the cell `[-π, π]³` and rejects lattice points.
fn reduce(x: [f64; 3]) -> Result<[f64; 3]> {
    if x.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain("torus point must be finite"));
    }
    let r = x.map(|c| c - TWO_PI * (c / TWO_PI).round());
    if r.iter().all(|c| c.abs() <= 1e-12) {
        return Err(Error::SingularPoint);
    }
    Ok(r)
}

fn norm_sq(v: [f64; 3]) -> f64 {
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

/// Upper bound on `(2π)³ Σ G(x - 2πn)` over nodes farther than `rho` from `x`.
///
/// Uses `K_ν <= K_{3/2}` for `ν <= 3/2`, so
/// `G(r) <= B(r) = prefactor · a^ν √(π/2a) r^{s-2} e^{-ar} (1 + 1/(ar))`, which is
/// decreasing. Each omitted node owns the lattice cell around it, whose points
/// lie within `√3π`, so the node sum is dominated by
/// `∫_{u0}^∞ 4π (u + √3π)² B(u) du` with `u0 = rho - 2√3π`.
fn exponential_tail(p: &KernelParams, rho: f64) -> f64 {
    let u0 = rho - 2.0 * CELL_HALF_DIAGONAL;
    if u0 <= 0.0 {
        return f64::INFINITY;
    }
    let (a, s) = (p.a(), p.s());
    let scale = p.prefactor() * a.powf(p.nu()) * (PI / (2.0 * a)).sqrt();
    let integrand = |u: f64| {
        let au = a * u;
        4.0 * PI * (u + CELL_HALF_DIAGONAL).powi(2) * scale * u.powf(s - 2.0) * (-au).exp() * (1.0 + 1.0 / au)
    };
    // Trapezoid in w = a (u - u0) over [0, 80]; the integrand is smooth and
    // decays like e^{-w}.
    let steps = 4000;
    let h = 80.0 / steps as f64;
    let mut acc = 0.5 * (integrand(u0) + integrand(u0 + 80.0 / a));
    for k in 1..steps {
        acc += integrand(u0 + k as f64 * h / a);
    }
    acc * h / a
}

/// `M_{a,s}(x) = (2π)³ Σ_n G(x - 2πn) - a^{-2s}` for `a > 0`.
///
/// Nodes within `2πR` of `x` are summed, with `R` the smallest node radius at
/// which [`TRUNCATION_SAFETY`] times the exponential tail bound is `<= tol`.
pub fn periodized_green(p: &KernelParams, x: [f64; 3], tol: f64) -> Result<GreenEvaluation> {
    periodized_green_with_budget(p, x, tol, DEFAULT_NODE_BUDGET)
}

pub fn periodized_green_with_budget(p: &KernelParams, x: [f64; 3], tol: f64, node_budget: u64) -> Result<GreenEvaluation> {
    if !(p.a() > 0.0) {
        return Err(Error::domain("the exponential periodization needs a > 0"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let y = reduce(x)?;
    let nodes_for = |r: usize| (4.0 / 3.0 * PI * (r as f64 + 1.0).powi(3)).ceil() as u64;
    let mut radius = 2usize;
    loop {
        let bound = TRUNCATION_SAFETY * exponential_tail(p, TWO_PI * radius as f64);
        if bound <= tol {
            break;
        }
        if nodes_for(radius + 1) > node_budget {
            return Err(Error::BudgetExceeded {
                value: f64::NAN,
                tail_bound: bound,
                radius,
                requested: tol,
            });
        }
        radius += 1;
    }
    let rho = TWO_PI * radius as f64;
    let rho2 = rho * rho;
    let reach = radius as i64 + 1;

    let slices: Vec<Result<CompensatedSum<f64>>> = (-reach..=reach)
        .into_par_iter()
        .map(|n1| {
            let mut acc = CompensatedSum::new();
            for n2 in -reach..=reach {
                for n3 in -reach..=reach {
                    let d = [
                        y[0] - TWO_PI * n1 as f64,
                        y[1] - TWO_PI * n2 as f64,
                        y[2] - TWO_PI * n3 as f64,
                    ];
                    let r2 = norm_sq(d);
                    if r2 <= rho2 {
                        acc.add(green_whole_space(p, r2.sqrt())?);
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let slices = slices.into_iter().collect::<Result<Vec<_>>>()?;
    let lattice = merge_ordered(&slices).value();

    Ok(GreenEvaluation {
        x,
        value: CELL_VOLUME * lattice - p.a().powf(-2.0 * p.s()),
        truncation_radius: radius,
        error_estimate: TRUNCATION_SAFETY * exponential_tail(p, rho),
    })
}

fn check_zero_a(s: f64, radius: usize) -> Result<KernelParams> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!(
            "the a = 0 periodization needs 0 < s < 1, got s = {s}"
        )));
    }
    if radius == 0 {
        return Err(Error::domain("periodization radius must be at least 1"));
    }
    KernelParams::new(0.0, s)
}

/// `∫_{[-L,L]³} c_s |y|^{2s-3} dy`.
///
/// The inscribed ball `|y| <= L` is integrated in closed form. On the rest of
/// the cube, each of the six pyramids over a face is written as
/// `y = λ L (1, u, v)`; the radial integral is explicit and the remaining
/// smooth `(u, v)` integral uses tensor Gauss–Legendre.
pub fn cube_kernel_integral(s: f64, half_width: f64) -> Result<f64> {
    let c = riesz_coefficient(s)?;
    let shell = square_integral(
        |u, v| {
            let q = 1.0 + u * u + v * v;
            q.powf(s - 1.5) - q.powf(-1.5)
        },
        QUADRATURE_RTOL,
    )?;
    Ok(ball_integral(s, half_width)? + c * half_width.powf(2.0 * s) * 6.0 * shell / (2.0 * s))
}

/// Leading-order remainder of the grouped periodization outside the cube of
/// nodes `|n|_∞ <= R`, per unit `|x|²`.
///
/// For the omitted nodes the grouped differences sum to
/// `(|x|²/6) (2π)^{-3} ∫_{|y|_∞ > L} ΔG dy` up to `O(L^{2s-4})`, with
/// `L = (2R+1)π` the half-width of the union of the summed cells. The integral
/// is minus the outward flux of `∇G` through the cube,
/// `6 c_s (3-2s) L^{2s-2} ∫∫_{[-1,1]²} (1+u²+v²)^{s-5/2} du dv`.
fn outer_tail_coefficient(s: f64, radius: usize) -> Result<f64> {
    let c = riesz_coefficient(s)?;
    let half_width = (2 * radius + 1) as f64 * PI;
    let flux = square_integral(|u, v| (1.0 + u * u + v * v).powf(s - 2.5), QUADRATURE_RTOL)?;
    Ok(c * (3.0 - 2.0 * s) * half_width.powf(2.0 * s - 2.0) * flux / CELL_VOLUME)
}

/// `Σ' G(2πn)` over `0 < |n|_∞ <= R`, summed over the nonnegative octant
/// with reflection multiplicities.
fn lattice_self_sum(p: &KernelParams, radius: usize) -> Result<f64> {
    let r = radius as i64;
    let slices: Vec<Result<CompensatedSum<f64>>> = (0..=r)
        .into_par_iter()
        .map(|n1| {
            let mut acc = CompensatedSum::new();
            for n2 in 0..=r {
                for n3 in 0..=r {
                    if n1 == 0 && n2 == 0 && n3 == 0 {
                        continue;
                    }
                    let n = [n1, n2, n3];
                    let mult = n.iter().filter(|&&c| c != 0).count();
                    let g = green_whole_space(p, TWO_PI * (norm_sq(n.map(|c| c as f64))).sqrt())?;
                    acc.add((1u32 << mult) as f64 * g);
                }
            }
            Ok(acc)
        })
        .collect();
    let slices = slices.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(merge_ordered(&slices).value())
}

/// Grouped bracket `G(x) + Σ'_{|n|_∞<=R} [G(x - 2πn) - G(2πn)]`, the eight
/// reflections `(±n₁, ±n₂, ±n₃)` of each node summed together.
fn grouped_sum(p: &KernelParams, y: [f64; 3], radius: usize) -> Result<f64> {
    let r = radius as i64;
    let slices: Vec<Result<CompensatedSum<f64>>> = (0..=r)
        .into_par_iter()
        .map(|n1| {
            let mut acc = CompensatedSum::new();
            for n2 in 0..=r {
                for n3 in 0..=r {
                    let n = [n1, n2, n3];
                    if n1 == 0 && n2 == 0 && n3 == 0 {
                        acc.add(green_whole_space(p, norm_sq(y).sqrt())?);
                        continue;
                    }
                    let node = TWO_PI * norm_sq(n.map(|c| c as f64)).sqrt();
                    let g_node = green_whole_space(p, node)?;
                    let mut group = CompensatedSum::new();
                    for sign in 0..8u32 {
                        // Skip sign flips of zero coordinates so each node appears once.
                        if (0..3).any(|i| sign & (1 << i) != 0 && n[i] == 0) {
                            continue;
                        }
                        let d: [f64; 3] = std::array::from_fn(|i| {
                            let c = if sign & (1 << i) != 0 { -n[i] } else { n[i] };
                            y[i] - TWO_PI * c as f64
                        });
                        let r2 = norm_sq(d);
                        if r2 == 0.0 {
                            return Err(Error::SingularPoint);
                        }
                        group.add(green_whole_space(p, r2.sqrt())? - g_node);
                    }
                    acc.add(group.value());
                }
            }
            Ok(acc)
        })
        .collect();
    let slices = slices.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(merge_ordered(&slices).value())
}

/// Zero-mean constant `C₀'` for the grouped `a = 0` periodization truncated at
/// node radius `R`: minus `(2π)³` times the torus average of the truncated
/// bracket (including its outer-tail correction).
///
/// Averaging the node sum over the cell `[-π, π]³` unfolds it into the kernel
/// integral over the cube `[-L, L]³`, `L = (2R+1)π`.
pub fn zero_mean_constant(s: f64, radius: usize) -> Result<f64> {
    let p = check_zero_a(s, radius)?;
    zero_mean_constant_inner(&p, radius, lattice_self_sum(&p, radius)?)
}

fn zero_mean_constant_inner(p: &KernelParams, radius: usize, self_sum: f64) -> Result<f64> {
    let s = p.s();
    let half_width = (2 * radius + 1) as f64 * PI;
    let mean_tail = outer_tail_coefficient(s, radius)? * PI * PI;
    let mean = cube_kernel_integral(s, half_width)? / CELL_VOLUME - self_sum + mean_tail;
    Ok(-CELL_VOLUME * mean)
}

/// `M_{0,s}(x)` for `0 < s < 1` from the grouped second-difference
/// periodization over nodes `|n|_∞ <= R`.
///
/// The omitted nodes contribute `k |x|² + O(R^{2s-4})` with `k` known in closed
/// form; that leading term is added, and [`zero_mean_constant`] fixes the
/// additive constant. The reported error estimate is the size of the next
/// order, `(3π²/L²)` relative to the applied correction, times
/// [`TRUNCATION_SAFETY`].
pub fn periodized_green_zero_a(s: f64, x: [f64; 3], radius: usize) -> Result<GreenEvaluation> {
    let p = check_zero_a(s, radius)?;
    let y = reduce(x)?;
    let tail = outer_tail_coefficient(s, radius)?;
    let x2 = norm_sq(y);
    let bracket = grouped_sum(&p, y, radius)? + tail * x2;
    let constant = zero_mean_constant_inner(&p, radius, lattice_self_sum(&p, radius)?)?;
    let half_width = (2 * radius + 1) as f64 * PI;
    let next_order = 3.0 * PI * PI / (half_width * half_width);
    Ok(GreenEvaluation {
        x,
        value: CELL_VOLUME * bracket + constant,
        truncation_radius: radius,
        error_estimate: TRUNCATION_SAFETY * CELL_VOLUME * tail * (x2 + PI * PI) * next_order,
    })
}
