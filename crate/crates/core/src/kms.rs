// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Thermal Hadamard functions of the massless scalar field as image sums,
//! the KMS condition and the boosted convex-combination identity.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, QuadratureSpec};

/// Denominators below this magnitude are treated as lightcone singularities.
pub const SINGULARITY_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSumSpec {
    pub beta: f64,
    /// Images n ∈ [−nmax, nmax] are summed explicitly.
    pub nmax: usize,
    /// Rapidity used by the boosted variants.
    pub u: f64,
}

impl ImageSumSpec {
    pub fn new(beta: f64, nmax: usize, u: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() || nmax < 1 || !u.is_finite() {
            return Err(Error::Domain(format!("invalid image sum (β={beta}, nmax={nmax}, u={u})")));
        }
        Ok(Self { beta, nmax, u })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSum {
    /// Truncated sum plus the tail estimate.
    pub value: Complex64,
    /// Leading-order contribution of the images |n| > nmax.
    pub tail_estimate: f64,
    /// Upper bound on the error left after adding the tail estimate.
    pub tail_bound: f64,
}

/// ψ₁(x) for x > 0.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + 1.0 / x + x2 / 2.0 + x2 / x * (1.0 / 6.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 42.0 - x2 / 30.0)))
}

/// Images |n| > M behave as −1/(n²β²); their sum is 2ψ₁(M + 1)/β².
fn udw_tail(beta: f64, nmax: usize) -> (f64, f64) {
    let est = trigamma(nmax as f64 + 1.0) / (2.0 * PI * PI * beta * beta);
    (est, 2.0 / (PI * PI * beta * beta * nmax as f64))
}

fn guard(d: Complex64) -> Result<Complex64> {
    if d.norm() < SINGULARITY_GUARD {
        return Err(Error::Singularity(d.norm()));
    }
    Ok(d)
}

/// Sums `term(n)` over n ∈ [−nmax, nmax], smallest terms first.
fn image_sum(nmax: usize, term: impl Fn(f64) -> Result<Complex64>) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in (1..=nmax).rev() {
        let n = n as f64;
        acc += term(n)? + term(-n)?;
    }
    Ok(acc + term(0.0)?)
}

/// G_β(t, r) = −1/(4π²) Σ_n 1/((t + inβ)² − r²).
pub fn hadamard_thermal(spec: &ImageSumSpec, t: Complex64, r: f64) -> Result<ImageSum> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be non-negative, got {r}")));
    }
    let beta = spec.beta;
    let sum = image_sum(spec.nmax, |n| {
        let s = t + Complex64::new(0.0, n * beta);
        Ok(guard(s * s - r * r)?.inv())
    })?;
    let (est, bound) = udw_tail(beta, spec.nmax);
    Ok(ImageSum { value: -sum / (4.0 * PI * PI) + est, tail_estimate: est, tail_bound: bound })
}

/// Closed form of G_β(t, 0) for real t ≠ 0.
pub fn hadamard_thermal_r0(beta: f64, t: f64) -> f64 {
    let s = (PI * t / beta).sinh();
    -1.0 / (4.0 * beta * beta * s * s)
}

/// Boosted function G_β(Λ_u⁻¹x) at x = (t, x₁, r_⊥), summed with the
/// denominators t² − r² − n²β² + 2inβ(t cosh u + x₁ sinh u).
pub fn hadamard_boosted(spec: &ImageSumSpec, t: Complex64, x1: f64, r_perp: f64) -> Result<ImageSum> {
    let beta = spec.beta;
    let r2 = x1 * x1 + r_perp * r_perp;
    let t_rest = t * spec.u.cosh() + x1 * spec.u.sinh();
    let sum = image_sum(spec.nmax, |n| {
        let d = t * t - r2 - n * n * beta * beta + Complex64::new(0.0, 2.0 * n * beta) * t_rest;
        Ok(guard(d)?.inv())
    })?;
    let (est, bound) = udw_tail(beta, spec.nmax);
    Ok(ImageSum { value: -sum / (4.0 * PI * PI) + est, tail_estimate: est, tail_bound: bound })
}

/// −∂²G/∂t² for the derivative coupling, differentiated image by image.
pub fn hadamard_thermal_td(spec: &ImageSumSpec, t: Complex64, r: f64) -> Result<ImageSum> {
    hadamard_td_terms(spec, t, 1.0, 0.0, r * r)
}

/// −∂²G^u/∂t² at x = (t, x₁, r_⊥).
pub fn hadamard_boosted_td(spec: &ImageSumSpec, t: Complex64, x1: f64, r_perp: f64) -> Result<ImageSum> {
    hadamard_td_terms(spec, t, spec.u.cosh(), x1 * spec.u.sinh(), x1 * x1 + r_perp * r_perp)
}

/// Each image is 1/D with D = t² − r² − n²β² + 2inβ(ct + s), so
/// −∂²(1/D)/∂t² = 2/D² − 8(t + inβc)²/D³.
fn hadamard_td_terms(spec: &ImageSumSpec, t: Complex64, ch: f64, shift: f64, r2: f64) -> Result<ImageSum> {
    let beta = spec.beta;
    let sum = image_sum(spec.nmax, |n| {
        let ib = Complex64::new(0.0, n * beta);
        let d = guard(t * t - r2 - n * n * beta * beta + 2.0 * ib * (t * ch + shift))?;
        let dp = t + ib * ch;
        Ok(2.0 / (d * d) - 8.0 * dp * dp / (d * d * d))
    })?;
    // large images behave as (2 − 8c²)/(n⁴β⁴)
    let m3 = (spec.nmax as f64).powi(3);
    let est = (4.0 * ch * ch - 1.0) / (3.0 * PI * PI * m3 * beta.powi(4));
    let bound = 2.0 * (4.0 * ch * ch + 1.0) / (PI * PI * m3 * beta.powi(4));
    Ok(ImageSum { value: -sum / (4.0 * PI * PI) + est, tail_estimate: est, tail_bound: bound })
}

/// Closed form of the derivative-coupling function at r = 0 for real t ≠ 0.
pub fn hadamard_thermal_td_r0(beta: f64, t: f64) -> f64 {
    let x = PI * t / beta;
    let (s, ch) = (x.sinh(), x.cosh());
    PI * PI * (2.0 * ch * ch + 1.0) / (2.0 * beta.powi(4) * s.powi(4))
}

/// |G(t − iβ, r) − G(t, r)|.
pub fn kms_residual(spec: &ImageSumSpec, t: f64, r: f64) -> Result<f64> {
    let shifted = hadamard_thermal(spec, Complex64::new(t, -spec.beta), r)?.value;
    let direct = hadamard_thermal(spec, Complex64::new(t, 0.0), r)?.value;
    Ok((shifted - direct).norm())
}

/// KMS shift residual of the boosted function.
pub fn kms_residual_boosted(spec: &ImageSumSpec, t: f64, x1: f64, r_perp: f64) -> Result<f64> {
    let shifted = hadamard_boosted(spec, Complex64::new(t, -spec.beta), x1, r_perp)?.value;
    let direct = hadamard_boosted(spec, Complex64::new(t, 0.0), x1, r_perp)?.value;
    Ok((shifted - direct).norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexCheck {
    /// G^u_β(t, 0) from the image sum.
    pub boosted: Complex64,
    /// ½∫G_{β_ξ}(t, 0)dξ with the same truncation and tail treatment.
    pub average: Complex64,
    pub residual: f64,
}

fn directional_average(
    spec: &ImageSumSpec,
    quad: &QuadratureSpec,
    f: impl Fn(&ImageSumSpec) -> Result<Complex64>,
) -> Result<Complex64> {
    let (ch, sh) = (spec.u.cosh(), spec.u.sinh());
    let (x, w) = gauss_legendre(quad.gauss_legendre_points);
    let mut acc = Complex64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(&w) {
        let s = ImageSumSpec { beta: spec.beta * (ch - xi * sh), u: 0.0, ..*spec };
        acc += 0.5 * wi * f(&s)?;
    }
    Ok(acc)
}

/// |G^u_β(t, 0) − ½∫₋₁¹ G_{β_ξ}(t, 0)dξ| with β_ξ = β(cosh u − ξ sinh u).
pub fn boosted_convex_check(spec: &ImageSumSpec, t: f64, quad: &QuadratureSpec) -> Result<ConvexCheck> {
    let tc = Complex64::new(t, 0.0);
    let boosted = hadamard_boosted(spec, tc, 0.0, 0.0)?.value;
    let average = directional_average(spec, quad, |s| Ok(hadamard_thermal(s, tc, 0.0)?.value))?;
    Ok(ConvexCheck { boosted, average, residual: (boosted - average).norm() })
}

/// The same identity for the derivative-coupling function.
pub fn boosted_convex_check_td(spec: &ImageSumSpec, t: f64, quad: &QuadratureSpec) -> Result<ConvexCheck> {
    let tc = Complex64::new(t, 0.0);
    let boosted = hadamard_boosted_td(spec, tc, 0.0, 0.0)?.value;
    let average = directional_average(spec, quad, |s| Ok(hadamard_thermal_td(s, tc, 0.0)?.value))?;
    Ok(ConvexCheck { boosted, average, residual: (boosted - average).norm() })
}
