// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Bath-induced energy shift Δ(ω).
//!
//! The vacuum part needs a short-time cutoff ε. The thermal part is
//! λ²/(8π² sinh|u|) ∫₀^∞ kᵖ n_k ℓ(k) dk with p = 0 (UdW) or p = 2 (TD) and
//! ℓ(k) = log|(ω + ke^{−u})(ω − ke^{u}) / ((ω − ke^{−u})(ω + ke^{u}))|,
//! which is log-singular at k = ωe^{±u}.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{integrate_breaks, integrate_to_infinity_scaled, QuadratureSpec};

use super::{planck, BathSpec, Coupling};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Below this rapidity the thermal integral is replaced by its u → 0 limit.
const PV_CUTOFF_U: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambShift {
    /// Cutoff-dependent vacuum term, before the sign of ω is applied.
    pub vacuum: f64,
    /// Temperature-dependent term, before the sign of ω is applied.
    pub thermal: f64,
    /// sgn(ω)(vacuum + thermal).
    pub total: f64,
}

/// Δ(ω) for a signed nonzero frequency and cutoff ε > 0.
pub fn lamb_shift(bath: &BathSpec, omega: f64, epsilon: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(lamb_shift_parts(bath, omega, epsilon, quad)?.total)
}

pub fn lamb_shift_parts(bath: &BathSpec, omega: f64, epsilon: f64, quad: &QuadratureSpec) -> Result<LambShift> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Domain(format!("Lamb shift needs a nonzero frequency, got {omega}")));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain(format!("cutoff must be positive, got {epsilon}")));
    }
    let w = omega.abs();
    let l2 = bath.lambda * bath.lambda;
    let log_term = (w * epsilon).ln() + EULER_GAMMA - 1.0;
    let vacuum = match bath.coupling {
        Coupling::UdW => l2 * w / (4.0 * PI * PI) * log_term,
        Coupling::TD => {
            let tdf = 1.0 + 2.0 * (2.0 * bath.u).cosh();
            l2 * tdf * w.powi(3) / (12.0 * PI * PI) * (3.0 / (w * epsilon).powi(2) + log_term)
        }
    };
    let thermal = if l2 == 0.0 {
        0.0
    } else {
        let p = match bath.coupling {
            Coupling::UdW => 0,
            Coupling::TD => 2,
        };
        let u = bath.u.abs();
        let prefactor = l2 / (8.0 * PI * PI);
        // tolerance applies to Δ, so rescale for the bare integral
        let scaled = |s: f64| QuadratureSpec { abs_tol: quad.abs_tol * s / prefactor, ..*quad };
        if u < PV_CUTOFF_U {
            prefactor * thermal_integral_limit(bath.beta, w, p, &scaled(1.0))?
        } else {
            prefactor * thermal_integral(bath.beta, u, w, p, &scaled(u.sinh()))? / u.sinh()
        }
    };
    let sign = omega.signum();
    Ok(LambShift { vacuum, thermal, total: sign * (vacuum + thermal) })
}

/// ln|1 + y|.
fn lnabs1p(y: f64) -> f64 {
    if y.abs() < 0.5 {
        y.ln_1p()
    } else {
        (1.0 + y).abs().ln()
    }
}

/// ℓ(k) written as two differences that stay accurate when u is small.
fn log_kernel(k: f64, w: f64, u: f64) -> f64 {
    let (em, ep) = ((-u).exp(), u.exp());
    let two_sinh = 2.0 * u.sinh();
    // ln[(w + k e^{-u})/(w + k e^{u})]
    let plus = lnabs1p(-k * two_sinh / (w + k * ep));
    // ln|(w − k e^{u})/(w − k e^{−u})|
    let d = w - k * em;
    let y = -k * two_sinh / d;
    let minus = if y.abs() < 0.5 { y.ln_1p() } else { (w - k * ep).abs().ln() - d.abs().ln() };
    plus + minus
}

fn weight(beta: f64, k: f64, p: i32) -> f64 {
    let n = planck(beta * k);
    if p == 0 {
        n
    } else {
        k.powi(p) * n
    }
}

/// ∫₀^∞ kᵖ n_k ℓ(k) dk for u > 0, split at both singular points.
pub(crate) fn thermal_integral(beta: f64, u: f64, w: f64, p: i32, quad: &QuadratureSpec) -> Result<f64> {
    let (lo, hi) = (w * (-u).exp(), w * u.exp());
    let kmax = (10.0 / beta).max(2.0 * hi);
    let f = |k: f64| weight(beta, k, p) * log_kernel(k, w, u);
    let half = QuadratureSpec { abs_tol: 0.5 * quad.abs_tol, ..*quad };
    let finite = integrate_breaks(f, &[0.0, lo, hi, kmax], &half)?;
    let tail = integrate_to_infinity_scaled(f, kmax, 1.0 / beta, &half)?;
    Ok(finite.value + tail.value)
}

/// lim_{u→0} (1/sinh u) ∫₀^∞ kᵖ n_k ℓ(k) dk = −PV∫₀^∞ 4ωk^{p+1} n_k/(ω² − k²) dk.
pub(crate) fn thermal_integral_limit(beta: f64, w: f64, p: i32, quad: &QuadratureSpec) -> Result<f64> {
    let g = |k: f64| -4.0 * w * k * weight(beta, k, p) / (w + k);
    let gw = g(w);
    let half = QuadratureSpec { abs_tol: 0.5 * quad.abs_tol, ..*quad };
    // ∫₀^{2ω} dk/(ω − k) vanishes in the principal-value sense
    let near = integrate_breaks(|k| (g(k) - gw) / (w - k), &[0.0, w, 2.0 * w], &half)?;
    let kmax = (2.0 * w).max(10.0 / beta);
    let mid = integrate_breaks(|k| g(k) / (w - k), &[2.0 * w, kmax], &half)?;
    let tail = integrate_to_infinity_scaled(|k| g(k) / (w - k), kmax, 1.0 / beta, &half)?;
    Ok(near.value + mid.value + tail.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> QuadratureSpec {
        QuadratureSpec { abs_tol: 1e-12, ..Default::default() }
    }

    #[test]
    fn thermal_integral_oracle_values() {
        // Arbitrary-precision quadrature split at both singular points.
        let cases = [
            (1.0, 0.5, 1.0, 0, -1.270_099_734_021_844_5),
            (1.0, 0.5, 1.0, 2, 1.879_401_014_683_385_3),
            (2.0, 1.0, 0.7, 0, -1.241_990_686_664_179_9),
        ];
        for (beta, u, w, p, expected) in cases {
            let got = thermal_integral(beta, u, w, p, &tight()).unwrap();
            assert!((got - expected).abs() < 1e-10, "{beta} {u} {w} {p}: {got}");
        }
    }

    #[test]
    fn principal_value_limit() {
        let got = thermal_integral_limit(1.0, 1.0, 0, &tight()).unwrap();
        assert!((got + 2.580_921_053_665_335).abs() < 1e-9, "{got}");
        let small = thermal_integral(1.0, 1e-4, 1.0, 0, &tight()).unwrap() / 1e-4f64.sinh();
        assert!((small - got).abs() < 1e-6, "{small} vs {got}");
    }

    #[test]
    fn odd_in_frequency() {
        let q = QuadratureSpec::default();
        for b in [BathSpec::udw(1.0, 0.5, 0.3).unwrap(), BathSpec::td(1.0, 0.5, 0.3).unwrap()] {
            let plus = lamb_shift(&b, 1.3, 0.01, &q).unwrap();
            let minus = lamb_shift(&b, -1.3, 0.01, &q).unwrap();
            assert_eq!(plus, -minus);
        }
    }

    #[test]
    fn cold_bath_leaves_vacuum_term() {
        let b = BathSpec::udw(1e7, 0.5, 1.0).unwrap();
        let parts = lamb_shift_parts(&b, 1.0, 0.01, &QuadratureSpec::default()).unwrap();
        assert!(parts.thermal.abs() < 1e-12);
        let expected = 1.0 / (4.0 * PI * PI) * ((0.01f64).ln() + EULER_GAMMA - 1.0);
        assert!((parts.vacuum - expected).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        let b = BathSpec::udw(1.0, 0.5, 1.0).unwrap();
        let q = QuadratureSpec::default();
        assert!(lamb_shift(&b, 0.0, 0.1, &q).is_err());
        assert!(lamb_shift(&b, 1.0, 0.0, &q).is_err());
    }
}
