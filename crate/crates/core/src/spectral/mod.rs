// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Frequency-domain bath coefficients for a probe moving at constant
//! rapidity through a thermal massless scalar field.
//!
//! Natural units ħ = c = k_B = 1: frequencies are inverse times, `beta` is a
//! time and the rapidity `u` is dimensionless.

mod asymptotic;
mod lamb;
pub mod polylog;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, QuadratureSpec};

pub use asymptotic::{n_asymptotic, AsymptoticRegime};
pub use lamb::{lamb_shift, lamb_shift_parts, LambShift};
pub use polylog::{f_aux, polylog, zeta, ZETA3};

/// How the probe couples to the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coupling {
    /// Linear coupling to the field operator.
    #[serde(rename = "udw", alias = "UdW")]
    UdW,
    /// Coupling to the lab-frame time derivative of the field.
    #[serde(rename = "td", alias = "TD")]
    TD,
}

impl Coupling {
    pub fn name(self) -> &'static str {
        match self {
            Coupling::UdW => "udw",
            Coupling::TD => "td",
        }
    }
}

impl std::fmt::Display for Coupling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Coupling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "udw" => Ok(Coupling::UdW),
            "td" => Ok(Coupling::TD),
            other => Err(Error::Domain(format!("unknown coupling '{other}'"))),
        }
    }
}

/// Static thermal bath seen by a probe moving at rapidity `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub coupling: Coupling,
    pub beta: f64,
    pub u: f64,
    pub lambda: f64,
}

impl BathSpec {
    pub fn new(coupling: Coupling, beta: f64, u: f64, lambda: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be positive and finite, got {beta}")));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda must be non-negative, got {lambda}")));
        }
        if !u.is_finite() {
            return Err(Error::Domain(format!("rapidity must be finite, got {u}")));
        }
        Ok(Self { coupling, beta, u, lambda })
    }

    pub fn udw(beta: f64, u: f64, lambda: f64) -> Result<Self> {
        Self::new(Coupling::UdW, beta, u, lambda)
    }

    pub fn td(beta: f64, u: f64, lambda: f64) -> Result<Self> {
        Self::new(Coupling::TD, beta, u, lambda)
    }

    pub fn with_u(self, u: f64) -> Self {
        Self { u, ..self }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        Self { beta, ..self }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    /// Effective mean quanta number N(ω) for this coupling.
    pub fn occupation(&self, omega: f64) -> Result<f64> {
        match self.coupling {
            Coupling::UdW => n_udw(self, omega),
            Coupling::TD => n_td(self, omega),
        }
    }

    /// Vacuum decay rate γ(ω).
    pub fn rate(&self, omega: f64) -> Result<f64> {
        gamma_rate(self, omega)
    }
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("frequency must be positive, got {omega}")))
    }
}

/// Planck occupation 1/(e^{βω} − 1).
pub fn planck_n(beta: f64, omega: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    check_frequency(omega)?;
    Ok(planck(beta * omega))
}

/// 1/(eˣ − 1) for x > 0.
pub(crate) fn planck(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

/// ln(1 − e^{−x}) for x > 0.
fn log_one_minus_exp_neg(x: f64) -> f64 {
    if x < std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

const PLANCK_CUTOFF_U: f64 = 1e-6;
const EXPANSION_CUTOFF_U: f64 = 1e-3;

/// Second-order small-rapidity correction coefficient c such that
/// N = n + c u² + O(u⁴), with x = βω and n = planck(x).
pub(crate) fn low_velocity_coefficient(coupling: Coupling, x: f64) -> f64 {
    let n = planck(x);
    let n1 = n * (n + 1.0); // −ω n′(ω)/x
    let n2 = n1 * (2.0 * n + 1.0); // ω² n″(ω)/x²
    let first = match coupling {
        Coupling::UdW => -0.5,
        Coupling::TD => -7.0 / 6.0,
    };
    first * x * n1 + x * x * n2 / 6.0
}

/// N for the linear (UdW) coupling:
/// ln[(1 − e^{−βωe^{u}})/(1 − e^{−βωe^{−u}})] / (2βω sinh u).
pub fn n_udw(bath: &BathSpec, omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    let x = bath.beta * omega;
    let u = bath.u.abs();
    if u < PLANCK_CUTOFF_U {
        return Ok(planck(x));
    }
    if u < EXPANSION_CUTOFF_U {
        return Ok(planck(x) + low_velocity_coefficient(Coupling::UdW, x) * u * u);
    }
    let lo = x * (-u).exp();
    let hi = x * u.exp();
    let num = log_one_minus_exp_neg(hi) - log_one_minus_exp_neg(lo);
    Ok(num / (2.0 * x * u.sinh()))
}

/// N for the time-derivative coupling:
/// 3[F(βωe^{−u}) − F(βωe^{u})] / (2β³ω³ sinh u [1 + 2cosh 2u]).
pub fn n_td(bath: &BathSpec, omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    let x = bath.beta * omega;
    let u = bath.u.abs();
    if u < PLANCK_CUTOFF_U {
        return Ok(planck(x));
    }
    if u < EXPANSION_CUTOFF_U {
        return Ok(planck(x) + low_velocity_coefficient(Coupling::TD, x) * u * u);
    }
    let lo = x * (-u).exp();
    let hi = x * u.exp();
    let diff =
        if lo < 2.0 { polylog::f_aux_complement(hi) - polylog::f_aux_complement(lo) } else { f_aux(lo)? - f_aux(hi)? };
    Ok(3.0 * diff / (2.0 * x.powi(3) * u.sinh() * (1.0 + 2.0 * (2.0 * u).cosh())))
}

/// Vacuum decay rate: λ²ω/(2π) (UdW) or λ²[1 + 2cosh 2u]ω³/(6π) (TD).
pub fn gamma_rate(bath: &BathSpec, omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    let l2 = bath.lambda * bath.lambda;
    Ok(match bath.coupling {
        Coupling::UdW => l2 * omega / (2.0 * PI),
        Coupling::TD => l2 * (1.0 + 2.0 * (2.0 * bath.u).cosh()) * omega.powi(3) / (6.0 * PI),
    })
}

fn check_direction(xi: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&xi) {
        Ok(())
    } else {
        Err(Error::Domain(format!("direction cosine {xi} outside [-1, 1]")))
    }
}

/// Doppler-shifted inverse temperature β(cosh u − ξ sinh u).
pub fn directional_beta(bath: &BathSpec, xi: f64) -> Result<f64> {
    check_direction(xi)?;
    Ok(bath.beta * (bath.u.cosh() - xi * bath.u.sinh()))
}

/// Probability density w(ξ) on [-1, 1] (normalised as ½∫w dξ = 1).
pub fn directional_weight(bath: &BathSpec, xi: f64) -> Result<f64> {
    check_direction(xi)?;
    Ok(match bath.coupling {
        Coupling::UdW => 1.0,
        Coupling::TD => {
            let k = bath.u.cosh() - xi * bath.u.sinh();
            3.0 * k * k / (1.0 + 2.0 * (2.0 * bath.u).cosh())
        }
    })
}

/// Gauss–Legendre nodes on [-1, 1] paired with the combined weight
/// ½ · wᵢ · w(ξᵢ), so that Σ weight · f(ξ) approximates ½∫w(ξ) f(ξ) dξ.
pub fn directional_nodes(bath: &BathSpec, quad: &QuadratureSpec) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(quad.gauss_legendre_points);
    x.into_iter()
        .zip(w)
        .map(|(xi, wi)| (xi, 0.5 * wi * directional_weight(bath, xi).expect("node inside [-1, 1]")))
        .collect()
}

/// N(ω) as the w-weighted directional average of Planck occupations at the
/// directional temperatures, ½∫ w(ξ)/(e^{β_ξ ω} − 1) dξ.
pub fn n_via_directional_average(bath: &BathSpec, omega: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_frequency(omega)?;
    if quad.gauss_legendre_points == 0 {
        return Err(Error::Quadrature { tolerance: 0.0, estimate: f64::INFINITY });
    }
    let mut sum = 0.0;
    for (xi, weight) in directional_nodes(bath, quad) {
        sum += weight * planck(directional_beta(bath, xi)? * omega);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn udw(beta: f64, u: f64) -> BathSpec {
        BathSpec::udw(beta, u, 1.0).unwrap()
    }

    fn td(beta: f64, u: f64) -> BathSpec {
        BathSpec::td(beta, u, 1.0).unwrap()
    }

    #[test]
    fn planck_examples() {
        assert!((planck_n(1.0, 2f64.ln()).unwrap() - 1.0).abs() < 1e-15);
        let e = std::f64::consts::E;
        assert!((planck_n(1.0, 1.0).unwrap() - 1.0 / (e - 1.0)).abs() < 1e-15);
        let x: f64 = 40.0;
        assert!((planck_n(1.0, x).unwrap() / (-x).exp() - 1.0).abs() < 1e-15);
        assert!(planck_n(1.0, 0.0).is_err());
        assert!(planck_n(0.0, 1.0).is_err());
        assert!(planck_n(-1.0, 1.0).is_err());
    }

    #[test]
    fn bath_validation() {
        assert!(BathSpec::udw(0.0, 0.0, 1.0).is_err());
        assert!(BathSpec::udw(1.0, f64::NAN, 1.0).is_err());
        assert!(BathSpec::td(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn zero_velocity_is_planck() {
        let w = 2f64.ln();
        assert!((n_udw(&udw(1.0, 0.0), w).unwrap() - 1.0).abs() < 1e-15);
        assert!((n_udw(&udw(1.0, 1e-9), w).unwrap() - 1.0).abs() < 1e-15);
        assert!((n_td(&td(1.0, 1e-9), w).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn evenness_in_rapidity() {
        for u in [1e-4, 0.3, 1.0, 4.0] {
            for w in [0.1, 1.0, 7.0] {
                assert_eq!(n_udw(&udw(1.0, u), w).unwrap(), n_udw(&udw(1.0, -u), w).unwrap());
                assert_eq!(n_td(&td(1.0, u), w).unwrap(), n_td(&td(1.0, -u), w).unwrap());
            }
        }
    }

    #[test]
    fn frozen_udw_value() {
        // High-precision quadrature of ∫ n_k dk over [e^{-1}, e] / (2 sinh 1).
        let n = n_udw(&udw(1.0, 1.0), 1.0).unwrap();
        assert!((n - 0.472_277_032_722_828_4).abs() < 1e-14, "{n}");
    }

    #[test]
    fn frozen_td_value() {
        let n = n_td(&td(1.0, 1.0), 1.0).unwrap();
        assert!((n - 0.200_942_042_869_023_33).abs() < 1e-14, "{n}");
    }

    #[test]
    fn rates() {
        let b = udw(1.0, 3.0);
        assert!((gamma_rate(&b, 2.0 * PI).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma_rate(&td(1.0, 0.0), 1.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let ratio = gamma_rate(&td(1.0, 1.0), 1.0).unwrap() / gamma_rate(&td(1.0, 0.0), 1.0).unwrap();
        assert!((ratio - (1.0 + 2.0 * 2f64.cosh()) / 3.0).abs() < 1e-14);
        assert!(gamma_rate(&b, -1.0).is_err());
    }

    #[test]
    fn directional_examples() {
        let b = udw(2.0, 0.7);
        assert_eq!(directional_beta(&udw(2.0, 0.0), 0.3).unwrap(), 2.0);
        assert!((directional_beta(&b, 1.0).unwrap() - 2.0 * (-0.7f64).exp()).abs() < 1e-15);
        assert!((directional_beta(&b, -1.0).unwrap() - 2.0 * 0.7f64.exp()).abs() < 1e-14);
        assert!(directional_beta(&b, 1.5).is_err());
        assert_eq!(directional_weight(&b, 0.2).unwrap(), 1.0);
        assert!((directional_weight(&td(1.0, 0.0), -0.4).unwrap() - 1.0).abs() < 1e-15);
        assert!(directional_weight(&b, -1.01).is_err());
    }

    #[test]
    fn directional_average_at_rest_is_planck() {
        let q = QuadratureSpec::default();
        for b in [udw(1.3, 0.0), td(1.3, 0.0)] {
            let avg = n_via_directional_average(&b, 0.8, &q).unwrap();
            assert!((avg - planck(1.3 * 0.8)).abs() < 1e-14);
        }
    }

    #[test]
    fn directional_average_matches_closed_forms() {
        let q = QuadratureSpec::default();
        let b = udw(1.0, 1.0);
        assert!((n_via_directional_average(&b, 1.0, &q).unwrap() - n_udw(&b, 1.0).unwrap()).abs() < 1e-10);
        let b = td(1.0, 0.5);
        assert!((n_via_directional_average(&b, 2.0, &q).unwrap() - n_td(&b, 2.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn expansion_window_is_continuous() {
        // closed form, expansion and Planck branches meet smoothly
        for b in [udw(1.0, 0.0), td(1.0, 0.0)] {
            for w in [0.3, 1.0, 4.0] {
                let below = b.with_u(EXPANSION_CUTOFF_U * (1.0 - 1e-9)).occupation(w).unwrap();
                let above = b.with_u(EXPANSION_CUTOFF_U * (1.0 + 1e-9)).occupation(w).unwrap();
                assert!((below - above).abs() < 1e-11 * below, "{:?} {w}: {below} {above}", b.coupling);
                let below = b.with_u(PLANCK_CUTOFF_U * 0.999).occupation(w).unwrap();
                let above = b.with_u(PLANCK_CUTOFF_U * 1.001).occupation(w).unwrap();
                assert!((below - above).abs() < 1e-11 * below);
            }
        }
    }
}
