// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form solutions for the qubit, the oscillator and the three-level
//! atom. Basis orders follow [`crate::presets`].

use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{c, CMat};

/// Initial pure state e^{iφ}cos(θ/2)|e⟩ + sin(θ/2)|g⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitInit {
    pub theta: f64,
    pub phi: f64,
}

impl QubitInit {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::Domain(format!("need θ in [0, π] and finite φ, got ({theta}, {phi})")));
        }
        Ok(Self { theta, phi })
    }

    pub fn excited() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn ground() -> Self {
        Self { theta: std::f64::consts::PI, phi: 0.0 }
    }
}

/// Qubit density matrix at time τ in the basis (excited, ground).
///
/// `omega` is the Lamb-shifted transition frequency that sets the phase.
pub fn qubit_rho(init: QubitInit, n: f64, gamma0: f64, omega: f64, tau: f64) -> DensityMatrix {
    let k = 2.0 * n + 1.0;
    let decay = (-gamma0 * k * tau).exp();
    let ee = 0.5 * (1.0 + decay * init.theta.cos() - (1.0 - decay) / k);
    let coh = num_complex::Complex64::from_polar(
        0.5 * (-0.5 * gamma0 * k * tau).exp() * init.theta.sin(),
        init.phi - omega * tau,
    );
    let m = CMat::from_row_slice(2, 2, &[c(ee, 0.0), coh, coh.conj(), c(1.0 - ee, 0.0)]);
    DensityMatrix::new(m).expect("analytic qubit state is a density matrix")
}

/// Qubit heat current for a bath N starting from the Gibbs state with occupation n₀.
pub fn qubit_heat_current(n0: f64, n: f64, gamma0: f64, omega0: f64, tau: f64) -> f64 {
    gamma0 * omega0 * (-gamma0 * (1.0 + 2.0 * n) * tau).exp() * (n - n0) / (2.0 * n0 + 1.0)
}

/// Total heat absorbed by the qubit, ∫₀^∞ q dτ.
pub fn qubit_delta_q(n0: f64, n: f64, omega0: f64) -> f64 {
    omega0 * (n - n0) / ((2.0 * n0 + 1.0) * (2.0 * n + 1.0))
}

/// Geometric distribution p_n = Nⁿ/(N + 1)ⁿ⁺¹ on `dim` Fock levels.
pub fn oscillator_stationary(n: f64, dim: usize) -> Result<DensityMatrix> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::Domain(format!("occupation must be non-negative, got {n}")));
    }
    let q = n / (n + 1.0);
    let tail = q.powi(dim as i32);
    if dim < 2 || tail >= 1e-10 {
        return Err(Error::InsufficientDimension { dim, tail });
    }
    let p: Vec<f64> = (0..dim).map(|k| q.powi(k as i32) / (n + 1.0)).collect();
    let total: f64 = p.iter().sum();
    DensityMatrix::from_populations(&p.iter().map(|x| x / total).collect::<Vec<_>>())
}

/// Smallest truncation whose neglected tail (N/(N + 1))^dim is below `tail`.
pub fn oscillator_dim(n: f64, tail: f64) -> usize {
    if n <= 0.0 {
        return 2;
    }
    let q = n / (n + 1.0);
    ((tail.ln() / q.ln()).floor() as usize + 1).max(2)
}

pub fn oscillator_heat_current(n0: f64, n: f64, gamma0: f64, omega0: f64, tau: f64) -> f64 {
    gamma0 * omega0 * (-gamma0 * tau).exp() * (n - n0)
}

pub fn oscillator_delta_q(n0: f64, n: f64, omega0: f64) -> f64 {
    omega0 * (n - n0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreeLevelState {
    /// Diagonal state in the basis order (a, b, c).
    pub rho: DensityMatrix,
    /// Set when N₁ = N₂ = 0 and the pure ground state is returned.
    pub ground_limit: bool,
}

/// Stationary populations of the three-level atom with occupations N₁ on a↔c
/// and N₂ on b↔c.
pub fn three_level_stationary(n1: f64, n2: f64) -> Result<ThreeLevelState> {
    if !(n1 >= 0.0 && n2 >= 0.0) || !(n1 + n2).is_finite() {
        return Err(Error::Domain(format!("occupations must be non-negative, got ({n1}, {n2})")));
    }
    let den = 3.0 * n1 * n2 + n1 + n2;
    if den == 0.0 {
        return Ok(ThreeLevelState { rho: DensityMatrix::from_populations(&[1.0, 0.0, 0.0])?, ground_limit: true });
    }
    let p = [(n1 + 1.0) * n2 / den, n1 * (n2 + 1.0) / den, n1 * n2 / den];
    Ok(ThreeLevelState { rho: DensityMatrix::from_populations(&p)?, ground_limit: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::quad::{integrate_to_infinity, QuadratureSpec};

    #[test]
    fn qubit_initial_and_late_states() {
        let init = QubitInit::new(1.1, 0.4).unwrap();
        let psi = nalgebra::DVector::from_vec(vec![
            num_complex::Complex64::from_polar((0.55f64).cos(), 0.4),
            c((0.55f64).sin(), 0.0),
        ]);
        let pure = DensityMatrix::pure(&psi).unwrap();
        assert!(max_abs(&(qubit_rho(init, 0.7, 0.2, 1.0, 0.0).matrix() - pure.matrix())) < 1e-15);
        let late = qubit_rho(init, 0.7, 0.2, 1.0, 500.0);
        assert!((late[(0, 0)].re - 0.7 / 2.4).abs() < 1e-14);
        assert!(late[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn ground_start_excites_at_gamma_n() {
        let (n, g) = (0.3, 0.5);
        let tau = 1e-6;
        let p = qubit_rho(QubitInit::ground(), n, g, 1.0, tau)[(0, 0)].re;
        assert!((p / tau - g * n).abs() < 1e-6);
    }

    #[test]
    fn heat_currents_integrate_to_delta_q() {
        let q = QuadratureSpec::default();
        let (n0, n, g, w) = (0.2, 0.9, 0.3, 1.5);
        let qubit = integrate_to_infinity(|t| qubit_heat_current(n0, n, g, w, t), 0.0, &q).unwrap().value;
        assert!((qubit - qubit_delta_q(n0, n, w)).abs() < 1e-9);
        let osc = integrate_to_infinity(|t| oscillator_heat_current(n0, n, g, w, t), 0.0, &q).unwrap().value;
        assert!((osc - oscillator_delta_q(n0, n, w)).abs() < 1e-9);
        assert_eq!(qubit_heat_current(n, n, g, w, 0.7), 0.0);
        assert!((qubit_heat_current(n0, n, g, w, 0.0) - g * w * (n - n0) / (2.0 * n0 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn oscillator_distribution() {
        let rho = oscillator_stationary(1.0, 40).unwrap();
        for (k, p) in rho.populations().iter().enumerate() {
            assert!((p - 0.5f64.powi(k as i32 + 1)).abs() < 1e-11);
        }
        let mean: f64 = rho.populations().iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        assert!((mean - 1.0).abs() < 1e-8);
        assert_eq!(oscillator_stationary(0.0, 2).unwrap().populations(), vec![1.0, 0.0]);
        assert!(matches!(oscillator_stationary(1.0, 20), Err(Error::InsufficientDimension { .. })));
        assert_eq!(oscillator_dim(1.0, 1e-10), 34);
        assert!(oscillator_stationary(1.0, 34).is_ok());
        assert!(oscillator_stationary(1.0, 33).is_err());
    }

    #[test]
    fn three_level_populations() {
        let s = three_level_stationary(1.0, 1.0).unwrap();
        assert!(!s.ground_limit);
        let p = s.rho.populations();
        for (got, want) in p.iter().zip([0.4, 0.4, 0.2]) {
            assert!((got - want).abs() < 1e-15);
        }
        let g = three_level_stationary(0.0, 0.0).unwrap();
        assert!(g.ground_limit);
        assert_eq!(g.rho.populations(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn three_level_equal_planck_is_gibbs() {
        let (ea, eb, ec, beta): (f64, f64, f64, f64) = (0.0, 0.3, 1.0, 1.7);
        let n1 = 1.0 / (beta * (ec - ea)).exp_m1();
        let n2 = 1.0 / (beta * (ec - eb)).exp_m1();
        let p = three_level_stationary(n1, n2).unwrap().rho.populations();
        let z: f64 = [ea, eb, ec].iter().map(|e: &f64| (-beta * e).exp()).sum();
        for (got, e) in p.iter().zip([ea, eb, ec]) {
            assert!((got - (-beta * e).exp() / z).abs() < 1e-14);
        }
    }
}
