// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Ready-made probe systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, ZERO};
use crate::liouville::SystemSpec;

/// Qubit h = ½Ω₀σ_z, A = σ_x in the basis order (excited, ground).
pub fn qubit(omega0: f64) -> SystemSpec {
    let mut h = CMat::zeros(2, 2);
    h[(0, 0)] = c(0.5 * omega0, 0.0);
    h[(1, 1)] = c(-0.5 * omega0, 0.0);
    let mut a = CMat::zeros(2, 2);
    a[(0, 1)] = c(1.0, 0.0);
    a[(1, 0)] = c(1.0, 0.0);
    SystemSpec::new(h, a).expect("qubit preset is valid")
}

/// Harmonic oscillator h = Ω₀ a†a truncated to `dim` Fock levels, coupled
/// through the position operator (a + a†)/√(2mΩ₀).
pub fn oscillator(omega0: f64, mass: f64, dim: usize) -> Result<SystemSpec> {
    if !(mass > 0.0) || !(omega0 > 0.0) {
        return Err(Error::Domain("oscillator needs positive mass and frequency".into()));
    }
    let h = CMat::from_fn(dim, dim, |i, j| if i == j { c(omega0 * i as f64, 0.0) } else { ZERO });
    let x0 = 1.0 / (2.0 * mass * omega0).sqrt();
    let a =
        CMat::from_fn(
            dim,
            dim,
            |i, j| {
                if j == i + 1 || i == j + 1 {
                    c(x0 * (i.max(j) as f64).sqrt(), 0.0)
                } else {
                    ZERO
                }
            },
        );
    SystemSpec::new(h, a)
}

/// Three-level atom with levels (a, b, c), E_a < E_b < E_c, in that basis
/// order. Transitions a↔c and b↔c couple with λ₁ and λ₂; a↔b is forbidden.
pub fn three_level(energies: [f64; 3], lambda1: f64, lambda2: f64) -> Result<SystemSpec> {
    let [ea, eb, ec] = energies;
    if !(ea < eb && eb < ec) {
        return Err(Error::Domain(format!("three-level energies must increase, got {energies:?}")));
    }
    let h = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(ea, 0.0), c(eb, 0.0), c(ec, 0.0)]));
    let mut a = CMat::zeros(3, 3);
    a[(0, 2)] = c(lambda1, 0.0);
    a[(2, 0)] = c(lambda1, 0.0);
    a[(1, 2)] = c(lambda2, 0.0);
    a[(2, 1)] = c(lambda2, 0.0);
    SystemSpec::new(h, a)
}

/// Random Hermitian pair (h, A) with entries uniform in the unit square,
/// reproducible from `seed`.
pub fn random(seed: u64, dim: usize) -> Result<SystemSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| {
        let mut m = CMat::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
            for j in i + 1..dim {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    };
    let h = sample(&mut rng);
    let a = sample(&mut rng);
    SystemSpec::new(h, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::liouville::{decompose_transitions, DEFAULT_OMEGA_TOL};

    #[test]
    fn oscillator_has_one_frequency() {
        let sys = oscillator(1.0, 2.0, 8).unwrap();
        let dec = decompose_transitions(&sys, DEFAULT_OMEGA_TOL).unwrap();
        assert_eq!(dec.frequencies.len(), 1);
        let lowering = CMat::from_fn(8, 8, |i, j| if j == i + 1 { c((j as f64).sqrt() / 2.0, 0.0) } else { ZERO });
        assert!(max_abs(&(&dec.ops[0] - lowering)) < 1e-12);
    }

    #[test]
    fn three_level_frequencies() {
        let sys = three_level([0.0, 0.4, 1.0], 1.0, 0.5).unwrap();
        let dec = decompose_transitions(&sys, DEFAULT_OMEGA_TOL).unwrap();
        assert_eq!(dec.frequencies.len(), 2);
        assert!((dec.frequencies[0] - 0.6).abs() < 1e-14);
        assert!((dec.frequencies[1] - 1.0).abs() < 1e-14);
        assert!(three_level([0.0, 1.0, 0.5], 1.0, 1.0).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        assert_eq!(random(7, 4).unwrap(), random(7, 4).unwrap());
        assert_ne!(random(7, 4).unwrap(), random(8, 4).unwrap());
    }
}
