// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Energy, heat, entropy and entropy production. Entropies are in nats.

use crate::dynamics::{stationary_state, DensityMatrix, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, hermitize, trace, CMat, CVec};
use crate::liouville::{
    dissipator_apply, fixed_temperature_liouvillian, Liouvillian, SystemSpec, TransitionDecomposition,
};
use crate::quad::QuadratureSpec;
use crate::spectral::{directional_beta, directional_nodes, planck, BathSpec};

/// Eigenvalue floor applied before taking matrix logarithms.
pub const LOG_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoRecord {
    pub tau: f64,
    pub energy: f64,
    pub heat_current: f64,
    pub entropy: f64,
    pub sigma: f64,
}

fn check_dim(rho: &CMat, d: usize) -> Result<()> {
    if rho.nrows() != d || rho.ncols() != d {
        Err(Error::DimensionMismatch { expected: d, got: rho.nrows() })
    } else {
        Ok(())
    }
}

/// E = Re Tr(ρh).
pub fn internal_energy(rho: &CMat, sys: &SystemSpec) -> Result<f64> {
    check_dim(rho, sys.dim)?;
    Ok(trace(&(rho * &sys.h)).re)
}

/// q = Re Tr(ℒ[ρ]h) with the dissipative part of the generator.
pub fn heat_current(gen: &Liouvillian, rho: &CMat, sys: &SystemSpec) -> Result<f64> {
    check_dim(rho, sys.dim)?;
    Ok(trace(&(dissipator_apply(gen, rho)? * &sys.h)).re)
}

/// q as Σ_ω γω{N⟨A_ωA_ω†⟩ − (N + 1)⟨A_ω†A_ω⟩}.
pub fn heat_current_sum(gen: &Liouvillian, rho: &CMat) -> Result<f64> {
    check_dim(rho, gen.dim)?;
    let mut q = 0.0;
    for ch in &gen.channels {
        let ad = ch.op.adjoint();
        let up = trace(&(rho * &ch.op * &ad)).re;
        let down = trace(&(rho * &ad * &ch.op)).re;
        q += ch.gamma * ch.omega * (ch.occupation * up - (ch.occupation + 1.0) * down);
    }
    Ok(q)
}

/// ΔQ = E(∞) − E(0).
pub fn heat_transfer(gen: &Liouvillian, rho0: &CMat, sys: &SystemSpec, tol: f64) -> Result<f64> {
    let rho_inf = stationary_state(gen, tol)?;
    Ok(internal_energy(&rho_inf, sys)? - internal_energy(rho0, sys)?)
}

/// e^{−βh}/Tr e^{−βh}, shifted by the ground energy before exponentiating.
pub fn gibbs_state(sys: &SystemSpec, beta: f64) -> Result<DensityMatrix> {
    if !(beta >= 0.0) {
        return Err(Error::Domain(format!("beta must be non-negative, got {beta}")));
    }
    let (e, v) = eigh(&sys.h);
    let weights: Vec<f64> = if beta.is_infinite() {
        e.iter().map(|&x| if x - e[0] <= 0.0 { 1.0 } else { 0.0 }).collect()
    } else {
        e.iter().map(|&x| (-beta * (x - e[0])).exp()).collect()
    };
    let z: f64 = weights.iter().sum();
    let diag = CMat::from_diagonal(&CVec::from_iterator(e.len(), weights.iter().map(|w| c(w / z, 0.0))));
    DensityMatrix::new(hermitize(&(&v * diag * v.adjoint())))
}

/// −Σ λ log λ over eigenvalues above 1e−14.
pub fn von_neumann_entropy(rho: &CMat) -> f64 {
    eigh(rho).0.iter().filter(|&&l| l > 1e-14).map(|&l| -l * l.ln()).sum()
}

/// log ρ with eigenvalues clamped at [`LOG_CLAMP`] and renormalised.
fn clamped_log(rho: &CMat) -> CMat {
    let (vals, vecs) = eigh(rho);
    let clamped: Vec<f64> = vals.iter().map(|&x| x.max(LOG_CLAMP)).collect();
    if vals.iter().any(|&x| x < LOG_CLAMP) {
        log::warn!("density matrix is rank deficient; eigenvalues clamped at {LOG_CLAMP:e}");
    }
    let total: f64 = clamped.iter().sum();
    let diag =
        CMat::from_diagonal(&CVec::from_iterator(clamped.len(), clamped.iter().map(|&x| c((x / total).ln(), 0.0))));
    &vecs * diag * vecs.adjoint()
}

/// σ_β = −Tr(ℒ_β[ρ](log ρ − log ρ_β)) for a generator with a single
/// reservoir temperature.
///
/// log ρ_β = −βh − log Z and the constant drops out against Tr ℒ_β[ρ] = 0.
pub fn spohn_sigma(gen_at_beta: &Liouvillian, rho: &CMat, sys: &SystemSpec, beta: f64) -> Result<f64> {
    check_dim(rho, sys.dim)?;
    let lrho = dissipator_apply(gen_at_beta, rho)?;
    let log_rho = clamped_log(rho);
    Ok(-trace(&(&lrho * log_rho)).re - beta * trace(&(&lrho * &sys.h)).re)
}

/// σ = ½∫w(ξ) σ_{β_ξ} dξ by Gauss–Legendre over fixed-temperature generators.
pub fn sigma_moving(
    sys: &SystemSpec,
    dec: &TransitionDecomposition,
    bath: &BathSpec,
    rho: &CMat,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let mut sigma = 0.0;
    for (xi, weight) in directional_nodes(bath, quad) {
        let gen = fixed_temperature_liouvillian(sys, dec, bath, xi)?;
        sigma += weight * spohn_sigma(&gen, rho, sys, directional_beta(bath, xi)?)?;
    }
    Ok(sigma)
}

/// σ from the moving-bath generator itself: −Tr(ℒ[ρ] log ρ) minus the
/// direction-averaged β_ξ-weighted heat currents, the latter collapsed per
/// channel onto ξ-moments of β_ξ and β_ξ n_ξ.
pub fn sigma_moving_linear(gen: &Liouvillian, rho: &CMat, quad: &QuadratureSpec) -> Result<f64> {
    check_dim(rho, gen.dim)?;
    let bath = &gen.bath;
    let nodes = directional_nodes(bath, quad);
    let beta_mean: f64 = nodes.iter().map(|&(xi, w)| w * directional_beta(bath, xi).unwrap()).sum();
    let lrho = dissipator_apply(gen, rho)?;
    let mut sigma = -trace(&(&lrho * clamped_log(rho))).re;
    for ch in &gen.channels {
        let beta_n: f64 = nodes
            .iter()
            .map(|&(xi, w)| {
                let b = directional_beta(bath, xi).unwrap();
                w * b * planck(b * ch.omega)
            })
            .sum();
        let ad = ch.op.adjoint();
        let up = trace(&(rho * &ch.op * &ad)).re;
        let down = trace(&(rho * &ad * &ch.op)).re;
        sigma -= ch.gamma * ch.omega * (beta_n * up - (beta_n + beta_mean) * down);
    }
    Ok(sigma)
}

/// Both forms of the total produced entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBalance {
    /// S(ρ∞) − S(ρ0) − ½∫w β_ξ [E_ξ − E(0)] dξ, E_ξ the Gibbs energy at β_ξ.
    pub delta_s_tot: f64,
    /// Same with E_ξ replaced by E(∞).
    pub delta_s_tot_alt: f64,
    pub entropy_initial: f64,
    pub entropy_final: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
}

pub fn total_entropy_production(
    sys: &SystemSpec,
    gen: &Liouvillian,
    rho0: &CMat,
    quad: &QuadratureSpec,
    tol: f64,
) -> Result<EntropyBalance> {
    let bath = &gen.bath;
    let rho_inf = stationary_state(gen, tol)?;
    let s0 = von_neumann_entropy(rho0);
    let s1 = von_neumann_entropy(&rho_inf);
    let e0 = internal_energy(rho0, sys)?;
    let e1 = internal_energy(&rho_inf, sys)?;
    let mut paper = 0.0;
    let mut alt = 0.0;
    for (xi, w) in directional_nodes(bath, quad) {
        let b = directional_beta(bath, xi)?;
        let e_xi = internal_energy(gibbs_state(sys, b)?.matrix(), sys)?;
        paper += w * b * (e_xi - e0);
        alt += w * b * (e1 - e0);
    }
    Ok(EntropyBalance {
        delta_s_tot: s1 - s0 - paper,
        delta_s_tot_alt: s1 - s0 - alt,
        entropy_initial: s0,
        entropy_final: s1,
        energy_initial: e0,
        energy_final: e1,
    })
}

/// θ = ΩN(Ω).
pub fn empirical_temperature(bath: &BathSpec, omega: f64) -> Result<f64> {
    Ok(omega * bath.occupation(omega)?)
}

/// Energy, heat current, entropy and moving-bath entropy production at
/// every sample of a trajectory.
pub fn thermo_records(
    gen: &Liouvillian,
    dec: &TransitionDecomposition,
    traj: &Trajectory,
    quad: &QuadratureSpec,
) -> Result<Vec<ThermoRecord>> {
    let sys = &gen.system;
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&tau, rho)| {
            Ok(ThermoRecord {
                tau,
                energy: internal_energy(rho, sys)?,
                heat_current: heat_current(gen, rho, sys)?,
                entropy: von_neumann_entropy(rho),
                sigma: sigma_moving(sys, dec, &gen.bath, rho, quad)?,
            })
        })
        .collect()
}
