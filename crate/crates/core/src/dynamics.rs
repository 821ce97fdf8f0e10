// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Time evolution, stationary states and the Pauli population equation.

use std::collections::HashMap;
use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, eigh, hermitize, max_abs, trace, unvec, vec_cols, CMat, CVec, ONE, ZERO};
use crate::liouville::{apply, BlockForm, Liouvillian, SystemSpec, TransitionDecomposition};
use crate::spectral::BathSpec;

/// Tolerance of the density-matrix invariants.
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix (within [`STATE_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMat);

impl DensityMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        let defect = crate::linalg::hermiticity_defect(&m);
        if defect > STATE_TOL {
            return Err(Error::InvalidMatrix(format!("density matrix not Hermitian ({defect:e})")));
        }
        let tr = trace(&m);
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::InvalidMatrix(format!("density matrix trace {tr}")));
        }
        let m = hermitize(&m);
        let (vals, _) = eigh(&m);
        if vals[0] < -STATE_TOL {
            return Err(Error::InvalidMatrix(format!("negative eigenvalue {:e}", vals[0])));
        }
        Ok(Self(m))
    }

    /// |ψ⟩⟨ψ| for a normalised (or normalisable) state vector.
    pub fn pure(psi: &CVec) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidMatrix("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        Self::new(&v * v.adjoint())
    }

    pub fn from_populations(p: &[f64]) -> Result<Self> {
        Self::new(CMat::from_diagonal(&CVec::from_iterator(p.len(), p.iter().map(|&x| c(x, 0.0)))))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(CMat::identity(d, d).unscale(d as f64))
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_inner(self) -> CMat {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Diagonal in the matrix's own basis.
    pub fn populations(&self) -> Vec<f64> {
        self.0.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.0).0
    }
}

impl Deref for DensityMatrix {
    type Target = CMat;
    fn deref(&self) -> &CMat {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Adaptive Dormand–Prince 5(4) on the vectorised equation.
    Rk45,
    /// Exact propagation with block matrix exponentials in the eigenbasis of h.
    ExpStep,
    /// Classical fourth-order Runge–Kutta with a fixed step.
    Rk4 { step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub method: Method,
    /// Local error tolerance of the adaptive integrator.
    pub tol: f64,
    pub max_step: f64,
    /// Spacing of output samples; `None` gives 100 equal intervals.
    pub sample_every: Option<f64>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { method: Method::Rk45, tol: 1e-10, max_step: f64::INFINITY, sample_every: None }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CMat>,
    pub steps: usize,
    pub rejected: usize,
    /// Largest |Tr ρ − 1| over the samples.
    pub max_trace_error: f64,
    /// Smallest eigenvalue of any sample.
    pub min_eigenvalue: f64,
}

impl Trajectory {
    pub fn last(&self) -> &CMat {
        self.states.last().expect("trajectory has at least one sample")
    }
}

/// Uniform sample grid on [0, t_final] including both ends.
pub fn sample_times(t_final: f64, sample_every: Option<f64>) -> Vec<f64> {
    let dt = sample_every.unwrap_or(t_final / 100.0);
    let n = (t_final / dt - 1e-9).ceil().max(1.0) as usize;
    let mut times: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
    times.push(t_final);
    times
}

/// Integrates dρ/dτ = L[ρ] from τ = 0 and samples the state on a uniform grid.
pub fn evolve(gen: &Liouvillian, rho0: &DensityMatrix, t_final: f64, options: &EvolveOptions) -> Result<Trajectory> {
    if !(t_final > 0.0) {
        return Err(Error::Domain(format!("t_final must be positive, got {t_final}")));
    }
    if let Some(s) = options.sample_every {
        if !(s > 0.0) {
            return Err(Error::Domain(format!("sample spacing must be positive, got {s}")));
        }
    }
    evolve_at(gen, rho0, &sample_times(t_final, options.sample_every), options)
}

/// As [`evolve`] with explicit, strictly increasing sample times starting at 0.
pub fn evolve_at(
    gen: &Liouvillian,
    rho0: &DensityMatrix,
    times: &[f64],
    options: &EvolveOptions,
) -> Result<Trajectory> {
    let d = gen.dim;
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: rho0.dim() });
    }
    if times.is_empty() || times[0] != 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("sample times must start at 0 and increase strictly".into()));
    }
    let mut traj = Trajectory {
        times: Vec::with_capacity(times.len()),
        states: Vec::with_capacity(times.len()),
        steps: 0,
        rejected: 0,
        max_trace_error: 0.0,
        min_eigenvalue: f64::INFINITY,
    };
    let limit = 100.0 * options.tol.max(STATE_TOL);
    let record = |traj: &mut Trajectory, tau: f64, rho: CMat| -> Result<CMat> {
        let rho = hermitize(&rho);
        let tr_err = (trace(&rho) - ONE).norm();
        let min_eig = eigh(&rho).0[0];
        if !(tr_err <= limit) || !(min_eig >= -limit) {
            return Err(Error::InvariantViolation {
                tau,
                detail: format!("trace error {tr_err:e}, minimum eigenvalue {min_eig:e}"),
            });
        }
        traj.max_trace_error = traj.max_trace_error.max(tr_err);
        traj.min_eigenvalue = traj.min_eigenvalue.min(min_eig);
        traj.times.push(tau);
        traj.states.push(rho.clone());
        Ok(rho)
    };

    match options.method {
        Method::ExpStep => {
            let bf = gen.block_form();
            let mut x = bf.to_eigen(rho0);
            record(&mut traj, 0.0, rho0.matrix().clone())?;
            let mut cache: HashMap<u64, Vec<CMat>> = HashMap::new();
            for w in times.windows(2) {
                let dt = w[1] - w[0];
                let props = cache
                    .entry(dt.to_bits())
                    .or_insert_with(|| bf.blocks.iter().map(|b| (&b.matrix * c(dt, 0.0)).exp()).collect());
                x = propagate_blocks(&bf, props, &x);
                traj.steps += 1;
                let rho = record(&mut traj, w[1], bf.from_eigen(&x))?;
                x = bf.to_eigen(&rho);
            }
        }
        Method::Rk45 | Method::Rk4 { .. } => {
            let l = &gen.l_total;
            let mut y = vec_cols(rho0);
            record(&mut traj, 0.0, rho0.matrix().clone())?;
            let scale = max_abs(l).max(f64::MIN_POSITIVE);
            let mut h = match options.method {
                Method::Rk4 { step } => {
                    if !(step > 0.0) {
                        return Err(Error::Domain(format!("step must be positive, got {step}")));
                    }
                    step
                }
                _ => (0.01 / scale).min(options.max_step),
            };
            for w in times.windows(2) {
                let (mut t, target) = (w[0], w[1]);
                while t < target {
                    let last = target - t <= h * (1.0 + 1e-12);
                    let step = if last { target - t } else { h };
                    match options.method {
                        Method::Rk4 { .. } => {
                            y = rk4_step(l, &y, step);
                            traj.steps += 1;
                            t = if last { target } else { t + step };
                        }
                        _ => {
                            let (y_new, err) = dopri_step(l, &y, step, options.tol);
                            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                            if err <= 1.0 {
                                y = y_new;
                                traj.steps += 1;
                                t = if last { target } else { t + step };
                                if !last {
                                    h = (h * factor).min(options.max_step);
                                }
                            } else {
                                traj.rejected += 1;
                                h = step * factor;
                                if h < 1e-14 * t.abs().max(1.0) {
                                    return Err(Error::StepUnderflow { tau: t });
                                }
                            }
                        }
                    }
                }
                let rho = record(&mut traj, target, unvec(&y, d))?;
                y = vec_cols(&rho);
            }
        }
    }
    Ok(traj)
}

fn propagate_blocks(bf: &BlockForm, props: &[CMat], x: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; x.len()];
    for (b, p) in bf.blocks.iter().zip(props) {
        for (r, &i) in b.indices.iter().enumerate() {
            let mut acc = ZERO;
            for (s, &j) in b.indices.iter().enumerate() {
                acc += p[(r, s)] * x[j];
            }
            out[i] = acc;
        }
    }
    out
}

fn rk4_step(l: &CMat, y: &CVec, h: f64) -> CVec {
    let hc = c(h, 0.0);
    let k1 = l * y;
    let k2 = l * (y + &k1 * (hc * 0.5));
    let k3 = l * (y + &k2 * (hc * 0.5));
    let k4 = l * (y + &k3 * hc);
    y + (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * (hc / 6.0)
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand–Prince step; returns the fifth-order solution and the error
/// norm relative to `tol·(1 + |y|)` (accept when ≤ 1).
fn dopri_step(l: &CMat, y: &CVec, h: f64, tol: f64) -> (CVec, f64) {
    let comb = |terms: &[(f64, &CVec)]| {
        let mut acc = y.clone();
        for (w, k) in terms {
            acc.axpy(c(h * w, 0.0), k, ONE);
        }
        acc
    };
    let k1 = l * y;
    let k2 = l * comb(&[(A21, &k1)]);
    let k3 = l * comb(&[(A31, &k1), (A32, &k2)]);
    let k4 = l * comb(&[(A41, &k1), (A42, &k2), (A43, &k3)]);
    let k5 = l * comb(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
    let k6 = l * comb(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
    let y5 = comb(&[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = l * &y5;
    let mut err = 0.0f64;
    for i in 0..y.len() {
        let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
        let sc = tol * (1.0 + y[i].norm().max(y5[i].norm()));
        err = err.max(e.norm() / sc);
    }
    (y5, err)
}

fn block_eigenvalues(m: &CMat) -> Vec<Complex64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)]];
    }
    if let Some(schur) = nalgebra::Schur::try_new(m.clone(), 1e-15, 100_000) {
        if let Some(ev) = schur.eigenvalues() {
            return ev.iter().copied().collect();
        }
    }
    // singular values bound the zero eigenvalues from below in count
    m.clone().svd(false, false).singular_values.iter().map(|&s| c(s, 0.0)).collect()
}

/// Unique stationary state of the generator.
///
/// The generator is split into its eigenbasis blocks; the eigenvalue of
/// smallest modulus over all blocks must be isolated, with the next one at
/// least `10·tol` away from zero.
pub fn stationary_state(gen: &Liouvillian, tol: f64) -> Result<DensityMatrix> {
    let d = gen.dim;
    let bf = gen.block_form();
    let mut spectrum: Vec<(f64, usize)> = Vec::new();
    for (k, b) in bf.blocks.iter().enumerate() {
        spectrum.extend(block_eigenvalues(&b.matrix).into_iter().map(|z| (z.norm(), k)));
    }
    spectrum.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (smallest, null_block) = spectrum[0];
    let second = spectrum.get(1).map_or(f64::INFINITY, |s| s.0);
    if second < 10.0 * tol {
        return Err(Error::DegenerateNullSpace(format!(
            "eigenvalue moduli {smallest:e} and {second:e} both below {:e}",
            10.0 * tol
        )));
    }
    let block = &bf.blocks[null_block];
    let diag: Vec<usize> =
        block.indices.iter().enumerate().filter(|(_, &p)| p % (d + 1) == 0).map(|(r, _)| r).collect();
    let Some(&row) = diag.first() else {
        return Err(Error::DegenerateNullSpace("null block holds no populations".into()));
    };
    let k = block.indices.len();
    let mut m = block.matrix.clone();
    for j in 0..k {
        m[(row, j)] = ZERO;
    }
    for &r in &diag {
        m[(row, r)] = ONE;
    }
    let mut rhs = CVec::zeros(k);
    rhs[row] = ONE;
    let x = m.lu().solve(&rhs).ok_or_else(|| Error::DegenerateNullSpace("singular constrained system".into()))?;
    let mut full = vec![ZERO; d * d];
    for (r, &p) in block.indices.iter().enumerate() {
        full[p] = x[r];
    }
    let rho = hermitize(&bf.from_eigen(&full));
    let rho = &rho / trace(&rho);
    let residual = max_abs(&apply(gen, &rho)?);
    let scale = max_abs(&gen.l_total).max(1.0);
    if residual > tol * scale {
        return Err(Error::InvariantViolation {
            tau: f64::INFINITY,
            detail: format!("stationary residual {residual:e}"),
        });
    }
    DensityMatrix::new(rho)
}

/// Population rates between eigenstates of h.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSystem {
    /// Eigenvalues of h, ascending; populations are indexed the same way.
    pub energies: Vec<f64>,
    /// `rates[(n, m)]` is the transition rate from level n to level m.
    pub rates: DMatrix<f64>,
}

impl PauliSystem {
    /// G with dp/dτ = G p.
    pub fn generator(&self) -> DMatrix<f64> {
        let d = self.energies.len();
        let mut g = self.rates.transpose();
        for n in 0..d {
            g[(n, n)] = -(0..d).filter(|&m| m != n).map(|m| self.rates[(n, m)]).sum::<f64>();
        }
        g
    }
}

/// Matrix elements ⟨n|A_ω|m⟩ in the eigenbasis, per Bohr frequency.
fn eigen_elements(dec: &TransitionDecomposition) -> Vec<CMat> {
    let v = &dec.basis;
    dec.ops.iter().map(|op| v.adjoint() * op * v).collect()
}

/// Rates T_nm: γ(ω)|⟨m|A|n⟩|² times N + 1 downwards and N upwards.
pub fn pauli_rates(sys: &SystemSpec, dec: &TransitionDecomposition, bath: &BathSpec) -> Result<PauliSystem> {
    if dec.has_degenerate_levels() {
        return Err(Error::Degeneracy("Pauli equation needs a non-degenerate Hamiltonian".into()));
    }
    let d = sys.dim;
    let mut rates = DMatrix::zeros(d, d);
    for ((&omega, pairs), el) in dec.frequencies.iter().zip(&dec.pairs).zip(eigen_elements(dec)) {
        let gamma = bath.rate(omega)?;
        let n = bath.occupation(omega)?;
        for &(lo, hi) in pairs {
            let w = el[(lo, hi)].norm_sqr();
            rates[(hi, lo)] += gamma * (n + 1.0) * w;
            rates[(lo, hi)] += gamma * n * w;
        }
    }
    Ok(PauliSystem { energies: dec.energies.clone(), rates })
}

/// Normalised null vector of the Pauli generator.
pub fn pauli_stationary(system: &PauliSystem) -> Result<Vec<f64>> {
    let d = system.energies.len();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for n in 0..d {
        for m in 0..d {
            if n != m && system.rates[(n, m)] > 0.0 {
                let (a, b) = (find(&mut parent, n), find(&mut parent, m));
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    if (1..d).any(|n| find(&mut parent, n) != root) {
        return Err(Error::DisconnectedGraph);
    }
    let mut g = system.generator();
    for j in 0..d {
        g[(0, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(d);
    rhs[0] = 1.0;
    let p = g.lu().solve(&rhs).ok_or(Error::DisconnectedGraph)?;
    let p: Vec<f64> = p.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = p.iter().sum();
    Ok(p.into_iter().map(|x| x / total).collect())
}

/// Populations at time τ from the matrix exponential of the Pauli generator.
pub fn pauli_evolve(system: &PauliSystem, p0: &[f64], tau: f64) -> Result<Vec<f64>> {
    let d = system.energies.len();
    if p0.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: p0.len() });
    }
    let prop = (system.generator() * tau).exp();
    Ok((prop * DVector::from_column_slice(p0)).iter().copied().collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairBalance {
    pub lower: usize,
    pub upper: usize,
    pub omega: f64,
    /// p_upper/p_lower.
    pub ratio: f64,
    /// N(ω)/(N(ω) + 1).
    pub expected: f64,
}

impl PairBalance {
    pub fn violation(&self) -> f64 {
        (self.ratio - self.expected).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetailedBalanceReport {
    pub holds: bool,
    pub max_violation: f64,
    /// Whether the state is diagonal in the eigenbasis of h within `tol`.
    pub diagonal: bool,
    pub pairs: Vec<PairBalance>,
}

/// Compares every coupled population ratio of `rho_ss` with N/(N + 1).
pub fn check_detailed_balance(
    rho_ss: &CMat,
    dec: &TransitionDecomposition,
    bath: &BathSpec,
    tol: f64,
) -> Result<DetailedBalanceReport> {
    let v = &dec.basis;
    let r = v.adjoint() * rho_ss * v;
    let d = r.nrows();
    let mut off = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                off = off.max(r[(i, j)].norm());
            }
        }
    }
    let mut pairs = Vec::new();
    for ((&omega, members), el) in dec.frequencies.iter().zip(&dec.pairs).zip(eigen_elements(dec)) {
        let n = bath.occupation(omega)?;
        let scale = max_abs(&el);
        for &(lo, hi) in members {
            if el[(lo, hi)].norm() <= 1e-12 * scale {
                continue;
            }
            pairs.push(PairBalance {
                lower: lo,
                upper: hi,
                omega,
                ratio: r[(hi, hi)].re / r[(lo, lo)].re,
                expected: n / (n + 1.0),
            });
        }
    }
    let max_violation = pairs.iter().map(PairBalance::violation).fold(0.0, f64::max);
    Ok(DetailedBalanceReport { holds: max_violation <= tol, max_violation, diagonal: off <= tol, pairs })
}
