// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Transition operators and the secular (quantum-optical) Lindblad generator
//! for a finite-dimensional probe.
//!
//! Superoperators act on column-stacked density matrices, see [`crate::linalg`].

use crate::error::{Error, Result};
use crate::linalg::{
    c, dagger, eigh, hermiticity_defect, identity, left_superop, max_abs, right_superop, sandwich_superop, unvec,
    vec_cols, CMat, I, ZERO,
};
use crate::quad::QuadratureSpec;
use crate::spectral::{directional_beta, lamb_shift, planck_n, BathSpec};

pub const DEFAULT_OMEGA_TOL: f64 = 1e-9;

/// Adjacent frequency clusters closer than this many tolerances are
/// considered ambiguous.
const AMBIGUITY_FACTOR: f64 = 10.0;

/// Probe Hamiltonian `h` and coupling operator `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub dim: usize,
    pub h: CMat,
    pub a: CMat,
}

impl SystemSpec {
    pub fn new(h: CMat, a: CMat) -> Result<Self> {
        let dim = h.nrows();
        if dim < 2 {
            return Err(Error::InvalidMatrix(format!("dimension must be at least 2, got {dim}")));
        }
        for (name, m) in [("h", &h), ("a", &a)] {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.nrows().max(m.ncols()) });
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidMatrix(format!("{name} has non-finite entries")));
            }
            let defect = hermiticity_defect(m);
            if defect > 1e-12 * max_abs(m).max(1.0) {
                return Err(Error::InvalidMatrix(format!("{name} is not Hermitian (defect {defect:e})")));
            }
        }
        Ok(Self { dim, h, a })
    }
}

/// Positive Bohr frequencies of `h` with the matching lowering parts of `a`.
#[derive(Debug, Clone)]
pub struct TransitionDecomposition {
    /// Distinct positive Bohr frequencies, ascending.
    pub frequencies: Vec<f64>,
    /// A_ω for each entry of `frequencies`, in the input basis.
    pub ops: Vec<CMat>,
    /// Eigen-index pairs (n, m), ε_m − ε_n ≈ ω, contributing to each A_ω.
    pub pairs: Vec<Vec<(usize, usize)>>,
    /// Part of `a` that commutes with `h`, when nonzero.
    pub zero_op: Option<CMat>,
    /// Eigenvalues of `h`, ascending.
    pub energies: Vec<f64>,
    /// Orthonormal eigenvectors of `h` as columns, ordered like `energies`.
    pub basis: CMat,
    /// Absolute clustering tolerance actually applied.
    pub abs_tol: f64,
}

impl TransitionDecomposition {
    /// A_ω† for ω > 0, i.e. A_{−ω}.
    pub fn raising(&self, idx: usize) -> CMat {
        dagger(&self.ops[idx])
    }

    /// Σ_ω (A_ω + A_ω†) + A₀, which must reproduce `a`.
    pub fn reconstruct(&self) -> CMat {
        let d = self.basis.nrows();
        let mut sum = self.zero_op.clone().unwrap_or_else(|| CMat::zeros(d, d));
        for op in &self.ops {
            sum += op + dagger(op);
        }
        sum
    }

    /// Whether some eigenvalues of `h` coincide within the clustering tolerance.
    pub fn has_degenerate_levels(&self) -> bool {
        self.energies.windows(2).any(|w| w[1] - w[0] < self.abs_tol)
    }
}

/// Groups sorted values whose consecutive gaps are below `tol`.
fn cluster(values: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] >= tol {
            out.push((start, i));
            start = i;
        }
    }
    out
}

/// Splits `a` into transition operators of `h`.
///
/// Bohr frequencies whose gaps are below `omega_tol` times the spectral
/// spread of `h` are merged (transitively) into one cluster.
pub fn decompose_transitions(sys: &SystemSpec, omega_tol: f64) -> Result<TransitionDecomposition> {
    if !(omega_tol > 0.0) {
        return Err(Error::Domain(format!("omega_tol must be positive, got {omega_tol}")));
    }
    let d = sys.dim;
    let (energies, basis) = eigh(&sys.h);
    let spread = energies[d - 1] - energies[0];
    let abs_tol = if spread > 0.0 { omega_tol * spread } else { omega_tol };
    let a_eig = basis.adjoint() * &sys.a * &basis;

    let mut gaps: Vec<(f64, usize, usize)> = Vec::new();
    for n in 0..d {
        for m in n + 1..d {
            gaps.push((energies[m] - energies[n], n, m));
        }
    }
    gaps.sort_by(|x, y| x.0.total_cmp(&y.0));
    let values: Vec<f64> = gaps.iter().map(|g| g.0).collect();
    let groups = cluster(&values, abs_tol);

    // the first group may hold the (near-)zero gaps of degenerate levels
    let mut zero_pairs: Vec<(usize, usize)> = (0..d).map(|n| (n, n)).collect();
    let mut positive = Vec::new();
    for &(s, e) in &groups {
        let width = values[e - 1] - values[s];
        if width > AMBIGUITY_FACTOR * abs_tol {
            return Err(Error::ClusteringAmbiguity(format!(
                "cluster spans [{}, {}] under tolerance {abs_tol:e}",
                values[s],
                values[e - 1]
            )));
        }
        if values[s] < abs_tol {
            for g in &gaps[s..e] {
                zero_pairs.push((g.1, g.2));
                zero_pairs.push((g.2, g.1));
            }
        } else {
            positive.push((s, e));
        }
    }
    let mut previous_top = if zero_pairs.len() > d { Some(0.0) } else { None };
    for &(s, e) in &positive {
        if let Some(top) = previous_top {
            let sep = values[s] - top;
            if sep < AMBIGUITY_FACTOR * abs_tol {
                return Err(Error::ClusteringAmbiguity(format!(
                    "Bohr frequencies {top} and {} separated by {sep:e}",
                    values[s]
                )));
            }
        }
        previous_top = Some(values[e - 1]);
    }

    let scale = max_abs(&sys.a).max(f64::MIN_POSITIVE);
    let project = |pairs: &[(usize, usize)]| {
        let mut m = CMat::zeros(d, d);
        for &(n, k) in pairs {
            m[(n, k)] = a_eig[(n, k)];
        }
        &basis * m * basis.adjoint()
    };

    let mut frequencies = Vec::new();
    let mut ops = Vec::new();
    let mut pairs = Vec::new();
    for (s, e) in positive {
        let members: Vec<(usize, usize)> = gaps[s..e].iter().map(|g| (g.1, g.2)).collect();
        let op = project(&members);
        if max_abs(&op) <= 1e-14 * scale {
            continue;
        }
        frequencies.push(values[s..e].iter().sum::<f64>() / (e - s) as f64);
        ops.push(op);
        pairs.push(members);
    }
    let zero = project(&zero_pairs);
    let zero_op = (max_abs(&zero) > 1e-14 * scale).then_some(zero);
    Ok(TransitionDecomposition { frequencies, ops, pairs, zero_op, energies, basis, abs_tol })
}

/// One dissipative channel γ(N+1)D[A_ω] + γN D[A_ω†].
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub omega: f64,
    pub gamma: f64,
    pub occupation: f64,
    pub op: CMat,
}

/// Lindblad generator L = L_ham + L_diss on column-stacked d×d matrices.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub dim: usize,
    pub l_total: CMat,
    pub l_ham: CMat,
    pub l_diss: CMat,
    pub system: SystemSpec,
    pub bath: BathSpec,
    pub channels: Vec<Channel>,
    /// h + h_LS.
    pub h_eff: CMat,
    /// Δ(ω) per channel when the Lamb shift is included.
    pub lamb_shifts: Option<Vec<f64>>,
    pub energies: Vec<f64>,
    pub basis: CMat,
}

/// D[X] as a superoperator.
fn dissipator_superop(x: &CMat) -> CMat {
    let xd = dagger(x);
    let xdx = &xd * x;
    sandwich_superop(x, &xd) - (left_superop(&xdx) + right_superop(&xdx)).scale(0.5)
}

fn hamiltonian_superop(h: &CMat) -> CMat {
    (left_superop(h) - right_superop(h)) * -I
}

fn assemble(
    sys: &SystemSpec,
    dec: &TransitionDecomposition,
    bath: &BathSpec,
    occupations: &[f64],
    lamb_shifts: Option<Vec<f64>>,
) -> Result<Liouvillian> {
    let d = sys.dim;
    if dec.basis.nrows() != d {
        return Err(Error::DimensionMismatch { expected: d, got: dec.basis.nrows() });
    }
    let mut channels = Vec::with_capacity(dec.frequencies.len());
    let mut l_diss = CMat::zeros(d * d, d * d);
    for (k, (&omega, op)) in dec.frequencies.iter().zip(&dec.ops).enumerate() {
        let gamma = bath.rate(omega)?;
        let occupation = occupations[k];
        if !(gamma >= 0.0 && occupation >= 0.0) {
            return Err(Error::InvalidMatrix(format!(
                "negative rate at omega = {omega}: gamma {gamma}, N {occupation}"
            )));
        }
        l_diss += dissipator_superop(op).scale(gamma * (occupation + 1.0));
        if occupation > 0.0 {
            l_diss += dissipator_superop(&dagger(op)).scale(gamma * occupation);
        }
        channels.push(Channel { omega, gamma, occupation, op: op.clone() });
    }
    let mut h_eff = sys.h.clone();
    if let Some(shifts) = &lamb_shifts {
        for (delta, op) in shifts.iter().zip(&dec.ops) {
            let od = dagger(op);
            h_eff += (&od * op - op * &od).scale(*delta);
        }
    }
    let l_ham = hamiltonian_superop(&h_eff);
    Ok(Liouvillian {
        dim: d,
        l_total: &l_ham + &l_diss,
        l_ham,
        l_diss,
        system: sys.clone(),
        bath: *bath,
        channels,
        h_eff,
        lamb_shifts,
        energies: dec.energies.clone(),
        basis: dec.basis.clone(),
    })
}

/// Generator of the moving-bath master equation.
///
/// With `include_lamb` the Hamiltonian part gains h_LS = Σ_ω Δ(ω)A_ω†A_ω,
/// summed over both signs of ω; the rates are unchanged.
pub fn build_liouvillian(
    sys: &SystemSpec,
    bath: &BathSpec,
    dec: &TransitionDecomposition,
    include_lamb: bool,
    epsilon: Option<f64>,
) -> Result<Liouvillian> {
    let occupations = dec.frequencies.iter().map(|&w| bath.occupation(w)).collect::<Result<Vec<_>>>()?;
    let shifts = if include_lamb {
        let eps = epsilon.ok_or(Error::MissingEpsilon)?;
        let quad = QuadratureSpec::default();
        Some(dec.frequencies.iter().map(|&w| lamb_shift(bath, w, eps, &quad)).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    assemble(sys, dec, bath, &occupations, shifts)
}

/// Generator for a reservoir at the directional inverse temperature β_ξ,
/// keeping the moving-bath vacuum rates γ(ω).
pub fn fixed_temperature_liouvillian(
    sys: &SystemSpec,
    dec: &TransitionDecomposition,
    bath: &BathSpec,
    xi: f64,
) -> Result<Liouvillian> {
    let beta_xi = directional_beta(bath, xi)?;
    let occupations = dec.frequencies.iter().map(|&w| planck_n(beta_xi, w)).collect::<Result<Vec<_>>>()?;
    assemble(sys, dec, bath, &occupations, None)
}

/// Generator with explicitly supplied occupations, one per Bohr frequency.
pub fn liouvillian_with_occupations(
    sys: &SystemSpec,
    dec: &TransitionDecomposition,
    bath: &BathSpec,
    occupations: &[f64],
) -> Result<Liouvillian> {
    if occupations.len() != dec.frequencies.len() {
        return Err(Error::DimensionMismatch { expected: dec.frequencies.len(), got: occupations.len() });
    }
    assemble(sys, dec, bath, occupations, None)
}

fn act(l: &CMat, d: usize, rho: &CMat) -> Result<CMat> {
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, got: rho.nrows() });
    }
    Ok(unvec(&(l * vec_cols(rho)), d))
}

/// dρ/dτ = L[ρ].
pub fn apply(gen: &Liouvillian, rho: &CMat) -> Result<CMat> {
    act(&gen.l_total, gen.dim, rho)
}

/// Dissipative part ℒ[ρ] only.
pub fn dissipator_apply(gen: &Liouvillian, rho: &CMat) -> Result<CMat> {
    act(&gen.l_diss, gen.dim, rho)
}

/// An invariant subspace of the generator in the eigenbasis of `h`.
#[derive(Debug, Clone)]
pub struct Block {
    /// Column-stacked eigenbasis indices p = i + j d of |i⟩⟨j|.
    pub indices: Vec<usize>,
    pub matrix: CMat,
}

/// The generator written in the eigenbasis of `h` and split into the
/// connected components of its sparsity pattern.
///
/// The secular generator commutes with [h, ·], so each component only mixes
/// operators |i⟩⟨j| of (nearly) equal Bohr frequency.
#[derive(Debug, Clone)]
pub struct BlockForm {
    pub dim: usize,
    pub basis: CMat,
    pub blocks: Vec<Block>,
}

impl BlockForm {
    /// vec(V† ρ V).
    pub fn to_eigen(&self, rho: &CMat) -> Vec<num_complex::Complex64> {
        let m = self.basis.adjoint() * rho * &self.basis;
        m.as_slice().to_vec()
    }

    /// V X V† for a column-stacked eigenbasis vector.
    pub fn from_eigen(&self, v: &[num_complex::Complex64]) -> CMat {
        let m = CMat::from_column_slice(self.dim, self.dim, v);
        &self.basis * m * self.basis.adjoint()
    }
}

impl Liouvillian {
    /// Eigenbasis block form; built from the stored ingredients, never by
    /// transforming the d²×d² matrix.
    pub fn block_form(&self) -> BlockForm {
        let d = self.dim;
        let v = &self.basis;
        let vd = v.adjoint();
        let h = &vd * &self.h_eff * v;
        let mut l = hamiltonian_superop(&h);
        for ch in &self.channels {
            let op = &vd * &ch.op * v;
            l += dissipator_superop(&op).scale(ch.gamma * (ch.occupation + 1.0));
            if ch.occupation > 0.0 {
                l += dissipator_superop(&dagger(&op)).scale(ch.gamma * ch.occupation);
            }
        }
        let n = d * d;
        let threshold = 1e-13 * max_abs(&l).max(f64::MIN_POSITIVE);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for j in 0..n {
            for i in 0..n {
                if i != j && l[(i, j)].norm() > threshold {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for p in 0..n {
            let root = find(&mut parent, p);
            if slot[root] == usize::MAX {
                slot[root] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[root]].push(p);
        }
        let blocks = groups
            .into_iter()
            .map(|indices| {
                let k = indices.len();
                let matrix = CMat::from_fn(k, k, |a, b| l[(indices[a], indices[b])]);
                Block { indices, matrix }
            })
            .collect();
        BlockForm { dim: d, basis: v.clone(), blocks }
    }

    /// Largest entry of vec(I)†·L, which vanishes for a trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim;
        let id = vec_cols(&identity(d));
        let row = id.adjoint() * &self.l_total;
        row.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Matrix of zeros with a single one at (i, j).
pub fn unit(d: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::from_element(d, d, ZERO);
    m[(i, j)] = c(1.0, 0.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, from_real_rows};

    fn qubit() -> SystemSpec {
        let h = from_real_rows(&[&[0.5, 0.0], &[0.0, -0.5]]);
        let a = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        SystemSpec::new(h, a).unwrap()
    }

    #[test]
    fn rejects_invalid_systems() {
        let h = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(SystemSpec::new(h.clone(), h).is_err());
        let one = from_real_rows(&[&[1.0]]);
        assert!(SystemSpec::new(one.clone(), one).is_err());
    }

    #[test]
    fn qubit_lowering_operator() {
        let dec = decompose_transitions(&qubit(), DEFAULT_OMEGA_TOL).unwrap();
        assert_eq!(dec.frequencies.len(), 1);
        assert!((dec.frequencies[0] - 1.0).abs() < 1e-14);
        // σ₋ = |g⟩⟨e| in (excited, ground) order
        let expected = unit(2, 1, 0);
        assert!(max_abs(&(&dec.ops[0] - expected)) < 1e-14);
        assert!(dec.zero_op.is_none());
    }

    #[test]
    fn identity_coupling_has_only_zero_part() {
        let sys = SystemSpec::new(qubit().h, identity(2)).unwrap();
        let dec = decompose_transitions(&sys, DEFAULT_OMEGA_TOL).unwrap();
        assert!(dec.ops.is_empty());
        assert!(max_abs(&(dec.zero_op.unwrap() - identity(2))) < 1e-14);
    }

    #[test]
    fn degenerate_levels_feed_zero_part() {
        let h = from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
        let a = from_real_rows(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]]);
        let dec = decompose_transitions(&SystemSpec::new(h, a.clone()).unwrap(), DEFAULT_OMEGA_TOL).unwrap();
        assert!(dec.has_degenerate_levels());
        assert_eq!(dec.frequencies.len(), 1);
        assert!(max_abs(&(dec.reconstruct() - a)) < 1e-12);
        assert!(dec.zero_op.is_some());
    }

    #[test]
    fn transition_operators_lower_energy() {
        let h = from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 0.7, 0.0], &[0.0, 0.0, 2.0]]);
        let a = from_real_rows(&[&[0.3, 1.0, 0.5], &[1.0, 0.0, 2.0], &[0.5, 2.0, -1.0]]);
        let sys = SystemSpec::new(h.clone(), a.clone()).unwrap();
        let dec = decompose_transitions(&sys, DEFAULT_OMEGA_TOL).unwrap();
        assert_eq!(dec.frequencies.len(), 3);
        assert!(max_abs(&(dec.reconstruct() - a)) < 1e-12);
        for (w, op) in dec.frequencies.iter().zip(&dec.ops) {
            let lhs = commutator(&h, op);
            assert!(max_abs(&(lhs + op.scale(*w))) < 1e-12);
        }
    }

    #[test]
    fn nearly_equal_gaps_are_ambiguous() {
        let h = from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0 + 5e-9]]);
        let a = from_real_rows(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0], &[1.0, 1.0, 0.0]]);
        let sys = SystemSpec::new(h, a).unwrap();
        assert!(matches!(decompose_transitions(&sys, 1e-9), Err(Error::ClusteringAmbiguity(_))));
        assert_eq!(decompose_transitions(&sys, 1e-6).unwrap().frequencies.len(), 2);
    }

    #[test]
    fn excited_state_decay_matches_hand_expansion() {
        let sys = qubit();
        let dec = decompose_transitions(&sys, DEFAULT_OMEGA_TOL).unwrap();
        let bath = BathSpec::udw(1.0, 0.0, 1.0).unwrap();
        let gen = liouvillian_with_occupations(&sys, &dec, &bath, &[0.3]).unwrap();
        let g = bath.rate(1.0).unwrap();
        let rho = unit(2, 0, 0);
        let out = apply(&gen, &rho).unwrap();
        // D[σ₊] annihilates |e⟩⟨e|, D[σ₋] moves it down at γ(N+1)
        assert!((out[(0, 0)].re + g * 1.3).abs() < 1e-14);
        assert!((out[(1, 1)].re - g * 1.3).abs() < 1e-14);
        assert!(out[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn lamb_shift_requires_cutoff() {
        let sys = qubit();
        let dec = decompose_transitions(&sys, DEFAULT_OMEGA_TOL).unwrap();
        let bath = BathSpec::udw(1.0, 0.5, 0.1).unwrap();
        assert!(matches!(build_liouvillian(&sys, &bath, &dec, true, None), Err(Error::MissingEpsilon)));
        let gen = build_liouvillian(&sys, &bath, &dec, true, Some(0.01)).unwrap();
        let delta = gen.lamb_shifts.as_ref().unwrap()[0];
        // h + Δσ_z: splitting Ω₀ + 2Δ
        let split = gen.h_eff[(0, 0)].re - gen.h_eff[(1, 1)].re;
        assert!((split - (1.0 + 2.0 * delta)).abs() < 1e-14);
        assert_eq!(gen.l_diss, build_liouvillian(&sys, &bath, &dec, false, None).unwrap().l_diss);
    }

    #[test]
    fn trace_preserving() {
        let sys = qubit();
        let dec = decompose_transitions(&sys, DEFAULT_OMEGA_TOL).unwrap();
        let gen = build_liouvillian(&sys, &BathSpec::td(0.7, 1.2, 1.0).unwrap(), &dec, false, None).unwrap();
        assert!(gen.trace_defect() < 1e-12);
        assert_eq!(gen.l_total, &gen.l_ham + &gen.l_diss);
    }

    #[test]
    fn block_form_matches_dense_generator() {
        let h = from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 0.7, 0.0], &[0.0, 0.0, 2.0]]);
        let a = from_real_rows(&[&[0.3, 1.0, 0.5], &[1.0, 0.0, 2.0], &[0.5, 2.0, -1.0]]);
        let sys = SystemSpec::new(h, a).unwrap();
        let dec = decompose_transitions(&sys, DEFAULT_OMEGA_TOL).unwrap();
        let gen = build_liouvillian(&sys, &BathSpec::udw(1.0, 0.4, 1.0).unwrap(), &dec, false, None).unwrap();
        let bf = gen.block_form();
        assert_eq!(bf.blocks.iter().map(|b| b.indices.len()).sum::<usize>(), 9);
        // populations form one block, every coherence its own
        assert_eq!(bf.blocks.len(), 7);
        let rho = CMat::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, i as f64 - j as f64));
        let x = bf.to_eigen(&rho);
        let mut y = vec![ZERO; 9];
        for b in &bf.blocks {
            for (r, &p) in b.indices.iter().enumerate() {
                for (s, &q) in b.indices.iter().enumerate() {
                    y[p] += b.matrix[(r, s)] * x[q];
                }
            }
        }
        let via_blocks = bf.from_eigen(&y);
        assert!(max_abs(&(via_blocks - apply(&gen, &rho).unwrap())) < 1e-12);
    }
}
