// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("ambiguous Bohr-frequency clustering: {0}")]
    ClusteringAmbiguity(String),

    #[error("Lamb shift requested without a short-time cutoff")]
    MissingEpsilon,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("integrator step size underflow at tau = {tau}")]
    StepUnderflow { tau: f64 },

    #[error("state invariant violated at tau = {tau}: {detail}")]
    InvariantViolation { tau: f64, detail: String },

    /// More than one eigenvalue of the generator lies within tolerance of zero.
    #[error("stationary state is not unique: {0}")]
    DegenerateNullSpace(String),

    #[error("Hamiltonian has degenerate eigenvalues: {0}")]
    Degeneracy(String),

    #[error("Pauli rate graph is disconnected")]
    DisconnectedGraph,

    #[error("truncation dimension {dim} too small: tail {tail:e}")]
    InsufficientDimension { dim: usize, tail: f64 },

    #[error("image sum hits a singular denominator (|d| = {0:e})")]
    Singularity(f64),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}
