// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Open-system dynamics of a probe moving at constant velocity through a
//! thermal massless scalar field.
//!
//! The bath enters through the effective occupation N(ω) of the
//! [`spectral`] module, for linear (Unruh–DeWitt) or time-derivative
//! coupling. [`liouville`] builds the secular Lindblad generator for any
//! finite-dimensional probe, [`dynamics`] evolves it and finds stationary
//! states, and [`thermo`] evaluates heat, entropy and entropy production.
//! [`models`] holds closed-form solutions for the standard probes and
//! [`kms`] the thermal image sums used to test the KMS condition.
//!
//! ```
//! use relatherm::{build_liouvillian, decompose_transitions, presets, BathSpec};
//! use relatherm::dynamics::stationary_state;
//!
//! let sys = presets::qubit(1.0);
//! let bath = BathSpec::udw(1.0, 1.0, 0.1).unwrap();
//! let dec = decompose_transitions(&sys, 1e-9).unwrap();
//! let gen = build_liouvillian(&sys, &bath, &dec, false, None).unwrap();
//! let rho = stationary_state(&gen, 1e-10).unwrap();
//! let n = bath.occupation(1.0).unwrap();
//! assert!((rho.populations()[0] - n / (2.0 * n + 1.0)).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod kms;
pub mod linalg;
pub mod liouville;
pub mod models;
pub mod presets;
pub mod quad;
pub mod spectral;
pub mod thermo;

pub use dynamics::{DensityMatrix, EvolveOptions, Method, Trajectory};
pub use error::{Error, Result};
pub use liouville::{build_liouvillian, decompose_transitions, Liouvillian, SystemSpec, TransitionDecomposition};
pub use quad::QuadratureSpec;
pub use spectral::{BathSpec, Coupling};
