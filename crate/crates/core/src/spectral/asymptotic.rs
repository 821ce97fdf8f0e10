// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{low_velocity_coefficient, planck, polylog::ZETA3, BathSpec, Coupling};

/// Parameter regime for the closed-form approximations of N(ω).
///
/// For the time-derivative coupling `LowTemperature` is the high-frequency
/// regime (βω large) and `HighTemperature` the low-frequency one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AsymptoticRegime {
    LowVelocity,
    HighVelocity,
    LowTemperature,
    HighTemperature,
}

impl AsymptoticRegime {
    pub const ALL: [AsymptoticRegime; 4] = [
        AsymptoticRegime::LowVelocity,
        AsymptoticRegime::HighVelocity,
        AsymptoticRegime::LowTemperature,
        AsymptoticRegime::HighTemperature,
    ];

    /// Whether `(βω, u)` lies inside the window where the approximation is
    /// expected to hold to about a percent.
    pub fn contains(self, beta_omega: f64, u: f64) -> bool {
        let a = u.abs();
        match self {
            AsymptoticRegime::LowVelocity => a <= 0.01,
            AsymptoticRegime::HighVelocity => a >= 6.0,
            AsymptoticRegime::LowTemperature => beta_omega * (-a).exp() >= 20.0,
            AsymptoticRegime::HighTemperature => beta_omega * a.exp() <= 0.01,
        }
    }
}

/// Closed-form approximation of N(ω) in the given regime.
///
/// The caller is responsible for choosing a point inside the regime; no
/// check is made.
pub fn n_asymptotic(bath: &BathSpec, omega: f64, regime: AsymptoticRegime) -> f64 {
    let x = bath.beta * omega;
    let a = bath.u.abs();
    let tdf = 1.0 + 2.0 * (2.0 * a).cosh();
    match (bath.coupling, regime) {
        (c, AsymptoticRegime::LowVelocity) => planck(x) + low_velocity_coefficient(c, x) * a * a,
        (Coupling::UdW, AsymptoticRegime::HighVelocity) => (-a).exp() * (a - x.ln()) / x,
        (Coupling::UdW, AsymptoticRegime::LowTemperature) => (-x * (-a).exp()).exp() / (2.0 * x * a.sinh()),
        (Coupling::UdW, AsymptoticRegime::HighTemperature) => {
            if a == 0.0 {
                1.0 / x
            } else {
                a / (x * a.sinh())
            }
        }
        (Coupling::TD, AsymptoticRegime::HighVelocity) => 6.0 * ZETA3 * (-3.0 * a).exp() / x.powi(3),
        (Coupling::TD, AsymptoticRegime::LowTemperature) => {
            let y = x * (-a).exp();
            3.0 * (-y).exp() * (y * y + 2.0 * y + 2.0) / (2.0 * x.powi(3) * a.sinh() * tdf)
        }
        (Coupling::TD, AsymptoticRegime::HighTemperature) => 3.0 * a.cosh() / (x * tdf),
    }
}
