// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Riemann zeta at integer arguments, integer-order polylogarithms and the
//! auxiliary function F(x) = 2 g₃(e⁻ˣ) + 2x g₂(e⁻ˣ) + x² g₁(e⁻ˣ), which is
//! ∫ₓ^∞ y²/(eʸ − 1) dy.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const ZETA3: f64 = 1.202_056_903_159_594_3;

/// Bernoulli numbers B₂ⱼ, j = 1..=7, for the Euler–Maclaurin tail.
const B2J: [f64; 7] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];

/// ζ(n) for integer n ≥ 2 by Euler–Maclaurin summation with ten explicit terms.
fn zeta_positive(n: u32) -> f64 {
    debug_assert!(n >= 2);
    let s = n as f64;
    const CUT: usize = 10;
    let nn = CUT as f64;
    let head: f64 = (1..CUT).rev().map(|k| (k as f64).powf(-s)).sum();
    let mut tail = nn.powf(1.0 - s) / (s - 1.0) + 0.5 * nn.powf(-s);
    // rising factorial s (s+1) ... (s+2j-2) / (2j)!
    let mut coef = s;
    let mut fact = 2.0;
    for (j, b) in B2J.iter().enumerate() {
        let jj = (j + 1) as f64;
        tail += b / fact * coef * nn.powf(-s - 2.0 * jj + 1.0);
        coef *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj);
        fact *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
    }
    head + tail
}

/// Riemann zeta at an integer argument other than the pole at 1.
pub fn zeta(n: i32) -> f64 {
    match n {
        1 => f64::INFINITY,
        2 => PI * PI / 6.0,
        3 => ZETA3,
        0 => -0.5,
        n if n >= 2 => zeta_positive(n as u32),
        n if n % 2 == 0 => 0.0,
        n => {
            // ζ(1 − 2m) = −(2m − 1)! · B₂ₘ/(2m)!
            let m = ((1 - n) / 2) as u32;
            -factorial(2 * m - 1) * bernoulli_over_factorial(m)
        }
    }
}

/// B₂ₘ/(2m)! = (−1)^{m+1} 2 ζ(2m)/(2π)^{2m}.
fn bernoulli_over_factorial(m: u32) -> f64 {
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    sign * 2.0 * zeta(2 * m as i32) / (2.0 * PI).powi(2 * m as i32)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn harmonic(n: u32) -> f64 {
    (1..=n).map(|k| 1.0 / f64::from(k)).sum()
}

const MAX_TERMS: usize = 1_000_000;

/// Power series Σ zⁿ/n^ℓ, stopped when the next term falls below 1e-16 of the sum.
fn polylog_series(ell: u32, z: f64) -> f64 {
    let mut sum = 0.0;
    let mut zn = 1.0;
    for n in 1..=MAX_TERMS {
        zn *= z;
        let term = zn / (n as f64).powi(ell as i32);
        sum += term;
        if term < 1e-16 * sum {
            break;
        }
    }
    sum
}

/// Expansion of Li_ℓ(e^μ) in powers of μ (valid for |μ| < 2π, μ ≤ 0):
/// Σ_{k≠ℓ−1} ζ(ℓ−k) μᵏ/k! + μ^{ℓ−1}/(ℓ−1)! [H_{ℓ−1} − ln(−μ)].
fn polylog_log_series(ell: u32, mu: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0; // μᵏ/k!
    for k in 0..80u32 {
        if k > 0 {
            pow *= mu / f64::from(k);
        }
        let term = if k + 1 == ell {
            if mu == 0.0 {
                0.0
            } else {
                pow * (harmonic(ell - 1) - (-mu).ln())
            }
        } else {
            zeta(ell as i32 - k as i32) * pow
        };
        sum += term;
        // every other ζ at negative even argument vanishes
        if k > ell + 1 && term != 0.0 && term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Polylogarithm g_ℓ(x) = Σ_{n≥1} xⁿ/n^ℓ for integer ℓ ≥ 1 and x ∈ [0, 1].
pub fn polylog(ell: u32, x: f64) -> Result<f64> {
    if ell == 0 {
        return Err(Error::Domain("polylog order must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("polylog argument {x} outside [0, 1]")));
    }
    if ell == 1 {
        if x == 1.0 {
            return Err(Error::Domain("g_1 diverges at x = 1".into()));
        }
        return Ok(-(-x).ln_1p());
    }
    if x >= 1.0 - 1e-12 {
        return Ok(zeta(ell as i32));
    }
    if x <= 0.75 {
        Ok(polylog_series(ell, x))
    } else {
        Ok(polylog_log_series(ell, x.ln()))
    }
}

/// g_ℓ(e^{−x}) for x ≥ 0, without forming e^{−x} when it is close to 1.
pub fn polylog_exp_neg(ell: u32, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    match ell {
        1 if x < std::f64::consts::LN_2 => -(-(-x).exp_m1()).ln(),
        1 => -(-(-x).exp()).ln_1p(),
        _ if x < 0.3 => polylog_log_series(ell, -x),
        _ => polylog_series(ell, (-x).exp()),
    }
}

/// F(x) = 2 g₃(e⁻ˣ) + 2x g₂(e⁻ˣ) + x² g₁(e⁻ˣ), x ≥ 0.
pub fn f_aux(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("F(x) needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(2.0 * ZETA3);
    }
    if x > 745.0 {
        return Ok(0.0);
    }
    Ok(2.0 * polylog_exp_neg(3, x) + 2.0 * x * polylog_exp_neg(2, x) + x * x * polylog_exp_neg(1, x))
}

/// D(x) = 2ζ(3) − F(x) = ∫₀ˣ y²/(eʸ − 1) dy.
///
/// Summed from the Bernoulli expansion of y/(eʸ − 1) for small x, where
/// forming 2ζ(3) − F(x) would cancel.
pub fn f_aux_complement(x: f64) -> f64 {
    if x >= 2.0 {
        return 2.0 * ZETA3 - f_aux(x).unwrap_or(0.0);
    }
    let x2 = x * x;
    let mut sum = x2 / 2.0 - x2 * x / 6.0;
    let mut pow = x2 * x2; // x^{2m+2}
    for m in 1..60u32 {
        let term = bernoulli_over_factorial(m) * pow / f64::from(2 * m + 2);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        pow *= x2;
    }
    sum
}
