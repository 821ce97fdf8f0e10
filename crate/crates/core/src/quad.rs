// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! Numerical quadrature: fixed Gauss–Legendre rules for the smooth
//! directional integrals and a globally adaptive Gauss–Kronrod integrator
//! for the k-space integrals with integrable endpoint singularities.

use crate::error::{Error, Result};

/// Quadrature settings threaded through the spectral and thermodynamic code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Number of Gauss–Legendre nodes used for ξ-integrals on [-1, 1].
    pub gauss_legendre_points: usize,
    /// Absolute tolerance of the adaptive integrator.
    pub abs_tol: f64,
    /// Relative tolerance of the adaptive integrator (0 disables it).
    pub rel_tol: f64,
    pub max_segments: usize,
    pub rule: KronrodRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { gauss_legendre_points: 64, abs_tol: 1e-10, rel_tol: 0.0, max_segments: 4000, rule: KronrodRule::G10K21 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KronrodRule {
    G7K15,
    G10K21,
}

#[allow(clippy::excessive_precision)]
const XGK15: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WG7: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
#[allow(clippy::excessive_precision)]
const WGK15: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

#[allow(clippy::excessive_precision)]
const XGK21: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WG10: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];
#[allow(clippy::excessive_precision)]
const WGK21: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

impl KronrodRule {
    fn tables(self) -> (&'static [f64], &'static [f64], &'static [f64]) {
        match self {
            KronrodRule::G7K15 => (&XGK15, &WG7, &WGK15),
            KronrodRule::G10K21 => (&XGK21, &WG10, &WGK21),
        }
    }
}

/// One Gauss–Kronrod panel on [a, b]: returns (Kronrod estimate, |K − G|).
///
/// Kronrod abscissae with odd index are the embedded Gauss nodes; the centre
/// node belongs to the Gauss rule only when the Gauss order is odd.
fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: KronrodRule) -> (f64, f64) {
    let (xgk, wg, wgk) = rule.tables();
    let n = xgk.len();
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * wgk[n - 1];
    let mut gauss = match rule {
        KronrodRule::G7K15 => fc * wg[wg.len() - 1],
        KronrodRule::G10K21 => 0.0,
    };
    for j in 0..n - 1 {
        let dx = half * xgk[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += wgk[j] * s;
        if j % 2 == 1 {
            gauss += wg[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub segments: usize,
}

/// Globally adaptive Gauss–Kronrod integration over the finite interval
/// [a, b], bisecting the panel with the largest error estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    integrate_breaks(f, &[a, b], spec)
}

/// Adaptive integration over consecutive intervals between sorted break
/// points. Singularities placed at break points are never evaluated.
pub fn integrate_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Integral> {
    let mut segs: Vec<Segment> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (value, error) = panel(&f, w[0], w[1], spec.rule);
            Segment { a: w[0], b: w[1], value, error }
        })
        .collect();
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target {
            return Ok(Integral { value, error, segments: segs.len() });
        }
        if segs.len() >= spec.max_segments {
            return Err(Error::Quadrature { tolerance: target, estimate: error });
        }
        let (worst, _) =
            segs.iter().enumerate().max_by(|x, y| x.1.error.total_cmp(&y.1.error)).expect("at least one segment");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if !(mid > s.a && mid < s.b) {
            return Err(Error::Quadrature { tolerance: target, estimate: error });
        }
        for (a, b) in [(s.a, mid), (mid, s.b)] {
            let (value, error) = panel(&f, a, b, spec.rule);
            segs.push(Segment { a, b, value, error });
        }
    }
}

/// Adaptive integration over [a, ∞) through the map x = a + t/(1 − t).
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadratureSpec) -> Result<Integral> {
    integrate_to_infinity_scaled(f, a, 1.0, spec)
}

/// As [`integrate_to_infinity`] with the map x = a + s·t/(1 − t), where `s`
/// is the length scale over which the integrand decays.
pub fn integrate_to_infinity_scaled<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let g = |t: f64| {
        let s = 1.0 - t;
        let x = a + scale * t / s;
        let fx = f(x);
        if fx == 0.0 {
            0.0
        } else {
            fx * scale / (s * s)
        }
    };
    integrate(g, 0.0, 1.0, spec)
}

/// Gauss–Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Three-term recurrence for P_n(x) and its derivative.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// ∫₋₁¹ f(ξ) dξ with an n-point Gauss–Legendre rule.
pub fn gauss_legendre_integrate<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    x.iter().zip(&w).map(|(&xi, &wi)| wi * f(xi)).sum()
}
