// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! TOML scenario configuration.

use serde::Deserialize;

use crate::dynamics::Method;
use crate::linalg::{c, CMat};
use crate::liouville::{SystemSpec, DEFAULT_OMEGA_TOL};
use crate::presets;
use crate::quad::QuadratureSpec;
use crate::spectral::Coupling;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Spectrum,
    QubitHeat,
    EntropyProduction,
    TotalEntropy,
    Evolve,
    Stationary,
    KmsCheck,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::QubitHeat => "qubit-heat",
            Self::EntropyProduction => "entropy-production",
            Self::TotalEntropy => "total-entropy",
            Self::Evolve => "evolve",
            Self::Stationary => "stationary",
            Self::KmsCheck => "kms-check",
        }
    }
}

/// A scalar, an explicit list, or an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Scalar(f64),
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        #[serde(default)]
        log: bool,
    },
}

impl Grid {
    pub fn values(&self, field: &str) -> Result<Vec<f64>, CliError> {
        let v = match self {
            Grid::Scalar(x) => vec![*x],
            Grid::List(v) => v.clone(),
            Grid::Range { start, stop, count, log } => {
                if *count < 2 {
                    return Err(CliError::config(field, "a range needs count ≥ 2"));
                }
                if *log && !(*start > 0.0 && *stop > 0.0) {
                    return Err(CliError::config(field, "a log range needs positive end points"));
                }
                let n = *count;
                (0..n)
                    .map(|k| {
                        let s = k as f64 / (n - 1) as f64;
                        if *log {
                            (start.ln() + s * (stop.ln() - start.ln())).exp()
                        } else {
                            start + s * (stop - start)
                        }
                    })
                    .collect()
            }
        };
        if v.is_empty() {
            return Err(CliError::config(field, "grid is empty"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::config(field, "grid has non-finite values"));
        }
        if v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::config(field, "grid must be strictly increasing"));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Couplings {
    One(Coupling),
    Many(Vec<Coupling>),
}

impl Couplings {
    pub fn values(&self) -> Result<Vec<Coupling>, CliError> {
        let v = match self {
            Couplings::One(c) => vec![*c],
            Couplings::Many(v) => v.clone(),
        };
        if v.is_empty() {
            return Err(CliError::config("bath.coupling", "no coupling given"));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    /// Sweeps default to both couplings, single-bath scenarios to UdW.
    pub coupling: Option<Couplings>,
    pub beta: Option<f64>,
    pub temperature: Option<f64>,
    pub u: Option<Grid>,
    #[serde(default = "one")]
    pub lambda: f64,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self { coupling: None, beta: None, temperature: None, u: None, lambda: 1.0 }
    }
}

impl BathConfig {
    pub fn beta(&self) -> Result<f64, CliError> {
        let b = match (self.beta, self.temperature) {
            (Some(_), Some(_)) => return Err(CliError::config("bath", "give either beta or temperature, not both")),
            (Some(b), None) => b,
            (None, Some(t)) => 1.0 / t,
            (None, None) => 1.0,
        };
        if !(b > 0.0) || !b.is_finite() {
            return Err(CliError::config("bath.beta", "inverse temperature must be positive"));
        }
        Ok(b)
    }

    pub fn u_values(&self, default: Grid) -> Result<Vec<f64>, CliError> {
        self.u.as_ref().unwrap_or(&default).values("bath.u")
    }

    pub fn single_u(&self) -> Result<f64, CliError> {
        let v = self.u_values(Grid::Scalar(0.0))?;
        match v.as_slice() {
            [u] => Ok(*u),
            _ => Err(CliError::config("bath.u", "this scenario takes a single rapidity")),
        }
    }

    pub fn couplings(&self) -> Result<Vec<Coupling>, CliError> {
        match &self.coupling {
            Some(c) => c.values(),
            None => Ok(vec![Coupling::UdW, Coupling::TD]),
        }
    }

    pub fn single_coupling(&self) -> Result<Coupling, CliError> {
        let Some(c) = &self.coupling else { return Ok(Coupling::UdW) };
        match c.values()?.as_slice() {
            [c] => Ok(*c),
            _ => Err(CliError::config("bath.coupling", "this scenario takes a single coupling")),
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresetName {
    Qubit,
    Oscillator,
    ThreeLevel,
    Random,
}

/// Named preset or explicit h and A as row-major lists of [re, im] pairs.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub preset: Option<PresetName>,
    #[serde(default = "one")]
    pub omega0: f64,
    #[serde(default = "one")]
    pub mass: f64,
    pub dim: Option<usize>,
    pub energies: Option<[f64; 3]>,
    #[serde(default = "one")]
    pub lambda1: f64,
    #[serde(default = "one")]
    pub lambda2: f64,
    pub h: Option<Vec<Vec<[f64; 2]>>>,
    pub a: Option<Vec<Vec<[f64; 2]>>>,
}

fn matrix(rows: &[Vec<[f64; 2]>], field: &str) -> Result<CMat, CliError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::config(field, "matrix must be square and non-empty"));
    }
    Ok(CMat::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

impl SystemConfig {
    pub fn build(&self, seed: u64) -> Result<SystemSpec, CliError> {
        let lib = |e| CliError::Library { context: "system".into(), source: e };
        match (self.preset, &self.h, &self.a) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                Err(CliError::config("system", "give either a preset or explicit h and a"))
            }
            (Some(PresetName::Qubit), ..) => Ok(presets::qubit(self.omega0)),
            (Some(PresetName::Oscillator), ..) => {
                let dim = self.dim.ok_or_else(|| CliError::config("system.dim", "oscillator needs dim"))?;
                presets::oscillator(self.omega0, self.mass, dim).map_err(lib)
            }
            (Some(PresetName::ThreeLevel), ..) => {
                let e = self.energies.unwrap_or([0.0, 0.4, 1.0]);
                presets::three_level(e, self.lambda1, self.lambda2).map_err(lib)
            }
            (Some(PresetName::Random), ..) => {
                let dim = self.dim.ok_or_else(|| CliError::config("system.dim", "random preset needs dim"))?;
                presets::random(seed, dim).map_err(lib)
            }
            (None, Some(h), Some(a)) => {
                let (h, a) = (matrix(h, "system.h")?, matrix(a, "system.a")?);
                SystemSpec::new(h, a).map_err(lib)
            }
            (None, ..) => Err(CliError::config("system", "need a preset or both h and a")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialKind {
    Ground,
    Excited,
    Mixed,
    Gibbs,
    Vector,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub state: InitialKind,
    /// Inverse temperature of a Gibbs initial state.
    pub beta: Option<f64>,
    pub temperature: Option<f64>,
    pub vector: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Rk45,
    Exp,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    pub method: MethodName,
    pub ode_tol: f64,
    pub quad_points: usize,
    pub quad_tol: f64,
    pub omega_tol: f64,
    pub stationary_tol: f64,
    pub t_final: f64,
    pub samples: usize,
    pub lamb_shift: bool,
    pub epsilon: Option<f64>,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            method: MethodName::Exp,
            ode_tol: 1e-10,
            quad_points: 64,
            quad_tol: 1e-10,
            omega_tol: DEFAULT_OMEGA_TOL,
            stationary_tol: 1e-10,
            t_final: 10.0,
            samples: 100,
            lamb_shift: false,
            epsilon: None,
        }
    }
}

impl NumericsConfig {
    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec { gauss_legendre_points: self.quad_points, abs_tol: self.quad_tol, ..Default::default() }
    }

    pub fn method(&self) -> Method {
        match self.method {
            MethodName::Rk45 => Method::Rk45,
            MethodName::Exp => Method::ExpStep,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.ode_tol) || !positive(self.quad_tol) || !positive(self.stationary_tol) {
            return Err(CliError::config("numerics", "tolerances must be positive"));
        }
        if !positive(self.omega_tol) {
            return Err(CliError::config("numerics.omega_tol", "must be positive"));
        }
        if self.quad_points < 2 {
            return Err(CliError::config("numerics.quad_points", "need at least 2 nodes"));
        }
        if !positive(self.t_final) {
            return Err(CliError::config("numerics.t_final", "must be positive"));
        }
        if self.samples < 1 {
            return Err(CliError::config("numerics.samples", "need at least one sample interval"));
        }
        if self.lamb_shift && self.epsilon.is_none() {
            return Err(CliError::config("numerics.epsilon", "Lamb shift needs a cutoff"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub beta_omega: Grid,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self { beta_omega: Grid::Range { start: 0.1, stop: 5.0, count: 50, log: false } }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitHeatConfig {
    pub beta_omega: Grid,
    /// Inverse temperature of the initial Gibbs state; the bath's by default.
    pub initial_beta: Option<f64>,
}

impl Default for QubitHeatConfig {
    fn default() -> Self {
        Self { beta_omega: Grid::List(vec![0.5, 1.0, 2.0, 4.0]), initial_beta: None }
    }
}

/// Qubit relaxing from a Gibbs state at T₀ into a moving bath at T.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EntropyConfig {
    pub omega: f64,
    /// (T₀, T) pairs in units of ω.
    pub temperature_pairs: Vec<[f64; 2]>,
    /// Final time in units of 1/γ₀.
    pub gamma0_t_final: f64,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        Self { omega: 1.0, temperature_pairs: vec![[33.0, 1.0], [1.0, 33.0]], gamma0_t_final: 5.0 }
    }
}

impl EntropyConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.omega > 0.0) {
            return Err(CliError::config("entropy.omega", "must be positive"));
        }
        if self.temperature_pairs.is_empty() || self.temperature_pairs.iter().flatten().any(|t| !(*t > 0.0)) {
            return Err(CliError::config("entropy.temperature_pairs", "need positive (T0, T) pairs"));
        }
        if !(self.gamma0_t_final > 0.0) {
            return Err(CliError::config("entropy.gamma0_t_final", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KmsConfig {
    pub beta: Grid,
    pub u: Grid,
    pub t: Grid,
    #[serde(default = "default_nmax")]
    pub nmax: usize,
}

fn default_nmax() -> usize {
    10_000
}

impl Default for KmsConfig {
    fn default() -> Self {
        Self {
            beta: Grid::List(vec![0.5, 1.0, 2.0]),
            u: Grid::List(vec![0.3, 0.8]),
            t: Grid::List(vec![0.3, 0.7]),
            nmax: default_nmax(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// File stem of the dataset; the scenario name by default.
    pub name: Option<String>,
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub seed: Option<u64>,
    #[serde(default)]
    pub bath: BathConfig,
    pub system: Option<SystemConfig>,
    pub initial: Option<InitialConfig>,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub qubit_heat: QubitHeatConfig,
    #[serde(default)]
    pub entropy: EntropyConfig,
    #[serde(default)]
    pub kms: KmsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.numerics.validate()?;
        if !(cfg.bath.lambda >= 0.0) || !cfg.bath.lambda.is_finite() {
            return Err(CliError::config("bath.lambda", "must be non-negative"));
        }
        cfg.bath.beta()?;
        cfg.bath.couplings()?;
        Ok(cfg)
    }
}
