// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! One runner per scenario. Grid points are evaluated in parallel and
//! collected in grid order.

use rayon::prelude::*;

use crate::dynamics::{evolve, evolve_at, sample_times, stationary_state, DensityMatrix, EvolveOptions, Trajectory};
use crate::error::Error;
use crate::kms::{
    boosted_convex_check, hadamard_thermal, hadamard_thermal_r0, kms_residual, kms_residual_boosted, ImageSumSpec,
};
use crate::linalg::{c, eigh, trace, CMat, CVec};
use crate::liouville::{build_liouvillian, decompose_transitions, Liouvillian, SystemSpec, TransitionDecomposition};
use crate::models::qubit_delta_q;
use crate::presets;
use crate::spectral::{planck_n, BathSpec, Coupling};
use crate::thermo::{gibbs_state, heat_current, sigma_moving, thermo_records, total_entropy_production};

use super::config::{Grid, InitialKind, ScenarioConfig};
use super::output::{fmt_f64 as f, Dataset, Summary};
use super::CliError;

type Out = Result<(Dataset, Summary), CliError>;

fn lib(context: &str) -> impl Fn(Error) -> CliError + '_ {
    move |source| CliError::Library { context: context.to_string(), source }
}

fn bath(cfg: &ScenarioConfig, coupling: Coupling, beta: f64, u: f64) -> Result<BathSpec, CliError> {
    BathSpec::new(coupling, beta, u, cfg.bath.lambda).map_err(lib("bath"))
}

/// Largest |Tr ρ − 1| and smallest eigenvalue of one state.
fn invariants(rho: &CMat) -> (f64, f64) {
    ((trace(rho).re - 1.0).abs().max(trace(rho).im.abs()), eigh(rho).0[0])
}

struct Worst {
    trace_error: f64,
    min_eig: f64,
}

impl Worst {
    fn new() -> Self {
        Self { trace_error: 0.0, min_eig: f64::INFINITY }
    }

    fn add(&mut self, (te, me): (f64, f64)) {
        self.trace_error = self.trace_error.max(te);
        self.min_eig = self.min_eig.min(me);
    }

    fn record(&self, s: &mut Summary) {
        s.set("max_trace_error", f(self.trace_error));
        s.set("min_eigenvalue", f(self.min_eig));
    }
}

pub fn spectrum(cfg: &ScenarioConfig) -> Out {
    let beta = cfg.bath.beta()?;
    let us = cfg.bath.u_values(Grid::List(vec![0.4, 0.9]))?;
    let bws = cfg.spectrum.beta_omega.values("spectrum.beta_omega")?;
    if bws[0] <= 0.0 {
        return Err(CliError::config("spectrum.beta_omega", "values must be positive"));
    }
    let mut jobs = Vec::new();
    for c in cfg.bath.couplings()? {
        for &u in &us {
            for &bw in &bws {
                jobs.push((c, u, bw));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(c, u, bw)| {
            let n = bath(cfg, c, beta, u)?.occupation(bw / beta).map_err(lib("spectrum"))?;
            Ok(vec![f(bw), f(u), c.name().to_string(), f(n)])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut d = Dataset::new(&["beta_omega", "u", "coupling", "N"]);
    d.meta("beta", f(beta));
    d.rows = rows;
    Ok((d, Summary::default()))
}

pub fn qubit_heat(cfg: &ScenarioConfig) -> Out {
    let beta = cfg.bath.beta()?;
    let beta0 = cfg.qubit_heat.initial_beta.unwrap_or(beta);
    if !(beta0 > 0.0) {
        return Err(CliError::config("qubit_heat.initial_beta", "must be positive"));
    }
    let us = cfg.bath.u_values(Grid::Range { start: 0.0, stop: 2.0, count: 41, log: false })?;
    let bws = cfg.qubit_heat.beta_omega.values("qubit_heat.beta_omega")?;
    if bws[0] <= 0.0 {
        return Err(CliError::config("qubit_heat.beta_omega", "values must be positive"));
    }
    let mut jobs = Vec::new();
    for c in cfg.bath.couplings()? {
        for &bw in &bws {
            for &u in &us {
                jobs.push((c, bw, u));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(c, bw, u)| {
            let omega = bw / beta;
            let n = bath(cfg, c, beta, u)?.occupation(omega).map_err(lib("qubit-heat"))?;
            let n0 = planck_n(beta0, omega).map_err(lib("qubit-heat"))?;
            Ok(vec![f(u), f(bw), c.name().to_string(), f(qubit_delta_q(n0, n, omega))])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut d = Dataset::new(&["u", "beta_omega", "coupling", "delta_Q"]);
    d.meta("beta", f(beta));
    d.meta("initial_beta", f(beta0));
    d.rows = rows;
    Ok((d, Summary::default()))
}

/// Qubit, its decomposition and the γ₀ of the bath at rest.
struct QubitSetup {
    sys: SystemSpec,
    dec: TransitionDecomposition,
    gen: Liouvillian,
    gamma0: f64,
    rho0: DensityMatrix,
}

fn qubit_setup(cfg: &ScenarioConfig, c: Coupling, t0: f64, t: f64, u: f64) -> Result<QubitSetup, CliError> {
    let omega = cfg.entropy.omega;
    let sys = presets::qubit(omega);
    let ctx = lib("qubit relaxation");
    let dec = decompose_transitions(&sys, cfg.numerics.omega_tol).map_err(&ctx)?;
    let b = bath(cfg, c, 1.0 / (t * omega), u)?;
    let gen = build_liouvillian(&sys, &b, &dec, false, None).map_err(&ctx)?;
    let gamma0 = b.with_u(0.0).rate(omega).map_err(&ctx)?;
    if !(gamma0 > 0.0) {
        return Err(CliError::config("bath.lambda", "entropy scenarios need a nonzero coupling"));
    }
    let rho0 = gibbs_state(&sys, 1.0 / (t0 * omega)).map_err(&ctx)?;
    Ok(QubitSetup { sys, dec, gen, gamma0, rho0 })
}

fn entropy_jobs(cfg: &ScenarioConfig, default_u: Grid) -> Result<Vec<(Coupling, [f64; 2], f64)>, CliError> {
    cfg.entropy.validate()?;
    let us = cfg.bath.u_values(default_u)?;
    let mut jobs = Vec::new();
    for c in cfg.bath.couplings()? {
        for &pair in &cfg.entropy.temperature_pairs {
            for &u in &us {
                jobs.push((c, pair, u));
            }
        }
    }
    Ok(jobs)
}

fn evolve_options(cfg: &ScenarioConfig) -> EvolveOptions {
    EvolveOptions { method: cfg.numerics.method(), tol: cfg.numerics.ode_tol, ..Default::default() }
}

pub fn entropy_production(cfg: &ScenarioConfig) -> Out {
    let jobs = entropy_jobs(cfg, Grid::List(vec![0.0, 1.0]))?;
    let quad = cfg.numerics.quadrature();
    let span = cfg.entropy.gamma0_t_final;
    let grid = sample_times(span, Some(span / cfg.numerics.samples as f64));
    let results = jobs
        .par_iter()
        .map(|&(c, [t0, t], u)| {
            let s = qubit_setup(cfg, c, t0, t, u)?;
            let times: Vec<f64> = grid.iter().map(|x| x / s.gamma0).collect();
            let ctx = lib("entropy-production");
            let traj = evolve_at(&s.gen, &s.rho0, &times, &evolve_options(cfg)).map_err(&ctx)?;
            let mut rows = Vec::with_capacity(times.len());
            let mut worst = Worst::new();
            for (g, rho) in grid.iter().zip(&traj.states) {
                let sigma = sigma_moving(&s.sys, &s.dec, &s.gen.bath, rho, &quad).map_err(&ctx)?;
                let inv = invariants(rho);
                worst.add(inv);
                rows.push(vec![
                    f(*g),
                    f(sigma / s.gamma0),
                    c.name().to_string(),
                    f(u),
                    f(t0),
                    f(t),
                    f(inv.0),
                    f(inv.1),
                ]);
            }
            Ok((rows, worst))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut d = Dataset::new(&["gamma0_t", "sigma_over_gamma0", "coupling", "u", "T0", "T", "trace_error", "min_eig"]);
    d.meta("omega", f(cfg.entropy.omega));
    let mut total = Worst::new();
    for (rows, w) in results {
        d.rows.extend(rows);
        total.add((w.trace_error, w.min_eig));
    }
    let mut s = Summary::default();
    total.record(&mut s);
    Ok((d, s))
}

pub fn total_entropy(cfg: &ScenarioConfig) -> Out {
    let jobs = entropy_jobs(cfg, Grid::Range { start: 0.0, stop: 2.0, count: 21, log: false })?;
    let quad = cfg.numerics.quadrature();
    let rows = jobs
        .par_iter()
        .map(|&(c, [t0, t], u)| {
            let s = qubit_setup(cfg, c, t0, t, u)?;
            let bal = total_entropy_production(&s.sys, &s.gen, s.rho0.matrix(), &quad, cfg.numerics.stationary_tol)
                .map_err(lib("total-entropy"))?;
            Ok(vec![f(u), c.name().to_string(), f(bal.delta_s_tot), f(bal.delta_s_tot_alt), f(t0), f(t)])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut d = Dataset::new(&["u", "coupling", "delta_S_tot", "delta_S_tot_alt", "T0", "T"]);
    d.meta("omega", f(cfg.entropy.omega));
    d.rows = rows;
    Ok((d, Summary::default()))
}

/// System, decomposition and generator of the evolve/stationary scenarios.
fn generator(cfg: &ScenarioConfig, seed: u64) -> Result<(SystemSpec, TransitionDecomposition, Liouvillian), CliError> {
    let system = cfg.system.as_ref().ok_or_else(|| CliError::config("system", "missing [system] section"))?;
    let sys = system.build(seed)?;
    let b = bath(cfg, cfg.bath.single_coupling()?, cfg.bath.beta()?, cfg.bath.single_u()?)?;
    let ctx = lib("generator");
    let dec = decompose_transitions(&sys, cfg.numerics.omega_tol).map_err(&ctx)?;
    let gen = build_liouvillian(&sys, &b, &dec, cfg.numerics.lamb_shift, cfg.numerics.epsilon).map_err(&ctx)?;
    Ok((sys, dec, gen))
}

fn initial_state(
    cfg: &ScenarioConfig,
    sys: &SystemSpec,
    dec: &TransitionDecomposition,
) -> Result<DensityMatrix, CliError> {
    let ctx = lib("initial state");
    let d = sys.dim;
    let Some(init) = &cfg.initial else {
        return DensityMatrix::pure(&dec.basis.column(0).into_owned()).map_err(ctx);
    };
    match init.state {
        InitialKind::Ground => DensityMatrix::pure(&dec.basis.column(0).into_owned()).map_err(ctx),
        InitialKind::Excited => DensityMatrix::pure(&dec.basis.column(d - 1).into_owned()).map_err(ctx),
        InitialKind::Mixed => Ok(DensityMatrix::maximally_mixed(d)),
        InitialKind::Gibbs => {
            let beta = match (init.beta, init.temperature) {
                (Some(b), None) => b,
                (None, Some(t)) if t > 0.0 => 1.0 / t,
                (None, None) => cfg.bath.beta()?,
                _ => return Err(CliError::config("initial", "give one positive beta or temperature")),
            };
            gibbs_state(sys, beta).map_err(ctx)
        }
        InitialKind::Vector => {
            let v = init.vector.as_ref().ok_or_else(|| CliError::config("initial.vector", "missing state vector"))?;
            if v.len() != d {
                return Err(CliError::config("initial.vector", &format!("expected {d} components, got {}", v.len())));
            }
            DensityMatrix::pure(&CVec::from_iterator(d, v.iter().map(|z| c(z[0], z[1])))).map_err(ctx)
        }
    }
}

fn populations_in_eigenbasis(rho: &CMat, basis: &CMat) -> (Vec<f64>, f64) {
    let r = basis.adjoint() * rho * basis;
    let d = r.nrows();
    let mut off = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                off = off.max(r[(i, j)].norm());
            }
        }
    }
    ((0..d).map(|i| r[(i, i)].re).collect(), off)
}

fn join(v: &[f64]) -> String {
    v.iter().map(|&x| f(x)).collect::<Vec<_>>().join(",")
}

pub fn evolve_scenario(cfg: &ScenarioConfig, seed: u64) -> Out {
    let (sys, dec, gen) = generator(cfg, seed)?;
    let rho0 = initial_state(cfg, &sys, &dec)?;
    let opts =
        EvolveOptions { sample_every: Some(cfg.numerics.t_final / cfg.numerics.samples as f64), ..evolve_options(cfg) };
    let ctx = lib("evolve");
    let traj: Trajectory = evolve(&gen, &rho0, cfg.numerics.t_final, &opts).map_err(&ctx)?;
    let records = thermo_records(&gen, &dec, &traj, &cfg.numerics.quadrature()).map_err(&ctx)?;
    let mut d = Dataset::new(&["tau", "E", "q", "S_vN", "sigma", "trace_error", "min_eig"]);
    let mut worst = Worst::new();
    for (r, rho) in records.iter().zip(&traj.states) {
        let inv = invariants(rho);
        worst.add(inv);
        d.rows.push(vec![f(r.tau), f(r.energy), f(r.heat_current), f(r.entropy), f(r.sigma), f(inv.0), f(inv.1)]);
    }
    let mut s = Summary::default();
    s.set("dim", sys.dim);
    s.set("steps", traj.steps);
    s.set("rejected_steps", traj.rejected);
    worst.record(&mut s);
    let (p, _) = populations_in_eigenbasis(traj.last(), &dec.basis);
    s.set("final_populations", join(&p));
    Ok((d, s))
}

pub fn stationary(cfg: &ScenarioConfig, seed: u64) -> Out {
    let (sys, dec, gen) = generator(cfg, seed)?;
    let ctx = lib("stationary");
    let rho = stationary_state(&gen, cfg.numerics.stationary_tol).map_err(&ctx)?;
    let (p, coherence) = populations_in_eigenbasis(rho.matrix(), &dec.basis);
    let mut d = Dataset::new(&["level", "energy", "population"]);
    for (k, (e, x)) in dec.energies.iter().zip(&p).enumerate() {
        d.rows.push(vec![k.to_string(), f(*e), f(*x)]);
    }
    let mut s = Summary::default();
    s.set("dim", sys.dim);
    s.set("populations", join(&p));
    s.set("coherence_norm", f(coherence));
    let q = heat_current(&gen, rho.matrix(), &sys).map_err(&ctx)?;
    s.set("heat_current_residual", f(q.abs()));
    let (te, me) = invariants(rho.matrix());
    s.set("trace_error", f(te));
    s.set("min_eigenvalue", f(me));
    let report = crate::dynamics::check_detailed_balance(rho.matrix(), &dec, &gen.bath, 1e-8).map_err(&ctx)?;
    s.set("detailed_balance", report.holds);
    s.set("detailed_balance_max_violation", f(report.max_violation));
    for (k, pb) in report.pairs.iter().enumerate() {
        s.set(
            &format!("pair.{k}"),
            format!("{},{},{},{},{}", pb.lower, pb.upper, f(pb.omega), f(pb.ratio), f(pb.expected)),
        );
    }
    Ok((d, s))
}

pub fn kms_check(cfg: &ScenarioConfig) -> Out {
    let k = &cfg.kms;
    let betas = k.beta.values("kms.beta")?;
    let us = k.u.values("kms.u")?;
    let ts = k.t.values("kms.t")?;
    if betas[0] <= 0.0 {
        return Err(CliError::config("kms.beta", "values must be positive"));
    }
    let quad = cfg.numerics.quadrature();
    let mut jobs = Vec::new();
    for &b in &betas {
        for &u in &us {
            for &t in &ts {
                jobs.push((b, u, t));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(b, u, t)| {
            let ctx = lib("kms-check");
            let spec = ImageSumSpec::new(b, k.nmax, u).map_err(|e| CliError::config("kms", &e.to_string()))?;
            let kms = kms_residual(&spec, t, 0.0).map_err(&ctx)?;
            let boosted = kms_residual_boosted(&spec, t, 0.0, 0.0).map_err(&ctx)?;
            let convex = boosted_convex_check(&spec, t, &quad).map_err(&ctx)?.residual;
            let g = hadamard_thermal(&spec, c(t, 0.0), 0.0).map_err(&ctx)?.value.re;
            let closed = (g - hadamard_thermal_r0(b, t)).abs();
            Ok(vec![f(b), f(u), f(t), f(kms), f(boosted), f(convex), f(closed)])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut d = Dataset::new(&[
        "beta",
        "u",
        "t",
        "kms_residual",
        "kms_residual_boosted",
        "convex_residual",
        "closed_form_error",
    ]);
    d.meta("nmax", k.nmax);
    d.rows = rows;
    Ok((d, Summary::default()))
}
