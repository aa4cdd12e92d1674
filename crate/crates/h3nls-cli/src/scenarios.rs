//! Scenario registry and implementations.
//!
//! Each scenario consumes a [`Config`], runs its experiment, writes a JSON
//! summary (plus scenario-specific CSV/field artifacts) under the output
//! directory and reports pass/fail.  Summaries are deterministic for a given
//! config and seed; only the `runtime_seconds` field varies between runs.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use h3nls::corpus;
use h3nls::diagnostics::{
    
    dispersive_decay_check, laplacian_weight_spectral_check, local_smoothing_check,
    morawetz_identity_check, morawetz_inequality_check, refined_sobolev_check, MorawetzWeight,
};
use h3nls::euclidean::{scaling_limit_experiment, ScalingLimitOptions};
use h3nls::field::{rescaled_profile, Geometry, RadialField};
use h3nls::grid::RadialGrid;
use h3nls::profiles::{
    decoupling_audit, full_decomposition, synthetic_euclidean_sequence,
    synthetic_hyperbolic_sequence, ExtractionOptions,
};
use h3nls::propagator::{evolve, SolverConfig, Trajectory};
use h3nls::report::{ScenarioSummary, Verdict};
use h3nls::transform;
use h3nls::util::{logspace, rel_diff};

use crate::config::{Config, ConfigReader};

/// Stable scenario registry (the order is part of the CLI contract).
pub const SCENARIOS: &[&str] = &[
    "simulate",
    "transform-selftest",
    "dispersive-test",
    "morawetz-test",
    "sobolev-test",
    "euclid-compare",
    "profile-extract",
    "sweep",
];

pub struct RunContext {
    pub out_dir: PathBuf,
    pub seed_override: Option<u64>,
    pub verbose: bool,
}

impl RunContext {
    fn log(&self, message: impl AsRef<str>) {
        if self.verbose {
            eprintln!("[h3nls] {}", message.as_ref());
        }
    }
}

pub fn run_scenario(name: &str, config: &Config, ctx: &RunContext) -> Result<bool> {
    std::fs::create_dir_all(&ctx.out_dir)
        .with_context(|| format!("cannot create output dir {}", ctx.out_dir.display()))?;
    let started = Instant::now();
    let mut reader = config.reader();
    let declared = reader.string("run", "scenario", name);
    if declared != name {
        bail!("config declares scenario `{declared}`, but `{name}` was requested");
    }
    let seed = ctx.seed_override.unwrap_or(reader.u64("run", "seed", 7)?);
    // the config may carry its own output hint; the CLI flag wins
    let _ = reader.string("run", "out", "");
    let pass = match name {
        "simulate" => simulate(&mut reader, seed, ctx, started)?,
        "transform-selftest" => transform_selftest(&mut reader, seed, ctx, started)?,
        "dispersive-test" => dispersive_test(&mut reader, seed, ctx, started)?,
        "morawetz-test" => morawetz_test(&mut reader, seed, ctx, started)?,
        "sobolev-test" => sobolev_test(&mut reader, seed, ctx, started)?,
        "euclid-compare" => euclid_compare(&mut reader, seed, ctx, started)?,
        "profile-extract" => profile_extract(&mut reader, seed, ctx, started)?,
        "sweep" => sweep(&mut reader, seed, ctx, started)?,
        other => bail!("unknown scenario `{other}`"),
    };
    reader.finish()?;
    Ok(pass)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn write_summary<T: Serialize>(
    ctx: &RunContext,
    scenario: &str,
    seed: u64,
    pass: bool,
    payload: T,
    started: Instant,
) -> Result<()> {
    let summary = ScenarioSummary::new(scenario, seed, pass, payload)
        .with_runtime(started.elapsed().as_secs_f64());
    write_json(&ctx.out_dir.join(format!("{scenario}-summary.json")), &summary)
}

// ---------------------------------------------------------------------------
// shared config sections
// ---------------------------------------------------------------------------

fn read_grid(reader: &mut ConfigReader, default_r_max: f64, default_n: usize) -> Result<(RadialGrid, Geometry)> {
    let geometry = match reader.string("grid", "geometry", "hyperbolic").as_str() {
        "hyperbolic" => Geometry::Hyperbolic,
        "euclidean" => Geometry::Euclidean,
        other => bail!("[grid] geometry: expected hyperbolic|euclidean, got `{other}`"),
    };
    let r_max = reader.f64("grid", "r_max", default_r_max)?;
    let n = reader.usize("grid", "n", default_n)?;
    let grid = RadialGrid::new(r_max, n).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok((grid, geometry))
}

fn read_data(reader: &mut ConfigReader, grid: RadialGrid, geometry: Geometry) -> Result<RadialField> {
    let family = reader.string("data", "family", "gaussian");
    let amplitude = reader.f64("data", "amplitude", 1.0)?;
    let center = reader.f64("data", "center", 0.0)?;
    let sigma = reader.f64("data", "sigma", 1.5)?;
    let energy = reader.f64("data", "energy", 1.0)?;
    let field = match family.as_str() {
        "gaussian" => corpus::gaussian_bump(grid, geometry, amplitude, center, sigma),
        "mollifier" => corpus::mollifier_bump(grid, geometry, amplitude, sigma),
        other => bail!("[data] family: expected gaussian|mollifier, got `{other}`"),
    };
    Ok(if energy > 0.0 { corpus::normalize_energy(&field, energy) } else { field })
}

fn read_solver(reader: &mut ConfigReader, default_dt: f64, default_t_end: f64) -> Result<SolverConfig> {
    let dt = reader.f64("time", "dt", default_dt)?;
    let t_end = reader.f64("time", "t_end", default_t_end)?;
    let record_every = reader.usize("time", "record_every", 10)?;
    let nonlinear = reader.bool("solver", "nonlinearity", true)?;
    let boundary_tolerance = reader.f64("solver", "boundary_tolerance", 1e-8)?;
    let mut cfg = SolverConfig::new(dt, t_end)
        .with_record_every(record_every)
        .with_boundary_tolerance(boundary_tolerance);
    if !nonlinear {
        cfg = cfg.linear();
    }
    cfg.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(cfg)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn write_diagnostics_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "t,mass,energy,l6,z_increment,morawetz_action,boundary_mass")?;
    for d in &traj.diagnostics {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            d.t, d.mass, d.energy, d.l6, d.z_increment, d.morawetz_action, d.boundary_mass
        )?;
    }
    Ok(())
}

fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "t,r,re_u,im_u")?;
    for (t, field) in &traj.snapshots {
        let us = field.u_values();
        for j in 0..field.grid().n() {
            writeln!(out, "{},{},{},{}", t, field.grid().node(j), us[j].re, us[j].im)?;
        }
    }
    Ok(())
}

fn simulate(reader: &mut ConfigReader, seed: u64, ctx: &RunContext, started: Instant) -> Result<bool> {
    let (grid, geometry) = read_grid(reader, 30.0, 4096)?;
    let datum = read_data(reader, grid, geometry)?;
    let cfg = read_solver(reader, 1e-3, 1.0)?;
    reader.ensure_consumed()?;
    ctx.log(format!("simulate: {} steps on n = {}", cfg.steps(), grid.n()));

    let traj = evolve(&datum, &cfg).map_err(|e| anyhow::anyhow!("{e}"))?;
    write_trajectory_csv(&ctx.out_dir.join("trajectory.csv"), &traj)?;
    write_diagnostics_csv(&ctx.out_dir.join("diagnostics.csv"), &traj)?;

    let first = &traj.diagnostics[0];
    let last = traj.diagnostics.last().unwrap();
    let mass_drift = rel_diff(first.mass, last.mass);
    let energy_drift = rel_diff(first.energy, last.energy);
    let final_state = traj.final_state();
    let pass = mass_drift <= 1e-9 && final_state.is_finite();
    let payload = json!({
        "t_end": last.t,
        "mass_drift": mass_drift,
        "energy_drift": energy_drift,
        "final_l2": final_state.lp_norm(2.0),
        "final_h1": final_state.h1_norm(),
        "final_l6": last.l6,
        "z_norm_pow10": traj.diagnostics.iter().map(|d| d.z_increment).sum::<f64>(),
        "boundary_mass": last.boundary_mass,
    });
    write_summary(ctx, "simulate", seed, pass, payload, started)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// transform-selftest
// ---------------------------------------------------------------------------

fn transform_selftest(reader: &mut ConfigReader, seed: u64, ctx: &RunContext, started: Instant) -> Result<bool> {
    let (grid, geometry) = read_grid(reader, 30.0, 4096)?;
    let corpus_size = reader.usize("selftest", "corpus", 20)?;
    reader.ensure_consumed()?;
    let fields = corpus::standard_corpus(grid, geometry, corpus_size, seed);
    let mut verdicts: Vec<Verdict> = Vec::new();

    // Plancherel + round trip across the corpus
    let plancherel = h3nls::par::try_map_collect(&fields, |f| {
        let (lhs, rhs) = transform::plancherel_check(f)?;
        let back = transform::helgason_inverse(&transform::helgason_forward(f)?);
        let rt = back.sub(f)?.lp_norm(2.0) / f.lp_norm(2.0).max(f64::MIN_POSITIVE);
        Ok((rel_diff(lhs, rhs), rt))
    })
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let worst_plancherel = plancherel.iter().map(|x| x.0).fold(0.0f64, f64::max);
    let worst_roundtrip = plancherel.iter().map(|x| x.1).fold(0.0f64, f64::max);
    verdicts.push(Verdict::new("plancherel_relative", worst_plancherel, 1e-8, 0.0, worst_plancherel <= 1e-8));
    verdicts.push(Verdict::new("round_trip_relative", worst_roundtrip, 1e-8, 0.0, worst_roundtrip <= 1e-8));

    // unitarity of the flow
    let probe = &fields[0];
    let mass0 = probe.lp_norm(2.0);
    let worst_unitarity = [0.5, 37.0, 1000.0]
        .iter()
        .map(|&t| rel_diff(transform::schrodinger_flow(t, probe).lp_norm(2.0), mass0))
        .fold(0.0, f64::max);
    verdicts.push(Verdict::new("flow_unitarity", worst_unitarity, 1e-12, 0.0, worst_unitarity <= 1e-12));

    // heat semigroup
    let split = transform::heat_flow(0.2, &transform::heat_flow(0.3, probe));
    let joint = transform::heat_flow(0.5, probe);
    let semi = split.sub(&joint).map_err(|e| anyhow::anyhow!("{e}"))?.lp_norm(2.0) / mass0;
    verdicts.push(Verdict::new("heat_semigroup", semi, 1e-12, 0.0, semi <= 1e-12));

    // symbol vs finite differences: measured convergence order (the datum
    // must be an even profile or the odd extension kinks at the origin)
    let mut errors = Vec::new();
    for &nn in &[512usize, 1024, 2048] {
        let g = RadialGrid::new(grid.r_max(), nn).map_err(|e| anyhow::anyhow!("{e}"))?;
        let f = corpus::gaussian_bump(g, geometry, 1.0, 0.0, 1.3);
        let lap = transform::apply_symbol(&f, |omega| Complex64::new(-omega, 0.0));
        let dr = g.dr();
        let mut worst = 0.0f64;
        for j in 1..nn - 1 {
            let fd = (f.h()[j + 1] - f.h()[j] * 2.0 + f.h()[j - 1]) / (dr * dr)
                - f.h()[j] * geometry.rho_sq();
            worst = worst.max((lap.h()[j] - fd).norm());
        }
        errors.push(worst);
    }
    let order = (errors[0] / errors[1]).log2().min((errors[1] / errors[2]).log2());
    verdicts.push(Verdict::new("symbol_fd_order", order, 1.9, 0.0, order >= 1.9));

    // P_N low-frequency smallness
    let mut pn_ok = true;
    let mut worst_ratio = 0.0f64;
    for &n_scale in &[1.0f64, 0.5, 0.25] {
        let projected = transform::littlewood_paley(n_scale, probe);
        let ratio = projected.lp_norm(2.0) * n_scale.powi(2) / (2.0 * mass0);
        worst_ratio = worst_ratio.max(ratio);
        pn_ok &= ratio <= 1.0 + 1e-12;
    }
    verdicts.push(Verdict::new("pn_low_frequency", worst_ratio, 1.0, 2.0, pn_ok));

    // reconstruction constant
    let rebuilt = transform::pn_reconstruction(probe, &transform::default_pn_grid());
    let rec_err = rebuilt.sub(probe).map_err(|e| anyhow::anyhow!("{e}"))?.lp_norm(2.0) / mass0;
    verdicts.push(Verdict::new(
        "pn_reconstruction",
        rec_err,
        1e-4,
        transform::PN_RECONSTRUCTION_CONSTANT,
        rec_err <= 1e-4,
    ));

    // heat kernel spectral vs closed form
    let mut worst_kernel = 0.0f64;
    for &z in &[0.05, 0.25, 1.0] {
        let spectral = transform::heat_kernel_field(grid, z);
        let us = spectral.u_values();
        let peak = transform::heat_kernel_closed_form(z, grid.node(0));
        for j in 0..grid.n() {
            let r = grid.node(j);
            if r > 10.0 {
                break;
            }
            let exact = transform::heat_kernel_closed_form(z, r);
            if exact >= 1e-8 * peak {
                worst_kernel = worst_kernel.max((us[j].re - exact).abs() / exact);
            }
        }
    }
    verdicts.push(Verdict::new("heat_kernel_closed_form", worst_kernel, 1e-6, 0.0, worst_kernel <= 1e-6));

    let pass = verdicts.iter().all(|v| v.pass);
    write_json(&ctx.out_dir.join("transform-selftest-verdicts.json"), &verdicts)?;
    write_summary(ctx, "transform-selftest", seed, pass, &verdicts, started)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// dispersive-test
// ---------------------------------------------------------------------------

fn dispersive_test(reader: &mut ConfigReader, seed: u64, ctx: &RunContext, started: Instant) -> Result<bool> {
    let p = reader.f64("dispersive", "p", 1.2)?;
    let samples = reader.usize("dispersive", "samples", 25)?;
    let hyp_r_max = reader.f64("dispersive", "hyp_r_max", 1000.0)?;
    let hyp_n = reader.usize("dispersive", "hyp_n", 32768)?;
    let euc_r_max = reader.f64("dispersive", "euclid_r_max", 250.0)?;
    let euc_n = reader.usize("dispersive", "euclid_n", 16384)?;
    let slope_max = reader.f64("dispersive", "hyp_slope_max", -0.9)?;
    let euclid_slope = reader.f64("dispersive", "euclid_slope", -1.0)?;
    let euclid_tol = reader.f64("dispersive", "euclid_tolerance", 0.1)?;
    reader.ensure_consumed()?;

    let hyp_grid = RadialGrid::new(hyp_r_max, hyp_n).map_err(|e| anyhow::anyhow!("{e}"))?;
    let phi = corpus::gaussian_bump(hyp_grid, Geometry::Hyperbolic, 1.0, 0.0, 1.5);
    let times = logspace(1.0, 100.0, samples);
    let hyp_fit = dispersive_decay_check(&phi, &times, p);
    ctx.log(format!("hyperbolic decay exponent {:.4}", hyp_fit.exponent));

    // start the Euclidean window past the pre-asymptotic plateau t ≲ σ²
    let euc_grid = RadialGrid::new(euc_r_max, euc_n).map_err(|e| anyhow::anyhow!("{e}"))?;
    let psi = corpus::gaussian_bump(euc_grid, Geometry::Euclidean, 1.0, 0.0, 1.5);
    let euc_times = logspace(3.0, 50.0, samples);
    let euc_fit = dispersive_decay_check(&psi, &euc_times, p);
    ctx.log(format!("euclidean decay exponent {:.4}", euc_fit.exponent));

    // dispersive monotonicity: t·‖e^{itΔ}φ‖_{L⁶} stays bounded
    let weighted_sup = hyp_fit
        .times
        .iter()
        .zip(&hyp_fit.norms)
        .map(|(t, n)| t * n)
        .fold(0.0f64, f64::max);
    let weighted_first = hyp_fit.times[0] * hyp_fit.norms[0];

    let verdicts = vec![
        Verdict::new("hyperbolic_l6_decay", hyp_fit.exponent, slope_max, 0.0, hyp_fit.exponent <= slope_max),
        Verdict::new(
            "euclidean_l6_decay",
            euc_fit.exponent,
            euclid_slope,
            euclid_tol,
            (euc_fit.exponent - euclid_slope).abs() <= euclid_tol,
        ),
        Verdict::new(
            "t_weighted_l6_bounded",
            weighted_sup,
            3.0 * weighted_first,
            0.0,
            weighted_sup <= 3.0 * weighted_first,
        ),
    ];
    let pass = verdicts.iter().all(|v| v.pass);
    write_json(&ctx.out_dir.join("dispersive-verdicts.json"), &verdicts)?;
    let payload = json!({
        "verdicts": verdicts,
        "hyperbolic": {"times": hyp_fit.times, "norms": hyp_fit.norms},
        "euclidean": {"times": euc_fit.times, "norms": euc_fit.norms},
    });
    write_summary(ctx, "dispersive-test", seed, pass, payload, started)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// morawetz-test
// ---------------------------------------------------------------------------

fn morawetz_test(reader: &mut ConfigReader, seed: u64, ctx: &RunContext, started: Instant) -> Result<bool> {
    let (grid, _) = read_grid(reader, 30.0, 4096)?;
    let weight_scale = reader.f64("morawetz", "weight_n", 1.0)?;
    let dt = reader.f64("morawetz", "dt", 1e-3)?;
    let identity_steps = reader.usize("morawetz", "identity_steps", 40)?;
    let runs = reader.usize("morawetz", "runs", 5)?;
    let frozen_constant = reader.f64("morawetz", "constant_max", 2e-3)?;
    reader.ensure_consumed()?;
    let w = MorawetzWeight::new(weight_scale);
    let mut verdicts: Vec<Verdict> = Vec::new();

    // (a) weight identities
    let mut grad_ok = true;
    let mut lap_worst = 0.0f64;
    let mut hess_ok = true;
    for j in 0..grid.n() {
        let r = grid.node(j);
        grad_ok &= w.grad_a_sq(r) <= 1.0 + 1e-12;
        lap_worst = lap_worst.max(rel_diff(
            w.a_second(r) + 2.0 * w.a_prime(r) / r.tanh(),
            w.laplacian_a(r),
        ));
        let bound = weight_scale.powi(-2) * r.cosh()
            * (r.cosh() * r.cosh() - 1.0 + weight_scale.powi(-2)).powf(-1.5);
        hess_ok &= w.a_second(r) >= bound * (1.0 - 1e-10);
    }
    let spectral_mismatch = laplacian_weight_spectral_check(&w);
    verdicts.push(Verdict::new("grad_a_le_one", 0.0, 1.0, 0.0, grad_ok));
    verdicts.push(Verdict::new("laplacian_identity", lap_worst, 1e-6, 0.0, lap_worst <= 1e-6));
    verdicts.push(Verdict::new("laplacian_spectral", spectral_mismatch, 1e-6, 0.0, spectral_mismatch <= 1e-6));
    verdicts.push(Verdict::new("hessian_positivity", 0.0, 0.0, 0.0, hess_ok));
    // the |Δ(Δa)| ≲ N³ bound has no canonical constant; record, don't assert
    let bilap_ratio = w.bilaplacian_ratio(&grid);

    // (b) derivative identity on a linear flow, with dt-refinement
    let datum = corpus::normalize_energy(&corpus::gaussian_bump(grid, Geometry::Hyperbolic, 1.0, 0.0, 1.2), 1.0);
    let mismatch_at = |dt_run: f64| -> Result<f64> {
        let cfg = SolverConfig::new(dt_run, identity_steps as f64 * dt_run).linear();
        let traj = evolve(&datum, &cfg).map_err(|e| anyhow::anyhow!("{e}"))?;
        Ok(morawetz_identity_check(&traj, &w).max_rel_mismatch)
    };
    let coarse = mismatch_at(dt)?;
    let fine = mismatch_at(dt / 2.0)?;
    verdicts.push(Verdict::new("identity_mismatch", coarse, 0.03, 0.0, coarse <= 0.03));
    verdicts.push(Verdict::new(
        "identity_refinement",
        fine,
        coarse / 1.9,
        0.0,
        fine <= coarse / 1.9,
    ));

    // (c) interaction inequality across nonlinear unit-energy runs
    let amplitudes: Vec<f64> = (0..runs).map(|i| 0.8 + 0.1 * i as f64).collect();
    let ratios = h3nls::par::try_map_collect(&amplitudes, |&sigma| {
        let raw = corpus::gaussian_bump(grid, Geometry::Hyperbolic, 1.0, 0.0, sigma);
        let data = corpus::normalize_energy(&raw, 1.0);
        let cfg = SolverConfig::new(2e-3, 1.0).with_record_every(25);
        let traj = evolve(&data, &cfg)?;
        let (lhs, rhs, ratio) = morawetz_inequality_check(&traj);
        let _ = (lhs, rhs);
        Ok(ratio)
    })
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let worst_ratio = ratios.iter().fold(0.0f64, |a, &b| a.max(b));
    verdicts.push(Verdict::new(
        "interaction_inequality",
        worst_ratio,
        frozen_constant,
        frozen_constant,
        worst_ratio <= frozen_constant,
    ));

    let pass = verdicts.iter().all(|v| v.pass);
    write_json(&ctx.out_dir.join("morawetz-verdicts.json"), &verdicts)?;
    let payload = json!({
        "verdicts": verdicts,
        "bilaplacian_over_n3": bilap_ratio,
        "inequality_ratios": ratios,
    });
    write_summary(ctx, "morawetz-test", seed, pass, payload, started)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// sobolev-test
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct FittedConstants {
    pub refined_sobolev: f64,
    pub local_smoothing: f64,
}

fn sobolev_test(reader: &mut ConfigReader, seed: u64, ctx: &RunContext, started: Instant) -> Result<bool> {
    let (grid, _) = read_grid(reader, 30.0, 4096)?;
    let corpus_size = reader.usize("sobolev", "corpus", 20)?;
    let constant_max = reader.f64("sobolev", "constant_max", 10.0)?;
    let baseline_path = reader.string("sobolev", "baseline", "");
    reader.ensure_consumed()?;
    let mut verdicts: Vec<Verdict> = Vec::new();

    // corpus: standard bumps plus rescaled transplants for scale coverage
    let mut fields = corpus::standard_corpus(grid, Geometry::Hyperbolic, corpus_size - 3, seed);
    let egrid = RadialGrid::new(40.0, 2048).map_err(|e| anyhow::anyhow!("{e}"))?;
    let phi = corpus::gaussian_bump(egrid, Geometry::Euclidean, 1.0, 0.0, 1.0);
    for n_scale in [4.0, 16.0, 64.0] {
        fields.push(rescaled_profile(&phi, n_scale, grid).map_err(|e| anyhow::anyhow!("{e}"))?);
    }

    let n_grid = logspace(1.0, 256.0, 33);
    let ratios = h3nls::par::map_collect(&fields, |f| {
        let (lhs, rhs_factor, _) = refined_sobolev_check(f, &n_grid);
        if rhs_factor == 0.0 {
            0.0
        } else {
            lhs / rhs_factor
        }
    });
    let refined_constant = ratios.iter().fold(0.0f64, |a, &b| a.max(b));
    verdicts.push(Verdict::new(
        "refined_sobolev",
        refined_constant,
        constant_max,
        refined_constant,
        refined_constant <= constant_max,
    ));

    // local smoothing scan over K ≥ N with an H¹-normalized broadband datum
    let mut psi = RadialField::zero(grid, Geometry::Hyperbolic);
    for n_scale in [4.0, 8.0, 16.0, 32.0] {
        let part = rescaled_profile(&phi, n_scale, grid).map_err(|e| anyhow::anyhow!("{e}"))?;
        psi = psi.add(&part).map_err(|e| anyhow::anyhow!("{e}"))?;
    }
    let psi = psi.scale(Complex64::new(psi.h1_norm().recip(), 0.0));
    let pairs: Vec<(f64, f64)> = [1.0, 2.0, 4.0]
        .iter()
        .flat_map(|&n| [4.0, 8.0, 16.0, 32.0].iter().filter(move |&&k| k >= n).map(move |&k| (n, k)))
        .collect();
    let values = h3nls::par::map_collect(&pairs, |&(n, k)| local_smoothing_check(&psi, n, k, 17));
    let smoothing_constant = pairs
        .iter()
        .zip(&values)
        .map(|(&(n, k), &v)| v * (n * k).sqrt())
        .fold(0.0f64, f64::max);
    verdicts.push(Verdict::new(
        "local_smoothing",
        smoothing_constant,
        constant_max,
        smoothing_constant,
        smoothing_constant <= constant_max,
    ));

    // K-doubling ratio at N = 1: (NK)^{−1/2} scaling within a factor 2
    let ratio_ok = {
        let at = |k: f64| {
            pairs
                .iter()
                .zip(&values)
                .find(|(&(n, kk), _)| n == 1.0 && kk == k)
                .map(|(_, &v)| v)
                .unwrap_or(0.0)
        };
        let mut ok = true;
        let mut worst: f64 = 1.0;
        for &k in &[4.0, 8.0, 16.0] {
            let (a, b) = (at(k), at(2.0 * k));
            if a > 0.0 && b > 0.0 {
                let observed = b / a;
                let expected = 0.5f64.sqrt();
                worst = worst.max((observed / expected).max(expected / observed));
                ok &= observed <= 2.0 * expected && observed >= expected / 2.0;
            }
        }
        verdicts.push(Verdict::new("smoothing_k_scaling", worst, 2.0, 0.0, ok));
        ok
    };
    let _ = ratio_ok;

    let constants = FittedConstants { refined_sobolev: refined_constant, local_smoothing: smoothing_constant };
    write_json(&ctx.out_dir.join("sobolev-constants.json"), &constants)?;

    if !baseline_path.is_empty() {
        let text = std::fs::read_to_string(&baseline_path)
            .with_context(|| format!("cannot read baseline {baseline_path}"))?;
        let baseline: FittedConstants = serde_json::from_str(&text)?;
        let sob_ok = refined_constant <= 2.0 * baseline.refined_sobolev;
        let smo_ok = smoothing_constant <= 2.0 * baseline.local_smoothing;
        verdicts.push(Verdict::new(
            "refined_sobolev_regression",
            refined_constant,
            2.0 * baseline.refined_sobolev,
            baseline.refined_sobolev,
            sob_ok,
        ));
        verdicts.push(Verdict::new(
            "local_smoothing_regression",
            smoothing_constant,
            2.0 * baseline.local_smoothing,
            baseline.local_smoothing,
            smo_ok,
        ));
    }

    let pass = verdicts.iter().all(|v| v.pass);
    write_json(&ctx.out_dir.join("sobolev-verdicts.json"), &verdicts)?;
    write_summary(ctx, "sobolev-test", seed, pass, &verdicts, started)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// euclid-compare
// ---------------------------------------------------------------------------

fn euclid_compare(reader: &mut ConfigReader, seed: u64, ctx: &RunContext, started: Instant) -> Result<bool> {
    let t0 = reader.f64("euclid", "t0", 1.0)?;
    let r_cut = reader.f64("euclid", "r_cut", 14.0)?;
    let n_list = reader.f64_list("euclid", "n_list", &[4.0, 8.0, 16.0, 32.0])?;
    let dt_euclid = reader.f64("euclid", "dt", 1e-3)?;
    let eps_linear = reader.f64("euclid", "epsilon_linear", 1e-2)?;
    let eps_nonlinear = reader.f64("euclid", "epsilon_nonlinear", 5e-2)?;
    let hyp_grid = RadialGrid::new(
        reader.f64("euclid", "hyp_r_max", 6.0)?,
        reader.usize("euclid", "hyp_n", 4096)?,
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let egrid = RadialGrid::new(
        reader.f64("euclid", "euclid_r_max", 48.0)?,
        reader.usize("euclid", "euclid_n", 4096)?,
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;

    let sigma = reader.f64("euclid", "sigma", 2.0)?;
    let energy = reader.f64("euclid", "energy", 0.9)?;
    reader.ensure_consumed()?;
    let phi = corpus::normalize_energy(
        &corpus::gaussian_bump(egrid, Geometry::Euclidean, 1.0, 0.0, sigma),
        energy,
    );

    let mut verdicts: Vec<Verdict> = Vec::new();
    let mut csv = String::from("mode,n,sup_h1_dist,strichartz_dist\n");
    for (nonlinear, eps) in [(false, eps_linear), (true, eps_nonlinear)] {
        let mode = if nonlinear { "nonlinear" } else { "linear" };
        ctx.log(format!("scaling limit, {mode} mode"));
        let opts = ScalingLimitOptions { t0, r_cut, nonlinear, dt_euclid, record_every: 50 };
        let rows = scaling_limit_experiment(&phi, &n_list, hyp_grid, &opts)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        for row in &rows {
            csv.push_str(&format!("{mode},{},{},{}\n", row.n_scale, row.sup_h1_dist, row.s1_proxy_dist));
        }
        let monotone = rows.windows(2).all(|w| w[1].sup_h1_dist <= w[0].sup_h1_dist * 1.000001);
        let final_dist = rows.last().map(|r| r.sup_h1_dist).unwrap_or(f64::INFINITY);
        verdicts.push(Verdict::new(format!("{mode}_trend_monotone"), 0.0, 0.0, 0.0, monotone));
        verdicts.push(Verdict::new(format!("{mode}_final_distance"), final_dist, eps, 0.0, final_dist <= eps));
    }
    std::fs::write(ctx.out_dir.join("euclid-compare.csv"), csv)?;

    let pass = verdicts.iter().all(|v| v.pass);
    write_json(&ctx.out_dir.join("euclid-verdicts.json"), &verdicts)?;
    write_summary(ctx, "euclid-compare", seed, pass, &verdicts, started)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// profile-extract
// ---------------------------------------------------------------------------

fn profile_extract(reader: &mut ConfigReader, seed: u64, ctx: &RunContext, started: Instant) -> Result<bool> {
    let source = reader.string("profiles", "source", "synthetic");
    let delta_threshold = reader.f64("profiles", "delta_threshold", 0.08)?;
    let j_max = reader.usize("profiles", "j_max", 4)?;
    let decouple_tol = reader.f64("profiles", "decoupling_tolerance", 0.05)?;
    let grid = RadialGrid::new(
        reader.f64("profiles", "r_max", 12.0)?,
        reader.usize("profiles", "n", 8192)?,
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let manifest = reader.string("profiles", "manifest", "");
    reader.ensure_consumed()?;

    let sequence: Vec<RadialField> = match source.as_str() {
        "synthetic" => {
            let egrid = RadialGrid::new(40.0, 2048).map_err(|e| anyhow::anyhow!("{e}"))?;
            let phi = corpus::gaussian_bump(egrid, Geometry::Euclidean, 1.0, 0.0, 1.0);
            let psi = corpus::gaussian_bump(grid, Geometry::Hyperbolic, 0.8, 0.0, 0.9);
            let scales: Vec<f64> = (1..=8).map(|k| 2f64.powi(k)).collect();
            let euclid_part = synthetic_euclidean_sequence(&phi, &scales, grid)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let hyp_part = synthetic_hyperbolic_sequence(&psi, &vec![0.0; 8]);
            euclid_part
                .iter()
                .zip(&hyp_part)
                .map(|(a, b)| a.add(b).map_err(|e| anyhow::anyhow!("{e}")))
                .collect::<Result<_>>()?
        }
        "manifest" => {
            if manifest.is_empty() {
                bail!("[profiles] manifest: path required when source = manifest");
            }
            let text = std::fs::read_to_string(&manifest)
                .with_context(|| format!("cannot read manifest {manifest}"))?;
            let base = Path::new(&manifest).parent().unwrap_or(Path::new("."));
            let mut seq = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let path = base.join(line);
                seq.push(RadialField::read_binary(&path).map_err(|e| anyhow::anyhow!("{e}"))?);
            }
            if seq.is_empty() {
                bail!("manifest lists no snapshots");
            }
            seq
        }
        other => bail!("[profiles] source: expected synthetic|manifest, got `{other}`"),
    };

    let opts = ExtractionOptions::new(RadialGrid::new(40.0, 2048).map_err(|e| anyhow::anyhow!("{e}"))?);
    let dec = full_decomposition(&sequence, delta_threshold, j_max, &opts)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let audit = decoupling_audit(&dec, &sequence, decouple_tol).map_err(|e| anyhow::anyhow!("{e}"))?;

    for (i, profile) in dec.profiles.iter().enumerate() {
        profile
            .profile
            .write_binary(&ctx.out_dir.join(format!("profile-{i:02}.h3f")))
            .map_err(|e| anyhow::anyhow!("{e}"))?;
    }

    let monotone = dec.delta_history.windows(2).all(|w| w[1] < w[0]);
    let pass = dec.final_delta < delta_threshold && audit.pass && monotone;
    let payload = json!({
        "profiles": dec.profiles.iter().map(|p| json!({
            "kind": p.frame.kind,
            "scales": p.frame.scales,
            "times": p.frame.times,
            "h1_norm": p.profile.h1_norm(),
        })).collect::<Vec<_>>(),
        "delta_history": dec.delta_history,
        "final_delta": dec.final_delta,
        "gradient_residuals": audit.gradient_residuals,
        "energy_residuals": audit.energy_residuals,
        "seed": seed,
    });
    write_json(&ctx.out_dir.join("profile-decomposition.json"), &payload)?;
    write_summary(ctx, "profile-extract", seed, pass, payload, started)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn sweep(reader: &mut ConfigReader, seed: u64, ctx: &RunContext, started: Instant) -> Result<bool> {
    let (grid, geometry) = read_grid(reader, 30.0, 2048)?;
    let amplitudes = reader.f64_list("sweep", "amplitudes", &[0.6, 0.8, 1.0, 1.2])?;
    let cfg = read_solver(reader, 2e-3, 0.5)?;
    reader.ensure_consumed()?;
    ctx.log(format!("sweep over {} amplitudes", amplitudes.len()));

    let outcomes = h3nls::par::try_map_collect(&amplitudes, |&amp| {
        let datum = corpus::gaussian_bump(grid, geometry, amp, 0.0, 1.5);
        let traj = evolve(&datum, &cfg)?;
        let first = &traj.diagnostics[0];
        let last = traj.diagnostics.last().unwrap();
        Ok((amp, rel_diff(first.mass, last.mass), rel_diff(first.energy, last.energy), last.l6))
    })
    .map_err(|e| anyhow::anyhow!("{e}"))?;

    let mut index = Vec::new();
    for (i, (amp, mass_drift, energy_drift, l6)) in outcomes.iter().enumerate() {
        let entry = json!({
            "run": i,
            "amplitude": amp,
            "mass_drift": mass_drift,
            "energy_drift": energy_drift,
            "final_l6": l6,
        });
        write_json(&ctx.out_dir.join(format!("sweep-run-{i:02}.json")), &entry)?;
        index.push(entry);
    }
    let pass = outcomes.iter().all(|(_, m, _, _)| *m <= 1e-9);
    write_json(&ctx.out_dir.join("sweep-index.json"), &index)?;
    write_summary(ctx, "sweep", seed, pass, index, started)?;
    Ok(pass)
}
