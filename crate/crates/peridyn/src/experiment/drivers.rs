//! The experiment drivers behind the CLI subcommands and the runnable
//! examples.
//!
//! Every driver validates its spec, guards the timestep against the
//! stability bound, runs the required solvers, and returns CSV-ready tables
//! whose provenance header echoes the full spec.

use std::sync::Arc;

use crate::analysis::{
    field_difference, loglog_slope, norm_l2, norm_sup, rate_from_eps_pair, rate_from_triplet,
    restrict_to_coarse,
};
use crate::assembly::{assemble, cfl_local_dt, stability_report, stable_dt};
use crate::error::{Error, Result};
use crate::force::{consistency_force_gap, GapVariant, NonlocalForce, QuadratureRule};
use crate::grid::{Grid1D, NodalField};
use crate::integrator::{run, Evolution, InitialData, ModelVariant, Trajectory};
use crate::material::MaterialModel;

use super::config::{ExperimentKind, ExperimentSpec};
use super::table::{fmt, fmt_full, ResultTable};

/// Tables plus any full-precision field snapshots an experiment produced.
#[derive(Debug)]
pub struct ExperimentOutput {
    pub tables: Vec<ResultTable>,
    pub fields: Vec<(String, NodalField)>,
}

/// Dispatches a spec to its driver.
pub fn execute(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    match spec.kind {
        ExperimentKind::HConv => run_h_convergence(spec),
        ExperimentKind::EpsConv => run_eps_convergence(spec),
        ExperimentKind::Compare => run_comparison(spec),
        ExperimentKind::Gap => run_npd_lpd_gap(spec),
        ExperimentKind::Consistency => run_consistency(spec),
        ExperimentKind::Stability => run_stability(spec),
        ExperimentKind::SingleRun => run_single(spec),
    }
}

pub fn material(spec: &ExperimentSpec) -> Result<MaterialModel> {
    MaterialModel::exponential(spec.alpha, spec.amplitude, spec.decay, spec.rho)
}

/// `x / y` as an exact positive integer (to 1e-9 relative), or an error.
fn integral_ratio(x: f64, y: f64, what: &str) -> Result<usize> {
    let q = x / y;
    let rounded = q.round();
    if rounded < 1.0 || (q - rounded).abs() > 1e-9 * rounded {
        return Err(Error::InvalidConfig(format!(
            "{what}: {x} / {y} = {q} is not a positive integer"
        )));
    }
    Ok(rounded as usize)
}

fn grid_for(spec: &ExperimentSpec, eps: f64, h: f64, p: usize) -> Result<Arc<Grid1D>> {
    let m = integral_ratio(eps, h, "horizon must span an integral number of elements")?;
    Grid1D::new(spec.a, spec.b, h, p, m)
}

fn require_dt(spec: &ExperimentSpec) -> Result<f64> {
    spec.dt
        .ok_or_else(|| Error::InvalidConfig("this experiment needs dt".into()))
}

fn step_count(spec: &ExperimentSpec) -> Result<usize> {
    let dt = require_dt(spec)?;
    let t = spec
        .t_final
        .ok_or_else(|| Error::InvalidConfig("this experiment needs T".into()))?;
    if t < 0.0 {
        return Err(Error::InvalidConfig(format!("T must be nonnegative, got {t}")));
    }
    let n = (t / dt).round();
    if (n * dt - t).abs() > 1e-9 * t.max(dt) {
        return Err(Error::InvalidConfig(format!(
            "dt = {dt} does not divide T = {t} (closest step count {n})"
        )));
    }
    Ok(n as usize)
}

fn schedule(spec: &ExperimentSpec, n_steps: usize) -> Vec<usize> {
    if !spec.sample_steps.is_empty() {
        let mut s: Vec<usize> = spec.sample_steps.iter().copied().filter(|&k| k <= n_steps).collect();
        s.sort_unstable();
        s.dedup();
        s
    } else if let Some(every) = spec.sample_every {
        (1..=n_steps / every.max(1)).map(|k| k * every.max(1)).collect()
    } else {
        vec![n_steps]
    }
}

/// Validates the requested timestep against the relevant bound; returns the
/// ratio dt / bound recorded in output headers.
fn guard_dt(spec: &ExperimentSpec, model: &MaterialModel, grid: &Grid1D, variant: ModelVariant) -> Result<f64> {
    let dt = require_dt(spec)?;
    let bound = match variant {
        ModelVariant::LocalWave => cfl_local_dt(model, grid.spacing()),
        _ => stable_dt(model, grid.spacing(), grid.eps()),
    };
    if dt > bound && !spec.allow_unstable {
        return Err(Error::InvalidConfig(format!(
            "dt = {dt} exceeds the stable bound {bound} for h = {} (set allow_unstable to override)",
            grid.h()
        )));
    }
    Ok(dt / bound)
}

fn run_model(
    model: &MaterialModel,
    grid: &Arc<Grid1D>,
    variant: ModelVariant,
    ic: &InitialData,
    dt: f64,
    n_steps: usize,
    sched: &[usize],
) -> Result<Trajectory> {
    let rule = QuadratureRule::for_grid(grid);
    let evo = match variant {
        ModelVariant::Nonlinear => {
            let force = NonlocalForce::new(model.clone(), grid, &rule);
            Evolution::nonlinear(force, ic, dt, None)?
        }
        ModelVariant::Linearized => {
            let op = assemble(model, grid, &rule);
            Evolution::linearized(op, grid, model.density(), ic, dt, None)?
        }
        ModelVariant::LocalWave => {
            Evolution::local_wave(model.elastic_modulus(), grid, model.density(), ic, dt, None)?
        }
    };
    run(evo, ic, n_steps, sched)
}

/// Material constants and, when a grid is configured, its timestep bounds.
pub fn material_info(spec: &ExperimentSpec) -> Result<ResultTable> {
    let m = material(spec)?;
    let mut t = ResultTable::new("info", &["quantity", "value"]);
    t.annotate_all(&spec.echo());
    let amplitude = m.potential_deriv(0.0) / spec.decay;
    let rows = [
        ("alpha", spec.alpha),
        ("decay", spec.decay),
        ("amplitude", amplitude),
        ("density", m.density()),
        ("influence_first_moment", m.influence_first_moment()),
        ("influence_max", m.influence_max()),
        ("elastic_modulus", m.elastic_modulus()),
        ("wave_speed", m.wave_speed()),
        ("critical_strain_unit_bond", m.critical_strain(1.0)?),
        ("time_scale", m.nondimensionalize(spec.b - spec.a)?.1),
    ];
    for (k, v) in rows {
        t.push_row(vec![k.to_string(), fmt(v)]);
    }
    if let (Some(eps), Some(h)) = (spec.eps, spec.h) {
        let spacing = h / spec.p as f64;
        t.push_row(vec!["dt_theorem".into(), fmt(stable_dt(&m, spacing, eps))]);
        t.push_row(vec!["dt_cfl_local".into(), fmt(cfl_local_dt(&m, spacing))]);
    }
    Ok(t)
}

/// Mesh-refinement convergence rates at fixed horizon (both nonlocal
/// models, nested differences).
pub fn run_h_convergence(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let model = material(spec)?;
    let eps = spec
        .eps
        .ok_or_else(|| Error::InvalidConfig("h-conv needs eps".into()))?;
    if spec.h_list.len() != 3 {
        return Err(Error::InvalidConfig(format!(
            "h-conv needs exactly three meshes, got {}",
            spec.h_list.len()
        )));
    }
    let hs = &spec.h_list;
    let r = hs[0] / hs[1];
    if (r - hs[1] / hs[2]).abs() > 1e-9 * r {
        return Err(Error::InvalidConfig(
            "meshes do not share a common refinement ratio".into(),
        ));
    }
    if r <= 1.0 + 1e-12 {
        return Err(Error::InvalidConfig(
            "meshes must be strictly refining (identical meshes are degenerate)".into(),
        ));
    }
    let grids: Vec<Arc<Grid1D>> = hs
        .iter()
        .map(|&h| grid_for(spec, eps, h, spec.p))
        .collect::<Result<_>>()?;
    let dt = require_dt(spec)?;
    let n_steps = step_count(spec)?;
    let sched = schedule(spec, n_steps);
    let mut margin = 0.0_f64;
    for g in &grids {
        margin = margin.max(guard_dt(spec, &model, g, ModelVariant::Linearized)?);
    }
    let ic = spec.ic.initial_data();

    let mut errors = ResultTable::new(
        "h_conv_errors",
        &["step", "time", "l2_error", "sup_error", "pair"],
    );
    let mut rates = ResultTable::new(
        "h_conv_rates",
        &["step", "time", "lpd_l2", "npd_l2", "lpd_sup", "npd_sup"],
    );
    for t in [&mut errors, &mut rates] {
        t.annotate_all(&spec.echo());
        t.annotate("dt_margin", fmt(margin));
    }

    // per variant, per sample step: (l2 rate, sup rate)
    let mut results: Vec<Vec<(f64, f64)>> = Vec::new();
    for variant in [ModelVariant::Linearized, ModelVariant::Nonlinear] {
        let trajs: Vec<Trajectory> = grids
            .iter()
            .map(|g| run_model(&model, g, variant, &ic, dt, n_steps, &sched))
            .collect::<Result<_>>()?;
        let mut per_step = Vec::new();
        for &k in &sched {
            let u: Vec<&NodalField> = trajs
                .iter()
                .map(|t| &t.sample_at_step(k).expect("scheduled sample").displacement)
                .collect();
            let d12 = field_difference(&restrict_to_coarse(u[1], &grids[0])?, u[0])?;
            let d23 = field_difference(&restrict_to_coarse(u[2], &grids[1])?, u[1])?;
            let (e12_l2, e12_sup) = (norm_l2(&d12), norm_sup(&d12));
            let (e23_l2, e23_sup) = (norm_l2(&d23), norm_sup(&d23));
            for (e_l2, e_sup, ha, hb) in
                [(e12_l2, e12_sup, hs[0], hs[1]), (e23_l2, e23_sup, hs[1], hs[2])]
            {
                errors.push_row(vec![
                    k.to_string(),
                    fmt(k as f64 * dt),
                    fmt(e_l2),
                    fmt(e_sup),
                    format!("{}:h{}-h{}", variant.label(), fmt(ha), fmt(hb)),
                ]);
            }
            per_step.push((
                rate_from_triplet(e12_l2, e23_l2, r)?,
                rate_from_triplet(e12_sup, e23_sup, r)?,
            ));
        }
        results.push(per_step);
    }
    for (idx, &k) in sched.iter().enumerate() {
        let (lpd_l2, lpd_sup) = results[0][idx];
        let (npd_l2, npd_sup) = results[1][idx];
        rates.push_row(vec![
            k.to_string(),
            fmt(k as f64 * dt),
            fmt(lpd_l2),
            fmt(npd_l2),
            fmt(lpd_sup),
            fmt(npd_sup),
        ]);
    }
    Ok(ExperimentOutput {
        tables: vec![rates, errors],
        fields: Vec::new(),
    })
}

/// Horizon convergence at fixed `eps / h` (both nonlocal models).
pub fn run_eps_convergence(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let model = material(spec)?;
    if spec.eps_list.len() != 3 {
        return Err(Error::InvalidConfig(format!(
            "eps-conv needs exactly three horizons, got {}",
            spec.eps_list.len()
        )));
    }
    let eps = &spec.eps_list;
    let r = eps[0] / eps[1];
    if (r - eps[1] / eps[2]).abs() > 1e-9 * r || r <= 1.0 + 1e-12 {
        return Err(Error::InvalidConfig(
            "horizons must shrink with a common ratio".into(),
        ));
    }
    let ratio = spec
        .eps_over_h
        .ok_or_else(|| Error::InvalidConfig("eps-conv needs eps_over_h".into()))?;
    let m = integral_ratio(ratio, 1.0, "eps_over_h must be a positive integer")?;
    let grids: Vec<Arc<Grid1D>> = eps
        .iter()
        .map(|&e| Grid1D::new(spec.a, spec.b, e / m as f64, spec.p, m))
        .collect::<Result<_>>()?;
    let dt = require_dt(spec)?;
    let n_steps = step_count(spec)?;
    let sched = schedule(spec, n_steps);
    let mut margin = 0.0_f64;
    for g in &grids {
        margin = margin.max(guard_dt(spec, &model, g, ModelVariant::Linearized)?);
    }
    let ic = spec.ic.initial_data();

    let mut errors = ResultTable::new(
        "eps_conv_errors",
        &["step", "time", "l2_error", "sup_error", "pair"],
    );
    let mut rates = ResultTable::new(
        "eps_conv_rates",
        &["step", "time", "lpd_l2", "npd_l2", "lpd_sup", "npd_sup"],
    );
    for t in [&mut errors, &mut rates] {
        t.annotate_all(&spec.echo());
        t.annotate("dt_margin", fmt(margin));
    }

    let mut results: Vec<Vec<(f64, f64)>> = Vec::new();
    for variant in [ModelVariant::Linearized, ModelVariant::Nonlinear] {
        let trajs: Vec<Trajectory> = grids
            .iter()
            .map(|g| run_model(&model, g, variant, &ic, dt, n_steps, &sched))
            .collect::<Result<_>>()?;
        let mut per_step = Vec::new();
        for &k in &sched {
            let u: Vec<&NodalField> = trajs
                .iter()
                .map(|t| &t.sample_at_step(k).expect("scheduled sample").displacement)
                .collect();
            let d12 = field_difference(&restrict_to_coarse(u[1], &grids[0])?, u[0])?;
            let d23 = field_difference(&restrict_to_coarse(u[2], &grids[1])?, u[1])?;
            let (e12_l2, e12_sup) = (norm_l2(&d12), norm_sup(&d12));
            let (e23_l2, e23_sup) = (norm_l2(&d23), norm_sup(&d23));
            for (e_l2, e_sup, ea, eb) in
                [(e12_l2, e12_sup, eps[0], eps[1]), (e23_l2, e23_sup, eps[1], eps[2])]
            {
                errors.push_row(vec![
                    k.to_string(),
                    fmt(k as f64 * dt),
                    fmt(e_l2),
                    fmt(e_sup),
                    format!("{}:eps{}-eps{}", variant.label(), fmt(ea), fmt(eb)),
                ]);
            }
            per_step.push((
                rate_from_eps_pair(e12_l2, e23_l2, eps[1], eps[2])?,
                rate_from_eps_pair(e12_sup, e23_sup, eps[1], eps[2])?,
            ));
        }
        results.push(per_step);
    }
    for (idx, &k) in sched.iter().enumerate() {
        let (lpd_l2, lpd_sup) = results[0][idx];
        let (npd_l2, npd_sup) = results[1][idx];
        rates.push_row(vec![
            k.to_string(),
            fmt(k as f64 * dt),
            fmt(lpd_l2),
            fmt(npd_l2),
            fmt(lpd_sup),
            fmt(npd_sup),
        ]);
    }
    Ok(ExperimentOutput {
        tables: vec![rates, errors],
        fields: Vec::new(),
    })
}

/// Nonlocal solutions against a fine local elastodynamic reference: per-step
/// errors plus optional solution snapshots.
pub fn run_comparison(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let model = material(spec)?;
    if spec.pair_eps.is_empty() || spec.pair_eps.len() != spec.pair_h.len() {
        return Err(Error::InvalidConfig(
            "compare needs matched pair_eps / pair_h lists".into(),
        ));
    }
    let ref_h = spec
        .reference_h
        .ok_or_else(|| Error::InvalidConfig("compare needs reference_h".into()))?;
    let ref_grid = Grid1D::new(spec.a, spec.b, ref_h, 1, 1)?;
    let dt = require_dt(spec)?;
    let n_steps = step_count(spec)?;

    let pair_grids: Vec<Arc<Grid1D>> = spec
        .pair_eps
        .iter()
        .zip(&spec.pair_h)
        .map(|(&e, &h)| grid_for(spec, e, h, spec.p))
        .collect::<Result<_>>()?;
    for g in &pair_grids {
        integral_ratio(
            g.spacing(),
            ref_grid.spacing(),
            "reference grid must refine every comparison grid",
        )?;
        guard_dt(spec, &model, g, ModelVariant::Linearized)?;
    }
    let margin = guard_dt(spec, &model, &ref_grid, ModelVariant::LocalWave)?;

    // error schedule from sample_every (default ~100 samples); snapshots from
    // sample_steps
    let every = spec.sample_every.unwrap_or_else(|| (n_steps / 100).max(1));
    let err_sched: Vec<usize> = (1..=n_steps / every).map(|k| k * every).collect();
    let snap_sched: Vec<usize> = spec
        .sample_steps
        .iter()
        .copied()
        .filter(|&k| k <= n_steps)
        .collect();
    let mut merged = err_sched.clone();
    merged.extend_from_slice(&snap_sched);
    merged.sort_unstable();
    merged.dedup();

    let ic = spec.ic.initial_data();
    let reference = run_model(
        &model,
        &ref_grid,
        ModelVariant::LocalWave,
        &ic,
        dt,
        n_steps,
        &merged,
    )?;

    let mut errors = ResultTable::new(
        "compare_errors",
        &["step", "time", "l2_error", "sup_error", "pair"],
    );
    errors.annotate_all(&spec.echo());
    errors.annotate("dt_margin", fmt(margin));
    let mut fields = Vec::new();
    for &k in &snap_sched {
        let s = reference.sample_at_step(k).expect("scheduled sample");
        fields.push((format!("snapshot_elasto_step{k}"), s.displacement.clone()));
    }

    for (idx, grid) in pair_grids.iter().enumerate() {
        let (eps_i, h_i) = (spec.pair_eps[idx], spec.pair_h[idx]);
        for variant in [ModelVariant::Linearized, ModelVariant::Nonlinear] {
            let traj = run_model(&model, grid, variant, &ic, dt, n_steps, &merged)?;
            let label = format!("{}(eps={};h={})-vs-elasto", variant.label(), fmt(eps_i), fmt(h_i));
            for &k in &err_sched {
                let pd = &traj.sample_at_step(k).expect("scheduled").displacement;
                let el = &reference.sample_at_step(k).expect("scheduled").displacement;
                let d = field_difference(&restrict_to_coarse(el, grid)?, pd)?;
                errors.push_row(vec![
                    k.to_string(),
                    fmt(k as f64 * dt),
                    fmt(norm_l2(&d)),
                    fmt(norm_sup(&d)),
                    label.clone(),
                ]);
            }
            for &k in &snap_sched {
                let s = traj.sample_at_step(k).expect("scheduled");
                fields.push((
                    format!("snapshot_{}_eps{}_step{k}", variant.label(), fmt(eps_i)),
                    s.displacement.clone(),
                ));
            }
        }
    }
    Ok(ExperimentOutput {
        tables: vec![errors],
        fields,
    })
}

/// Per-step slope of the NPD-LPD solution gap against the horizon.
pub fn run_npd_lpd_gap(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let model = material(spec)?;
    if spec.pair_eps.len() != 2 || spec.pair_h.len() != 2 {
        return Err(Error::InvalidConfig(
            "gap needs exactly two (eps, h) pairs".into(),
        ));
    }
    let (e1, e2) = (spec.pair_eps[0], spec.pair_eps[1]);
    if (e1 - e2).abs() <= 1e-12 * e1.abs() {
        return Err(Error::InvalidConfig(
            "gap needs distinct horizons (coincident eps values are degenerate)".into(),
        ));
    }
    let grids: Vec<Arc<Grid1D>> = spec
        .pair_eps
        .iter()
        .zip(&spec.pair_h)
        .map(|(&e, &h)| grid_for(spec, e, h, spec.p))
        .collect::<Result<_>>()?;
    let dt = require_dt(spec)?;
    let n_steps = step_count(spec)?;
    let mut margin = 0.0_f64;
    for g in &grids {
        margin = margin.max(guard_dt(spec, &model, g, ModelVariant::Linearized)?);
    }
    // the gap vanishes identically at step 0 where both models share the IC
    let sched: Vec<usize> = schedule(spec, n_steps).into_iter().filter(|&k| k > 0).collect();
    let ic = spec.ic.initial_data();

    let mut gaps: Vec<Vec<f64>> = Vec::new();
    for grid in &grids {
        let npd = run_model(&model, grid, ModelVariant::Nonlinear, &ic, dt, n_steps, &sched)?;
        let lpd = run_model(&model, grid, ModelVariant::Linearized, &ic, dt, n_steps, &sched)?;
        let per_step = sched
            .iter()
            .map(|&k| {
                let a = &npd.sample_at_step(k).expect("scheduled").displacement;
                let b = &lpd.sample_at_step(k).expect("scheduled").displacement;
                Ok(norm_l2(&field_difference(a, b)?))
            })
            .collect::<Result<Vec<f64>>>()?;
        gaps.push(per_step);
    }

    let mut table = ResultTable::new(
        "gap_slopes",
        &["step", "time", "gap_eps1", "gap_eps2", "slope"],
    );
    table.annotate_all(&spec.echo());
    table.annotate("dt_margin", fmt(margin));
    let denom = e1.ln() - e2.ln();
    for (idx, &k) in sched.iter().enumerate() {
        let (g1, g2) = (gaps[0][idx], gaps[1][idx]);
        if g1 <= 0.0 || g2 <= 0.0 || g1.is_nan() || g2.is_nan() {
            return Err(Error::Precondition(format!(
                "zero NPD-LPD gap at step {k}; the models coincide (degenerate comparison)"
            )));
        }
        table.push_row(vec![
            k.to_string(),
            fmt(k as f64 * dt),
            fmt(g1),
            fmt(g2),
            fmt((g1.ln() - g2.ln()) / denom),
        ]);
    }
    Ok(ExperimentOutput {
        tables: vec![table],
        fields: Vec::new(),
    })
}

fn variant_label(v: GapVariant) -> &'static str {
    match v {
        GapVariant::NonlinearVsLinearized => "nonlinear-vs-linearized",
        GapVariant::LinearizedVsLocal => "linearized-vs-local",
        GapVariant::NonlinearVsLocal => "nonlinear-vs-local",
        GapVariant::InterpVsExactNonlinear => "interp-vs-exact-nonlinear",
        GapVariant::InterpVsExactLinearized => "interp-vs-exact-linearized",
    }
}

/// Force-consistency sweeps: interpolation error in `h` at fixed horizon,
/// and model/local gaps across horizons at fixed `eps / h`.
pub fn run_consistency(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let model = material(spec)?;
    let amp = spec.test_amplitude;
    let u = move |x: f64| amp * (2.0 * std::f64::consts::PI * x).sin();
    let uxx = move |x: f64| {
        -amp * (2.0 * std::f64::consts::PI).powi(2) * (2.0 * std::f64::consts::PI * x).sin()
    };

    let mut sweep = ResultTable::new("consistency", &["variant", "p", "eps", "h", "sup_gap"]);
    let mut slopes = ResultTable::new("consistency_slopes", &["variant", "p", "sweep", "slope"]);
    for t in [&mut sweep, &mut slopes] {
        t.annotate_all(&spec.echo());
    }
    let mut ran_any = false;

    if !spec.h_list.is_empty() {
        if spec.h_list.len() < 3 {
            return Err(Error::InvalidConfig(
                "consistency h-sweep needs at least three mesh sizes".into(),
            ));
        }
        let eps = spec
            .eps
            .ok_or_else(|| Error::InvalidConfig("consistency h-sweep needs eps".into()))?;
        let ps = if spec.p_list.is_empty() { vec![1, 2] } else { spec.p_list.clone() };
        for &p in &ps {
            for variant in [GapVariant::InterpVsExactLinearized, GapVariant::InterpVsExactNonlinear] {
                let mut gaps = Vec::new();
                for &h in &spec.h_list {
                    let grid = grid_for(spec, eps, h, p)?;
                    let rule = QuadratureRule::for_grid(&grid);
                    let gap = consistency_force_gap(&model, &grid, &rule, &u, &uxx, variant, eps)?;
                    sweep.push_row(vec![
                        variant_label(variant).to_string(),
                        p.to_string(),
                        fmt(eps),
                        fmt(h),
                        fmt(gap),
                    ]);
                    gaps.push(gap);
                }
                slopes.push_row(vec![
                    variant_label(variant).to_string(),
                    p.to_string(),
                    "h".to_string(),
                    fmt(loglog_slope(&spec.h_list, &gaps)?),
                ]);
            }
        }
        ran_any = true;
    }

    if !spec.eps_list.is_empty() {
        if spec.eps_list.len() < 3 {
            return Err(Error::InvalidConfig(
                "consistency eps-sweep needs at least three horizons".into(),
            ));
        }
        let ratio = spec.eps_over_h.unwrap_or(4.0);
        let m = integral_ratio(ratio, 1.0, "eps_over_h must be a positive integer")?;
        let margin = spec.eps_list.iter().copied().fold(0.0_f64, f64::max);
        for variant in [
            GapVariant::NonlinearVsLinearized,
            GapVariant::LinearizedVsLocal,
            GapVariant::NonlinearVsLocal,
        ] {
            let mut gaps = Vec::new();
            for &eps in &spec.eps_list {
                let grid = Grid1D::new(spec.a, spec.b, eps / m as f64, spec.p, m)?;
                let rule = QuadratureRule::for_grid(&grid);
                let gap = consistency_force_gap(&model, &grid, &rule, &u, &uxx, variant, margin)?;
                sweep.push_row(vec![
                    variant_label(variant).to_string(),
                    spec.p.to_string(),
                    fmt(eps),
                    fmt(eps / m as f64),
                    fmt(gap),
                ]);
                gaps.push(gap);
            }
            slopes.push_row(vec![
                variant_label(variant).to_string(),
                spec.p.to_string(),
                "eps".to_string(),
                fmt(loglog_slope(&spec.eps_list, &gaps)?),
            ]);
        }
        ran_any = true;
    }

    if !ran_any {
        return Err(Error::InvalidConfig(
            "consistency needs an h_list sweep, an eps_list sweep, or both".into(),
        ));
    }
    Ok(ExperimentOutput {
        tables: vec![sweep, slopes],
        fields: Vec::new(),
    })
}

/// Stability reports for a list of grids.
pub fn run_stability(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let model = material(spec)?;
    let mut table = ResultTable::new(
        "stability",
        &[
            "n", "m", "p", "h", "eps", "dt_theorem", "dt_spectral", "dt_cfl_local", "gershgorin",
            "lambda_max", "stieltjes_violations",
        ],
    );
    table.annotate_all(&spec.echo());
    for &(n, m) in &spec.grids {
        let h = (spec.b - spec.a) / n as f64;
        let grid = Grid1D::new(spec.a, spec.b, h, spec.p, m)?;
        let rule = QuadratureRule::for_grid(&grid);
        let report = stability_report(&model, &grid, &rule);
        table.push_row(vec![
            n.to_string(),
            m.to_string(),
            spec.p.to_string(),
            fmt(report.h),
            fmt(report.eps),
            fmt(report.dt_theorem),
            report.dt_spectral.map(fmt).unwrap_or_default(),
            fmt(report.dt_cfl_local),
            fmt(report.gershgorin),
            report.lambda_max.map(fmt).unwrap_or_default(),
            report.stieltjes_violations.to_string(),
        ]);
    }
    Ok(ExperimentOutput {
        tables: vec![table],
        fields: Vec::new(),
    })
}

/// A single dynamic run emitting `step,time,x,u` trajectory rows.
pub fn run_single(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let model = material(spec)?;
    let h = spec
        .h
        .ok_or_else(|| Error::InvalidConfig("run needs h".into()))?;
    // the local model has no horizon; default its grid layer to one element
    let eps = match (spec.eps, spec.model) {
        (Some(e), _) => e,
        (None, ModelVariant::LocalWave) => h,
        (None, _) => return Err(Error::InvalidConfig("run needs eps".into())),
    };
    let grid = grid_for(spec, eps, h, spec.p)?;
    let dt = require_dt(spec)?;
    let n_steps = step_count(spec)?;
    let margin = guard_dt(spec, &model, &grid, spec.model)?;
    let sched = schedule(spec, n_steps);
    let ic = spec.ic.initial_data();
    let traj = run_model(&model, &grid, spec.model, &ic, dt, n_steps, &sched)?;

    let mut table = ResultTable::new("trajectory", &["step", "time", "x", "u"]);
    table.annotate_all(&spec.echo());
    if spec.eps.is_none() {
        table.annotate("eps", fmt(eps));
    }
    table.annotate("dt_margin", fmt(margin));
    for s in &traj.samples {
        for i in 0..grid.node_count() {
            table.push_row(vec![
                s.step.to_string(),
                fmt(s.time),
                fmt_full(grid.coord(i)),
                fmt_full(s.displacement.values()[i]),
            ]);
        }
    }
    Ok(ExperimentOutput {
        tables: vec![table],
        fields: Vec::new(),
    })
}
