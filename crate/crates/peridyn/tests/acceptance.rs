//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see every
//! verdict line; failures carry the measured values in the panic message.

use std::sync::Arc;

use peridyn::analysis::loglog_slope;
use peridyn::assembly::{assemble, cfl_local_dt, stable_dt};
use peridyn::experiment::{
    execute, run_comparison, run_eps_convergence, run_h_convergence, run_npd_lpd_gap,
    ExperimentKind, ExperimentSpec,
};
use peridyn::force::{consistency_force_gap, GapVariant, NonlocalForce, QuadratureRule};
use peridyn::grid::{Grid1D, NodalField};
use peridyn::integrator::{run, Evolution, InitialData};
use peridyn::material::MaterialModel;
use rand::{Rng, SeedableRng};

fn verdict(number: u32, label: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("acceptance criterion {number} ({label}): {status} - {detail}");
    assert!(ok, "criterion {number} ({label}) failed: {detail}");
}

fn model() -> MaterialModel {
    MaterialModel::default_nondimensional()
}

fn parse(cell: &str) -> f64 {
    cell.parse().expect("numeric table cell")
}

/// Stability theorem against the dense spectral oracle on nine grids.
#[test]
fn criterion_01_stability_theorem_vs_spectral_oracle() {
    let m = model();
    let mut detail = String::new();
    let mut ok = true;
    for &n in &[32usize, 64, 128] {
        let mut prev_ratio = 0.0;
        for &horizon_m in &[2usize, 4, 8] {
            let grid = Grid1D::new(0.0, 1.0, 1.0 / n as f64, 1, horizon_m).unwrap();
            let rule = QuadratureRule::for_grid(&grid);
            let op = assemble(&m, &grid, &rule);
            let spectrum = op.exact_spectrum().unwrap();
            let lambda_max = *spectrum.last().unwrap();
            let dt_theorem = stable_dt(&m, grid.spacing(), grid.eps());
            let dt_spectral = 2.0 / lambda_max.sqrt();
            let ratio = dt_theorem / cfl_local_dt(&m, grid.spacing());
            ok &= dt_theorem <= dt_spectral * (1.0 + 1e-12);
            ok &= ratio > 0.0 && ratio < 1.0;
            ok &= ratio > prev_ratio; // increasing toward 1 as h/eps drops
            prev_ratio = ratio;
            detail.push_str(&format!(
                "n={n} m={horizon_m}: dt_thm/dt_spec={:.4} ratio={ratio:.4}; ",
                dt_theorem / dt_spectral
            ));
        }
        ok &= prev_ratio < 1.0;
    }
    verdict(1, "stability theorem vs spectral oracle", ok, &detail);
}

/// Instability witness above the spectral bound; boundedness and energy
/// conservation just below it.
#[test]
fn criterion_02_instability_witness() {
    let m = model();
    let grid = Grid1D::new(0.0, 1.0, 1.0 / 64.0, 1, 4).unwrap();
    let rule = QuadratureRule::for_grid(&grid);
    let op = assemble(&m, &grid, &rule);
    let (vals, vecs) = op.exact_eigenpairs().unwrap();
    let (top_idx, lambda_max) = vals
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let dt_spectral = 2.0 / lambda_max.sqrt();
    let first = grid.first_domain_node();

    let seed_state = |scale: f64, dt: f64| {
        let mut u0 = NodalField::zeros(&grid);
        for (k, v) in vecs.column(top_idx).iter().enumerate() {
            u0.values_mut()[first + k] = scale * v;
        }
        // kickoff with zero velocity: u1 = u0 + dt^2/2 A u0
        let mut force = vec![0.0; op.dim()];
        op.matvec(u0.domain_values(), &mut force);
        let mut u1 = u0.clone();
        for (k, f) in force.iter().enumerate() {
            u1.values_mut()[first + k] += 0.5 * dt * dt * f;
        }
        (u0, u1)
    };
    let sup = |u: &NodalField| u.domain_values().iter().fold(0.0_f64, |a, v| a.max(v.abs()));

    // unstable branch
    let dt_bad = 1.5 * dt_spectral;
    let (u0, u1) = seed_state(1e-3, dt_bad);
    let a0 = sup(&u0);
    let op_bad = assemble(&m, &grid, &rule);
    let mut evo = Evolution::from_states(op_bad, &grid, 1.0, u0, u1, dt_bad).unwrap();
    let mut grew_at = None;
    for step in 0..2000 {
        if sup(evo.displacement()) > 1e3 * a0 {
            grew_at = Some(step);
            break;
        }
        evo.advance().unwrap();
    }

    // stable branch with leapfrog energy tracking
    let dt_good = 0.95 * dt_spectral;
    let (u0, u1) = seed_state(1e-3, dt_good);
    let a0s = sup(&u0);
    let op_good = assemble(&m, &grid, &rule);
    let energy = |prev: &NodalField, curr: &NodalField| {
        let mut au = vec![0.0; op.dim()];
        op.matvec(prev.domain_values(), &mut au);
        let mut kinetic = 0.0;
        let mut potential = 0.0;
        for (k, a) in au.iter().enumerate() {
            let i = first + k;
            let d = (curr.values()[i] - prev.values()[i]) / dt_good;
            kinetic += d * d;
            potential += curr.values()[i] * (-a);
        }
        kinetic + potential
    };
    let e0 = energy(&u0, &u1);
    let mut evo = Evolution::from_states(op_good, &grid, 1.0, u0, u1, dt_good).unwrap();
    let mut max_amp = a0s;
    let mut max_drift = 0.0_f64;
    for _ in 0..10_000 {
        let prev = evo.displacement().clone();
        evo.advance().unwrap();
        max_amp = max_amp.max(sup(evo.displacement()));
        let e = energy(&prev, evo.displacement());
        max_drift = max_drift.max(((e - e0) / e0).abs());
    }

    let ok = grew_at.is_some() && max_amp <= 10.0 * a0s && max_drift < 0.01;
    verdict(
        2,
        "instability witness",
        ok,
        &format!(
            "grew 1e3x at step {grew_at:?}; bounded max {:.3}x initial; energy drift {:.2e}",
            max_amp / a0s,
            max_drift
        ),
    );
}

/// Stieltjes structure and positive spectra for every linear-interpolation
/// assembly of criterion 1.
#[test]
fn criterion_03_stieltjes_structure() {
    let m = model();
    let mut ok = true;
    let mut detail = String::new();
    for &n in &[32usize, 64, 128] {
        for &horizon_m in &[2usize, 4, 8] {
            let grid = Grid1D::new(0.0, 1.0, 1.0 / n as f64, 1, horizon_m).unwrap();
            let rule = QuadratureRule::for_grid(&grid);
            let op = assemble(&m, &grid, &rule);
            let report = op.stieltjes_check();
            let spectrum = op.exact_spectrum().unwrap();
            let (lo, hi) = (spectrum[0], *spectrum.last().unwrap());
            ok &= report.is_clean();
            ok &= lo > 1e-10 * hi;
            detail.push_str(&format!(
                "n={n} m={horizon_m}: violations={} lmin/lmax={:.2e}; ",
                report.violations.len(),
                lo / hi
            ));
        }
    }
    verdict(3, "Stieltjes structure", ok, &detail);
}

/// Interpolated-vs-exact force gap slopes for the stated windows.
#[test]
fn criterion_04_consistency_slope_windows() {
    let m = model();
    let eps = 0.1;
    let hs = [eps / 8.0, eps / 16.0, eps / 32.0, eps / 64.0];
    let u = |x: f64| (2.0 * std::f64::consts::PI * x).sin();
    let uxx =
        |x: f64| -(2.0 * std::f64::consts::PI).powi(2) * (2.0 * std::f64::consts::PI * x).sin();
    let mut ok = true;
    let mut detail = String::new();
    for (p, window) in [(1usize, (0.85, 1.3)), (2usize, (1.8, 2.4))] {
        for variant in [GapVariant::InterpVsExactLinearized, GapVariant::InterpVsExactNonlinear] {
            let mut gaps = Vec::new();
            for &h in &hs {
                let grid = Grid1D::new(0.0, 1.0, h, p, (eps / h).round() as usize).unwrap();
                let rule = QuadratureRule::for_grid(&grid);
                gaps.push(consistency_force_gap(&m, &grid, &rule, &u, &uxx, variant, eps).unwrap());
            }
            let slope = loglog_slope(&hs, &gaps).unwrap();
            let in_window = slope >= window.0 && slope <= window.1;
            ok &= in_window;
            detail.push_str(&format!("p={p} {variant:?}: slope={slope:.3} window=[{},{}]; ", window.0, window.1));
        }
    }
    verdict(4, "consistency slope windows", ok, &detail);
}

/// Horizon-rate checks for the model/local force gaps on two smooth test
/// functions.
#[test]
fn criterion_05_model_gap_rates() {
    let m = model();
    let eps_list = [0.1, 0.05, 0.025, 0.0125];
    let margin = 0.1;
    let two_pi = 2.0 * std::f64::consts::PI;
    // strain amplitude 0.05 for the nonlinear comparison
    let sin_amp = 0.05 / two_pi;
    // bump wide enough that the largest horizon sits inside its Taylor range
    let beta = 0.08_f64;
    let bump_amp = 0.05 / ((2.0 / beta).sqrt() * (-0.5_f64).exp());

    let sin_u = move |x: f64| sin_amp * (two_pi * x).sin();
    let sin_uxx = move |x: f64| -sin_amp * two_pi * two_pi * (two_pi * x).sin();
    let bump_u = move |x: f64| bump_amp * (-(x - 0.5_f64).powi(2) / beta).exp();
    let bump_uxx = move |x: f64| {
        let r = x - 0.5;
        bump_amp * (-r * r / beta).exp() * (4.0 * r * r / (beta * beta) - 2.0 / beta)
    };

    let sweep = |u: &(dyn Fn(f64) -> f64 + Sync),
                 uxx: &(dyn Fn(f64) -> f64 + Sync),
                 variant: GapVariant| {
        let mut gaps = Vec::new();
        for &eps in &eps_list {
            let grid = Grid1D::new(0.0, 1.0, eps / 4.0, 1, 4).unwrap();
            let rule = QuadratureRule::for_grid(&grid);
            gaps.push(consistency_force_gap(&m, &grid, &rule, &u, &uxx, variant, margin).unwrap());
        }
        loglog_slope(&eps_list, &gaps).unwrap()
    };

    let mut ok = true;
    let mut detail = String::new();
    for (name, u, uxx) in [
        ("sin", &sin_u as &(dyn Fn(f64) -> f64 + Sync), &sin_uxx as &(dyn Fn(f64) -> f64 + Sync)),
        ("bump", &bump_u, &bump_uxx),
    ] {
        let lin_local = sweep(u, uxx, GapVariant::LinearizedVsLocal);
        let nl_lin = sweep(u, uxx, GapVariant::NonlinearVsLinearized);
        ok &= lin_local >= 1.8;
        ok &= nl_lin >= 0.9;
        detail.push_str(&format!("{name}: lin-vs-local {lin_local:.3} (>=1.8), nl-vs-lin {nl_lin:.3} (>=0.9); "));
    }
    verdict(5, "model gap rates in the horizon", ok, &detail);
}

/// Scaled mesh-refinement convergence: rates at least one, models in step.
#[test]
fn criterion_06_scaled_h_convergence() {
    let spec = ExperimentSpec::from_str(
        ExperimentKind::HConv,
        "eps = 0.1
h_list = 0.02, 0.01, 0.005
dt = 1e-4
T = 0.2
ic = gauss(0.005,1e-5,0.5)
sample_steps = 500,1000,1500,2000
",
    )
    .unwrap();
    let out = run_h_convergence(&spec).unwrap();
    let rates = &out.tables[0];
    let mut ok = !rates.rows.is_empty();
    let mut detail = String::new();
    for row in &rates.rows {
        let (lpd, npd) = (parse(&row[2]), parse(&row[3]));
        ok &= lpd >= 1.0 && npd >= 1.0 && (lpd - npd).abs() <= 0.05;
        detail.push_str(&format!("step {}: lpd={lpd:.4} npd={npd:.4}; ", row[0]));
    }
    verdict(6, "scaled h-convergence", ok, &detail);
}

/// Scaled horizon convergence: rates in the expected band, models equal to
/// three decimals.
#[test]
fn criterion_07_scaled_eps_convergence() {
    let spec = ExperimentSpec::from_str(
        ExperimentKind::EpsConv,
        "eps_list = 0.016, 0.008, 0.004
eps_over_h = 20
dt = 1e-4
T = 0.1
ic = gauss(1e-4,1e-3,0.5)
sample_steps = 250,500,750,1000
",
    )
    .unwrap();
    let out = run_eps_convergence(&spec).unwrap();
    let rates = &out.tables[0];
    let mut ok = !rates.rows.is_empty();
    let mut detail = String::new();
    for row in &rates.rows {
        let (lpd_l2, npd_l2) = (parse(&row[2]), parse(&row[3]));
        let (lpd_sup, npd_sup) = (parse(&row[4]), parse(&row[5]));
        ok &= (1.3..=2.2).contains(&lpd_l2) && (1.3..=2.2).contains(&npd_l2);
        ok &= (lpd_l2 - npd_l2).abs() <= 5e-4;
        ok &= (lpd_sup - npd_sup).abs() <= 5e-4;
        detail.push_str(&format!("step {}: lpd={lpd_l2:.4} npd={npd_l2:.4}; ", row[0]));
    }
    verdict(7, "scaled eps-convergence", ok, &detail);
}

/// NPD-LPD gap slope near one for at least 90% of sampled steps.
#[test]
fn criterion_08_npd_lpd_gap_slope() {
    let spec = ExperimentSpec::from_str(
        ExperimentKind::Gap,
        "pair_eps = 0.02, 0.01
pair_h = 0.001, 0.00025
dt = 2e-4
T = 0.4
ic = gauss2(0.001,0.003,0.25,0.75)
sample_every = 20
",
    )
    .unwrap();
    let out = run_npd_lpd_gap(&spec).unwrap();
    let table = &out.tables[0];
    let total = table.rows.len();
    let in_band = table
        .rows
        .iter()
        .filter(|row| {
            let s = parse(&row[4]);
            (0.7..=1.3).contains(&s)
        })
        .count();
    let ok = total > 0 && (in_band as f64) >= 0.9 * total as f64;
    verdict(
        8,
        "NPD-LPD gap slope",
        ok,
        &format!("{in_band}/{total} sampled steps within [0.7, 1.3]"),
    );
}

/// A coarse h/eps ratio defeats a smaller horizon in the comparison with
/// local elastodynamics.
#[test]
fn criterion_09_h_over_eps_dominance() {
    let spec = ExperimentSpec::from_str(
        ExperimentKind::Compare,
        "pair_eps = 0.01, 0.02, 0.01
pair_h = 0.00125, 0.0025, 0.005
reference_h = 0.000625
dt = 2.5e-4
T = 0.3
ic = gauss2(0.001,0.003,0.25,0.75)
sample_every = 10
",
    )
    .unwrap();
    let out = run_comparison(&spec).unwrap();
    let errors = &out.tables[0];
    let max_for = |needle: &str| {
        errors
            .rows
            .iter()
            .filter(|row| row[4].starts_with("npd") && row[4].contains(needle))
            .map(|row| parse(&row[2]))
            .fold(0.0_f64, f64::max)
    };
    let fine_small_eps = max_for("eps=1e-2;h=1.25e-3");
    let fine_large_eps = max_for("eps=2e-2;h=2.5e-3");
    let coarse_small_eps = max_for("eps=1e-2;h=5e-3");
    let ok = fine_small_eps > 0.0
        && fine_small_eps < fine_large_eps
        && coarse_small_eps > fine_large_eps;
    verdict(
        9,
        "h/eps dominance ordering",
        ok,
        &format!(
            "err(0.01, eps/8)={fine_small_eps:.3e} < err(0.02, eps/8)={fine_large_eps:.3e} < err(0.01, eps/2)={coarse_small_eps:.3e}"
        ),
    );
}

/// Matrix application agrees with the direct-quadrature linearized force.
#[test]
fn criterion_10_oracle_equivalence() {
    let m = model();
    let grid = Grid1D::new(0.0, 1.0, 1.0 / 101.0, 1, 4).unwrap();
    let rule = QuadratureRule::for_grid(&grid);
    let op = assemble(&m, &grid, &rule);
    let force = NonlocalForce::new(m, &grid, &rule);
    let first = grid.first_domain_node();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let mut field = NodalField::zeros(&grid);
        for i in grid.domain_nodes() {
            field.values_mut()[i] = rng.gen_range(-1.0..1.0);
        }
        let mut out = vec![0.0; op.dim()];
        op.matvec(field.domain_values(), &mut out);
        for (k, &v) in out.iter().enumerate() {
            let direct = force.linearized_at(field.values(), first + k);
            worst = worst.max((v - direct).abs() / (1.0 + v.abs()));
        }
    }
    let ok = worst <= 1e-11;
    verdict(
        10,
        "matrix vs quadrature oracle",
        ok,
        &format!("worst relative mismatch {worst:.3e}"),
    );
}

/// The local reference reproduces the pinned-string cosine mode.
#[test]
fn criterion_11_pinned_string_cosine_mode() {
    let m = model();
    let grid = Grid1D::new(0.0, 1.0, 1e-3, 1, 1).unwrap();
    let ic = InitialData::resting(Arc::new(|x: f64| (std::f64::consts::PI * x).sin()));
    let dt = 5e-4;
    let n_steps = 1000; // t = 0.5
    let evo = Evolution::local_wave(m.elastic_modulus(), &grid, 1.0, &ic, dt, None).unwrap();
    let traj = run(evo, &ic, n_steps, &[n_steps]).unwrap();
    let s = &traj.samples[0];
    let mut worst = 0.0_f64;
    for i in grid.domain_nodes() {
        let x = grid.coord(i);
        let exact = (std::f64::consts::PI * s.time).cos() * (std::f64::consts::PI * x).sin();
        worst = worst.max((s.displacement.values()[i] - exact).abs());
    }
    let ok = worst <= 1e-3;
    verdict(
        11,
        "pinned-string cosine mode",
        ok,
        &format!("sup error {worst:.3e} at t = {}", s.time),
    );
}

/// Paper-scale configs ship alongside the desk ones; they must at least
/// parse and carry the full-scale parameters.
#[test]
fn shipped_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("cfg") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let kind_line = text
            .lines()
            .find_map(|l| l.trim().strip_prefix("kind").map(|r| r.trim_start_matches([' ', '=']).trim().to_string()))
            .unwrap_or_else(|| panic!("{} lacks a kind", path.display()));
        let kind = ExperimentKind::parse(&kind_line).unwrap();
        ExperimentSpec::from_file(kind, &path).unwrap();
        seen += 1;
    }
    assert!(seen >= 8, "expected the shipped config set, found {seen}");
}

/// Determinism: the same spec produces byte-identical tables.
#[test]
fn deterministic_experiment_outputs() {
    let spec = ExperimentSpec::from_str(
        ExperimentKind::Gap,
        "pair_eps = 0.02, 0.01
pair_h = 0.002, 0.001
dt = 5e-4
T = 0.05
ic = gauss2(0.001,0.003,0.25,0.75)
sample_steps = 100
",
    )
    .unwrap();
    let a = execute(&spec).unwrap().tables[0].to_csv_string();
    let b = execute(&spec).unwrap().tables[0].to_csv_string();
    assert_eq!(a, b);
}
