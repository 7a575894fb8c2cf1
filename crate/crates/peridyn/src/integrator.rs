//! Central-difference time stepping for the three evolution models:
//! nonlinear peridynamics, linearized peridynamics (matrix form), and the
//! local elastic wave equation.

use std::sync::Arc;

use crate::assembly::BandedSymmetricOperator;
use crate::error::{Error, Result};
use crate::force::NonlocalForce;
use crate::grid::{Grid1D, NodalField};

/// Which evolution equation a run integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelVariant {
    /// Nonlinear peridynamics (NPD).
    Nonlinear,
    /// Linearized peridynamics (LPD).
    Linearized,
    /// Local elastic wave equation with the model's Young's modulus.
    LocalWave,
}

impl ModelVariant {
    pub fn label(&self) -> &'static str {
        match self {
            ModelVariant::Nonlinear => "npd",
            ModelVariant::Linearized => "lpd",
            ModelVariant::LocalWave => "elasto",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "npd" => Ok(ModelVariant::Nonlinear),
            "lpd" => Ok(ModelVariant::Linearized),
            "elasto" => Ok(ModelVariant::LocalWave),
            other => Err(Error::InvalidConfig(format!(
                "unknown model variant '{other}' (expected npd, lpd, or elasto)"
            ))),
        }
    }
}

pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Initial displacement and velocity with their declared support margin:
/// both must vanish on the boundary layer and within `support_margin` of the
/// interfaces.
#[derive(Clone)]
pub struct InitialData {
    displacement: SpaceFn,
    velocity: SpaceFn,
    support_margin: f64,
}

impl InitialData {
    pub fn new(displacement: SpaceFn, velocity: SpaceFn, support_margin: f64) -> Self {
        InitialData {
            displacement,
            velocity,
            support_margin,
        }
    }

    /// Initial displacement with zero initial velocity.
    pub fn resting(displacement: SpaceFn) -> Self {
        Self::new(displacement, Arc::new(|_| 0.0), 0.0)
    }

    pub fn displacement_at(&self, x: f64) -> f64 {
        (self.displacement)(x)
    }

    pub fn velocity_at(&self, x: f64) -> f64 {
        (self.velocity)(x)
    }

    /// Checks the compact-support requirement on a grid.
    pub fn validate(&self, grid: &Grid1D) -> Result<()> {
        self.validate_inner(grid, true)
    }

    fn validate_inner(&self, grid: &Grid1D, include_layer: bool) -> Result<()> {
        let lo = grid.a() + self.support_margin;
        let hi = grid.b() - self.support_margin;
        for i in 0..grid.node_count() {
            let x = grid.coord(i);
            let constrained = (include_layer && grid.is_layer_node(i))
                || (self.support_margin > 0.0
                    && grid.is_domain_node(i)
                    && (x < lo - 1e-12 || x > hi + 1e-12));
            if constrained {
                let g = self.displacement_at(x).abs();
                let v = self.velocity_at(x).abs();
                if g > 1e-14 || v > 1e-14 {
                    return Err(Error::Precondition(format!(
                        "initial data does not vanish near the boundary: |g({x})| = {g}, |v({x})| = {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Second-order start: `u1 = u0 + dt v0 + dt^2/2 accel0`, where `accel0`
/// already combines force, body force, and density.
pub fn kickoff(u0: &[f64], v0: &[f64], accel0: &[f64], dt: f64) -> Vec<f64> {
    u0.iter()
        .zip(v0)
        .zip(accel0)
        .map(|((&u, &v), &a)| u + dt * v + 0.5 * dt * dt * a)
        .collect()
}

enum ForcePath {
    Nonlinear(NonlocalForce),
    Linearized(BandedSymmetricOperator),
    Local { modulus: f64 },
}

impl ForcePath {
    fn variant(&self) -> ModelVariant {
        match self {
            ForcePath::Nonlinear(_) => ModelVariant::Nonlinear,
            ForcePath::Linearized(_) => ModelVariant::Linearized,
            ForcePath::Local { .. } => ModelVariant::LocalWave,
        }
    }
}

/// One evolution with its state pair `(u^{k-1}, u^k)`.
///
/// The time loop is strictly sequential; within a step the force sweep over
/// nodes may run in parallel with read-only access to the current state.
pub struct Evolution {
    grid: Arc<Grid1D>,
    path: ForcePath,
    density: f64,
    dt: f64,
    body_force: Option<SpaceTimeFn>,
    u_prev: NodalField,
    u_curr: NodalField,
    step: usize,
    force_buf: Vec<f64>,
}

impl Evolution {
    pub fn nonlinear(
        force: NonlocalForce,
        initial: &InitialData,
        dt: f64,
        body_force: Option<SpaceTimeFn>,
    ) -> Result<Self> {
        let grid = Arc::clone(force.grid());
        let density = force.model().density();
        Self::start(ForcePath::Nonlinear(force), grid, density, initial, dt, body_force)
    }

    pub fn linearized(
        operator: BandedSymmetricOperator,
        grid: &Arc<Grid1D>,
        density: f64,
        initial: &InitialData,
        dt: f64,
        body_force: Option<SpaceTimeFn>,
    ) -> Result<Self> {
        if operator.dim() != grid.domain_node_count() {
            return Err(Error::Precondition(format!(
                "operator dimension {} does not match the grid's {} domain nodes",
                operator.dim(),
                grid.domain_node_count()
            )));
        }
        Self::start(
            ForcePath::Linearized(operator),
            Arc::clone(grid),
            density,
            initial,
            dt,
            body_force,
        )
    }

    pub fn local_wave(
        modulus: f64,
        grid: &Arc<Grid1D>,
        density: f64,
        initial: &InitialData,
        dt: f64,
        body_force: Option<SpaceTimeFn>,
    ) -> Result<Self> {
        Self::start(
            ForcePath::Local { modulus },
            Arc::clone(grid),
            density,
            initial,
            dt,
            body_force,
        )
    }

    fn start(
        path: ForcePath,
        grid: Arc<Grid1D>,
        density: f64,
        initial: &InitialData,
        dt: f64,
        body_force: Option<SpaceTimeFn>,
    ) -> Result<Self> {
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::Precondition(format!("time step must be positive, got {dt}")));
        }
        // the local model has no boundary layer; its pinned-end runs may use
        // data that only vanishes at the interfaces
        let include_layer = !matches!(path, ForcePath::Local { .. });
        initial.validate_inner(&grid, include_layer)?;

        let mut u0 = NodalField::zeros(&grid);
        let mut v0 = NodalField::zeros(&grid);
        for i in grid.domain_nodes() {
            let x = grid.coord(i);
            u0.values_mut()[i] = initial.displacement_at(x);
            v0.values_mut()[i] = initial.velocity_at(x);
        }
        let pinned = matches!(path, ForcePath::Local { .. });
        if pinned {
            u0.values_mut()[grid.first_domain_node()] = 0.0;
            u0.values_mut()[grid.last_domain_node()] = 0.0;
            v0.values_mut()[grid.first_domain_node()] = 0.0;
            v0.values_mut()[grid.last_domain_node()] = 0.0;
        }

        let mut evo = Evolution {
            force_buf: vec![0.0; grid.domain_node_count()],
            grid,
            path,
            density,
            dt,
            body_force,
            u_prev: u0.clone(),
            u_curr: u0.clone(),
            step: 0,
        };

        // kickoff to u^1
        evo.eval_force();
        let first = evo.grid.first_domain_node();
        let mut u1 = u0.clone();
        for (k, f) in evo.force_buf.iter().enumerate() {
            let i = first + k;
            let b = evo.body(0.0, evo.grid.coord(i));
            u1.values_mut()[i] = u0.values()[i]
                + dt * v0.values()[i]
                + 0.5 * dt * dt * (f + b) / evo.density;
        }
        if pinned {
            u1.values_mut()[evo.grid.first_domain_node()] = 0.0;
            u1.values_mut()[evo.grid.last_domain_node()] = 0.0;
        }
        evo.check_finite(u1.values(), 1)?;
        evo.u_prev = u0;
        evo.u_curr = u1;
        evo.step = 1;
        Ok(evo)
    }

    /// Starts from an explicit state pair instead of initial data; used by
    /// stability experiments that seed eigenvectors directly.
    pub fn from_states(
        operator: BandedSymmetricOperator,
        grid: &Arc<Grid1D>,
        density: f64,
        u_prev: NodalField,
        u_curr: NodalField,
        dt: f64,
    ) -> Result<Self> {
        if operator.dim() != grid.domain_node_count() {
            return Err(Error::Precondition(
                "operator dimension does not match the grid".into(),
            ));
        }
        Ok(Evolution {
            force_buf: vec![0.0; grid.domain_node_count()],
            grid: Arc::clone(grid),
            path: ForcePath::Linearized(operator),
            density,
            dt,
            body_force: None,
            u_prev,
            u_curr,
            step: 1,
        })
    }

    pub fn variant(&self) -> ModelVariant {
        self.path.variant()
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.dt
    }

    /// Displacement at the current step.
    pub fn displacement(&self) -> &NodalField {
        &self.u_curr
    }

    /// Displacement at the previous step.
    pub fn previous(&self) -> &NodalField {
        &self.u_prev
    }

    fn body(&self, t: f64, x: f64) -> f64 {
        match &self.body_force {
            Some(b) => b(t, x),
            None => 0.0,
        }
    }

    fn eval_force(&mut self) {
        match &self.path {
            ForcePath::Nonlinear(f) => f.sweep(self.u_curr.values(), true, &mut self.force_buf),
            ForcePath::Linearized(op) => op.matvec(self.u_curr.domain_values(), &mut self.force_buf),
            ForcePath::Local { modulus } => {
                let vals = self.u_curr.domain_values();
                let dx = self.grid.spacing();
                let n = vals.len();
                self.force_buf[0] = 0.0;
                self.force_buf[n - 1] = 0.0;
                for k in 1..n - 1 {
                    self.force_buf[k] = modulus * (vals[k - 1] - 2.0 * vals[k] + vals[k + 1]) / (dx * dx);
                }
            }
        }
    }

    fn check_finite(&self, values: &[f64], step: usize) -> Result<()> {
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::BlowUp {
                    step,
                    node: i,
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Advances one step:
    /// `u^{k+1} = 2 u^k - u^{k-1} + dt^2 (force(u^k) + b(k dt)) / rho` on
    /// `K`, layer values held at the boundary data (zero here).
    pub fn advance(&mut self) -> Result<()> {
        self.eval_force();
        let dt = self.dt;
        let t = self.time();
        let first = self.grid.first_domain_node();
        let pinned = matches!(self.path, ForcePath::Local { .. });
        let last_local = self.grid.domain_node_count() - 1;
        {
            let body = &self.body_force;
            let grid = &self.grid;
            let density = self.density;
            let curr = self.u_curr.values();
            let prev = self.u_prev.values_mut();
            for (k, f) in self.force_buf.iter().enumerate() {
                let i = first + k;
                if pinned && (k == 0 || k == last_local) {
                    prev[i] = 0.0;
                    continue;
                }
                let b = match body {
                    Some(b) => b(t, grid.coord(i)),
                    None => 0.0,
                };
                prev[i] = 2.0 * curr[i] - prev[i] + dt * dt * (f + b) / density;
            }
        }
        std::mem::swap(&mut self.u_prev, &mut self.u_curr);
        self.step += 1;
        self.check_finite(self.u_curr.domain_values(), self.step)
    }
}

/// One recorded state of a run.
#[derive(Debug, Clone)]
pub struct Sample {
    pub step: usize,
    pub time: f64,
    pub displacement: NodalField,
    /// Centered velocity estimate `(u^{k+1} - u^{k-1}) / (2 dt)`; the exact
    /// initial velocity at step 0.
    pub velocity: NodalField,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub variant: ModelVariant,
    pub dt: f64,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn sample_at_step(&self, step: usize) -> Option<&Sample> {
        self.samples.iter().find(|s| s.step == step)
    }
}

/// Runs an evolution for `n_steps` and records the scheduled steps.
/// Deterministic: identical inputs produce bit-identical trajectories.
pub fn run(
    mut evolution: Evolution,
    initial: &InitialData,
    n_steps: usize,
    schedule: &[usize],
) -> Result<Trajectory> {
    let mut schedule: Vec<usize> = schedule.iter().copied().filter(|&s| s <= n_steps).collect();
    schedule.sort_unstable();
    schedule.dedup();

    let grid = Arc::clone(evolution.grid());
    let dt = evolution.dt();
    let mut samples = Vec::with_capacity(schedule.len());

    if schedule.first() == Some(&0) {
        let mut v0 = NodalField::zeros(&grid);
        let mut u0 = NodalField::zeros(&grid);
        for i in grid.domain_nodes() {
            let x = grid.coord(i);
            u0.values_mut()[i] = initial.displacement_at(x);
            v0.values_mut()[i] = initial.velocity_at(x);
        }
        if evolution.variant() == ModelVariant::LocalWave {
            for i in [grid.first_domain_node(), grid.last_domain_node()] {
                u0.values_mut()[i] = 0.0;
                v0.values_mut()[i] = 0.0;
            }
        }
        samples.push(Sample {
            step: 0,
            time: 0.0,
            displacement: u0,
            velocity: v0,
        });
        schedule.remove(0);
    }

    let mut next = schedule.into_iter().peekable();
    while evolution.step_index() <= n_steps {
        let k = evolution.step_index();
        if next.peek() == Some(&k) {
            next.next();
            // centered velocity needs u^{k+1}; keep u^{k-1} before advancing
            let older = evolution.previous().clone();
            let displacement = evolution.displacement().clone();
            evolution.advance()?;
            let mut velocity = NodalField::zeros(&grid);
            for i in grid.domain_nodes() {
                velocity.values_mut()[i] =
                    (evolution.displacement().values()[i] - older.values()[i]) / (2.0 * dt);
            }
            samples.push(Sample {
                step: k,
                time: k as f64 * dt,
                displacement,
                velocity,
            });
        } else {
            if k == n_steps {
                break;
            }
            evolution.advance()?;
        }
    }

    Ok(Trajectory {
        variant: evolution.variant(),
        dt,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble, stable_dt};
    use crate::force::QuadratureRule;
    use crate::material::MaterialModel;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn model() -> MaterialModel {
        MaterialModel::default_nondimensional()
    }

    fn gaussian(amp: f64, beta: f64, center: f64) -> SpaceFn {
        Arc::new(move |x: f64| {
            let v = amp * (-(center - x).powi(2) / beta).exp();
            if v.abs() < 1e-12 {
                0.0
            } else {
                v
            }
        })
    }

    #[test]
    fn kickoff_free_flight_and_oscillator() {
        let zeros = vec![0.0; 3];
        assert!(kickoff(&zeros, &zeros, &zeros, 0.1).iter().all(|&v| v == 0.0));

        let u0 = vec![1.0, -2.0];
        let v0 = vec![0.5, 0.25];
        let free = kickoff(&u0, &v0, &[0.0, 0.0], 0.2);
        assert_relative_eq!(free[0], 1.1, max_relative = 1e-15);
        assert_relative_eq!(free[1], -1.95, max_relative = 1e-15);

        // scalar oscillator: u'' = -w^2 u, matches cos(w dt) to O(dt^4)
        let w = 2.0_f64;
        let dt = 1e-3;
        let u1 = kickoff(&[1.0], &[0.0], &[-w * w], dt)[0];
        assert_abs_diff_eq!(u1, (w * dt).cos(), epsilon = (w * dt).powi(4));
        assert_relative_eq!(u1, 1.0 - (w * dt).powi(2) / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn zero_state_stays_zero() {
        let m = model();
        let grid = Grid1D::new(0.0, 1.0, 0.05, 1, 2).unwrap();
        let rule = QuadratureRule::for_grid(&grid);
        let op = assemble(&m, &grid, &rule);
        let ic = InitialData::resting(Arc::new(|_| 0.0));
        let mut evo = Evolution::linearized(op, &grid, 1.0, &ic, 1e-3, None).unwrap();
        for _ in 0..50 {
            evo.advance().unwrap();
        }
        assert!(evo.displacement().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn layer_nodes_stay_zero_in_homogeneous_runs() {
        let m = model();
        let grid = Grid1D::new(0.0, 1.0, 0.02, 1, 3).unwrap();
        let rule = QuadratureRule::for_grid(&grid);
        let force = NonlocalForce::new(m.clone(), &grid, &rule);
        let ic = InitialData::resting(gaussian(0.005, 0.002, 0.5));
        let dt = 0.5 * stable_dt(&m, grid.spacing(), grid.eps());
        let mut evo = Evolution::nonlinear(force, &ic, dt, None).unwrap();
        for _ in 0..200 {
            evo.advance().unwrap();
            for i in grid.layer_nodes() {
                assert_eq!(evo.displacement().values()[i], 0.0);
            }
        }
    }

    #[test]
    fn initial_data_support_validation() {
        let grid = Grid1D::new(0.0, 1.0, 0.1, 1, 2).unwrap();
        // nonzero on the layer: rejected
        let bad = InitialData::resting(Arc::new(|_| 1.0));
        assert!(bad.validate(&grid).is_err());
        let good = InitialData::resting(gaussian(0.01, 0.001, 0.5));
        assert!(good.validate(&grid).is_ok());
    }

    #[test]
    fn guarded_linear_run_stays_bounded() {
        let m = model();
        let grid = Grid1D::new(0.0, 1.0, 1.0 / 32.0, 1, 2).unwrap();
        let rule = QuadratureRule::for_grid(&grid);
        let op = assemble(&m, &grid, &rule);
        let ic = InitialData::resting(gaussian(0.01, 0.005, 0.5));
        let dt = 0.9 * stable_dt(&m, grid.spacing(), grid.eps());
        let mut evo = Evolution::linearized(op, &grid, 1.0, &ic, dt, None).unwrap();
        let a0 = ic.displacement_at(0.5);
        let mut worst = 0.0_f64;
        for _ in 0..10_000 {
            evo.advance().unwrap();
            let sup = evo
                .displacement()
                .domain_values()
                .iter()
                .fold(0.0_f64, |a, v| a.max(v.abs()));
            worst = worst.max(sup);
        }
        assert!(worst <= 10.0 * a0, "max amplitude {worst} vs initial {a0}");
    }

    #[test]
    fn time_reversal_of_the_linear_scheme() {
        let m = model();
        let grid = Grid1D::new(0.0, 1.0, 0.025, 1, 4).unwrap();
        let rule = QuadratureRule::for_grid(&grid);
        let ic = InitialData::resting(gaussian(0.01, 0.002, 0.5));
        let dt = 0.9 * stable_dt(&m, grid.spacing(), grid.eps());
        let op = assemble(&m, &grid, &rule);
        let mut evo = Evolution::linearized(op, &grid, 1.0, &ic, dt, None).unwrap();
        let u0 = evo.previous().clone();
        let steps = 400;
        for _ in 0..steps {
            evo.advance().unwrap();
        }
        // swap roles and march back
        let op = assemble(&m, &grid, &rule);
        let mut back = Evolution::from_states(
            op,
            &grid,
            1.0,
            evo.displacement().clone(),
            evo.previous().clone(),
            dt,
        )
        .unwrap();
        for _ in 0..steps {
            back.advance().unwrap();
        }
        for i in grid.domain_nodes() {
            assert_abs_diff_eq!(
                back.displacement().values()[i],
                u0.values()[i],
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn tiny_amplitude_models_agree() {
        let m = model();
        let grid = Grid1D::new(0.0, 1.0, 0.02, 1, 5).unwrap();
        let rule = QuadratureRule::for_grid(&grid);
        let ic = InitialData::resting(gaussian(1e-6, 0.002, 0.5));
        let dt = 1e-3;
        let n_steps = 50; // T = 0.05
        let force = NonlocalForce::new(m.clone(), &grid, &rule);
        let npd = run(
            Evolution::nonlinear(force, &ic, dt, None).unwrap(),
            &ic,
            n_steps,
            &[n_steps],
        )
        .unwrap();
        let op = assemble(&m, &grid, &rule);
        let lpd = run(
            Evolution::linearized(op, &grid, 1.0, &ic, dt, None).unwrap(),
            &ic,
            n_steps,
            &[n_steps],
        )
        .unwrap();
        let a = &npd.samples[0].displacement;
        let b = &lpd.samples[0].displacement;
        let sup = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0_f64, f64::max);
        assert!(sup <= 1e-8, "NPD/LPD gap {sup} at tiny amplitude");
    }

    #[test]
    fn zero_horizon_time_returns_initial_state_only() {
        let m = model();
        let grid = Grid1D::new(0.0, 1.0, 0.05, 1, 2).unwrap();
        let rule = QuadratureRule::for_grid(&grid);
        let ic = InitialData::resting(gaussian(0.01, 0.002, 0.5));
        let op = assemble(&m, &grid, &rule);
        let evo = Evolution::linearized(op, &grid, 1.0, &ic, 1e-3, None).unwrap();
        let traj = run(evo, &ic, 0, &[0, 10, 20]).unwrap();
        assert_eq!(traj.samples.len(), 1);
        assert_eq!(traj.samples[0].step, 0);
        let x = grid.coord(grid.first_domain_node() + 5);
        assert_eq!(
            traj.samples[0].displacement.values()[grid.first_domain_node() + 5],
            ic.displacement_at(x)
        );
    }

    #[test]
    fn pinned_string_cosine_mode() {
        let m = model();
        let grid = Grid1D::new(0.0, 1.0, 0.01, 1, 1).unwrap();
        let ic = InitialData::resting(Arc::new(|x: f64| (std::f64::consts::PI * x).sin()));
        let dt = 0.005;
        let n_steps = 100; // t = 0.5
        let evo = Evolution::local_wave(m.elastic_modulus(), &grid, 1.0, &ic, dt, None).unwrap();
        let traj = run(evo, &ic, n_steps, &[n_steps]).unwrap();
        let s = &traj.samples[0];
        let mut worst = 0.0_f64;
        for i in grid.domain_nodes() {
            let x = grid.coord(i);
            let exact = (std::f64::consts::PI * s.time).cos() * (std::f64::consts::PI * x).sin();
            worst = worst.max((s.displacement.values()[i] - exact).abs());
        }
        assert!(worst < 1e-3, "sup error {worst}");
    }

    #[test]
    fn nonlinear_step_consistency_in_dt() {
        let m = model();
        let grid = Grid1D::new(0.0, 1.0, 0.02, 1, 5).unwrap();
        let rule = QuadratureRule::for_grid(&grid);
        let ic = InitialData::resting(gaussian(0.005, 0.003, 0.5));
        let tau = 1e-3;
        let t_final = 0.08;
        let mut finals = Vec::new();
        for &mult in &[4.0_f64, 2.0, 1.0] {
            let dt = mult * tau;
            let n = (t_final / dt).round() as usize;
            let force = NonlocalForce::new(m.clone(), &grid, &rule);
            let traj = run(
                Evolution::nonlinear(force, &ic, dt, None).unwrap(),
                &ic,
                n,
                &[n],
            )
            .unwrap();
            finals.push(traj.samples[0].displacement.clone());
        }
        let diff = |a: &NodalField, b: &NodalField| {
            a.values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0_f64, f64::max)
        };
        let e1 = diff(&finals[0], &finals[1]);
        let e2 = diff(&finals[1], &finals[2]);
        let slope = (e1 / e2).log2();
        assert!(slope >= 1.8, "dt-consistency slope {slope} ({e1}, {e2})");
    }

    #[test]
    fn velocity_samples_use_centered_differences() {
        let m = model();
        let grid = Grid1D::new(0.0, 1.0, 0.01, 1, 1).unwrap();
        let ic = InitialData::resting(Arc::new(|x: f64| (std::f64::consts::PI * x).sin()));
        let dt = 0.004;
        let n_steps = 50; // t = 0.2
        let evo = Evolution::local_wave(m.elastic_modulus(), &grid, 1.0, &ic, dt, None).unwrap();
        let traj = run(evo, &ic, n_steps, &[0, n_steps]).unwrap();
        // v(t, x) = -pi sin(pi t) sin(pi x)
        assert!(traj.samples[0]
            .velocity
            .values()
            .iter()
            .all(|&v| v == 0.0));
        let s = &traj.samples[1];
        let i = grid.first_domain_node() + grid.domain_node_count() / 2;
        let x = grid.coord(i);
        let exact = -std::f64::consts::PI
            * (std::f64::consts::PI * s.time).sin()
            * (std::f64::consts::PI * x).sin();
        assert_abs_diff_eq!(s.velocity.values()[i], exact, epsilon = 1e-2);
    }
}
