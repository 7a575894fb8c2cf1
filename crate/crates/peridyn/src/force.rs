//! Nonlocal force densities: the nonlinear bond force, its linearization,
//! and the local elastic reference operator.
//!
//! Discrete forces integrate element by element with Gauss-Legendre points;
//! the horizon decomposes into panels whose boundaries include every mesh
//! element boundary, the center node, and the horizon endpoints, so the
//! integrand is smooth on every panel and no quadrature point ever
//! coincides with the center node. Panels, influence values, and basis
//! values depend only on the node's offset class within its element, so one
//! precomputed stencil per class serves every node of `K`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::material::MaterialModel;
use crate::quadrature::{adaptive_gauss_kronrod, GaussLegendre};

/// Relative tolerance of the dense (reference) force quadratures.
const DENSE_REL_TOL: f64 = 1e-12;

/// Bond strain `S(y, x; u) = (u(y) - u(x)) / |y - x|`.
pub fn strain<F: Fn(f64) -> f64>(u: F, y: f64, x: f64) -> Result<f64> {
    if y == x {
        return Err(Error::Precondition(
            "strain is undefined for coincident points".into(),
        ));
    }
    Ok((u(y) - u(x)) / (y - x).abs())
}

/// Per-element Gauss-Legendre rule used for all discrete force integrals.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    points_per_element: usize,
    gl: GaussLegendre,
}

impl QuadratureRule {
    pub fn new(points_per_element: usize) -> Self {
        QuadratureRule {
            points_per_element,
            gl: GaussLegendre::new(points_per_element),
        }
    }

    /// Default order `max(p + 2, 4)`: integrands are smooth within panels,
    /// so a short Gauss rule keeps quadrature error far below the
    /// consistency errors under study.
    pub fn for_grid(grid: &Grid1D) -> Self {
        Self::new((grid.p() + 2).max(4))
    }

    pub fn points_per_element(&self) -> usize {
        self.points_per_element
    }
}

struct StencilPoint {
    weight: f64,
    /// `J(|y - x_i| / eps)` at the point.
    j_val: f64,
    /// `1 / |y - x_i|`; finite because the center is a panel boundary.
    inv_dist: f64,
    /// Index offset from the center node to the first node of the element
    /// containing the point.
    elem_node_offset: isize,
    /// Basis values of the element's `p + 1` nodes at the point.
    basis: Vec<f64>,
}

/// Precomputed quadrature data for one horizon, shared by every node of the
/// same offset class (translation invariance on the uniform mesh).
pub struct HorizonStencil {
    points: Vec<StencilPoint>,
}

impl HorizonStencil {
    fn build(grid: &Grid1D, model: &MaterialModel, rule: &QuadratureRule, class: usize) -> Self {
        let eps = grid.eps();
        let rep = grid.first_domain_node() + class;
        let x_rep = grid.coord(rep);

        // panel boundaries: horizon endpoints, the center, and every element
        // boundary strictly inside the horizon
        let mut breaks = vec![-eps, 0.0, eps];
        for e in 0..=grid.total_elements() {
            let t = grid.coord(e * grid.p()) - x_rep;
            if t > -eps && t < eps {
                breaks.push(t);
            }
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let tol = 1e-12 * eps;
        breaks.dedup_by(|a, b| (*a - *b).abs() <= tol);

        let mut points = Vec::new();
        for pair in breaks.windows(2) {
            let (t0, t1) = (pair[0], pair[1]);
            if t1 - t0 <= tol {
                continue;
            }
            let elem = grid.element_of(x_rep + 0.5 * (t0 + t1));
            let first = grid.element_first_node(elem);
            for (t, w) in rule.gl.mapped(t0, t1) {
                debug_assert!(t != 0.0, "quadrature point on the center node");
                let y = x_rep + t;
                let basis = (0..=grid.p())
                    .map(|l| grid.basis_eval(first + l, y))
                    .collect();
                points.push(StencilPoint {
                    weight: w,
                    j_val: model.influence_eval(t.abs() / eps),
                    inv_dist: 1.0 / t.abs(),
                    elem_node_offset: first as isize - rep as isize,
                    basis,
                });
            }
        }
        HorizonStencil { points }
    }
}

/// Evaluator of the discrete nonlocal forces on a grid.
pub struct NonlocalForce {
    model: MaterialModel,
    grid: Arc<Grid1D>,
    stencils: Vec<HorizonStencil>,
    fp0: f64,
    scale: f64,
}

impl NonlocalForce {
    pub fn new(model: MaterialModel, grid: &Arc<Grid1D>, rule: &QuadratureRule) -> Self {
        let stencils = (0..grid.p())
            .map(|c| HorizonStencil::build(grid, &model, rule, c))
            .collect();
        let eps = grid.eps();
        let fp0 = model.potential_deriv(0.0);
        NonlocalForce {
            model,
            grid: Arc::clone(grid),
            stencils,
            fp0,
            scale: 2.0 / (eps * eps),
        }
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn model(&self) -> &MaterialModel {
        &self.model
    }

    /// Nonlinear force density at domain node `i` for the extended field.
    pub fn nonlinear_at(&self, u: &[f64], i: usize) -> f64 {
        debug_assert!(self.grid.is_domain_node(i));
        let st = &self.stencils[i % self.grid.p()];
        let ui = u[i];
        let mut acc = 0.0;
        for pt in &st.points {
            let base = (i as isize + pt.elem_node_offset) as usize;
            let mut uy = 0.0;
            for (l, &phi) in pt.basis.iter().enumerate() {
                uy += phi * u[base + l];
            }
            let s = (uy - ui) * pt.inv_dist;
            let fp = self.model.potential_deriv(s * s / pt.inv_dist);
            acc += pt.weight * pt.j_val * fp * s;
        }
        self.scale * acc
    }

    /// Linearized force density at domain node `i`; exactly linear in the
    /// field values.
    pub fn linearized_at(&self, u: &[f64], i: usize) -> f64 {
        debug_assert!(self.grid.is_domain_node(i));
        let st = &self.stencils[i % self.grid.p()];
        let ui = u[i];
        let mut acc = 0.0;
        for pt in &st.points {
            let base = (i as isize + pt.elem_node_offset) as usize;
            let mut uy = 0.0;
            for (l, &phi) in pt.basis.iter().enumerate() {
                uy += phi * u[base + l];
            }
            acc += pt.weight * pt.j_val * (uy - ui) * pt.inv_dist;
        }
        self.scale * self.fp0 * acc
    }

    /// Force sweep over all of `K`; `out` must have `domain_node_count`
    /// entries. Nodes evaluate independently and in parallel.
    pub fn sweep(&self, u: &[f64], nonlinear: bool, out: &mut [f64]) {
        let first = self.grid.first_domain_node();
        debug_assert_eq!(out.len(), self.grid.domain_node_count());
        out.par_iter_mut().enumerate().for_each(|(k, o)| {
            let i = first + k;
            *o = if nonlinear {
                self.nonlinear_at(u, i)
            } else {
                self.linearized_at(u, i)
            };
        });
    }

    /// Linearized couplings `a_bar_ij` of row `i` for every `j != i` in the
    /// horizon, as `(global node index, coefficient)` sorted by index.
    pub fn coupling_row(&self, i: usize) -> Vec<(usize, f64)> {
        let w = self.grid.m() * self.grid.p() + self.grid.p();
        let mut buf = vec![0.0; 2 * w + 1];
        let st = &self.stencils[i % self.grid.p()];
        for pt in &st.points {
            let c = pt.weight * pt.j_val * pt.inv_dist * self.scale * self.fp0;
            for (l, &phi) in pt.basis.iter().enumerate() {
                let off = pt.elem_node_offset + l as isize + w as isize;
                buf[off as usize] += c * phi;
            }
        }
        buf.iter()
            .enumerate()
            .filter(|&(off, &v)| off != w && v != 0.0)
            .map(|(off, &v)| ((i as isize + off as isize - w as isize) as usize, v))
            .collect()
    }
}

/// Dense-quadrature (reference) evaluation of the continuum nonlinear force
/// at `x` for an analytic displacement.
pub fn force_nonlinear_dense<F: Fn(f64) -> f64>(
    model: &MaterialModel,
    eps: f64,
    u: &F,
    x: f64,
) -> f64 {
    let ux = u(x);
    let integrand = |y: f64| {
        let d = (y - x).abs();
        let s = (u(y) - ux) / d;
        model.influence_eval(d / eps) * model.potential_deriv(d * s * s) * s
    };
    let left = adaptive_gauss_kronrod(&integrand, x - eps, x, DENSE_REL_TOL);
    let right = adaptive_gauss_kronrod(&integrand, x, x + eps, DENSE_REL_TOL);
    2.0 / (eps * eps) * (left + right)
}

/// Dense-quadrature evaluation of the continuum linearized force at `x`.
pub fn force_linearized_dense<F: Fn(f64) -> f64>(
    model: &MaterialModel,
    eps: f64,
    u: &F,
    x: f64,
) -> f64 {
    let ux = u(x);
    let fp0 = model.potential_deriv(0.0);
    let integrand = |y: f64| {
        let d = (y - x).abs();
        model.influence_eval(d / eps) * fp0 * (u(y) - ux) / d
    };
    let left = adaptive_gauss_kronrod(&integrand, x - eps, x, DENSE_REL_TOL);
    let right = adaptive_gauss_kronrod(&integrand, x, x + eps, DENSE_REL_TOL);
    2.0 / (eps * eps) * (left + right)
}

/// Local elastic reference: `EC (u_{i-1} - 2 u_i + u_{i+1}) / dx^2` on a
/// uniform grid of spacing `dx`. Boundary indices are rejected.
pub fn force_local(modulus: f64, values: &[f64], dx: f64, i: usize) -> Result<f64> {
    if i == 0 || i + 1 >= values.len() {
        return Err(Error::Precondition(format!(
            "second difference needs interior index, got {i} of {}",
            values.len()
        )));
    }
    Ok(modulus * (values[i - 1] - 2.0 * values[i] + values[i + 1]) / (dx * dx))
}

/// Force pairs compared by [`consistency_force_gap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapVariant {
    /// Dense nonlinear vs dense linearized force of the analytic field.
    NonlinearVsLinearized,
    /// Dense linearized force vs `EC u_xx`.
    LinearizedVsLocal,
    /// Dense nonlinear force vs `EC u_xx`.
    NonlinearVsLocal,
    /// Discrete nonlinear force of the interpolant vs the dense nonlinear
    /// force of the analytic field.
    InterpVsExactNonlinear,
    /// Discrete linearized force of the interpolant vs the dense linearized
    /// force of the analytic field.
    InterpVsExactLinearized,
}

/// Sup over eligible nodes of the force difference for the chosen pair.
///
/// Eligible nodes are the `K` nodes at distance at least
/// `max(margin, eps)` from both interfaces; a fixed `margin` keeps the node
/// set identical across a horizon sweep.
pub fn consistency_force_gap<F, G>(
    model: &MaterialModel,
    grid: &Arc<Grid1D>,
    rule: &QuadratureRule,
    u: &F,
    uxx: &G,
    variant: GapVariant,
    margin: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
    G: Fn(f64) -> f64 + Sync,
{
    let eps = grid.eps();
    let margin = margin.max(eps);
    let lo = grid.a() + margin;
    let hi = grid.b() - margin;
    let nodes: Vec<usize> = grid
        .domain_nodes()
        .filter(|&i| grid.coord(i) >= lo - 1e-12 && grid.coord(i) <= hi + 1e-12)
        .collect();
    if nodes.is_empty() {
        return Err(Error::Precondition(
            "no interior nodes at the requested margin".into(),
        ));
    }

    let needs_discrete = matches!(
        variant,
        GapVariant::InterpVsExactNonlinear | GapVariant::InterpVsExactLinearized
    );
    let (force, field) = if needs_discrete {
        let f = NonlocalForce::new(model.clone(), grid, rule);
        let field = grid.interpolate(u);
        (Some(f), Some(field))
    } else {
        (None, None)
    };

    let modulus = model.elastic_modulus();
    let gap = nodes
        .par_iter()
        .map(|&i| {
            let x = grid.coord(i);
            let d = match variant {
                GapVariant::NonlinearVsLinearized => {
                    force_nonlinear_dense(model, eps, u, x)
                        - force_linearized_dense(model, eps, u, x)
                }
                GapVariant::LinearizedVsLocal => {
                    force_linearized_dense(model, eps, u, x) - modulus * uxx(x)
                }
                GapVariant::NonlinearVsLocal => {
                    force_nonlinear_dense(model, eps, u, x) - modulus * uxx(x)
                }
                GapVariant::InterpVsExactNonlinear => {
                    let f = force.as_ref().unwrap();
                    f.nonlinear_at(field.as_ref().unwrap().values(), i)
                        - force_nonlinear_dense(model, eps, u, x)
                }
                GapVariant::InterpVsExactLinearized => {
                    let f = force.as_ref().unwrap();
                    f.linearized_at(field.as_ref().unwrap().values(), i)
                        - force_linearized_dense(model, eps, u, x)
                }
            };
            d.abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(gap)
}
