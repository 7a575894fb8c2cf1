//! Assembly of the linearized stiffness operator, its Stieltjes/M-matrix
//! structure, spectral bounds, and the stable timestep of the central
//! difference scheme.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::force::{NonlocalForce, QuadratureRule};
use crate::grid::Grid1D;
use crate::material::MaterialModel;

/// Largest dimension accepted by the dense eigensolver.
pub const DENSE_EIG_GUARD: usize = 1024;

/// Symmetric banded matrix `A` restricted to the domain nodes `K`, stored by
/// diagonal offset. Couplings into the boundary layer are kept separately so
/// nonzero nonlocal Dirichlet data can be folded into a load vector.
pub struct BandedSymmetricOperator {
    dim: usize,
    half_bandwidth: usize,
    /// `diags[d][i]` holds the entry `(i, i + d)`, `d = 0..=half_bandwidth`.
    diags: Vec<Vec<f64>>,
    /// `(row, global layer node, a_bar)` triples, sorted by row.
    boundary: Vec<(usize, usize, f64)>,
}

impl BandedSymmetricOperator {
    /// Builds the operator from explicit diagonals (`diags[0]` is the main
    /// diagonal). Intended for hand-built matrices in tests and checks.
    pub fn from_diagonals(diags: Vec<Vec<f64>>) -> Result<Self> {
        if diags.is_empty() || diags[0].is_empty() {
            return Err(Error::Precondition("empty matrix".into()));
        }
        let dim = diags[0].len();
        for (d, diag) in diags.iter().enumerate() {
            if diag.len() != dim - d {
                return Err(Error::Precondition(format!(
                    "diagonal {d} has {} entries, expected {}",
                    diag.len(),
                    dim - d
                )));
            }
        }
        Ok(BandedSymmetricOperator {
            dim,
            half_bandwidth: diags.len() - 1,
            diags,
            boundary: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_bandwidth(&self) -> usize {
        self.half_bandwidth
    }

    /// Entry `a_ij` (symmetric lookup; zero beyond the bandwidth).
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.half_bandwidth {
            0.0
        } else {
            self.diags[d][lo]
        }
    }

    /// `out = A u`.
    pub fn matvec(&self, u: &[f64], out: &mut [f64]) {
        assert_eq!(u.len(), self.dim);
        assert_eq!(out.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = self.diags[0][i] * u[i];
            for d in 1..=self.half_bandwidth {
                if i + d < self.dim {
                    acc += self.diags[d][i] * u[i + d];
                }
                if i >= d {
                    acc += self.diags[d][i - d] * u[i - d];
                }
            }
            *o = acc;
        }
    }

    /// Folds prescribed boundary-layer displacements into the load vector:
    /// `b_i += sum_{j in K_eps} a_bar_ij u_hat_j`. `boundary_values` is
    /// indexed by global grid node.
    pub fn apply_nonlocal_dirichlet(
        &self,
        boundary_values: &[f64],
        load: &mut [f64],
    ) -> Result<()> {
        if load.len() != self.dim {
            return Err(Error::Precondition(format!(
                "load vector has {} entries for a {}-dim operator",
                load.len(),
                self.dim
            )));
        }
        for &(row, node, v) in &self.boundary {
            let val = *boundary_values.get(node).ok_or_else(|| {
                Error::Precondition(format!(
                    "boundary values missing layer node {node} (got {} values)",
                    boundary_values.len()
                ))
            })?;
            load[row] += v * val;
        }
        Ok(())
    }

    /// Max over rows of `|a_ii| + sum_{j != i} |a_ij|`; an upper bound for
    /// the largest eigenvalue of `-A`.
    pub fn gershgorin_bound(&self) -> f64 {
        let mut best = 0.0_f64;
        for i in 0..self.dim {
            let mut row = self.diags[0][i].abs();
            for d in 1..=self.half_bandwidth {
                if i + d < self.dim {
                    row += self.diags[d][i].abs();
                }
                if i >= d {
                    row += self.diags[d][i - d].abs();
                }
            }
            best = best.max(row);
        }
        best
    }

    /// Eigenvalues of `-A`, ascending, from a dense symmetric solver.
    /// Guarded to desk-scale dimensions.
    pub fn exact_spectrum(&self) -> Result<Vec<f64>> {
        if self.dim > DENSE_EIG_GUARD {
            return Err(Error::DimensionGuard {
                dim: self.dim,
                guard: DENSE_EIG_GUARD,
            });
        }
        let dense = DMatrix::from_fn(self.dim, self.dim, |i, j| -self.entry(i, j));
        let eig = dense.symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(vals)
    }

    /// Eigenvalues plus eigenvectors of `-A` (columns), same guard.
    pub fn exact_eigenpairs(&self) -> Result<(Vec<f64>, DMatrix<f64>)> {
        if self.dim > DENSE_EIG_GUARD {
            return Err(Error::DimensionGuard {
                dim: self.dim,
                guard: DENSE_EIG_GUARD,
            });
        }
        let dense = DMatrix::from_fn(self.dim, self.dim, |i, j| -self.entry(i, j));
        let eig = dense.symmetric_eigen();
        let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        Ok((vals, eig.eigenvectors))
    }

    /// Verifies the Stieltjes structure of `-A`: nonnegative `a_ij` off the
    /// diagonal, diagonal dominance in rows, and (by the symmetric storage)
    /// symmetry. Returns the violating pairs; empty on success.
    pub fn stieltjes_check(&self) -> StieltjesReport {
        let scale = (0..self.dim)
            .map(|i| self.diags[0][i].abs())
            .fold(0.0_f64, f64::max)
            .max(1.0);
        let tol = 1e-12 * scale;
        let mut violations = Vec::new();
        for i in 0..self.dim {
            let mut off_sum = 0.0;
            for d in 1..=self.half_bandwidth {
                if i + d < self.dim {
                    let v = self.diags[d][i];
                    off_sum += v.abs();
                    if v < -tol {
                        violations.push(StieltjesViolation {
                            row: i,
                            col: i + d,
                            magnitude: -v,
                            kind: ViolationKind::PositiveOffDiagonal,
                        });
                    }
                }
                if i >= d {
                    off_sum += self.diags[d][i - d].abs();
                }
            }
            let deficit = -self.diags[0][i] - off_sum;
            if deficit < -tol {
                violations.push(StieltjesViolation {
                    row: i,
                    col: i,
                    magnitude: -deficit,
                    kind: ViolationKind::DiagonalDominance,
                });
            }
        }
        StieltjesReport { violations }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `-A` has a positive off-diagonal entry (`a_ij < 0`, `j != i`).
    PositiveOffDiagonal,
    /// Row is not diagonally dominant in the M-matrix sense.
    DiagonalDominance,
}

#[derive(Debug, Clone)]
pub struct StieltjesViolation {
    pub row: usize,
    pub col: usize,
    pub magnitude: f64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone)]
pub struct StieltjesReport {
    pub violations: Vec<StieltjesViolation>,
}

impl StieltjesReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Assembles the linearized operator restricted to `K`. Off-diagonals come
/// from the shared per-element quadrature; the diagonal is the negative row
/// sum over all couplings in `K` and `K_eps`, so rigid translations produce
/// no force by construction and the singular self-integral never appears.
pub fn assemble(
    model: &MaterialModel,
    grid: &Arc<Grid1D>,
    rule: &QuadratureRule,
) -> BandedSymmetricOperator {
    let force = NonlocalForce::new(model.clone(), grid, rule);
    let first = grid.first_domain_node();
    let dim = grid.domain_node_count();
    let w = grid.m() * grid.p() + grid.p();

    let rows: Vec<Vec<(usize, f64)>> = (0..dim)
        .into_par_iter()
        .map(|li| force.coupling_row(first + li))
        .collect();

    let mut diags: Vec<Vec<f64>> = (0..=w).map(|d| vec![0.0; dim - d]).collect();
    let mut boundary = Vec::new();
    for (li, row) in rows.iter().enumerate() {
        for &(gj, v) in row {
            if grid.is_domain_node(gj) {
                let lj = gj - first;
                if lj > li {
                    diags[lj - li][li] = v;
                }
            } else {
                boundary.push((li, gj, v));
            }
        }
    }
    // diagonal: negative sum of the symmetrized stored row plus the layer
    // couplings, matching the row-sum definition of the matrix
    for i in 0..dim {
        let mut sum = 0.0;
        for d in 1..=w {
            if i + d < dim {
                sum += diags[d][i];
            }
            if i >= d {
                sum += diags[d][i - d];
            }
        }
        for &(row, _, v) in &boundary {
            if row == i {
                sum += v;
            }
        }
        diags[0][i] = -sum;
    }
    BandedSymmetricOperator {
        dim,
        half_bandwidth: w,
        diags,
        boundary,
    }
}

/// Timestep bound of the central difference scheme for the linearized model:
/// `dt <= h / sqrt(EC + 2 f'(0) M h^2 / eps^2)`, scaled by `sqrt(rho)` for
/// densities other than one (the bound controls `dt^2 lambda / rho`).
pub fn stable_dt(model: &MaterialModel, h: f64, eps: f64) -> f64 {
    let modulus = model.elastic_modulus();
    let stiffening = 2.0 * model.potential_deriv(0.0) * model.influence_max() * h * h / (eps * eps);
    model.density().sqrt() * h / (modulus + stiffening).sqrt()
}

/// Classical CFL bound of the local wave equation at node spacing `h`.
pub fn cfl_local_dt(model: &MaterialModel, h: f64) -> f64 {
    h / model.wave_speed()
}

/// Timestep bounds and spectral data for one assembled grid.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub n_elements: usize,
    pub m: usize,
    pub p: usize,
    pub h: f64,
    pub eps: f64,
    pub gershgorin: f64,
    pub lambda_max: Option<f64>,
    pub lambda_min: Option<f64>,
    pub dt_theorem: f64,
    pub dt_spectral: Option<f64>,
    pub dt_cfl_local: f64,
    pub stieltjes_violations: usize,
}

/// Assembles the grid and gathers every stability quantity; the exact
/// spectral columns are skipped above the dense-eigensolver guard.
pub fn stability_report(
    model: &MaterialModel,
    grid: &Arc<Grid1D>,
    rule: &QuadratureRule,
) -> StabilityReport {
    let op = assemble(model, grid, rule);
    let spectrum = op.exact_spectrum().ok();
    let (lambda_max, lambda_min) = match &spectrum {
        Some(vals) => (vals.last().copied(), vals.first().copied()),
        None => (None, None),
    };
    let dt_spectral = lambda_max.map(|l| 2.0 * (model.density() / l).sqrt());
    StabilityReport {
        n_elements: grid.domain_elements(),
        m: grid.m(),
        p: grid.p(),
        h: grid.h(),
        eps: grid.eps(),
        gershgorin: op.gershgorin_bound(),
        lambda_max,
        lambda_min,
        dt_theorem: stable_dt(model, grid.spacing(), grid.eps()),
        dt_spectral,
        dt_cfl_local: cfl_local_dt(model, grid.spacing()),
        stieltjes_violations: op.stieltjes_check().violations.len(),
    }
}
