//! Error norms between solutions on nested grids and convergence-rate
//! estimators.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, NodalField};

/// One error measurement between a pair of solutions.
#[derive(Debug, Clone)]
pub struct ErrorRecord {
    pub step: usize,
    pub time: f64,
    pub l2_error: f64,
    pub sup_error: f64,
    pub pair: String,
}

/// Samples a fine-grid field at the nodes of a nested coarse grid.
///
/// Every coarse domain node must coincide with a fine node (within 1e-12);
/// coarse layer nodes without a fine counterpart restrict to zero, which is
/// exact for fields under homogeneous volume constraints.
pub fn restrict_to_coarse(fine: &NodalField, coarse: &Arc<Grid1D>) -> Result<NodalField> {
    let fg = fine.grid();
    let mut out = NodalField::zeros(coarse);
    let x0 = fg.coord(0);
    let spacing = fg.spacing();
    for i in 0..coarse.node_count() {
        let x = coarse.coord(i);
        let j = ((x - x0) / spacing).round();
        let matched = j >= 0.0 && (j as usize) < fg.node_count() && {
            let j = j as usize;
            (fg.coord(j) - x).abs() <= 1e-12
        };
        if matched {
            out.values_mut()[i] = fine.values()[j as usize];
        } else if coarse.is_domain_node(i) {
            return Err(Error::Precondition(format!(
                "grids are not nested: coarse node at {x} has no fine counterpart"
            )));
        }
    }
    Ok(out)
}

/// Pointwise difference of two fields on the same grid.
pub fn field_difference(a: &NodalField, b: &NodalField) -> Result<NodalField> {
    if !Arc::ptr_eq(a.grid(), b.grid()) && a.grid().node_count() != b.grid().node_count() {
        return Err(Error::Precondition(
            "fields live on different grids".into(),
        ));
    }
    let values = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x - y)
        .collect();
    NodalField::from_values(a.grid(), values)
}

/// Composite-trapezoid `L^2(D)` norm of the nodal values over `K`.
pub fn norm_l2(field: &NodalField) -> f64 {
    let vals = field.domain_values();
    let dx = field.grid().spacing();
    let n = vals.len();
    if n < 2 {
        return vals.first().map(|v| v.abs()).unwrap_or(0.0);
    }
    let mut acc = 0.5 * (vals[0] * vals[0] + vals[n - 1] * vals[n - 1]);
    for &v in &vals[1..n - 1] {
        acc += v * v;
    }
    (acc * dx).sqrt()
}

/// Max of `|values|` over `K`.
pub fn norm_sup(field: &NodalField) -> f64 {
    field
        .domain_values()
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
}

fn positive(e: f64, what: &str) -> Result<f64> {
    if e <= 0.0 || !e.is_finite() {
        return Err(Error::Precondition(format!(
            "{what} must be positive and finite, got {e}; coincident solutions or an ordering bug"
        )));
    }
    Ok(e)
}

/// Convergence rate from consecutive nested-mesh differences with a common
/// refinement ratio `r`: `(ln e12 - ln e23) / ln r`.
pub fn rate_from_triplet(e12: f64, e23: f64, r: f64) -> Result<f64> {
    positive(e12, "error e12")?;
    positive(e23, "error e23")?;
    if r <= 1.0 || r.is_nan() {
        return Err(Error::Precondition(format!(
            "refinement ratio must exceed one, got {r}"
        )));
    }
    Ok((e12.ln() - e23.ln()) / r.ln())
}

/// Horizon-convergence rate:
/// `(ln |u_eps1 - u_eps2| - ln |u_eps2 - u_eps3|) / (ln eps2 - ln eps3)`.
pub fn rate_from_eps_pair(e12: f64, e23: f64, eps2: f64, eps3: f64) -> Result<f64> {
    positive(e12, "error e12")?;
    positive(e23, "error e23")?;
    if eps2 <= eps3 || eps3 <= 0.0 || eps2.is_nan() || eps3.is_nan() {
        return Err(Error::Precondition(format!(
            "need eps2 > eps3 > 0, got {eps2}, {eps3}"
        )));
    }
    Ok((e12.ln() - e23.ln()) / (eps2.ln() - eps3.ln()))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return Err(Error::Precondition(format!(
            "need at least two matched points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let mut lx = Vec::with_capacity(xs.len());
    let mut ly = Vec::with_capacity(ys.len());
    for (&x, &y) in xs.iter().zip(ys) {
        positive(x, "abscissa")?;
        positive(y, "ordinate")?;
        lx.push(x.ln());
        ly.push(y.ln());
    }
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    Ok(num / den)
}
