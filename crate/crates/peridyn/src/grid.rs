//! Uniform 1-D mesh with a nonlocal boundary layer, order-`p` local Lagrange
//! bases, interpolation, and extension of nodal data to continuum fields.
//!
//! The bar `[a, b]` is split into elements of size `h`; the layer on each
//! side holds exactly `m` elements so the horizon `eps = m h` is always
//! meshed. Nodes sit at spacing `h / p` (element-internal Lagrange points for
//! `p > 1`). Node coordinates are always formed as `a + k * (h/p)` from an
//! integer `k`, never by accumulation, so nested meshes coincide bit-stably.

use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug)]
pub struct Grid1D {
    a: f64,
    b: f64,
    h: f64,
    p: usize,
    m: usize,
    spacing: f64,
    domain_elements: usize,
    coords: Vec<f64>,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, h: f64, p: usize, m: usize) -> Result<Arc<Self>> {
        if b <= a || b.is_nan() || a.is_nan() {
            return Err(Error::InvalidGrid(format!("need b > a, got [{a}, {b}]")));
        }
        if h <= 0.0 || !h.is_finite() {
            return Err(Error::InvalidGrid(format!("mesh size must be positive, got {h}")));
        }
        if p < 1 {
            return Err(Error::InvalidGrid("interpolation order must be at least 1".into()));
        }
        if m < 1 {
            return Err(Error::InvalidGrid("horizon must span at least one element".into()));
        }
        let q = (b - a) / h;
        let rounded = q.round();
        if (q - rounded).abs() > 1e-12 * rounded.max(1.0) || rounded < 1.0 {
            return Err(Error::InvalidGrid(format!(
                "domain length {} is not an integral number of elements of size {h}",
                b - a
            )));
        }
        let domain_elements = rounded as usize;
        if (m as f64) * h >= 0.5 * (b - a) {
            return Err(Error::InvalidGrid(format!(
                "horizon {} leaves no interior in a domain of length {}",
                m as f64 * h,
                b - a
            )));
        }
        let spacing = h / p as f64;
        let total_nodes = p * (domain_elements + 2 * m) + 1;
        let offset = (m * p) as isize;
        let coords = (0..total_nodes)
            .map(|k| a + (k as isize - offset) as f64 * spacing)
            .collect();
        Ok(Arc::new(Grid1D {
            a,
            b,
            h,
            p,
            m,
            spacing,
            domain_elements,
            coords,
        }))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Horizon `eps = m h`, exact by construction.
    pub fn eps(&self) -> f64 {
        self.m as f64 * self.h
    }

    /// Distance between consecutive nodes, `h / p`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.coords[i]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Elements in `[a, b]`.
    pub fn domain_elements(&self) -> usize {
        self.domain_elements
    }

    /// Elements including both boundary layers.
    pub fn total_elements(&self) -> usize {
        self.domain_elements + 2 * self.m
    }

    /// Index of the first node of `K` (the node at `x = a`; interface nodes
    /// belong to `K`).
    pub fn first_domain_node(&self) -> usize {
        self.m * self.p
    }

    /// Index of the last node of `K` (the node at `x = b`).
    pub fn last_domain_node(&self) -> usize {
        self.m * self.p + self.domain_elements * self.p
    }

    /// Contiguous index range of `K`.
    pub fn domain_nodes(&self) -> std::ops::RangeInclusive<usize> {
        self.first_domain_node()..=self.last_domain_node()
    }

    pub fn domain_node_count(&self) -> usize {
        self.last_domain_node() - self.first_domain_node() + 1
    }

    pub fn is_domain_node(&self, i: usize) -> bool {
        i >= self.first_domain_node() && i <= self.last_domain_node()
    }

    /// Nodes of the closure of the nonlocal boundary, excluding the two
    /// interface nodes (those are assigned to `K`).
    pub fn is_layer_node(&self, i: usize) -> bool {
        i < self.coords.len() && !self.is_domain_node(i)
    }

    pub fn layer_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(|&i| self.is_layer_node(i))
    }

    /// Element containing `x`, clamped to the meshed region.
    pub fn element_of(&self, x: f64) -> usize {
        let raw = ((x - self.coords[0]) / self.h).floor();
        let max = (self.total_elements() - 1) as f64;
        raw.clamp(0.0, max) as usize
    }

    pub fn element_bounds(&self, e: usize) -> (f64, f64) {
        (self.coords[e * self.p], self.coords[(e + 1) * self.p])
    }

    /// First node index of element `e`; the element owns nodes
    /// `e*p ..= e*p + p`.
    pub fn element_first_node(&self, e: usize) -> usize {
        e * self.p
    }

    /// Shape function of node `i` at `x`; zero outside the elements adjacent
    /// to the node.
    pub fn basis_eval(&self, i: usize, x: f64) -> f64 {
        let e = self.element_of(x);
        let first = e * self.p;
        if i < first || i > first + self.p {
            return 0.0;
        }
        let (xl, _) = self.element_bounds(e);
        let xi = (x - xl) / self.h;
        lagrange_local(self.p, i - first, xi)
    }

    /// Nodal interpolant `I_h[g]`.
    pub fn interpolate<F: Fn(f64) -> f64>(self: &Arc<Self>, g: F) -> NodalField {
        let values = self.coords.iter().map(|&x| g(x)).collect();
        NodalField {
            grid: Arc::clone(self),
            values,
        }
    }
}

/// Local Lagrange polynomial of order `p` for local node `l` (nodes at
/// `l / p` in the reference element `[0, 1]`).
fn lagrange_local(p: usize, l: usize, xi: f64) -> f64 {
    let pf = p as f64;
    let mut out = 1.0;
    for k in 0..=p {
        if k != l {
            out *= (xi - k as f64 / pf) / ((l as f64 - k as f64) / pf);
        }
    }
    out
}

/// One real value per node of a grid; extendable to a continuum function via
/// the grid's Lagrange basis.
#[derive(Debug, Clone)]
pub struct NodalField {
    grid: Arc<Grid1D>,
    values: Vec<f64>,
}

impl NodalField {
    pub fn zeros(grid: &Arc<Grid1D>) -> Self {
        NodalField {
            grid: Arc::clone(grid),
            values: vec![0.0; grid.node_count()],
        }
    }

    pub fn from_values(grid: &Arc<Grid1D>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::Precondition(format!(
                "field has {} values for a grid with {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        Ok(NodalField {
            grid: Arc::clone(grid),
            values,
        })
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Values at the `K` nodes (contiguous).
    pub fn domain_values(&self) -> &[f64] {
        &self.values[self.grid.first_domain_node()..=self.grid.last_domain_node()]
    }

    /// Extension `E[{u_i}](x)` of the nodal data. Exact (bit-identical) at
    /// node coordinates.
    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        let j = ((x - g.coord(0)) / g.spacing()).round();
        if j >= 0.0 && (j as usize) < self.values.len() && g.coord(j as usize) == x {
            return self.values[j as usize];
        }
        let e = g.element_of(x);
        let first = e * g.p;
        let (xl, _) = g.element_bounds(e);
        let xi = (x - xl) / g.h;
        (0..=g.p)
            .map(|l| self.values[first + l] * lagrange_local(g.p, l, xi))
            .sum()
    }

    /// Writes `x,u` rows for every node at 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,u")?;
        for (x, u) in self.grid.coords.iter().zip(self.values.iter()) {
            writeln!(w, "{x:.16e},{u:.16e}")?;
        }
        Ok(())
    }
}
